// nlosc: classify energies, produce trajectories, cross-verify producers and
// emit the reference potential curves.
//
// Exit codes: 0 success/pass, 1 invalid input, 2 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlosc/harness.hpp"
#include "nlosc/io.hpp"
#include "nlosc/potential.hpp"

namespace {

using nlohmann::json;
using namespace nlosc;

constexpr int kExitInvalid = 1;
constexpr int kExitVerification = 2;

// Values collected from flags; unset entries fall back to the config file and
// then to built-in defaults.
struct Flags {
    std::string kind;
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double energy = 0.0;
    std::string producer;
    double t_end = 0.0;
    std::string grid;
    std::string out;
    std::string manifest;
    std::string config;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    double x0 = 0.0;
    std::string direction;
    std::string branch;
    int figure = 0;
    bool quadrature = false;
    double max_x_error = 0.0;
    double max_drift = 0.0;
    double max_residual = 0.0;
    int threads = 0;
};

class Settings {
public:
    Settings(const CLI::App& cmd, json config) : cmd_(cmd), config_(std::move(config)) {}

    // flag > config file > nullopt
    template <typename T>
    std::optional<T> get(const std::string& flag, const std::string& key, const T& flag_value) const {
        if (cmd_.count(flag) > 0) {
            return flag_value;
        }
        if (config_.contains(key)) {
            return config_.at(key).get<T>();
        }
        return std::nullopt;
    }

    template <typename T>
    T require(const std::string& flag, const std::string& key, const T& flag_value) const {
        auto v = get<T>(flag, key, flag_value);
        if (!v) {
            throw DomainError("missing " + flag + " (flag or config key '" + key + "')");
        }
        return *v;
    }

private:
    const CLI::App& cmd_;
    json config_;
};

json load_config(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("NLOSC_CONFIG")) {
            path = env;
        }
    }
    if (path.empty()) {
        return json::object();
    }
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open config file '" + path + "'");
    }
    try {
        json j = json::parse(in);
        if (!j.is_object()) {
            throw DomainError("config file '" + path + "' must hold a JSON object");
        }
        return j;
    } catch (const json::exception& e) {
        throw DomainError("config file '" + path + "': " + e.what());
    }
}

ModelParams read_params(const Settings& s, const Flags& f) {
    ModelParams p;
    p.kind = parse_kind(s.require<std::string>("--kind", "kind", f.kind));
    p.alpha = s.require<double>("--alpha", "alpha", f.alpha);
    p.beta = s.get<double>("--beta", "beta", f.beta).value_or(0.0);
    p.lambda = s.require<double>("--lambda", "lambda", f.lambda);
    return p;
}

Direction read_direction(const Settings& s, const Flags& f) {
    const std::string d = s.get<std::string>("--direction", "direction", f.direction).value_or("forward");
    if (d == "forward" || d == "+" || d == "+1" || d == "1") {
        return Direction::Forward;
    }
    if (d == "backward" || d == "-" || d == "-1") {
        return Direction::Backward;
    }
    throw DomainError("direction must be forward or backward");
}

BranchSide read_branch(const Settings& s, const Flags& f) {
    const std::string b = s.get<std::string>("--branch", "branch", f.branch).value_or("either");
    if (b == "left") {
        return BranchSide::Left;
    }
    if (b == "right") {
        return BranchSide::Right;
    }
    if (b == "either") {
        return BranchSide::Either;
    }
    throw DomainError("branch must be left, right or either");
}

// One thread runs the serial path; more fan the batch kernels out.
kernels::Exec read_exec(const Settings& s, const Flags& f) {
    const int n = s.get<int>("--threads", "threads", f.threads).value_or(1);
    if (n == 1) {
        return kernels::Exec::Serial;
    }
    kernels::set_max_threads(n);
    return kernels::Exec::Parallel;
}

harness::SolveOptions read_solve_options(const Settings& s, const Flags& f, harness::SolveOptions o = {}) {
    o.x0 = s.get<double>("--x0", "x0", f.x0);
    o.direction = read_direction(s, f);
    o.branch = read_branch(s, f);
    o.ode.rel_tol = s.get<double>("--rel-tol", "rel_tol", f.rel_tol).value_or(o.ode.rel_tol);
    o.ode.abs_tol = s.get<double>("--abs-tol", "abs_tol", f.abs_tol).value_or(o.ode.abs_tol);
    o.force_quadrature = s.get<bool>("--quadrature", "quadrature", f.quadrature).value_or(false);
    o.exec = read_exec(s, f);
    return o;
}

std::vector<double> time_grid(const Settings& s, const Flags& f, const ModelParams& params, double energy,
                              std::size_t default_n) {
    const std::string grid = s.get<std::string>("--grid", "grid", f.grid).value_or(std::to_string(default_n));
    const io::GridSpec g = io::parse_grid(grid);
    if (g.lo) {
        if (*g.lo < 0.0) {
            throw DomainError("time grid must start at t >= 0");
        }
        return io::linspace(*g.lo, *g.hi, g.n);
    }
    const double t_end = s.get<double>("--t-end", "t_end", f.t_end).value_or(harness::default_t_end(params, energy));
    if (!(t_end > 0.0)) {
        throw DomainError("--t-end must be positive");
    }
    return io::linspace(0.0, t_end, g.n);
}

// Writes `text` to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write '" + out_path + "'");
    }
    out << text;
}

// Manifest goes to --manifest, else <out>.json, else stderr.
void emit_manifest(const Flags& f, const json& manifest) {
    std::ostringstream ss;
    io::write_json(ss, manifest);
    std::string path = f.manifest;
    if (path.empty() && !f.out.empty()) {
        path = f.out + ".json";
    }
    if (path.empty()) {
        std::cerr << ss.str();
        return;
    }
    emit(path, ss.str());
}

int run_classify(const CLI::App& cmd, const Flags& f) {
    const Settings s(cmd, load_config(f.config));
    const ModelParams p = read_params(s, f);
    const PositionDomain dom = validate(p);
    const double energy = s.require<double>("--energy", "energy", f.energy);
    const json j = {{"params", p},
                    {"domain", {io::format_double(dom.lower), io::format_double(dom.upper)}},
                    {"shape", shape(p)},
                    {"regime", classify_energy(p, energy)}};
    std::ostringstream ss;
    io::write_json(ss, j);
    emit(f.out, ss.str());
    return 0;
}

int run_solve(const CLI::App& cmd, const Flags& f) {
    const Settings s(cmd, load_config(f.config));
    const ModelParams p = read_params(s, f);
    validate(p);
    const double energy = s.require<double>("--energy", "energy", f.energy);
    const std::string producer_name =
        s.get<std::string>("--producer", "producer", f.producer)
            .value_or(std::string(harness::to_string(harness::analytic_producer(p))));
    const harness::Producer producer = harness::parse_producer(producer_name);
    const harness::SolveOptions opts = read_solve_options(s, f);
    const std::vector<double> times = time_grid(s, f, p, energy, 201);
    const harness::SolveResult res = harness::solve(p, energy, producer, times, opts);

    std::ostringstream csv;
    io::write_trajectory_csv(csv, res.samples);
    emit(f.out, csv.str());
    emit_manifest(f, {{"command", "solve"},
                      {"params", p},
                      {"energy", energy},
                      {"producer", producer_name},
                      {"tolerances", {{"rel_tol", opts.ode.rel_tol}, {"abs_tol", opts.ode.abs_tol}}},
                      {"s0", {{"t", res.s0.t}, {"x", res.s0.x}, {"xdot", res.s0.xdot}}},
                      {"samples", times.size()},
                      {"t_end", times.empty() ? 0.0 : times.back()},
                      {"info", res.info}});
    return 0;
}

int run_compare(const CLI::App& cmd, const Flags& f) {
    const Settings s(cmd, load_config(f.config));
    const ModelParams p = read_params(s, f);
    validate(p);
    const double energy = s.require<double>("--energy", "energy", f.energy);
    const harness::SolveOptions opts = read_solve_options(s, f, harness::compare_options());
    harness::Thresholds th;
    th.x_error = s.get<double>("--max-x-error", "max_x_error", f.max_x_error).value_or(th.x_error);
    th.energy_drift = s.get<double>("--max-drift", "max_drift", f.max_drift).value_or(th.energy_drift);
    th.residual = s.get<double>("--max-residual", "max_residual", f.max_residual).value_or(th.residual);

    const EnergyRegime regime = classify_energy(p, energy);
    std::vector<double> times;
    if (regime.row != RegimeRow::BelowMinimum && regime.row != RegimeRow::Equilibrium) {
        times = time_grid(s, f, p, energy, 501);
    }
    const harness::ComparisonReport rep = harness::compare(p, energy, times, opts, th);
    std::ostringstream ss;
    io::write_json(ss, rep);
    emit(f.out, ss.str());
    return rep.pass ? 0 : kExitVerification;
}

int run_figures(const CLI::App& cmd, const Flags& f) {
    const Settings s(cmd, load_config(f.config));
    const int id = s.require<int>("--figure", "figure", f.figure);
    const harness::FigureSpec spec = harness::figure_spec(id);
    const std::string grid = s.get<std::string>("--grid", "grid", f.grid).value_or("397");
    const io::GridSpec g = io::parse_grid(grid);
    const std::vector<double> xs = io::linspace(g.lo.value_or(spec.x_lo), g.hi.value_or(spec.x_hi), g.n);
    const harness::FigureData fd = harness::figure_data(id, xs, read_exec(s, f));

    std::ostringstream csv;
    io::write_csv(csv, {"x", "V", "V_beta0"}, {fd.xs, fd.V_solid, fd.V_dashed});
    emit(f.out, csv.str());
    emit_manifest(f, {{"command", "figures"},
                      {"figure", id},
                      {"title", spec.title},
                      {"solid", {{"params", spec.solid}, {"landmarks", fd.solid}}},
                      {"dashed", {{"params", spec.dashed}, {"landmarks", fd.dashed}}},
                      {"grid", {{"lo", xs.front()}, {"hi", xs.back()}, {"n", xs.size()}}}});
    return 0;
}

void add_model_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--kind", f.kind, "original, g1 or g2");
    cmd->add_option("--alpha", f.alpha, "alpha > 0");
    cmd->add_option("--beta", f.beta, "beta >= 0 (default 0)");
    cmd->add_option("--lambda", f.lambda, "lambda != 0");
    cmd->add_option("--energy", f.energy, "total energy E");
}

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--out", f.out, "output file (default stdout)");
    cmd->add_option("--config", f.config, "JSON config file (default $NLOSC_CONFIG)");
}

void add_threads_flag(CLI::App* cmd, Flags& f) {
    cmd->add_option("--threads", f.threads, "worker threads for batch evaluation (default 1)");
}

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--t-end", f.t_end, "end time (default: 5 periods; escapes stop at 4 e-folding times or 10-fold growth of |x|)");
    cmd->add_option("--grid", f.grid, "time grid: N or lo:hi:N");
    cmd->add_option("--rel-tol", f.rel_tol, "ODE relative tolerance (default 1e-10, compare 1e-12)");
    cmd->add_option("--abs-tol", f.abs_tol, "ODE absolute tolerance (default 1e-12, compare 1e-14)");
    cmd->add_option("--x0", f.x0, "start position (default: left turning point or x_min)");
    cmd->add_option("--direction", f.direction, "sign of xdot at t = 0: forward or backward");
    cmd->add_option("--branch", f.branch, "barrier side for cosh/exp orbits: left, right or either");
    cmd->add_flag("--quadrature", f.quadrature, "force the quadrature form of the implicit producer");
    add_threads_flag(cmd, f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form, implicit and numerical solutions of the Mathews-Lakshmanan oscillator family"};
    app.require_subcommand(1);
    Flags f;

    auto* classify = app.add_subcommand("classify", "energy regime, potential shape and constants as JSON");
    add_model_flags(classify, f);
    add_common_flags(classify, f);

    auto* solve = app.add_subcommand("solve", "trajectory CSV t,x,xdot,E from one producer");
    add_model_flags(solve, f);
    add_common_flags(solve, f);
    add_run_flags(solve, f);
    solve->add_option("--producer", f.producer, "closed, implicit or ode (default: analytic producer of the kind)");
    solve->add_option("--manifest", f.manifest, "run manifest path (default <out>.json, or stderr)");

    auto* compare = app.add_subcommand("compare", "cross-verify the analytic producer against the ODE integrator");
    add_model_flags(compare, f);
    add_common_flags(compare, f);
    add_run_flags(compare, f);
    compare->add_option("--max-x-error", f.max_x_error, "threshold on max |x_analytic - x_ode| (default 1e-6)");
    compare->add_option("--max-drift", f.max_drift, "threshold on relative energy drift (default 1e-8)");
    compare->add_option("--max-residual", f.max_residual, "threshold on the residual metric (default 1e-9)");

    auto* figures = app.add_subcommand("figures", "potential curves V (beta != 0) and V_beta0 of figure 1-4");
    add_common_flags(figures, f);
    figures->add_option("--figure", f.figure, "figure id 1-4");
    add_threads_flag(figures, f);
    figures->add_option("--grid", f.grid, "x grid: N or lo:hi:N (default: 397 points on the figure window)");
    figures->add_option("--manifest", f.manifest, "landmark manifest path (default <out>.json, or stderr)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*classify) {
            return run_classify(*classify, f);
        }
        if (*solve) {
            return run_solve(*solve, f);
        }
        if (*compare) {
            return run_compare(*compare, f);
        }
        return run_figures(*figures, f);
    } catch (const nlosc::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerification;
    } catch (const nlosc::IntegrationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerification;
    } catch (const nlosc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad config value: " << e.what() << '\n';
        return kExitInvalid;
    }
}
