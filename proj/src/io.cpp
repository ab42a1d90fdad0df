#include "nlosc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "nlosc/model.hpp"

namespace nlosc::io {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(std::ostream& out, const std::vector<Sample>& samples) {
    out << "t,x,xdot,E\n";
    for (const Sample& s : samples) {
        out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.xdot) << ','
            << format_double(s.E) << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    for (std::size_t c = 0; c < header.size(); ++c) {
        out << (c ? "," : "") << header[c];
    }
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << (c ? "," : "") << format_double(columns[c][r]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

namespace {

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw DomainError("malformed " + std::string(what) + " '" + std::string(text) + "' in grid spec");
    }
    return v;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
    GridSpec g;
    const auto first = text.find(':');
    std::string_view count = text;
    if (first != std::string_view::npos) {
        const auto second = text.find(':', first + 1);
        if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
            throw DomainError("grid spec must be N or lo:hi:N, got '" + std::string(text) + "'");
        }
        g.lo = parse_number(text.substr(0, first), "lower bound");
        g.hi = parse_number(text.substr(first + 1, second - first - 1), "upper bound");
        count = text.substr(second + 1);
        if (!(*g.hi > *g.lo)) {
            throw DomainError("grid spec needs lo < hi");
        }
    }
    const double n = parse_number(count, "point count");
    if (n < 1 || n != std::floor(n) || n > 1e8) {
        throw DomainError("grid point count must be a positive integer");
    }
    g.n = static_cast<std::size_t>(n);
    return g;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> xs(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = lo + step * static_cast<double>(i);
    }
    xs.back() = hi;
    return xs;
}

}  // namespace nlosc::io
