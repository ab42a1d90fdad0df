// Locale-independent CSV and JSON emission, and grid parsing.
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlosc/dynamics.hpp"

namespace nlosc::io {

/// Shortest-round-trip-safe text of a double with 17 significant digits,
/// always '.' as decimal separator. Non-finite values print as nan/inf/-inf.
std::string format_double(double v);

/// Header "t,x,xdot,E", one LF-terminated row per sample.
void write_trajectory_csv(std::ostream& out, const std::vector<Sample>& samples);

/// Generic numeric table with the given header.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Pretty JSON followed by a single LF.
void write_json(std::ostream& out, const nlohmann::json& j);

/// "N" (count only) or "lo:hi:N". Throws DomainError on malformed text.
struct GridSpec {
    std::optional<double> lo;
    std::optional<double> hi;
    std::size_t n = 0;
};

GridSpec parse_grid(std::string_view text);

/// n equally spaced points from lo to hi inclusive (n >= 2), or {lo} for n = 1.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace nlosc::io
