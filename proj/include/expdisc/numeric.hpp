// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/errors.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace expdisc {

/// Relative slack used to decide whether a cycle sum is negative. A cycle
/// counts as negative only when its sum is below -kCycleRelTol * (1 + M),
/// where M is the total magnitude of the terms that were added and
/// subtracted along the cycle.
inline constexpr double kCycleRelTol = 1e-9;

/// Relative slack when checking a single witness inequality.
inline constexpr double kWitnessRelTol = 1e-9;

/// Default bisection tolerance on efficiency indices (2^-10).
inline constexpr double kDefaultEfficiencyTol = 0.0009765625;
inline constexpr double kDefaultDeltaStep = 0.01;
inline constexpr double kDefaultBoundsStep = 0.001;

inline bool is_negative_sum(double sum, double magnitude) {
    return sum < -kCycleRelTol * (1.0 + magnitude);
}

inline void require_efficiency(double e) {
    if (!(e > 0.0 && e <= 1.0))
        throw ParameterError("efficiency must lie in (0,1], got " + std::to_string(e));
}

inline void require_discount_factor(double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw ParameterError("discount factor must lie in (0,1], got " +
                             std::to_string(delta));
}

inline void require_grid_step(double step) {
    if (!(step > 0.0 && step < 1.0))
        throw ParameterError("grid step must lie in (0,1), got " + std::to_string(step));
}

inline void require_positive_tol(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw ParameterError("tolerance must be positive and finite, got " +
                             std::to_string(tol));
}

/// The discount-factor grid {step, 2*step, ..., 1}.
///
/// When 1/step is (numerically) an integer N the points are k/N, so grids
/// with nested steps share their common points bit for bit. Otherwise the
/// multiples of step below one are followed by 1.0.
inline std::vector<double> delta_grid(double step) {
    require_grid_step(step);
    std::vector<double> grid;
    const double inv = 1.0 / step;
    const double n = std::round(inv);
    if (std::abs(n * step - 1.0) < 1e-9) {
        const auto count = static_cast<std::size_t>(n);
        grid.reserve(count);
        for (std::size_t k = 1; k <= count; ++k)
            grid.push_back(static_cast<double>(k) / n);
        grid.back() = 1.0;
        return grid;
    }
    for (std::size_t k = 1;; ++k) {
        const double d = static_cast<double>(k) * step;
        if (d >= 1.0 - 1e-12) break;
        grid.push_back(d);
    }
    grid.push_back(1.0);
    return grid;
}

/// Shortest decimal text that parses back to the same double. Locale free.
inline std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw InternalError("to_chars failed");
    return {buf, end};
}

/// Locale-independent parse of a finite double; the whole field must be consumed.
inline std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

inline std::optional<long long> parse_index(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0)
        return std::nullopt;
    return value;
}

}  // namespace expdisc
