// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference checks for small panels. These deliberately share no
// code with garp.hpp / ed.hpp beyond the panel type and tolerance constant:
// they enumerate cycles and preference chains explicitly.

#include "expdisc/dataset.hpp"
#include "expdisc/errors.hpp"
#include "expdisc/numeric.hpp"

#include <cmath>
#include <vector>

namespace expdisc::oracle {

inline constexpr std::size_t kMaxPeriods = 8;

namespace detail {

inline void require_small(const DeflatedPanel& panel) {
    if (panel.num_periods() > kMaxPeriods)
        throw ParameterError("oracle enumeration supports at most " + std::to_string(kMaxPeriods) +
                             " periods, panel has " + std::to_string(panel.num_periods()));
}

// expenditure(t, s) = sum_l rho_{l,t} c_{l,s}
inline std::vector<std::vector<double>> expenditures(const DeflatedPanel& panel) {
    const std::size_t n = panel.num_periods();
    std::vector<std::vector<double>> x(n, std::vector<double>(n, 0.0));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s) {
            double sum = 0.0;
            for (std::size_t l = 0; l < panel.num_goods(); ++l)
                sum += panel.discounted_prices()(t, l) * panel.quantities()(s, l);
            x[t][s] = sum;
        }
    return x;
}

struct CycleSearch {
    const std::vector<std::vector<double>>& x;
    double e;
    double delta;
    std::size_t n;
    std::vector<std::size_t> path;
    std::vector<char> on_path;
    bool found_negative = false;

    // Sum of delta^{-t} rho_t'(c_next/e - c_t) around the cycle in `path`.
    void close_cycle() {
        double sum = 0.0;
        double magnitude = 0.0;
        for (std::size_t i = 0; i < path.size(); ++i) {
            const std::size_t t = path[i];
            const std::size_t next = path[(i + 1) % path.size()];
            const double scale = std::pow(delta, -static_cast<double>(t));
            sum += scale * (x[t][next] / e - x[t][t]);
            magnitude += scale * (x[t][next] / e + x[t][t]);
        }
        if (sum < -kCycleRelTol * (1.0 + magnitude)) found_negative = true;
    }

    // Cycles are enumerated once each, rooted at their smallest node.
    void extend(std::size_t root) {
        if (found_negative) return;
        if (path.size() >= 2) close_cycle();
        for (std::size_t v = root + 1; v < n && !found_negative; ++v) {
            if (on_path[v]) continue;
            on_path[v] = 1;
            path.push_back(v);
            extend(root);
            path.pop_back();
            on_path[v] = 0;
        }
    }
};

}  // namespace detail

/// True iff every simple cycle of the e-ED inequalities has a nonnegative sum.
inline bool oracle_ed_feasible(const DeflatedPanel& panel, double e, double delta) {
    detail::require_small(panel);
    require_efficiency(e);
    require_discount_factor(delta);
    const auto x = detail::expenditures(panel);
    const std::size_t n = panel.num_periods();
    detail::CycleSearch search{x, e, delta, n, {}, std::vector<char>(n, 0)};
    for (std::size_t root = 0; root < n && !search.found_negative; ++root) {
        search.path = {root};
        search.on_path.assign(n, 0);
        search.on_path[root] = 1;
        search.extend(root);
    }
    return !search.found_negative;
}

/// True iff no chain t_1 R t_2 R ... R t_m (R: e-deflated direct revealed
/// preference) ends with t_m strictly revealed preferred to t_1.
inline bool oracle_egarp(const DeflatedPanel& panel, double e) {
    detail::require_small(panel);
    require_efficiency(e);
    const auto x = detail::expenditures(panel);
    const std::size_t n = panel.num_periods();
    auto weak = [&](std::size_t t, std::size_t s) { return e * x[t][t] >= x[t][s]; };
    auto strict = [&](std::size_t t, std::size_t s) { return e * x[t][t] > x[t][s]; };

    std::vector<std::size_t> chain;
    std::vector<char> used(n, 0);
    bool violation = false;
    auto walk = [&](auto&& self) -> void {
        if (violation) return;
        if (strict(chain.back(), chain.front())) {
            violation = true;
            return;
        }
        for (std::size_t next = 0; next < n; ++next) {
            if (used[next] || !weak(chain.back(), next)) continue;
            used[next] = 1;
            chain.push_back(next);
            self(self);
            chain.pop_back();
            used[next] = 0;
        }
    };
    for (std::size_t start = 0; start < n && !violation; ++start) {
        chain = {start};
        used.assign(n, 0);
        used[start] = 1;
        walk(walk);
    }
    return !violation;
}

}  // namespace expdisc::oracle
