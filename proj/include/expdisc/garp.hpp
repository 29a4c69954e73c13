// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/bisection.hpp"
#include "expdisc/dataset.hpp"
#include "expdisc/matrix.hpp"
#include "expdisc/numeric.hpp"

#include <vector>

namespace expdisc {

/// Direct and strict revealed preference at efficiency e:
///   direct(t,s) iff e * rho_t'c_t >= rho_t'c_s
///   strict(t,s) iff e * rho_t'c_t >  rho_t'c_s
/// Ties count as weak, not strict, preference.
struct RevealedPreferenceRelation {
    Matrix<char> direct;
    Matrix<char> strict;
    double efficiency = 1.0;

    std::size_t size() const noexcept { return direct.rows(); }
};

inline RevealedPreferenceRelation build_relation(const DeflatedPanel& panel, double e) {
    require_efficiency(e);
    const std::size_t n = panel.num_periods();
    RevealedPreferenceRelation rel{Matrix<char>(n, n, 0), Matrix<char>(n, n, 0), e};
    for (std::size_t t = 0; t < n; ++t) {
        const double budget = e * panel.cost(t, t);
        for (std::size_t s = 0; s < n; ++s) {
            const double other = panel.cost(t, s);
            rel.direct(t, s) = budget >= other;
            rel.strict(t, s) = budget > other;
        }
    }
    return rel;
}

/// Reflexive-transitive closure of the direct relation (boolean Floyd-Warshall).
inline Matrix<char> transitive_closure(const Matrix<char>& direct) {
    const std::size_t n = direct.rows();
    Matrix<char> reach = direct;
    for (std::size_t i = 0; i < n; ++i) reach(i, i) = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach(i, k)) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (reach(k, j)) reach(i, j) = 1;
        }
    return reach;
}

/// e-GARP: no t, s with t revealed preferred to s (through the closure) while
/// s is strictly directly revealed preferred to t.
inline bool check_egarp(const RevealedPreferenceRelation& rel) {
    const Matrix<char> reach = transitive_closure(rel.direct);
    const std::size_t n = rel.size();
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s)
            if (reach(t, s) && rel.strict(s, t)) return false;
    return true;
}

inline bool check_egarp(const DeflatedPanel& panel, double e) {
    return check_egarp(build_relation(panel, e));
}

/// Bracket of the critical cost efficiency index. `feasible` passes e-GARP;
/// `infeasible` fails it (both equal 1 for GARP-consistent data).
inline BracketResult ccei_bracket(const DeflatedPanel& panel, double tol) {
    return largest_feasible([&](double e) { return check_egarp(panel, e); }, tol);
}

/// Critical cost efficiency index, certified feasible and within `tol` of the
/// largest e passing e-GARP.
inline double compute_ccei(const DeflatedPanel& panel, double tol = kDefaultEfficiencyTol) {
    return ccei_bracket(panel, tol).feasible;
}

}  // namespace expdisc
