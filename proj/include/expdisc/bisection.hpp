// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/errors.hpp"
#include "expdisc/numeric.hpp"

#include <concepts>

namespace expdisc {

/// Result of a monotone feasibility search on (0,1].
struct BracketResult {
    double feasible = 1.0;    ///< largest level at which the predicate was verified true
    double infeasible = 1.0;  ///< smallest level verified false; equals `feasible` when 1 passes
    int evaluations = 0;
};

/// Largest level in (0,1] accepted by a predicate that is monotone (true at
/// e implies true at every e' < e).
///
/// Returns exactly 1 when the predicate accepts 1. Otherwise a lower bracket
/// is found by halving from 1/2, then the bracket is bisected until its width
/// is at most `tol`. The returned value is always a point at which the
/// predicate was evaluated and returned true.
template <std::predicate<double> Pred>
BracketResult largest_feasible(Pred&& accepts, double tol) {
    require_positive_tol(tol);
    BracketResult out;
    ++out.evaluations;
    if (accepts(1.0)) return out;

    double hi = 1.0;
    double lo = 0.5;
    for (;;) {
        ++out.evaluations;
        if (accepts(lo)) break;
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300) throw InternalError("no feasible efficiency level found above 1e-300");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ++out.evaluations;
        if (accepts(mid))
            lo = mid;
        else
            hi = mid;
    }
    out.feasible = lo;
    out.infeasible = hi;
    return out;
}

}  // namespace expdisc
