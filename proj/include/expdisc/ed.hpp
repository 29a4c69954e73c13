// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/bisection.hpp"
#include "expdisc/dataset.hpp"
#include "expdisc/matrix.hpp"
#include "expdisc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace expdisc {

/// Difference-constraint graph of the e-ED inequalities at fixed (e, delta):
///
///   u_s <= u_t + delta^{-t} * rho_t'(c_s/e - c_t)   for all t != s
///
/// Edge t -> s carries that right-hand slack as its weight. `magnitude`
/// holds delta^{-t} * (rho_t'c_s/e + rho_t'c_t), the scale of the terms
/// cancelled inside the weight, which sets the rounding tolerance.
struct ConstraintGraph {
    Matrix<double> weight;
    Matrix<double> magnitude;
    double efficiency = 1.0;
    double delta = 1.0;

    std::size_t num_nodes() const noexcept { return weight.rows(); }
};

inline ConstraintGraph build_constraint_graph(const DeflatedPanel& panel, double e, double delta) {
    require_efficiency(e);
    require_discount_factor(delta);
    const std::size_t n = panel.num_periods();
    ConstraintGraph g{Matrix<double>(n, n, 0.0), Matrix<double>(n, n, 0.0), e, delta};
    for (std::size_t t = 0; t < n; ++t) {
        const double scale = std::pow(delta, -static_cast<double>(t));
        const double own = panel.cost(t, t);
        for (std::size_t s = 0; s < n; ++s) {
            if (s == t) continue;
            const double other = panel.cost(t, s) / e;
            const double w = scale * (other - own);
            const double m = scale * (other + own);
            if (!std::isfinite(w) || !std::isfinite(m))
                throw ValidationError("non-finite constraint weight", panel.household_id(),
                                      std::to_string(t));
            g.weight(t, s) = w;
            g.magnitude(t, s) = m;
        }
    }
    return g;
}

/// Utility numbers u_0..u_T satisfying every constraint of the graph they
/// were computed from. Defined up to a common additive constant.
struct FeasibilityWitness {
    std::vector<double> utilities;
    double delta = 1.0;
    double efficiency = 1.0;
};

struct FeasibilityResult {
    bool feasible = false;
    std::optional<FeasibilityWitness> witness;

    explicit operator bool() const noexcept { return feasible; }
};

/// All-pairs shortest paths with negative-cycle detection.
///
/// Min-plus Floyd-Warshall over the constraint graph. A diagonal entry
/// below -kCycleRelTol * (1 + magnitude of that cycle) is a negative cycle;
/// diagonal entries that dip below zero by less are reset to zero so
/// rounding noise on zero-weight cycles cannot compound.
/// Returns std::nullopt when a negative cycle exists.
inline std::optional<Matrix<double>> shortest_paths(const ConstraintGraph& g) {
    const std::size_t n = g.num_nodes();
    Matrix<double> dist = g.weight;
    Matrix<double> mag = g.magnitude;
    for (std::size_t i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        mag(i, i) = 0.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = dist(i, k);
            const double mik = mag(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                const double via = dik + dist(k, j);
                if (via < dist(i, j)) {
                    dist(i, j) = via;
                    mag(i, j) = mik + mag(k, j);
                }
            }
            if (dist(i, i) < 0.0) {
                if (is_negative_sum(dist(i, i), mag(i, i))) return std::nullopt;
                dist(i, i) = 0.0;
                mag(i, i) = 0.0;
            }
        }
    }
    return dist;
}

/// Potentials from a virtual source joined to every node by a zero-weight
/// edge: u_s = min(0, min_t dist(t, s)).
inline std::vector<double> potentials_from(const Matrix<double>& dist) {
    const std::size_t n = dist.rows();
    std::vector<double> u(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) u[s] = std::min(u[s], dist(t, s));
    return u;
}

inline FeasibilityResult ed_feasible(const ConstraintGraph& g, bool want_witness = true) {
    auto dist = shortest_paths(g);
    if (!dist) return {};
    FeasibilityResult out{true, std::nullopt};
    if (want_witness) out.witness = FeasibilityWitness{potentials_from(*dist), g.delta, g.efficiency};
    return out;
}

/// Decides whether numbers u_t exist satisfying the e-ED inequalities at the
/// given (e, delta), and returns them when they do.
inline FeasibilityResult ed_feasible(const DeflatedPanel& panel, double e, double delta,
                                     bool want_witness = true) {
    return ed_feasible(build_constraint_graph(panel, e, delta), want_witness);
}

/// Checks u_s <= u_t + w(t,s) for every ordered pair, allowing
/// kWitnessRelTol * (1 + |rhs| + largest edge magnitude) of slack.
inline bool verify_witness(const DeflatedPanel& panel, const FeasibilityWitness& witness) {
    const ConstraintGraph g = build_constraint_graph(panel, witness.efficiency, witness.delta);
    const std::size_t n = g.num_nodes();
    if (witness.utilities.size() != n) return false;
    double scale = 0.0;
    for (double m : g.magnitude.values()) scale = std::max(scale, std::abs(m));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s) {
            if (s == t) continue;
            const double rhs = witness.utilities[t] + g.weight(t, s);
            if (witness.utilities[s] > rhs + kWitnessRelTol * (1.0 + std::abs(rhs) + scale))
                return false;
        }
    return true;
}

struct EeiResult {
    double eei = 1.0;         ///< certified-feasible efficiency level
    double best_delta = 1.0;  ///< a grid discount factor feasible at `eei`
    BracketResult bracket;
};

/// First grid discount factor at which the e-ED system is feasible.
inline std::optional<double> find_feasible_delta(const DeflatedPanel& panel, double e,
                                                 const std::vector<double>& grid) {
    for (double delta : grid)
        if (ed_feasible(panel, e, delta, false)) return delta;
    return std::nullopt;
}

/// Exponential efficiency index: bisection on e, where e is accepted when
/// some discount factor on the grid {step, 2 step, ..., 1} admits a solution.
inline EeiResult compute_eei(const DeflatedPanel& panel, double delta_step = kDefaultDeltaStep,
                             double tol = kDefaultEfficiencyTol) {
    require_positive_tol(tol);
    const std::vector<double> grid = delta_grid(delta_step);
    double last_delta = std::numeric_limits<double>::quiet_NaN();
    EeiResult out;
    out.bracket = largest_feasible(
        [&](double e) {
            const auto delta = find_feasible_delta(panel, e, grid);
            if (delta) last_delta = *delta;
            return delta.has_value();
        },
        tol);
    out.eei = out.bracket.feasible;
    out.best_delta = last_delta;
    return out;
}

/// Discount factors on a grid at which the e-ED system is feasible.
struct IdentifiedSet {
    double grid_step = kDefaultBoundsStep;
    double efficiency = 1.0;
    std::vector<double> grid;
    std::vector<char> feasible_mask;
    bool empty = true;
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
    double midpoint = std::numeric_limits<double>::quiet_NaN();
    bool contiguous = true;  ///< no infeasible grid point between lower and upper

    double width() const noexcept { return empty ? 0.0 : upper - lower; }
    std::size_t count() const noexcept {
        return static_cast<std::size_t>(std::count(feasible_mask.begin(), feasible_mask.end(), 1));
    }
    bool contains(double delta) const noexcept { return !empty && lower <= delta && delta <= upper; }
};

inline IdentifiedSet identified_set(const DeflatedPanel& panel, double e,
                                    double grid_step = kDefaultBoundsStep) {
    require_efficiency(e);
    IdentifiedSet set;
    set.grid_step = grid_step;
    set.efficiency = e;
    set.grid = delta_grid(grid_step);
    set.feasible_mask.assign(set.grid.size(), 0);
    std::optional<std::size_t> first;
    std::size_t last = 0;
    for (std::size_t i = 0; i < set.grid.size(); ++i) {
        if (!ed_feasible(panel, e, set.grid[i], false)) continue;
        set.feasible_mask[i] = 1;
        if (!first) first = i;
        last = i;
    }
    if (!first) return set;
    set.empty = false;
    set.lower = set.grid[*first];
    set.upper = set.grid[last];
    set.midpoint = 0.5 * (set.lower + set.upper);
    set.contiguous = std::all_of(set.feasible_mask.begin() + static_cast<std::ptrdiff_t>(*first),
                                 set.feasible_mask.begin() + static_cast<std::ptrdiff_t>(last) + 1,
                                 [](char f) { return f != 0; });
    return set;
}

}  // namespace expdisc
