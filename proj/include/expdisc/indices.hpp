// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/dataset.hpp"
#include "expdisc/ed.hpp"
#include "expdisc/errors.hpp"
#include "expdisc/garp.hpp"
#include "expdisc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace expdisc {

struct AnalysisConfig {
    double delta_step = kDefaultDeltaStep;   ///< grid used inside the EEI search
    double bounds_step = kDefaultBoundsStep; ///< grid used for the identified set
    double tol = kDefaultEfficiencyTol;      ///< bisection tolerance on e
};

struct EfficiencyReport {
    std::string household_id;
    double ccei = 1.0;
    double eei = 1.0;
    double tcei = 1.0;
    double best_delta = 1.0;
    double tol = kDefaultEfficiencyTol;
    IdentifiedSet identified_set;
};

/// Time-consistency index as EEI / CCEI.
///
/// A quotient above one is clamped to one when EEI exceeds CCEI by at most
/// 2 tol (bisection slack); beyond that it is an engine defect and throws.
inline double compute_tcei(double ccei, double eei, double tol = kDefaultEfficiencyTol) {
    require_efficiency(ccei);
    require_efficiency(eei);
    if (eei > ccei + 2.0 * tol)
        throw InternalError("EEI " + std::to_string(eei) + " exceeds CCEI " + std::to_string(ccei) +
                            " beyond the bisection slack");
    return std::min(1.0, eei / ccei);
}

inline EfficiencyReport analyze_household(const DeflatedPanel& panel, const AnalysisConfig& config = {}) {
    require_positive_tol(config.tol);
    require_grid_step(config.delta_step);
    require_grid_step(config.bounds_step);
    EfficiencyReport report;
    report.household_id = panel.household_id();
    report.tol = config.tol;
    report.ccei = compute_ccei(panel, config.tol);
    const EeiResult eei = compute_eei(panel, config.delta_step, config.tol);
    report.eei = eei.eei;
    report.best_delta = eei.best_delta;
    report.tcei = compute_tcei(report.ccei, report.eei, config.tol);
    report.identified_set = identified_set(panel, report.eei, config.bounds_step);
    return report;
}

/// min / max / mean / sd of one statistic. sd uses the population denominator n.
struct SummaryRow {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

/// Values are sorted before accumulation, so the result does not depend on
/// input order.
inline SummaryRow summarize_values(std::span<const double> input) {
    SummaryRow row;
    row.n = input.size();
    if (input.empty()) return row;
    std::vector<double> values(input.begin(), input.end());
    std::sort(values.begin(), values.end());
    row.min = values.front();
    row.max = values.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.sd = std::sqrt(ss / static_cast<double>(values.size()));
    // Guard the ordering against the last-bit rounding of the mean.
    row.mean = std::clamp(row.mean, row.min, row.max);
    return row;
}

struct PopulationSummary {
    std::size_t n = 0;
    SummaryRow ccei;
    SummaryRow tcei;
    SummaryRow eei;
    SummaryRow set_width;     ///< over households with a nonempty identified set
    SummaryRow set_midpoint;  ///< same households as set_width
};

inline PopulationSummary summarize(std::span<const EfficiencyReport> reports) {
    if (reports.empty()) throw ParameterError("cannot summarize an empty list of reports");
    std::vector<double> ccei, tcei, eei, width, mid;
    for (const auto& r : reports) {
        ccei.push_back(r.ccei);
        tcei.push_back(r.tcei);
        eei.push_back(r.eei);
        if (!r.identified_set.empty) {
            width.push_back(r.identified_set.width());
            mid.push_back(r.identified_set.midpoint);
        }
    }
    PopulationSummary s;
    s.n = reports.size();
    s.ccei = summarize_values(ccei);
    s.tcei = summarize_values(tcei);
    s.eei = summarize_values(eei);
    s.set_width = summarize_values(width);
    s.set_midpoint = summarize_values(mid);
    return s;
}

}  // namespace expdisc
