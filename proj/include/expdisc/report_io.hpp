// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/csv.hpp"
#include "expdisc/indices.hpp"
#include "expdisc/numeric.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace expdisc {

namespace detail {

inline nlohmann::json nullable(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline double from_nullable(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace detail

/// One JSON object per household. The feasibility mask is a string of
/// '0'/'1' characters over the grid {step, 2 step, ..., 1}.
inline nlohmann::json to_json(const EfficiencyReport& r) {
    const auto& set = r.identified_set;
    std::string mask;
    mask.reserve(set.feasible_mask.size());
    for (char f : set.feasible_mask) mask.push_back(f ? '1' : '0');
    return {
        {"household", r.household_id},
        {"ccei", r.ccei},
        {"eei", r.eei},
        {"tcei", r.tcei},
        {"best_delta", detail::nullable(r.best_delta)},
        {"tol", r.tol},
        {"identified_set",
         {{"grid_step", set.grid_step},
          {"efficiency", set.efficiency},
          {"empty", set.empty},
          {"lower", detail::nullable(set.lower)},
          {"upper", detail::nullable(set.upper)},
          {"midpoint", detail::nullable(set.midpoint)},
          {"width", set.width()},
          {"contiguous", set.contiguous},
          {"feasible_count", set.count()},
          {"feasible_mask", mask}}},
    };
}

inline EfficiencyReport report_from_json(const nlohmann::json& j) {
    EfficiencyReport r;
    r.household_id = j.at("household").get<std::string>();
    r.ccei = j.at("ccei").get<double>();
    r.eei = j.at("eei").get<double>();
    r.tcei = j.at("tcei").get<double>();
    r.best_delta = detail::from_nullable(j.at("best_delta"));
    r.tol = j.at("tol").get<double>();
    const auto& s = j.at("identified_set");
    auto& set = r.identified_set;
    set.grid_step = s.at("grid_step").get<double>();
    set.efficiency = s.at("efficiency").get<double>();
    set.empty = s.at("empty").get<bool>();
    set.lower = detail::from_nullable(s.at("lower"));
    set.upper = detail::from_nullable(s.at("upper"));
    set.midpoint = detail::from_nullable(s.at("midpoint"));
    set.contiguous = s.at("contiguous").get<bool>();
    const auto mask = s.at("feasible_mask").get<std::string>();
    set.feasible_mask.clear();
    for (char ch : mask) set.feasible_mask.push_back(ch == '1' ? 1 : 0);
    set.grid = delta_grid(set.grid_step);
    return r;
}

inline void write_jsonl(std::ostream& out, std::span<const EfficiencyReport> reports) {
    for (const auto& r : reports) out << to_json(r).dump() << '\n';
}

inline std::vector<EfficiencyReport> read_jsonl(std::istream& in) {
    std::vector<EfficiencyReport> out;
    std::string line;
    while (std::getline(in, line)) {
        if (csv::trim(line).empty()) continue;
        out.push_back(report_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

/// Summary table: one row per statistic, columns n,min,max,mean,sd.
/// Rows: CCEI, TCEI, EEI, then identified-set width and midpoint.
inline void write_summary_csv(std::ostream& out, const PopulationSummary& s) {
    out << "statistic,n,min,max,mean,sd\n";
    auto row = [&](const char* name, const SummaryRow& r) {
        out << name << ',' << r.n << ',' << format_double(r.min) << ',' << format_double(r.max) << ','
            << format_double(r.mean) << ',' << format_double(r.sd) << '\n';
    };
    row("CCEI", s.ccei);
    row("TCEI", s.tcei);
    row("EEI", s.eei);
    row("IS_width", s.set_width);
    row("IS_midpoint", s.set_midpoint);
}

inline PopulationSummary read_summary_csv(std::istream& in) {
    const csv::Table table = csv::read_table(in, 6);
    PopulationSummary s;
    for (const auto& fields : table.rows) {
        SummaryRow r;
        r.n = static_cast<std::size_t>(parse_index(fields[1]).value_or(0));
        r.min = parse_double(fields[2]).value_or(0.0);
        r.max = parse_double(fields[3]).value_or(0.0);
        r.mean = parse_double(fields[4]).value_or(0.0);
        r.sd = parse_double(fields[5]).value_or(0.0);
        if (fields[0] == "CCEI") s.ccei = r;
        else if (fields[0] == "TCEI") s.tcei = r;
        else if (fields[0] == "EEI") s.eei = r;
        else if (fields[0] == "IS_width") s.set_width = r;
        else if (fields[0] == "IS_midpoint") s.set_midpoint = r;
        else throw ValidationError("unknown summary statistic '" + fields[0] + "'");
    }
    s.n = s.ccei.n;
    return s;
}

}  // namespace expdisc
