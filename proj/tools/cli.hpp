// SPDX-License-Identifier: Apache-2.0
#pragma once

// Batch front end: `analyze`, `synth` and `verify` subcommands.
//
// Exit codes: 0 success, 1 invalid input or flags, 2 I/O failure,
// 3 (verify only) engine and oracle disagree.

#include "expdisc/expdisc.hpp"
#include "expdisc/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace expdisc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitMismatch = 3;

/// Carries a diagnostic and the exit code it maps to.
struct CliFailure {
    int code;
    std::string message;
};

struct RateOptions {
    std::string path;
    bool quarterly = false;
    std::size_t periods_per_quarter = 3;
    std::optional<double> annual_period_days;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{kExitIo, "cannot open '" + path + "' for reading"};
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw CliFailure{kExitIo, "error while reading '" + path + "'"};
    return buf.str();
}

inline std::vector<HouseholdPanel> read_panel_file(const std::string& path) {
    const std::string text = read_file(path);
    if (csv::trim(text).empty()) throw CliFailure{kExitInvalid, path + ": file is empty"};
    std::istringstream in(text);
    try {
        return load_panels(in);
    } catch (const ValidationError& e) {
        throw CliFailure{kExitInvalid, path + ": " + e.what()};
    }
}

inline std::optional<RateSeries> read_rates(const RateOptions& opts) {
    if (opts.path.empty()) return std::nullopt;
    const std::string text = read_file(opts.path);
    if (csv::trim(text).empty()) throw CliFailure{kExitInvalid, opts.path + ": file is empty"};
    std::istringstream in(text);
    try {
        RateSeries rates = load_rates(in);
        if (opts.quarterly || rates.frequency() == RateFrequency::quarterly_source)
            rates = interpolate_rates(rates.rates(), opts.periods_per_quarter);
        if (opts.annual_period_days) {
            std::vector<double> converted;
            converted.reserve(rates.size());
            for (double r : rates.rates())
                converted.push_back(annual_to_period_rate(r, *opts.annual_period_days));
            rates = RateSeries(std::move(converted), rates.frequency());
        }
        return rates;
    } catch (const ValidationError& e) {
        throw CliFailure{kExitInvalid, opts.path + ": " + e.what()};
    }
}

inline std::vector<DeflatedPanel> deflate_all(const std::vector<HouseholdPanel>& panels,
                                              const std::optional<RateSeries>& rates) {
    std::vector<DeflatedPanel> out;
    out.reserve(panels.size());
    for (const auto& p : panels) {
        try {
            out.push_back(deflate_prices(p, rates ? *rates : RateSeries::zeros(p.num_periods())));
        } catch (const ValidationError& e) {
            throw CliFailure{kExitInvalid, "household " + p.household_id() + ": " + e.what()};
        }
    }
    return out;
}

/// Runs `analyze_household` over all panels on `jobs` worker threads.
/// Output order follows the input order (panels arrive sorted by id).
inline std::vector<EfficiencyReport> analyze_all(const std::vector<DeflatedPanel>& panels,
                                                 const AnalysisConfig& config, unsigned jobs) {
    std::vector<EfficiencyReport> reports(panels.size());
    std::vector<std::exception_ptr> errors(panels.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < panels.size(); i = next++) {
            try {
                reports[i] = analyze_household(panels[i], config);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(panels.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return reports;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliFailure{kExitIo, "cannot open '" + path.string() + "' for writing"};
    out << text;
    out.flush();
    if (!out) throw CliFailure{kExitIo, "error while writing '" + path.string() + "'"};
}

struct AnalyzeOptions {
    std::string panel;
    RateOptions rates;
    AnalysisConfig config;
    std::string out_dir = ".";
    unsigned jobs = 1;
};

inline int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out) {
    const auto panels = read_panel_file(opts.panel);
    const auto rates = read_rates(opts.rates);
    const auto deflated = deflate_all(panels, rates);
    const auto reports = analyze_all(deflated, opts.config, opts.jobs);
    const PopulationSummary summary = summarize(reports);

    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw CliFailure{kExitIo, "cannot create output directory '" + opts.out_dir + "': " + ec.message()};
    const std::filesystem::path dir(opts.out_dir);

    std::ostringstream jsonl;
    write_jsonl(jsonl, reports);
    write_text(dir / "households.jsonl", jsonl.str());

    std::ostringstream table;
    write_summary_csv(table, summary);
    write_text(dir / "summary.csv", table.str());

    const nlohmann::json meta = {
        {"households", reports.size()},
        {"delta_step", opts.config.delta_step},
        {"bounds_step", opts.config.bounds_step},
        {"e_tol", opts.config.tol},
        {"sd_denominator", "population (n)"},
        {"identified_set_efficiency", "certified EEI"},
        {"rates", opts.rates.path.empty() ? nlohmann::json(nullptr) : nlohmann::json(opts.rates.path)},
        {"rates_interpolated", opts.rates.quarterly},
        {"periods_per_quarter", opts.rates.periods_per_quarter},
        {"annual_period_days", opts.rates.annual_period_days ? nlohmann::json(*opts.rates.annual_period_days)
                                                             : nlohmann::json(nullptr)},
    };
    write_text(dir / "metadata.json", meta.dump(2) + "\n");

    out << "analyzed " << reports.size() << " households\n" << table.str();
    return kExitOk;
}

struct SynthOptions {
    SynthConfig config;
    std::string out = "-";
    std::string truth;
};

inline int cmd_synth(const SynthOptions& opts, std::ostream& out) {
    std::vector<SyntheticHousehold> population;
    try {
        population = synthesize_population(opts.config);
    } catch (const ParameterError& e) {
        throw CliFailure{kExitInvalid, e.what()};
    }
    std::ostringstream csv;
    write_panel_header(csv);
    for (const auto& h : population)
        write_panel_rows(csv, h.panel.household_id(), h.panel.discounted_prices(), h.panel.quantities());
    if (opts.out == "-")
        out << csv.str();
    else
        write_text(opts.out, csv.str());

    if (!opts.truth.empty()) {
        std::ostringstream truth;
        truth << "household,delta_true\n";
        for (const auto& h : population)
            truth << h.panel.household_id() << ',' << format_double(h.delta_true) << '\n';
        write_text(opts.truth, truth.str());
    }
    return kExitOk;
}

struct VerifyOptions {
    std::string panel;
    RateOptions rates;
    std::vector<double> efficiencies{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0};
    std::vector<double> deltas{0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0};
};

inline int cmd_verify(const VerifyOptions& opts, std::ostream& out) {
    const auto panels = read_panel_file(opts.panel);
    const auto deflated = deflate_all(panels, read_rates(opts.rates));
    for (double e : opts.efficiencies)
        if (!(e > 0.0 && e <= 1.0)) throw CliFailure{kExitInvalid, "--e values must lie in (0,1]"};
    for (double d : opts.deltas)
        if (!(d > 0.0 && d <= 1.0)) throw CliFailure{kExitInvalid, "--delta values must lie in (0,1]"};

    std::size_t checks = 0;
    std::size_t mismatches = 0;
    for (const auto& p : deflated) {
        if (p.num_periods() > oracle::kMaxPeriods)
            throw CliFailure{kExitInvalid, "household " + p.household_id() + " has " +
                                               std::to_string(p.num_periods()) +
                                               " periods; verify supports at most " +
                                               std::to_string(oracle::kMaxPeriods)};
        for (double e : opts.efficiencies) {
            const bool garp = check_egarp(p, e);
            const bool garp_ref = oracle::oracle_egarp(p, e);
            ++checks;
            if (garp != garp_ref) {
                ++mismatches;
                out << "MISMATCH egarp household=" << p.household_id() << " e=" << format_double(e)
                    << " engine=" << garp << " oracle=" << garp_ref << '\n';
            }
            for (double d : opts.deltas) {
                const auto ed = ed_feasible(p, e, d);
                const bool ed_ref = oracle::oracle_ed_feasible(p, e, d);
                ++checks;
                if (ed.feasible != ed_ref) {
                    ++mismatches;
                    out << "MISMATCH ed household=" << p.household_id() << " e=" << format_double(e)
                        << " delta=" << format_double(d) << " engine=" << ed.feasible
                        << " oracle=" << ed_ref << '\n';
                }
                if (ed.witness && !verify_witness(p, *ed.witness)) {
                    ++mismatches;
                    out << "INVALID witness household=" << p.household_id() << " e=" << format_double(e)
                        << " delta=" << format_double(d) << '\n';
                }
            }
        }
    }
    out << "verified " << deflated.size() << " households, " << checks << " checks, " << mismatches
        << " disagreements\n";
    return mismatches == 0 ? kExitOk : kExitMismatch;
}

inline void add_rate_options(CLI::App* cmd, RateOptions& rates) {
    cmd->add_option("--rates", rates.path, "Rates CSV (period,rate or quarter,rate); zero rates if omitted");
    cmd->add_flag("--rates-quarterly", rates.quarterly, "Treat rates as quarterly anchors and interpolate");
    cmd->add_option("--periods-per-quarter", rates.periods_per_quarter, "Sub-periods per quarter")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--annual-period-days", rates.annual_period_days,
                    "Rates are annual; convert to periods of this many days as (1+r)^(days/365.25)-1")
        ->check(CLI::PositiveNumber);
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential-discounting rationality tests for consumption panels"};
    app.require_subcommand(1);

    AnalyzeOptions analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Compute CCEI, EEI, TCEI and discount-factor bounds");
    analyze_cmd->add_option("--panel", analyze.panel, "Panel CSV (household,period,good,price,quantity)")
        ->required();
    add_rate_options(analyze_cmd, analyze.rates);
    analyze_cmd->add_option("--delta-step", analyze.config.delta_step, "Discount-factor grid step inside the EEI search")
        ->capture_default_str();
    analyze_cmd->add_option("--bounds-step", analyze.config.bounds_step, "Discount-factor grid step for identified sets")
        ->capture_default_str();
    analyze_cmd->add_option("--e-tol", analyze.config.tol, "Bisection tolerance on efficiency indices")
        ->capture_default_str();
    analyze_cmd->add_option("--out-dir", analyze.out_dir, "Directory for households.jsonl, summary.csv, metadata.json")
        ->capture_default_str();
    analyze_cmd->add_option("--jobs", analyze.jobs, "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write a panel of synthetic exponential discounters");
    synth_cmd->add_option("--households", synth.config.households, "Number of households")->capture_default_str();
    synth_cmd->add_option("--periods", synth.config.periods, "Periods per household (T+1)")->capture_default_str();
    synth_cmd->add_option("--goods", synth.config.goods, "Goods per period")->capture_default_str();
    synth_cmd->add_option("--delta-min", synth.config.delta_min, "Lower end of the true discount factors")
        ->capture_default_str();
    synth_cmd->add_option("--delta-max", synth.config.delta_max, "Upper end of the true discount factors")
        ->capture_default_str();
    synth_cmd->add_option("--noise", synth.config.noise, "Log-uniform quantity noise scale in [0,1)")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.config.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "Output panel CSV ('-' for stdout)")->capture_default_str();
    synth_cmd->add_option("--truth", synth.truth, "Optional CSV of household,delta_true");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Cross-check the engines against brute-force enumeration");
    verify_cmd->add_option("--panel", verify.panel, "Panel CSV with at most 8 periods per household")->required();
    add_rate_options(verify_cmd, verify.rates);
    verify_cmd->add_option("--e", verify.efficiencies, "Efficiency levels to test")->capture_default_str();
    verify_cmd->add_option("--delta", verify.deltas, "Discount factors to test")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (*analyze_cmd) {
            if (analyze.jobs == 0) analyze.jobs = std::max(1u, std::thread::hardware_concurrency());
            return cmd_analyze(analyze, out);
        }
        if (*synth_cmd) return cmd_synth(synth, out);
        if (*verify_cmd) return cmd_verify(verify, out);
    } catch (const CliFailure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}

}  // namespace expdisc::cli
