// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/csv.hpp"
#include "expdisc/errors.hpp"
#include "expdisc/matrix.hpp"
#include "expdisc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace expdisc {

namespace detail {

inline void validate_grid(const std::string& id, const Matrix<double>& prices,
                          const Matrix<double>& quantities, const char* price_name) {
    if (prices.rows() == 0 || prices.cols() == 0)
        throw ValidationError("panel must have at least one period and one good", id);
    if (prices.rows() != quantities.rows() || prices.cols() != quantities.cols())
        throw ValidationError("price and quantity matrices differ in shape", id);
    for (std::size_t t = 0; t < prices.rows(); ++t) {
        for (std::size_t l = 0; l < prices.cols(); ++l) {
            const double p = prices(t, l);
            const double c = quantities(t, l);
            if (!std::isfinite(p) || !(p > 0.0))
                throw ValidationError(std::string(price_name) + " must be finite and strictly positive",
                                      id, std::to_string(t), std::to_string(l));
            if (!std::isfinite(c) || c < 0.0)
                throw ValidationError("quantity must be finite and nonnegative", id,
                                      std::to_string(t), std::to_string(l));
        }
    }
}

}  // namespace detail

/// One consumer's spot prices and quantities, periods x goods.
class HouseholdPanel {
public:
    HouseholdPanel(std::string household_id, Matrix<double> spot_prices,
                   Matrix<double> quantities)
        : id_(std::move(household_id)),
          prices_(std::move(spot_prices)),
          quantities_(std::move(quantities)) {
        detail::validate_grid(id_, prices_, quantities_, "spot price");
    }

    const std::string& household_id() const noexcept { return id_; }
    std::size_t num_periods() const noexcept { return prices_.rows(); }
    std::size_t num_goods() const noexcept { return prices_.cols(); }
    const Matrix<double>& spot_prices() const noexcept { return prices_; }
    const Matrix<double>& quantities() const noexcept { return quantities_; }

    friend bool operator==(const HouseholdPanel&, const HouseholdPanel&) = default;

private:
    std::string id_;
    Matrix<double> prices_;
    Matrix<double> quantities_;
};

/// Discounted prices rho and quantities; the input to every rationality test.
class DeflatedPanel {
public:
    DeflatedPanel(std::string household_id, Matrix<double> discounted_prices,
                  Matrix<double> quantities)
        : id_(std::move(household_id)),
          prices_(std::move(discounted_prices)),
          quantities_(std::move(quantities)) {
        detail::validate_grid(id_, prices_, quantities_, "discounted price");
    }

    const std::string& household_id() const noexcept { return id_; }
    std::size_t num_periods() const noexcept { return prices_.rows(); }
    std::size_t num_goods() const noexcept { return prices_.cols(); }
    const Matrix<double>& discounted_prices() const noexcept { return prices_; }
    const Matrix<double>& quantities() const noexcept { return quantities_; }

    std::span<const double> prices(std::size_t t) const { return prices_.row(t); }
    std::span<const double> bundle(std::size_t t) const { return quantities_.row(t); }

    /// Cost of period-s bundle at period-t discounted prices.
    double cost(std::size_t t, std::size_t s) const { return dot(prices_.row(t), quantities_.row(s)); }

    friend bool operator==(const DeflatedPanel&, const DeflatedPanel&) = default;

private:
    std::string id_;
    Matrix<double> prices_;
    Matrix<double> quantities_;
};

enum class RateFrequency { per_period, quarterly_source };

/// Per-period interest rates r_0, r_1, ...
class RateSeries {
public:
    explicit RateSeries(std::vector<double> rates,
                        RateFrequency frequency = RateFrequency::per_period)
        : rates_(std::move(rates)), frequency_(frequency) {
        for (std::size_t i = 0; i < rates_.size(); ++i) {
            if (!std::isfinite(rates_[i]) || !(rates_[i] > -1.0))
                throw ValidationError("interest rate at position " + std::to_string(i) +
                                      " must be finite and greater than -1");
        }
    }

    const std::vector<double>& rates() const noexcept { return rates_; }
    std::size_t size() const noexcept { return rates_.size(); }
    RateFrequency frequency() const noexcept { return frequency_; }

    /// All-zero series of the given length (no deflation).
    static RateSeries zeros(std::size_t length) { return RateSeries(std::vector<double>(length, 0.0)); }

private:
    std::vector<double> rates_;
    RateFrequency frequency_;
};

/// Per-period rate equivalent to an annual rate under compounding, for
/// periods of `period_days` days: (1+annual)^(period_days/365.25) - 1.
inline double annual_to_period_rate(double annual_rate, double period_days) {
    if (!(annual_rate > -1.0) || !std::isfinite(annual_rate))
        throw ValidationError("annual rate must be finite and greater than -1");
    if (!(period_days > 0.0))
        throw ParameterError("period length in days must be positive");
    return std::pow(1.0 + annual_rate, period_days / 365.25) - 1.0;
}

/// Linear interpolation of quarterly anchors onto `periods_per_quarter`
/// sub-periods. Anchor k lands at position k * periods_per_quarter.
inline RateSeries interpolate_rates(std::span<const double> quarterly_rates,
                                    std::size_t periods_per_quarter) {
    if (quarterly_rates.empty()) throw ValidationError("quarterly rate series is empty");
    if (periods_per_quarter < 1) throw ParameterError("periods_per_quarter must be at least 1");
    for (std::size_t i = 0; i < quarterly_rates.size(); ++i) {
        if (!std::isfinite(quarterly_rates[i]) || !(quarterly_rates[i] > -1.0))
            throw ValidationError("quarterly rate at position " + std::to_string(i) +
                                  " must be finite and greater than -1");
    }
    const std::size_t n = quarterly_rates.size();
    std::vector<double> out;
    out.reserve((n - 1) * periods_per_quarter + 1);
    const auto m = static_cast<double>(periods_per_quarter);
    for (std::size_t q = 0; q + 1 < n; ++q) {
        const double a = quarterly_rates[q];
        const double b = quarterly_rates[q + 1];
        out.push_back(a);
        for (std::size_t j = 1; j < periods_per_quarter; ++j) {
            const double w = static_cast<double>(j) / m;
            out.push_back((1.0 - w) * a + w * b);
        }
    }
    out.push_back(quarterly_rates.back());
    return RateSeries(std::move(out), RateFrequency::quarterly_source);
}

/// Keeps the leading `num_periods` rates and forces r_0 = 0.
inline RateSeries align_rates(const RateSeries& rates, std::size_t num_periods) {
    if (rates.size() < num_periods)
        throw ValidationError("rate series has " + std::to_string(rates.size()) +
                              " entries but the panel has " + std::to_string(num_periods) +
                              " periods");
    std::vector<double> aligned(rates.rates().begin(),
                                rates.rates().begin() + static_cast<std::ptrdiff_t>(num_periods));
    if (!aligned.empty()) aligned.front() = 0.0;
    return RateSeries(std::move(aligned), rates.frequency());
}

/// rho_{l,t} = p_{l,t} / prod_{i<=t} (1 + r_i), after aligning the rates.
inline DeflatedPanel deflate_prices(const HouseholdPanel& panel, const RateSeries& rates) {
    const RateSeries aligned = align_rates(rates, panel.num_periods());
    Matrix<double> rho(panel.num_periods(), panel.num_goods());
    double factor = 1.0;
    for (std::size_t t = 0; t < panel.num_periods(); ++t) {
        factor *= 1.0 + aligned.rates()[t];
        for (std::size_t l = 0; l < panel.num_goods(); ++l) {
            const double value = panel.spot_prices()(t, l) / factor;
            if (!(value > 0.0) || !std::isfinite(value))
                throw InternalError("deflation produced a nonpositive or non-finite price");
            rho(t, l) = value;
        }
    }
    return DeflatedPanel(panel.household_id(), std::move(rho), panel.quantities());
}

namespace detail {

// Dense index assignment for a period or good column.
class IndexMap {
public:
    IndexMap(bool numeric, bool sort_numeric) : numeric_(numeric), sort_numeric_(sort_numeric) {}

    void observe(const std::string& label) {
        if (index_.contains(label)) return;
        index_.emplace(label, order_.size());
        order_.push_back(label);
    }

    // Called once after all labels are observed.
    void finalize() {
        if (!(numeric_ && sort_numeric_)) return;
        std::sort(order_.begin(), order_.end(), [](const std::string& a, const std::string& b) {
            return *parse_index(a) < *parse_index(b);
        });
        for (std::size_t i = 0; i < order_.size(); ++i) index_[order_[i]] = i;
    }

    std::size_t at(const std::string& label) const { return index_.at(label); }
    std::size_t size() const noexcept { return order_.size(); }
    const std::string& label(std::size_t i) const { return order_[i]; }

private:
    bool numeric_;
    bool sort_numeric_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> order_;
};

}  // namespace detail

/// Reads the long panel format `household,period,good,price,quantity`.
///
/// Period and good columns hold either 0-based integers or free labels. A
/// column is numeric when every value in it parses as a nonnegative integer.
/// Numeric periods must be dense 0..T within each household; numeric goods
/// are ordered by value; labels are indexed in order of first appearance.
/// Panels are returned sorted by household id.
inline std::vector<HouseholdPanel> load_panels(std::istream& in) {
    const csv::Table table = csv::read_table(in, 5);
    const std::vector<std::string> expected{"household", "period", "good", "price", "quantity"};
    if (table.header != expected)
        throw ValidationError("panel header must be household,period,good,price,quantity");
    if (table.rows.empty()) throw ValidationError("panel file has a header but no data rows");

    bool numeric_periods = true;
    bool numeric_goods = true;
    for (const auto& row : table.rows) {
        numeric_periods = numeric_periods && parse_index(row[1]).has_value();
        numeric_goods = numeric_goods && parse_index(row[2]).has_value();
    }

    struct Cell {
        std::size_t row;
        double price;
        double quantity;
    };
    std::map<std::string, std::vector<Cell>> by_household;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string line = "line " + std::to_string(table.line_numbers[r]) + ": ";
        if (row[0].empty()) throw ValidationError(line + "empty household id");
        const auto price = parse_double(row[3]);
        const auto quantity = parse_double(row[4]);
        if (!price) throw ValidationError(line + "price is not a finite number", row[0], row[1], row[2]);
        if (!quantity)
            throw ValidationError(line + "quantity is not a finite number", row[0], row[1], row[2]);
        if (!(*price > 0.0))
            throw ValidationError(line + "price must be strictly positive", row[0], row[1], row[2]);
        if (*quantity < 0.0)
            throw ValidationError(line + "quantity must be nonnegative", row[0], row[1], row[2]);
        by_household[row[0]].push_back({r, *price, *quantity});
    }

    std::vector<HouseholdPanel> panels;
    panels.reserve(by_household.size());
    for (const auto& [id, cells] : by_household) {
        detail::IndexMap periods(numeric_periods, true);
        detail::IndexMap goods(numeric_goods, true);
        for (const auto& cell : cells) {
            periods.observe(table.rows[cell.row][1]);
            goods.observe(table.rows[cell.row][2]);
        }
        periods.finalize();
        goods.finalize();
        if (numeric_periods) {
            for (std::size_t i = 0; i < periods.size(); ++i) {
                if (*parse_index(periods.label(i)) != static_cast<long long>(i))
                    throw ValidationError("period indices are not dense from 0 (missing period " +
                                              std::to_string(i) + ")",
                                          id, std::to_string(i));
            }
        }

        const std::size_t T1 = periods.size();
        const std::size_t L = goods.size();
        Matrix<double> prices(T1, L);
        Matrix<double> quantities(T1, L);
        Matrix<char> seen(T1, L, 0);
        for (const auto& cell : cells) {
            const auto& row = table.rows[cell.row];
            const std::size_t t = periods.at(row[1]);
            const std::size_t l = goods.at(row[2]);
            if (seen(t, l))
                throw ValidationError("duplicate cell on line " +
                                          std::to_string(table.line_numbers[cell.row]),
                                      id, row[1], row[2]);
            seen(t, l) = 1;
            prices(t, l) = cell.price;
            quantities(t, l) = cell.quantity;
        }
        for (std::size_t t = 0; t < T1; ++t)
            for (std::size_t l = 0; l < L; ++l)
                if (!seen(t, l))
                    throw ValidationError("missing cell: good is not observed in every period", id,
                                          periods.label(t), goods.label(l));
        panels.emplace_back(id, std::move(prices), std::move(quantities));
    }
    return panels;
}

/// Writes one household's rows in the long panel format (no header).
inline void write_panel_rows(std::ostream& out, const std::string& household_id,
                             const Matrix<double>& prices, const Matrix<double>& quantities) {
    const std::string id = csv::quote_if_needed(household_id);
    for (std::size_t t = 0; t < prices.rows(); ++t)
        for (std::size_t l = 0; l < prices.cols(); ++l)
            out << id << ',' << t << ',' << l << ',' << format_double(prices(t, l)) << ','
                << format_double(quantities(t, l)) << '\n';
}

inline void write_panel_header(std::ostream& out) {
    out << "household,period,good,price,quantity\n";
}

inline void write_panels(std::ostream& out, std::span<const HouseholdPanel> panels) {
    write_panel_header(out);
    for (const auto& p : panels) write_panel_rows(out, p.household_id(), p.spot_prices(), p.quantities());
}

/// Reads `period,rate` (per-period) or `quarter,rate` (quarterly anchors).
/// Indices must be dense from 0; row order is irrelevant.
inline RateSeries load_rates(std::istream& in) {
    const csv::Table table = csv::read_table(in, 2);
    RateFrequency frequency;
    if (table.header == std::vector<std::string>{"period", "rate"})
        frequency = RateFrequency::per_period;
    else if (table.header == std::vector<std::string>{"quarter", "rate"})
        frequency = RateFrequency::quarterly_source;
    else
        throw ValidationError("rates header must be period,rate or quarter,rate");
    if (table.rows.empty()) throw ValidationError("rates file has a header but no data rows");

    std::vector<double> rates(table.rows.size(), 0.0);
    std::vector<char> seen(table.rows.size(), 0);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string line = "rates line " + std::to_string(table.line_numbers[r]) + ": ";
        const auto index = parse_index(table.rows[r][0]);
        const auto rate = parse_double(table.rows[r][1]);
        if (!index) throw ValidationError(line + "index is not a nonnegative integer");
        if (!rate) throw ValidationError(line + "rate is not a finite number");
        if (*index >= static_cast<long long>(rates.size()))
            throw ValidationError(line + "indices are not dense from 0");
        const auto i = static_cast<std::size_t>(*index);
        if (seen[i]) throw ValidationError(line + "duplicate index " + std::to_string(i));
        seen[i] = 1;
        rates[i] = *rate;
    }
    return RateSeries(std::move(rates), frequency);
}

}  // namespace expdisc
