// SPDX-License-Identifier: Apache-2.0
#include "expdisc/dataset.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace expdisc {
namespace {

using testing::rows_to_matrix;

TEST(InterpolateRates, QuarterlyAnchorsToMonthly) {
    const std::vector<double> q{0.12, 0.15};
    const RateSeries r = interpolate_rates(q, 3);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r.rates()[0], 0.12);
    EXPECT_DOUBLE_EQ(r.rates()[1], 0.13);
    EXPECT_DOUBLE_EQ(r.rates()[2], 0.14);
    EXPECT_EQ(r.rates()[3], 0.15);
    EXPECT_EQ(r.frequency(), RateFrequency::quarterly_source);
}

TEST(InterpolateRates, SingleAnchor) {
    const std::vector<double> q{0.10};
    for (std::size_t m : {1u, 3u, 13u}) {
        const RateSeries r = interpolate_rates(q, m);
        ASSERT_EQ(r.size(), 1u);
        EXPECT_EQ(r.rates()[0], 0.10);
    }
}

TEST(InterpolateRates, ConstantSeries) {
    const std::vector<double> q{0.08, 0.08, 0.08};
    const RateSeries r = interpolate_rates(q, 3);
    ASSERT_EQ(r.size(), 7u);
    for (double v : r.rates()) EXPECT_DOUBLE_EQ(v, 0.08);
}

TEST(InterpolateRates, Errors) {
    EXPECT_THROW(interpolate_rates(std::vector<double>{}, 3), ValidationError);
    EXPECT_THROW(interpolate_rates(std::vector<double>{0.1, -1.0}, 3), ValidationError);
    EXPECT_THROW(interpolate_rates(std::vector<double>{0.1}, 0), ParameterError);
}

TEST(InterpolateRates, MonotoneBetweenMonotoneAnchors) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> q(static_cast<std::size_t>(rng.integer(2, 8)));
        double level = rng.uniform(-0.05, 0.2);
        for (double& v : q) {
            v = level;
            level += rng.uniform(0.0, 0.03);
        }
        const auto m = static_cast<std::size_t>(rng.integer(1, 6));
        const RateSeries r = interpolate_rates(q, m);
        ASSERT_EQ(r.size(), (q.size() - 1) * m + 1);
        for (std::size_t k = 0; k < q.size(); ++k) EXPECT_EQ(r.rates()[k * m], q[k]);
        for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LE(r.rates()[i - 1], r.rates()[i] + 1e-15);
    }
}

TEST(DeflatePrices, TenPercentRates) {
    const HouseholdPanel panel("h", rows_to_matrix({{1}, {1}, {1}}), rows_to_matrix({{1}, {1}, {1}}));
    const DeflatedPanel d = deflate_prices(panel, RateSeries({0.0, 0.10, 0.10}));
    EXPECT_EQ(d.discounted_prices()(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(d.discounted_prices()(1, 0), 1.0 / 1.1);
    EXPECT_DOUBLE_EQ(d.discounted_prices()(2, 0), 1.0 / 1.21);
    EXPECT_EQ(d.quantities(), panel.quantities());
}

TEST(DeflatePrices, DirectFormula) {
    const HouseholdPanel panel("h", rows_to_matrix({{1}, {2}}), rows_to_matrix({{0}, {3}}));
    const DeflatedPanel d = deflate_prices(panel, RateSeries({0.0, 0.25}));
    EXPECT_DOUBLE_EQ(d.discounted_prices()(1, 0), 1.6);
}

TEST(DeflatePrices, ZeroRatesAreIdentity) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const DeflatedPanel r = testing::random_panel(rng);
        const HouseholdPanel panel("h", r.discounted_prices(), r.quantities());
        const DeflatedPanel d = deflate_prices(panel, RateSeries::zeros(panel.num_periods()));
        EXPECT_EQ(d.discounted_prices(), panel.spot_prices());
    }
}

TEST(DeflatePrices, CommutesWithPriceScaling) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const DeflatedPanel r = testing::random_panel(rng);
        const double k = rng.log_uniform(0.1, 10.0);
        std::vector<double> rates(r.num_periods() + 2);
        for (double& v : rates) v = rng.uniform(-0.02, 0.05);
        const HouseholdPanel panel("h", r.discounted_prices(), r.quantities());
        Matrix<double> scaled_prices = panel.spot_prices();
        for (double& v : scaled_prices.values()) v *= k;
        const HouseholdPanel scaled("h", scaled_prices, r.quantities());
        const auto a = deflate_prices(panel, RateSeries(rates));
        const auto b = deflate_prices(scaled, RateSeries(rates));
        for (std::size_t i = 0; i < a.discounted_prices().values().size(); ++i)
            EXPECT_NEAR(b.discounted_prices().values()[i], k * a.discounted_prices().values()[i],
                        1e-14 * k * a.discounted_prices().values()[i]);
    }
}

TEST(DeflatePrices, AlignmentForcesFirstRateAndTruncates) {
    const HouseholdPanel panel("h", rows_to_matrix({{1}, {1}}), rows_to_matrix({{1}, {1}}));
    const DeflatedPanel d = deflate_prices(panel, RateSeries({0.5, 0.25, 0.9, 0.9}));
    EXPECT_EQ(d.discounted_prices()(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(d.discounted_prices()(1, 0), 0.8);

    const RateSeries aligned = align_rates(RateSeries({0.5, 0.25, 0.9}), 2);
    ASSERT_EQ(aligned.size(), 2u);
    EXPECT_EQ(aligned.rates()[0], 0.0);
    EXPECT_EQ(aligned.rates()[1], 0.25);
}

TEST(DeflatePrices, ShortRateSeriesRejected) {
    const HouseholdPanel panel("h", rows_to_matrix({{1}, {1}, {1}}), rows_to_matrix({{1}, {1}, {1}}));
    EXPECT_THROW(deflate_prices(panel, RateSeries({0.0, 0.1})), ValidationError);
}

TEST(RateSeries, RejectsRatesAtOrBelowMinusOne) {
    EXPECT_THROW(RateSeries({0.0, -1.0}), ValidationError);
    EXPECT_THROW(RateSeries({0.0, std::nan("")}), ValidationError);
}

TEST(AnnualToPeriodRate, CompoundingConvention) {
    EXPECT_EQ(annual_to_period_rate(0.0, 28.0), 0.0);
    EXPECT_NEAR(annual_to_period_rate(0.12, 365.25), 0.12, 1e-15);
    EXPECT_NEAR(annual_to_period_rate(0.12, 28.0), std::pow(1.12, 28.0 / 365.25) - 1.0, 1e-16);
    EXPECT_THROW(annual_to_period_rate(-1.5, 28.0), ValidationError);
}

TEST(HouseholdPanel, ValidatesCells) {
    EXPECT_THROW(HouseholdPanel("h", rows_to_matrix({{0.0}}), rows_to_matrix({{1.0}})), ValidationError);
    EXPECT_THROW(HouseholdPanel("h", rows_to_matrix({{1.0}}), rows_to_matrix({{-1.0}})), ValidationError);
    EXPECT_THROW(HouseholdPanel("h", rows_to_matrix({{1.0, 1.0}}), rows_to_matrix({{1.0}})), ValidationError);
    EXPECT_THROW(HouseholdPanel("h", rows_to_matrix({{std::numeric_limits<double>::infinity()}}),
                                rows_to_matrix({{1.0}})),
                 ValidationError);
    EXPECT_THROW(HouseholdPanel("h", Matrix<double>(), Matrix<double>()), ValidationError);
}

std::vector<HouseholdPanel> parse(const std::string& text) {
    std::istringstream in(text);
    return load_panels(in);
}

TEST(LoadPanels, SingleHousehold) {
    const auto panels = parse(
        "household,period,good,price,quantity\n"
        "a,0,0,1.5,2\n"
        "a,0,1,2.5,0\n"
        "a,1,0,1.25,1\n"
        "a,1,1,3,4\n");
    ASSERT_EQ(panels.size(), 1u);
    EXPECT_EQ(panels[0].household_id(), "a");
    EXPECT_EQ(panels[0].num_periods(), 2u);
    EXPECT_EQ(panels[0].num_goods(), 2u);
    EXPECT_EQ(panels[0].spot_prices()(1, 0), 1.25);
    EXPECT_EQ(panels[0].quantities()(1, 1), 4.0);
}

TEST(LoadPanels, ZeroPriceNamesTheCell) {
    try {
        parse("household,period,good,price,quantity\na,0,0,1,1\na,0,1,0,1\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.household(), "a");
        EXPECT_EQ(e.period(), "0");
        EXPECT_EQ(e.good(), "1");
        EXPECT_NE(std::string(e.what()).find("price"), std::string::npos);
    }
}

TEST(LoadPanels, InterleavedHouseholdsIgnoreRowOrder) {
    const std::string a =
        "household,period,good,price,quantity\n"
        "x,0,0,1,1\ny,1,0,2,2\nx,1,0,3,3\ny,0,0,4,4\n";
    const std::string b =
        "household,period,good,price,quantity\n"
        "y,0,0,4,4\nx,1,0,3,3\ny,1,0,2,2\nx,0,0,1,1\n";
    const auto pa = parse(a);
    const auto pb = parse(b);
    ASSERT_EQ(pa.size(), 2u);
    EXPECT_EQ(pa, pb);
    EXPECT_EQ(pa[0].household_id(), "x");
    EXPECT_EQ(pa[0].spot_prices()(1, 0), 3.0);
    EXPECT_EQ(pa[1].spot_prices()(0, 0), 4.0);
}

TEST(LoadPanels, LabelsMapInFirstAppearanceOrder) {
    const auto panels = parse(
        "household,period,good,price,quantity\n"
        "h,jun,milk,1,1\nh,jun,eggs,2,2\nh,jul,eggs,3,3\nh,jul,milk,4,4\n");
    ASSERT_EQ(panels.size(), 1u);
    EXPECT_EQ(panels[0].spot_prices()(0, 0), 1.0);  // jun, milk
    EXPECT_EQ(panels[0].spot_prices()(1, 0), 4.0);  // jul, milk
    EXPECT_EQ(panels[0].spot_prices()(1, 1), 3.0);  // jul, eggs
}

TEST(LoadPanels, ValidationFailures) {
    const std::string header = "household,period,good,price,quantity\n";
    // missing cell
    EXPECT_THROW(parse(header + "a,0,0,1,1\na,0,1,1,1\na,1,0,1,1\n"), ValidationError);
    // duplicate cell
    EXPECT_THROW(parse(header + "a,0,0,1,1\na,0,0,1,1\n"), ValidationError);
    // negative quantity
    EXPECT_THROW(parse(header + "a,0,0,1,-1\n"), ValidationError);
    // periods 0 and 2 only
    EXPECT_THROW(parse(header + "a,0,0,1,1\na,2,0,1,1\n"), ValidationError);
    // periods not starting at 0
    EXPECT_THROW(parse(header + "a,1,0,1,1\n"), ValidationError);
    // non-numeric price, non-finite quantity
    EXPECT_THROW(parse(header + "a,0,0,abc,1\n"), ValidationError);
    EXPECT_THROW(parse(header + "a,0,0,1,inf\n"), ValidationError);
    // wrong header, wrong arity, empty
    EXPECT_THROW(parse("hh,period,good,price,quantity\na,0,0,1,1\n"), ValidationError);
    EXPECT_THROW(parse(header + "a,0,0,1\n"), ValidationError);
    EXPECT_THROW(parse(""), ValidationError);
    EXPECT_THROW(parse(header), ValidationError);
}

TEST(LoadPanels, MissingCellNamesCoordinates) {
    try {
        parse("household,period,good,price,quantity\na,0,0,1,1\na,0,1,1,1\na,1,0,1,1\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.household(), "a");
        EXPECT_EQ(e.period(), "1");
        EXPECT_EQ(e.good(), "1");
    }
}

TEST(LoadPanels, LocaleIndependentAndTolerant) {
    const auto panels = parse(
        "Household,Period,Good,Price,Quantity\r\n"
        "\"a,b\", 0 , 0 , 1.5e0 , 2.\r\n"
        "\n");
    ASSERT_EQ(panels.size(), 1u);
    EXPECT_EQ(panels[0].household_id(), "a,b");
    EXPECT_EQ(panels[0].spot_prices()(0, 0), 1.5);
    EXPECT_THROW(parse("household,period,good,price,quantity\na,0,0,\"1,5\",1\n"), ValidationError);
}

TEST(LoadPanels, RoundTripsSerializedPanels) {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<HouseholdPanel> panels;
        const auto n = rng.integer(1, 4);
        for (std::int64_t h = 0; h < n; ++h) {
            const DeflatedPanel r = testing::random_panel(rng, {.min_periods = 1, .max_periods = 7});
            panels.emplace_back("hh" + std::to_string(h), r.discounted_prices(), r.quantities());
        }
        std::stringstream buf;
        write_panels(buf, panels);
        EXPECT_EQ(load_panels(buf), panels);
    }
}

TEST(LoadRates, PerPeriodAndQuarterly) {
    std::istringstream a("period,rate\n1,0.02\n0,0.01\n2,0.03\n");
    const RateSeries r = load_rates(a);
    EXPECT_EQ(r.frequency(), RateFrequency::per_period);
    EXPECT_EQ(r.rates(), (std::vector<double>{0.01, 0.02, 0.03}));

    std::istringstream b("quarter,rate\n0,0.1\n1,0.2\n");
    EXPECT_EQ(load_rates(b).frequency(), RateFrequency::quarterly_source);

    std::istringstream gap("period,rate\n0,0.1\n2,0.2\n");
    EXPECT_THROW(load_rates(gap), ValidationError);
    std::istringstream dup("period,rate\n0,0.1\n0,0.2\n");
    EXPECT_THROW(load_rates(dup), ValidationError);
    std::istringstream bad("period,rate\n0,-1\n");
    EXPECT_THROW(load_rates(bad), ValidationError);
    std::istringstream header("month,rate\n0,0.1\n");
    EXPECT_THROW(load_rates(header), ValidationError);
}

TEST(DeltaGrid, NestedStepsShareExactPoints) {
    const auto coarse = delta_grid(0.01);
    const auto fine = delta_grid(0.001);
    ASSERT_EQ(coarse.size(), 100u);
    ASSERT_EQ(fine.size(), 1000u);
    EXPECT_EQ(coarse.back(), 1.0);
    EXPECT_EQ(fine.front(), 0.001);
    for (std::size_t k = 0; k < coarse.size(); ++k) EXPECT_EQ(coarse[k], fine[10 * k + 9]);
    EXPECT_EQ(fine[899], 0.9);

    const auto odd = delta_grid(0.3);
    EXPECT_EQ(odd, (std::vector<double>{0.3, 0.6, 0.3 * 3, 1.0}));
    EXPECT_THROW(delta_grid(0.0), ParameterError);
    EXPECT_THROW(delta_grid(1.0), ParameterError);
}

}  // namespace
}  // namespace expdisc
