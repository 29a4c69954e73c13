// SPDX-License-Identifier: Apache-2.0
#include "expdisc/synthgen.hpp"

#include "expdisc/ed.hpp"
#include "expdisc/garp.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace expdisc {
namespace {

using testing::rows_to_matrix;

TEST(GenerateEdPanel, ClosedFormBundles) {
    const CobbDouglasConsumer consumer({0.5, 0.5}, 0.9);
    const auto p = generate_ed_panel(consumer, rows_to_matrix({{1, 1}, {1, 1}}));
    EXPECT_EQ(p.quantities()(0, 0), 0.5);
    EXPECT_EQ(p.quantities()(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(p.quantities()(1, 0), 0.45);
    EXPECT_DOUBLE_EQ(p.quantities()(1, 1), 0.45);
}

TEST(GenerateEdPanel, StationaryAtDeltaOne) {
    const CobbDouglasConsumer consumer({1.0}, 1.0);
    const auto p = generate_ed_panel(consumer, rows_to_matrix({{1}, {1}, {1}, {1}}));
    for (double c : p.quantities().values()) EXPECT_EQ(c, 1.0);
}

TEST(GenerateEdPanel, QuantitiesScaleWithDiscounting) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const double delta = rng.uniform(0.5, 1.0);
        const auto consumer = CobbDouglasConsumer::from_unnormalized({rng.uniform(0.1, 1), rng.uniform(0.1, 1)}, delta);
        const auto prices = random_prices(rng, 8, 2);
        const auto p = generate_ed_panel(consumer, prices);
        for (std::size_t t = 0; t + 1 < 8; ++t)
            for (std::size_t l = 0; l < 2; ++l)
                EXPECT_NEAR(p.quantities()(t + 1, l) / p.quantities()(t, l),
                            delta * prices(t, l) / prices(t + 1, l), 1e-12);
    }
}

TEST(GenerateEdPanel, GeneratedPanelsAreRationalizable) {
    Rng rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const double delta = rng.uniform(0.8, 1.0);
        std::vector<double> w(4);
        for (double& a : w) a = rng.uniform(0.05, 1.0);
        const auto consumer = CobbDouglasConsumer::from_unnormalized(w, delta);
        const auto p = generate_ed_panel(consumer, random_prices(rng, 26, 4));
        EXPECT_TRUE(check_egarp(p, 1.0));
        const auto r = ed_feasible(p, 1.0, delta);
        ASSERT_TRUE(r.feasible);
        EXPECT_TRUE(verify_witness(p, *r.witness));
    }
}

TEST(GenerateEdPanel, RecoveryOnGrid) {
    Rng rng(14);
    for (double delta : {0.85, 0.9, 0.95, 0.99}) {
        const CobbDouglasConsumer consumer({0.1, 0.2, 0.3, 0.4}, delta);
        const auto p = generate_ed_panel(consumer, random_prices(rng, 15, 4));
        EXPECT_GE(compute_eei(p).eei, 1.0 - 2 * kDefaultEfficiencyTol);
        EXPECT_TRUE(identified_set(p, 1.0, 0.001).contains(delta));
    }
}

TEST(GenerateEdPanel, Errors) {
    const CobbDouglasConsumer consumer({1.0}, 0.9);
    Matrix<double> prices(2, 1, 1.0);
    prices(1, 0) = 0.0;
    EXPECT_THROW(generate_ed_panel(consumer, prices), ValidationError);
    EXPECT_THROW(generate_ed_panel(consumer, Matrix<double>(2, 2, 1.0)), ParameterError);
    EXPECT_THROW(CobbDouglasConsumer({0.5, 0.6}, 0.9), ParameterError);
    EXPECT_THROW(CobbDouglasConsumer({1.0, 0.0}, 0.9), ParameterError);
    EXPECT_THROW(CobbDouglasConsumer({1.0}, 1.2), ParameterError);
}

TEST(PerturbPanel, IdentityAndDeterminism) {
    Rng rng(15);
    const auto p = testing::random_panel(rng);
    EXPECT_EQ(perturb_panel(p, 0.0, 99), p);
    EXPECT_EQ(perturb_panel(p, 0.2, 7), perturb_panel(p, 0.2, 7));
    EXPECT_NE(perturb_panel(p, 0.2, 7), perturb_panel(p, 0.2, 8));
}

TEST(PerturbPanel, FactorsStayInRange) {
    Rng rng(16);
    const auto p = testing::random_panel(rng, {.min_periods = 5, .zero_bundle_prob = 0.0});
    const auto q = perturb_panel(p, 0.3, 1);
    for (std::size_t i = 0; i < p.quantities().values().size(); ++i) {
        const double f = q.quantities().values()[i] / p.quantities().values()[i];
        EXPECT_GE(f, 0.7 * (1 - 1e-12));
        EXPECT_LE(f, 1.3 * (1 + 1e-12));
    }
    EXPECT_EQ(q.discounted_prices(), p.discounted_prices());
    EXPECT_THROW(perturb_panel(p, -0.1, 1), ParameterError);
    EXPECT_THROW(perturb_panel(p, 1.0, 1), ParameterError);
}

TEST(PerturbPanel, EeiDeclinesWithNoiseOnAverage) {
    // Monte Carlo: mean EEI over consumers should not increase with the noise scale.
    const std::vector<double> scales{0.0, 0.05, 0.1, 0.2, 0.4};
    std::vector<double> mean_eei(scales.size(), 0.0);
    const int consumers = 12;
    for (int i = 0; i < consumers; ++i) {
        Rng rng(static_cast<std::uint64_t>(100 + i));
        const CobbDouglasConsumer consumer({0.3, 0.3, 0.4}, 0.9);
        const auto exact = generate_ed_panel(consumer, random_prices(rng, 16, 3, 0.9, 1.1));
        for (std::size_t k = 0; k < scales.size(); ++k)
            mean_eei[k] += compute_eei(perturb_panel(exact, scales[k], 500 + i)).eei / consumers;
    }
    EXPECT_EQ(mean_eei[0], 1.0);
    EXPECT_LT(mean_eei[2], 1.0);
    for (std::size_t k = 1; k < scales.size(); ++k) EXPECT_LE(mean_eei[k], mean_eei[k - 1]) << k;
}

TEST(SynthesizePopulation, DeterministicAndDegenerateRange) {
    SynthConfig cfg;
    cfg.households = 4;
    cfg.periods = 6;
    cfg.goods = 2;
    cfg.delta_min = cfg.delta_max = 0.9;
    cfg.seed = 7;
    const auto a = synthesize_population(cfg);
    const auto b = synthesize_population(cfg);
    ASSERT_EQ(a.size(), 4u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].panel, b[i].panel);
        EXPECT_EQ(a[i].delta_true, 0.9);
    }
    EXPECT_EQ(a[0].panel.household_id(), "h00000");

    cfg.delta_min = 0.95;
    EXPECT_THROW(synthesize_population(cfg), ParameterError);
}

TEST(Rng, PortableSequence) {
    // mt19937_64's 10000th output is fixed by the standard.
    std::mt19937_64 engine(5489u);
    engine.discard(9999);
    EXPECT_EQ(engine(), 9981545732273789042ull);
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

}  // namespace
}  // namespace expdisc
