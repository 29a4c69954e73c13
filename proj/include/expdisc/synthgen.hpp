// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/dataset.hpp"
#include "expdisc/errors.hpp"
#include "expdisc/matrix.hpp"
#include "expdisc/numeric.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace expdisc {

/// Portable uniform draws on top of std::mt19937_64, whose output sequence
/// is fixed by the standard (the std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

/// u(c) = sum_l a_l ln c_l with discount factor delta_true.
class CobbDouglasConsumer {
public:
    CobbDouglasConsumer(std::vector<double> weights, double delta_true)
        : weights_(std::move(weights)), delta_(delta_true) {
        if (weights_.empty()) throw ParameterError("Cobb-Douglas consumer needs at least one good");
        double sum = 0.0;
        for (double a : weights_) {
            if (!(a > 0.0) || !std::isfinite(a))
                throw ParameterError("Cobb-Douglas weights must be strictly positive");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("Cobb-Douglas weights must sum to 1");
        require_discount_factor(delta_);
    }

    /// Normalizes positive weights to sum to one.
    static CobbDouglasConsumer from_unnormalized(std::vector<double> weights, double delta_true) {
        double sum = 0.0;
        for (double a : weights) sum += a;
        for (double& a : weights) a /= sum;
        return {std::move(weights), delta_true};
    }

    const std::vector<double>& weights() const noexcept { return weights_; }
    double delta_true() const noexcept { return delta_; }

private:
    std::vector<double> weights_;
    double delta_;
};

/// Bundles that solve max_c u(c) - delta^{-t} rho_t'c in every period:
/// c_{l,t} = a_l delta^t / rho_{l,t}.
inline DeflatedPanel generate_ed_panel(const CobbDouglasConsumer& consumer,
                                       const Matrix<double>& discounted_prices,
                                       std::string household_id = "synthetic") {
    if (discounted_prices.cols() != consumer.weights().size())
        throw ParameterError("price matrix has " + std::to_string(discounted_prices.cols()) +
                             " goods but the consumer has " +
                             std::to_string(consumer.weights().size()));
    Matrix<double> quantities(discounted_prices.rows(), discounted_prices.cols());
    for (std::size_t t = 0; t < discounted_prices.rows(); ++t) {
        const double discount = std::pow(consumer.delta_true(), static_cast<double>(t));
        for (std::size_t l = 0; l < discounted_prices.cols(); ++l) {
            const double rho = discounted_prices(t, l);
            if (!(rho > 0.0) || !std::isfinite(rho))
                throw ValidationError("price must be strictly positive", household_id,
                                      std::to_string(t), std::to_string(l));
            quantities(t, l) = consumer.weights()[l] * discount / rho;
        }
    }
    return DeflatedPanel(std::move(household_id), discounted_prices, std::move(quantities));
}

/// Multiplies each quantity by an independent log-uniform draw on
/// [1 - noise_scale, 1 + noise_scale]. Draws are taken row-major.
/// noise_scale = 0 returns the panel unchanged.
inline DeflatedPanel perturb_panel(const DeflatedPanel& panel, double noise_scale, std::uint64_t seed) {
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
        throw ParameterError("noise scale must be nonnegative");
    if (noise_scale >= 1.0)
        throw ParameterError("noise scale must be below 1 to keep quantities nonnegative");
    if (noise_scale == 0.0) return panel;
    Rng rng(seed);
    Matrix<double> quantities = panel.quantities();
    for (double& c : quantities.values()) c *= rng.log_uniform(1.0 - noise_scale, 1.0 + noise_scale);
    return DeflatedPanel(panel.household_id(), panel.discounted_prices(), std::move(quantities));
}

/// Matrix of log-uniform prices on [lo, hi].
inline Matrix<double> random_prices(Rng& rng, std::size_t periods, std::size_t goods, double lo = 0.5,
                                    double hi = 2.0) {
    Matrix<double> prices(periods, goods);
    for (double& p : prices.values()) p = rng.log_uniform(lo, hi);
    return prices;
}

struct SynthConfig {
    std::size_t households = 10;
    std::size_t periods = 26;  ///< T + 1
    std::size_t goods = 5;
    double delta_min = 0.9;
    double delta_max = 0.9;
    double noise = 0.0;
    std::uint64_t seed = 1;
    double price_lo = 0.5;
    double price_hi = 2.0;
};

struct SyntheticHousehold {
    DeflatedPanel panel;
    double delta_true;
};

inline std::string synthetic_household_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "h%05zu", i);
    return buf;
}

/// Population of Cobb-Douglas discounters with random prices and weights,
/// optionally perturbed. Deterministic in the config.
inline std::vector<SyntheticHousehold> synthesize_population(const SynthConfig& config) {
    if (config.households == 0 || config.periods == 0 || config.goods == 0)
        throw ParameterError("households, periods and goods must all be at least 1");
    require_discount_factor(config.delta_min);
    require_discount_factor(config.delta_max);
    if (config.delta_min > config.delta_max) throw ParameterError("delta range is empty (min > max)");
    if (!(config.price_lo > 0.0) || config.price_hi < config.price_lo)
        throw ParameterError("price range must be positive and ordered");
    Rng rng(config.seed);
    std::vector<SyntheticHousehold> out;
    out.reserve(config.households);
    for (std::size_t i = 0; i < config.households; ++i) {
        const double delta = config.delta_min == config.delta_max
                                 ? config.delta_min
                                 : rng.uniform(config.delta_min, config.delta_max);
        std::vector<double> weights(config.goods);
        for (double& a : weights) a = rng.uniform(0.05, 1.0);
        const auto consumer = CobbDouglasConsumer::from_unnormalized(std::move(weights), delta);
        const Matrix<double> prices =
            random_prices(rng, config.periods, config.goods, config.price_lo, config.price_hi);
        const std::uint64_t noise_seed = rng.integer(0, INT64_MAX);
        DeflatedPanel panel = generate_ed_panel(consumer, prices, synthetic_household_id(i));
        out.push_back({perturb_panel(panel, config.noise, noise_seed), delta});
    }
    return out;
}

}  // namespace expdisc
