// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace expdisc {

/// Malformed or out-of-contract input data (bad cells, bad rates, bad CSV).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}

    ValidationError(const std::string& what, std::string household,
                    std::optional<std::string> period = std::nullopt,
                    std::optional<std::string> good = std::nullopt)
        : std::runtime_error(format(what, household, period, good)),
          household_(std::move(household)),
          period_(std::move(period)),
          good_(std::move(good)) {}

    const std::optional<std::string>& household() const noexcept { return household_; }
    const std::optional<std::string>& period() const noexcept { return period_; }
    const std::optional<std::string>& good() const noexcept { return good_; }

private:
    static std::string format(const std::string& what, const std::string& household,
                              const std::optional<std::string>& period,
                              const std::optional<std::string>& good) {
        std::string msg = what + " (household=" + household;
        if (period) msg += ", period=" + *period;
        if (good) msg += ", good=" + *good;
        return msg + ")";
    }

    std::optional<std::string> household_;
    std::optional<std::string> period_;
    std::optional<std::string> good_;
};

/// A numeric argument outside its admissible range, e.g. an efficiency
/// level outside (0,1].
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A condition the algorithms guarantee cannot happen on valid input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace expdisc
