// SPDX-License-Identifier: Apache-2.0
// Two periods, each consumer choice is 20% more expensive than the other
// bundle at its own prices: a pure static (GARP) violation.
#include "expdisc/expdisc.hpp"

#include <iostream>

int main() {
    using namespace expdisc;
    Matrix<double> prices(2, 2), quantities(2, 2);
    prices(0, 0) = 1; prices(0, 1) = 2;
    prices(1, 0) = 2; prices(1, 1) = 1;
    quantities(0, 0) = 1; quantities(0, 1) = 2;
    quantities(1, 0) = 2; quantities(1, 1) = 1;
    const DeflatedPanel panel("demo", prices, quantities);

    const EfficiencyReport r = analyze_household(panel);
    std::cout << "CCEI " << r.ccei << "\nEEI  " << r.eei << "\nTCEI " << r.tcei << '\n';
    std::cout << "identified set at EEI: [" << r.identified_set.lower << ", " << r.identified_set.upper << "]\n";

    const auto at_boundary = ed_feasible(panel, 0.8, 0.9);
    std::cout << "feasible at e=0.8, delta=0.9: " << std::boolalpha << at_boundary.feasible << '\n';
    if (at_boundary.witness) {
        std::cout << "utility numbers:";
        for (double u : at_boundary.witness->utilities) std::cout << ' ' << u;
        std::cout << '\n';
    }
}
