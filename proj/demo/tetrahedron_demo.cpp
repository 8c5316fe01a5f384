// Majorana points of the tetrahedron state, Hardy measurements for a random
// symmetric state, and the best persistence value found for both 4-qubit
// examples.

#include <iostream>
#include <random>

#include "symhardy/symhardy.hpp"

using namespace symhardy;

int main() {
    const auto t = from_named("tetrahedron", 4);
    for (const auto& c : state_to_points(t).clusters) {
        const auto [theta, phi] = c.point.angles();
        std::cout << "point theta=" << theta << " phi=" << phi << " deg=" << c.degeneracy << "\n";
    }

    std::mt19937_64 rng(1);
    const auto psi = random_symmetric_state(5, rng);
    const auto m = construct_hardy_measurements(psi);
    const auto r = check_hardy_conditions(psi, m);
    std::cout << "random 5-qubit state: p1=" << r.p1 << " satisfied=" << r.satisfied << "\n";

    const auto q = persistence_functional(4, 3);
    OptimizationConfig cfg;
    cfg.restarts = 16;
    for (const char* name : {"d3plus", "tetrahedron"}) {
        const auto res = optimize_settings(from_named(name, 4), q, cfg);
        std::cout << name << ": best Q_3^4 found " << res.best_value << "\n";
    }
}
