#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symhardy/majorana.hpp"
#include "symhardy/random.hpp"

using namespace symhardy;

namespace {

std::array<double, 3> bloch_vector(const PureQubit& q) {
    const auto [t, p] = q.angles();
    return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}

/// Smallest achievable maximum infidelity 1 - |<p|q>|^2 over degeneracy-respecting pairings.
double matching_cost(const MajoranaSpectrum& a, const MajoranaSpectrum& b) {
    const std::size_t m = a.clusters.size();
    if (m != b.clusters.size()) {
        return std::numeric_limits<double>::infinity();
    }
    std::vector<double> best(std::size_t{1} << m, std::numeric_limits<double>::infinity());
    best[0] = 0.0;
    for (std::size_t mask = 0; mask < best.size(); ++mask) {
        const auto i = static_cast<std::size_t>(std::popcount(mask));
        if (i >= m || !std::isfinite(best[mask])) {
            continue;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if ((mask >> j) & 1 || a.clusters[i].degeneracy != b.clusters[j].degeneracy) {
                continue;
            }
            const double c = 1.0 - std::norm(inner(a.clusters[i].point, b.clusters[j].point));
            auto& slot = best[mask | (std::size_t{1} << j)];
            slot = std::min(slot, std::max(best[mask], c));
        }
    }
    return best.back();
}

MajoranaSpectrum random_spectrum(int n, std::mt19937_64& rng) {
    MajoranaSpectrum s{n, {}};
    for (int d : random_degeneracies(n, rng)) {
        s.clusters.push_back({random_qubit(rng), d});
    }
    return s;
}

double min_separation(const MajoranaSpectrum& s) {
    double d = 2.0;
    for (std::size_t i = 0; i < s.clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < s.clusters.size(); ++j) {
            d = std::min(d, chordal_distance(s.clusters[i].point, s.clusters[j].point));
        }
    }
    return d;
}

} // namespace

TEST(MajoranaPolynomial, Examples) {
    auto p = majorana_polynomial(from_named("ghz", 3));
    ASSERT_EQ(p.size(), 4u);
    EXPECT_NEAR(std::abs(p[0]), std::abs(p[3]), 1e-15);
    EXPECT_GT(std::abs(p[0]), 0.5);
    EXPECT_EQ(std::abs(p[1]), 0.0);
    EXPECT_EQ(std::abs(p[2]), 0.0);

    p = majorana_polynomial(dicke_state(5, 5));
    for (int k = 0; k < 5; ++k) {
        EXPECT_EQ(std::abs(p[static_cast<std::size_t>(k)]), 0.0);
    }
    EXPECT_GT(std::abs(p[5]), 0.0);

    p = majorana_polynomial(dicke_state(5, 0));
    EXPECT_GT(std::abs(p[0]), 0.0);
    for (int k = 1; k <= 5; ++k) {
        EXPECT_EQ(std::abs(p[static_cast<std::size_t>(k)]), 0.0);
    }
}

TEST(StateToPoints, DickeS31) {
    const auto s = state_to_points(dicke_state(3, 1));
    ASSERT_EQ(s.clusters.size(), 2u);
    EXPECT_EQ(s.clusters[0].degeneracy, 2);
    EXPECT_TRUE(equivalent(s.clusters[0].point, qubits::zero()));
    EXPECT_EQ(s.clusters[1].degeneracy, 1);
    EXPECT_TRUE(equivalent(s.clusters[1].point, qubits::one()));
}

TEST(StateToPoints, PolesOfProductStates) {
    for (int n = 1; n <= 6; ++n) {
        auto s = state_to_points(dicke_state(n, 0));
        ASSERT_EQ(s.clusters.size(), 1u);
        EXPECT_EQ(s.clusters[0].degeneracy, n);
        EXPECT_TRUE(equivalent(s.clusters[0].point, qubits::zero()));
        s = state_to_points(dicke_state(n, n));
        ASSERT_EQ(s.clusters.size(), 1u);
        EXPECT_TRUE(equivalent(s.clusters[0].point, qubits::one()));
    }
}

TEST(StateToPoints, GhzEquator) {
    const auto s = state_to_points(from_named("ghz", 3));
    ASSERT_EQ(s.clusters.size(), 3u);
    std::vector<double> phis;
    for (const auto& c : s.clusters) {
        EXPECT_EQ(c.degeneracy, 1);
        const auto [t, p] = c.point.angles();
        EXPECT_NEAR(t, std::numbers::pi / 2, 1e-10);
        phis.push_back(p);
        EXPECT_LT(is_majorana_point(from_named("ghz", 3), c.point).residual, 1e-12);
    }
    std::sort(phis.begin(), phis.end());
    EXPECT_NEAR(phis[1] - phis[0], 2 * std::numbers::pi / 3, 1e-10);
    EXPECT_NEAR(phis[2] - phis[1], 2 * std::numbers::pi / 3, 1e-10);
}

TEST(StateToPoints, TetrahedronIsRegular) {
    const auto s = state_to_points(from_named("tetrahedron", 4));
    ASSERT_EQ(s.clusters.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const auto a = bloch_vector(s.clusters[i].point);
            const auto b = bloch_vector(s.clusters[j].point);
            EXPECT_NEAR(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0 / 3.0, 1e-10);
        }
    }
    EXPECT_EQ(degeneracy_profile(s), (std::vector<int>{1, 1, 1, 1}));
}

TEST(PointsToState, Examples) {
    EXPECT_GT(points_to_state({3, {{qubits::zero(), 2}, {qubits::one(), 1}}}).fidelity(dicke_state(3, 1)), 1 - 1e-12);
    EXPECT_GT(points_to_state({2, {{qubits::zero(), 1}, {qubits::one(), 1}}}).fidelity(dicke_state(2, 1)), 1 - 1e-12);
    const auto ghz = from_named("ghz", 4);
    EXPECT_GT(points_to_state(state_to_points(ghz)).fidelity(ghz), 1 - 1e-8);
}

TEST(PointsToState, MatchesDenseSymmetrization) {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 7; ++n) {
        const auto sp = random_spectrum(n, rng);
        const auto dense = oracle::symmetrize(sp.points());
        EXPECT_NEAR(oracle::fidelity(dense, to_statevector(points_to_state(sp))), 1.0, 1e-12);
    }
}

TEST(IsMajoranaPoint, Examples) {
    const auto s31 = dicke_state(3, 1);
    auto r = is_majorana_point(s31, qubits::zero());
    EXPECT_TRUE(r.is_mp);
    EXPECT_EQ(r.multiplicity, 2);
    r = is_majorana_point(s31, qubits::plus());
    EXPECT_FALSE(r.is_mp);
    EXPECT_EQ(r.multiplicity, 0);
    EXPECT_NEAR(r.residual, std::sqrt(3.0) / (2 * std::numbers::sqrt2), 1e-12);
}

TEST(IsMajoranaPoint, ResidualMatchesDense) {
    std::mt19937_64 rng(32);
    for (int n = 1; n <= 8; ++n) {
        const auto psi = random_symmetric_state(n, rng);
        const auto q = random_qubit(rng);
        const auto bra = oracle::product(std::vector<PureQubit>(static_cast<std::size_t>(n), antipode(q)));
        EXPECT_NEAR(is_majorana_point(psi, q).residual, oracle::fidelity(bra, to_statevector(psi)), 1e-12);
    }
}

TEST(StateToPoints, MultiplicityEqualsDegeneracy) {
    std::mt19937_64 rng(33);
    int checked = 0;
    while (checked < 200) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const auto sp = random_spectrum(n, rng);
        if (min_separation(sp) < 0.3) {
            continue;
        }
        const auto psi = points_to_state(sp);
        for (const auto& c : state_to_points(psi).clusters) {
            const auto r = is_majorana_point(psi, c.point, 1e-7);
            EXPECT_TRUE(r.is_mp);
            EXPECT_EQ(r.multiplicity, c.degeneracy);
        }
        ++checked;
    }
}

TEST(StateToPoints, RoundTripRandomSpectra) {
    std::mt19937_64 rng(34);
    int failures = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const auto sp = random_spectrum(n, rng);
        const auto got = state_to_points(points_to_state(sp));
        const bool ok = got.n == n && degeneracy_profile(got) == degeneracy_profile(sp) && matching_cost(sp, got) < 1e-6;
        failures += ok ? 0 : 1;
    }
    EXPECT_EQ(failures, 0);
}

TEST(StateToPoints, RoundTripRandomStates) {
    std::mt19937_64 rng(35);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const auto psi = random_symmetric_state(n, rng);
        const auto sp = state_to_points(psi);
        EXPECT_NO_THROW(sp.validate());
        EXPECT_GT(points_to_state(sp).fidelity(psi), 1 - 1e-8);
    }
}

TEST(StateToPoints, RotationCovariance) {
    std::mt19937_64 rng(36);
    const auto ghz = from_named("ghz", 3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = random_unitary(rng);
        auto want = state_to_points(ghz);
        for (auto& c : want.clusters) {
            c.point = u.apply(c.point);
        }
        EXPECT_LT(matching_cost(want, state_to_points(rotate(ghz, u))), 1e-10);
    }
}

TEST(DegeneracyProfile, Examples) {
    EXPECT_EQ(degeneracy_profile(state_to_points(from_named("d3plus", 4))), (std::vector<int>{3, 1}));
    for (int n = 2; n <= 8; ++n) {
        for (int k = 1; k < n; ++k) {
            EXPECT_EQ(degeneracy_profile(state_to_points(dicke_state(n, k))),
                      (std::vector<int>{std::max(k, n - k), std::min(k, n - k)}));
        }
    }
}

TEST(IsDickeUpToRotation, Examples) {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        const auto ax = is_dicke_up_to_rotation(rotate(dicke_state(4, 2), random_unitary(rng)));
        ASSERT_TRUE(ax.has_value());
        EXPECT_EQ(ax->k, 2);
    }
    EXPECT_FALSE(is_dicke_up_to_rotation(from_named("ghz", 3)).has_value());
    const auto p = is_dicke_up_to_rotation(dicke_state(5, 0));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->k, 0);
    EXPECT_TRUE(equivalent(p->axis, qubits::zero()));
}

TEST(IsDickeUpToRotation, AxisReproducesState) {
    std::mt19937_64 rng(38);
    for (int n = 2; n <= 8; ++n) {
        for (int k = 1; k < n; ++k) {
            const auto psi = rotate(dicke_state(n, k), random_unitary(rng));
            const auto ax = is_dicke_up_to_rotation(psi);
            ASSERT_TRUE(ax.has_value());
            EXPECT_EQ(ax->k, std::min(k, n - k));
            EXPECT_GT(rotate(dicke_state(n, ax->k), rotation_to(ax->axis)).fidelity(psi), 1 - 1e-9);
        }
    }
}

TEST(MajoranaSpectrum, Validate) {
    EXPECT_THROW((MajoranaSpectrum{3, {{qubits::zero(), 2}}}.validate()), DomainError);
    EXPECT_THROW((MajoranaSpectrum{2, {{qubits::zero(), 1}, {qubits::zero(), 1}}}.validate()), DomainError);
    EXPECT_NO_THROW((MajoranaSpectrum{2, {{qubits::zero(), 1}, {qubits::one(), 1}}}.validate()));
}
