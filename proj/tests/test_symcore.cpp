#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symhardy/random.hpp"
#include "symhardy/symcore.hpp"

using namespace symhardy;

namespace {

void expect_coeffs(const SymmetricState& s, const std::vector<cplx>& want, double tol = 1e-12) {
    ASSERT_EQ(s.coeffs().size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
        EXPECT_NEAR(std::abs(s.coeffs()[k] - want[k]), 0.0, tol) << "k = " << k;
    }
}

} // namespace

TEST(DickeState, Examples) {
    expect_coeffs(dicke_state(3, 1), {0, 1, 0, 0});
    expect_coeffs(dicke_state(2, 1), {0, 1, 0});
    const auto s = dicke_state(4, 0);
    expect_coeffs(s, {1, 0, 0, 0, 0});
    const auto v = to_statevector(s);
    EXPECT_NEAR(std::abs(v[0]), 1.0, 1e-15);
}

TEST(DickeState, RangeErrors) {
    EXPECT_THROW(dicke_state(3, 4), DomainError);
    EXPECT_THROW(dicke_state(3, -1), DomainError);
    EXPECT_THROW(dicke_state(0, 0), DomainError);
}

TEST(DickeState, Orthonormal) {
    for (int n = 1; n <= 8; ++n) {
        for (int j = 0; j <= n; ++j) {
            for (int k = 0; k <= n; ++k) {
                EXPECT_NEAR(dicke_state(n, j).fidelity(dicke_state(n, k)), j == k ? 1.0 : 0.0, 1e-12);
            }
        }
    }
}

TEST(FromNamed, Tetrahedron) {
    expect_coeffs(from_named("tetrahedron", 4), {std::sqrt(1.0 / 3.0), 0, 0, std::sqrt(2.0 / 3.0), 0});
    EXPECT_NEAR(from_named("tetrahedron", 4).coeff(0).real(), 0.57735, 1e-5);
    EXPECT_NEAR(from_named("tetrahedron", 4).coeff(3).real(), 0.81650, 1e-5);
}

TEST(FromNamed, Ghz) {
    const double h = std::numbers::sqrt2 / 2;
    expect_coeffs(from_named("ghz", 3), {h, 0, 0, h});
}

TEST(FromNamed, D3plusMatchesDenseSymmetrization) {
    const auto dense = oracle::symmetrize({qubits::zero(), qubits::zero(), qubits::zero(), qubits::plus()});
    const auto want = oracle::dicke_coefficients(dense, 4);
    const auto got = from_named("d3plus", 4);
    EXPECT_GT(SymmetricState(want).fidelity(got), 1.0 - 1e-12);
    EXPECT_NEAR(oracle::fidelity(to_statevector(got), dense), 1.0, 1e-12);
}

TEST(FromNamed, Errors) {
    EXPECT_THROW(from_named("nope", 3), ParseError);
    EXPECT_THROW(from_named("dicke", 3), ParseError);
    EXPECT_THROW(from_named("tetrahedron", 5), DomainError);
    expect_coeffs(from_named("w", 3), {0, 1, 0, 0});
    expect_coeffs(from_named("dicke", 4, 2), {0, 0, 1, 0, 0});
}

TEST(ProjectQubit, Examples) {
    const auto s31 = dicke_state(3, 1);
    auto p = project_qubit(s31, qubits::zero());
    ASSERT_TRUE(p.valid());
    EXPECT_NEAR(p.norm, std::sqrt(2.0 / 3.0), 1e-12);
    EXPECT_GT(p.state->fidelity(dicke_state(2, 1)), 1.0 - 1e-12);

    p = project_qubit(s31, qubits::one());
    ASSERT_TRUE(p.valid());
    EXPECT_NEAR(p.norm, std::sqrt(1.0 / 3.0), 1e-12);
    EXPECT_GT(p.state->fidelity(dicke_state(2, 0)), 1.0 - 1e-12);

    std::mt19937_64 rng(3);
    const auto eta = random_qubit(rng);
    p = project_qubit(product_state(eta, 5), eta);
    EXPECT_NEAR(p.norm, 1.0, 1e-12);
    EXPECT_GT(p.state->fidelity(product_state(eta, 4)), 1.0 - 1e-12);

    EXPECT_FALSE(project_qubit(dicke_state(3, 3), qubits::zero()).valid());
    EXPECT_THROW(project_qubit(SymmetricState({1, 0}), qubits::zero()), DomainError);
}

TEST(ProjectQubit, MatchesDenseContraction) {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 10; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto psi = random_symmetric_state(n, rng);
            const auto chi = random_qubit(rng);
            const auto p = project_qubit(psi, chi);
            ASSERT_TRUE(p.valid());
            const auto mine = to_statevector(*p.state);
            for (int party = 0; party < n; ++party) {
                const auto dense = oracle::contract(to_statevector(psi), n, party, chi);
                // global phase: align on the largest entry
                std::size_t big = 0;
                for (std::size_t i = 0; i < dense.size(); ++i) {
                    if (std::abs(dense[i]) > std::abs(dense[big])) {
                        big = i;
                    }
                }
                const cplx phase = dense[big] / (p.norm * mine[big]);
                for (std::size_t i = 0; i < dense.size(); ++i) {
                    EXPECT_NEAR(std::abs(p.norm * phase * mine[i] - dense[i]), 0.0, 1e-10);
                }
            }
        }
    }
}

TEST(ProjectQubit, DickeRecurrence) {
    std::mt19937_64 rng(5);
    for (int n = 2; n <= 8; ++n) {
        for (int k = 0; k <= n; ++k) {
            const auto chi = random_qubit(rng);
            const auto raw = contract_qubit(dicke_state(n, k).coeffs(), chi);
            std::vector<cplx> want(static_cast<std::size_t>(n), 0.0);
            if (k < n) {
                want[static_cast<std::size_t>(k)] += std::conj(chi.a) * std::sqrt(double(n - k) / n);
            }
            if (k > 0) {
                want[static_cast<std::size_t>(k - 1)] += std::conj(chi.b) * std::sqrt(double(k) / n);
            }
            for (std::size_t j = 0; j < want.size(); ++j) {
                EXPECT_NEAR(std::abs(raw[j] - want[j]), 0.0, 1e-12);
            }
        }
    }
}

TEST(ToStatevector, Examples) {
    const double h = std::numbers::sqrt2 / 2;
    auto v = to_statevector(dicke_state(2, 1));
    ASSERT_EQ(v.size(), 4u);
    EXPECT_NEAR(std::abs(v[0]), 0.0, 1e-15);
    EXPECT_NEAR(v[1].real(), h, 1e-15);
    EXPECT_NEAR(v[2].real(), h, 1e-15);
    EXPECT_NEAR(std::abs(v[3]), 0.0, 1e-15);

    v = to_statevector(from_named("ghz", 3));
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(std::abs(v[i]), i == 0 || i == 7 ? h : 0.0, 1e-15);
    }
    EXPECT_THROW(to_statevector(dicke_state(15, 3)), ResourceError);
}

TEST(ToStatevector, WeightAmplitudesAndNorm) {
    std::mt19937_64 rng(8);
    for (int n = 1; n <= 10; ++n) {
        const auto psi = random_symmetric_state(n, rng);
        const auto v = to_statevector(psi);
        double nrm = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int k = std::popcount(i);
            EXPECT_NEAR(std::abs(v[i] - psi.coeff(k) / std::sqrt(binomial(n, k))), 0.0, 1e-14);
            nrm += std::norm(v[i]);
        }
        EXPECT_NEAR(nrm, 1.0, 1e-10);
    }
}

TEST(Rotate, IdentityAndFlip) {
    std::mt19937_64 rng(2);
    const auto psi = random_symmetric_state(6, rng);
    EXPECT_GT(rotate(psi, Mat2::identity()).fidelity(psi), 1.0 - 1e-12);
    for (int n = 1; n <= 7; ++n) {
        for (int k = 0; k <= n; ++k) {
            EXPECT_GT(rotate(dicke_state(n, k), Mat2::pauli_x()).fidelity(dicke_state(n, n - k)), 1.0 - 1e-12);
        }
    }
}

TEST(Rotate, MatchesDenseOracle) {
    std::mt19937_64 rng(21);
    for (int n = 1; n <= 10; ++n) {
        const auto psi = random_symmetric_state(n, rng);
        const auto u = random_unitary(rng);
        const auto dense = oracle::apply_all(to_statevector(psi), n, u);
        EXPECT_NEAR(oracle::fidelity(dense, to_statevector(rotate(psi, u))), 1.0, 1e-10) << "n = " << n;
    }
}

TEST(Rotate, Composes) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const auto psi = random_symmetric_state(7, rng);
        const auto u = random_unitary(rng);
        const auto v = random_unitary(rng);
        EXPECT_GT(rotate(rotate(psi, u), v).fidelity(rotate(psi, v * u)), 1.0 - 1e-9);
    }
}

TEST(Rotate, RejectsNonUnitary) {
    Mat2 m;
    m(0, 0) = 2.0;
    EXPECT_THROW(rotate(dicke_state(2, 1), m), DomainError);
}

TEST(Antipode, Examples) {
    EXPECT_TRUE(equivalent(antipode(qubits::zero()), qubits::one()));
    EXPECT_TRUE(equivalent(antipode(qubits::plus()), qubits::minus()));
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 100; ++rep) {
        const auto q = random_qubit(rng);
        EXPECT_LT(std::abs(inner(antipode(q), q)), 1e-12);
    }
}

TEST(PureQubit, BlochRoundTrip) {
    std::mt19937_64 rng(10);
    for (int rep = 0; rep < 100; ++rep) {
        const auto q = random_qubit(rng);
        const auto [t, p] = q.angles();
        EXPECT_TRUE(equivalent(PureQubit::from_bloch(t, p), q, 1e-12));
    }
    EXPECT_THROW(PureQubit::normalized(0.0, 0.0), DomainError);
}

TEST(MeasurementBasis, Orthonormal) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        const auto b = MeasurementBasis::from_vector(random_qubit(rng));
        EXPECT_TRUE(b.is_orthonormal());
        EXPECT_TRUE(apply(random_unitary(rng), b).is_orthonormal());
    }
}

TEST(SymmetricState, NormalizesAndRejectsZero) {
    const SymmetricState s({1.0, 0.0, 1.0});
    EXPECT_NEAR(std::abs(s.coeff(0)), std::numbers::sqrt2 / 2, 1e-15);
    EXPECT_THROW(SymmetricState({0.0, 0.0}), DomainError);
    EXPECT_THROW(SymmetricState({1.0}), DomainError);
}
