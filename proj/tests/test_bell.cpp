#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symhardy/bell.hpp"
#include "symhardy/permanent.hpp"
#include "symhardy/random.hpp"

using namespace symhardy;

namespace {

SettingsAssignment random_settings(int n, std::mt19937_64& rng) {
    SettingsAssignment s;
    for (int i = 0; i < n; ++i) {
        s.per_party.push_back({MeasurementBasis::from_vector(random_qubit(rng)),
                               MeasurementBasis::from_vector(random_qubit(rng))});
    }
    return s;
}

Bits random_bits(std::size_t len, std::mt19937_64& rng) {
    Bits b(len);
    for (auto& x : b) {
        x = static_cast<int>(rng() & 1);
    }
    return b;
}

SettingsAssignment computational(int n) {
    const MeasurementBasis z{qubits::zero(), qubits::one()};
    return SettingsAssignment::identical(n, z, z);
}

} // namespace

TEST(Permanent, MatchesPermutationSum) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    for (int n = 0; n <= 8; ++n) {
        std::vector<cplx> a(static_cast<std::size_t>(n * n));
        for (auto& x : a) {
            x = cplx(g(rng), g(rng));
        }
        const cplx want = n == 0 ? cplx(1.0) : oracle::permanent(a, n);
        EXPECT_LT(std::abs(permanent(a, n) - want), 1e-10 * std::max(1.0, std::abs(want))) << "n = " << n;
    }
    EXPECT_THROW(permanent(std::vector<cplx>(5), 2), DomainError);
}

TEST(JointProbability, Examples) {
    EXPECT_NEAR(joint_probability(from_named("ghz", 3), computational(3), bits("000"), bits("000")), 0.5, 1e-12);
    EXPECT_NEAR(joint_probability(dicke_state(2, 1), computational(2), bits("00"), bits("01")), 0.5, 1e-12);
    EXPECT_THROW(joint_probability(dicke_state(2, 1), computational(2), bits("0"), bits("01")), DomainError);
    EXPECT_THROW(joint_probability(dicke_state(2, 1), computational(3), bits("00"), bits("01")), DomainError);
}

TEST(JointProbability, PathsAgreeWithDenseOracle) {
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto psi = random_symmetric_state(n, rng);
            const auto s = random_settings(n, rng);
            const auto choice = random_bits(static_cast<std::size_t>(n), rng);
            const auto out = random_bits(static_cast<std::size_t>(n), rng);
            std::vector<int> all(static_cast<std::size_t>(n));
            std::iota(all.begin(), all.end(), 0);
            std::vector<PureQubit> bras;
            for (int i = 0; i < n; ++i) {
                bras.push_back(s.projector(i, choice[static_cast<std::size_t>(i)], out[static_cast<std::size_t>(i)]));
            }
            const double want = oracle::probability(to_statevector(psi), n, all, bras);
            for (auto path : {ContractionPath::projection, ContractionPath::permanent, ContractionPath::dense}) {
                const double got = joint_probability(psi, s, choice, out, std::nullopt, path);
                const double rel = std::abs(got - want) / std::max(want, 1e-300);
                if (want > 1e-12) {
                    worst = std::max(worst, rel);
                } else {
                    EXPECT_LT(got, 1e-12);
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(JointProbability, Normalization) {
    std::mt19937_64 rng(43);
    for (int n = 1; n <= 7; ++n) {
        const auto psi = random_symmetric_state(n, rng);
        const auto s = random_settings(n, rng);
        const auto choice = random_bits(static_cast<std::size_t>(n), rng);
        double total = 0.0;
        for (unsigned o = 0; o < (1u << n); ++o) {
            Bits out(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                out[static_cast<std::size_t>(i)] = static_cast<int>((o >> (n - 1 - i)) & 1);
            }
            total += joint_probability(psi, s, choice, out);
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(JointProbability, MarginalConsistency) {
    std::mt19937_64 rng(44);
    for (int n = 2; n <= 8; ++n) {
        const auto psi = random_symmetric_state(n, rng);
        const auto s = random_settings(n, rng);
        const auto choice = random_bits(static_cast<std::size_t>(n), rng);
        // random nonempty proper subset
        std::vector<int> sub;
        while (sub.empty() || static_cast<int>(sub.size()) == n) {
            sub.clear();
            for (int i = 0; i < n; ++i) {
                if (rng() & 1) {
                    sub.push_back(i);
                }
            }
        }
        Bits sub_choice;
        for (int p : sub) {
            sub_choice.push_back(choice[static_cast<std::size_t>(p)]);
        }
        const auto sub_out = random_bits(sub.size(), rng);
        double total = 0.0;
        for (unsigned o = 0; o < (1u << n); ++o) {
            Bits out(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                out[static_cast<std::size_t>(i)] = static_cast<int>((o >> (n - 1 - i)) & 1);
            }
            bool match = true;
            for (std::size_t t = 0; t < sub.size(); ++t) {
                match = match && out[static_cast<std::size_t>(sub[t])] == sub_out[t];
            }
            if (match) {
                total += joint_probability(psi, s, choice, out);
            }
        }
        for (auto path : {ContractionPath::projection, ContractionPath::permanent, ContractionPath::dense}) {
            EXPECT_NEAR(joint_probability(psi, s, sub_choice, sub_out, sub, path), total, 1e-9);
        }
    }
}

TEST(HardyFunctional, Shape) {
    const auto f2 = hardy_functional(2);
    ASSERT_EQ(f2.terms.size(), 4u);
    EXPECT_EQ(f2.terms[0].coefficient, 1.0);
    EXPECT_EQ(f2.terms[0].settings, bits("00"));
    EXPECT_EQ(f2.terms[1].settings, bits("01"));
    EXPECT_EQ(f2.terms[2].settings, bits("10"));
    EXPECT_EQ(f2.terms[3].settings, bits("11"));
    EXPECT_EQ(f2.terms[3].outcomes, bits("11"));
    for (int n = 2; n <= 8; ++n) {
        const auto f = hardy_functional(n);
        EXPECT_EQ(f.terms.size(), static_cast<std::size_t>(n + 2));
        double sum = 0.0;
        for (const auto& t : f.terms) {
            sum += t.coefficient;
        }
        EXPECT_EQ(sum, -n);
    }
    EXPECT_THROW(hardy_functional(1), DomainError);
}

TEST(PersistenceFunctional, Shape) {
    const auto q = persistence_functional(4, 3);
    ASSERT_EQ(q.terms.size(), 8u);
    EXPECT_EQ(q.terms[6].parties, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(q.terms[6].settings, bits("111"));
    EXPECT_EQ(q.terms[6].outcomes, bits("111"));
    EXPECT_EQ(q.terms[7].parties, (std::vector<int>{0, 1}));
    for (int n = 3; n <= 7; ++n) {
        EXPECT_EQ(persistence_functional(n, 2).terms.size(), static_cast<std::size_t>(n + 3));
        EXPECT_EQ(persistence_functional(n, 2).terms.back().parties.size(), static_cast<std::size_t>(n - 1));
    }
    EXPECT_THROW(persistence_functional(4, 4), DomainError);
    EXPECT_THROW(persistence_functional(4, 1), DomainError);
}

TEST(EvaluateFunctional, PersistenceNeverExceedsHardy) {
    std::mt19937_64 rng(45);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 4);
        const int d = 2 + static_cast<int>(rng() % static_cast<unsigned>(n - 2));
        const auto psi = random_symmetric_state(n, rng);
        const auto s = random_settings(n, rng);
        EXPECT_LE(evaluate_functional(psi, persistence_functional(n, d), s),
                  evaluate_functional(psi, hardy_functional(n), s) + 1e-15);
    }
}

TEST(EvaluateFunctional, ProductStatesStayBelowLhvBound) {
    std::mt19937_64 rng(46);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const auto psi = product_state(random_qubit(rng), n);
        EXPECT_LE(evaluate_functional(psi, hardy_functional(n), random_settings(n, rng)), 1e-12);
    }
    EXPECT_LE(evaluate_functional(dicke_state(3, 0), hardy_functional(3), computational(3)), 0.0);
}

TEST(LhvMax, HardyIsZero) {
    for (int n = 2; n <= 6; ++n) {
        const auto f = hardy_functional(n);
        const auto r = lhv_max(f);
        EXPECT_EQ(r.value, 0.0);
        EXPECT_EQ(strategy_value(f, r.witness), r.value);
        const LhvStrategy ones_then_zero{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1)};
        EXPECT_EQ(strategy_value(f, ones_then_zero), 0.0);
    }
}

TEST(LhvMax, PersistenceAndSingleTerm) {
    EXPECT_EQ(lhv_max(persistence_functional(4, 3)).value, 0.0);
    const BellFunctional one{1, {{1.0, {0}, bits("0"), bits("0")}}};
    EXPECT_EQ(lhv_max(one).value, 1.0);
    EXPECT_THROW(lhv_max(hardy_functional(11)), ResourceError);
}

TEST(LhvMax, BoundsEveryStrategy) {
    std::mt19937_64 rng(47);
    for (int n = 2; n <= 5; ++n) {
        const auto f = persistence_functional(std::max(n, 3), 2);
        const double best = lhv_max(f).value;
        for (int rep = 0; rep < 200; ++rep) {
            LhvStrategy s;
            for (int i = 0; i < f.n; ++i) {
                s.per_party.push_back(static_cast<std::uint8_t>(rng() & 3));
            }
            EXPECT_LE(strategy_value(f, s), best);
        }
    }
}

TEST(LhvMax, BoundsQuantumValueOfProductStates) {
    // product states with product measurements are local models, so their values lie under the LHV maximum
    std::mt19937_64 rng(48);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const auto f = persistence_functional(n, 2);
        const auto psi = product_state(random_qubit(rng), n);
        EXPECT_LE(evaluate_functional(psi, f, random_settings(n, rng)), lhv_max(f).value + 1e-12);
    }
}

TEST(BellFunctional, ValidateRejectsBadTerms) {
    BellFunctional f{2, {{1.0, {1, 0}, bits("00"), bits("00")}}};
    EXPECT_THROW(f.validate(), DomainError);
    f.terms = {{1.0, {0, 1}, bits("0"), bits("00")}};
    EXPECT_THROW(f.validate(), DomainError);
    EXPECT_THROW(bits("012"), ParseError);
}
