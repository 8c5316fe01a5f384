#pragma once

// Reproduction suite: ten numbered checks with fixed seeds and tolerances,
// shared by the acceptance test binary and `symhardy reproduce`.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symhardy/bell.hpp"
#include "symhardy/hardy.hpp"
#include "symhardy/majorana.hpp"
#include "symhardy/optimize.hpp"
#include "symhardy/random.hpp"
#include "symhardy/symcore.hpp"

namespace symhardy::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace tol {
inline constexpr double kD3Target = 0.0141 - 1e-3;
inline constexpr double kTetraLow = -0.0609 - 5e-3;
inline constexpr double kTetraHigh = 0.0;
inline constexpr double kHardyResidual = 1e-7;
inline constexpr double kHardyValue = 1e-9;
inline constexpr double kBackSubstitution = 1e-9;
inline constexpr double kPointInfidelity = 1e-6;
inline constexpr double kStateInfidelity = 1e-8;
inline constexpr double kOracleRelative = 1e-9;
inline constexpr double kUnchangedOverlap = 1e-6;
inline constexpr double kPersistence = 1e-12;
} // namespace tol

inline constexpr std::uint64_t kSeed = 20240611;

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

inline OptimizationResult fig1_run(const char* name) {
    OptimizationConfig cfg;
    cfg.restarts = 64;
    cfg.seed = kSeed;
    return optimize_settings(from_named(name, 4), persistence_functional(4, 3), cfg);
}

/// Random spectrum whose state is not a rotated Dicke state.
inline MajoranaSpectrum random_non_dicke_spectrum(int n, std::mt19937_64& rng) {
    while (true) {
        MajoranaSpectrum s{n, {}};
        for (int d : random_degeneracies(n, rng)) {
            s.clusters.push_back({random_qubit(rng), d});
        }
        if (s.clusters.size() >= 3) {
            return s;
        }
    }
}

/// Smallest achievable maximum infidelity over degeneracy-preserving
/// bijections between the clusters of a and b (infinite if none exists).
inline double matching_infidelity(const MajoranaSpectrum& a, const MajoranaSpectrum& b) {
    const std::size_t m = a.clusters.size();
    if (b.clusters.size() != m || m > 16) {
        return std::numeric_limits<double>::infinity();
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(std::size_t{1} << m, inf);
    dp[0] = 0.0;
    for (std::size_t mask = 0; mask < dp.size(); ++mask) {
        if (dp[mask] == inf) {
            continue;
        }
        const auto i = static_cast<std::size_t>(std::popcount(mask));
        if (i == m) {
            continue;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if ((mask >> j) & 1 || a.clusters[i].degeneracy != b.clusters[j].degeneracy) {
                continue;
            }
            const double c = 1.0 - std::norm(inner(a.clusters[i].point, b.clusters[j].point));
            const std::size_t next = mask | (std::size_t{1} << j);
            dp[next] = std::min(dp[next], std::max(dp[mask], c));
        }
    }
    return dp.back();
}

} // namespace detail

inline CriterionResult criterion_1() {
    const auto r = detail::fig1_run("d3plus");
    return {1, "D3 persistence Q_3^4 >= 0.0141", r.best_value >= tol::kD3Target,
            "best " + detail::fmt(r.best_value) + ", need >= " + detail::fmt(tol::kD3Target)};
}

inline CriterionResult criterion_2() {
    const auto r = detail::fig1_run("tetrahedron");
    const double top = *std::max_element(r.restart_values.begin(), r.restart_values.end());
    const bool ok = r.best_value >= tol::kTetraLow && r.best_value <= tol::kTetraHigh && top <= 0.0;
    return {2, "tetrahedron Q_3^4 near -0.0609, no violation", ok,
            "best " + detail::fmt(r.best_value) + ", window [" + detail::fmt(tol::kTetraLow) + ", " +
                detail::fmt(tol::kTetraHigh) + "], max restart " + detail::fmt(top)};
}

inline CriterionResult criterion_3() {
    bool ok = true;
    std::string d;
    for (int n = 2; n <= 6; ++n) {
        const double v = lhv_max(hardy_functional(n)).value;
        ok = ok && v == 0.0;
        d += "n=" + std::to_string(n) + ":" + detail::fmt(v) + " ";
    }
    return {3, "LHV max of P^n is 0, n = 2..6", ok, d};
}

inline CriterionResult criterion_4() {
    bool ok = true;
    std::string d;
    for (const auto& [n, dd] : std::vector<std::pair<int, int>>{{4, 2}, {4, 3}, {5, 3}, {6, 4}}) {
        const double v = lhv_max(persistence_functional(n, dd)).value;
        ok = ok && v == 0.0;
        d += "(" + std::to_string(n) + "," + std::to_string(dd) + "):" + detail::fmt(v) + " ";
    }
    return {4, "LHV max of Q_d^n is 0", ok, d};
}

inline CriterionResult criterion_5() {
    std::mt19937_64 rng(kSeed + 5);
    int bad = 0;
    int total = 0;
    double worst_residual = 0.0;
    double worst_gap = 0.0;
    for (int n = 3; n <= 8; ++n) {
        const auto f = hardy_functional(n);
        for (int i = 0; i < 100; ++i) {
            ++total;
            const auto st = random_symmetric_state(n, rng);
            try {
                const auto m = construct_hardy_measurements(st);
                const auto rep = check_hardy_conditions(st, m);
                const double value = evaluate_functional(st, f, m.settings(n));
                const double res = std::max(rep.max_p2_residual, rep.p5_residual);
                worst_residual = std::max(worst_residual, res);
                worst_gap = std::max(worst_gap, std::abs(value - rep.p1));
                if (m.branch != HardyBranch::general || res >= tol::kHardyResidual || !(rep.p1 > 0.0) ||
                    std::abs(value - rep.p1) > tol::kHardyValue) {
                    ++bad;
                }
            } catch (const std::exception&) {
                ++bad;
            }
        }
    }
    return {5, "Hardy construction on random states", bad == 0,
            std::to_string(bad) + "/" + std::to_string(total) + " failures, worst residual " +
                detail::fmt(worst_residual) + ", worst |P - p1| " + detail::fmt(worst_gap)};
}

inline CriterionResult criterion_6() {
    bool ok = true;
    double min_value = std::numeric_limits<double>::infinity();
    double worst_sub = 0.0;
    int roots = 0;
    for (int n = 4; n <= 10; ++n) {
        for (int k = 2; k <= n - 2; ++k) {
            const auto r = dicke_theta_search(n, k);
            min_value = std::min(min_value, r.value);
            ok = ok && r.value > 0.0;
            for (double t : closed_form_thetas(n, k)) {
                ++roots;
                const double x = (n - k) / double(n) * std::cos(t / 2) - k / double(n) * std::sin(t / 2);
                worst_sub = std::max(worst_sub, std::abs(x * x - 1.0 / (4.0 * n)));
            }
        }
    }
    ok = ok && roots > 0 && worst_sub < tol::kBackSubstitution;
    return {6, "Dicke theta search positive, closed forms consistent", ok,
            "min P' " + detail::fmt(min_value) + ", " + std::to_string(roots) + " closed-form roots, worst back-substitution " +
                detail::fmt(worst_sub)};
}

inline CriterionResult criterion_7() {
    std::mt19937_64 rng(kSeed + 7);
    int bad = 0;
    double worst_point = 0.0;
    double worst_state = 0.0;
    for (int t = 0; t < 500; ++t) {
        const int n = std::uniform_int_distribution<int>(1, 10)(rng);
        MajoranaSpectrum s{n, {}};
        for (int d : random_degeneracies(n, rng)) {
            s.clusters.push_back({random_qubit(rng), d});
        }
        const auto st = points_to_state(s);
        try {
            const auto back = state_to_points(st);
            const double pi = detail::matching_infidelity(s, back);
            const double si = 1.0 - st.fidelity(points_to_state(back));
            worst_point = std::max(worst_point, pi);
            worst_state = std::max(worst_state, si);
            if (degeneracy_profile(s) != degeneracy_profile(back) || !(pi < tol::kPointInfidelity) ||
                !(si < tol::kStateInfidelity)) {
                ++bad;
            }
        } catch (const std::exception&) {
            ++bad;
        }
    }
    return {7, "Majorana roundtrip on 500 random spectra", bad == 0,
            std::to_string(bad) + " failures, worst point infidelity " + detail::fmt(worst_point) +
                ", worst state infidelity " + detail::fmt(worst_state)};
}

inline CriterionResult criterion_8() {
    std::mt19937_64 rng(kSeed + 8);
    int bad = 0;
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = std::uniform_int_distribution<int>(2, 8)(rng);
        const auto st = random_symmetric_state(n, rng);
        SettingsAssignment s;
        for (int i = 0; i < n; ++i) {
            s.per_party.push_back({MeasurementBasis::from_vector(random_qubit(rng)),
                                   MeasurementBasis::from_vector(random_qubit(rng))});
        }
        // every third case marginalizes over a random subset
        std::vector<int> parties;
        for (int i = 0; i < n; ++i) {
            if (t % 3 != 0 || (rng() & 1) != 0) {
                parties.push_back(i);
            }
        }
        if (parties.empty()) {
            parties.push_back(0);
        }
        Bits choice;
        Bits outcome;
        for (std::size_t i = 0; i < parties.size(); ++i) {
            choice.push_back(static_cast<int>(rng() & 1));
            outcome.push_back(static_cast<int>(rng() & 1));
        }
        const double a = joint_probability(st, s, choice, outcome, parties, ContractionPath::permanent);
        const double b = joint_probability(st, s, choice, outcome, parties, ContractionPath::dense);
        const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
        worst = std::max(worst, rel);
        if (!(rel <= tol::kOracleRelative)) {
            ++bad;
        }
    }
    return {8, "permanent path matches dense oracle", bad == 0,
            std::to_string(bad) + "/1000 mismatches, worst relative error " + detail::fmt(worst)};
}

inline CriterionResult criterion_9() {
    std::mt19937_64 rng(kSeed + 9);
    int bad = 0;
    int equal_cases = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = std::uniform_int_distribution<int>(3, 8)(rng);
        const auto orig = detail::random_non_dicke_spectrum(n, rng);
        const auto st = points_to_state(orig);
        try {
            const auto sp = state_to_points(st);
            const PureQubit eta1 = sp.clusters.front().point;
            const auto proj = project_qubit(st, eta1);
            const auto sub = state_to_points(*proj.state);
            for (const auto& c : sp.clusters) {
                int m = 0;
                for (const auto& sc : sub.clusters) {
                    if (chordal_distance(sc.point, c.point) < kDefaultClusterTol) {
                        m = sc.degeneracy;
                    }
                }
                const bool in_range = m == c.degeneracy || m == c.degeneracy - 1;
                const bool equal_ok = m != c.degeneracy || std::abs(inner(eta1, c.point)) < tol::kUnchangedOverlap;
                equal_cases += m == c.degeneracy ? 1 : 0;
                if (!in_range || !equal_ok) {
                    ++bad;
                }
            }
        } catch (const std::exception&) {
            ++bad;
        }
    }
    return {9, "projected multiplicities drop by at most one", bad == 0,
            std::to_string(bad) + " counterexamples, " + std::to_string(equal_cases) + " unchanged multiplicities"};
}

inline CriterionResult criterion_10() {
    const auto d3 = from_named("d3plus", 4);
    const auto s = SettingsAssignment::identical(4, MeasurementBasis{}, MeasurementBasis{});
    bool ok = true;
    std::string d;
    for (int m = 2; m <= 4; ++m) {
        std::vector<int> first(static_cast<std::size_t>(m));
        std::iota(first.begin(), first.end(), 0);
        const auto ones = Bits(static_cast<std::size_t>(m), 1);
        const double p = joint_probability(d3, s, ones, ones, first);
        ok = ok && p < tol::kPersistence;
        d += "m=" + std::to_string(m) + ":" + detail::fmt(p) + " ";
    }
    return {10, "D3 all-ones probabilities vanish", ok, d};
}

inline std::vector<std::function<CriterionResult()>> all_criteria() {
    return {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
}

/// Runs the selected criteria (all when empty), timing each.
inline std::vector<CriterionResult> run(const std::vector<int>& ids = {}) {
    std::vector<CriterionResult> out;
    const auto all = all_criteria();
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[i]();
        } catch (const std::exception& e) {
            r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(r);
    }
    return out;
}

} // namespace symhardy::acceptance
