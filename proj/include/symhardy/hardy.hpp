#pragma once

// Hardy-paradox measurements for symmetric states.
//
// General branch: for a Majorana point eta of psi, the projected state
// <eta|psi> has a Majorana point mu that is not one of psi's. Measuring
// setting 1 = {eta, eta_perp} and setting 0 = {mu_perp, mu} on every party
// gives
//   P(0..0|0..0) = |<mu_perp^n|psi>|^2 > 0,
//   P(0..0|0..1..0) = |<eta mu_perp^{n-1}|psi>|^2 = 0,
//   P(1..1|1..1) = |<eta_perp^n|psi>|^2 = 0.
// Dicke branch: rotated Dicke states have no such mu and use the
// {|+>,|->} / theta settings instead.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "symhardy/bell.hpp"
#include "symhardy/majorana.hpp"
#include "symhardy/optimize.hpp"
#include "symhardy/symcore.hpp"

namespace symhardy {

enum class HardyBranch { general, dicke };

inline const char* to_string(HardyBranch b) { return b == HardyBranch::general ? "general" : "dicke"; }

struct HardyMeasurements {
    MeasurementBasis setting0;
    MeasurementBasis setting1;
    PureQubit anchor_mp;
    PureQubit new_mp;
    HardyBranch branch = HardyBranch::general;
    std::optional<double> theta;

    SettingsAssignment settings(int n) const { return SettingsAssignment::identical(n, setting0, setting1); }
};

struct HardyConditionReport {
    double p1 = 0.0;
    double max_p2_residual = 0.0;
    double p5_residual = 0.0;
    bool satisfied = false;
};

struct HardyTolerances {
    double residual = 1e-9;
    double cluster = kDefaultClusterTol;
};

/// setting 0 = {|+>, |->}; setting 1 = {cos(t/2)|0> - sin(t/2)|1>, sin(t/2)|0> + cos(t/2)|1>}.
inline std::pair<MeasurementBasis, MeasurementBasis> dicke_bases(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {MeasurementBasis{qubits::plus(), qubits::minus()},
            MeasurementBasis{PureQubit{cplx(c), cplx(-s)}, PureQubit{cplx(s), cplx(c)}}};
}

/// Dicke-branch settings for S(n,k) with theta maximizing the rescaled
/// Bell value. A positive value is known for 1 < k < n; other k are
/// searched all the same and the value is whatever the search finds.
inline HardyMeasurements dicke_measurements(int n, int k, int grid_points = 4096) {
    if (k == 0 || k == n) {
        throw SeparableError("S(n,0) and S(n,n) are product states; no Hardy test");
    }
    if (n < 2 || k < 0 || k > n) {
        throw DomainError("dicke_measurements requires n >= 2 and 1 <= k <= n-1");
    }
    const auto best = dicke_theta_search(n, k, grid_points);
    const auto [s0, s1] = dicke_bases(best.theta);
    return {s0, s1, qubits::zero(), qubits::one(), HardyBranch::dicke, best.theta};
}

/// p1, the largest single-flip probability, and the all-ones probability
/// with the same two bases on every party.
inline HardyConditionReport check_hardy_conditions(const SymmetricState& state, const HardyMeasurements& m,
                                                   double tol = HardyTolerances{}.residual) {
    const int n = state.n();
    const auto un = static_cast<std::size_t>(n);
    const auto s = m.settings(n);
    HardyConditionReport r;
    r.p1 = joint_probability(state, s, Bits(un, 0), Bits(un, 0));
    for (std::size_t i = 0; i < un; ++i) {
        Bits choice(un, 0);
        choice[i] = 1;
        r.max_p2_residual = std::max(r.max_p2_residual, joint_probability(state, s, choice, Bits(un, 0)));
    }
    r.p5_residual = joint_probability(state, s, Bits(un, 1), Bits(un, 1));
    r.satisfied = r.p1 > tol && r.max_p2_residual < tol && r.p5_residual < tol;
    return r;
}

namespace detail {

struct HardyCandidate {
    HardyMeasurements m;
    double p1 = 0.0;
    double residual = 0.0;
    double min_distance = 0.0;
};

/// Orders candidates: larger p1, then larger distance from the original
/// points, then smaller Bloch angles of (eta, mu).
inline bool better(const HardyCandidate& x, const HardyCandidate& y) {
    constexpr double kTie = 1e-12;
    if (std::abs(x.p1 - y.p1) > kTie) {
        return x.p1 > y.p1;
    }
    if (std::abs(x.min_distance - y.min_distance) > kTie) {
        return x.min_distance > y.min_distance;
    }
    const auto kx = std::pair{x.m.anchor_mp.angles(), x.m.new_mp.angles()};
    const auto ky = std::pair{y.m.anchor_mp.angles(), y.m.new_mp.angles()};
    return kx < ky;
}

inline HardyMeasurements dicke_branch(const SymmetricState& state, const DickeAxis& ax) {
    const int n = state.n();
    if (ax.k == 0) {
        throw SeparableError("product state (single Majorana point); no Hardy test");
    }
    const Mat2 v = rotation_to(ax.axis);
    HardyMeasurements m = dicke_measurements(n, ax.k);
    m.setting0 = apply(v, m.setting0);
    m.setting1 = apply(v, m.setting1);
    m.anchor_mp = v.apply(m.anchor_mp);
    m.new_mp = v.apply(m.new_mp);
    return m;
}

} // namespace detail

/// Builds Hardy measurements. Rotated Dicke states take the Dicke branch;
/// all other entangled states the general branch.
inline HardyMeasurements construct_hardy_measurements(const SymmetricState& state, const HardyTolerances& tol = {}) {
    const int n = state.n();
    if (n < 2) {
        throw DomainError("Hardy measurements need n >= 2");
    }
    const auto spectrum = state_to_points(state, tol.cluster);
    if (spectrum.clusters.size() == 1) {
        throw SeparableError("product state (single Majorana point); no Hardy test");
    }
    if (const auto ax = is_dicke_up_to_rotation(spectrum, tol.cluster)) {
        return detail::dicke_branch(state, *ax);
    }

    std::optional<detail::HardyCandidate> best;
    for (const auto& cl : spectrum.clusters) {
        const PureQubit eta = cl.point;
        const auto proj = project_qubit(state, eta);
        if (!proj.valid()) {
            continue;
        }
        const auto sub = state_to_points(*proj.state, tol.cluster);
        for (const auto& sc : sub.clusters) {
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& oc : spectrum.clusters) {
                dmin = std::min(dmin, chordal_distance(sc.point, oc.point));
            }
            if (!(dmin > tol.cluster)) {
                continue;
            }
            const PureQubit mu = sc.point;
            // the zero of <eta mu_perp^{n-1}|psi> fixes which element of
            // setting 0 is outcome 0; try both labelings and keep the one
            // the conditions accept
            for (const auto& s0 : {MeasurementBasis{antipode(mu), mu}, MeasurementBasis{mu, antipode(mu)}}) {
                HardyMeasurements m{s0, MeasurementBasis{eta, antipode(eta)}, eta, mu, HardyBranch::general, std::nullopt};
                const auto rep = check_hardy_conditions(state, m, tol.residual);
                if (!rep.satisfied) {
                    continue;
                }
                detail::HardyCandidate c{m, rep.p1, std::max(rep.max_p2_residual, rep.p5_residual), dmin};
                if (!best || detail::better(c, *best)) {
                    best = c;
                }
            }
        }
    }
    if (!best) {
        throw AnalysisError("no Hardy candidate satisfies the conditions at the residual tolerance");
    }
    return best->m;
}

} // namespace symhardy
