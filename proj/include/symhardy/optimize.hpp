#pragma once

// Settings optimization for Bell functionals and the Dicke-state angle
// machinery.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "symhardy/bell.hpp"
#include "symhardy/random.hpp"
#include "symhardy/symcore.hpp"

namespace symhardy {

// ---------------------------------------------------------------------------
// Dicke states with the {|+>,|->} / theta settings

/// P^n on S(n,k) with the theta settings, divided by C(n,k):
///   (1/2)^n - n (1/2)^{n-1} ((n-k)/n c - k/n s)^2 - c^{2k} s^{2n-2k},
/// c = cos(theta/2), s = sin(theta/2).
inline double rescaled_dicke_value(int n, int k, double theta) {
    if (n < 1 || k < 0 || k > n) {
        throw DomainError("rescaled_dicke_value requires 0 <= k <= n");
    }
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw DomainError("theta must lie in [0, pi]");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const double dn = n;
    const double x = (n - k) / dn * c - k / dn * s;
    return std::pow(0.5, n) - dn * std::pow(0.5, n - 1) * x * x - std::pow(c, 2 * k) * std::pow(s, 2 * (n - k));
}

/// Angles in [0, pi] where ((n-k)/n cos(theta/2) - k/n sin(theta/2))^2 = 1/(4n),
/// i.e. where the middle term equals (1/2)^{n+1}. With c = cos(theta/2)
/// this is
///   ((n-k)^2 + k^2) c^2 -/+ (n-k) sqrt(n) c + n/4 - k^2 = 0,
/// discriminant 8k^4 - k^2 n - 8k^3 n + 4k^2 n^2. Both sign branches are
/// solved; squaring admits spurious roots, which back-substitution removes.
inline std::vector<double> closed_form_thetas(int n, int k) {
    if (n < 2 || k < 1 || k > n - 1) {
        throw DomainError("closed_form_thetas requires 1 <= k <= n-1");
    }
    const double dn = n;
    const double dk = k;
    const double disc = 8.0 * std::pow(dk, 4) - dk * dk * dn - 8.0 * std::pow(dk, 3) * dn + 4.0 * dk * dk * dn * dn;
    if (disc < 0.0) {
        return {};
    }
    const double den = 2.0 * (2.0 * dk * dk - 2.0 * dk * dn + dn * dn);
    const double lin = (dn - dk) * std::sqrt(dn);
    const double rd = std::sqrt(disc);
    std::vector<double> out;
    for (double b : {lin, -lin}) {
        for (double r : {rd, -rd}) {
            const double c = (b + r) / den;
            if (c < -1e-12 || c > 1.0 + 1e-12) {
                continue;
            }
            const double theta = 2.0 * std::acos(std::clamp(c, 0.0, 1.0));
            const double x = (dn - dk) / dn * std::cos(theta / 2.0) - dk / dn * std::sin(theta / 2.0);
            if (std::abs(x * x - 1.0 / (4.0 * dn)) > 1e-9) {
                continue;
            }
            if (std::none_of(out.begin(), out.end(), [&](double t) { return std::abs(t - theta) < 1e-12; })) {
                out.push_back(theta);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct ThetaSearchResult {
    double theta = 0.0;
    double value = 0.0;
};

namespace detail {

/// Golden-section maximization of f on [lo, hi].
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol = 1e-13, int max_iter = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < max_iter && b - a > tol; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

} // namespace detail

/// Maximizes rescaled_dicke_value over a uniform grid on [0, pi], refined by
/// golden section on the cells next to the best grid point.
inline ThetaSearchResult dicke_theta_search(int n, int k, int grid_points = 4096) {
    if (n < 2 || k < 1 || k > n - 1) {
        throw DomainError("dicke_theta_search requires 1 <= k <= n-1");
    }
    if (grid_points < 8) {
        throw DomainError("grid_points must be at least 8");
    }
    const double h = std::numbers::pi / (grid_points - 1);
    ThetaSearchResult best{0.0, rescaled_dicke_value(n, k, 0.0)};
    int best_i = 0;
    for (int i = 1; i < grid_points; ++i) {
        const double t = std::min(i * h, std::numbers::pi);
        const double v = rescaled_dicke_value(n, k, t);
        if (v > best.value) {
            best = {t, v};
            best_i = i;
        }
    }
    const double lo = std::max(0.0, (best_i - 1) * h);
    const double hi = std::min(std::numbers::pi, (best_i + 1) * h);
    const auto [t, v] = detail::golden_max([&](double x) { return rescaled_dicke_value(n, k, x); }, lo, hi);
    if (v > best.value) {
        best = {t, v};
    }
    return best;
}

// ---------------------------------------------------------------------------
// Settings optimization

/// Basis {(t, phi) point, its antipode}.
struct BasisAngles {
    double theta = 0.0;
    double phi = 0.0;

    MeasurementBasis basis() const { return MeasurementBasis::from_bloch(theta, phi); }
    static BasisAngles of(const PureQubit& q) {
        const auto [t, p] = q.angles();
        return {t, p};
    }
    auto operator<=>(const BasisAngles&) const = default;
};

struct PartyAngles {
    BasisAngles setting0;
    BasisAngles setting1;

    BasisAngles& operator[](int s) { return s == 0 ? setting0 : setting1; }
    const BasisAngles& operator[](int s) const { return s == 0 ? setting0 : setting1; }
    auto operator<=>(const PartyAngles&) const = default;
};

inline SettingsAssignment to_settings(const std::vector<PartyAngles>& angles) {
    SettingsAssignment s;
    for (const auto& a : angles) {
        s.per_party.push_back({a.setting0.basis(), a.setting1.basis()});
    }
    return s;
}

inline std::vector<PartyAngles> to_angles(const SettingsAssignment& s) {
    std::vector<PartyAngles> out;
    for (const auto& p : s.per_party) {
        out.push_back({BasisAngles::of(p.setting0.outcome0), BasisAngles::of(p.setting1.outcome0)});
    }
    return out;
}

struct OptimizationConfig {
    int restarts = 64;
    int grid_points = 64;
    int max_iters = 500;
    double step_tol = 1e-12;
    std::uint64_t seed = 0;
    bool identical_settings = false;
    std::optional<SettingsAssignment> initial; ///< replaces the first random start

    void validate() const {
        if (restarts < 1) {
            throw DomainError("restarts must be at least 1");
        }
        if (grid_points < 8) {
            throw DomainError("grid_points must be at least 8");
        }
        if (max_iters < 1) {
            throw DomainError("max_iters must be at least 1");
        }
        if (!(step_tol > 0.0)) {
            throw DomainError("step_tol must be positive");
        }
    }
};

struct TracePoint {
    int iteration = 0;
    double value = 0.0;
};

struct OptimizationResult {
    double best_value = 0.0;
    SettingsAssignment best_settings;
    std::vector<TracePoint> trace; ///< of the winning restart
    bool converged = false;        ///< of the winning restart
    std::vector<double> restart_values;
};

namespace detail {

using Herm2 = std::array<cplx, 4>; // row-major

/// Top eigenvector of a 2x2 Hermitian matrix.
inline PureQubit top_eigenvector(const Herm2& b) {
    const double p = b[0].real();
    const double r = b[3].real();
    const cplx q = b[1];
    const double lam = 0.5 * (p + r) + std::sqrt(0.25 * (p - r) * (p - r) + std::norm(q));
    const cplx v0[2] = {q, cplx(lam - p)};
    const cplx v1[2] = {cplx(lam - r), std::conj(q)};
    const double n0 = std::norm(v0[0]) + std::norm(v0[1]);
    const double n1 = std::norm(v1[0]) + std::norm(v1[1]);
    if (std::max(n0, n1) == 0.0) {
        return qubits::zero();
    }
    return n0 >= n1 ? PureQubit::normalized(v0[0], v0[1]) : PureQubit::normalized(v1[0], v1[1]);
}

/// Operator B with value(u) = const + <u|B|u> when party p's setting s has
/// basis {u, u_perp}: each term listing (p, s) contributes +-coef times the
/// reduced operator of p after the other listed parties are contracted.
inline Herm2 party_operator(const SymmetricState& state, const BellFunctional& f, const SettingsAssignment& settings,
                            int party, int setting) {
    Herm2 b{};
    for (const auto& t : f.terms) {
        const auto it = std::find(t.parties.begin(), t.parties.end(), party);
        if (it == t.parties.end()) {
            continue;
        }
        const auto pos = static_cast<std::size_t>(it - t.parties.begin());
        if (t.settings[pos] != setting) {
            continue;
        }
        std::vector<cplx> v(state.coeffs().begin(), state.coeffs().end());
        for (std::size_t i = 0; i < t.parties.size(); ++i) {
            if (i != pos) {
                v = contract_qubit(v, settings.projector(t.parties[i], t.settings[i], t.outcomes[i]));
            }
        }
        const auto v0 = contract_qubit(v, qubits::zero());
        const auto v1 = contract_qubit(v, qubits::one());
        std::array<const std::vector<cplx>*, 2> va{&v0, &v1};
        const double w = t.outcomes[pos] == 0 ? t.coefficient : -t.coefficient;
        for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) {
                // rho_ac = <v_c|v_a>
                cplx s = 0.0;
                for (std::size_t j = 0; j < v0.size(); ++j) {
                    s += std::conj((*va[static_cast<std::size_t>(c)])[j]) * (*va[static_cast<std::size_t>(a)])[j];
                }
                b[static_cast<std::size_t>(2 * a + c)] += w * s;
            }
        }
    }
    return b;
}

struct RestartOutcome {
    double value = 0.0;
    std::vector<PartyAngles> angles;
    std::vector<TracePoint> trace;
    bool converged = false;
};

inline RestartOutcome see_saw(const SymmetricState& state, const BellFunctional& f, std::vector<PartyAngles> angles,
                              const OptimizationConfig& cfg) {
    RestartOutcome out;
    SettingsAssignment s = to_settings(angles);
    double value = evaluate_functional(state, f, s);
    out.trace.push_back({0, value});
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (int p = 0; p < f.n; ++p) {
            for (int st = 0; st < 2; ++st) {
                const auto b = party_operator(state, f, s, p, st);
                if (std::abs(b[0]) + std::abs(b[1]) + std::abs(b[3]) == 0.0) {
                    continue;
                }
                auto& slot = angles[static_cast<std::size_t>(p)][st];
                const BasisAngles candidate = BasisAngles::of(top_eigenvector(b));
                const BasisAngles old = slot;
                slot = candidate;
                s.per_party[static_cast<std::size_t>(p)][st] = candidate.basis();
                // exact maximizer; guard only against rounding
                const double v = evaluate_functional(state, f, s);
                if (v < value) {
                    slot = old;
                    s.per_party[static_cast<std::size_t>(p)][st] = old.basis();
                } else {
                    value = v;
                }
            }
        }
        const double gain = value - out.trace.back().value;
        out.trace.push_back({it, value});
        if (gain < cfg.step_tol) {
            out.converged = true;
            break;
        }
    }
    out.value = value;
    out.angles = std::move(angles);
    return out;
}

/// Coordinate search over the four angles shared by all parties.
inline RestartOutcome identical_search(const SymmetricState& state, const BellFunctional& f, PartyAngles a,
                                       const OptimizationConfig& cfg) {
    const int n = f.n;
    auto eval = [&](const PartyAngles& x) {
        return evaluate_functional(state, f, SettingsAssignment::identical(n, x.setting0.basis(), x.setting1.basis()));
    };
    RestartOutcome out;
    double value = eval(a);
    out.trace.push_back({0, value});
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (int coord = 0; coord < 4; ++coord) {
            const bool is_theta = coord % 2 == 0;
            const double range = is_theta ? std::numbers::pi : 2.0 * std::numbers::pi;
            auto at = [&](double x) {
                PartyAngles y = a;
                auto& ba = y[coord / 2];
                (is_theta ? ba.theta : ba.phi) = x;
                return y;
            };
            const int g = cfg.grid_points;
            const double h = is_theta ? range / (g - 1) : range / g;
            double bx = 0.0;
            double bv = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < g; ++i) {
                const double x = i * h;
                const double v = eval(at(x));
                if (v > bv) {
                    bv = v;
                    bx = x;
                }
            }
            const double lo = is_theta ? std::max(0.0, bx - h) : bx - h;
            const double hi = is_theta ? std::min(range, bx + h) : bx + h;
            auto [gx, gv] = golden_max([&](double x) { return eval(at(x)); }, lo, hi, 1e-12);
            if (gv > bv) {
                bv = gv;
                bx = gx;
            }
            if (!is_theta) {
                bx = std::fmod(bx + 2.0 * range, range);
            }
            if (bv > value) {
                value = bv;
                a = at(bx);
            }
        }
        const double gain = value - out.trace.back().value;
        out.trace.push_back({it, value});
        if (gain < cfg.step_tol) {
            out.converged = true;
            break;
        }
    }
    out.value = value;
    out.angles.assign(static_cast<std::size_t>(n), a);
    return out;
}

inline PartyAngles random_party(std::mt19937_64& rng) {
    return {BasisAngles::of(random_qubit(rng)), BasisAngles::of(random_qubit(rng))};
}

} // namespace detail

/// Multi-start local ascent of f over projective settings. Per-party mode
/// is an exact see-saw: each basis in turn is set to the top eigenvector of
/// its 2x2 operator with everything else fixed, so the value never
/// decreases. The result is a lower bound on the quantum maximum.
inline OptimizationResult optimize_settings(const SymmetricState& state, const BellFunctional& f,
                                            const OptimizationConfig& cfg = {}) {
    cfg.validate();
    f.validate();
    if (f.n != state.n()) {
        throw DomainError("functional and state disagree on n");
    }
    if (cfg.initial) {
        cfg.initial->validate(f.n);
    }
    const auto un = static_cast<std::size_t>(f.n);
    OptimizationResult res;
    std::optional<detail::RestartOutcome> best;
    for (int r = 0; r < cfg.restarts; ++r) {
        std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(r))));
        std::vector<PartyAngles> start;
        if (r == 0 && cfg.initial) {
            start = to_angles(*cfg.initial);
        } else if (cfg.identical_settings) {
            start.assign(un, detail::random_party(rng));
        } else {
            for (std::size_t i = 0; i < un; ++i) {
                start.push_back(detail::random_party(rng));
            }
        }
        auto out = cfg.identical_settings ? detail::identical_search(state, f, start[0], cfg)
                                          : detail::see_saw(state, f, std::move(start), cfg);
        res.restart_values.push_back(out.value);
        if (!best || out.value > best->value || (out.value == best->value && out.angles < best->angles)) {
            best = std::move(out);
        }
    }
    res.best_settings = to_settings(best->angles);
    res.best_value = evaluate_functional(state, f, res.best_settings);
    res.trace = std::move(best->trace);
    res.converged = best->converged;
    return res;
}

} // namespace symhardy
