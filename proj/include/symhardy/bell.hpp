#pragma once

// Probability-based Bell functionals on symmetric states under product
// projective measurements, and their exact maxima over deterministic local
// strategies.
//
// Parties are numbered 0..n-1. Every party has two settings, each a
// two-outcome projective basis; outcome r of setting s projects onto
// per_party[i][s][r].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symhardy/majorana.hpp"
#include "symhardy/permanent.hpp"
#include "symhardy/symcore.hpp"

namespace symhardy {

inline constexpr int kMaxLhvParties = 10;
inline constexpr int kMaxPermanentParties = 20;
// Probabilities further than this outside [0, 1] indicate a bug.
inline constexpr double kProbabilitySlack = 1e-9;

using Bits = std::vector<int>;

/// "0110" -> {0, 1, 1, 0}
inline Bits bits(std::string_view s) {
    Bits out;
    out.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1') {
            throw ParseError("bit string may only contain 0 and 1: '" + std::string(s) + "'");
        }
        out.push_back(ch - '0');
    }
    return out;
}

inline std::string to_string(const Bits& b) {
    std::string s;
    for (int x : b) {
        s.push_back(static_cast<char>('0' + x));
    }
    return s;
}

struct PartySettings {
    MeasurementBasis setting0;
    MeasurementBasis setting1;

    const MeasurementBasis& operator[](int s) const { return s == 0 ? setting0 : setting1; }
    MeasurementBasis& operator[](int s) { return s == 0 ? setting0 : setting1; }
};

struct SettingsAssignment {
    std::vector<PartySettings> per_party;

    static SettingsAssignment identical(int n, const MeasurementBasis& s0, const MeasurementBasis& s1) {
        if (n < 1) {
            throw DomainError("settings need at least one party");
        }
        return {std::vector<PartySettings>(static_cast<std::size_t>(n), PartySettings{s0, s1})};
    }

    int n() const { return static_cast<int>(per_party.size()); }

    void validate(int n) const {
        if (this->n() != n) {
            throw DomainError("settings cover " + std::to_string(this->n()) + " parties, state has " +
                              std::to_string(n));
        }
        for (const auto& p : per_party) {
            if (!p.setting0.is_orthonormal() || !p.setting1.is_orthonormal()) {
                throw DomainError("measurement basis is not orthonormal");
            }
        }
    }

    const PureQubit& projector(int party, int setting, int outcome) const {
        return per_party.at(static_cast<std::size_t>(party))[setting][outcome];
    }
};

/// coefficient * P(outcomes | settings) on the listed parties.
struct BellTerm {
    double coefficient = 1.0;
    std::vector<int> parties; ///< strictly increasing
    Bits settings;
    Bits outcomes;
};

struct BellFunctional {
    int n = 0;
    std::vector<BellTerm> terms;

    void validate() const {
        if (n < 1) {
            throw DomainError("functional needs n >= 1");
        }
        for (const auto& t : terms) {
            if (t.parties.size() != t.settings.size() || t.parties.size() != t.outcomes.size()) {
                throw DomainError("term parties, settings and outcomes differ in length");
            }
            for (std::size_t i = 0; i < t.parties.size(); ++i) {
                if (t.parties[i] < 0 || t.parties[i] >= n || (i > 0 && t.parties[i] <= t.parties[i - 1])) {
                    throw DomainError("term parties must be strictly increasing indices below n");
                }
                if ((t.settings[i] | 1) != 1 || (t.outcomes[i] | 1) != 1) {
                    throw DomainError("settings and outcomes must be bits");
                }
            }
        }
    }
};

/// Deterministic local strategy. Party i answers (code >> s) & 1 to
/// setting s, so code 1 means "1 on setting 0, 0 on setting 1".
struct LhvStrategy {
    std::vector<std::uint8_t> per_party;

    int response(int party, int setting) const {
        return (per_party.at(static_cast<std::size_t>(party)) >> setting) & 1;
    }
};

enum class ContractionPath { projection, permanent, dense };

namespace detail {

inline void check_term_shape(int n, std::span<const int> parties, const Bits& settings, const Bits& outcomes) {
    if (settings.size() != parties.size() || outcomes.size() != parties.size()) {
        throw DomainError("setting and outcome strings must match the party list in length");
    }
    for (std::size_t i = 0; i < parties.size(); ++i) {
        if (parties[i] < 0 || parties[i] >= n || (i > 0 && parties[i] <= parties[i - 1])) {
            throw DomainError("parties must be strictly increasing indices below n");
        }
        if ((settings[i] | 1) != 1 || (outcomes[i] | 1) != 1) {
            throw DomainError("settings and outcomes must be bits");
        }
    }
}

inline double clamp_probability(double p) {
    if (!(p > -kProbabilitySlack && p < 1.0 + kProbabilitySlack)) {
        throw NumericalError("probability " + std::to_string(p) + " outside [0, 1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Contracts the listed bras into the symmetric vector; the squared norm of
/// what remains is the marginal probability.
inline double projection_probability(const SymmetricState& state, const std::vector<PureQubit>& bras) {
    std::vector<cplx> v(state.coeffs().begin(), state.coeffs().end());
    for (const auto& e : bras) {
        v = contract_qubit(v, e);
    }
    const double nrm = vector_norm(v);
    return nrm * nrm;
}

inline double dense_probability(const SymmetricState& state, std::span<const int> parties,
                                const std::vector<PureQubit>& bras) {
    const int n = state.n();
    std::vector<cplx> v = to_statevector(state);
    // remaining[j] = original party held at current axis j (axis 0 leftmost)
    std::vector<int> remaining(static_cast<std::size_t>(n));
    std::iota(remaining.begin(), remaining.end(), 0);
    for (std::size_t t = 0; t < parties.size(); ++t) {
        const int m = static_cast<int>(remaining.size());
        const auto axis = static_cast<int>(std::find(remaining.begin(), remaining.end(), parties[t]) - remaining.begin());
        const int bit = m - 1 - axis;
        const std::size_t low = std::size_t{1} << bit;
        std::vector<cplx> w(v.size() / 2);
        const cplx ca = std::conj(bras[t].a);
        const cplx cb = std::conj(bras[t].b);
        for (std::size_t o = 0; o < w.size(); ++o) {
            const std::size_t lo = o & (low - 1);
            const std::size_t hi = (o >> bit) << (bit + 1);
            w[o] = ca * v[hi | lo] + cb * v[hi | low | lo];
        }
        v = std::move(w);
        remaining.erase(remaining.begin() + axis);
    }
    const double nrm = vector_norm(v);
    return nrm * nrm;
}

} // namespace detail

/// Amplitudes of product bras against a symmetric state through its
/// Majorana points: with psi proportional to sum_perm (x) eta_perm(i),
///   <phi_1 ... phi_n | psi> = perm(M) / sqrt(n! perm(G)),
/// M_ij = <phi_i|eta_j>, G_ij = <eta_i|eta_j>, up to a global phase.
class PermanentContractor {
public:
    explicit PermanentContractor(const SymmetricState& state, double cluster_tol = kDefaultClusterTol)
        : n_(state.n()) {
        if (n_ > kMaxPermanentParties) {
            throw ResourceError("permanent path is capped at " + std::to_string(kMaxPermanentParties) + " parties");
        }
        points_ = state_to_points(state, cluster_tol).points();
        std::vector<cplx> g(static_cast<std::size_t>(n_ * n_));
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                g[static_cast<std::size_t>(i * n_ + j)] = inner(points_[static_cast<std::size_t>(i)],
                                                                 points_[static_cast<std::size_t>(j)]);
            }
        }
        double fact = 1.0;
        for (int i = 2; i <= n_; ++i) {
            fact *= i;
        }
        norm2_ = fact * permanent(g, n_).real();
    }

    /// |<phi_1 ... phi_n|psi>|^2 for a full product bra.
    double probability(const std::vector<PureQubit>& bras) const {
        std::vector<cplx> m(static_cast<std::size_t>(n_ * n_));
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                m[static_cast<std::size_t>(i * n_ + j)] =
                    inner(bras[static_cast<std::size_t>(i)], points_[static_cast<std::size_t>(j)]);
            }
        }
        return std::norm(permanent(m, n_)) / norm2_;
    }

    /// Marginal over unlisted parties by summing over their computational
    /// outcomes.
    double probability(std::span<const int> parties, const std::vector<PureQubit>& bras) const {
        std::vector<PureQubit> full(static_cast<std::size_t>(n_));
        std::vector<int> free;
        for (int i = 0, t = 0; i < n_; ++i) {
            if (t < static_cast<int>(parties.size()) && parties[static_cast<std::size_t>(t)] == i) {
                full[static_cast<std::size_t>(i)] = bras[static_cast<std::size_t>(t)];
                ++t;
            } else {
                free.push_back(i);
            }
        }
        double total = 0.0;
        const std::uint64_t count = std::uint64_t{1} << free.size();
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            for (std::size_t f = 0; f < free.size(); ++f) {
                full[static_cast<std::size_t>(free[f])] = ((mask >> f) & 1) != 0 ? qubits::one() : qubits::zero();
            }
            total += probability(full);
        }
        return total;
    }

private:
    int n_;
    std::vector<PureQubit> points_;
    double norm2_ = 1.0;
};

/// P(outcomes | setting_choice) for the listed parties (all parties when
/// omitted), marginalized over the rest.
inline double joint_probability(const SymmetricState& state, const SettingsAssignment& settings,
                                const Bits& setting_choice, const Bits& outcomes,
                                std::optional<std::vector<int>> parties = std::nullopt,
                                ContractionPath path = ContractionPath::projection) {
    const int n = state.n();
    if (settings.n() != n) {
        throw DomainError("settings cover " + std::to_string(settings.n()) + " parties, state has " +
                          std::to_string(n));
    }
    std::vector<int> ps;
    if (parties) {
        ps = *parties;
    } else {
        ps.resize(static_cast<std::size_t>(n));
        std::iota(ps.begin(), ps.end(), 0);
    }
    detail::check_term_shape(n, ps, setting_choice, outcomes);
    std::vector<PureQubit> bras;
    bras.reserve(ps.size());
    for (std::size_t t = 0; t < ps.size(); ++t) {
        bras.push_back(settings.projector(ps[t], setting_choice[t], outcomes[t]));
    }
    double p = 0.0;
    switch (path) {
    case ContractionPath::projection:
        p = detail::projection_probability(state, bras);
        break;
    case ContractionPath::dense:
        p = detail::dense_probability(state, ps, bras);
        break;
    case ContractionPath::permanent:
        p = PermanentContractor(state).probability(ps, bras);
        break;
    }
    return detail::clamp_probability(p);
}

/// P^n = P(0..0|0..0) - sum_i P(0..0|0..1..0) - P(1..1|1..1), where the
/// middle terms put setting 1 on one party (last party first).
inline BellFunctional hardy_functional(int n) {
    if (n < 2) {
        throw DomainError("hardy_functional requires n >= 2");
    }
    const auto un = static_cast<std::size_t>(n);
    std::vector<int> all(un);
    std::iota(all.begin(), all.end(), 0);
    BellFunctional f{n, {}};
    f.terms.push_back({1.0, all, Bits(un, 0), Bits(un, 0)});
    for (int i = n - 1; i >= 0; --i) {
        Bits s(un, 0);
        s[static_cast<std::size_t>(i)] = 1;
        f.terms.push_back({-1.0, all, s, Bits(un, 0)});
    }
    f.terms.push_back({-1.0, all, Bits(un, 1), Bits(un, 1)});
    return f;
}

/// Q_d^n = P^n - sum_{m=n-d+1}^{n-1} P(1^m | 1^m) on parties 0..m-1.
inline BellFunctional persistence_functional(int n, int d) {
    if (n < 3 || d < 2 || d > n - 1) {
        throw DomainError("persistence_functional requires 2 <= d <= n-1");
    }
    BellFunctional f = hardy_functional(n);
    for (int m = n - 1; m >= n - d + 1; --m) {
        const auto um = static_cast<std::size_t>(m);
        std::vector<int> first(um);
        std::iota(first.begin(), first.end(), 0);
        f.terms.push_back({-1.0, first, Bits(um, 1), Bits(um, 1)});
    }
    return f;
}

inline double evaluate_functional(const SymmetricState& state, const BellFunctional& f,
                                  const SettingsAssignment& settings,
                                  ContractionPath path = ContractionPath::projection) {
    f.validate();
    if (f.n != state.n()) {
        throw DomainError("functional and state disagree on n");
    }
    settings.validate(f.n);
    double v = 0.0;
    for (const auto& t : f.terms) {
        v += t.coefficient * joint_probability(state, settings, t.settings, t.outcomes, t.parties, path);
    }
    return v;
}

/// Value of f on a deterministic strategy: each term is 1 or 0.
inline double strategy_value(const BellFunctional& f, const LhvStrategy& s) {
    if (s.per_party.size() != static_cast<std::size_t>(f.n)) {
        throw DomainError("strategy and functional disagree on n");
    }
    double v = 0.0;
    for (const auto& t : f.terms) {
        bool hit = true;
        for (std::size_t i = 0; i < t.parties.size() && hit; ++i) {
            hit = s.response(t.parties[i], t.settings[i]) == t.outcomes[i];
        }
        if (hit) {
            v += t.coefficient;
        }
    }
    return v;
}

struct LhvResult {
    double value = 0.0;
    LhvStrategy witness;
};

/// Exact LHV maximum by enumerating all 4^n deterministic strategies. The
/// witness is the lexicographically smallest maximizer (party 0 most
/// significant).
inline LhvResult lhv_max(const BellFunctional& f) {
    f.validate();
    if (f.n > kMaxLhvParties) {
        throw ResourceError("lhv_max enumerates 4^n strategies and is capped at n = " +
                            std::to_string(kMaxLhvParties));
    }
    const int n = f.n;
    const std::uint64_t count = std::uint64_t{1} << (2 * n);
    LhvStrategy s{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
    LhvResult best{-std::numeric_limits<double>::infinity(), s};
    for (std::uint64_t code = 0; code < count; ++code) {
        for (int i = 0; i < n; ++i) {
            s.per_party[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((code >> (2 * (n - 1 - i))) & 3);
        }
        const double v = strategy_value(f, s);
        if (v > best.value) {
            best = {v, s};
        }
    }
    return best;
}

} // namespace symhardy
