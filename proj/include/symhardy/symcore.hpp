#pragma once

// Permutation-symmetric qubit states in the Dicke basis.
//
// A symmetric n-qubit state is stored as its n+1 Dicke coefficients c_k in
//   |psi> = sum_k c_k |S(n,k)>,  |S(n,k)> = C(n,k)^{-1/2} sum_perm |0^{n-k} 1^k>.
// States are always normalized; equality is up to global phase.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symhardy/errors.hpp"

namespace symhardy {

using cplx = std::complex<double>;

inline constexpr int kMaxDenseQubits = 14;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
// Projection norms at or below this are treated as annihilation.
inline constexpr double kZeroNorm = 1e-15;

/// Binomial coefficient as a double; exact for n <= 56 and within one ulp
/// beyond.
inline double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return n <= 56 ? std::round(r) : r;
}

// ---------------------------------------------------------------------------
// Single qubits

struct PureQubit {
    cplx a{1.0, 0.0}; ///< amplitude of |0>
    cplx b{0.0, 0.0}; ///< amplitude of |1>

    static PureQubit normalized(cplx a, cplx b) {
        const double nrm = std::sqrt(std::norm(a) + std::norm(b));
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            throw DomainError("qubit amplitudes have zero or non-finite norm");
        }
        return {a / nrm, b / nrm};
    }

    /// cos(t/2)|0> + e^{i phi} sin(t/2)|1>
    static PureQubit from_bloch(double theta, double phi) {
        return {cplx(std::cos(theta / 2.0), 0.0), std::polar(std::sin(theta / 2.0), phi)};
    }

    /// Same ray with the global phase fixed: a real and non-negative, or b
    /// real and positive when a vanishes.
    PureQubit canonical() const {
        if (std::abs(a) > 1e-300) {
            const cplx ph = std::conj(a) / std::abs(a);
            return {cplx(std::abs(a), 0.0), b * ph};
        }
        return {cplx(0.0, 0.0), cplx(std::abs(b), 0.0)};
    }

    std::array<double, 3> bloch() const {
        const cplx ab = std::conj(a) * b;
        return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
    }

    /// Polar angle in [0, pi] and azimuth in [0, 2 pi).
    std::pair<double, double> angles() const {
        const auto v = bloch();
        const double theta = std::acos(std::clamp(v[2], -1.0, 1.0));
        double phi = std::atan2(v[1], v[0]);
        if (phi < 0.0) {
            phi += 2.0 * std::numbers::pi;
        }
        if (phi >= 2.0 * std::numbers::pi) {
            phi = 0.0;
        }
        if (std::hypot(v[0], v[1]) < 1e-15) {
            phi = 0.0;
        }
        return {theta, phi};
    }

    bool is_normalized(double tol = kNormTol) const {
        return std::abs(std::norm(a) + std::norm(b) - 1.0) < tol;
    }
};

/// <p|q>
inline cplx inner(const PureQubit& p, const PureQubit& q) {
    return std::conj(p.a) * q.a + std::conj(p.b) * q.b;
}

/// Euclidean distance of the Bloch vectors, 2 sqrt(1 - |<p|q>|^2).
inline double chordal_distance(const PureQubit& p, const PureQubit& q) {
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - std::norm(inner(p, q))));
}

/// Ray equality: |<p|q>| > 1 - tol.
inline bool equivalent(const PureQubit& p, const PureQubit& q, double tol = 1e-9) {
    return std::abs(inner(p, q)) > 1.0 - tol;
}

/// Antipodal point on the Bloch sphere.
inline PureQubit antipode(const PureQubit& q) { return {-std::conj(q.b), std::conj(q.a)}; }

namespace qubits {
inline PureQubit zero() { return {cplx(1, 0), cplx(0, 0)}; }
inline PureQubit one() { return {cplx(0, 0), cplx(1, 0)}; }
inline PureQubit plus() { return {cplx(std::numbers::sqrt2 / 2, 0), cplx(std::numbers::sqrt2 / 2, 0)}; }
inline PureQubit minus() { return {cplx(std::numbers::sqrt2 / 2, 0), cplx(-std::numbers::sqrt2 / 2, 0)}; }
} // namespace qubits

/// Two-outcome projective measurement; outcome r projects onto basis[r].
struct MeasurementBasis {
    PureQubit outcome0 = qubits::zero();
    PureQubit outcome1 = qubits::one();

    static MeasurementBasis from_vector(const PureQubit& q) { return {q, antipode(q)}; }
    static MeasurementBasis from_bloch(double theta, double phi) {
        return from_vector(PureQubit::from_bloch(theta, phi));
    }

    const PureQubit& operator[](int outcome) const { return outcome == 0 ? outcome0 : outcome1; }

    bool is_orthonormal(double tol = 1e-10) const {
        return outcome0.is_normalized(tol) && outcome1.is_normalized(tol) &&
               std::abs(inner(outcome0, outcome1)) < tol;
    }
};

// ---------------------------------------------------------------------------
// 2x2 matrices

struct Mat2 {
    std::array<cplx, 4> m{cplx(1), cplx(0), cplx(0), cplx(1)}; // row-major

    cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
    cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }

    static Mat2 identity() { return {}; }
    static Mat2 pauli_x() { return {{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
    /// Matrix whose columns are the given kets.
    static Mat2 from_columns(const PureQubit& c0, const PureQubit& c1) { return {{c0.a, c1.a, c0.b, c1.b}}; }

    Mat2 adjoint() const { return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 r;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
            }
        }
        return r;
    }

    PureQubit apply(const PureQubit& q) const {
        return {m[0] * q.a + m[1] * q.b, m[2] * q.a + m[3] * q.b};
    }

    bool is_unitary(double tol = kUnitaryTol) const {
        const Mat2 p = adjoint() * *this;
        return std::abs(p(0, 0) - 1.0) < tol && std::abs(p(1, 1) - 1.0) < tol && std::abs(p(0, 1)) < tol &&
               std::abs(p(1, 0)) < tol;
    }
};

inline MeasurementBasis apply(const Mat2& u, const MeasurementBasis& basis) {
    return {u.apply(basis.outcome0), u.apply(basis.outcome1)};
}

// ---------------------------------------------------------------------------
// Symmetric states

class SymmetricState {
public:
    /// Normalizes the coefficients; n is coeffs.size() - 1.
    explicit SymmetricState(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
        if (c_.size() < 2) {
            throw DomainError("a symmetric state needs n >= 1 (at least two Dicke coefficients)");
        }
        double nrm2 = 0.0;
        for (const auto& x : c_) {
            nrm2 += std::norm(x);
        }
        const double nrm = std::sqrt(nrm2);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            throw DomainError("Dicke coefficients have zero or non-finite norm");
        }
        for (auto& x : c_) {
            x /= nrm;
        }
    }

    int n() const { return static_cast<int>(c_.size()) - 1; }
    std::span<const cplx> coeffs() const { return c_; }
    cplx coeff(int k) const { return c_.at(static_cast<std::size_t>(k)); }

    cplx inner(const SymmetricState& other) const {
        if (other.n() != n()) {
            throw DomainError("inner product of states with different qubit counts");
        }
        cplx s = 0.0;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            s += std::conj(c_[k]) * other.c_[k];
        }
        return s;
    }

    /// |<this|other>|
    double fidelity(const SymmetricState& other) const { return std::abs(inner(other)); }

    bool equivalent(const SymmetricState& other, double tol = 1e-9) const {
        return other.n() == n() && fidelity(other) > 1.0 - tol;
    }

private:
    std::vector<cplx> c_;
};

inline SymmetricState dicke_state(int n, int k) {
    if (n < 1 || k < 0 || k > n) {
        throw DomainError("dicke_state requires n >= 1 and 0 <= k <= n");
    }
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(k)] = 1.0;
    return SymmetricState(std::move(c));
}

/// q^{(x) n}
inline SymmetricState product_state(const PureQubit& q, int n) {
    if (n < 1) {
        throw DomainError("product_state requires n >= 1");
    }
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        c[static_cast<std::size_t>(j)] = std::sqrt(binomial(n, j)) * std::pow(q.a, n - j) * std::pow(q.b, j);
    }
    return SymmetricState(std::move(c));
}

/// Named states: ghz, w, dicke (needs k), tetrahedron (n = 4), d3plus
/// (n = 4, symmetrization of |000+>).
inline SymmetricState from_named(std::string_view name, int n, std::optional<int> k = std::nullopt) {
    if (name == "ghz") {
        if (n < 1) {
            throw DomainError("ghz requires n >= 1");
        }
        std::vector<cplx> c(static_cast<std::size_t>(n) + 1, 0.0);
        c.front() = 1.0;
        c.back() = 1.0;
        return SymmetricState(std::move(c));
    }
    if (name == "w") {
        return dicke_state(n, 1);
    }
    if (name == "dicke") {
        if (!k) {
            throw ParseError("named state 'dicke' requires k");
        }
        return dicke_state(n, *k);
    }
    if (name == "tetrahedron" || name == "d3plus") {
        if (n != 4) {
            throw DomainError(std::string(name) + " is a 4-qubit state");
        }
        std::vector<cplx> c(5, 0.0);
        if (name == "tetrahedron") {
            c[0] = std::sqrt(1.0 / 3.0);
            c[3] = std::sqrt(2.0 / 3.0);
        } else {
            // |000>(|0> + |1>) symmetrized: |0000> + |S(4,1)>/2
            c[0] = 1.0;
            c[1] = 0.5;
        }
        return SymmetricState(std::move(c));
    }
    throw ParseError("unknown state name '" + std::string(name) + "'");
}

/// Applies <chi| to one qubit slot of the (unnormalized) symmetric vector
/// with coefficients `coeffs`; returns the n-coefficient result.
inline std::vector<cplx> contract_qubit(std::span<const cplx> coeffs, const PureQubit& chi) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) {
        throw DomainError("cannot contract a zero-qubit vector");
    }
    const cplx ca = std::conj(chi.a);
    const cplx cb = std::conj(chi.b);
    const double dn = n;
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        out[uj] = ca * std::sqrt((n - j) / dn) * coeffs[uj] + cb * std::sqrt((j + 1) / dn) * coeffs[uj + 1];
    }
    return out;
}

inline double vector_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

struct Projection {
    std::optional<SymmetricState> state; ///< empty when the projection annihilates
    double norm = 0.0;                   ///< |<chi|psi>| before normalization

    bool valid() const { return state.has_value(); }
};

/// Normalized (n-1)-qubit state proportional to <chi|psi>.
inline Projection project_qubit(const SymmetricState& state, const PureQubit& chi) {
    if (state.n() < 2) {
        throw DomainError("project_qubit requires n >= 2");
    }
    auto raw = contract_qubit(state.coeffs(), chi);
    const double nrm = vector_norm(raw);
    if (nrm <= kZeroNorm) {
        return {std::nullopt, nrm};
    }
    return {SymmetricState(std::move(raw)), nrm};
}

/// Dense amplitudes in the computational basis. Party i is bit (n-1-i) of
/// the index, i.e. party 0 is the leftmost qubit.
inline std::vector<cplx> to_statevector(const SymmetricState& state) {
    const int n = state.n();
    if (n > kMaxDenseQubits) {
        throw ResourceError("to_statevector is capped at " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    std::vector<double> scale(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        scale[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(binomial(n, k));
    }
    std::vector<cplx> v(std::size_t{1} << n);
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        const auto k = static_cast<std::size_t>(std::popcount(idx));
        v[idx] = state.coeff(static_cast<int>(k)) * scale[k];
    }
    return v;
}

namespace detail {

inline std::vector<cplx> poly_mul(std::span<const cplx> p, std::span<const cplx> q) {
    std::vector<cplx> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            r[i + j] += p[i] * q[j];
        }
    }
    return r;
}

} // namespace detail

/// U^{(x) n} |psi>.
///
/// The symmetric tensor with Dicke coefficients c_k corresponds to the
/// binary form sum_k c_k C(n,k)^{1/2} x^{n-k} y^k; U acts by the linear
/// substitution x -> u00 x + u10 y, y -> u01 x + u11 y.
inline SymmetricState rotate(const SymmetricState& state, const Mat2& u) {
    if (!u.is_unitary()) {
        throw DomainError("rotate requires a unitary matrix");
    }
    const int n = state.n();
    const auto un = static_cast<std::size_t>(n);
    // powers of (u00 + u10 y) and (u01 + u11 y) in the y variable
    std::vector<std::vector<cplx>> xp(un + 1), yp(un + 1);
    xp[0] = {cplx(1)};
    yp[0] = {cplx(1)};
    const std::array<cplx, 2> xl{u(0, 0), u(1, 0)};
    const std::array<cplx, 2> yl{u(0, 1), u(1, 1)};
    for (std::size_t m = 1; m <= un; ++m) {
        xp[m] = detail::poly_mul(xp[m - 1], xl);
        yp[m] = detail::poly_mul(yp[m - 1], yl);
    }
    std::vector<cplx> out(un + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        const cplx pk = state.coeff(k) * std::sqrt(binomial(n, k));
        if (pk == cplx(0.0)) {
            continue;
        }
        const auto term = detail::poly_mul(xp[un - static_cast<std::size_t>(k)], yp[static_cast<std::size_t>(k)]);
        for (std::size_t j = 0; j <= un; ++j) {
            out[j] += pk * term[j];
        }
    }
    for (int j = 0; j <= n; ++j) {
        out[static_cast<std::size_t>(j)] /= std::sqrt(binomial(n, j));
    }
    return SymmetricState(std::move(out));
}

} // namespace symhardy
