#pragma once

// Pseudo-random qubits, unitaries and symmetric states. All generators take
// the engine by reference so that callers control seeding.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "symhardy/symcore.hpp"

namespace symhardy {

/// Uniform on the Bloch sphere.
template <class Rng>
PureQubit random_qubit(Rng& rng) {
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * std::numbers::pi);
    const double z = uz(rng);
    return PureQubit::from_bloch(std::acos(z), uphi(rng));
}

/// Haar-distributed single-qubit unitary.
template <class Rng>
Mat2 random_unitary(Rng& rng) {
    std::normal_distribution<double> g;
    const cplx a(g(rng), g(rng));
    const cplx b(g(rng), g(rng));
    const auto q = PureQubit::normalized(a, b);
    const auto p = antipode(q);
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * std::numbers::pi);
    const cplx ph = std::polar(1.0, uphi(rng));
    return Mat2::from_columns(q, PureQubit{p.a * ph, p.b * ph});
}

/// Complex Gaussian Dicke coefficients, normalized.
template <class Rng>
SymmetricState random_symmetric_state(int n, Rng& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (auto& x : c) {
        x = cplx(g(rng), g(rng));
    }
    return SymmetricState(std::move(c));
}

/// Random composition of n into positive parts, as a degeneracy pattern.
template <class Rng>
std::vector<int> random_degeneracies(int n, Rng& rng) {
    std::vector<int> parts;
    std::bernoulli_distribution cut(0.5);
    int cur = 1;
    for (int i = 1; i < n; ++i) {
        if (cut(rng)) {
            parts.push_back(cur);
            cur = 1;
        } else {
            ++cur;
        }
    }
    parts.push_back(cur);
    return parts;
}

/// 64-bit mix used to derive independent stream seeds from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace symhardy
