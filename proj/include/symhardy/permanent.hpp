#pragma once

// Matrix permanent by Ryser's inclusion-exclusion formula with Gray-code
// column updates, O(2^n n).

#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include "symhardy/errors.hpp"

namespace symhardy {

inline constexpr int kMaxPermanentSize = 30;

/// Permanent of the n x n row-major matrix `a`.
///   perm(A) = (-1)^n sum_{S subset cols} (-1)^{|S|} prod_i sum_{j in S} a_ij
template <class T>
T permanent(const std::vector<T>& a, int n) {
    if (n < 0 || static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != a.size()) {
        throw DomainError("permanent: matrix is not n x n");
    }
    if (n > kMaxPermanentSize) {
        throw ResourceError("permanent: matrix too large for Ryser enumeration");
    }
    if (n == 0) {
        return T(1);
    }
    const auto un = static_cast<std::size_t>(n);
    std::vector<T> row_sum(un, T(0));
    T total(0);
    const std::uint64_t count = std::uint64_t{1} << n;
    std::uint64_t gray = 0;
    for (std::uint64_t s = 1; s < count; ++s) {
        // column flipped between consecutive Gray codes
        const int j = std::countr_zero(s);
        const std::uint64_t bit = std::uint64_t{1} << j;
        gray ^= bit;
        const bool added = (gray & bit) != 0;
        for (std::size_t i = 0; i < un; ++i) {
            const T& x = a[i * un + static_cast<std::size_t>(j)];
            row_sum[i] = added ? row_sum[i] + x : row_sum[i] - x;
        }
        T prod(1);
        for (std::size_t i = 0; i < un; ++i) {
            prod *= row_sum[i];
        }
        const bool odd = ((n - std::popcount(gray)) & 1) != 0;
        total = odd ? total - prod : total + prod;
    }
    return total;
}

} // namespace symhardy
