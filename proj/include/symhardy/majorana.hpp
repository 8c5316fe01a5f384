#pragma once

// Majorana (stellar) representation of symmetric states.
//
// A qubit eta = (a, b) is a Majorana point of |psi> iff (<eta_perp|)^n |psi> = 0.
// With <eta_perp| = (-b, a) this is the binary form
//   G(a, b) = sum_k c_k sqrt(C(n,k)) (-b)^{n-k} a^k = 0.
// Dehomogenizing at b = 1 gives the Majorana polynomial in a; a root z is the
// point (z, 1), and a degree deficit of r contributes |0> with multiplicity r.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "symhardy/symcore.hpp"

namespace symhardy {

inline constexpr double kDefaultClusterTol = 1e-6;
// Polynomial coefficients below this fraction of the largest are zero.
inline constexpr double kLeadingCutoff = 1e-12;

struct MajoranaCluster {
    PureQubit point;
    int degeneracy = 1;
};

struct MajoranaSpectrum {
    int n = 0;
    std::vector<MajoranaCluster> clusters;

    /// Points repeated by degeneracy.
    std::vector<PureQubit> points() const {
        std::vector<PureQubit> out;
        for (const auto& c : clusters) {
            out.insert(out.end(), static_cast<std::size_t>(c.degeneracy), c.point);
        }
        return out;
    }

    void validate(double cluster_tol = kDefaultClusterTol) const {
        int total = 0;
        for (const auto& c : clusters) {
            if (c.degeneracy < 1) {
                throw DomainError("Majorana cluster with non-positive degeneracy");
            }
            if (!c.point.is_normalized(1e-10)) {
                throw DomainError("Majorana point is not normalized");
            }
            total += c.degeneracy;
        }
        if (total != n || n < 1) {
            throw DomainError("Majorana degeneracies must sum to n >= 1");
        }
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                if (chordal_distance(clusters[i].point, clusters[j].point) < cluster_tol) {
                    throw DomainError("Majorana clusters are not distinct at the clustering tolerance");
                }
            }
        }
    }
};

struct MpResidualReport {
    bool is_mp = false;
    double residual = 0.0; ///< |(<q_perp|)^n psi|
    int multiplicity = 0;
};

/// Coefficient k multiplies a^k: (-1)^{n-k} sqrt(C(n,k)) c_k.
inline std::vector<cplx> majorana_polynomial(const SymmetricState& state) {
    const int n = state.n();
    std::vector<cplx> p(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        p[static_cast<std::size_t>(k)] = sign * std::sqrt(binomial(n, k)) * state.coeff(k);
    }
    return p;
}

/// Magnitudes |(<chi|)^{(x) c} psi| for c = 1..n, stored at index c-1.
/// Non-increasing in c.
inline std::vector<double> contraction_amplitudes(const SymmetricState& state, const PureQubit& chi) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(state.n()));
    std::vector<cplx> v(state.coeffs().begin(), state.coeffs().end());
    while (v.size() > 1) {
        v = contract_qubit(v, chi);
        out.push_back(vector_norm(v));
    }
    return out;
}

/// Residual test for q, with multiplicity from iterated projections onto
/// q_perp: the multiplicity is d when orders > n-d vanish and order n-d
/// does not.
inline MpResidualReport is_majorana_point(const SymmetricState& state, const PureQubit& q, double tol = 1e-9) {
    const auto amps = contraction_amplitudes(state, antipode(q));
    const int n = state.n();
    MpResidualReport r;
    r.residual = amps.back();
    for (int c = 1; c <= n; ++c) {
        if (amps[static_cast<std::size_t>(c - 1)] < tol) {
            r.multiplicity = n - c + 1;
            break;
        }
    }
    r.is_mp = r.multiplicity >= 1;
    return r;
}

/// Normalized symmetrization of the points (with multiplicity).
inline SymmetricState points_to_state(const MajoranaSpectrum& spectrum) {
    spectrum.validate(0.0);
    // product of the linear forms (a + b y), coefficient j multiplies y^j
    std::vector<cplx> poly{cplx(1.0)};
    for (const auto& q : spectrum.points()) {
        const std::array<cplx, 2> lin{q.a, q.b};
        poly = detail::poly_mul(poly, lin);
    }
    const int n = spectrum.n;
    for (int j = 0; j <= n; ++j) {
        poly[static_cast<std::size_t>(j)] /= std::sqrt(binomial(n, j));
    }
    return SymmetricState(std::move(poly));
}

/// Unitary with columns (axis, axis_perp); maps |0> to axis.
inline Mat2 rotation_to(const PureQubit& axis) { return Mat2::from_columns(axis, antipode(axis)); }

inline std::vector<int> degeneracy_profile(const MajoranaSpectrum& spectrum) {
    std::vector<int> d;
    for (const auto& c : spectrum.clusters) {
        d.push_back(c.degeneracy);
    }
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

namespace detail {

// Chart of the projective line. Unflipped: point (z, 1), f(z) = sum p_k z^k.
// Flipped: point (1, z), f(z) = sum p_k z^{n-k}.
struct Chart {
    std::vector<cplx> coeffs; // coefficient j multiplies z^j
    bool flipped = false;

    static Chart make(const std::vector<cplx>& homogeneous, bool flipped) {
        Chart c;
        c.flipped = flipped;
        c.coeffs = homogeneous;
        if (flipped) {
            std::reverse(c.coeffs.begin(), c.coeffs.end());
        }
        while (c.coeffs.size() > 1 && c.coeffs.back() == cplx(0.0)) {
            c.coeffs.pop_back();
        }
        return c;
    }

    PureQubit point(cplx z) const {
        return flipped ? PureQubit::normalized(1.0, z) : PureQubit::normalized(z, 1.0);
    }

    static cplx coordinate(const PureQubit& q, bool flipped) { return flipped ? q.b / q.a : q.a / q.b; }

    /// r-th derivative at z.
    cplx derivative(cplx z, int r) const {
        cplx acc = 0.0;
        for (int j = static_cast<int>(coeffs.size()) - 1; j >= r; --j) {
            double ff = 1.0;
            for (int t = 0; t < r; ++t) {
                ff *= static_cast<double>(j - t);
            }
            acc = acc * z + ff * coeffs[static_cast<std::size_t>(j)];
        }
        return acc;
    }

    /// Newton on the r-th derivative (a simple root there when z is an
    /// (r+1)-fold root of f).
    cplx newton(cplx z, int r, int max_iter = 60) const {
        if (static_cast<int>(coeffs.size()) - 1 <= r) {
            return z;
        }
        double best_res = std::abs(derivative(z, r));
        for (int it = 0; it < max_iter; ++it) {
            const cplx f = derivative(z, r);
            const cplx df = derivative(z, r + 1);
            if (df == cplx(0.0)) {
                break;
            }
            const cplx step = f / df;
            const cplx zn = z - step;
            const double res = std::abs(derivative(zn, r));
            if (!(res <= best_res) && it > 2) {
                break;
            }
            best_res = std::min(best_res, res);
            z = zn;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z))) {
                break;
            }
        }
        return z;
    }
};

/// Roots of sum_{j<=D} p_j z^j with p_D != 0, D >= 1, via the companion
/// matrix of the rescaled polynomial.
inline std::vector<cplx> polynomial_roots(std::span<const cplx> p) {
    const int deg = static_cast<int>(p.size()) - 1;
    // z = s w balances the extreme coefficients
    const double s = std::pow(std::abs(p[0]) > 0.0 ? std::abs(p[0]) / std::abs(p.back()) : 1.0, 1.0 / deg);
    const double scale = (s > 0.0 && std::isfinite(s)) ? s : 1.0;
    std::vector<cplx> q(p.size());
    double sp = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        q[j] = p[j] * sp;
        sp *= scale;
    }
    if (deg == 1) {
        return {-q[0] / q[1] * scale};
    }
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) {
        comp(i, i - 1) = 1.0;
    }
    for (int j = 0; j < deg; ++j) {
        comp(j, deg - 1) = -q[static_cast<std::size_t>(j)] / q.back();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "companion eigensolver did not converge (degree " << deg << ")";
        throw NumericalError(os.str());
    }
    std::vector<cplx> roots(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) {
        roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i) * scale;
    }
    return roots;
}

struct RootCluster {
    PureQubit point;
    int multiplicity = 1;
};

class RootResolver {
public:
    RootResolver(const SymmetricState& state, const std::vector<cplx>& homogeneous)
        : state_(state), charts_{Chart::make(homogeneous, false), Chart::make(homogeneous, true)} {}

    /// Polished point for a single root.
    PureQubit polish(const PureQubit& q) const {
        const bool flip = std::abs(q.a) > std::abs(q.b);
        const Chart& ch = charts_[flip ? 1 : 0];
        const cplx z0 = Chart::coordinate(q, flip);
        const cplx z = ch.newton(z0, 0, 20);
        return ch.point(std::abs(z - z0) < 0.1 * (1.0 + std::abs(z0)) ? z : z0);
    }

    /// Groups roots into multiple roots, largest multiplicity first. For
    /// each m and each unassigned root, its m nearest unassigned roots are
    /// re-centred by Newton on the (m-1)-th derivative and the group is
    /// accepted when it looks like a split m-fold root (see verify).
    std::vector<RootCluster> resolve(const std::vector<PureQubit>& roots) const {
        std::vector<RootCluster> out;
        std::vector<bool> used(roots.size(), false);
        auto nearest = [&](const PureQubit& q, std::size_t m) {
            std::vector<std::size_t> g;
            for (std::size_t i = 0; i < roots.size(); ++i) {
                if (!used[i]) {
                    g.push_back(i);
                }
            }
            std::stable_sort(g.begin(), g.end(), [&](std::size_t x, std::size_t y) {
                return chordal_distance(q, roots[x]) < chordal_distance(q, roots[y]);
            });
            g.resize(std::min(m, g.size()));
            return g;
        };
        for (std::size_t m = roots.size(); m >= 2; --m) {
            for (std::size_t r = 0; r < roots.size(); ++r) {
                if (used[r]) {
                    continue;
                }
                auto g = nearest(roots[r], m);
                if (g.size() < m || chordal_distance(roots[r], roots[g.back()]) > kSearchRadius) {
                    continue;
                }
                g = nearest(center(roots, g), m);
                const PureQubit c = center(roots, g);
                if (verify(roots, g, c)) {
                    for (auto i : g) {
                        used[i] = true;
                    }
                    out.push_back({c, static_cast<int>(m)});
                }
            }
        }
        for (std::size_t r = 0; r < roots.size(); ++r) {
            if (!used[r]) {
                out.push_back({polish(roots[r]), 1});
            }
        }
        return out;
    }

private:
    static constexpr double kSearchRadius = 0.5;
    static constexpr double kBackwardEta = 1e-10;
    static constexpr double kCoincident = 1e-13;

    PureQubit center(const std::vector<PureQubit>& roots, const std::vector<std::size_t>& group) const {
        if (group.size() == 1) {
            return roots[group[0]];
        }
        std::array<double, 3> mean{0, 0, 0};
        for (auto i : group) {
            const auto v = roots[i].bloch();
            for (std::size_t d = 0; d < 3; ++d) {
                mean[d] += v[d];
            }
        }
        const bool flip = mean[2] > 0.0; // nearer |0>: use b/a
        cplx zbar = 0.0;
        for (auto i : group) {
            zbar += Chart::coordinate(roots[i], flip);
        }
        zbar /= static_cast<double>(group.size());
        const Chart& ch = charts_[flip ? 1 : 0];
        const int m = static_cast<int>(group.size());
        const cplx z = ch.newton(zbar, m - 1);
        return ch.point(std::abs(z - zbar) < 0.1 * (1.0 + std::abs(zbar)) ? z : zbar);
    }

    // A perturbed m-fold root splits into a nearly regular m-gon around it
    // whose radius is set by the size of the perturbation. The group is
    // accepted when it has that shape, its refined centre sits at the ring
    // mean, and the radius is no larger than a generous backward error
    // allows.
    bool verify(const std::vector<PureQubit>& roots, const std::vector<std::size_t>& group, const PureQubit& c) const {
        const std::size_t m = group.size();
        std::array<double, 3> mean{0, 0, 0};
        for (auto i : group) {
            const auto v = roots[i].bloch();
            for (std::size_t d = 0; d < 3; ++d) {
                mean[d] += v[d];
            }
        }
        const bool flip = mean[2] > 0.0;
        const Chart& ch = charts_[flip ? 1 : 0];
        cplx zbar = 0.0;
        std::vector<cplx> w;
        for (auto i : group) {
            w.push_back(Chart::coordinate(roots[i], flip));
            zbar += w.back();
        }
        zbar /= static_cast<double>(m);
        const double scale = 1.0 + std::abs(zbar);
        double rmin = std::numeric_limits<double>::infinity();
        double rmax = 0.0;
        double rmean = 0.0;
        std::vector<double> ang;
        for (auto& x : w) {
            x -= zbar;
            const double r = std::abs(x);
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
            rmean += r / static_cast<double>(m);
            ang.push_back(std::arg(x));
        }
        const cplx zc = Chart::coordinate(c, flip);
        if (rmax <= kCoincident * scale) {
            return std::abs(zc - zbar) <= kCoincident * scale;
        }
        if (std::abs(zc - zbar) > 0.02 * rmean + kCoincident * scale) {
            return false;
        }
        if (m >= 3) {
            if (rmax > 2.0 * rmin) {
                return false;
            }
            std::sort(ang.begin(), ang.end());
            const double ideal = 2.0 * std::numbers::pi / static_cast<double>(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double gap = i + 1 < m ? ang[i + 1] - ang[i] : ang[0] + 2.0 * std::numbers::pi - ang[i];
                if (gap < 0.5 * ideal || gap > 1.5 * ideal) {
                    return false;
                }
            }
        }
        // near the root f(z) ~ f^(m)(c)/m! (z-c)^m, so a coefficient
        // perturbation of relative size eta moves the roots by about
        // (eta |p| (1+|c|^2)^(deg/2) m! / |f^(m)(c)|)^(1/m)
        double pnorm = 0.0;
        for (const auto& x : ch.coeffs) {
            pnorm += std::norm(x);
        }
        pnorm = std::sqrt(pnorm);
        const int deg = static_cast<int>(ch.coeffs.size()) - 1;
        double fact = 1.0;
        for (std::size_t t = 2; t <= m; ++t) {
            fact *= static_cast<double>(t);
        }
        const double lead = std::abs(ch.derivative(zc, static_cast<int>(m)));
        const double pert = kBackwardEta * pnorm * std::pow(1.0 + std::norm(zc), 0.5 * deg) * fact;
        if (!(lead > 0.0)) {
            return false;
        }
        return rmean <= std::pow(pert / lead, 1.0 / static_cast<double>(m));
    }

    const SymmetricState& state_;
    std::array<Chart, 2> charts_;
};

inline void sort_clusters(std::vector<MajoranaCluster>& clusters) {
    std::sort(clusters.begin(), clusters.end(), [](const MajoranaCluster& x, const MajoranaCluster& y) {
        if (x.degeneracy != y.degeneracy) {
            return x.degeneracy > y.degeneracy;
        }
        return x.point.angles() < y.point.angles();
    });
}

} // namespace detail

namespace detail {

// Working frames for root finding. Points near a pole make an end
// coefficient of the polynomial tiny (it scales like (b/a)^d for a d-fold
// point), which the leading-coefficient cutoff would misread as roots at
// infinity; the first frame whose end coefficients are well sized is used.
inline const std::array<Mat2, 6>& working_frames() {
    static const std::array<Mat2, 6> frames = [] {
        std::array<Mat2, 6> f;
        const std::array<std::pair<double, double>, 5> axes{
            {{1.1, 0.7}, {2.3, 2.9}, {0.6, 4.1}, {1.9, 5.3}, {2.7, 1.3}}};
        f[0] = Mat2::identity();
        for (std::size_t i = 0; i < axes.size(); ++i) {
            f[i + 1] = rotation_to(PureQubit::from_bloch(axes[i].first, axes[i].second));
        }
        return f;
    }();
    return frames;
}

inline double end_coefficient_score(const std::vector<cplx>& p) {
    double pmax = 0.0;
    for (const auto& x : p) {
        pmax = std::max(pmax, std::abs(x));
    }
    return std::min(std::abs(p.front()), std::abs(p.back())) / pmax;
}

} // namespace detail

/// Majorana points with degeneracies. Roots closer than `cluster_tol`
/// (Bloch chordal distance) are merged.
inline MajoranaSpectrum state_to_points(const SymmetricState& state, double cluster_tol = kDefaultClusterTol) {
    if (!(cluster_tol > 0.0 && cluster_tol < 0.5)) {
        throw DomainError("cluster_tol must lie in (0, 0.5)");
    }
    const int n = state.n();

    // pick the working frame: state = V^{(x) n} work
    Mat2 frame = Mat2::identity();
    SymmetricState work = state;
    auto p = majorana_polynomial(state);
    {
        double best = detail::end_coefficient_score(p);
        for (std::size_t i = 1; i < detail::working_frames().size() && best < 1e-4; ++i) {
            const Mat2& v = detail::working_frames()[i];
            SymmetricState cand = rotate(state, v.adjoint());
            auto pc = majorana_polynomial(cand);
            const double score = detail::end_coefficient_score(pc);
            if (score > best) {
                best = score;
                frame = v;
                work = std::move(cand);
                p = std::move(pc);
            }
        }
    }

    double pmax = 0.0;
    for (const auto& x : p) {
        pmax = std::max(pmax, std::abs(x));
    }
    for (auto& x : p) {
        if (std::abs(x) < kLeadingCutoff * pmax) {
            x = 0.0;
        }
    }
    int deg = n;
    while (deg > 0 && p[static_cast<std::size_t>(deg)] == cplx(0.0)) {
        --deg;
    }

    detail::RootResolver resolver(work, p);
    std::vector<PureQubit> roots;
    if (deg >= 1) {
        const auto z = detail::polynomial_roots(std::span<const cplx>(p.data(), static_cast<std::size_t>(deg) + 1));
        for (const auto& r : z) {
            if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
                throw NumericalError("root finder produced a non-finite root");
            }
            roots.push_back(PureQubit::normalized(r, 1.0));
        }
    }

    std::vector<MajoranaCluster> clusters;
    for (const auto& rc : resolver.resolve(roots)) {
        clusters.push_back({frame.apply(rc.point).canonical(), rc.multiplicity});
    }
    if (deg < n) {
        clusters.push_back({frame.apply(qubits::zero()).canonical(), n - deg});
    }

    // greedy agglomeration at cluster_tol
    std::vector<MajoranaCluster> merged;
    for (const auto& c : clusters) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const MajoranaCluster& m) {
            return chordal_distance(m.point, c.point) < cluster_tol;
        });
        if (it == merged.end()) {
            merged.push_back(c);
        } else {
            if (c.degeneracy > it->degeneracy) {
                it->point = c.point;
            }
            it->degeneracy += c.degeneracy;
        }
    }

    for (const auto& c : merged) {
        const double res = contraction_amplitudes(state, antipode(c.point)).back();
        if (!(res < 1e-6)) {
            std::ostringstream os;
            os << "Majorana root did not converge: residual " << res << " at Bloch angles (" << c.point.angles().first
               << ", " << c.point.angles().second << "), n = " << n;
            throw NumericalError(os.str());
        }
    }

    detail::sort_clusters(merged);
    return {n, std::move(merged)};
}

/// Axis and excitation number of a rotated Dicke state: the state equals
/// V^{(x) n} |S(n,k)> up to phase where V|0> = axis, k <= n/2.
struct DickeAxis {
    PureQubit axis;
    int k = 0;
};

inline std::optional<DickeAxis> is_dicke_up_to_rotation(const MajoranaSpectrum& spectrum, double tol) {
    const auto& cl = spectrum.clusters;
    if (cl.size() == 1) {
        return DickeAxis{cl[0].point, 0};
    }
    if (cl.size() != 2) {
        return std::nullopt;
    }
    if (std::abs(inner(cl[0].point, antipode(cl[1].point))) <= 1.0 - tol) {
        return std::nullopt;
    }
    // clusters are sorted by degeneracy, so cl[0] carries n - k >= k
    return DickeAxis{cl[0].point, cl[1].degeneracy};
}

inline std::optional<DickeAxis> is_dicke_up_to_rotation(const SymmetricState& state,
                                                        double tol = kDefaultClusterTol) {
    return is_dicke_up_to_rotation(state_to_points(state, std::min(tol, 0.49)), tol);
}

} // namespace symhardy
