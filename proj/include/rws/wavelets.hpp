#ifndef RWS_WAVELETS_HPP
#define RWS_WAVELETS_HPP

// Compactly supported orthonormal wavelet systems: extremal-phase filters of
// order N via spectral factorization, scaling/wavelet samples on a dyadic
// grid via the cascade iteration, tensor-product basis evaluation, synthesis
// of coefficient fields, and quadrature checks of the basis properties.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "rws/common.hpp"
#include "rws/field.hpp"
#include "rws/lattice.hpp"

namespace rws {

// Refinement filter pair: h lowpass (2N taps), g_k = (-1)^k h_{2N-1-k}.
struct FilterPair {
    int N = 1;
    std::vector<double> h;
    std::vector<double> g;
};

namespace detail {

using cldouble = std::complex<long double>;

// All roots of a polynomial (lowest-degree-first coefficients) by
// Durand-Kerner iteration with a Newton polish.
inline std::vector<cldouble> poly_roots(std::vector<cldouble> c) {
    int n = static_cast<int>(c.size()) - 1;
    for (auto& v : c) v /= c[n];
    auto eval = [&](cldouble y) {
        cldouble r = 0;
        for (int k = n; k >= 0; --k) r = r * y + c[k];
        return r;
    };
    auto deriv = [&](cldouble y) {
        cldouble r = 0;
        for (int k = n; k >= 1; --k) r = r * y + c[k] * cldouble(k);
        return r;
    };
    std::vector<cldouble> z(n);
    cldouble g(0.4L, 0.9L), acc = 1;
    for (int i = 0; i < n; ++i) {
        acc *= g;
        z[i] = acc;
    }
    for (int it = 0; it < 500; ++it) {
        long double worst = 0;
        for (int i = 0; i < n; ++i) {
            cldouble den = 1;
            for (int k = 0; k < n; ++k)
                if (k != i) den *= z[i] - z[k];
            cldouble step = eval(z[i]) / den;
            z[i] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-20L) break;
    }
    for (int i = 0; i < n; ++i)
        for (int it = 0; it < 4; ++it) z[i] -= eval(z[i]) / deriv(z[i]);
    return z;
}

inline std::vector<cldouble> poly_mul(const std::vector<cldouble>& a,
                                      const std::vector<cldouble>& b) {
    std::vector<cldouble> r(a.size() + b.size() - 1, cldouble(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) r[i + k] += a[i] * b[k];
    return r;
}

}  // namespace detail

// Extremal-phase filter of order N (N vanishing moments). The Bezout
// polynomial P(y) = sum_k C(N-1+k, k) y^k is factored through its roots;
// each root y maps to the quadratic z^2 - (2-4y)z + 1, whose root outside
// the unit circle enters the transfer function ((1+z)/2)^N prod (z-z_i)/(1-z_i).
inline FilterPair scaling_filter(int N) {
    if (N < 1 || N > 12) throw input_error("scaling_filter: order must be in 1..12");
    using detail::cldouble;
    std::vector<cldouble> m0{cldouble(1)};
    for (int i = 0; i < N; ++i) m0 = detail::poly_mul(m0, {cldouble(0.5L), cldouble(0.5L)});
    if (N > 1) {
        std::vector<cldouble> bez(N);
        long double binom = 1;
        for (int k = 0; k < N; ++k) {
            bez[k] = binom;  // C(N-1+k, k)
            binom = binom * (N + k) / (k + 1);
        }
        for (cldouble y : detail::poly_roots(bez)) {
            cldouble b = cldouble(1) - cldouble(2) * y;
            cldouble sq = std::sqrt(b * b - cldouble(1));
            cldouble z = b + sq;
            if (std::abs(z) < 1) z = cldouble(1) / (b - sq);
            m0 = detail::poly_mul(m0, {-z / (cldouble(1) - z), cldouble(1) / (cldouble(1) - z)});
        }
    }
    FilterPair f;
    f.N = N;
    const long double rt2 = 1.41421356237309504880L;
    for (const cldouble& c : m0) {
        if (std::abs(c.imag()) > 1e-12L)
            throw numeric_error("scaling_filter: factorization lost realness");
        f.h.push_back(static_cast<double>(rt2 * c.real()));
    }
    for (int k = 0; k < 2 * N; ++k)
        f.g.push_back((k % 2 ? -1.0 : 1.0) * f.h[2 * N - 1 - k]);
    return f;
}

// Scaling and wavelet samples on the dyadic grid {i 2^-depth} over the
// common support [0, 2N-1]. Tables are evaluated either as right-continuous
// step functions (quadrature) or by linear interpolation (pointwise use).
struct WaveletSystem {
    FilterPair filters;
    int depth = 10;
    int d = 1;
    int k_reg = 1;  // asserted smoothness/moment order of the pair
    std::vector<double> phi;
    std::vector<double> psi;

    int support_end() const { return 2 * filters.N - 1; }
    double step() const { return pow2(-depth); }
    std::size_t table_size() const {
        return static_cast<std::size_t>(support_end()) * (std::size_t{1} << depth) + 1;
    }

    double table_at(bool wavelet, double u, bool interpolate) const {
        double pos = u * pow2(depth);
        if (pos < 0.0 || pos > double(table_size() - 1)) return 0.0;
        const std::vector<double>& tab = wavelet ? psi : phi;
        std::size_t i = static_cast<std::size_t>(pos);
        if (!interpolate) return i >= tab.size() ? 0.0 : tab[std::min(i, tab.size() - 1)];
        if (i + 1 >= tab.size()) return tab.back();
        double frac = pos - double(i);
        return tab[i] + frac * (tab[i + 1] - tab[i]);
    }

    double phi_at(double u) const { return table_at(false, u, true); }
    double psi_at(double u) const { return table_at(true, u, true); }
};

namespace detail {

// One refinement pass: values at spacing 2^-(l+1) from values at 2^-l.
inline std::vector<double> refine(const std::vector<double>& prev, const std::vector<double>& taps,
                                  int l, int support) {
    std::int64_t half = std::int64_t{1} << l;
    std::int64_t n_prev = support * half;
    std::vector<double> next(static_cast<std::size_t>(2 * n_prev) + 1, 0.0);
    const double rt2 = 1.4142135623730951;
    for (std::int64_t i = 0; i <= 2 * n_prev; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < taps.size(); ++k) {
            std::int64_t src = i - std::int64_t(k) * half;
            if (src >= 0 && src <= n_prev) acc += taps[k] * prev[src];
        }
        next[i] = rt2 * acc;
    }
    return next;
}

}  // namespace detail

inline WaveletSystem cascade(const FilterPair& filters, int depth, int d = 1, int k_reg = 0) {
    if (depth < 4) throw input_error("cascade: depth must be >= 4");
    if (d < 1) throw input_error("cascade: need d >= 1");
    int N = filters.N;
    int support = 2 * N - 1;

    // Integer-grid values: the fixed vector of T(i,l) = sqrt(2) h_{2i-l} on
    // points 0..2N-2, normalized to sum 1 (partition of unity). T preserves
    // column sums, so power iteration is stable; the subdominant eigenvalue
    // 1/2 makes 200 iterations far more than enough.
    const double rt2 = 1.4142135623730951;
    int n0 = 2 * N - 1;
    std::vector<double> v(n0, 1.0 / n0), w(n0);
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < n0; ++i) {
            double acc = 0.0;
            for (int l = 0; l < n0; ++l) {
                int k = 2 * i - l;
                if (k >= 0 && k < 2 * N) acc += filters.h[k] * v[l];
            }
            w[i] = rt2 * acc;
        }
        double sum = 0.0;
        for (double x : w) sum += x;
        if (sum == 0.0 || !std::isfinite(sum))
            throw numeric_error("cascade: eigen-initialization failed");
        for (int i = 0; i < n0; ++i) v[i] = w[i] / sum;
    }
    for (int i = 0; i < n0; ++i) {
        double acc = 0.0;
        for (int l = 0; l < n0; ++l) {
            int k = 2 * i - l;
            if (k >= 0 && k < 2 * N) acc += filters.h[k] * v[l];
        }
        if (std::abs(rt2 * acc - v[i]) > 1e-11)
            throw numeric_error("cascade: integer-grid values did not converge");
    }

    std::vector<double> phi(v);
    phi.push_back(0.0);  // right endpoint of the support
    for (int l = 0; l < depth - 1; ++l) phi = detail::refine(phi, filters.h, l, support);

    WaveletSystem sys;
    sys.filters = filters;
    sys.depth = depth;
    sys.d = d;
    sys.k_reg = k_reg > 0 ? k_reg : N;
    sys.psi.assign(sys.table_size(), 0.0);
    std::int64_t half = std::int64_t{1} << (depth - 1);
    for (std::size_t i = 0; i < sys.psi.size(); ++i) {
        double acc = 0.0;
        for (int k = 0; k < 2 * N; ++k) {
            std::int64_t src = std::int64_t(i) - std::int64_t(k) * half;
            if (src >= 0 && src < std::int64_t(phi.size())) acc += filters.g[k] * phi[src];
        }
        sys.psi[i] = rt2 * acc;
    }
    sys.phi = detail::refine(phi, filters.h, depth - 1, support);
    return sys;
}

// Tensor basis value at x: prod_k psi_{t_k}(x_k - m_k) at j = 0, and
// 2^{(j-1)d/2} prod_k psi_{t_k}(2^{j-1}x_k - m_k) at j >= 1 (type bit k set
// selects the wavelet factor). Off-grid arguments interpolate linearly.
inline double eval_basis(const WaveletSystem& sys, const BasisIndex& idx,
                         const std::vector<double>& x) {
    idx.validate();
    if (idx.dim() != sys.d || x.size() != static_cast<std::size_t>(sys.d))
        throw input_error("eval_basis: dimension mismatch");
    for (double c : x)
        if (!std::isfinite(c)) throw input_error("eval_basis: point must be finite");
    double argscale = idx.j == 0 ? 1.0 : pow2(idx.j - 1);
    double value = idx.j == 0 ? 1.0 : pow2(0.5 * (idx.j - 1) * sys.d);
    for (int k = 0; k < sys.d && value != 0.0; ++k) {
        bool wavelet = (idx.t >> k) & 1u;
        value *= sys.table_at(wavelet, argscale * x[k] - double(idx.m[k]), true);
    }
    return value;
}

// Pointwise synthesis of a truncated field: per grid point and level only
// the O((2N)^d) shifts whose support covers the point are visited.
inline std::vector<double> synthesize(const WaveletSystem& sys, const CoefficientField& field,
                                      const std::vector<std::vector<double>>& grid) {
    if (field.dim() != sys.d) throw input_error("synthesize: dimension mismatch");
    int d = sys.d;
    int width = sys.support_end();
    std::vector<double> out(grid.size(), 0.0);
    std::vector<std::int64_t> m(d), lo(d), hi(d);
    std::vector<double> phival(d), psival(d);
    for (std::size_t gidx = 0; gidx < grid.size(); ++gidx) {
        const std::vector<double>& x = grid[gidx];
        if (x.size() != static_cast<std::size_t>(d))
            throw input_error("synthesize: grid point dimension mismatch");
        kahan_sum acc;
        for (int j = 0; j <= field.top_scale(); ++j) {
            double argscale = j == 0 ? 1.0 : pow2(j - 1);
            double prefactor = j == 0 ? 1.0 : pow2(0.5 * (j - 1) * d);
            std::int64_t cap = field.cap(j);
            bool empty = false;
            for (int k = 0; k < d; ++k) {
                double u = argscale * x[k];
                lo[k] = std::max<std::int64_t>(std::int64_t(std::ceil(u)) - width, -cap);
                hi[k] = std::min<std::int64_t>(std::int64_t(std::floor(u)), cap);
                if (lo[k] > hi[k]) empty = true;
            }
            if (empty) continue;
            m = lo;
            while (true) {
                for (int k = 0; k < d; ++k) {
                    double u = argscale * x[k] - double(m[k]);
                    phival[k] = sys.table_at(false, u, true);
                    psival[k] = sys.table_at(true, u, true);
                }
                std::size_t pos = field.position(j, m);
                for (unsigned t = field.first_type(j); t <= field.last_type(j); ++t) {
                    double coeff = field.level(j, t)[pos];
                    if (coeff == 0.0) continue;
                    double prod = prefactor;
                    for (int k = 0; k < d; ++k) prod *= ((t >> k) & 1u) ? psival[k] : phival[k];
                    acc.add(coeff * prod);
                }
                int k = 0;
                while (k < d && ++m[k] > hi[k]) {
                    m[k] = lo[k];
                    ++k;
                }
                if (k == d) break;
            }
        }
        out[gidx] = acc.value();
    }
    return out;
}

// Left-endpoint dyadic Riemann sum of x^pow times the table over [0, 2N-1].
inline double table_moment(const WaveletSystem& sys, bool wavelet, int pow) {
    const std::vector<double>& tab = wavelet ? sys.psi : sys.phi;
    double dx = sys.step();
    kahan_sum acc;
    for (std::size_t i = 0; i + 1 < tab.size(); ++i) {
        double term = tab[i];
        double x = double(i) * dx;
        for (int l = 0; l < pow; ++l) term *= x;
        acc.add(term);
    }
    return acc.value() * dx;
}

inline double scaling_integral(const WaveletSystem& sys) { return table_moment(sys, false, 0); }

// Max |moment| of the wavelet table for exponents 0..up_to (< filter order).
inline double check_vanishing_moments(const WaveletSystem& sys, int up_to) {
    if (up_to >= sys.filters.N)
        throw input_error("check_vanishing_moments: exponent reaches filter order");
    if (up_to < 0) throw input_error("check_vanishing_moments: negative exponent");
    double worst = 0.0;
    for (int l = 0; l <= up_to; ++l) worst = std::max(worst, std::abs(table_moment(sys, true, l)));
    return worst;
}

namespace detail {

// Integral of psi_a(2^{ea}x - ma) psi_b(2^{eb}x - mb) dx over the support
// overlap, by a left-endpoint sum on the common dyadic grid (step-function
// semantics, so the piecewise-constant case is exact).
inline double pair_integral_1d(const WaveletSystem& sys, int ea, bool wa, std::int64_t ma,
                               int eb, bool wb, std::int64_t mb) {
    int emax = std::max(ea, eb);
    double width = double(sys.support_end());
    double lo = std::max(double(ma) * pow2(-ea), double(mb) * pow2(-eb));
    double hi = std::min((double(ma) + width) * pow2(-ea), (double(mb) + width) * pow2(-eb));
    if (hi <= lo) return 0.0;
    double dx = pow2(-(sys.depth + emax));
    std::int64_t n = std::int64_t((hi - lo) / dx + 0.5);
    double sa = pow2(ea), sb = pow2(eb);
    kahan_sum acc;
    for (std::int64_t i = 0; i < n; ++i) {
        double x = lo + double(i) * dx;
        acc.add(sys.table_at(wa, sa * x - double(ma), false) *
                sys.table_at(wb, sb * x - double(mb), false));
    }
    return acc.value() * dx;
}

}  // namespace detail

// Quadrature inner product of two tensor basis functions (separable: the
// d-dimensional integral is the product of coordinate pairings).
inline double basis_inner_product(const WaveletSystem& sys, const BasisIndex& a,
                                  const BasisIndex& b) {
    a.validate();
    b.validate();
    if (a.dim() != sys.d || b.dim() != sys.d)
        throw input_error("basis_inner_product: dimension mismatch");
    int ea = std::max(a.j - 1, 0), eb = std::max(b.j - 1, 0);
    double value = pow2(0.5 * sys.d * (ea + eb));
    for (int k = 0; k < sys.d && value != 0.0; ++k)
        value *= detail::pair_integral_1d(sys, ea, (a.t >> k) & 1u, a.m[k], eb, (b.t >> k) & 1u,
                                          b.m[k]);
    return value;
}

// Max |<a, b> - delta_{ab}| over the given pairs.
inline double check_orthonormality(const WaveletSystem& sys,
                                   const std::vector<std::pair<BasisIndex, BasisIndex>>& pairs) {
    double worst = 0.0;
    for (const auto& pr : pairs) {
        bool same = pr.first.j == pr.second.j && pr.first.t == pr.second.t &&
                    pr.first.m == pr.second.m;
        double ip = basis_inner_product(sys, pr.first, pr.second);
        worst = std::max(worst, std::abs(ip - (same ? 1.0 : 0.0)));
    }
    return worst;
}

}  // namespace rws

#endif
