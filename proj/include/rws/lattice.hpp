#ifndef RWS_LATTICE_HPP
#define RWS_LATTICE_HPP

// Index-set bookkeeping over Z^d: basis indices (j, t, m), cube/shell counts,
// the norm-nondecreasing shift enumeration, and lattice weight sums
// sum_{m in Z^d} (1 + |m|_inf / a)^e.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rws/common.hpp"

namespace rws {

// One wavelet/coefficient index. The type code t encodes a vector in {F,M}^d:
// bit k set means component k is M. Scale 0 admits only the all-F type; every
// scale j >= 1 excludes it.
struct BasisIndex {
    int j = 0;
    unsigned t = 0;
    std::vector<std::int64_t> m;

    int dim() const { return static_cast<int>(m.size()); }

    void validate() const {
        int d = dim();
        if (d < 1) throw input_error("BasisIndex: empty shift vector");
        if (j < 0) throw input_error("BasisIndex: negative scale");
        if (t >= (1u << d)) throw input_error("BasisIndex: type code out of range");
        if (j == 0 && t != 0) throw input_error("BasisIndex: scale 0 requires the all-F type");
        if (j >= 1 && t == 0) throw input_error("BasisIndex: scale >= 1 excludes the all-F type");
    }
};

inline std::int64_t sup_norm(const std::int64_t* m, int d) {
    std::int64_t r = 0;
    for (int k = 0; k < d; ++k) r = std::max(r, m[k] < 0 ? -m[k] : m[k]);
    return r;
}

inline std::int64_t sup_norm(const std::vector<std::int64_t>& m) {
    return sup_norm(m.data(), static_cast<int>(m.size()));
}

// #{m in Z^d : |m|_inf <= 2^j} = (2^{j+1} + 1)^d, with checked arithmetic.
inline std::uint64_t points_up_to(int j, int d) {
    if (j < 0 || d < 1) throw input_error("points_up_to: need j >= 0 and d >= 1");
    if (j + 1 >= 63) throw overflow_error("points_up_to: scale too large");
    std::uint64_t side = checked_add(std::uint64_t{1} << (j + 1), 1, "points_up_to");
    return checked_pow(side, static_cast<unsigned>(d), "points_up_to");
}

// #{m in Z^d : 2^j < |m|_inf <= 2^{j+1}}.
inline std::uint64_t shell_count(int j, int d) {
    return points_up_to(j + 1, d) - points_up_to(j, d);
}

// #{m in Z^d : |m|_inf = l} = (2l+1)^d - (2l-1)^d for l >= 1, and 1 for l = 0.
inline std::uint64_t shell_size(std::int64_t l, int d) {
    if (l < 0 || d < 1) throw input_error("shell_size: need l >= 0 and d >= 1");
    if (l == 0) return 1;
    std::uint64_t outer = checked_pow(checked_mul(2, std::uint64_t(l), "shell_size") + 1,
                                      static_cast<unsigned>(d), "shell_size");
    std::uint64_t inner = checked_pow(2 * std::uint64_t(l) - 1, static_cast<unsigned>(d), "shell_size");
    return outer - inner;
}

// Cube/shell count table M_j = (2^{j+1}+1)^d, N_j = M_{j+1} - M_j.
struct ShellTable {
    int d = 1;
    std::vector<std::uint64_t> M;
    std::vector<std::uint64_t> N;

    static ShellTable build(int d, int j_top) {
        if (d < 1 || j_top < 0) throw input_error("ShellTable: need d >= 1 and j_top >= 0");
        ShellTable s;
        s.d = d;
        for (int j = 0; j <= j_top; ++j) {
            s.M.push_back(points_up_to(j, d));
            s.N.push_back(shell_count(j, d));
        }
        return s;
    }
};

// Flat list of shifts, d coordinates per entry.
class ShiftList {
  public:
    ShiftList(int d, std::vector<std::int64_t> flat) : d_(d), flat_(std::move(flat)) {}

    int dim() const { return d_; }
    std::size_t size() const { return flat_.size() / d_; }
    const std::int64_t* at(std::size_t i) const { return flat_.data() + i * d_; }

    std::vector<std::int64_t> shift(std::size_t i) const {
        return std::vector<std::int64_t>(at(i), at(i) + d_);
    }

  private:
    int d_;
    std::vector<std::int64_t> flat_;
};

namespace detail {

// Emit the shell {|m|_inf = l} in lexicographic order. A point lies on the
// shell iff some coordinate equals +-l; once one does, the remaining
// coordinates range over the whole cube.
inline void emit_shell(int d, std::int64_t l, int pos, bool hit,
                       std::vector<std::int64_t>& cur, std::vector<std::int64_t>& out) {
    if (pos == d) {
        if (hit) out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (std::int64_t c = -l; c <= l; ++c) {
        // Without a max-coordinate so far, only the first and last values of
        // the final coordinate can complete a shell point; skip the interior.
        if (!hit && pos == d - 1 && c > -l && c < l) c = l;
        cur[pos] = c;
        emit_shell(d, l, pos + 1, hit || c == -l || c == l, cur, out);
    }
}

}  // namespace detail

// All shifts with |m|_inf <= cap, ordered by nondecreasing sup norm and
// lexicographically within each shell. The origin comes first. This is the
// canonical bijection tau -> phi(tau) used by the averaged statistics.
inline ShiftList enumerate_shifts(int d, std::int64_t cap) {
    if (d < 1 || cap < 0) throw input_error("enumerate_shifts: need d >= 1 and cap >= 0");
    std::uint64_t n = checked_pow(2 * std::uint64_t(cap) + 1, static_cast<unsigned>(d), "enumerate_shifts");
    std::vector<std::int64_t> flat;
    flat.reserve(n * d);
    std::vector<std::int64_t> cur(d, 0);
    for (std::int64_t l = 0; l <= cap; ++l) detail::emit_shell(d, l, 0, l == 0, cur, flat);
    return ShiftList(d, std::move(flat));
}

// Result of a lattice weight sum; divergence is a value, not an error.
struct WeightSum {
    bool finite = false;
    double value = inf;
};

namespace detail {

// Hurwitz zeta(s, q) for s > 1, q > 0 by Euler-Maclaurin: exact leading
// terms, integral tail, and Bernoulli corrections.
inline double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw input_error("hurwitz_zeta: need s > 1 and q > 0");
    static const double b2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
    int n = 18;
    kahan_sum head;
    for (int i = 0; i < n; ++i) head.add(std::pow(q + i, -s));
    double x = q + n;
    double sum = head.value() + std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    double fact = 1.0;   // (2k)!
    double rise = 1.0;   // s (s+1) ... (s+2k-2)
    for (int k = 1; k <= 6; ++k) {
        fact *= (2.0 * k - 1) * (2.0 * k);
        rise *= (k == 1) ? s : (s + 2 * k - 3) * (s + 2 * k - 2);
        sum += b2k[k - 1] / fact * rise * std::pow(x, -s - 2 * k + 1);
    }
    return sum;
}

inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace detail

// sum_{m in Z^d} (1 + |m|_inf / a)^e. Finite iff e < -d. The sum is reduced
// to Hurwitz zeta values: with c_d(l) = (2l+1)^d - (2l-1)^d expanded in powers
// of l and l^k rewritten around a + l, each term becomes zeta(-(e+i), a+1).
inline WeightSum weight_sum(int d, double a, double e) {
    if (d < 1) throw input_error("weight_sum: need d >= 1");
    if (!std::isfinite(a) || !std::isfinite(e) || a < 1.0)
        throw input_error("weight_sum: need finite e and finite a >= 1");
    if (e >= -double(d)) return WeightSum{false, inf};

    // c_d(l) = 2 * sum_{k : d-k odd} C(d,k) (2l)^k for l >= 1.
    std::vector<double> coef(d, 0.0);
    for (int k = 0; k < d; ++k)
        if ((d - k) % 2 == 1) coef[k] = 2.0 * detail::binom(d, k) * pow2(k);

    kahan_sum total;
    total.add(1.0);  // origin
    double a_pow_e = std::pow(a, -e);
    for (int k = 0; k < d; ++k) {
        if (coef[k] == 0.0) continue;
        // l^k = ((a+l) - a)^k = sum_i C(k,i) (a+l)^i (-a)^{k-i}
        for (int i = 0; i <= k; ++i) {
            double c = coef[k] * detail::binom(k, i) * std::pow(-a, k - i);
            total.add(a_pow_e * c * detail::hurwitz_zeta(-(e + i), a + 1.0));
        }
    }
    return WeightSum{true, total.value()};
}

}  // namespace rws

#endif
