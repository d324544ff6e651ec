#ifndef RWS_COMMON_HPP
#define RWS_COMMON_HPP

// Shared basics: error types, compensated summation, checked integer
// arithmetic and a few numeric helpers used across the library.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rws {

constexpr double inf = std::numeric_limits<double>::infinity();

// Input that violates a documented precondition.
class input_error : public std::invalid_argument {
  public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Counted quantity exceeds the fixed-width integer range.
class overflow_error : public std::overflow_error {
  public:
    explicit overflow_error(const std::string& what) : std::overflow_error(what) {}
};

// Materialization would exceed the configured memory budget.
class resource_error : public std::runtime_error {
  public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical procedure failed to converge.
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Kahan-Neumaier compensated accumulator. Levels of a sequence norm span
// many orders of magnitude, so plain summation loses low-order terms.
class kahan_sum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error(std::string(what) + ": count overflow");
    return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error(std::string(what) + ": count overflow");
    return r;
}

// base^e with overflow checking, e >= 0.
inline std::uint64_t checked_pow(std::uint64_t base, unsigned e, const char* what) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r = checked_mul(r, base, what);
    return r;
}

inline bool is_infinite(double p) { return std::isinf(p); }

// Exact powers of two as doubles, |e| within double range.
inline double pow2(double e) { return std::exp2(e); }

}  // namespace rws

#endif
