#ifndef RWS_FIELD_HPP
#define RWS_FIELD_HPP

// Truncated coefficient field: dense values over scales j <= J_max, types
// t in T_j, and shifts |m|_inf <= cap(j), stored per level in the canonical
// shift-enumeration order. All lookup state is built at construction, so
// const access from multiple threads is safe.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rws/common.hpp"
#include "rws/io.hpp"
#include "rws/lattice.hpp"

namespace rws {

class CoefficientField {
  public:
    // cap holds one bound per scale 0..J_max. Levels are zero-initialized.
    CoefficientField(int d, int J_max, std::vector<std::int64_t> cap,
                     std::uint64_t max_bytes = std::uint64_t{1} << 31)
        : d_(d), J_max_(J_max), cap_(std::move(cap)) {
        if (d < 1) throw input_error("CoefficientField: need d >= 1");
        if (d > 16) throw input_error("CoefficientField: dimension too large");
        if (J_max < 0) throw input_error("CoefficientField: need J_max >= 0");
        if (cap_.size() != static_cast<std::size_t>(J_max) + 1)
            throw input_error("CoefficientField: cap must list scales 0..J_max");
        std::uint64_t bytes = 0;
        for (int j = 0; j <= J_max; ++j) {
            if (cap_[j] < 0) throw input_error("CoefficientField: negative cap");
            std::uint64_t pts = checked_pow(2 * std::uint64_t(cap_[j]) + 1,
                                            static_cast<unsigned>(d), "CoefficientField");
            std::uint64_t lvl = checked_mul(pts, std::uint64_t(type_count(j)), "CoefficientField");
            // 8 bytes per stored value plus roughly 56 per map node below.
            bytes = checked_add(bytes, checked_mul(lvl, 8, "CoefficientField"), "CoefficientField");
            bytes = checked_add(bytes, checked_mul(pts, 56, "CoefficientField"), "CoefficientField");
            if (bytes > max_bytes)
                throw resource_error("CoefficientField: memory budget exceeded at scale " +
                                     std::to_string(j));
        }
        shifts_.reserve(J_max + 1);
        values_.resize(J_max + 1);
        pos_.resize(J_max + 1);
        for (int j = 0; j <= J_max; ++j) {
            shifts_.push_back(enumerate_shifts(d, cap_[j]));
            values_[j].assign(type_count(j), std::vector<double>(shifts_[j].size(), 0.0));
            // Built up front so that value() stays safe under concurrent reads.
            pos_[j].reserve(shifts_[j].size());
            for (std::size_t i = 0; i < shifts_[j].size(); ++i)
                pos_[j].emplace(pack(shifts_[j].at(i)), i);
        }
        manifest_.set("field", "explicit");
    }

    int dim() const { return d_; }
    int top_scale() const { return J_max_; }
    std::int64_t cap(int j) const { return cap_.at(j); }
    const std::vector<std::int64_t>& caps() const { return cap_; }

    // Types present at scale j: {0} at j = 0, {1, ..., 2^d - 1} otherwise.
    unsigned first_type(int j) const { return j == 0 ? 0u : 1u; }
    unsigned last_type(int j) const { return j == 0 ? 0u : (1u << d_) - 1; }
    unsigned type_count(int j) const { return j == 0 ? 1u : (1u << d_) - 1; }

    const ShiftList& shifts(int j) const { return shifts_.at(j); }

    const std::vector<double>& level(int j, unsigned t) const {
        return values_.at(j).at(slot(j, t));
    }
    std::vector<double>& level(int j, unsigned t) { return values_.at(j).at(slot(j, t)); }

    // Zero off the stored truncation, by the sequence-space convention.
    double value(const BasisIndex& idx) const {
        idx.validate();
        if (idx.dim() != d_) throw input_error("CoefficientField: dimension mismatch");
        if (idx.j > J_max_ || sup_norm(idx.m) > cap_[idx.j]) return 0.0;
        return level(idx.j, idx.t)[position(idx.j, idx.m)];
    }

    void set_value(const BasisIndex& idx, double v) {
        idx.validate();
        if (idx.dim() != d_) throw input_error("CoefficientField: dimension mismatch");
        if (!std::isfinite(v)) throw input_error("CoefficientField: value must be finite");
        if (idx.j > J_max_ || sup_norm(idx.m) > cap_[idx.j])
            throw input_error("CoefficientField: index outside truncation");
        level(idx.j, idx.t)[position(idx.j, idx.m)] = v;
    }

    void scale_all(double cfac) {
        for (auto& lvls : values_)
            for (auto& vals : lvls)
                for (double& v : vals) v *= cfac;
    }

    std::uint64_t stored_count() const {
        std::uint64_t n = 0;
        for (const auto& lvls : values_)
            for (const auto& vals : lvls) n += vals.size();
        return n;
    }

    Manifest& manifest() { return manifest_; }
    const Manifest& manifest() const { return manifest_; }

    // Index of shift m within the level-j enumeration.
    std::size_t position(int j, const std::vector<std::int64_t>& m) const {
        const auto& map = pos_[j];
        auto it = map.find(pack(m.data()));
        if (it == map.end()) throw input_error("CoefficientField: shift outside truncation");
        return it->second;
    }

  private:
    std::size_t slot(int j, unsigned t) const {
        if (t < first_type(j) || t > last_type(j))
            throw input_error("CoefficientField: type code invalid at this scale");
        return j == 0 ? 0 : t - 1;
    }

    // Shifts fit per-coordinate into 63/d bits; the constructor's memory
    // budget rules out caps anywhere near that bound.
    std::uint64_t pack(const std::int64_t* m) const {
        int width = 63 / d_;
        std::uint64_t key = 0;
        for (int k = 0; k < d_; ++k) {
            std::uint64_t c = static_cast<std::uint64_t>(m[k] + (std::int64_t{1} << (width - 1)));
            key = (key << width) | (c & ((std::uint64_t{1} << width) - 1));
        }
        return key;
    }

    int d_;
    int J_max_;
    std::vector<std::int64_t> cap_;
    std::vector<ShiftList> shifts_;
    std::vector<std::vector<std::vector<double>>> values_;
    std::vector<std::unordered_map<std::uint64_t, std::size_t>> pos_;
    Manifest manifest_;
};

}  // namespace rws

#endif
