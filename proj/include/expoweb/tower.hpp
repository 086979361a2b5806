#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace expoweb {

// Overflow-safe representation of iterated-exponential magnitudes.
//
// A TowerValue (level, base) denotes exp applied `level` times to `base`.
// Canonical form: level == 0 iff the denoted value is < cutoff (1e300);
// for level >= 1 the base lies in [ln(cutoff), cutoff).  Comparison is a
// total order consistent with the denoted reals.
//
// Additive constants of modest size (|k| <= ~700) are absorbed at level >= 1:
// the relative error of dropping +-k against a value >= 1e300 is < 1e-250,
// far below every tolerance used by callers.  Callers that need soundness
// pick the comparison direction so this slop is conservative.
class TowerValue {
public:
    static constexpr double cutoff = 1e300;

    TowerValue() : level_(0), base_(0.0) {}

    static TowerValue from_value(double v) { return TowerValue(0, v); }

    // Value e^lg, where lg itself is an ordinary double (possibly >= 709).
    static TowerValue from_log(double lg) {
        if (lg < std::log(cutoff)) return TowerValue(0, std::exp(lg));
        return TowerValue(1, lg);
    }

    int level() const { return level_; }
    double base() const { return base_; }

    bool finite_double() const { return level_ == 0; }
    double as_double() const { return level_ == 0 ? base_ : HUGE_VAL; }

    // Natural log of the denoted value (only meaningful for positive values).
    TowerValue log() const {
        if (level_ >= 1) return TowerValue(level_ - 1, base_);
        return from_value(std::log(base_));
    }

    // F(t) = e^t - 1 applied to this value.  At level >= 1 the "-1" is
    // absorbed (slop note above).
    TowerValue apply_F() const {
        if (level_ == 0) {
            if (base_ < std::log(cutoff)) return from_value(std::expm1(base_));
            return TowerValue(1, base_); // e^t - 1 ~ e^t, conservative slop
        }
        return TowerValue(level_ + 1, base_);
    }

    // this + k for a small constant k (absorbed at level >= 1).
    TowerValue add(double k) const {
        if (level_ == 0) return from_value(base_ + k);
        return *this;
    }

    friend std::strong_ordering operator<=>(const TowerValue& x, const TowerValue& y) {
        if (x.level_ != y.level_) {
            // Levels differ: the larger level denotes the larger value,
            // except that a level-0 value compares by sign/magnitude anyway
            // because canonical level>=1 values exceed cutoff > any level-0.
            return x.level_ < y.level_ ? std::strong_ordering::less
                                       : std::strong_ordering::greater;
        }
        if (x.base_ < y.base_) return std::strong_ordering::less;
        if (x.base_ > y.base_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const TowerValue& x, const TowerValue& y) {
        return (x <=> y) == std::strong_ordering::equal;
    }

    std::string str() const {
        if (level_ == 0) return std::to_string(base_);
        return "exp^" + std::to_string(level_) + "(" + std::to_string(base_) + ")";
    }

private:
    TowerValue(int lvl, double b) : level_(lvl), base_(b) { canonicalize(); }

    void canonicalize() {
        while (level_ > 0 && base_ < std::log(cutoff)) {
            // denoted value representable one level down
            base_ = std::exp(base_);
            --level_;
        }
        while (base_ >= cutoff) {
            base_ = std::log(base_);
            ++level_;
        }
    }

    int level_;
    double base_;
};

// A conservative bracket [lo, hi] around a quantity that may exceed doubles.
struct TowerInterval {
    TowerValue lo;
    TowerValue hi;

    bool is_point() const { return lo == hi; }
};

// F(t) = e^t - 1 on a plain double input.
inline TowerValue eval_F(double t) { return TowerValue::from_value(t).apply_F(); }
inline TowerValue eval_F(TowerValue t) { return t.apply_F(); }

// F^n(t); n = 0 returns t unchanged.
inline TowerValue iterate_F(double t, int n) {
    TowerValue v = TowerValue::from_value(t);
    for (int i = 0; i < n; ++i) v = v.apply_F();
    return v;
}

} // namespace expoweb
