#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "qif/error.hpp"

namespace qif {

/// A real extended with explicit +inf/-inf endpoints. Infinities are always
/// constructed deliberately (a log of zero, an unbounded range end), never as
/// overflow artifacts: the finite constructor rejects non-finite doubles.
class ExtendedReal {
public:
    constexpr ExtendedReal() : v_(0.0) {}

    static ExtendedReal finite(double x) {
        if (!std::isfinite(x)) throw Error("ExtendedReal::finite called with non-finite value");
        return ExtendedReal(x);
    }
    static constexpr ExtendedReal pos_inf() { return ExtendedReal(std::numeric_limits<double>::infinity()); }
    static constexpr ExtendedReal neg_inf() { return ExtendedReal(-std::numeric_limits<double>::infinity()); }

    /// Adopts an already-computed double, mapping IEEE infinities onto the
    /// explicit endpoints. NaN is rejected.
    static ExtendedReal from_double(double x) {
        if (std::isnan(x)) throw Error("ExtendedReal::from_double called with NaN");
        return ExtendedReal(x);
    }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

    /// Underlying value; +-inf for the infinite states.
    double value() const { return v_; }

    ExtendedReal operator-() const { return ExtendedReal(-v_); }

    /// Halving preserves the infinite states (half of +inf is +inf).
    ExtendedReal half() const { return ExtendedReal(v_ / 2.0); }

    friend auto operator<=>(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ <=> b.v_; }
    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ == b.v_; }
    friend auto operator<=>(const ExtendedReal& a, double b) { return a.v_ <=> b; }
    friend bool operator==(const ExtendedReal& a, double b) { return a.v_ == b; }

    std::string str() const {
        if (is_pos_inf()) return "inf";
        if (is_neg_inf()) return "-inf";
        return std::to_string(v_);
    }

private:
    explicit constexpr ExtendedReal(double v) : v_(v) {}
    double v_;
};

}  // namespace qif
