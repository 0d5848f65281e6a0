#pragma once

#include <cmath>

#include "qif/belief.hpp"
#include "qif/extended_real.hpp"
#include "qif/rational.hpp"

// Divergences between beliefs, log base 2 throughout. Zero conventions:
// 0 * log(0/q) = 0 for q >= 0, and p * log(p/0) = +inf for p > 0.

namespace qif {

namespace detail {

inline double log2_ratio(const Rat& num, const Rat& den) { return std::log2(to_double(num / den)); }

// Clamps float dust off a mathematically guaranteed range; values beyond
// the dust margin pass through unchanged.
inline double snap_to_range(double x, double lo, double hi) {
    constexpr double dust = 1e-12;
    if (x < lo && x > lo - dust) return lo;
    if (x > hi && x < hi + dust) return hi;
    return x;
}

}  // namespace detail

/// Per-state discrimination inside Kullback-Leibler divergence:
/// log2(b2(s) / b(s)). Infinite when exactly one side vanishes; 0 when both
/// do (that case is never weighted by nonzero probability).
inline ExtendedReal disc_kl(const Rat& b, const Rat& b2) {
    if (b == 0 && b2 == 0) return ExtendedReal::finite(0.0);
    if (b == 0) return ExtendedReal::pos_inf();
    if (b2 == 0) return ExtendedReal::neg_inf();
    return ExtendedReal::finite(detail::log2_ratio(b2, b));
}

/// Per-state discrimination against the mean: log2(b2(s) / ((b(s)+b2(s))/2)).
/// At most 1 bit; finite whenever b2(s) > 0; -inf when b2(s) = 0 < b(s).
inline double disc_js(const Rat& b, const Rat& b2) {
    if (b == 0 && b2 == 0) return 0.0;
    if (b2 == 0) return -std::numeric_limits<double>::infinity();
    if (b == 0) return 1.0;  // exact 1-bit ceiling
    return detail::log2_ratio(2 * b2, b + b2);
}

/// Shifted discrimination log2((1 + b2(s)) / (1 + b(s))): always finite,
/// inside [-1, 1].
inline double disc_alt(const Rat& b, const Rat& b2) { return detail::log2_ratio(Rat(1) + b2, Rat(1) + b); }

inline ExtendedReal disc_kl(const Belief& b, const Belief& b2, const JointState& s) {
    check_same_domain(b, b2);
    return disc_kl(b.at(s), b2.at(s));
}
inline double disc_js(const Belief& b, const Belief& b2, const JointState& s) {
    check_same_domain(b, b2);
    return disc_js(b.at(s), b2.at(s));
}
inline double disc_alt(const Belief& b, const Belief& b2, const JointState& s) {
    check_same_domain(b, b2);
    return disc_alt(b.at(s), b2.at(s));
}

/// Kullback-Leibler divergence D(b -> b2) = sum b2(s) log2(b2(s)/b(s)).
/// Nonnegative; zero iff b = b2; +inf exactly when b2 puts mass where b
/// has none.
inline ExtendedReal kl_divergence(const Belief& b, const Belief& b2) {
    check_same_domain(b, b2);
    double sum = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
        const Rat& p = b.at(i);
        const Rat& q = b2.at(i);
        if (q == 0) continue;
        if (p == 0) return ExtendedReal::pos_inf();
        sum += to_double(q) * detail::log2_ratio(q, p);
    }
    return ExtendedReal::finite(std::max(sum, 0.0));
}

/// Asymmetric Jensen-Shannon divergence
/// K(b -> b2) = sum b2(s) log2(b2(s) / ((b(s)+b2(s))/2)), always finite,
/// inside [0, 1]; zero iff b = b2.
inline double js_asym_divergence(const Belief& b, const Belief& b2) {
    check_same_domain(b, b2);
    // Terms where b(s) = 0 contribute exactly one bit each; their weight is
    // accumulated as an exact rational so the boundary value 1 is hit
    // exactly for disjoint supports.
    Rat ceiling_weight = 0;
    double sum = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
        const Rat& p = b.at(i);
        const Rat& q = b2.at(i);
        if (q == 0) continue;
        if (p == 0) {
            ceiling_weight += q;
            continue;
        }
        sum += to_double(q) * detail::log2_ratio(2 * q, p + q);
    }
    return detail::snap_to_range(sum + to_double(ceiling_weight), 0.0, 1.0);
}

/// Symmetric form of Kullback-Leibler divergence:
/// J(b -> b2) = sum (b2(s)-b(s)) log2(b2(s)/b(s)). Nonnegative; +inf as
/// soon as the supports differ in either direction.
inline ExtendedReal j_divergence(const Belief& b, const Belief& b2) {
    check_same_domain(b, b2);
    double sum = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
        const Rat& p = b.at(i);
        const Rat& q = b2.at(i);
        if (p == q) continue;
        if (p == 0 || q == 0) return ExtendedReal::pos_inf();
        sum += to_double(q - p) * detail::log2_ratio(q, p);
    }
    return ExtendedReal::finite(std::max(sum, 0.0));
}

/// Symmetric form of the asymmetric Jensen-Shannon divergence:
/// L(b, b2) = 2 S((b+b2)/2) - S(b) - S(b2), in [0, 2] bits. Decomposes as
/// K(b -> b2) + K(b2 -> b).
inline double l_divergence(const Belief& b, const Belief& b2) {
    check_same_domain(b, b2);
    std::vector<Rat> mix(b.size());
    for (size_t i = 0; i < b.size(); ++i) mix[i] = (b.at(i) + b2.at(i)) / 2;
    Belief mean = Belief::from_probs(b.domain(), std::move(mix));
    double l = 2.0 * shannon_entropy(mean) - shannon_entropy(b) - shannon_entropy(b2);
    return detail::snap_to_range(l, 0.0, 2.0);
}

}  // namespace qif
