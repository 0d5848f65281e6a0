#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "qif/error.hpp"

namespace qif {

/// Exact rational used for every probability in the interpreter and the
/// belief pipeline. Conversion to double happens only at the metric layer.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Parses "3", "0.99" or "99/100" into an exact rational. Decimal literals
/// are exact: 0.99 becomes 99/100, never a binary float.
inline Rat parse_rat(std::string_view text) {
    auto fail = [&] { throw ValidationError("invalid rational literal '" + std::string(text) + "'"); };

    std::string s(text);
    if (s.empty()) fail();

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty()) fail();
        for (char c : num + den)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        BigInt d(den);
        if (d == 0) throw ValidationError("rational literal with zero denominator '" + s + "'");
        return Rat(BigInt(num), d);
    }

    auto dot = s.find('.');
    if (dot == std::string::npos) {
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        return Rat(BigInt(s));
    }

    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) fail();
    for (char c : whole + frac)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail();

    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt n = (whole.empty() ? BigInt(0) : BigInt(whole)) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
    return Rat(n, scale);
}

/// Canonical text form: "0", "1", "99/100".
inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

}  // namespace qif
