#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "anosov/errors.hpp"

namespace anosov {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return boost::rational_cast<double>(r);
}

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "p", "p/q" or "-p/q".
inline Rational parse_rational(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        std::int64_t num = std::stoll(s.substr(0, slash));
        std::int64_t den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw MalformedInput("zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::logic_error&) {
        throw MalformedInput("not a rational: '" + s + "'");
    }
}

// Representative in [0,1).
inline Rational frac(const Rational& r) {
    std::int64_t n = r.numerator(), d = r.denominator();
    std::int64_t q = n / d;
    if (n % d != 0 && n < 0) --q;
    return r - Rational(q);
}

inline double frac(double x) { return x - std::floor(x); }

}  // namespace anosov
