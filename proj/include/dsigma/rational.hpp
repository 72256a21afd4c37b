#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace dsigma {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1)
        s += "/" + denominator(r).str();
    return s;
}

// Accepts "p", "-p", "p/q".  Anything else (in particular a decimal point) is rejected.
inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: " + s);
    }
}

// gcd of absolute values, as a positive rational; used for content normalization.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    if (a == 0) return b < 0 ? Rat(-b) : b;
    if (b == 0) return a < 0 ? Rat(-a) : a;
    Int n = gcd(abs(numerator(a)), abs(numerator(b)));
    Int d = lcm(denominator(a), denominator(b));
    return Rat(n, d);
}

}  // namespace dsigma
