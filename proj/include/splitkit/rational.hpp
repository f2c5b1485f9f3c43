#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace splitkit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Exact serialization: "p" for integers, "p/q" otherwise (q > 0, reduced).
inline std::string rat_to_string(const Rat& r) {
    const Int num = numerator(r);
    const Int den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("bad integer literal: " + s);
    return Int(s);
}

inline Rat parse_rat(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    const Int num = parse_int(s.substr(0, slash));
    const Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
}

}  // namespace splitkit
