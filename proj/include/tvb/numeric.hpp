#pragma once

// Exact arithmetic carriers. Everything in this library computes over Q;
// no floating point is used anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvb {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

inline Int igcd(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(a, b);
}

/// gcd of all entries, nonnegative; 0 for the zero vector.
inline Int content(const ZVec& v) {
    Int g = 0;
    for (const auto& x : v) g = igcd(g, x);
    return g;
}

/// Divide by the content so that the gcd of the entries is 1.
/// The zero vector is returned unchanged.
inline ZVec primitive(ZVec v) {
    Int g = content(v);
    if (g > 1) {
        for (auto& x : v) x /= g;
    }
    return v;
}

/// Scale a rational vector to a primitive integer vector (same ray).
inline ZVec primitive(const QVec& v) {
    Int lcm = 1;
    for (const auto& x : v) {
        Int d = boost::multiprecision::denominator(x);
        lcm = lcm / igcd(lcm, d) * d;
    }
    ZVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Rat s = v[i] * lcm;
        w[i] = boost::multiprecision::numerator(s);
    }
    return primitive(std::move(w));
}

inline Rat dot(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot(const ZVec& a, const ZVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline QVec to_q(const ZVec& v) {
    QVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = Rat(v[i]);
    return w;
}

inline bool is_zero(const ZVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline ZVec negated(ZVec v) {
    for (auto& x : v) x = -x;
    return v;
}

inline std::string to_string(const ZVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + ")";
}

}  // namespace tvb
