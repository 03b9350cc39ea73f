#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace sievelab {

// Arbitrary-precision signed integer. Normal-form computations blow up
// intermediate entries far beyond 64 bits even for small inputs, so a
// fixed-width type is never acceptable here.
using Integer = boost::multiprecision::cpp_int;

inline Integer abs_val(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd_val(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Integer lcm_val(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return abs_val(a / gcd_val(a, b) * b);
}

// gcd of a list; 0 for the empty list.
inline Integer gcd_all(const std::vector<Integer>& xs) {
    Integer g = 0;
    for (const auto& x : xs) g = gcd_val(g, x);
    return g;
}

// Floor division (quotient rounded toward -inf), used by Hermite reduction
// so reduced entries land in [0, pivot).
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

// Smallest prime factor by trial division, or 0 if none found within the
// trial bound (desk-scale inputs never get near the bound).
inline Integer smallest_prime_factor(const Integer& n) {
    Integer m = abs_val(n);
    if (m < 2) return 0;
    if (m % 2 == 0) return 2;
    for (Integer p = 3; p * p <= m && p < 1000000; p += 2)
        if (m % p == 0) return p;
    return m; // no small factor: m itself (prime or a large composite)
}

inline std::string to_string(const Integer& a) { return a.str(); }

} // namespace sievelab
