#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace smset {

/// Exact rational scalar. Thin layer over GMP; always canonical
/// (lowest terms, positive denominator).
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational rat_from_string(const std::string& text); // "3", "-7/2"
Rational rat_from_double(double x);                // exact dyadic value
std::string rat_to_string(const Rational& q);
double rat_to_double(const Rational& q);

inline bool rat_is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool rat_is_one(const Rational& q) { return q == 1; }

int rat_cmp(const Rational& a, const Rational& b);

} // namespace smset
