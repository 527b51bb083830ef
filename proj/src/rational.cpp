#include "smset/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace smset {

Rational rat_from_string(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("not a rational literal: " + text);
    q.canonicalize();
    return q;
}

Rational rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite value");
    Rational q(x);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rational& q) {
    return q.get_str();
}

double rat_to_double(const Rational& q) {
    return q.get_d();
}

int rat_cmp(const Rational& a, const Rational& b) {
    return cmp(a, b);
}

} // namespace smset
