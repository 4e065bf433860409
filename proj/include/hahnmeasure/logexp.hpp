#pragma once

#include "hahnmeasure/algebra.hpp"

namespace hm {

// Partial logarithm on positive units of the valuation ring: for
// f = a(1 + h) with a real and positive and h infinitesimal,
// log f = log a + L(h), L the logarithmic series sum (-1)^(j+1) h^j / j.
Series partial_log(const Series& f, const Exponent& target);
Series partial_log(const Series& f);

// Partial exponential, inverse of partial_log; requires ord(g) >= 0.
Series partial_exp(const Series& g, const Exponent& target);
Series partial_exp(const Series& g);

// Extended logarithm into the Lebesgue algebra: for f > 0 with ord(f) = g,
// log f = -embed(g) X + log a + L(h) where f = a t^g (1 + h). The X^1
// coefficient is exactly -embed(ord f), so log(t^-1) = X; the opposite sign
// sometimes quoted for the Puiseux case is a slip.
AlgebraElement extended_log(const Series& f, const Exponent& target);
AlgebraElement extended_log(const Series& f);

// Taylor evaluation of the restricted analytic functions at series points.
// The standard part of the argument must be strictly inside the domain;
// arctan additionally accepts unbounded arguments through
// arctan(x) = sign(x) pi/2 - arctan(1/x).
Series arctan_series(const Series& x, const Exponent& target);
Series arctan_series(const Series& x);
Series arcsin_series(const Series& x, const Exponent& target);

// User-supplied power series sum r_k y^k with rational coefficients and a
// convergence radius; exact evaluation needs an infinitesimal argument.
struct UserPowerSeries {
    std::vector<Rat> coeffs;
    Rat radius;
};
Series user_series_eval(const UserPowerSeries& f, const Series& x, const Exponent& target);

} // namespace hm
