#pragma once

#include "hahnmeasure/calculus.hpp"

namespace hm {

// Real instantiation t := tau0 of fragment expressions, for the numeric
// oracle: every series constant is evaluated at tau0 and the expression is
// interpreted over doubles.
double instantiate_expr(const Expr& e, const std::vector<double>& point, double tau0);

// Numeric value of the integral of e over a set/region at t := tau0, by
// adaptive quadrature (iterated for regions, innermost variable last).
double numeric_set_integral(const Expr& e, const SetOneD& s, double tau0);
double numeric_region_integral(const Expr& e, const Region& r, double tau0);

} // namespace hm
