#pragma once

#include "hahnmeasure/constructible.hpp"

namespace hm {

struct MeasureValue {
    bool infinite = false;
    AlgebraElement value; // meaningful when finite
    std::string str() const { return infinite ? "infinite" : value.str(); }
};

// Symbolic antiderivative of a cell-free fragment integrand in the given
// variable: polynomials and rational functions (denominator auto-factored up
// to degree 2 per tree factor), rational powers of linear arguments, and the
// sqrt(a^2 - u^2) / sqrt(u^2 + a^2) patterns. Log terms come out as
// extended-log nodes. Outside the fragment: unsupported_integrand, always
// explicit, never approximated.
ConstructibleExpr antiderivative(const Expr& e, size_t var);

// Cell-wise antiderivatives for integrands with abs/piecewise nodes: each
// entry is (cell condition description, resolved integrand, antiderivative).
struct AntiderivativeCell {
    Expr resolved;            // integrand with abs/piecewise removed on the cell
    ConstructibleExpr anti;
    std::optional<Series> lo; // cell bounds when derived from breakpoints
    std::optional<Series> hi;
};

// Definite integral over an interval with series or infinite endpoints.
// Improper endpoints go through the limit engine; divergence is an error.
MeasureValue integrate_interval(const Expr& e, const Endpoint& a, const Endpoint& b,
                                size_t var = 0);
MeasureValue integrate_interval(const ConstructibleExpr& f, const Endpoint& a,
                                const Endpoint& b, size_t var = 0);

// Measure of a one-dimensional set: sum of lengths; infinite on rays.
MeasureValue measure_1d(const SetOneD& s);

// Iterated (Fubini) integral over a cylindrical region, innermost variable
// first. Region variables are indexed 0..dim-1, the fibered variable last.
MeasureValue integrate_region(const Expr& e, const Region& r);
MeasureValue integrate_region(const ConstructibleExpr& f, const Region& r);
MeasureValue measure_region(const Region& r);

// Transformation-formula check: integrates f over phi(U) and (f o phi)|phi'|
// over U and compares. phi must be strictly monotone on each component.
struct TransformationCheck {
    MeasureValue lhs; // integral over V = phi(U)
    MeasureValue rhs; // integral of (f o phi)|phi'| over U
    bool equal = false;
};
TransformationCheck check_transformation(const Expr& phi, const Expr& f, const SetOneD& U);

// Differentiation under the integral sign at sample parameter points:
// compares d/ds of s -> integral of e(s,x) with the integral of de/ds.
// Variable 0 is the parameter s, variable 1 the integration variable x.
struct DifferentiationCheck {
    ConstructibleExpr derivative_of_integral;
    ConstructibleExpr integral_of_derivative;
    bool symbolically_equal = false;
    bool pointwise_equal = false;
};
DifferentiationCheck differentiate_under_integral(const Expr& e, const SetOneD& x_domain,
                                                  const std::vector<Series>& s_samples);

// Standard-part compatibility: st(lambda(A)) against lambda_n(st(A)).
struct StandardPartCheck {
    bool r_bounded = false;
    bool measure_infinite = false;
    Constant st_of_measure;    // when finite
    Constant measure_of_st;    // real Lebesgue measure of st(A)
    bool equal = false;
};
StandardPartCheck standard_part_measure(const SetOneD& s);
StandardPartCheck standard_part_measure(const Region& r);

// Degree-bound postcondition: measures of
// n-dimensional sets have X-degree < n, integrals of n-variable functions
// have X-degree <= n. Violations throw.
void assert_degree_bound(const MeasureValue& v, size_t n, bool is_measure);

} // namespace hm
