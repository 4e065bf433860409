#pragma once

#include "hahnmeasure/normalform.hpp"
#include "hahnmeasure/sets.hpp"

namespace hm {

// One summand of a constructible function: a subanalytic coefficient times a
// product of extended-log factors (each of a positive subanalytic argument)
// times a power of X.
struct CTerm {
    Expr coeff;
    std::vector<Expr> logs; // multiplicity by repetition
    unsigned xpow = 0;
};

// Finite sum of such terms: the constructible functions P^n -> P[X], closed
// under +, *, and differentiation (X is a constant for d/dx).
class ConstructibleExpr {
public:
    ConstructibleExpr();
    explicit ConstructibleExpr(GroupPtr group);

    static ConstructibleExpr from_expr(Expr e, GroupPtr group = ExponentGroup::rationals());
    static ConstructibleExpr log_of(Expr arg, GroupPtr group = ExponentGroup::rationals());
    static ConstructibleExpr X(GroupPtr group = ExponentGroup::rationals());
    static ConstructibleExpr from_terms(GroupPtr group, std::vector<CTerm> terms);
    static ConstructibleExpr from_algebra(const AlgebraElement& a);

    const GroupPtr& group() const { return group_; }
    const std::vector<CTerm>& terms() const { return terms_; }
    bool structurally_zero() const { return terms_.empty(); }

    ConstructibleExpr operator+(const ConstructibleExpr& o) const;
    ConstructibleExpr operator-(const ConstructibleExpr& o) const;
    ConstructibleExpr operator*(const ConstructibleExpr& o) const;
    ConstructibleExpr operator-() const;
    ConstructibleExpr scale(const Expr& e) const;

    AlgebraElement eval(const std::vector<Series>& point, const Exponent& target) const;
    AlgebraElement eval(const std::vector<Series>& point) const;
    AlgebraElement eval1(const Series& x) const; // univariate convenience

    ConstructibleExpr substitute(size_t var, const Expr& replacement) const;
    ConstructibleExpr differentiate(size_t var) const;

    bool depends_on(size_t var) const;
    size_t max_var() const;

    // Structural-plus-normal-form zero test: groups terms by X power and
    // log-argument multiset (normal-form equality of arguments), then tests
    // coefficient sums. Sound, not complete: log identities such as
    // log(ab) = log a + log b are not applied.
    bool provably_zero() const;

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    GroupPtr group_;
    std::vector<CTerm> terms_;
};

// Simple description at infinity (univariate): finitely many terms
// A_sigma x^(sigma1) (log x)^(sigma2) X^(sigma3) with A_sigma a nonzero
// series, valid for all sufficiently large x, complete for exponents
// sigma1 > known_above (all larger-exponent behavior captured exactly).
struct SimpleDescription {
    struct Term {
        Rat sigma1;
        unsigned sigma2 = 0;
        unsigned sigma3 = 0;
        Series limit_value; // A_sigma
    };
    std::vector<Term> terms;
    bool exact = false;  // no omitted lower-order tail at all
    Rat known_above = 0; // tail below this x-exponent unknown (unless exact)
};

SimpleDescription simple_description(const ConstructibleExpr& f, size_t var = 0);

struct LimitResult {
    enum Kind { Finite, PlusInfinity, MinusInfinity, NoLimit } kind;
    AlgebraElement value; // meaningful for Finite
};

enum class Side { Left, Right };

// Limit of a univariate constructible function as x -> infinity, decided via
// the simple description: finite iff the dominant (sigma1, sigma2) is (0,0)
// or everything vanishes; +-infinity when sigma1 > 0; NoLimit when the
// divergence is (log x)-driven and the would-be limit escapes P[X].
LimitResult limit_at_infinity(const ConstructibleExpr& f, size_t var = 0);
LimitResult limit_at_point(const ConstructibleExpr& f, const Series& a, Side side,
                           size_t var = 0);

// X-coefficient functions on an interval: each
// log factor is rewritten through its valuation profile on K, sampled at the
// endpoints and midpoint; a non-uniform profile raises. The pointwise route
// (eval + AlgebraElement::coeff) is always available instead.
std::vector<ConstructibleExpr> extract_coefficients(const ConstructibleExpr& f,
                                                    const Series& lo, const Series& hi);

// Convolution with the scaled Cauchy kernel Phi_h(s) = 1/(pi h (1+(s/h)^2)):
// S_h g(x) = integral of g(s) Phi_h(s - x) ds for piecewise-polynomial g with
// bounded support, in closed form (arctan/log antiderivatives).
struct PiecewisePoly {
    struct Piece {
        Series lo;
        Series hi;
        Expr poly; // in the integration variable (index 0)
    };
    std::vector<Piece> pieces;
};
ConstructibleExpr convolve(const PiecewisePoly& g, const Series& h);

} // namespace hm
