#pragma once

#include <map>

#include "hahnmeasure/expr.hpp"

namespace hm {

// Rational normal form for the piecewise-free expression fragment: a fraction
// of multivariate polynomials over Series coefficients. Slots are either
// variables (possibly replaced by a root generator when fractional powers of
// the variable occur) or opaque atoms for sqrt/root and arctan subterms.
// Root atoms carry the reduction A^m = num/den; products eliminate powers
// >= m, so equal values of fragment expressions normalize to equal forms.
//
// Piecewise and abs nodes are rejected: cells must be resolved first.
class NormalForm {
public:
    // Monomial: sorted (slot, exponent) pairs with positive exponents.
    using Mono = std::vector<std::pair<unsigned, unsigned>>;
    using Poly = std::map<Mono, Series>;

    struct Fraction {
        Poly num;
        Poly den; // nonzero
    };

    explicit NormalForm(GroupPtr group);

    // Normalizes e. Throws unsupported_integrand on piecewise/abs nodes and
    // domain_error on division by the zero polynomial.
    Fraction build(const Expr& e);

    // True when the numerator of the normal form is the zero polynomial.
    // Truncated coefficients that cancel only up to precision raise
    // precision_exhausted instead of answering.
    bool provably_zero(const Expr& e);
    bool provably_equal(const Expr& a, const Expr& b);

    const GroupPtr& group() const { return group_; }

    // Poly helpers (exposed for calculus).
    Poly poly_zero() const { return {}; }
    Poly poly_const(Series s) const;
    Poly poly_add(const Poly& a, const Poly& b) const;
    Poly poly_neg(const Poly& a) const;
    Poly poly_mul(const Poly& a, const Poly& b);

private:
    struct Atom {
        enum Kind { VarRoot, Root, Arctan } kind;
        size_t var = 0;         // VarRoot
        unsigned long root = 1; // VarRoot: slot^root = var; Root: A^root = num/den
        Poly num;
        Poly den;
    };

    GroupPtr group_;
    std::vector<Atom> atoms_;
    std::map<size_t, unsigned long> var_roots_; // var -> lcm of power denominators

    static constexpr unsigned kAtomBase = 1u << 20;

    unsigned atom_slot(Atom atom);
    void scan_var_roots(const Expr& e);
    Fraction build_rec(const Expr& e);
    // Term normalization applying root-atom reductions; may emit denominator
    // factors (negative relation powers).
    void insert_term(Poly& num_out, Poly& den_mult, Series coeff, Mono mono);
    Fraction mul(const Fraction& a, const Fraction& b);
    Fraction add(const Fraction& a, const Fraction& b);
    Fraction div(const Fraction& a, const Fraction& b);
    Fraction pow_int(Fraction base, long n);
};

// Convenience wrappers building a fresh context per call.
bool provably_zero(const Expr& e, GroupPtr group = ExponentGroup::rationals());
bool provably_equal(const Expr& a, const Expr& b, GroupPtr group = ExponentGroup::rationals());

} // namespace hm
