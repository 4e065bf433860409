#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hahnmeasure/series.hpp"

namespace hm {

// Element of the Lebesgue algebra R[X], X = log(t^-1): polynomial in X with
// Series coefficients. X is transcendental over the series field, so equality
// is coefficientwise. The ordering is induced by R < X < t^(R_{<0}): group
// terms by coefficient valuation first, X-degree second.
class AlgebraElement {
public:
    AlgebraElement(); // zero over Q
    explicit AlgebraElement(GroupPtr group);
    explicit AlgebraElement(Series s);
    static AlgebraElement X(GroupPtr group = ExponentGroup::rationals());
    static AlgebraElement constant(Constant c, GroupPtr group = ExponentGroup::rationals());
    static AlgebraElement from_coeffs(GroupPtr group, std::vector<Series> coeffs);

    const GroupPtr& group() const { return group_; }
    const std::vector<Series>& coeffs() const { return coeffs_; }
    Series coeff(size_t i) const; // zero series beyond degree

    bool provably_zero() const;
    // Degree of the highest provably nonzero coefficient; throws on zero.
    size_t degree() const;
    // Degree bound: index of the last stored coefficient (0 for zero).
    size_t degree_bound() const;

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement operator-() const;
    bool operator==(const AlgebraElement& o) const; // exact structural equality
    // The difference has no known terms in any coefficient.
    static bool equal_up_to_precision(const AlgebraElement& a, const AlgebraElement& b);

    AlgebraElement scale(const Series& s) const;
    AlgebraElement scale(const Constant& c) const;
    AlgebraElement pow_int(unsigned n) const;

    // Substitute X -> image (used by Lebesgue isomorphisms).
    AlgebraElement substitute_X(const AlgebraElement& image) const;

    // The series part, requiring degree 0 (or zero).
    Series as_series() const;

    Cmp sign(unsigned budget_bits) const;
    Cmp sign() const { return sign(Constant::default_budget()); }

    Series::StandardPart standard_part() const; // infinite when any X-power or unbounded c0

    // Numeric instantiation t := tau0, X := log(1/tau0).
    double instantiate(double tau0) const;

    std::string str() const;

private:
    GroupPtr group_;
    std::vector<Series> coeffs_; // c0 .. cd
    void trim();
};

Cmp compare(const AlgebraElement& a, const AlgebraElement& b, unsigned budget_bits);
Cmp compare(const AlgebraElement& a, const AlgebraElement& b);

// Canonical representative of the class of p modulo bounded series (the
// reduced Lebesgue group): strips exponents >= 0 from the X^0 coefficient.
class ReducedElement {
public:
    explicit ReducedElement(const AlgebraElement& p);
    const AlgebraElement& representative() const { return rep_; }
    bool operator==(const ReducedElement& o) const { return rep_ == o.rep_; }
    std::string str() const { return rep_.str(); }

private:
    AlgebraElement rep_;
};

ReducedElement reduce(const AlgebraElement& p);

} // namespace hm
