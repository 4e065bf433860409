#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hahnmeasure/exponent.hpp"

namespace hm {

// Generalized power series with real-constant coefficients and exponents in a
// finitely generated archimedean group: finitely many known terms, strictly
// increasing in exponent, plus a precision marker. Exact means all omitted
// terms are zero; KnownBelow(omega) means every term with exponent < omega is
// present and correct and nothing is known from omega on.
class Series {
public:
    struct Term {
        Exponent exp;
        Constant coeff;
    };

    Series(); // exact zero over Q
    explicit Series(GroupPtr group);

    static Series constant(Constant c, GroupPtr group = ExponentGroup::rationals());
    static Series rational(const Rat& q, GroupPtr group = ExponentGroup::rationals());
    static Series monomial(Constant coeff, const Exponent& exp);
    static Series t_power(const Exponent& exp); // t^exp
    // Build from unsorted term list; merges and normalizes.
    static Series make(GroupPtr group, std::vector<Term> terms,
                       std::optional<Exponent> known_below = std::nullopt);

    const GroupPtr& group() const { return group_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_exact() const { return !known_below_.has_value(); }
    const std::optional<Exponent>& known_below() const { return known_below_; }

    bool provably_zero() const { return is_exact() && terms_.empty(); }
    // Least exponent among known terms.
    std::optional<Exponent> ord() const;
    Constant leading_coeff() const; // requires a known term
    Constant coeff_at(const Exponent& e) const;

    // Lift a series over Q (basis {1}) into a larger group whose first basis
    // value is 1; identity when groups already agree.
    Series lifted_to(const GroupPtr& g) const;

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator-() const;
    bool operator==(const Series& o) const; // exact structural equality

    Series scale(const Constant& c) const;
    Series shift(const Exponent& e) const; // multiply by t^e
    Series truncate(const Exponent& omega) const;

    // Multiplicative inverse to precision KnownBelow(target) (exact for
    // single-term exact input).
    Series inv(const Exponent& target) const;
    Series div(const Series& o, const Exponent& target) const;
    // n-th root; leading exponent ord/n. Even n requires positive sign.
    Series nth_root(unsigned long n, const Exponent& target) const;
    Series pow_rat(const Rat& q, const Exponent& target) const;
    Series pow_int(long n, const Exponent& target) const;

    // Sign of the series under the leading-coefficient ordering. Exact zero
    // reports Equal; an all-unknown truncated series throws.
    Cmp sign(unsigned budget_bits) const;
    Cmp sign() const { return sign(Constant::default_budget()); }

    struct StandardPart {
        bool infinite = false;
        Constant value; // meaningful when !infinite
    };
    StandardPart standard_part() const;

    bool is_bounded() const;       // no known term with negative exponent and precision covers 0
    bool is_infinitesimal() const; // bounded with zero standard part

    // Equality up to the joint precision: the difference has no known terms.
    static bool equal_up_to_precision(const Series& a, const Series& b);

    // Numeric instantiation t := tau0 (0 < tau0 < 1).
    double instantiate(double tau0) const;

    std::string str() const;

private:
    GroupPtr group_;
    std::vector<Term> terms_;
    std::optional<Exponent> known_below_;
    void drop_beyond_precision();
};

Cmp compare(const Series& a, const Series& b, unsigned budget_bits);
Cmp compare(const Series& a, const Series& b);

// Default working precision (exponent units) used when no target is given.
Exponent default_target(const GroupPtr& group);
Rat default_precision_units();
void set_default_precision_units(const Rat& q);

} // namespace hm
