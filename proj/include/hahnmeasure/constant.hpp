#pragma once

#include <compare>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hahnmeasure/errors.hpp"
#include "hahnmeasure/interval.hpp"
#include "hahnmeasure/rational.hpp"

namespace hm {

enum class Cmp { Less, Equal, Greater };

// Exactly represented real number: rationals closed under field operations
// together with pi, e, log/arctan/arcsin/exp/sqrt and rational powers of such
// values. Values are kept in a canonical sum-of-monomials form over a small
// atom alphabet; pi, log p (p prime), arctan q and arcsin q (q rational in
// (0,1) after the rewrite table) are treated as Q-linearly independent, the
// standard CAS convention that sidesteps the constant problem.
//
// Equal verdicts come from canonical-form identity; Less/Greater from
// disjoint interval enclosures refined up to a bit budget. When neither
// certificate is available within budget, compare throws precision_exhausted.
class Constant {
public:
    Constant();                       // zero
    explicit Constant(const Rat& q);
    explicit Constant(long n);

    static Constant pi();
    static Constant e();

    bool is_zero() const;
    bool is_one() const;
    std::optional<Rat> as_rational() const;

    Constant operator+(const Constant& o) const;
    Constant operator-(const Constant& o) const;
    Constant operator*(const Constant& o) const;
    Constant operator/(const Constant& o) const; // DivisionByZero / precision_exhausted
    Constant operator-() const;
    bool operator==(const Constant& o) const;    // canonical identity
    bool operator!=(const Constant& o) const { return !(*this == o); }

    Constant inverse() const;
    Constant pow(const Rat& q) const;            // rational power; even roots need provable positivity
    Constant sqrt() const { return pow(Rat(1, 2)); }

    friend Constant log(const Constant& a);      // requires provably positive
    friend Constant exp(const Constant& a);
    friend Constant arctan(const Constant& a);
    friend Constant arcsin(const Constant& a);   // requires arg in [-1,1]

    // Sign of this value; Equal means exactly zero (canonical certificate).
    Cmp sign(unsigned budget_bits) const;
    Cmp sign() const { return sign(default_budget()); }

    // Enclosure with width <= 2^(1-bits) * max(1, |value|).
    Interval approx(unsigned bits) const;

    // Current enclosure at a given working precision (cached, monotone).
    Interval enclosure(mpfr_prec_t prec) const;

    double to_double() const;

    std::string str() const;

    static constexpr unsigned kDefaultBudget = 256;
    // Session-wide budget used when no explicit budget is passed.
    static unsigned default_budget();
    static void set_default_budget(unsigned bits);

    struct Node; // canonical form, internal

    // Structural total order on canonical forms (not the numeric order);
    // used as a container key and in monomial sorting.
    static int structural_compare(const Constant& a, const Constant& b);

private:
    explicit Constant(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> node_;
    friend struct ConstantOps;
};

Cmp compare(const Constant& a, const Constant& b, unsigned budget_bits);
Cmp compare(const Constant& a, const Constant& b);

} // namespace hm
