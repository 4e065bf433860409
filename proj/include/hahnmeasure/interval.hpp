#pragma once

#include <mpfr.h>

#include <string>

#include "hahnmeasure/rational.hpp"

namespace hm {

// Floating-point interval with dyadic (binary) endpoints, lo rounded down and
// hi rounded up, so the enclosed real value is always contained. All
// operations take a working precision in bits.
class Interval {
public:
    Interval();
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(Interval o) noexcept;
    ~Interval();

    static Interval exact(const Rat& q, mpfr_prec_t prec);
    static Interval pi(mpfr_prec_t prec);
    static Interval euler_e(mpfr_prec_t prec);

    Interval add(const Interval& o, mpfr_prec_t prec) const;
    Interval sub(const Interval& o, mpfr_prec_t prec) const;
    Interval mul(const Interval& o, mpfr_prec_t prec) const;
    Interval div(const Interval& o, mpfr_prec_t prec) const; // requires !o.contains_zero()
    Interval neg(mpfr_prec_t prec) const;

    // Monotone elementary functions; domain must be established by the caller.
    Interval log(mpfr_prec_t prec) const;    // lo > 0
    Interval exp(mpfr_prec_t prec) const;
    Interval arctan(mpfr_prec_t prec) const;
    Interval arcsin(mpfr_prec_t prec) const; // [lo,hi] within [-1,1]
    // x^(a/b) for x >= 0 (or any x when b odd and a/b integral handled upstream).
    Interval pow_q(const Rat& q, mpfr_prec_t prec) const;

    bool contains_zero() const;           // lo <= 0 <= hi
    bool strictly_positive() const;       // lo > 0
    bool strictly_negative() const;       // hi < 0
    bool is_point() const;                // lo == hi

    Rat lo_rat() const;
    Rat hi_rat() const;
    // Upper bound on hi - lo as a double (inf if not representable).
    double width_upper() const;
    double mid_double() const;

    std::string str() const;

private:
    mpfr_t lo_;
    mpfr_t hi_;
    void init(mpfr_prec_t prec);
    friend Interval interval_hull(const Interval&, const Interval&, mpfr_prec_t);
};

Interval interval_hull(const Interval& a, const Interval& b, mpfr_prec_t prec);

} // namespace hm
