#include "hahnmeasure/interval.hpp"

#include <algorithm>
#include <cmath>

namespace hm {

void Interval::init(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
}

Interval::Interval() {
    init(64);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) {
    init(mpfr_get_prec(o.lo_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
    init(mpfr_get_prec(o.lo_));
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(Interval o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::exact(const Rat& q, mpfr_prec_t prec) {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::euler_e(mpfr_prec_t prec) {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
    mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
    mpfr_exp(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::add(const Interval& o, mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::sub(const Interval& o, mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

Interval Interval::neg(mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::mul(const Interval& o, mpfr_prec_t prec) const {
    // min/max over the four endpoint products with directed rounding.
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, prec);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDD);
    mpfr_set(r.lo_, c[0], MPFR_RNDD);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(c[i], r.lo_) < 0) mpfr_set(r.lo_, c[i], MPFR_RNDD);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDU);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDU);
    mpfr_set(r.hi_, c[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(c[i], r.hi_) > 0) mpfr_set(r.hi_, c[i], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
}

Interval Interval::div(const Interval& o, mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, prec);
    mpfr_div(c[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_div(c[1], lo_, o.hi_, MPFR_RNDD);
    mpfr_div(c[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_div(c[3], hi_, o.hi_, MPFR_RNDD);
    mpfr_set(r.lo_, c[0], MPFR_RNDD);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(c[i], r.lo_) < 0) mpfr_set(r.lo_, c[i], MPFR_RNDD);
    mpfr_div(c[0], lo_, o.lo_, MPFR_RNDU);
    mpfr_div(c[1], lo_, o.hi_, MPFR_RNDU);
    mpfr_div(c[2], hi_, o.lo_, MPFR_RNDU);
    mpfr_div(c[3], hi_, o.hi_, MPFR_RNDU);
    mpfr_set(r.hi_, c[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(c[i], r.hi_) > 0) mpfr_set(r.hi_, c[i], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
}

Interval Interval::log(mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp(mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::arctan(mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_atan(r.lo_, lo_, MPFR_RNDD);
    mpfr_atan(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::arcsin(mpfr_prec_t prec) const {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_t x;
    mpfr_init2(x, prec);
    // Clamp endpoints into [-1,1]; callers establish the true domain, the
    // clamp only absorbs outward rounding of enclosures at the boundary.
    mpfr_set_si(x, -1, MPFR_RNDD);
    if (mpfr_cmp(lo_, x) < 0)
        mpfr_asin(r.lo_, x, MPFR_RNDD);
    else
        mpfr_asin(r.lo_, lo_, MPFR_RNDD);
    mpfr_set_si(x, 1, MPFR_RNDU);
    if (mpfr_cmp(hi_, x) > 0)
        mpfr_asin(r.hi_, x, MPFR_RNDU);
    else
        mpfr_asin(r.hi_, hi_, MPFR_RNDU);
    mpfr_clear(x);
    return r;
}

Interval Interval::pow_q(const Rat& q, mpfr_prec_t prec) const {
    // Monotone on positive bases: x^q increasing for q > 0, decreasing for q < 0.
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    if (q == 0) {
        mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
        mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
        return r;
    }
    mpfr_t e_lo, e_hi;
    mpfr_init2(e_lo, prec);
    mpfr_init2(e_hi, prec);
    mpfr_set_q(e_lo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e_hi, q.get_mpq_t(), MPFR_RNDU);
    // x^q = exp(q log x), with outward rounding through both steps.
    mpfr_t l_lo, l_hi, t;
    mpfr_init2(l_lo, prec);
    mpfr_init2(l_hi, prec);
    mpfr_init2(t, prec);
    mpfr_log(l_lo, lo_, MPFR_RNDD);
    mpfr_log(l_hi, hi_, MPFR_RNDU);
    auto mul_dir = [&](mpfr_t out, mpfr_t a, mpfr_t b, mpfr_rnd_t rnd) {
        mpfr_mul(out, a, b, rnd);
    };
    // Candidate products of {e_lo,e_hi} x {l_lo,l_hi}, take min/max.
    mpfr_t cand[4];
    for (auto& x : cand) mpfr_init2(x, prec);
    mul_dir(cand[0], e_lo, l_lo, MPFR_RNDD);
    mul_dir(cand[1], e_lo, l_hi, MPFR_RNDD);
    mul_dir(cand[2], e_hi, l_lo, MPFR_RNDD);
    mul_dir(cand[3], e_hi, l_hi, MPFR_RNDD);
    mpfr_set(t, cand[0], MPFR_RNDD);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(cand[i], t) < 0) mpfr_set(t, cand[i], MPFR_RNDD);
    mpfr_exp(r.lo_, t, MPFR_RNDD);
    mul_dir(cand[0], e_lo, l_lo, MPFR_RNDU);
    mul_dir(cand[1], e_lo, l_hi, MPFR_RNDU);
    mul_dir(cand[2], e_hi, l_lo, MPFR_RNDU);
    mul_dir(cand[3], e_hi, l_hi, MPFR_RNDU);
    mpfr_set(t, cand[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i)
        if (mpfr_cmp(cand[i], t) > 0) mpfr_set(t, cand[i], MPFR_RNDU);
    mpfr_exp(r.hi_, t, MPFR_RNDU);
    for (auto& x : cand) mpfr_clear(x);
    mpfr_clear(e_lo);
    mpfr_clear(e_hi);
    mpfr_clear(l_lo);
    mpfr_clear(l_hi);
    mpfr_clear(t);
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::strictly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::strictly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::is_point() const { return mpfr_cmp(lo_, hi_) == 0; }

static Rat mpfr_to_rat(const mpfr_t x) {
    if (mpfr_zero_p(x)) return Rat(0);
    mpz_class man;
    mpfr_exp_t e = mpfr_get_z_2exp(man.get_mpz_t(), x);
    Rat q(man);
    if (e >= 0) {
        mpz_class two_e;
        mpz_ui_pow_ui(two_e.get_mpz_t(), 2, static_cast<unsigned long>(e));
        q *= Rat(two_e);
    } else {
        mpz_class two_e;
        mpz_ui_pow_ui(two_e.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        q /= Rat(two_e);
    }
    q.canonicalize();
    return q;
}

Rat Interval::lo_rat() const { return mpfr_to_rat(lo_); }
Rat Interval::hi_rat() const { return mpfr_to_rat(hi_); }

double Interval::width_upper() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

double Interval::mid_double() const {
    mpfr_t m;
    mpfr_init2(m, 64);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_ui(m, m, 2, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

std::string Interval::str() const {
    char* s1 = nullptr;
    char* s2 = nullptr;
    mpfr_asprintf(&s1, "%.20Rg", lo_);
    mpfr_asprintf(&s2, "%.20Rg", hi_);
    std::string r = std::string("[") + s1 + ", " + s2 + "]";
    mpfr_free_str(s1);
    mpfr_free_str(s2);
    return r;
}

Interval interval_hull(const Interval& a, const Interval& b, mpfr_prec_t prec) {
    Interval r;
    mpfr_set_prec(r.lo_, prec);
    mpfr_set_prec(r.hi_, prec);
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) < 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) > 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

} // namespace hm
