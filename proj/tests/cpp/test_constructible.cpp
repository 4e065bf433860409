#include <doctest.h>

#include <cmath>
#include <random>

#include "hahnmeasure/calculus.hpp"

using namespace hm;

namespace {
Series T(const Rat& e) { return Series::t_power(Exponent::rational(e)); }
Series C(const Rat& q) { return Series::rational(q); }
Expr x0() { return Expr::var(0); }
} // namespace

TEST_CASE("simple description of (x+1)/x") {
    ConstructibleExpr f = ConstructibleExpr::from_expr((x0() + Expr::rational(Rat(1))) / x0());
    SimpleDescription sd = simple_description(f);
    REQUIRE(sd.terms.size() == 2);
    CHECK(sd.terms[0].sigma1 == Rat(0));
    CHECK(sd.terms[0].limit_value == C(Rat(1)));
    CHECK(sd.terms[1].sigma1 == Rat(-1));
    CHECK(sd.terms[1].limit_value == C(Rat(1)));
}

TEST_CASE("simple description of log x and arctan x") {
    ConstructibleExpr lg = ConstructibleExpr::log_of(x0());
    SimpleDescription sd = simple_description(lg);
    REQUIRE(sd.terms.size() == 1);
    CHECK(sd.terms[0].sigma1 == Rat(0));
    CHECK(sd.terms[0].sigma2 == 1);
    CHECK(sd.terms[0].sigma3 == 0);
    CHECK(sd.terms[0].limit_value == C(Rat(1)));

    ConstructibleExpr at = ConstructibleExpr::from_expr(Expr::arctan(x0()));
    SimpleDescription sa = simple_description(at);
    REQUIRE(!sa.terms.empty());
    CHECK(sa.terms[0].sigma1 == Rat(0));
    CHECK(sa.terms[0].sigma2 == 0);
    CHECK(sa.terms[0].limit_value == Series::constant(Constant::pi() * Constant(Rat(1, 2))));
}

TEST_CASE("limit table for log-power monomials") {
    // x^q (log x)^n: 0 for q<0; 0 for q=0,n<0 (via 1/log); 1 for q=n=0;
    // NoLimit for q=0,n>0; +-inf for q>0.
    auto mono = [&](const Rat& q, int n) {
        ConstructibleExpr f = ConstructibleExpr::from_expr(x0().pow(q));
        ConstructibleExpr lg = ConstructibleExpr::log_of(x0());
        for (int i = 0; i < n; ++i) f = f * lg;
        return f;
    };
    CHECK(limit_at_infinity(mono(Rat(-1), 1)).kind == LimitResult::Finite);
    CHECK(limit_at_infinity(mono(Rat(-1), 1)).value.provably_zero());
    CHECK(limit_at_infinity(mono(Rat(-2), 3)).value.provably_zero());
    auto one = limit_at_infinity(mono(Rat(0), 0));
    CHECK(one.kind == LimitResult::Finite);
    CHECK(one.value == AlgebraElement(C(Rat(1))));
    CHECK(limit_at_infinity(mono(Rat(0), 2)).kind == LimitResult::NoLimit);
    CHECK(limit_at_infinity(mono(Rat(1), 0)).kind == LimitResult::PlusInfinity);
    CHECK(limit_at_infinity(mono(Rat(1, 2), 4)).kind == LimitResult::PlusInfinity);
    CHECK(limit_at_infinity(-mono(Rat(3), 1)).kind == LimitResult::MinusInfinity);
}

TEST_CASE("limit of (2/pi) arctan is 1") {
    Expr pi_c = Expr::constant(Series::constant(Constant::pi()));
    Expr f = Expr::rational(Rat(2)) * Expr::arctan(x0()) / pi_c;
    auto r = limit_at_infinity(ConstructibleExpr::from_expr(f));
    CHECK(r.kind == LimitResult::Finite);
    CHECK(r.value == AlgebraElement(C(Rat(1))));
}

TEST_CASE("log s has no limit in P[X]") {
    auto r = limit_at_infinity(ConstructibleExpr::log_of(x0()));
    CHECK(r.kind == LimitResult::NoLimit);
    // and the measure value of the family A_s is exactly log s:
    Expr inv = Expr::rational(Rat(1)) / x0();
    for (Series s : {C(Rat(7)), T(Rat(-1)), T(Rat(-2)).scale(Constant(3L))}) {
        auto m = integrate_interval(inv, Endpoint::at(C(Rat(1))), Endpoint::at(s));
        CHECK(m.value == extended_log(s));
    }
}

TEST_CASE("X-valued limits") {
    // f(x) = X * x/(x+1) -> X; mixes X powers at the dominant level
    ConstructibleExpr f =
        ConstructibleExpr::X() *
        ConstructibleExpr::from_expr(x0() / (x0() + Expr::rational(Rat(1))));
    auto r = limit_at_infinity(f);
    CHECK(r.kind == LimitResult::Finite);
    CHECK(r.value == AlgebraElement::X());
}

TEST_CASE("limits at points") {
    // (x^2 - 1)/(x - 1) -> 2 at 1
    Expr f = (x0() * x0() - Expr::rational(Rat(1))) / (x0() - Expr::rational(Rat(1)));
    auto r = limit_at_point(ConstructibleExpr::from_expr(f), C(Rat(1)), Side::Right);
    CHECK(r.kind == LimitResult::Finite);
    CHECK(r.value == AlgebraElement(C(Rat(2))));
    auto l = limit_at_point(ConstructibleExpr::from_expr(f), C(Rat(1)), Side::Left);
    CHECK(l.value == AlgebraElement(C(Rat(2))));
    // log x -> 0 at 1
    auto lg = limit_at_point(ConstructibleExpr::log_of(x0()), C(Rat(1)), Side::Right);
    CHECK(lg.kind == LimitResult::Finite);
    CHECK(lg.value.provably_zero());
    // 1/x -> +inf at 0+
    auto iv = limit_at_point(ConstructibleExpr::from_expr(Expr::rational(Rat(1)) / x0()),
                             C(Rat(0)), Side::Right);
    CHECK(iv.kind == LimitResult::PlusInfinity);
}

TEST_CASE("limit invariance under unit rescaling of a term") {
    // multiplying one h_sigma by a function with limit 1 leaves the verdict
    // and value unchanged
    Expr unit = (x0() + Expr::rational(Rat(5))) / x0();
    ConstructibleExpr base =
        ConstructibleExpr::from_expr(Expr::rational(Rat(3))) +
        ConstructibleExpr::from_expr(Expr::rational(Rat(1)) / x0()) * ConstructibleExpr::X();
    ConstructibleExpr scaled =
        ConstructibleExpr::from_expr(Expr::rational(Rat(3)) * unit) +
        ConstructibleExpr::from_expr(Expr::rational(Rat(1)) / x0()) * ConstructibleExpr::X();
    auto r1 = limit_at_infinity(base);
    auto r2 = limit_at_infinity(scaled);
    CHECK(r1.kind == LimitResult::Finite);
    CHECK(r2.kind == LimitResult::Finite);
    CHECK(r1.value == r2.value);
}

TEST_CASE("differentiate constructible expressions") {
    // (log x)' = 1/x
    ConstructibleExpr d = ConstructibleExpr::log_of(x0()).differentiate(0);
    ConstructibleExpr expect = ConstructibleExpr::from_expr(Expr::rational(Rat(1)) / x0());
    CHECK((d - expect).provably_zero());
    // (x X)' = X
    ConstructibleExpr xX = ConstructibleExpr::from_expr(x0()) * ConstructibleExpr::X();
    CHECK((xX.differentiate(0) - ConstructibleExpr::X()).provably_zero());
    // (arctan x)' = 1/(1+x^2)
    ConstructibleExpr da = ConstructibleExpr::from_expr(Expr::arctan(x0())).differentiate(0);
    ConstructibleExpr expect2 = ConstructibleExpr::from_expr(
        Expr::rational(Rat(1)) / (Expr::rational(Rat(1)) + x0() * x0()));
    CHECK((da - expect2).provably_zero());
}

TEST_CASE("coefficient extraction") {
    // f = x + x^2 X -> h0 = x, h1 = x^2
    ConstructibleExpr f = ConstructibleExpr::from_expr(x0()) +
                          ConstructibleExpr::from_expr(x0() * x0()) * ConstructibleExpr::X();
    auto hs = extract_coefficients(f, C(Rat(1)), C(Rat(2)));
    REQUIRE(hs.size() == 2);
    CHECK((hs[0] - ConstructibleExpr::from_expr(x0())).provably_zero());
    CHECK((hs[1] - ConstructibleExpr::from_expr(x0() * x0())).provably_zero());
    // f = log(1 + x^2): bounded positive argument, h0 only
    ConstructibleExpr g = ConstructibleExpr::log_of(Expr::rational(Rat(1)) + x0() * x0());
    auto hg = extract_coefficients(g, C(Rat(1)), C(Rat(2)));
    CHECK(hg.size() == 1);
    // f = log(x) on [t^-1, 2 t^-1]: uniform valuation -1, so h1 = 1
    auto hl = extract_coefficients(ConstructibleExpr::log_of(x0()), T(Rat(-1)),
                                   T(Rat(-1)).scale(Constant(2L)));
    REQUIRE(hl.size() == 2);
    AlgebraElement v = hl[1].eval({T(Rat(-1))});
    CHECK(v == AlgebraElement(C(Rat(1))));
    // reconstruction at a sample point
    Series pt = T(Rat(-1)).scale(Constant(Rat(3, 2)));
    AlgebraElement direct = ConstructibleExpr::log_of(x0()).eval1(pt);
    AlgebraElement rebuilt = hl[0].eval({pt}) + hl[1].eval({pt}) * AlgebraElement::X();
    CHECK(AlgebraElement::equal_up_to_precision(direct, rebuilt));
}

TEST_CASE("convolution with the Cauchy kernel") {
    // g = 1_{[-1,1]}: S_h g(x) = (1/pi)(arctan((1-x)/h) + arctan((1+x)/h))
    PiecewisePoly g;
    g.pieces.push_back({C(Rat(-1)), C(Rat(1)), Expr::rational(Rat(1))});
    Series h = T(Rat(1));
    ConstructibleExpr S = convolve(g, h);
    for (Series x : {C(Rat(0)), C(Rat(1, 2)), C(Rat(2)), T(Rat(1))}) {
        AlgebraElement got = S.eval1(x);
        Series ax1 = arctan_series((C(Rat(1)) - x) * h.inv(default_target(h.group())));
        Series ax2 = arctan_series((C(Rat(1)) + x) * h.inv(default_target(h.group())));
        Series expect = (ax1 + ax2).scale(Constant::pi().inverse());
        CHECK(AlgebraElement::equal_up_to_precision(got, AlgebraElement(expect)));
    }
    // g = 0 -> 0
    PiecewisePoly z;
    CHECK(convolve(z, h).structurally_zero());
}

TEST_CASE("smoothing: tent function, h = t") {
    // tent g: 1 - |x| on [-1,1]
    PiecewisePoly g;
    g.pieces.push_back({C(Rat(-1)), C(Rat(0)), Expr::rational(Rat(1)) + x0()});
    g.pieces.push_back({C(Rat(0)), C(Rat(1)), Expr::rational(Rat(1)) - x0()});
    Series h = T(Rat(1));
    ConstructibleExpr S = convolve(g, h);
    auto tent = [&](const Series& x) -> Series {
        Cmp s = x.provably_zero() ? Cmp::Equal : x.sign();
        Series ax = s == Cmp::Less ? -x : x;
        Series v = C(Rat(1)) - ax;
        Cmp vs = v.provably_zero() ? Cmp::Equal : v.sign();
        return vs == Cmp::Less ? Series(x.group()) : v;
    };
    for (Series x : {C(Rat(-1, 2)), C(Rat(0)), C(Rat(1, 2)), C(Rat(1)) + T(Rat(1)),
                     C(Rat(3, 4))}) {
        AlgebraElement val = S.eval1(x);
        Series h0 = val.coeff(0);
        Series diff = h0 - tent(x);
        // |g(x) - h0(x)| must be infinitesimal
        if (!diff.terms().empty()) {
            auto o = diff.ord();
            REQUIRE(o.has_value());
            CHECK(compare(*o, Exponent::rational(Rat(0))) == Cmp::Greater);
        }
    }
}

TEST_CASE("Dirac tail tends to 0 as h -> 0+") {
    // closed form (pi - 2 arctan(r/h))/pi as a function of h
    Expr pi_c = Expr::constant(Series::constant(Constant::pi()));
    Expr r = Expr::rational(Rat(1));
    Expr form = (pi_c - Expr::rational(Rat(2)) * Expr::arctan(r / x0())) / pi_c;
    auto lim = limit_at_point(ConstructibleExpr::from_expr(form), C(Rat(0)), Side::Right);
    CHECK(lim.kind == LimitResult::Finite);
    CHECK(lim.value.provably_zero());
}

TEST_CASE("real instantiation of finite limits") {
    // f = (2/pi) arctan(x) + 1/x at x = 1e6, t = 1e-3
    Expr pi_c = Expr::constant(Series::constant(Constant::pi()));
    Expr f = Expr::rational(Rat(2)) * Expr::arctan(x0()) / pi_c + Expr::rational(Rat(1)) / x0();
    auto r = limit_at_infinity(ConstructibleExpr::from_expr(f));
    REQUIRE(r.kind == LimitResult::Finite);
    double sym = r.value.instantiate(1e-3);
    double x = 1e6;
    double num = 2.0 / M_PI * std::atan(x) + 1.0 / x;
    CHECK(std::fabs(sym - num) / std::fabs(num) < 1e-3);
}
