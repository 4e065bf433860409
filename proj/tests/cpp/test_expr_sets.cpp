#include <doctest.h>

#include <random>

#include "hahnmeasure/normalform.hpp"
#include "hahnmeasure/sets.hpp"

using namespace hm;

namespace {
Series T(const Rat& e) { return Series::t_power(Exponent::rational(e)); }
Series C(const Rat& q) { return Series::rational(q); }
} // namespace

TEST_CASE("expression evaluation") {
    Expr x = Expr::var(0);
    // eval(1/x, t^-1) = t
    Expr inv = Expr::rational(Rat(1)) / x;
    CHECK(Series::equal_up_to_precision(inv.eval({T(Rat(-1))}), T(Rat(1))));
    // eval(sqrt(1-x^2), 0) = 1
    Expr f = Expr::sqrt(Expr::rational(Rat(1)) - x * x);
    CHECK(f.eval({Series()}) == C(Rat(1)));
    // eval(|x|, -t) = t
    CHECK(Expr::abs(x).eval({-T(Rat(1))}) == T(Rat(1)));
    // domain errors surface
    CHECK_THROWS_AS(inv.eval({Series()}), domain_error);
    CHECK_THROWS_AS(Expr::sqrt(-Expr::rational(Rat(1))).eval({C(Rat(0))}), domain_error);
}

TEST_CASE("eval commutes with standard part on bounded points") {
    std::mt19937 rng(44);
    std::uniform_int_distribution<long> v(-5, 5);
    Expr x = Expr::var(0);
    Expr f = (x * x + Expr::rational(Rat(1))) / (x + Expr::rational(Rat(3)));
    for (int i = 0; i < 30; ++i) {
        long c = v(rng);
        if (c == -3) continue;
        Series pt = C(Rat(c)) + T(Rat(1)).scale(Constant(Rat(v(rng))));
        auto st_of_eval = f.eval({pt}).standard_part();
        Series real_eval = f.eval({Series::constant(pt.standard_part().value)});
        CHECK(!st_of_eval.infinite);
        CHECK(st_of_eval.value == real_eval.standard_part().value);
    }
}

TEST_CASE("differentiation rules") {
    Expr x = Expr::var(0);
    CHECK(provably_zero(x.pow(Rat(3)).differentiate(0) -
                        Expr::rational(Rat(3)) * x * x));
    CHECK(provably_zero(Expr::arctan(x).differentiate(0) -
                        Expr::rational(Rat(1)) / (Expr::rational(Rat(1)) + x * x)));
    // chain rule through sqrt
    Expr s = Expr::sqrt(Expr::rational(Rat(1)) + x * x);
    CHECK(provably_zero(s.differentiate(0) - x / s));
}

TEST_CASE("normal form zero tests") {
    Expr x = Expr::var(0);
    // (x+1)^2 - x^2 - 2x - 1 = 0
    Expr p = (x + Expr::rational(Rat(1))).pow(Rat(2)) - x * x -
             Expr::rational(Rat(2)) * x - Expr::rational(Rat(1));
    CHECK(provably_zero(p));
    // sqrt(u)^2 = u
    Expr u = Expr::rational(Rat(4)) - x * x;
    CHECK(provably_zero(Expr::sqrt(u) * Expr::sqrt(u) - u));
    // rational identity with a fractional power of the variable
    CHECK(provably_zero(x.pow(Rat(1, 2)) * x.pow(Rat(1, 2)) - x));
    // inequivalent expressions are rejected
    CHECK(!provably_zero(x - Expr::rational(Rat(1))));
    CHECK(!provably_equal(Expr::arctan(x), Expr::arctan(x + Expr::rational(Rat(1)))));
    // arctan atoms with equal arguments cancel
    CHECK(provably_zero(Expr::arctan(x * x) - Expr::arctan(x * x)));
}

TEST_CASE("set normalization") {
    // [0,2] u [1,3] -> [0,3]
    SetOneD s = SetOneD::interval(C(Rat(0)), C(Rat(2)))
                    .unite(SetOneD::interval(C(Rat(1)), C(Rat(3))))
                    .normalize();
    REQUIRE(s.components().size() == 1);
    CHECK(s.components()[0].lo.value == C(Rat(0)));
    CHECK(s.components()[0].hi.value == C(Rat(3)));
    // [0,1] u {2} unchanged
    SetOneD s2 = SetOneD::interval(C(Rat(0)), C(Rat(1)))
                     .unite(SetOneD::point(C(Rat(2))))
                     .normalize();
    CHECK(s2.components().size() == 2);
    // [t, 2t] u [3t, 1] unchanged: 2t < 3t
    SetOneD s3 = SetOneD::interval(T(Rat(1)), T(Rat(1)).scale(Constant(2L)))
                     .unite(SetOneD::interval(T(Rat(1)).scale(Constant(3L)), C(Rat(1))))
                     .normalize();
    CHECK(s3.components().size() == 2);
}

TEST_CASE("translate and box") {
    SetOneD s = SetOneD::interval(C(Rat(0)), C(Rat(1)));
    SetOneD moved = s.translate(T(Rat(-1)));
    CHECK(moved.components()[0].lo.value == T(Rat(-1)));
    CHECK(moved.components()[0].hi.value == T(Rat(-1)) + C(Rat(1)));
    CHECK(SetOneD::empty().translate(C(Rat(5))).is_empty());
    Region b = Region::box({{C(Rat(0)), C(Rat(1))}, {C(Rat(0)), C(Rat(2))}});
    CHECK(b.dimension() == 2);
}
