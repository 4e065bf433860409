#include <doctest.h>

#include <cmath>
#include <random>

#include "hahnmeasure/logexp.hpp"

using namespace hm;

namespace {
Series T(const Rat& e) { return Series::t_power(Exponent::rational(e)); }
Exponent target(long q) { return Exponent::rational(Rat(q)); }
} // namespace

TEST_CASE("partial log of 1+t is the logarithmic series") {
    Series f = Series::rational(Rat(1)) + T(Rat(1));
    Series l = partial_log(f, target(4));
    CHECK(l.coeff_at(Exponent::rational(Rat(1))) == Constant(1L));
    CHECK(l.coeff_at(Exponent::rational(Rat(2))) == Constant(Rat(-1, 2)));
    CHECK(l.coeff_at(Exponent::rational(Rat(3))) == Constant(Rat(1, 3)));
    CHECK(l.coeff_at(Exponent::rational(Rat(0))).is_zero());
    CHECK(!l.is_exact());
}

TEST_CASE("partial log of a constant stays exact") {
    Series two = Series::rational(Rat(2));
    Series l = partial_log(two, target(8));
    CHECK(l.is_exact());
    CHECK(l.coeff_at(Exponent::rational(Rat(0))) == log(Constant(2L)));
}

TEST_CASE("partial log of e(1+t) has constant part 1") {
    Series f = (Series::rational(Rat(1)) + T(Rat(1))).scale(Constant::e());
    Series l = partial_log(f, target(4));
    CHECK(l.coeff_at(Exponent::rational(Rat(0))) == Constant(1L));
    CHECK(l.coeff_at(Exponent::rational(Rat(1))) == Constant(1L));
    CHECK(l.coeff_at(Exponent::rational(Rat(2))) == Constant(Rat(-1, 2)));
}

TEST_CASE("partial exp basics and round trips") {
    Series e1 = partial_exp(T(Rat(1)), target(4));
    CHECK(e1.coeff_at(Exponent::rational(Rat(0))) == Constant(1L));
    CHECK(e1.coeff_at(Exponent::rational(Rat(1))) == Constant(1L));
    CHECK(e1.coeff_at(Exponent::rational(Rat(2))) == Constant(Rat(1, 2)));
    CHECK(e1.coeff_at(Exponent::rational(Rat(3))) == Constant(Rat(1, 6)));
    CHECK(partial_exp(Series(), target(8)) == Series::rational(Rat(1)));
    Series f = Series::rational(Rat(1)) + T(Rat(1));
    CHECK(Series::equal_up_to_precision(partial_exp(partial_log(f, target(6)), target(6)), f));
    CHECK_THROWS_AS(partial_exp(T(Rat(-1)), target(4)), domain_error);
    CHECK_THROWS_AS(partial_log(T(Rat(1)), target(4)), domain_error);
    CHECK_THROWS_AS(partial_log(-Series::rational(Rat(1)), target(4)), domain_error);
}

TEST_CASE("round trips on random units") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 3);
    for (int i = 0; i < 40; ++i) {
        Series u = Series::rational(Rat(std::abs(num(rng)) + 1));
        for (int k = 0; k < 3; ++k) {
            Rat e(std::abs(num(rng)) % 5 + 1, den(rng));
            Rat c(num(rng), den(rng));
            e.canonicalize();
            c.canonicalize();
            u = u + Series::monomial(Constant(c), Exponent::rational(e));
        }
        Series lg = partial_log(u, target(6));
        Series back = partial_exp(lg, target(6));
        CHECK(Series::equal_up_to_precision(back, u));
        Series g = u - Series::constant(u.coeff_at(Exponent::rational(Rat(0))));
        Series ex = partial_exp(g, target(6));
        Series lg2 = partial_log(ex, target(6));
        CHECK(Series::equal_up_to_precision(lg2, g));
    }
}

TEST_CASE("extended log values") {
    // log(t^-1) = X
    AlgebraElement x = extended_log(T(Rat(-1)));
    CHECK(x == AlgebraElement::X());
    // log(t^(1/2)) = -X/2
    AlgebraElement h = extended_log(T(Rat(1, 2)));
    CHECK(h == AlgebraElement::X().scale(Constant(Rat(-1, 2))));
    // log(1) = 0
    CHECK(extended_log(Series::rational(Rat(1))).provably_zero());
    CHECK_THROWS_AS(extended_log(-T(Rat(-1))), domain_error);
}

TEST_CASE("extended log is a homomorphism on random positive series") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-4, 4);
    std::uniform_int_distribution<long> den(1, 3);
    auto random_positive = [&]() {
        Rat lead_exp(num(rng), den(rng));
        lead_exp.canonicalize();
        Series s = Series::monomial(Constant(Rat(std::abs(num(rng)) + 1)),
                                    Exponent::rational(lead_exp));
        for (int k = 0; k < 2; ++k) {
            Rat e = lead_exp + Rat(std::abs(num(rng)) % 4 + 1, den(rng));
            Rat c(num(rng), den(rng));
            e.canonicalize();
            c.canonicalize();
            s = s + Series::monomial(Constant(c), Exponent::rational(e));
        }
        return s;
    };
    for (int i = 0; i < 25; ++i) {
        Series f = random_positive();
        Series g = random_positive();
        AlgebraElement lhs = extended_log(f * g, target(6));
        AlgebraElement rhs = extended_log(f, target(6)) + extended_log(g, target(6));
        CHECK(AlgebraElement::equal_up_to_precision(lhs, rhs));
        // strictly increasing
        if (compare(f, g) == Cmp::Less)
            CHECK(compare(extended_log(f, target(6)), extended_log(g, target(6))) == Cmp::Less);
    }
}

TEST_CASE("arctan at infinite argument") {
    Series a = arctan_series(T(Rat(-1)), target(5));
    // pi/2 - t + t^3/3 (+ O(t^5))
    CHECK(a.coeff_at(Exponent::rational(Rat(0))) == Constant::pi() * Constant(Rat(1, 2)));
    CHECK(a.coeff_at(Exponent::rational(Rat(1))) == Constant(-1L));
    CHECK(a.coeff_at(Exponent::rational(Rat(2))).is_zero());
    CHECK(a.coeff_at(Exponent::rational(Rat(3))) == Constant(Rat(1, 3)));
    CHECK(arctan_series(Series(), target(5)).provably_zero());
}

TEST_CASE("sqrt at shifted point via nth_root") {
    Series f = Series::rational(Rat(4)) + T(Rat(1));
    Series r = f.nth_root(2, target(3));
    CHECK(r.coeff_at(Exponent::rational(Rat(0))) == Constant(2L));
    CHECK(r.coeff_at(Exponent::rational(Rat(1))) == Constant(Rat(1, 4)));
    CHECK(r.coeff_at(Exponent::rational(Rat(2))) == Constant(Rat(-1, 64)));
}

TEST_CASE("arcsin series at interior points") {
    Series x = Series::rational(Rat(1, 2)) + T(Rat(1));
    Series v = arcsin_series(x, target(3));
    CHECK(v.coeff_at(Exponent::rational(Rat(0))) == arcsin(Constant(Rat(1, 2))));
    // derivative at 1/2 is 1/sqrt(3/4) = 2/sqrt(3)
    Constant deriv = Constant(2L) / Constant(3L).sqrt();
    CHECK(v.coeff_at(Exponent::rational(Rat(1))) == deriv);
    CHECK(arcsin_series(Series::rational(Rat(1)), target(4)) ==
          Series::constant(Constant::pi() * Constant(Rat(1, 2))));
    CHECK_THROWS_AS(arcsin_series(Series::rational(Rat(2)), target(4)), domain_error);
}

TEST_CASE("real instantiation of log/exp/arctan") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> num(1, 6);
    for (double tau0 : {1e-3, 1e-6}) {
        double X = std::log(1.0 / tau0);
        for (int i = 0; i < 20; ++i) {
            Series u = Series::rational(Rat(num(rng))) + T(Rat(1)).scale(Constant(Rat(num(rng))));
            double expect = std::log(u.instantiate(tau0));
            CHECK(std::fabs(partial_log(u, target(10)).instantiate(tau0) - expect) /
                      std::max(1.0, std::fabs(expect)) <
                  1e-9);
            double expect2 = std::atan(u.instantiate(tau0));
            CHECK(std::fabs(arctan_series(u, target(10)).instantiate(tau0) - expect2) < 1e-9);
        }
        // extended log at an unbounded point
        Series f = T(Rat(-1)).scale(Constant(Rat(3))) + Series::rational(Rat(1));
        AlgebraElement l = extended_log(f, target(10));
        double lhs = l.coeff(0).instantiate(tau0) + l.coeff(1).instantiate(tau0) * X;
        double rhs = std::log(f.instantiate(tau0));
        CHECK(std::fabs(lhs - rhs) / std::fabs(rhs) < 1e-9);
    }
}

TEST_CASE("user power series on infinitesimal arguments") {
    UserPowerSeries geo{{Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)}, Rat(1)};
    Series v = user_series_eval(geo, T(Rat(1)), target(4));
    CHECK(v.coeff_at(Exponent::rational(Rat(0))) == Constant(1L));
    CHECK(v.coeff_at(Exponent::rational(Rat(3))) == Constant(1L));
    CHECK_THROWS_AS(user_series_eval(geo, Series::rational(Rat(1, 2)), target(4)), domain_error);
}
