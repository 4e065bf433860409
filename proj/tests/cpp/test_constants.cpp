#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "hahnmeasure/constant.hpp"

using namespace hm;

TEST_CASE("rational field arithmetic") {
    Constant a(Rat(1, 3));
    Constant b(Rat(1, 6));
    CHECK((a + b).as_rational().value() == Rat(1, 2));
    CHECK((a - a).is_zero());
    CHECK((a * b).as_rational().value() == Rat(1, 18));
    CHECK((a / b).as_rational().value() == Rat(2));
}

TEST_CASE("pi annihilator and syntactic cancellation") {
    Constant z = Constant::pi() * Constant(0L);
    CHECK(z.is_zero());
    CHECK((Constant::pi() - Constant::pi()).is_zero());
}

TEST_CASE("compare 22/7 against pi") {
    CHECK(compare(Constant(Rat(22, 7)), Constant::pi()) == Cmp::Greater);
    CHECK(compare(Constant::pi(), Constant(Rat(22, 7))) == Cmp::Less);
}

TEST_CASE("log normalization") {
    CHECK(log(Constant(1L)).is_zero());
    // log(6) = log 2 + log 3
    Constant l6 = log(Constant(6L));
    Constant l2 = log(Constant(2L));
    Constant l3 = log(Constant(3L));
    CHECK(l6 == l2 + l3);
    // log(4) = 2 log 2
    CHECK(log(Constant(4L)) == l2 * Constant(2L));
    // log(1/3) = -log 3
    CHECK(log(Constant(Rat(1, 3))) == -l3);
    // log(e) = 1
    CHECK(log(Constant::e()) == Constant(1L));
}

TEST_CASE("arctan and arcsin table") {
    CHECK(arctan(Constant(1L)) * Constant(2L) == Constant::pi() * Constant(Rat(1, 2)));
    CHECK(compare(arctan(Constant(1L)) * Constant(2L), Constant::pi() / Constant(2L)) ==
          Cmp::Equal);
    CHECK(arcsin(Constant(1L)) == Constant::pi() / Constant(2L));
    CHECK(arctan(Constant(0L)).is_zero());
    // arctan(3) = pi/2 - arctan(1/3)
    CHECK(arctan(Constant(3L)) == Constant::pi() / Constant(2L) - arctan(Constant(Rat(1, 3))));
}

TEST_CASE("sqrt normalization") {
    Constant s2 = Constant(2L).sqrt();
    CHECK(s2 * s2 == Constant(2L));
    CHECK(Constant(4L).sqrt() == Constant(2L));
    CHECK(Constant(8L).sqrt() == Constant(2L) * s2);
    CHECK(Constant(8L).pow(Rat(1, 3)) == Constant(2L));
    CHECK(compare(s2, Constant(Rat(3, 2))) == Cmp::Less);
    CHECK(compare(s2, Constant(Rat(7, 5))) == Cmp::Greater);
}

TEST_CASE("division guards") {
    CHECK_THROWS_AS(Constant(1L) / Constant(0L), domain_error);
    CHECK_THROWS_AS((Constant::pi() - Constant::pi()).inverse(), domain_error);
    Constant x = (Constant(1L) + Constant::pi());
    CHECK((x / x) == Constant(1L));
}

TEST_CASE("approx width contract and nesting") {
    Constant p = Constant::pi();
    Interval i20 = p.approx(20);
    CHECK(i20.width_upper() <= std::ldexp(4.0, -19));
    CHECK(i20.lo_rat() < Rat(31416, 10000));
    CHECK(i20.hi_rat() > Rat(31415, 10000));
    // zero and exact dyadics are point intervals
    CHECK(Constant().approx(5).is_point());
    CHECK(Constant(Rat(1, 2)).approx(4).is_point());
    // nesting as bits increase
    Constant v = log(Constant(2L)) + Constant(2L).sqrt() * Constant::pi();
    Interval a = v.approx(16);
    Interval b = v.approx(48);
    CHECK(b.lo_rat() >= a.lo_rat());
    CHECK(b.hi_rat() <= a.hi_rat());
    CHECK(b.width_upper() <= a.width_upper());
}

TEST_CASE("random rational trees agree with exact rational comparison") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<long> num(-40, 40);
    std::uniform_int_distribution<long> den(1, 12);
    std::uniform_int_distribution<int> op(0, 3);
    for (int iter = 0; iter < 200; ++iter) {
        Rat qa(num(rng), den(rng));
        Rat qb(num(rng), den(rng));
        qa.canonicalize();
        qb.canonicalize();
        Constant ca(qa), cb(qb);
        switch (op(rng)) {
            case 0: ca = ca + cb; qa = qa + qb; break;
            case 1: ca = ca - cb; qa = qa - qb; break;
            case 2: ca = ca * cb; qa = qa * qb; break;
            case 3:
                if (qb != 0) { ca = ca / cb; qa = qa / qb; }
                break;
        }
        Rat probe(num(rng), den(rng));
        probe.canonicalize();
        Cmp got = compare(ca, Constant(probe));
        int want = cmp(qa, probe);
        CHECK(got == (want < 0 ? Cmp::Less : want > 0 ? Cmp::Greater : Cmp::Equal));
    }
}

TEST_CASE("precision exhaustion is an explicit error") {
    // Machin-like relation: 4 arctan(1/5) - arctan(1/239) = pi/4 is a true
    // identity the independence policy does not know; comparing the two sides
    // must end in precision_exhausted, never a wrong verdict.
    Constant lhs = arctan(Constant(Rat(1, 5))) * Constant(4L) - arctan(Constant(Rat(1, 239)));
    Constant rhs = Constant::pi() / Constant(4L);
    CHECK_THROWS_AS(compare(lhs, rhs, 128), precision_exhausted);
}

TEST_CASE("exp/log round trips") {
    CHECK(exp(Constant(0L)) == Constant(1L));
    CHECK(exp(log(Constant(5L))) == Constant(5L));
    CHECK(log(exp(Constant(Rat(3, 2)))) == Constant(Rat(3, 2)));
    // numeric sanity
    CHECK(std::abs(exp(Constant(1L)).to_double() - std::exp(1.0)) < 1e-12);
    CHECK(std::abs(log(Constant(2L)).to_double() - std::log(2.0)) < 1e-12);
    CHECK(std::abs(arcsin(Constant(Rat(1, 2))).to_double() - std::asin(0.5)) < 1e-12);
}

TEST_CASE("enclosure cache refines safely from concurrent readers") {
    Constant v = log(Constant(2L)) + Constant::pi() * Constant(2L).sqrt();
    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (int i = 0; i < 8; ++i) {
        workers.emplace_back([&, i] {
            for (unsigned bits = 32; bits <= 512; bits *= 2) {
                Interval iv = v.approx(bits + (i % 3));
                if (!(iv.lo_rat() <= iv.hi_rat())) ++failures;
                if (compare(v, Constant(6L), 128) != Cmp::Less) ++failures;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(failures == 0);
}
