#include "hahnmeasure/logexp.hpp"

#include <cmath>

namespace hm {

namespace {

// Number of powers of an infinitesimal h needed so the first omitted term
// has exponent >= target: the geometric tail bound from the leading exponent.
unsigned long power_budget(const Exponent& h_ord, const Exponent& target) {
    double rho = h_ord.embed().to_double();
    double tgt = target.embed().to_double();
    if (rho <= 0) throw domain_error("series tail bound needs a positive leading exponent");
    if (tgt <= 0) return 0;
    return static_cast<unsigned long>(std::ceil(tgt / rho)) + 2;
}

// Split a bounded series into (constant part, infinitesimal part).
std::pair<Constant, Series> split_unit(const Series& f) {
    const Exponent zero = Exponent::rational(Rat(0), f.group());
    Constant c = f.coeff_at(zero);
    Series h = f - Series::constant(c, f.group());
    return {c, h};
}

// Formal truncated power series over Constant, used for Taylor coefficients.
using CPoly = std::vector<Constant>;

CPoly cpoly_inv(const CPoly& q, size_t K) {
    // 1/q with q[0] != 0, by the convolution recurrence.
    CPoly d(K + 1, Constant());
    Constant inv0 = q[0].inverse();
    d[0] = inv0;
    for (size_t k = 1; k <= K; ++k) {
        Constant acc;
        for (size_t j = 1; j <= k && j < q.size(); ++j) acc = acc + q[j] * d[k - j];
        d[k] = -(acc * inv0);
    }
    return d;
}

CPoly cpoly_sqrt(const CPoly& s, size_t K) {
    // w with w^2 = s, s[0] > 0.
    CPoly w(K + 1, Constant());
    w[0] = s[0].sqrt();
    Constant half_inv = (Constant(2L) * w[0]).inverse();
    for (size_t k = 1; k <= K; ++k) {
        Constant acc = k < s.size() ? s[k] : Constant();
        for (size_t j = 1; j < k; ++j) acc = acc - w[j] * w[k - j];
        w[k] = acc * half_inv;
    }
    return w;
}

// Evaluate sum coeffs[k] * u^k with u infinitesimal. tail_exact states that
// coeffs is the whole function, not a truncation; only then can the result
// stay exact.
Series cpoly_at(const CPoly& coeffs, const Series& u, const Exponent& target,
                bool tail_exact) {
    Series acc = Series::constant(coeffs.empty() ? Constant() : coeffs[0], u.group());
    if (!u.is_exact()) acc = acc.truncate(*u.known_below());
    if (u.terms().empty()) return acc;
    if (!tail_exact) acc = acc.truncate(target);
    Series up = Series::rational(Rat(1), u.group());
    Series ut = tail_exact && u.is_exact() ? u : u.truncate(target);
    for (size_t k = 1; k < coeffs.size(); ++k) {
        up = up * ut;
        if (!tail_exact) up = up.truncate(target);
        if (up.terms().empty() && !up.is_exact()) {
            acc = acc + up; // keeps the precision marker honest
            break;
        }
        acc = acc + up.scale(coeffs[k]);
    }
    return acc;
}

} // namespace

Series partial_log(const Series& f, const Exponent& target) {
    auto o = f.ord();
    if (!o) {
        if (f.is_exact()) throw domain_error("partial log of zero");
        throw precision_exhausted("partial log: leading term unknown at this precision");
    }
    if (!o->is_zero()) throw domain_error("partial log needs ord(f) = 0");
    auto [a, h0] = split_unit(f);
    if (a.sign() != Cmp::Greater) throw domain_error("partial log needs a positive leading part");
    Series h = h0.scale(a.inverse());
    Series acc = Series::constant(log(a), f.group());
    if (!f.is_exact()) acc = acc.truncate(*f.known_below());
    if (!h.terms().empty()) {
        unsigned long K = power_budget(*h.ord(), target);
        Series hp = Series::rational(Rat(1), f.group());
        Series ht = h.truncate(target);
        for (unsigned long j = 1; j <= K; ++j) {
            hp = (hp * ht).truncate(target);
            if (hp.terms().empty()) {
                acc = acc + hp;
                break;
            }
            acc = acc + hp.scale(Constant(Rat(j % 2 == 1 ? 1 : -1, static_cast<long>(j))));
        }
        acc = acc.truncate(target);
    }
    return acc;
}

Series partial_log(const Series& f) { return partial_log(f, default_target(f.group())); }

Series partial_exp(const Series& g, const Exponent& target) {
    const Exponent zero = Exponent::rational(Rat(0), g.group());
    if (auto o = g.ord()) {
        if (compare(*o, zero) == Cmp::Less)
            throw domain_error("partial exp needs a bounded argument");
    } else if (!g.is_exact() && compare(*g.known_below(), zero) != Cmp::Greater) {
        throw precision_exhausted("partial exp: boundedness unknown at this precision");
    }
    auto [c, h] = split_unit(g);
    Series acc = Series::constant(exp(c), g.group());
    if (!g.is_exact()) acc = acc.truncate(*g.known_below());
    if (!h.terms().empty()) {
        unsigned long K = power_budget(*h.ord(), target);
        Series hp = Series::rational(Rat(1), g.group());
        Series ht = h.truncate(target);
        Series sum = Series::rational(Rat(1), g.group()).truncate(target);
        Rat fact(1);
        for (unsigned long j = 1; j <= K; ++j) {
            hp = (hp * ht).truncate(target);
            fact /= Rat(static_cast<long>(j));
            if (hp.terms().empty()) {
                sum = sum + hp;
                break;
            }
            sum = sum + hp.scale(Constant(fact));
        }
        acc = acc * sum;
    }
    return acc;
}

Series partial_exp(const Series& g) { return partial_exp(g, default_target(g.group())); }

AlgebraElement extended_log(const Series& f, const Exponent& target) {
    if (f.sign() != Cmp::Greater) throw domain_error("extended log of a non-positive element");
    Exponent gamma = *f.ord();
    Series unit = f.shift(-gamma);
    Series bounded = partial_log(unit, target);
    std::vector<Series> coeffs;
    coeffs.push_back(std::move(bounded));
    Constant slope = -gamma.embed();
    if (!slope.is_zero()) coeffs.push_back(Series::constant(slope, f.group()));
    return AlgebraElement::from_coeffs(f.group(), std::move(coeffs));
}

AlgebraElement extended_log(const Series& f) { return extended_log(f, default_target(f.group())); }

Series arctan_series(const Series& x, const Exponent& target) {
    const Exponent zero = Exponent::rational(Rat(0), x.group());
    if (auto o = x.ord()) {
        if (compare(*o, zero) == Cmp::Less) {
            // arctan(x) = sign(x) pi/2 - arctan(1/x), 1/x infinitesimal.
            Cmp s = x.sign();
            Constant half_pi = Constant::pi() * Constant(Rat(1, 2));
            Series inv = x.inv(target);
            Series tail = arctan_series(inv, target);
            Series head = Series::constant(s == Cmp::Greater ? half_pi : -half_pi, x.group());
            return head - tail;
        }
    } else if (!x.is_exact() && compare(*x.known_below(), zero) != Cmp::Greater) {
        throw precision_exhausted("arctan: argument magnitude unknown at this precision");
    }
    auto [c, u] = split_unit(x);
    if (u.provably_zero()) return Series::constant(arctan(c), x.group());
    Exponent rho = u.terms().empty() ? *u.known_below() : *u.ord();
    unsigned long K = power_budget(rho, target);
    // d/du arctan(c+u) = 1 / ((1+c^2) + 2c u + u^2)
    CPoly q{Constant(1L) + c * c, Constant(2L) * c, Constant(1L)};
    CPoly d = cpoly_inv(q, K);
    CPoly a(K + 2, Constant());
    a[0] = arctan(c);
    for (size_t k = 1; k <= K + 1 && k - 1 < d.size(); ++k)
        a[k] = d[k - 1] * Constant(Rat(1, static_cast<long>(k)));
    return cpoly_at(a, u, target, false);
}

Series arctan_series(const Series& x) { return arctan_series(x, default_target(x.group())); }

Series arcsin_series(const Series& x, const Exponent& target) {
    auto st = x.standard_part();
    if (st.infinite) throw domain_error("arcsin of an unbounded element");
    Constant c = st.value;
    if (x.is_exact()) {
        auto [c0, u0] = split_unit(x);
        if (u0.provably_zero()) {
            if (compare(c0, Constant(1L)) == Cmp::Greater ||
                compare(c0, Constant(-1L)) == Cmp::Less)
                throw domain_error("arcsin argument outside [-1,1]");
            return Series::constant(arcsin(c0), x.group());
        }
    }
    if (compare(c, Constant(-1L)) != Cmp::Greater || compare(c, Constant(1L)) != Cmp::Less)
        throw domain_error("arcsin needs |st(x)| < 1 away from the boundary");
    auto [c2, u] = split_unit(x);
    Exponent rho = u.terms().empty() ? *u.known_below() : *u.ord();
    unsigned long K = power_budget(rho, target);
    // d/du arcsin(c+u) = 1 / sqrt(1 - (c+u)^2)
    CPoly s{Constant(1L) - c * c, Constant(-2L) * c, Constant(-1L)};
    CPoly w = cpoly_sqrt(s, K);
    CPoly d = cpoly_inv(w, K);
    CPoly a(K + 2, Constant());
    a[0] = arcsin(c);
    for (size_t k = 1; k <= K + 1 && k - 1 < d.size(); ++k)
        a[k] = d[k - 1] * Constant(Rat(1, static_cast<long>(k)));
    return cpoly_at(a, u, target, false);
}

Series user_series_eval(const UserPowerSeries& f, const Series& x, const Exponent& target) {
    auto st = x.standard_part();
    if (st.infinite || !st.value.is_zero())
        throw domain_error("user power series needs an infinitesimal argument for exact "
                           "evaluation");
    if (f.radius <= 0) throw domain_error("user power series needs a positive radius");
    CPoly a;
    a.reserve(f.coeffs.size());
    for (const auto& r : f.coeffs) a.emplace_back(r);
    if (x.terms().empty()) {
        Series v = Series::constant(a.empty() ? Constant() : a[0], x.group());
        return x.is_exact() ? v : v.truncate(*x.known_below());
    }
    unsigned long K = power_budget(*x.ord(), target);
    bool tail_exact = a.size() <= K + 1;
    if (!tail_exact) a.resize(K + 1);
    return cpoly_at(a, x, target, tail_exact);
}

} // namespace hm
