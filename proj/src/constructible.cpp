#include "hahnmeasure/constructible.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hahnmeasure/calculus.hpp"

namespace hm {

// --- ConstructibleExpr basics -------------------------------------------------

ConstructibleExpr::ConstructibleExpr() : group_(ExponentGroup::rationals()) {}
ConstructibleExpr::ConstructibleExpr(GroupPtr group) : group_(std::move(group)) {}

ConstructibleExpr ConstructibleExpr::from_expr(Expr e, GroupPtr group) {
    ConstructibleExpr c(std::move(group));
    if (!(e.kind() == ExprKind::Const && e.const_value().provably_zero()))
        c.terms_.push_back(CTerm{std::move(e), {}, 0});
    return c;
}

ConstructibleExpr ConstructibleExpr::log_of(Expr arg, GroupPtr group) {
    ConstructibleExpr c(std::move(group));
    c.terms_.push_back(CTerm{Expr::rational(Rat(1)), {std::move(arg)}, 0});
    return c;
}

ConstructibleExpr ConstructibleExpr::X(GroupPtr group) {
    ConstructibleExpr c(std::move(group));
    c.terms_.push_back(CTerm{Expr::rational(Rat(1)), {}, 1});
    return c;
}

ConstructibleExpr ConstructibleExpr::from_terms(GroupPtr group, std::vector<CTerm> terms) {
    ConstructibleExpr c(std::move(group));
    for (auto& t : terms) {
        if (t.coeff.kind() == ExprKind::Const && t.coeff.const_value().provably_zero()) continue;
        c.terms_.push_back(std::move(t));
    }
    return c;
}

ConstructibleExpr ConstructibleExpr::from_algebra(const AlgebraElement& a) {
    ConstructibleExpr c(a.group());
    for (size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeffs()[i].provably_zero()) continue;
        c.terms_.push_back(CTerm{Expr::constant(a.coeffs()[i]), {}, static_cast<unsigned>(i)});
    }
    return c;
}

ConstructibleExpr ConstructibleExpr::operator+(const ConstructibleExpr& o) const {
    ConstructibleExpr c(group_);
    c.terms_ = terms_;
    c.terms_.insert(c.terms_.end(), o.terms_.begin(), o.terms_.end());
    return c;
}

ConstructibleExpr ConstructibleExpr::operator-() const {
    ConstructibleExpr c(group_);
    c.terms_ = terms_;
    for (auto& t : c.terms_) t.coeff = -t.coeff;
    return c;
}

ConstructibleExpr ConstructibleExpr::operator-(const ConstructibleExpr& o) const {
    return *this + (-o);
}

ConstructibleExpr ConstructibleExpr::operator*(const ConstructibleExpr& o) const {
    ConstructibleExpr c(group_);
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            CTerm t;
            t.coeff = a.coeff * b.coeff;
            t.logs = a.logs;
            t.logs.insert(t.logs.end(), b.logs.begin(), b.logs.end());
            t.xpow = a.xpow + b.xpow;
            c.terms_.push_back(std::move(t));
        }
    }
    return c;
}

ConstructibleExpr ConstructibleExpr::scale(const Expr& e) const {
    ConstructibleExpr c(group_);
    c.terms_ = terms_;
    for (auto& t : c.terms_) t.coeff = t.coeff * e;
    return c;
}

AlgebraElement ConstructibleExpr::eval(const std::vector<Series>& point,
                                       const Exponent& target) const {
    AlgebraElement acc(group_);
    for (const auto& t : terms_) {
        AlgebraElement term(t.coeff.eval(point, target));
        for (const auto& g : t.logs) {
            Series gv = g.eval(point, target);
            term = term * extended_log(gv, target);
        }
        if (t.xpow > 0) term = term * AlgebraElement::X(group_).pow_int(t.xpow);
        acc = acc + term;
    }
    return acc;
}

AlgebraElement ConstructibleExpr::eval(const std::vector<Series>& point) const {
    return eval(point, default_target(group_));
}

AlgebraElement ConstructibleExpr::eval1(const Series& x) const { return eval({x}); }

ConstructibleExpr ConstructibleExpr::substitute(size_t var, const Expr& replacement) const {
    ConstructibleExpr c(group_);
    c.terms_ = terms_;
    for (auto& t : c.terms_) {
        t.coeff = t.coeff.substitute(var, replacement);
        for (auto& g : t.logs) g = g.substitute(var, replacement);
    }
    return c;
}

ConstructibleExpr ConstructibleExpr::differentiate(size_t var) const {
    ConstructibleExpr out(group_);
    for (const auto& t : terms_) {
        // Product rule over coeff and each log factor; X is a constant.
        CTerm dc;
        dc.coeff = t.coeff.differentiate(var);
        dc.logs = t.logs;
        dc.xpow = t.xpow;
        if (!(dc.coeff.kind() == ExprKind::Const && dc.coeff.const_value().provably_zero()))
            out.terms_.push_back(std::move(dc));
        for (size_t i = 0; i < t.logs.size(); ++i) {
            // (log|u|)' = u'/u: an absolute value in the argument drops out.
            Expr arg = t.logs[i].kind() == ExprKind::Abs ? t.logs[i].child(0) : t.logs[i];
            CTerm dl;
            dl.coeff = t.coeff * (arg.differentiate(var) / arg);
            dl.logs = t.logs;
            dl.logs.erase(dl.logs.begin() + static_cast<long>(i));
            dl.xpow = t.xpow;
            out.terms_.push_back(std::move(dl));
        }
    }
    return out;
}

bool ConstructibleExpr::depends_on(size_t var) const {
    for (const auto& t : terms_) {
        if (t.coeff.depends_on(var)) return true;
        for (const auto& g : t.logs)
            if (g.depends_on(var)) return true;
    }
    return false;
}

size_t ConstructibleExpr::max_var() const {
    size_t m = 0;
    for (const auto& t : terms_) {
        m = std::max(m, t.coeff.max_var());
        for (const auto& g : t.logs) m = std::max(m, g.max_var());
    }
    return m;
}

bool ConstructibleExpr::provably_zero() const {
    if (terms_.empty()) return true;
    // Group terms by (xpow, multiset of log arguments up to normal-form
    // equality) and test each coefficient sum.
    struct Bucket {
        unsigned xpow;
        std::vector<Expr> logs;
        Expr sum;
    };
    std::vector<Bucket> buckets;
    NormalForm nf(group_);
    auto arg_equal = [&](const Expr& x, const Expr& y) {
        if (x.same(y)) return true;
        Expr xi = x.kind() == ExprKind::Abs ? x.child(0) : x;
        Expr yi = y.kind() == ExprKind::Abs ? y.child(0) : y;
        try {
            return nf.provably_equal(xi, yi);
        } catch (const error&) {
            return false;
        }
    };
    auto logs_match = [&](const std::vector<Expr>& a, const std::vector<Expr>& b) {
        if (a.size() != b.size()) return false;
        std::vector<bool> used(b.size(), false);
        for (const auto& x : a) {
            bool found = false;
            for (size_t j = 0; j < b.size(); ++j) {
                if (used[j]) continue;
                if (arg_equal(x, b[j])) {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    };
    for (const auto& t : terms_) {
        bool placed = false;
        for (auto& b : buckets) {
            if (b.xpow == t.xpow && logs_match(b.logs, t.logs)) {
                b.sum = b.sum + t.coeff;
                placed = true;
                break;
            }
        }
        if (!placed) buckets.push_back(Bucket{t.xpow, t.logs, t.coeff});
    }
    for (const auto& b : buckets)
        if (!nf.provably_zero(b.sum)) return false;
    return true;
}

std::string ConstructibleExpr::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
        const CTerm& t = terms_[i];
        std::string piece = t.coeff.str(names);
        for (const auto& g : t.logs) piece += "*log(" + g.str(names) + ")";
        if (t.xpow == 1) piece += "*X";
        if (t.xpow > 1) piece += "*X^" + std::to_string(t.xpow);
        if (i) out += " + ";
        out += piece;
    }
    return out;
}

// --- asymptotic expansions at infinity ----------------------------------------
//
// Expansion in xi = 1/x with Series coefficients: finitely many known terms
// sorted by xi-exponent plus a KnownBelow-style bound.

namespace {

struct AE {
    std::vector<std::pair<Rat, Series>> terms; // ascending xi exponent
    std::optional<Rat> known_below;
    GroupPtr group;
};

const Rat kXiTarget = Rat(4); // xi-exponent working depth for expansions

AE ae_make(GroupPtr g, std::vector<std::pair<Rat, Series>> terms,
           std::optional<Rat> kb = std::nullopt) {
    AE r;
    r.group = std::move(g);
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [e, c] : terms) {
        if (c.terms().empty()) continue; // zero, or zero below the t-precision
        if (!r.terms.empty() && r.terms.back().first == e) {
            r.terms.back().second = r.terms.back().second + c;
            if (r.terms.back().second.terms().empty()) r.terms.pop_back();
        } else {
            r.terms.emplace_back(e, c);
        }
    }
    r.known_below = std::move(kb);
    if (r.known_below)
        while (!r.terms.empty() && r.terms.back().first >= *r.known_below) r.terms.pop_back();
    return r;
}

AE ae_const(GroupPtr g, Series s) {
    AE r;
    r.group = std::move(g);
    if (!s.provably_zero()) r.terms.emplace_back(Rat(0), std::move(s));
    return r;
}

std::optional<Rat> min_kb(const std::optional<Rat>& a, const std::optional<Rat>& b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

AE ae_add(const AE& a, const AE& b) {
    std::vector<std::pair<Rat, Series>> t = a.terms;
    t.insert(t.end(), b.terms.begin(), b.terms.end());
    return ae_make(a.group, std::move(t), min_kb(a.known_below, b.known_below));
}

AE ae_neg(const AE& a) {
    AE r = a;
    for (auto& [e, c] : r.terms) c = -c;
    return r;
}

AE ae_scale(const AE& a, const Series& s) {
    AE r = a;
    for (auto& [e, c] : r.terms) c = c * s;
    std::vector<std::pair<Rat, Series>> t = std::move(r.terms);
    return ae_make(r.group, std::move(t), r.known_below);
}

AE ae_shift(const AE& a, const Rat& e0) {
    AE r = a;
    for (auto& [e, c] : r.terms) e += e0;
    if (r.known_below) *r.known_below += e0;
    return r;
}

AE ae_truncate(const AE& a, const Rat& omega) {
    AE r = a;
    r.known_below = r.known_below ? std::min(*r.known_below, omega) : omega;
    while (!r.terms.empty() && r.terms.back().first >= *r.known_below) r.terms.pop_back();
    return r;
}

AE ae_mul(const AE& a, const AE& b) {
    std::optional<Rat> kb;
    auto low_of = [](const AE& s) -> std::optional<Rat> {
        if (!s.terms.empty()) return s.terms.front().first;
        return s.known_below;
    };
    if (a.known_below) {
        auto lb = low_of(b);
        if (lb) kb = min_kb(kb, *a.known_below + *lb);
    }
    if (b.known_below) {
        auto la = low_of(a);
        if (la) kb = min_kb(kb, *b.known_below + *la);
    }
    std::vector<std::pair<Rat, Series>> t;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) t.emplace_back(ea + eb, ca * cb);
    return ae_make(a.group, std::move(t), kb);
}

AE ae_one(GroupPtr g) { return ae_const(std::move(g), Series::rational(Rat(1))); }

AE ae_inv(const AE& a, const Rat& target) {
    if (a.terms.empty()) {
        if (!a.known_below) throw domain_error("inverse of the zero expansion");
        throw precision_exhausted("expansion leading term unknown");
    }
    auto [e0, c0] = a.terms.front();
    Series c0i = c0.provably_zero() ? Series(a.group) : Series::rational(Rat(1), a.group);
    // Series inverse of the leading coefficient, exact for single terms.
    c0i = c0.inv(default_target(a.group));
    AE lead_inv = ae_const(a.group, c0i);
    lead_inv = ae_shift(lead_inv, -e0);
    AE h = ae_add(ae_mul(a, lead_inv), ae_neg(ae_one(a.group))); // ord > 0
    AE acc = ae_truncate(ae_one(a.group), target);
    if (!h.terms.empty()) {
        Rat rho = h.terms.front().first;
        if (rho <= 0) throw precision_exhausted("expansion unit part did not cancel exactly");
        AE pw = ae_one(a.group);
        AE mh = ae_truncate(ae_neg(h), target);
        Rat reached(0);
        while (reached < target) {
            pw = ae_truncate(ae_mul(pw, mh), target);
            if (pw.terms.empty()) {
                acc = ae_add(acc, pw);
                break;
            }
            acc = ae_add(acc, pw);
            reached += rho;
        }
    }
    return ae_mul(acc, lead_inv);
}

AE ae_pow_rat(const AE& a, const Rat& q, const Rat& target) {
    if (q == 0) return ae_one(a.group);
    if (is_integer(q)) {
        long n = q.get_num().get_si();
        AE acc = ae_one(a.group);
        AE base = n < 0 ? ae_inv(a, target) : a;
        for (long i = 0; i < std::abs(n); ++i) acc = ae_mul(acc, base);
        return acc;
    }
    if (a.terms.empty()) {
        if (!a.known_below) {
            if (q > 0) return AE{{}, std::nullopt, a.group};
            throw domain_error("zero expansion to a negative power");
        }
        throw precision_exhausted("expansion leading term unknown");
    }
    auto [e0, c0] = a.terms.front();
    bool even_den = mpz_even_p(Int(q.get_den()).get_mpz_t());
    if (even_den && c0.sign() == Cmp::Less)
        throw domain_error("even root of an ultimately negative expansion");
    Series c0p = c0.pow_rat(q, default_target(a.group));
    AE lead_inv = ae_shift(ae_const(a.group, c0.inv(default_target(a.group))), -e0);
    AE h = ae_add(ae_mul(a, lead_inv), ae_neg(ae_one(a.group)));
    AE acc = ae_truncate(ae_one(a.group), target);
    if (!h.terms.empty()) {
        Rat rho = h.terms.front().first;
        if (rho <= 0) throw precision_exhausted("expansion unit part did not cancel exactly");
        AE pw = ae_one(a.group);
        AE ht = ae_truncate(h, target);
        Rat binom(1);
        Rat reached(0);
        unsigned long k = 0;
        while (reached < target) {
            ++k;
            binom *= (q - Rat(static_cast<long>(k) - 1)) / Rat(static_cast<long>(k));
            pw = ae_truncate(ae_mul(pw, ht), target);
            if (pw.terms.empty()) {
                acc = ae_add(acc, pw);
                break;
            }
            acc = ae_add(acc, ae_scale(pw, Series::constant(Constant(binom), a.group)));
            reached += rho;
        }
    }
    return ae_shift(ae_scale(acc, c0p), e0 * q);
}

// Taylor evaluation sum a_k v^k for an expansion v with positive exponents.
AE ae_taylor(const std::vector<Series>& coeffs, const AE& v, const Rat& target) {
    AE acc = ae_const(v.group, coeffs.empty() ? Series(v.group) : coeffs[0]);
    if (v.known_below) acc = ae_truncate(acc, *v.known_below);
    if (v.terms.empty()) return acc;
    acc = ae_truncate(acc, target);
    AE pw = ae_one(v.group);
    AE vt = ae_truncate(v, target);
    for (size_t k = 1; k < coeffs.size(); ++k) {
        pw = ae_truncate(ae_mul(pw, vt), target);
        if (pw.terms.empty()) {
            acc = ae_add(acc, pw);
            break;
        }
        acc = ae_add(acc, ae_scale(pw, coeffs[k]));
    }
    return acc;
}

// Series-coefficient formal inversion for Taylor coefficients.
std::vector<Series> spoly_inv(const std::vector<Series>& q, size_t K, const GroupPtr& g) {
    std::vector<Series> d(K + 1, Series(g));
    Series inv0 = q[0].inv(default_target(g));
    d[0] = inv0;
    for (size_t k = 1; k <= K; ++k) {
        Series acc(g);
        for (size_t j = 1; j <= k && j < q.size(); ++j) acc = acc + q[j] * d[k - j];
        d[k] = -(acc * inv0);
    }
    return d;
}

AE expand_expr(const Expr& e, size_t var, const Rat& target);

AE expand_arctan(const AE& a, const Rat& target) {
    GroupPtr g = a.group;
    if (a.terms.empty()) {
        if (!a.known_below) return AE{{}, std::nullopt, g}; // arctan 0 = 0
        throw precision_exhausted("arctan: expansion magnitude unknown");
    }
    auto [e0, c0] = a.terms.front();
    if (e0 < 0) {
        // Argument unbounded as x -> inf: arctan(f) = sign pi/2 - arctan(1/f).
        Cmp s = c0.sign();
        Constant half_pi = Constant::pi() * Constant(Rat(1, 2));
        AE inv = ae_inv(a, target);
        AE tail = expand_arctan(inv, target);
        AE head = ae_const(g, Series::constant(s == Cmp::Greater ? half_pi : -half_pi, g));
        return ae_add(head, ae_neg(tail));
    }
    // Bounded: Taylor at the limit coefficient c = value at xi^0.
    if (a.known_below && *a.known_below <= 0)
        throw precision_exhausted("arctan: constant coefficient unknown");
    Series c(g);
    AE v = a;
    if (e0 == 0) {
        c = c0;
        v.terms.erase(v.terms.begin());
    }
    size_t K = 1;
    if (!v.terms.empty()) {
        double rho = v.terms.front().first.get_d();
        K = static_cast<size_t>(std::ceil(target.get_d() / rho)) + 2;
    }
    std::vector<Series> qpoly{Series::rational(Rat(1), g) + c * c,
                              c.scale(Constant(2L)),
                              Series::rational(Rat(1), g)};
    std::vector<Series> d = spoly_inv(qpoly, K, g);
    std::vector<Series> coeffs(K + 2, Series(g));
    coeffs[0] = arctan_series(c, default_target(g));
    for (size_t k = 1; k <= K + 1 && k - 1 < d.size(); ++k)
        coeffs[k] = d[k - 1].scale(Constant(Rat(1, static_cast<long>(k))));
    return ae_taylor(coeffs, v, target);
}

AE expand_expr(const Expr& e, size_t var, const Rat& target) {
    GroupPtr g;
    switch (e.kind()) {
        case ExprKind::Const:
            return ae_const(e.const_value().group(), e.const_value());
        case ExprKind::Var: {
            if (e.var_index() != var)
                throw domain_error("limit engine handles one free variable");
            AE r;
            r.group = ExponentGroup::rationals();
            r.terms.emplace_back(Rat(-1), Series::rational(Rat(1)));
            return r;
        }
        case ExprKind::Add:
            return ae_add(expand_expr(e.child(0), var, target),
                          expand_expr(e.child(1), var, target));
        case ExprKind::Sub:
            return ae_add(expand_expr(e.child(0), var, target),
                          ae_neg(expand_expr(e.child(1), var, target)));
        case ExprKind::Mul:
            return ae_mul(expand_expr(e.child(0), var, target),
                          expand_expr(e.child(1), var, target));
        case ExprKind::Div:
            return ae_mul(expand_expr(e.child(0), var, target),
                          ae_inv(expand_expr(e.child(1), var, target), target));
        case ExprKind::Neg:
            return ae_neg(expand_expr(e.child(0), var, target));
        case ExprKind::PowQ:
            return ae_pow_rat(expand_expr(e.child(0), var, target), e.pow_exponent(), target);
        case ExprKind::Sqrt:
            return ae_pow_rat(expand_expr(e.child(0), var, target), Rat(1, 2), target);
        case ExprKind::Abs: {
            AE a = expand_expr(e.child(0), var, target);
            if (a.terms.empty()) {
                if (!a.known_below) return a;
                throw precision_exhausted("abs: expansion sign unknown");
            }
            return a.terms.front().second.sign() == Cmp::Less ? ae_neg(a) : a;
        }
        case ExprKind::Arctan:
            return expand_arctan(expand_expr(e.child(0), var, target), target);
        case ExprKind::Piecewise: {
            // Ultimately, the sign of each guard is the sign of its leading
            // expansion coefficient; the eventually-active case wins.
            for (const auto& c : e.cases()) {
                bool all = true;
                for (const auto& [guard, rel] : c.conds) {
                    AE ga = expand_expr(guard, var, target);
                    Cmp s;
                    if (ga.terms.empty()) {
                        if (!ga.known_below) {
                            s = Cmp::Equal;
                        } else {
                            throw precision_exhausted("guard sign unknown at infinity");
                        }
                    } else {
                        s = ga.terms.front().second.sign();
                    }
                    bool ok = false;
                    switch (rel) {
                        case Rel::LT: ok = s == Cmp::Less; break;
                        case Rel::LE: ok = s != Cmp::Greater; break;
                        case Rel::EQ: ok = s == Cmp::Equal; break;
                        case Rel::GE: ok = s != Cmp::Less; break;
                        case Rel::GT: ok = s == Cmp::Greater; break;
                    }
                    if (!ok) {
                        all = false;
                        break;
                    }
                }
                if (all) return expand_expr(c.value, var, target);
            }
            return AE{{}, std::nullopt, ExponentGroup::rationals()};
        }
    }
    throw domain_error("unhandled expression kind in expansion");
}

// Polynomial in (log x, X) with expansion coefficients.
using LogPoly = std::map<std::pair<unsigned, unsigned>, AE>;

void lp_add_to(LogPoly& p, const std::pair<unsigned, unsigned>& key, const AE& a) {
    auto it = p.find(key);
    if (it == p.end())
        p.emplace(key, a);
    else
        it->second = ae_add(it->second, a);
}

LogPoly lp_mul(const LogPoly& a, const LogPoly& b) {
    LogPoly r;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b)
            lp_add_to(r, {ka.first + kb.first, ka.second + kb.second}, ae_mul(va, vb));
    return r;
}

// Expansion of an extended-log factor log(g(x)) at infinity.
LogPoly expand_log_factor(const Expr& gexpr, size_t var, const Rat& target, const GroupPtr& g) {
    AE a = expand_expr(gexpr, var, target);
    if (a.terms.empty()) throw domain_error("log of an ultimately zero argument");
    auto [e0, c0] = a.terms.front();
    if (c0.sign() != Cmp::Greater)
        throw domain_error("log of an ultimately non-positive argument");
    // g = c0 x^(-e0) (1 + w):  log g = -e0 log x + extended_log(c0) + L(w).
    LogPoly r;
    if (e0 != 0)
        lp_add_to(r, {1, 0}, ae_const(g, Series::rational(-e0, g)));
    AlgebraElement lc = extended_log(c0, default_target(g));
    if (!lc.coeff(0).provably_zero()) lp_add_to(r, {0, 0}, ae_const(g, lc.coeff(0)));
    if (lc.coeffs().size() > 1 && !lc.coeff(1).provably_zero())
        lp_add_to(r, {0, 1}, ae_const(g, lc.coeff(1)));
    AE lead_inv = ae_shift(ae_const(g, c0.inv(default_target(g))), -e0);
    AE w = ae_add(ae_mul(a, lead_inv), ae_neg(ae_one(g)));
    if (!w.terms.empty()) {
        Rat rho = w.terms.front().first;
        if (rho <= 0) throw precision_exhausted("log unit part did not cancel exactly");
        AE pw = ae_one(g);
        AE wt = ae_truncate(w, target);
        AE acc{{}, std::nullopt, g};
        Rat reached(0);
        unsigned long j = 0;
        while (reached < target) {
            ++j;
            pw = ae_truncate(ae_mul(pw, wt), target);
            if (pw.terms.empty()) {
                acc = ae_add(acc, pw);
                break;
            }
            acc = ae_add(acc, ae_scale(pw, Series::constant(Constant(Rat(j % 2 == 1 ? 1 : -1,
                                                                         static_cast<long>(j))),
                                                            g)));
            reached += rho;
        }
        lp_add_to(r, {0, 0}, acc);
    } else if (w.known_below) {
        lp_add_to(r, {0, 0}, AE{{}, w.known_below, g});
    }
    return r;
}

LogPoly expand_constructible(const ConstructibleExpr& f, size_t var, const Rat& target) {
    LogPoly total;
    const GroupPtr& g = f.group();
    for (const auto& t : f.terms()) {
        LogPoly term;
        lp_add_to(term, {0, t.xpow}, expand_expr(t.coeff, var, target));
        for (const auto& larg : t.logs) {
            LogPoly lf = expand_log_factor(larg, var, target, g);
            term = lp_mul(term, lf);
        }
        for (const auto& [k, v] : term) lp_add_to(total, k, v);
    }
    return total;
}

} // namespace

SimpleDescription simple_description(const ConstructibleExpr& f, size_t var) {
    LogPoly lp = expand_constructible(f, var, kXiTarget);
    SimpleDescription sd;
    sd.exact = true;
    std::optional<Rat> worst_kb;
    for (const auto& [key, ae] : lp) {
        for (const auto& [q, c] : ae.terms) {
            SimpleDescription::Term t;
            t.sigma1 = -q;
            t.sigma2 = key.first;
            t.sigma3 = key.second;
            t.limit_value = c;
            sd.terms.push_back(std::move(t));
        }
        if (ae.known_below) {
            sd.exact = false;
            worst_kb = min_kb(worst_kb, *ae.known_below);
        }
    }
    sd.known_above = worst_kb ? -*worst_kb : Rat(0);
    std::sort(sd.terms.begin(), sd.terms.end(), [](const auto& a, const auto& b) {
        if (a.sigma1 != b.sigma1) return a.sigma1 > b.sigma1;
        if (a.sigma2 != b.sigma2) return a.sigma2 > b.sigma2;
        return a.sigma3 > b.sigma3;
    });
    return sd;
}

LimitResult limit_at_infinity(const ConstructibleExpr& f, size_t var) {
    SimpleDescription sd = simple_description(f, var);
    const GroupPtr& g = f.group();
    auto tail_safe = [&]() {
        // The unknown tail (sigma1 <= known_above) must vanish at infinity.
        return sd.exact || sd.known_above < 0;
    };
    if (sd.terms.empty()) {
        if (tail_safe()) return {LimitResult::Finite, AlgebraElement(g)};
        throw precision_exhausted("limit: everything cancels within the expansion depth");
    }
    Rat q_max = sd.terms.front().sigma1;
    unsigned n_max = 0;
    for (const auto& t : sd.terms)
        if (t.sigma1 == q_max) n_max = std::max(n_max, t.sigma2);
    if (q_max < 0) {
        if (tail_safe()) return {LimitResult::Finite, AlgebraElement(g)};
        throw precision_exhausted("limit: tail knowledge insufficient");
    }
    if (q_max == 0 && n_max == 0) {
        if (!tail_safe())
            throw precision_exhausted("limit: tail knowledge insufficient");
        std::vector<Series> coeffs;
        for (const auto& t : sd.terms) {
            if (!(t.sigma1 == 0 && t.sigma2 == 0)) continue;
            while (coeffs.size() <= t.sigma3) coeffs.push_back(Series(g));
            coeffs[t.sigma3] = coeffs[t.sigma3] + t.limit_value;
        }
        return {LimitResult::Finite, AlgebraElement::from_coeffs(g, std::move(coeffs))};
    }
    if (q_max > 0) {
        // Dominant coefficient sum over X powers decides the sign.
        std::vector<Series> coeffs;
        for (const auto& t : sd.terms) {
            if (!(t.sigma1 == q_max && t.sigma2 == n_max)) continue;
            while (coeffs.size() <= t.sigma3) coeffs.push_back(Series(g));
            coeffs[t.sigma3] = coeffs[t.sigma3] + t.limit_value;
        }
        AlgebraElement dom = AlgebraElement::from_coeffs(g, std::move(coeffs));
        Cmp s = dom.sign();
        if (s == Cmp::Equal) throw precision_exhausted("dominant coefficient cancels");
        return {s == Cmp::Greater ? LimitResult::PlusInfinity : LimitResult::MinusInfinity,
                AlgebraElement(g)};
    }
    // q_max = 0, n_max > 0: (log x)-driven divergence. The values grow beyond
    // every element of degree <= deg but stay below X^(deg+1): no limit in
    // P[X] and not +-infinity either.
    return {LimitResult::NoLimit, AlgebraElement(g)};
}

LimitResult limit_at_point(const ConstructibleExpr& f, const Series& a, Side side, size_t var) {
    // x := a + 1/u (right) or a - 1/u (left), u -> infinity.
    Expr u = Expr::var(var);
    Expr repl = side == Side::Right
                    ? Expr::constant(a) + Expr::rational(Rat(1)) / u
                    : Expr::constant(a) - Expr::rational(Rat(1)) / u;
    return limit_at_infinity(f.substitute(var, repl), var);
}

std::vector<ConstructibleExpr> extract_coefficients(const ConstructibleExpr& f,
                                                    const Series& lo, const Series& hi) {
    const GroupPtr& g = f.group();
    std::vector<Series> samples{lo, (lo + hi).scale(Constant(Rat(1, 2))), hi};
    ConstructibleExpr total(g);
    for (const auto& t : f.terms()) {
        ConstructibleExpr term = ConstructibleExpr::from_expr(t.coeff, g);
        for (unsigned i = 0; i < t.xpow; ++i) term = term * ConstructibleExpr::X(g);
        for (const auto& larg : t.logs) {
            // Valuation profile of the argument on K, sampled.
            std::optional<Exponent> gamma;
            bool uniform = true;
            for (const auto& s : samples) {
                Series gv = larg.eval({s});
                auto o = gv.ord();
                if (!o) throw domain_error("extraction failed: log argument vanishes on K");
                if (!gamma)
                    gamma = *o;
                else if (!(*gamma == *o))
                    uniform = false;
            }
            if (!uniform)
                throw domain_error("extraction failed: log argument has a non-uniform "
                                   "valuation profile on K; use pointwise extraction");
            ConstructibleExpr piece(g);
            if (gamma->is_zero()) {
                piece = ConstructibleExpr::log_of(larg, g);
            } else {
                // log g = -embed(gamma) X + log(t^-gamma * g) on the cell.
                Series tpow = Series::t_power(-*gamma);
                piece = ConstructibleExpr::X(g).scale(Expr::constant(
                            Series::constant(-gamma->embed(), g))) +
                        ConstructibleExpr::log_of(Expr::constant(tpow) * larg, g);
            }
            term = term * piece;
        }
        total = total + term;
    }
    // Collect by X power.
    unsigned maxpow = 0;
    for (const auto& t : total.terms()) maxpow = std::max(maxpow, t.xpow);
    std::vector<ConstructibleExpr> out(maxpow + 1, ConstructibleExpr(g));
    for (const auto& t : total.terms()) {
        CTerm flat = t;
        flat.xpow = 0;
        out[t.xpow] = out[t.xpow] + ConstructibleExpr::from_terms(g, {flat});
    }
    return out;
}

ConstructibleExpr convolve(const PiecewisePoly& g, const Series& h) {
    if (h.sign() != Cmp::Greater) throw domain_error("convolution scale h must be positive");
    GroupPtr grp = h.group();
    // S_h g(x) = sum over pieces of integral_lo^hi p(s) Phi_h(s - x) ds,
    // with Phi_h(u) = 1/(pi h (1 + (u/h)^2)). x is variable 0, s variable 1.
    Expr x = Expr::var(0);
    Expr s = Expr::var(1);
    Expr hval = Expr::constant(h);
    Expr pi_c = Expr::constant(Series::constant(Constant::pi(), grp));
    Expr u = (s - x) / hval;
    Expr kernel = Expr::rational(Rat(1)) / (pi_c * hval * (Expr::rational(Rat(1)) + u * u));
    ConstructibleExpr acc(grp);
    for (const auto& piece : g.pieces) {
        Expr integrand = piece.poly.substitute(0, s) * kernel;
        ConstructibleExpr anti = antiderivative(integrand, 1);
        ConstructibleExpr at_hi = anti.substitute(1, Expr::constant(piece.hi));
        ConstructibleExpr at_lo = anti.substitute(1, Expr::constant(piece.lo));
        acc = acc + (at_hi - at_lo);
    }
    return acc;
}

} // namespace hm
