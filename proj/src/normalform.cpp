#include "hahnmeasure/normalform.hpp"

#include <algorithm>
#include <numeric>

namespace hm {

namespace {

using Mono = NormalForm::Mono;
using Poly = NormalForm::Poly;

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i >= a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

void poly_insert(Poly& p, const Mono& m, const Series& c) {
    if (c.provably_zero()) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.provably_zero()) p.erase(it);
    }
}

bool poly_equal(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return false;
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!(ia->second == ib->second)) return false;
    }
    return true;
}

bool poly_is_one(const Poly& p) {
    if (p.size() != 1) return false;
    const auto& [m, c] = *p.begin();
    return m.empty() && c.is_exact() && c.terms().size() == 1 && c.terms()[0].exp.is_zero() &&
           c.terms()[0].coeff.is_one();
}

} // namespace

NormalForm::NormalForm(GroupPtr group) : group_(std::move(group)) {}

NormalForm::Poly NormalForm::poly_const(Series s) const {
    Poly p;
    poly_insert(p, {}, s);
    return p;
}

NormalForm::Poly NormalForm::poly_add(const Poly& a, const Poly& b) const {
    Poly r = a;
    for (const auto& [m, c] : b) poly_insert(r, m, c);
    return r;
}

NormalForm::Poly NormalForm::poly_neg(const Poly& a) const {
    Poly r;
    for (const auto& [m, c] : a) r.emplace(m, -c);
    return r;
}

NormalForm::Poly NormalForm::poly_mul(const Poly& a, const Poly& b) {
    Poly resolved;
    Poly den_mult_total; // should stay 1: canonical inputs keep exponents < m
    poly_insert(den_mult_total, {}, Series::rational(Rat(1), group_));
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Poly den_mult;
            poly_insert(den_mult, {}, Series::rational(Rat(1), group_));
            insert_term(resolved, den_mult, ca * cb, mono_mul(ma, mb));
            if (!poly_is_one(den_mult))
                throw unsupported_integrand("nested radical reduction outside the fragment");
        }
    }
    return resolved;
}

unsigned NormalForm::atom_slot(Atom atom) {
    for (size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& ex = atoms_[i];
        if (ex.kind != atom.kind || ex.root != atom.root) continue;
        if (atom.kind == Atom::VarRoot) {
            if (ex.var == atom.var) return kAtomBase + static_cast<unsigned>(i);
            continue;
        }
        // Same value test by cross multiplication: n1 d2 == n2 d1.
        Poly lhs = poly_mul(ex.num, atom.den);
        Poly rhs = poly_mul(atom.num, ex.den);
        if (poly_equal(lhs, rhs)) return kAtomBase + static_cast<unsigned>(i);
    }
    atoms_.push_back(std::move(atom));
    return kAtomBase + static_cast<unsigned>(atoms_.size() - 1);
}

void NormalForm::scan_var_roots(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::PowQ:
            if (e.child(0).kind() == ExprKind::Var && !is_integer(e.pow_exponent())) {
                unsigned long d = static_cast<unsigned long>(e.pow_exponent().get_den().get_ui());
                auto& l = var_roots_[e.child(0).var_index()];
                l = l == 0 ? d : std::lcm(l, d);
            }
            scan_var_roots(e.child(0));
            break;
        case ExprKind::Sqrt:
            if (e.child(0).kind() == ExprKind::Var) {
                auto& l = var_roots_[e.child(0).var_index()];
                l = l == 0 ? 2 : std::lcm(l, 2ul);
            }
            scan_var_roots(e.child(0));
            break;
        case ExprKind::Const:
        case ExprKind::Var:
            break;
        case ExprKind::Piecewise:
            for (const auto& c : e.cases()) {
                for (const auto& [g, rel] : c.conds) scan_var_roots(g);
                scan_var_roots(c.value);
            }
            break;
        default:
            for (size_t i = 0; i < e.child_count(); ++i) scan_var_roots(e.child(i));
            break;
    }
}

void NormalForm::insert_term(Poly& num_out, Poly& den_mult, Series coeff, Mono mono) {
    // Apply root-atom reductions until all relation exponents are < m.
    for (size_t i = 0; i < mono.size(); ++i) {
        auto [slot, e] = mono[i];
        if (slot < kAtomBase) continue;
        const Atom& at = atoms_[slot - kAtomBase];
        if (at.kind == Atom::Arctan || at.kind == Atom::VarRoot) continue;
        unsigned long m = at.root;
        if (e < m) continue;
        unsigned long k = e / m;
        unsigned rem = static_cast<unsigned>(e % m);
        Mono rest = mono;
        if (rem == 0)
            rest.erase(rest.begin() + static_cast<long>(i));
        else
            rest[i].second = rem;
        // coeff * A^e = coeff * (num/den)^k * A^rem
        Poly factor = poly_const(Series::rational(Rat(1), group_));
        Poly dfac = poly_const(Series::rational(Rat(1), group_));
        for (unsigned long j = 0; j < k; ++j) {
            factor = poly_mul(factor, at.num);
            dfac = poly_mul(dfac, at.den);
        }
        Poly base;
        poly_insert(base, rest, coeff);
        Poly val = poly_mul(base, factor);
        Poly newden = poly_mul(den_mult, dfac);
        den_mult = std::move(newden);
        for (const auto& [m2, c2] : val) {
            Poly dm2 = poly_const(Series::rational(Rat(1), group_));
            insert_term(num_out, dm2, c2, m2);
            if (!poly_is_one(dm2)) {
                // Nested reductions from the factor's atoms; fold the extra
                // denominator in.
                den_mult = poly_mul(den_mult, dm2);
            }
        }
        return;
    }
    poly_insert(num_out, mono, coeff);
}

NormalForm::Fraction NormalForm::add(const Fraction& a, const Fraction& b) {
    if (poly_equal(a.den, b.den)) return {poly_add(a.num, b.num), a.den};
    return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)), poly_mul(a.den, b.den)};
}

NormalForm::Fraction NormalForm::mul(const Fraction& a, const Fraction& b) {
    return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}

NormalForm::Fraction NormalForm::div(const Fraction& a, const Fraction& b) {
    if (b.num.empty()) throw domain_error("division by the zero polynomial");
    return {poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
}

NormalForm::Fraction NormalForm::pow_int(Fraction base, long n) {
    Fraction r{poly_const(Series::rational(Rat(1), group_)),
               poly_const(Series::rational(Rat(1), group_))};
    bool invert = n < 0;
    unsigned long k = static_cast<unsigned long>(invert ? -n : n);
    for (unsigned long i = 0; i < k; ++i) r = mul(r, base);
    if (invert) std::swap(r.num, r.den);
    if (r.den.empty()) throw domain_error("division by the zero polynomial");
    return r;
}

NormalForm::Fraction NormalForm::build_rec(const Expr& e) {
    Fraction one{poly_const(Series::rational(Rat(1), group_)),
                 poly_const(Series::rational(Rat(1), group_))};
    switch (e.kind()) {
        case ExprKind::Const:
            return {poly_const(e.const_value()), one.den};
        case ExprKind::Var: {
            size_t v = e.var_index();
            auto it = var_roots_.find(v);
            Mono m;
            if (it != var_roots_.end() && it->second > 1) {
                Atom at;
                at.kind = Atom::VarRoot;
                at.var = v;
                at.root = it->second;
                unsigned slot = atom_slot(std::move(at));
                m.emplace_back(slot, static_cast<unsigned>(it->second));
            } else {
                m.emplace_back(static_cast<unsigned>(v), 1);
            }
            Poly p;
            poly_insert(p, m, Series::rational(Rat(1), group_));
            return {std::move(p), one.den};
        }
        case ExprKind::Add:
            return add(build_rec(e.child(0)), build_rec(e.child(1)));
        case ExprKind::Sub: {
            Fraction rhs = build_rec(e.child(1));
            return add(build_rec(e.child(0)), {poly_neg(rhs.num), rhs.den});
        }
        case ExprKind::Mul:
            return mul(build_rec(e.child(0)), build_rec(e.child(1)));
        case ExprKind::Div:
            return div(build_rec(e.child(0)), build_rec(e.child(1)));
        case ExprKind::Neg: {
            Fraction a = build_rec(e.child(0));
            return {poly_neg(a.num), a.den};
        }
        case ExprKind::PowQ: {
            const Rat& q = e.pow_exponent();
            if (is_integer(q)) return pow_int(build_rec(e.child(0)), q.get_num().get_si());
            long a = static_cast<long>(q.get_num().get_si());
            unsigned long b = q.get_den().get_ui();
            if (e.child(0).kind() == ExprKind::Var) {
                size_t v = e.child(0).var_index();
                unsigned long L = var_roots_.at(v);
                Atom at;
                at.kind = Atom::VarRoot;
                at.var = v;
                at.root = L;
                unsigned slot = atom_slot(std::move(at));
                long scaled = a * static_cast<long>(L / b);
                Mono m;
                Poly p;
                if (scaled >= 0) {
                    if (scaled > 0) m.emplace_back(slot, static_cast<unsigned>(scaled));
                    poly_insert(p, m, Series::rational(Rat(1), group_));
                    return {std::move(p), one.den};
                }
                m.emplace_back(slot, static_cast<unsigned>(-scaled));
                poly_insert(p, m, Series::rational(Rat(1), group_));
                return {one.num, std::move(p)};
            }
            Fraction base = build_rec(e.child(0));
            Atom at;
            at.kind = Atom::Root;
            at.root = b;
            at.num = base.num;
            at.den = base.den;
            unsigned slot = atom_slot(std::move(at));
            Fraction r = one;
            Mono m;
            m.emplace_back(slot, static_cast<unsigned>(std::abs(a)));
            Poly p;
            poly_insert(p, m, Series::rational(Rat(1), group_));
            if (a >= 0)
                r.num = std::move(p);
            else
                r.den = std::move(p);
            // Apply reduction in case |a| >= b.
            Poly resolved;
            Poly den_mult = poly_const(Series::rational(Rat(1), group_));
            for (const auto& [mm, cc] : (a >= 0 ? r.num : r.den)) {
                insert_term(resolved, den_mult, cc, mm);
            }
            if (a >= 0) {
                r.num = std::move(resolved);
                r.den = poly_mul(r.den, den_mult);
            } else {
                r.den = std::move(resolved);
                r.num = poly_mul(r.num, den_mult);
            }
            return r;
        }
        case ExprKind::Sqrt: {
            Expr half_pow = e.child(0).pow(Rat(1, 2));
            return build_rec(half_pow);
        }
        case ExprKind::Arctan: {
            Fraction arg = build_rec(e.child(0));
            Atom at;
            at.kind = Atom::Arctan;
            at.num = arg.num;
            at.den = arg.den;
            unsigned slot = atom_slot(std::move(at));
            Mono m;
            m.emplace_back(slot, 1);
            Poly p;
            poly_insert(p, m, Series::rational(Rat(1), group_));
            return {std::move(p), one.den};
        }
        case ExprKind::Abs:
            throw unsupported_integrand("abs in a normal form: resolve cells first");
        case ExprKind::Piecewise:
            throw unsupported_integrand("piecewise in a normal form: resolve cells first");
    }
    throw domain_error("unhandled expression kind in normal form");
}

NormalForm::Fraction NormalForm::build(const Expr& e) {
    scan_var_roots(e);
    return build_rec(e);
}

bool NormalForm::provably_zero(const Expr& e) {
    Fraction f = build(e);
    for (const auto& [m, c] : f.num) {
        if (!c.terms().empty()) return false;
        if (!c.is_exact())
            throw precision_exhausted("zero test met a coefficient known only up to precision");
    }
    return f.num.empty();
}

bool NormalForm::provably_equal(const Expr& a, const Expr& b) { return provably_zero(a - b); }

bool provably_zero(const Expr& e, GroupPtr group) {
    NormalForm nf(std::move(group));
    return nf.provably_zero(e);
}

bool provably_equal(const Expr& a, const Expr& b, GroupPtr group) {
    NormalForm nf(std::move(group));
    return nf.provably_equal(a, b);
}

} // namespace hm
