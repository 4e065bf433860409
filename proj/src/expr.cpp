#include "hahnmeasure/expr.hpp"

#include <cmath>

namespace hm {

struct ExprNode {
    ExprKind kind = ExprKind::Const;
    Series value;                  // Const
    size_t var = 0;                // Var
    std::vector<Expr> children;    // operands
    Rat exponent;                  // PowQ
    std::vector<ExprCase> cases;   // Piecewise
};

namespace {

Expr make_node(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }

bool is_zero_const(const Expr& e) {
    return e.kind() == ExprKind::Const && e.const_value().provably_zero();
}

bool is_one_const(const Expr& e) {
    if (e.kind() != ExprKind::Const) return false;
    const Series& s = e.const_value();
    return s.is_exact() && s.terms().size() == 1 && s.terms()[0].exp.is_zero() &&
           s.terms()[0].coeff.is_one();
}

} // namespace

Expr::Expr() : node_(std::make_shared<const ExprNode>()) {}
Expr::Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

Expr Expr::constant(Series s) {
    ExprNode n;
    n.kind = ExprKind::Const;
    n.value = std::move(s);
    return make_node(std::move(n));
}

Expr Expr::rational(const Rat& q, GroupPtr group) {
    return constant(Series::rational(q, std::move(group)));
}

Expr Expr::var(size_t index) {
    ExprNode n;
    n.kind = ExprKind::Var;
    n.var = index;
    return make_node(std::move(n));
}

Expr Expr::operator+(const Expr& o) const {
    if (is_zero_const(*this)) return o;
    if (is_zero_const(o)) return *this;
    if (kind() == ExprKind::Const && o.kind() == ExprKind::Const)
        return constant(const_value() + o.const_value());
    ExprNode n;
    n.kind = ExprKind::Add;
    n.children = {*this, o};
    return make_node(std::move(n));
}

Expr Expr::operator-(const Expr& o) const {
    if (is_zero_const(o)) return *this;
    if (kind() == ExprKind::Const && o.kind() == ExprKind::Const)
        return constant(const_value() - o.const_value());
    ExprNode n;
    n.kind = ExprKind::Sub;
    n.children = {*this, o};
    return make_node(std::move(n));
}

Expr Expr::operator*(const Expr& o) const {
    if (is_zero_const(*this) || is_zero_const(o)) return Expr();
    if (is_one_const(*this)) return o;
    if (is_one_const(o)) return *this;
    if (kind() == ExprKind::Const && o.kind() == ExprKind::Const)
        return constant(const_value() * o.const_value());
    ExprNode n;
    n.kind = ExprKind::Mul;
    n.children = {*this, o};
    return make_node(std::move(n));
}

Expr Expr::operator/(const Expr& o) const {
    if (is_one_const(o)) return *this;
    if (is_zero_const(*this) && o.kind() == ExprKind::Const &&
        !o.const_value().provably_zero())
        return Expr();
    if (kind() == ExprKind::Const && o.kind() == ExprKind::Const) {
        // Fold when the divisor inverts exactly (single-term series).
        const Series& d = o.const_value();
        if (d.is_exact() && d.terms().size() == 1)
            return constant(const_value() * d.inv(default_target(d.group())));
    }
    ExprNode n;
    n.kind = ExprKind::Div;
    n.children = {*this, o};
    return make_node(std::move(n));
}

Expr Expr::operator-() const {
    if (kind() == ExprKind::Const) return constant(-const_value());
    ExprNode n;
    n.kind = ExprKind::Neg;
    n.children = {*this};
    return make_node(std::move(n));
}

Expr Expr::pow(const Rat& q) const {
    if (q == 0) return rational(Rat(1));
    if (q == 1) return *this;
    ExprNode n;
    n.kind = ExprKind::PowQ;
    n.children = {*this};
    n.exponent = q;
    return make_node(std::move(n));
}

Expr Expr::sqrt(const Expr& a) {
    ExprNode n;
    n.kind = ExprKind::Sqrt;
    n.children = {a};
    return make_node(std::move(n));
}

Expr Expr::abs(const Expr& a) {
    ExprNode n;
    n.kind = ExprKind::Abs;
    n.children = {a};
    return make_node(std::move(n));
}

Expr Expr::arctan(const Expr& a) {
    ExprNode n;
    n.kind = ExprKind::Arctan;
    n.children = {a};
    return make_node(std::move(n));
}

Expr Expr::piecewise(std::vector<ExprCase> cases) {
    ExprNode n;
    n.kind = ExprKind::Piecewise;
    n.cases = std::move(cases);
    return make_node(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const Series& Expr::const_value() const { return node_->value; }
size_t Expr::var_index() const { return node_->var; }
const Expr& Expr::child(size_t i) const { return node_->children.at(i); }
size_t Expr::child_count() const { return node_->children.size(); }
const Rat& Expr::pow_exponent() const { return node_->exponent; }
const std::vector<ExprCase>& Expr::cases() const { return node_->cases; }

bool Expr::depends_on(size_t var) const {
    switch (kind()) {
        case ExprKind::Const:
            return false;
        case ExprKind::Var:
            return node_->var == var;
        case ExprKind::Piecewise:
            for (const auto& c : node_->cases) {
                for (const auto& [g, rel] : c.conds)
                    if (g.depends_on(var)) return true;
                if (c.value.depends_on(var)) return true;
            }
            return false;
        default:
            for (const auto& ch : node_->children)
                if (ch.depends_on(var)) return true;
            return false;
    }
}

size_t Expr::max_var() const {
    switch (kind()) {
        case ExprKind::Const:
            return 0;
        case ExprKind::Var:
            return node_->var + 1;
        case ExprKind::Piecewise: {
            size_t m = 0;
            for (const auto& c : node_->cases) {
                for (const auto& [g, rel] : c.conds) m = std::max(m, g.max_var());
                m = std::max(m, c.value.max_var());
            }
            return m;
        }
        default: {
            size_t m = 0;
            for (const auto& ch : node_->children) m = std::max(m, ch.max_var());
            return m;
        }
    }
}

namespace {

bool guard_holds(Cmp sign, Rel rel) {
    switch (rel) {
        case Rel::LT: return sign == Cmp::Less;
        case Rel::LE: return sign != Cmp::Greater;
        case Rel::EQ: return sign == Cmp::Equal;
        case Rel::GE: return sign != Cmp::Less;
        case Rel::GT: return sign == Cmp::Greater;
    }
    return false;
}

} // namespace

Series Expr::eval(const std::vector<Series>& point, const Exponent& target) const {
    switch (kind()) {
        case ExprKind::Const:
            return node_->value;
        case ExprKind::Var:
            if (node_->var >= point.size()) throw domain_error("unbound variable in eval");
            return point.at(node_->var);
        case ExprKind::Add:
            return child(0).eval(point, target) + child(1).eval(point, target);
        case ExprKind::Sub:
            return child(0).eval(point, target) - child(1).eval(point, target);
        case ExprKind::Mul:
            return child(0).eval(point, target) * child(1).eval(point, target);
        case ExprKind::Div: {
            Series den = child(1).eval(point, target);
            if (den.provably_zero()) throw domain_error("division by zero in eval");
            return child(0).eval(point, target) * den.inv(target);
        }
        case ExprKind::Neg:
            return -child(0).eval(point, target);
        case ExprKind::PowQ:
            return child(0).eval(point, target).pow_rat(node_->exponent, target);
        case ExprKind::Sqrt: {
            Series a = child(0).eval(point, target);
            if (a.provably_zero()) return Series(a.group());
            if (a.sign() == Cmp::Less) throw domain_error("sqrt of a negative value");
            return a.nth_root(2, target);
        }
        case ExprKind::Abs: {
            Series a = child(0).eval(point, target);
            if (a.provably_zero()) return a;
            return a.sign() == Cmp::Less ? -a : a;
        }
        case ExprKind::Arctan:
            return arctan_series(child(0).eval(point, target), target);
        case ExprKind::Piecewise: {
            for (const auto& c : node_->cases) {
                bool all = true;
                for (const auto& [g, rel] : c.conds) {
                    Series gv = g.eval(point, target);
                    Cmp s = gv.provably_zero() ? Cmp::Equal : gv.sign();
                    if (!guard_holds(s, rel)) {
                        all = false;
                        break;
                    }
                }
                if (all) return c.value.eval(point, target);
            }
            if (point.empty()) return Series();
            return Series(point[0].group());
        }
    }
    throw domain_error("unhandled expression kind");
}

Series Expr::eval(const std::vector<Series>& point) const {
    GroupPtr g = point.empty() ? ExponentGroup::rationals() : point[0].group();
    return eval(point, default_target(g));
}

double Expr::eval_double(const std::vector<double>& point) const {
    switch (kind()) {
        case ExprKind::Const:
            throw domain_error("eval_double needs instantiation of series constants");
        case ExprKind::Var:
            return point.at(node_->var);
        default:
            break;
    }
    throw domain_error("eval_double: use instantiate_expr");
}

Expr Expr::substitute(size_t var, const Expr& replacement) const {
    switch (kind()) {
        case ExprKind::Const:
            return *this;
        case ExprKind::Var:
            return node_->var == var ? replacement : *this;
        case ExprKind::Add:
            return child(0).substitute(var, replacement) + child(1).substitute(var, replacement);
        case ExprKind::Sub:
            return child(0).substitute(var, replacement) - child(1).substitute(var, replacement);
        case ExprKind::Mul:
            return child(0).substitute(var, replacement) * child(1).substitute(var, replacement);
        case ExprKind::Div:
            return child(0).substitute(var, replacement) / child(1).substitute(var, replacement);
        case ExprKind::Neg:
            return -child(0).substitute(var, replacement);
        case ExprKind::PowQ:
            return child(0).substitute(var, replacement).pow(node_->exponent);
        case ExprKind::Sqrt:
            return sqrt(child(0).substitute(var, replacement));
        case ExprKind::Abs:
            return abs(child(0).substitute(var, replacement));
        case ExprKind::Arctan:
            return arctan(child(0).substitute(var, replacement));
        case ExprKind::Piecewise: {
            std::vector<ExprCase> cs;
            for (const auto& c : node_->cases) {
                ExprCase nc;
                for (const auto& [g, rel] : c.conds)
                    nc.conds.emplace_back(g.substitute(var, replacement), rel);
                nc.value = c.value.substitute(var, replacement);
                cs.push_back(std::move(nc));
            }
            return piecewise(std::move(cs));
        }
    }
    throw domain_error("unhandled expression kind");
}

Expr Expr::differentiate(size_t var) const {
    switch (kind()) {
        case ExprKind::Const:
            return Expr();
        case ExprKind::Var:
            return node_->var == var ? rational(Rat(1)) : Expr();
        case ExprKind::Add:
            return child(0).differentiate(var) + child(1).differentiate(var);
        case ExprKind::Sub:
            return child(0).differentiate(var) - child(1).differentiate(var);
        case ExprKind::Mul:
            return child(0).differentiate(var) * child(1) + child(0) * child(1).differentiate(var);
        case ExprKind::Div: {
            const Expr& u = child(0);
            const Expr& v = child(1);
            return (u.differentiate(var) * v - u * v.differentiate(var)) / (v * v);
        }
        case ExprKind::Neg:
            return -child(0).differentiate(var);
        case ExprKind::PowQ: {
            const Expr& u = child(0);
            const Rat& q = node_->exponent;
            return Expr::rational(q) * u.pow(q - 1) * u.differentiate(var);
        }
        case ExprKind::Sqrt: {
            const Expr& u = child(0);
            return u.differentiate(var) / (rational(Rat(2)) * sqrt(u));
        }
        case ExprKind::Abs: {
            // sign(u) * u' as a piecewise expression; the kink is a cell
            // boundary.
            const Expr& u = child(0);
            Expr du = u.differentiate(var);
            std::vector<ExprCase> cs;
            cs.push_back({{{u, Rel::GT}}, du});
            cs.push_back({{{u, Rel::LT}}, -du});
            return piecewise(std::move(cs));
        }
        case ExprKind::Arctan: {
            const Expr& u = child(0);
            return u.differentiate(var) / (rational(Rat(1)) + u * u);
        }
        case ExprKind::Piecewise: {
            std::vector<ExprCase> cs;
            for (const auto& c : node_->cases) {
                ExprCase nc;
                nc.conds = c.conds;
                nc.value = c.value.differentiate(var);
                cs.push_back(std::move(nc));
            }
            return piecewise(std::move(cs));
        }
    }
    throw domain_error("unhandled expression kind");
}

std::string Expr::str(const std::vector<std::string>& names) const {
    auto name = [&](size_t i) {
        if (i < names.size()) return names[i];
        if (i == 0) return std::string("x");
        return "x" + std::to_string(i);
    };
    switch (kind()) {
        case ExprKind::Const: {
            std::string s = node_->value.str();
            bool atomic = s.find_first_of("+- ") == std::string::npos ||
                          (s.size() > 0 && s[0] == '-' &&
                           s.find_first_of("+- ", 1) == std::string::npos);
            return atomic ? s : "(" + s + ")";
        }
        case ExprKind::Var:
            return name(node_->var);
        case ExprKind::Add:
            return "(" + child(0).str(names) + " + " + child(1).str(names) + ")";
        case ExprKind::Sub:
            return "(" + child(0).str(names) + " - " + child(1).str(names) + ")";
        case ExprKind::Mul:
            return child(0).str(names) + "*" + child(1).str(names);
        case ExprKind::Div:
            return child(0).str(names) + "/" + child(1).str(names);
        case ExprKind::Neg:
            return "-" + child(0).str(names);
        case ExprKind::PowQ: {
            std::string e = rat_string(node_->exponent);
            return child(0).str(names) + "^(" + e + ")";
        }
        case ExprKind::Sqrt:
            return "sqrt(" + child(0).str(names) + ")";
        case ExprKind::Abs:
            return "|" + child(0).str(names) + "|";
        case ExprKind::Arctan:
            return "arctan(" + child(0).str(names) + ")";
        case ExprKind::Piecewise: {
            std::string out = "piecewise(";
            for (size_t i = 0; i < node_->cases.size(); ++i) {
                if (i) out += "; ";
                const auto& c = node_->cases[i];
                for (size_t j = 0; j < c.conds.size(); ++j) {
                    if (j) out += " and ";
                    const char* rel = nullptr;
                    switch (c.conds[j].second) {
                        case Rel::LT: rel = " < 0"; break;
                        case Rel::LE: rel = " <= 0"; break;
                        case Rel::EQ: rel = " = 0"; break;
                        case Rel::GE: rel = " >= 0"; break;
                        case Rel::GT: rel = " > 0"; break;
                    }
                    out += c.conds[j].first.str(names) + rel;
                }
                out += " -> " + c.value.str(names);
            }
            return out + ")";
        }
    }
    return "?";
}

// --- univariate rational view ------------------------------------------------

namespace {

using UPoly = std::vector<Expr>;

UPoly upoly_zero() { return {}; }
UPoly upoly_const(const Expr& e) { return {e}; }

void upoly_trim(UPoly& p) {
    while (!p.empty() && is_zero_const(p.back())) p.pop_back();
}

UPoly upoly_add(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()), Expr());
    for (size_t i = 0; i < r.size(); ++i) {
        Expr s;
        if (i < a.size()) s = s + a[i];
        if (i < b.size()) s = s + b[i];
        r[i] = s;
    }
    upoly_trim(r);
    return r;
}

UPoly upoly_neg(const UPoly& a) {
    UPoly r;
    r.reserve(a.size());
    for (const auto& e : a) r.push_back(-e);
    return r;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, Expr());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    upoly_trim(r);
    return r;
}

struct URat {
    UPoly num;
    UPoly den; // den nonempty
};

std::optional<URat> to_urat(const Expr& e, size_t var) {
    if (!e.depends_on(var)) return URat{upoly_const(e), upoly_const(Expr::rational(Rat(1)))};
    switch (e.kind()) {
        case ExprKind::Var:
            return URat{{Expr(), Expr::rational(Rat(1))}, upoly_const(Expr::rational(Rat(1)))};
        case ExprKind::Add: {
            auto a = to_urat(e.child(0), var), b = to_urat(e.child(1), var);
            if (!a || !b) return std::nullopt;
            return URat{upoly_add(upoly_mul(a->num, b->den), upoly_mul(b->num, a->den)),
                        upoly_mul(a->den, b->den)};
        }
        case ExprKind::Sub: {
            auto a = to_urat(e.child(0), var), b = to_urat(e.child(1), var);
            if (!a || !b) return std::nullopt;
            return URat{upoly_add(upoly_mul(a->num, b->den), upoly_neg(upoly_mul(b->num, a->den))),
                        upoly_mul(a->den, b->den)};
        }
        case ExprKind::Mul: {
            auto a = to_urat(e.child(0), var), b = to_urat(e.child(1), var);
            if (!a || !b) return std::nullopt;
            return URat{upoly_mul(a->num, b->num), upoly_mul(a->den, b->den)};
        }
        case ExprKind::Div: {
            auto a = to_urat(e.child(0), var), b = to_urat(e.child(1), var);
            if (!a || !b) return std::nullopt;
            if (b->num.empty()) throw domain_error("division by zero polynomial");
            return URat{upoly_mul(a->num, b->den), upoly_mul(a->den, b->num)};
        }
        case ExprKind::Neg: {
            auto a = to_urat(e.child(0), var);
            if (!a) return std::nullopt;
            return URat{upoly_neg(a->num), a->den};
        }
        case ExprKind::PowQ: {
            if (!is_integer(e.pow_exponent())) return std::nullopt;
            long n = e.pow_exponent().get_num().get_si();
            auto a = to_urat(e.child(0), var);
            if (!a) return std::nullopt;
            URat r{upoly_const(Expr::rational(Rat(1))), upoly_const(Expr::rational(Rat(1)))};
            URat base = *a;
            bool invert = n < 0;
            unsigned long k = static_cast<unsigned long>(invert ? -n : n);
            for (unsigned long i = 0; i < k; ++i) {
                r.num = upoly_mul(r.num, base.num);
                r.den = upoly_mul(r.den, base.den);
            }
            if (invert) std::swap(r.num, r.den);
            return r;
        }
        default:
            return std::nullopt;
    }
}

} // namespace

std::optional<UnivariateRational> as_univariate(const Expr& e, size_t var) {
    auto r = to_urat(e, var);
    if (!r) return std::nullopt;
    if (r->den.empty()) throw domain_error("zero denominator in rational view");
    return UnivariateRational{std::move(r->num), std::move(r->den)};
}

} // namespace hm
