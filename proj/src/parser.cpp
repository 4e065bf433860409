#include "hahnmeasure/parser.hpp"

#include <cctype>

namespace hm {

namespace {

// ----- neutral parse tree ----------------------------------------------------

struct PNode;
using PPtr = std::shared_ptr<const PNode>;

struct PNode {
    enum Kind {
        Number,   // rational literal
        Symbol,   // t, X, pi, e, or an identifier (variable)
        Call,     // name(args...)
        Add, Sub, Mul, DivK, NegK, Pow, AbsK,
        BigO,     // O(t^q) marker, used as "+ O(...)"
    } kind;
    Rat number;
    std::string name;
    std::vector<PPtr> args;
    Rat pow_exp; // Pow
    int line = 1, col = 1;
};

PPtr mk(PNode n) { return std::make_shared<const PNode>(std::move(n)); }

struct Lexer {
    std::string_view s;
    size_t i = 0;
    int line = 1, col = 1;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    char get() {
        skip_ws();
        char c = s[i++];
        ++col;
        return c;
    }
    bool accept(char c) {
        if (peek() == c) {
            get();
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c))
            throw syntax_error(std::string("expected '") + c + "' " + what, line, col);
    }
    bool accept_word(const std::string& w) {
        skip_ws();
        if (s.substr(i, w.size()) == w) {
            // word boundary
            size_t j = i + w.size();
            if (j < s.size() &&
                (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                return false;
            i = j;
            col += static_cast<int>(w.size());
            return true;
        }
        return false;
    }
    std::string ident() {
        skip_ws();
        size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
            ++j;
        std::string r(s.substr(i, j - i));
        col += static_cast<int>(j - i);
        i = j;
        return r;
    }
    Rat number() {
        skip_ws();
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) throw syntax_error("expected a number", line, col);
        std::string digits(s.substr(i, j - i));
        col += static_cast<int>(j - i);
        i = j;
        return Rat(Int(digits));
    }
};

struct Parser {
    Lexer lx;

    explicit Parser(const std::string& text) : lx{text} {}

    [[noreturn]] void fail(const std::string& msg) {
        throw syntax_error(msg, lx.line, lx.col);
    }

    // exponent payload after '^': integer, or parenthesized rational.
    Rat parse_rat_exponent() {
        bool paren = lx.accept('(');
        bool neg = lx.accept('-');
        Rat n = lx.number();
        Rat q = n;
        if (lx.accept('/')) q = n / lx.number();
        if (neg) q = -q;
        if (paren) lx.expect(')', "after exponent");
        return q;
    }

    PPtr atom() {
        int line = lx.line, col = lx.col;
        char c = lx.peek();
        if (c == '(') {
            lx.get();
            PPtr e = expr();
            lx.expect(')', "to close parenthesis");
            return e;
        }
        if (c == '|') {
            lx.get();
            PPtr e = expr();
            lx.expect('|', "to close absolute value");
            return mk({PNode::AbsK, {}, "", {e}, {}, line, col});
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rat n = lx.number();
            return mk({PNode::Number, n, "", {}, {}, line, col});
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id = lx.ident();
            if (id == "O") {
                lx.expect('(', "after O");
                PPtr e = expr();
                lx.expect(')', "to close O(...)");
                return mk({PNode::BigO, {}, "O", {e}, {}, line, col});
            }
            if (lx.peek() == '(') {
                lx.get();
                std::vector<PPtr> args;
                if (lx.peek() != ')') {
                    args.push_back(expr());
                    while (lx.accept(',')) args.push_back(expr());
                }
                lx.expect(')', "to close call");
                return mk({PNode::Call, {}, id, std::move(args), {}, line, col});
            }
            return mk({PNode::Symbol, {}, id, {}, {}, line, col});
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    PPtr power() {
        PPtr base = atom();
        if (lx.accept('^')) {
            Rat e = parse_rat_exponent();
            return mk({PNode::Pow, {}, "", {base}, e, base->line, base->col});
        }
        return base;
    }

    PPtr unary() {
        if (lx.accept('-')) {
            PPtr e = unary();
            return mk({PNode::NegK, {}, "", {e}, {}, lx.line, lx.col});
        }
        (void)lx.accept('+');
        return power();
    }

    PPtr term() {
        PPtr a = unary();
        while (true) {
            if (lx.accept('*')) {
                PPtr b = unary();
                a = mk({PNode::Mul, {}, "", {a, b}, {}, a->line, a->col});
            } else if (lx.accept('/')) {
                PPtr b = unary();
                a = mk({PNode::DivK, {}, "", {a, b}, {}, a->line, a->col});
            } else {
                break;
            }
        }
        return a;
    }

    PPtr expr() {
        PPtr a = term();
        while (true) {
            char c = lx.peek();
            if (c == '+') {
                lx.get();
                PPtr b = term();
                a = mk({PNode::Add, {}, "", {a, b}, {}, a->line, a->col});
            } else if (c == '-') {
                lx.get();
                PPtr b = term();
                a = mk({PNode::Sub, {}, "", {a, b}, {}, a->line, a->col});
            } else {
                break;
            }
        }
        return a;
    }

    void expect_end() {
        if (!lx.eof()) fail("trailing input");
    }
};

// ----- lowering ----------------------------------------------------------------

// Lowering to variable-free values (series / algebra elements).
struct ValueLowerer {
    const ParseContext& ctx;

    AlgebraElement lower(const PPtr& n) {
        switch (n->kind) {
            case PNode::Number:
                return AlgebraElement(Series::rational(n->number, ctx.group));
            case PNode::Symbol: {
                if (n->name == "t")
                    return AlgebraElement(
                        Series::t_power(Exponent::rational(Rat(1), ctx.group)));
                if (n->name == "X") return AlgebraElement::X(ctx.group);
                if (n->name == "pi")
                    return AlgebraElement(Series::constant(Constant::pi(), ctx.group));
                if (n->name == "e")
                    return AlgebraElement(Series::constant(Constant::e(), ctx.group));
                if (n->name == "inf" || n->name == "infinity")
                    throw syntax_error("infinity is not a value here", n->line, n->col);
                throw syntax_error("unbound name '" + n->name + "' in a closed expression",
                                   n->line, n->col);
            }
            case PNode::Add:
                return lower(n->args[0]) + lower(n->args[1]);
            case PNode::Sub:
                return lower(n->args[0]) - lower(n->args[1]);
            case PNode::Mul:
                return lower(n->args[0]) * lower(n->args[1]);
            case PNode::DivK: {
                AlgebraElement a = lower(n->args[0]);
                Series b = lower(n->args[1]).as_series();
                return a.scale(b.inv(default_target(ctx.group)));
            }
            case PNode::NegK:
                return -lower(n->args[0]);
            case PNode::Pow: {
                AlgebraElement a = lower(n->args[0]);
                const Rat& q = n->pow_exp;
                if (is_integer(q) && q >= 0 && a.degree_bound() > 0)
                    return a.pow_int(static_cast<unsigned>(q.get_num().get_ui()));
                return AlgebraElement(
                    a.as_series().pow_rat(q, default_target(ctx.group)));
            }
            case PNode::AbsK: {
                AlgebraElement a = lower(n->args[0]);
                return a.sign() == Cmp::Less ? -a : a;
            }
            case PNode::Call: {
                const std::string& f = n->name;
                if (n->args.size() != 1)
                    throw syntax_error("function '" + f + "' takes one argument", n->line,
                                       n->col);
                if (f == "log") return extended_log(lower(n->args[0]).as_series());
                Series x = lower(n->args[0]).as_series();
                const Exponent tgt = default_target(ctx.group);
                if (f == "exp") return AlgebraElement(partial_exp(x, tgt));
                if (f == "arctan" || f == "atan") return AlgebraElement(arctan_series(x, tgt));
                if (f == "arcsin" || f == "asin") return AlgebraElement(arcsin_series(x, tgt));
                if (f == "sqrt") return AlgebraElement(x.nth_root(2, tgt));
                throw syntax_error("unknown function '" + f + "'", n->line, n->col);
            }
            case PNode::BigO:
                throw syntax_error("O(...) only makes sense as a trailing summand", n->line,
                                   n->col);
        }
        throw syntax_error("unhandled node", n->line, n->col);
    }

    // Handle a trailing + O(t^q) marker by truncation.
    AlgebraElement lower_top(const PPtr& n) {
        if (n->kind == PNode::Add && n->args[1]->kind == PNode::BigO) {
            AlgebraElement v = lower_top(n->args[0]);
            const PPtr& o = n->args[1]->args[0];
            // expect t^q inside
            Rat q;
            if (o->kind == PNode::Pow && o->args[0]->kind == PNode::Symbol &&
                o->args[0]->name == "t") {
                q = o->pow_exp;
            } else if (o->kind == PNode::Symbol && o->name == "t") {
                q = Rat(1);
            } else {
                throw syntax_error("O(...) expects a power of t", o->line, o->col);
            }
            Exponent omega = Exponent::rational(q, ctx.group);
            std::vector<Series> coeffs;
            for (const auto& c : v.coeffs()) coeffs.push_back(c.truncate(omega));
            return AlgebraElement::from_coeffs(v.group(), coeffs);
        }
        return lower(n);
    }
};

// Lowering to expressions over variables (escalating to constructible terms).
struct ExprLowerer {
    ParseContext& ctx;
    bool allow_constructible = false;

    size_t var_index(const std::string& name, int line, int col) {
        for (size_t i = 0; i < ctx.variables.size(); ++i)
            if (ctx.variables[i] == name) return i;
        ctx.variables.push_back(name);
        (void)line;
        (void)col;
        return ctx.variables.size() - 1;
    }

    bool closed(const PPtr& n) {
        switch (n->kind) {
            case PNode::Number:
                return true;
            case PNode::Symbol:
                return n->name == "t" || n->name == "pi" || n->name == "e";
            case PNode::Call:
            case PNode::Add:
            case PNode::Sub:
            case PNode::Mul:
            case PNode::DivK:
            case PNode::NegK:
            case PNode::Pow:
            case PNode::AbsK: {
                for (const auto& a : n->args)
                    if (!closed(a)) return false;
                return n->kind != PNode::Symbol;
            }
            case PNode::BigO:
                return false;
        }
        return false;
    }

    bool has_x_or_log(const PPtr& n) {
        if (n->kind == PNode::Symbol && n->name == "X") return true;
        if (n->kind == PNode::Call && n->name == "log") return true;
        for (const auto& a : n->args)
            if (has_x_or_log(a)) return true;
        return false;
    }

    Expr lower_expr(const PPtr& n) {
        switch (n->kind) {
            case PNode::Number:
                return Expr::rational(n->number, ctx.group);
            case PNode::Symbol: {
                if (n->name == "t")
                    return Expr::constant(Series::t_power(Exponent::rational(Rat(1), ctx.group)));
                if (n->name == "pi")
                    return Expr::constant(Series::constant(Constant::pi(), ctx.group));
                if (n->name == "e")
                    return Expr::constant(Series::constant(Constant::e(), ctx.group));
                if (n->name == "X")
                    throw syntax_error("X is not allowed inside subanalytic expressions",
                                       n->line, n->col);
                return Expr::var(var_index(n->name, n->line, n->col));
            }
            case PNode::Add:
                return lower_expr(n->args[0]) + lower_expr(n->args[1]);
            case PNode::Sub:
                return lower_expr(n->args[0]) - lower_expr(n->args[1]);
            case PNode::Mul:
                return lower_expr(n->args[0]) * lower_expr(n->args[1]);
            case PNode::DivK:
                return lower_expr(n->args[0]) / lower_expr(n->args[1]);
            case PNode::NegK:
                return -lower_expr(n->args[0]);
            case PNode::Pow:
                return lower_expr(n->args[0]).pow(n->pow_exp);
            case PNode::AbsK:
                return Expr::abs(lower_expr(n->args[0]));
            case PNode::Call: {
                if (n->args.size() != 1)
                    throw syntax_error("function '" + n->name + "' takes one argument",
                                       n->line, n->col);
                if (n->name == "sqrt") return Expr::sqrt(lower_expr(n->args[0]));
                if (n->name == "abs") return Expr::abs(lower_expr(n->args[0]));
                if (n->name == "arctan" || n->name == "atan")
                    return Expr::arctan(lower_expr(n->args[0]));
                if (closed(n)) {
                    // constant subtree: evaluate through the value path
                    ValueLowerer vl{ctx};
                    return Expr::constant(vl.lower(n).as_series());
                }
                if (n->name == "log")
                    throw syntax_error(
                        "log of a variable expression is constructible, not subanalytic",
                        n->line, n->col);
                throw syntax_error("unknown function '" + n->name + "'", n->line, n->col);
            }
            case PNode::BigO:
                throw syntax_error("O(...) not allowed here", n->line, n->col);
        }
        throw syntax_error("unhandled node", n->line, n->col);
    }

    ConstructibleExpr lower_constructible(const PPtr& n) {
        switch (n->kind) {
            case PNode::Add:
                return lower_constructible(n->args[0]) + lower_constructible(n->args[1]);
            case PNode::Sub:
                return lower_constructible(n->args[0]) - lower_constructible(n->args[1]);
            case PNode::NegK:
                return -lower_constructible(n->args[0]);
            case PNode::Mul:
                return lower_constructible(n->args[0]) * lower_constructible(n->args[1]);
            case PNode::DivK: {
                ConstructibleExpr a = lower_constructible(n->args[0]);
                if (has_x_or_log(n->args[1]))
                    throw syntax_error("division by X or log terms leaves the algebra",
                                       n->line, n->col);
                Expr b = lower_expr(n->args[1]);
                return a.scale(Expr::rational(Rat(1), ctx.group) / b);
            }
            case PNode::Pow: {
                if (!has_x_or_log(n->args[0])) break;
                const Rat& q = n->pow_exp;
                if (!is_integer(q) || q < 0)
                    throw syntax_error("X/log powers must be non-negative integers", n->line,
                                       n->col);
                ConstructibleExpr a = lower_constructible(n->args[0]);
                ConstructibleExpr r = ConstructibleExpr::from_expr(
                    Expr::rational(Rat(1), ctx.group), ctx.group);
                for (long i = 0; i < q.get_num().get_si(); ++i) r = r * a;
                return r;
            }
            case PNode::Symbol:
                if (n->name == "X") return ConstructibleExpr::X(ctx.group);
                break;
            case PNode::Call:
                if (n->name == "log")
                    return ConstructibleExpr::log_of(lower_expr(n->args[0]), ctx.group);
                break;
            default:
                break;
        }
        return ConstructibleExpr::from_expr(lower_expr(n), ctx.group);
    }
};

Endpoint lower_endpoint(const PPtr& n, const ParseContext& ctx) {
    if (n->kind == PNode::Symbol && (n->name == "inf" || n->name == "infinity"))
        return Endpoint::plus_inf();
    if (n->kind == PNode::NegK && n->args[0]->kind == PNode::Symbol &&
        (n->args[0]->name == "inf" || n->args[0]->name == "infinity"))
        return Endpoint::minus_inf();
    ValueLowerer vl{ctx};
    return Endpoint::at(vl.lower(n).as_series());
}

} // namespace

Value parse_value(const std::string& text, const ParseContext& ctx) {
    Parser p(text);
    PPtr n = p.expr();
    p.expect_end();
    ValueLowerer vl{ctx};
    AlgebraElement v = vl.lower_top(n);
    for (size_t i = 1; i < v.coeffs().size(); ++i)
        if (!v.coeffs()[i].provably_zero()) return v;
    return v.coeff(0);
}

Series parse_series(const std::string& text, const ParseContext& ctx) {
    Value v = parse_value(text, ctx);
    if (auto* s = std::get_if<Series>(&v)) return *s;
    return std::get<AlgebraElement>(v).as_series();
}

Constant parse_constant(const std::string& text) {
    Series s = parse_series(text);
    auto st = s.standard_part();
    if (st.infinite || !(s - Series::constant(st.value, s.group())).provably_zero())
        throw domain_error("expected a real constant");
    return st.value;
}

Expr parse_expr(const std::string& text, ParseContext& ctx) {
    Parser p(text);
    PPtr n = p.expr();
    p.expect_end();
    ExprLowerer el{ctx};
    return el.lower_expr(n);
}

ConstructibleExpr parse_constructible(const std::string& text, ParseContext& ctx) {
    Parser p(text);
    PPtr n = p.expr();
    p.expect_end();
    ExprLowerer el{ctx};
    return el.lower_constructible(n);
}

SetOneD parse_set(const std::string& text, const ParseContext& ctx) {
    Parser p(text);
    SetOneD acc;
    while (true) {
        char c = p.lx.peek();
        if (c == '{') {
            p.lx.get();
            PPtr e = p.expr();
            p.lx.expect('}', "to close point set");
            ValueLowerer vl{ctx};
            acc = acc.unite(SetOneD::point(vl.lower(e).as_series()));
        } else if (c == '[' || c == ']') {
            bool lo_closed = c == '[';
            p.lx.get();
            Endpoint lo = lower_endpoint(p.expr(), ctx);
            p.lx.expect(',', "between interval endpoints");
            Endpoint hi = lower_endpoint(p.expr(), ctx);
            bool hi_closed;
            char d = p.lx.peek();
            if (d == ']') {
                hi_closed = true;
            } else if (d == '[') {
                hi_closed = false;
            } else {
                throw syntax_error("expected ']' or '[' to close interval", p.lx.line,
                                   p.lx.col);
            }
            p.lx.get();
            IntervalComp comp{lo, hi, lo_closed && lo.finite(), hi_closed && hi.finite()};
            acc = acc.unite(SetOneD({comp}));
        } else {
            throw syntax_error("expected an interval or point set", p.lx.line, p.lx.col);
        }
        if (p.lx.accept_word("u") || p.lx.accept_word("U")) continue;
        break;
    }
    p.expect_end();
    return acc;
}

Region parse_region(const std::string& text, ParseContext& ctx) {
    Parser p(text);
    (void)p.lx.accept_word("region");
    std::optional<Region> region;
    while (true) {
        std::string var = p.lx.ident();
        if (var.empty()) throw syntax_error("expected a variable name", p.lx.line, p.lx.col);
        if (!p.lx.accept_word("in"))
            throw syntax_error("expected 'in' after variable", p.lx.line, p.lx.col);
        // bind the variable
        ctx.variables.push_back(var);
        p.lx.expect('[', "to open bounds");
        ExprLowerer el{ctx};
        PPtr lo = p.expr();
        p.lx.expect(',', "between bounds");
        PPtr hi = p.expr();
        p.lx.expect(']', "to close bounds");
        if (!region) {
            ValueLowerer vl{ctx};
            region = Region(SetOneD::interval(vl.lower(lo).as_series(),
                                              vl.lower(hi).as_series()));
        } else {
            region = Region(std::move(*region), el.lower_expr(lo), el.lower_expr(hi));
        }
        if (p.lx.accept(';')) continue;
        break;
    }
    p.expect_end();
    return *region;
}

PiecewisePoly parse_pieces(const std::string& text, ParseContext& ctx) {
    Parser p(text);
    PiecewisePoly g;
    while (true) {
        p.lx.expect('[', "to open piece bounds");
        ValueLowerer vl{ctx};
        PPtr lo = p.expr();
        p.lx.expect(',', "between piece bounds");
        PPtr hi = p.expr();
        p.lx.expect(']', "to close piece bounds");
        p.lx.expect(':', "before the piece polynomial");
        ExprLowerer el{ctx};
        PPtr val = p.expr();
        g.pieces.push_back(
            {vl.lower(lo).as_series(), vl.lower(hi).as_series(), el.lower_expr(val)});
        if (p.lx.accept(';')) continue;
        break;
    }
    p.expect_end();
    return g;
}

GroupPtr parse_group(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s == "Q" || s.empty()) return ExponentGroup::rationals();
    if (s.rfind("Q+Q*", 0) == 0) {
        Constant b = parse_constant(s.substr(4));
        return std::make_shared<ExponentGroup>(std::vector<Constant>{Constant(1L), b});
    }
    throw syntax_error("group selector must be Q or Q+Q*<constant>", 1, 1);
}

} // namespace hm
