#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hahnmeasure/logexp.hpp"

namespace hm {

// AST for the globally subanalytic expression fragment: series constants,
// variables, field operations, rational powers, sqrt, abs, arctan, and
// piecewise definitions guarded by polynomial sign conditions. No logarithm
// here: logs live one level up, in constructible expressions.
enum class ExprKind {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowQ,
    Sqrt,
    Abs,
    Arctan,
    Piecewise,
};

enum class Rel { LT, LE, EQ, GE, GT };

class Expr;
struct ExprNode;
struct ExprCase;

class Expr {
public:
    Expr(); // constant 0

    static Expr constant(Series s);
    static Expr rational(const Rat& q, GroupPtr group = ExponentGroup::rationals());
    static Expr var(size_t index);

    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator*(const Expr& o) const;
    Expr operator/(const Expr& o) const;
    Expr operator-() const;
    Expr pow(const Rat& q) const;
    static Expr sqrt(const Expr& a);
    static Expr abs(const Expr& a);
    static Expr arctan(const Expr& a);

    // First matching case wins; no match evaluates to 0.
    static Expr piecewise(std::vector<ExprCase> cases);

    ExprKind kind() const;
    const Series& const_value() const;          // Const
    size_t var_index() const;                   // Var
    const Expr& child(size_t i) const;          // operands
    size_t child_count() const;
    const Rat& pow_exponent() const;            // PowQ
    const std::vector<ExprCase>& cases() const; // Piecewise

    bool depends_on(size_t var) const;
    size_t max_var() const; // 0 when no vars; else 1 + highest index

    Series eval(const std::vector<Series>& point, const Exponent& target) const;
    Series eval(const std::vector<Series>& point) const;
    double eval_double(const std::vector<double>& point) const;

    Expr substitute(size_t var, const Expr& replacement) const;
    Expr differentiate(size_t var) const;

    // Structural identity (cheap; not semantic equality).
    bool same(const Expr& o) const { return node_ == o.node_; }

    std::string str(const std::vector<std::string>& names = {}) const;

    explicit Expr(std::shared_ptr<const ExprNode> n);

private:
    std::shared_ptr<const ExprNode> node_;
};

// Piecewise case: a conjunction of polynomial sign conditions and a value.
struct ExprCase {
    std::vector<std::pair<Expr, Rel>> conds;
    Expr value;
};

// Univariate rational-function view: numerator/denominator coefficient lists
// in the given variable, entries free of that variable. Fails (nullopt) when
// the expression is not rational in it.
struct UnivariateRational {
    std::vector<Expr> num; // ascending degree
    std::vector<Expr> den;
};
std::optional<UnivariateRational> as_univariate(const Expr& e, size_t var);

} // namespace hm
