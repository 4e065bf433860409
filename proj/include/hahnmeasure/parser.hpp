#pragma once

#include <variant>

#include "hahnmeasure/datum.hpp"

namespace hm {

// Parsing targets for the CLI expression grammar: infix arithmetic over
// series literals (t^(p/q)), X, named functions, variables, interval and
// region literals. Position-annotated syntax errors.

struct ParseContext {
    GroupPtr group = ExponentGroup::rationals();
    std::vector<std::string> variables; // bound variable names, in index order
};

// A value without free variables: a series when the X-degree is 0, otherwise
// an element of the Lebesgue algebra.
using Value = std::variant<Series, AlgebraElement>;

Value parse_value(const std::string& text, const ParseContext& ctx = {});
Series parse_series(const std::string& text, const ParseContext& ctx = {});
Constant parse_constant(const std::string& text);

// Subanalytic expression over the context's variables (new names bind in
// order of first appearance when ctx.variables is empty).
Expr parse_expr(const std::string& text, ParseContext& ctx);

// Constructible expression: the grammar above extended by log(...) factors
// and X powers.
ConstructibleExpr parse_constructible(const std::string& text, ParseContext& ctx);

SetOneD parse_set(const std::string& text, const ParseContext& ctx = {});

// `x in [a, b]; y in [lo(x), hi(x)]; ...`, optionally prefixed by "region".
Region parse_region(const std::string& text, ParseContext& ctx);

// Piecewise-polynomial pieces: `[a,b]: expr; [b,c]: expr`.
PiecewisePoly parse_pieces(const std::string& text, ParseContext& ctx);

// Exponent group selector: "Q" or "Q+Q*sqrt(2)" (a 1 and a second basis
// constant).
GroupPtr parse_group(const std::string& text);

} // namespace hm
