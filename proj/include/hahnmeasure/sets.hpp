#pragma once

#include <optional>
#include <variant>

#include "hahnmeasure/expr.hpp"

namespace hm {

// Endpoint of a one-dimensional component: a series value or +-infinity.
struct Endpoint {
    enum Kind { MinusInf, Value, PlusInf } kind = Value;
    Series value;

    static Endpoint minus_inf() { return {MinusInf, {}}; }
    static Endpoint plus_inf() { return {PlusInf, {}}; }
    static Endpoint at(Series s) { return {Value, std::move(s)}; }
    bool finite() const { return kind == Value; }
};

// Interval component [a,b], ]a,b[, half-open variants, rays, or a point
// (a == b, both closed).
struct IntervalComp {
    Endpoint lo;
    Endpoint hi;
    bool lo_closed = true;
    bool hi_closed = true;
};

// Finite union of intervals and points in one dimension.
class SetOneD {
public:
    SetOneD() = default;
    explicit SetOneD(std::vector<IntervalComp> comps) : comps_(std::move(comps)) {}
    static SetOneD interval(Series a, Series b, bool lo_closed = true, bool hi_closed = true);
    static SetOneD point(Series a);
    static SetOneD ray_above(Series a, bool closed = true); // [a, +inf[
    static SetOneD ray_below(Series b, bool closed = true); // ]-inf, b]
    static SetOneD whole_line();
    static SetOneD empty() { return SetOneD(); }

    const std::vector<IntervalComp>& components() const { return comps_; }
    bool is_empty() const { return comps_.empty(); }

    SetOneD unite(const SetOneD& o) const;
    // Sorted, pairwise disjoint components, measure-equivalent to the input.
    SetOneD normalize() const;
    SetOneD translate(const Series& c) const;

    std::string str() const;

private:
    std::vector<IntervalComp> comps_;
};

// Cylindrical region: recursively, a base region with a variable ranging
// between two expression bounds of the earlier variables. Dimension 1 is a
// SetOneD.
class Region {
public:
    explicit Region(SetOneD base);
    Region(Region base, Expr lower, Expr upper);
    static Region box(const std::vector<std::pair<Series, Series>>& sides);

    size_t dimension() const;
    bool is_base() const { return !inner_; }
    const SetOneD& base_set() const;
    const Region& inner() const;
    const Expr& lower() const { return lower_; }
    const Expr& upper() const { return upper_; }

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    std::shared_ptr<const Region> inner_; // null for dimension 1
    SetOneD base_;
    Expr lower_;
    Expr upper_;
};

} // namespace hm
