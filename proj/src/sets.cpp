#include "hahnmeasure/sets.hpp"

#include <algorithm>

namespace hm {

SetOneD SetOneD::interval(Series a, Series b, bool lo_closed, bool hi_closed) {
    Cmp c = compare(a, b);
    if (c == Cmp::Greater) throw domain_error("interval endpoints out of order");
    if (c == Cmp::Equal && !(lo_closed && hi_closed)) return SetOneD();
    IntervalComp ic{Endpoint::at(std::move(a)), Endpoint::at(std::move(b)), lo_closed, hi_closed};
    return SetOneD({std::move(ic)});
}

SetOneD SetOneD::point(Series a) {
    Series b = a;
    return SetOneD({IntervalComp{Endpoint::at(std::move(a)), Endpoint::at(std::move(b)), true, true}});
}

SetOneD SetOneD::ray_above(Series a, bool closed) {
    return SetOneD({IntervalComp{Endpoint::at(std::move(a)), Endpoint::plus_inf(), closed, false}});
}

SetOneD SetOneD::ray_below(Series b, bool closed) {
    return SetOneD({IntervalComp{Endpoint::minus_inf(), Endpoint::at(std::move(b)), false, closed}});
}

SetOneD SetOneD::whole_line() {
    return SetOneD({IntervalComp{Endpoint::minus_inf(), Endpoint::plus_inf(), false, false}});
}

SetOneD SetOneD::unite(const SetOneD& o) const {
    std::vector<IntervalComp> all = comps_;
    all.insert(all.end(), o.comps_.begin(), o.comps_.end());
    return SetOneD(std::move(all));
}

namespace {

// -1 / 0 / +1 comparison of endpoints in the lower role (lo) or upper (hi).
Cmp ep_compare(const Endpoint& a, const Endpoint& b) {
    if (a.kind == Endpoint::MinusInf) return b.kind == Endpoint::MinusInf ? Cmp::Equal : Cmp::Less;
    if (a.kind == Endpoint::PlusInf) return b.kind == Endpoint::PlusInf ? Cmp::Equal : Cmp::Greater;
    if (b.kind == Endpoint::MinusInf) return Cmp::Greater;
    if (b.kind == Endpoint::PlusInf) return Cmp::Less;
    return compare(a.value, b.value);
}

} // namespace

SetOneD SetOneD::normalize() const {
    std::vector<IntervalComp> cs = comps_;
    std::sort(cs.begin(), cs.end(), [](const IntervalComp& x, const IntervalComp& y) {
        return ep_compare(x.lo, y.lo) == Cmp::Less;
    });
    std::vector<IntervalComp> out;
    for (auto& c : cs) {
        if (out.empty()) {
            out.push_back(std::move(c));
            continue;
        }
        IntervalComp& last = out.back();
        // Merge when c.lo <= last.hi (with closure glue at equality).
        Cmp rel = ep_compare(c.lo, last.hi);
        bool touch = rel == Cmp::Less ||
                     (rel == Cmp::Equal && (c.lo_closed || last.hi_closed));
        if (touch) {
            Cmp hi_rel = ep_compare(c.hi, last.hi);
            if (hi_rel == Cmp::Greater) {
                last.hi = c.hi;
                last.hi_closed = c.hi_closed;
            } else if (hi_rel == Cmp::Equal) {
                last.hi_closed = last.hi_closed || c.hi_closed;
            }
        } else {
            out.push_back(std::move(c));
        }
    }
    return SetOneD(std::move(out));
}

SetOneD SetOneD::translate(const Series& c) const {
    std::vector<IntervalComp> out;
    out.reserve(comps_.size());
    for (const auto& ic : comps_) {
        IntervalComp n = ic;
        if (n.lo.kind == Endpoint::Value) n.lo.value = n.lo.value + c;
        if (n.hi.kind == Endpoint::Value) n.hi.value = n.hi.value + c;
        out.push_back(std::move(n));
    }
    return SetOneD(std::move(out));
}

std::string SetOneD::str() const {
    if (comps_.empty()) return "{}";
    std::string out;
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (i) out += " u ";
        const auto& c = comps_[i];
        bool is_point = c.lo.kind == Endpoint::Value && c.hi.kind == Endpoint::Value &&
                        c.lo_closed && c.hi_closed &&
                        Series::equal_up_to_precision(c.lo.value, c.hi.value) &&
                        c.lo.value == c.hi.value;
        if (is_point) {
            out += "{" + c.lo.value.str() + "}";
            continue;
        }
        out += c.lo_closed ? "[" : "]";
        out += c.lo.kind == Endpoint::MinusInf ? "-inf" : c.lo.value.str();
        out += ", ";
        out += c.hi.kind == Endpoint::PlusInf ? "inf" : c.hi.value.str();
        out += c.hi_closed ? "]" : "[";
    }
    return out;
}

Region::Region(SetOneD base) : base_(std::move(base)) {}

Region::Region(Region base, Expr lower, Expr upper)
    : inner_(std::make_shared<Region>(std::move(base))),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {}

Region Region::box(const std::vector<std::pair<Series, Series>>& sides) {
    if (sides.empty()) throw domain_error("box needs at least one side");
    Region r(SetOneD::interval(sides[0].first, sides[0].second));
    for (size_t i = 1; i < sides.size(); ++i)
        r = Region(std::move(r), Expr::constant(sides[i].first), Expr::constant(sides[i].second));
    return r;
}

size_t Region::dimension() const { return inner_ ? inner_->dimension() + 1 : 1; }

const SetOneD& Region::base_set() const {
    if (inner_) throw domain_error("not a base region");
    return base_;
}

const Region& Region::inner() const {
    if (!inner_) throw domain_error("base region has no inner region");
    return *inner_;
}

std::string Region::str(const std::vector<std::string>& names) const {
    auto name = [&](size_t i) {
        if (i < names.size()) return names[i];
        if (i == 0) return std::string("x");
        return "x" + std::to_string(i);
    };
    if (!inner_) return name(0) + " in " + base_.str();
    std::string out = inner_->str(names);
    size_t d = dimension();
    out += "; " + name(d - 1) + " in [" + lower_.str(names) + ", " + upper_.str(names) + "]";
    return out;
}

} // namespace hm
