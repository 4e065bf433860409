#include "hahnmeasure/exponent.hpp"

#include <cmath>

namespace hm {

ExponentGroup::ExponentGroup(std::vector<Constant> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw domain_error("exponent group needs at least one basis value");
}

GroupPtr ExponentGroup::rationals() {
    static GroupPtr g = std::make_shared<ExponentGroup>(std::vector<Constant>{Constant(1L)});
    return g;
}

GroupPtr ExponentGroup::with_sqrt2() {
    static GroupPtr g = std::make_shared<ExponentGroup>(
        std::vector<Constant>{Constant(1L), Constant(2L).sqrt()});
    return g;
}

bool ExponentGroup::same(const ExponentGroup& o) const {
    if (this == &o) return true;
    if (basis_.size() != o.basis_.size()) return false;
    for (size_t i = 0; i < basis_.size(); ++i)
        if (Constant::structural_compare(basis_[i], o.basis_[i]) != 0) return false;
    return true;
}

std::string ExponentGroup::str() const {
    std::string s = "Q";
    for (size_t i = 1; i < basis_.size(); ++i) s += "+Q*" + basis_[i].str();
    return s;
}

Exponent::Exponent() : group_(ExponentGroup::rationals()), coords_(1, Rat(0)) {}

Exponent::Exponent(GroupPtr group, std::vector<Rat> coords)
    : group_(std::move(group)), coords_(std::move(coords)) {
    if (coords_.size() != group_->rank())
        throw domain_error("exponent coordinate arity mismatch");
}

Exponent Exponent::rational(const Rat& q, GroupPtr group) {
    std::vector<Rat> c(group->rank(), Rat(0));
    c[0] = q;
    return Exponent(std::move(group), std::move(c));
}

bool Exponent::is_zero() const {
    for (const auto& c : coords_)
        if (c != 0) return false;
    return true;
}

std::optional<Rat> Exponent::as_rational() const {
    for (size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return std::nullopt;
    if (!group_->basis(0).is_one()) return std::nullopt;
    return coords_[0];
}

namespace {

Exponent lift_exponent(const Exponent& e, const GroupPtr& g) {
    std::vector<Rat> coords(g->rank(), Rat(0));
    coords[0] = e.coords()[0];
    return Exponent(g, std::move(coords));
}

// Align exponents over a common group: the Q side (basis {1}) lifts into a
// richer group whose first basis value is 1.
std::pair<Exponent, Exponent> aligned(const Exponent& a, const Exponent& b) {
    if (a.group()->same(*b.group())) return {a, b};
    bool a_q = a.group()->rank() == 1 && a.group()->basis(0).is_one();
    bool b_q = b.group()->rank() == 1 && b.group()->basis(0).is_one();
    if (a_q && b.group()->basis(0).is_one()) return {lift_exponent(a, b.group()), b};
    if (b_q && a.group()->basis(0).is_one()) return {a, lift_exponent(b, a.group())};
    throw domain_error("exponents from incompatible groups");
}

} // namespace

Exponent Exponent::operator+(const Exponent& o) const {
    if (!group_->same(*o.group_)) {
        auto [a, b] = aligned(*this, o);
        return a + b;
    }
    std::vector<Rat> c = coords_;
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.coords_[i];
    return Exponent(group_, std::move(c));
}

Exponent Exponent::operator-(const Exponent& o) const { return *this + (-o); }

Exponent Exponent::operator-() const {
    std::vector<Rat> c = coords_;
    for (auto& x : c) x = -x;
    return Exponent(group_, std::move(c));
}

Exponent Exponent::scale(const Rat& q) const {
    std::vector<Rat> c = coords_;
    for (auto& x : c) x *= q;
    return Exponent(group_, std::move(c));
}

bool Exponent::operator==(const Exponent& o) const {
    if (!group_->same(*o.group_)) {
        try {
            auto [a, b] = aligned(*this, o);
            return a == b;
        } catch (const error&) {
            return false;
        }
    }
    return coords_ == o.coords_;
}

Constant Exponent::embed() const {
    Constant acc;
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == 0) continue;
        acc = acc + Constant(coords_[i]) * group_->basis(i);
    }
    return acc;
}

std::string Exponent::str() const {
    if (auto q = as_rational()) return rat_string(*q);
    return embed().str();
}

Cmp compare(const Exponent& a, const Exponent& b, unsigned budget_bits) {
    if (!a.group()->same(*b.group())) {
        auto [x, y] = aligned(a, b);
        return compare(x, y, budget_bits);
    }
    if (a.coords() == b.coords()) return Cmp::Equal;
    // Rank-1 fast path over Q.
    if (a.group()->rank() == 1 && a.group()->basis(0).is_one()) {
        int c = cmp(a.coords()[0], b.coords()[0]);
        return c < 0 ? Cmp::Less : (c > 0 ? Cmp::Greater : Cmp::Equal);
    }
    // Coordinates differ, so by Q-linear independence the values differ; the
    // interval comparison terminates (or reports its budget honestly).
    return compare(a.embed(), b.embed(), budget_bits);
}

Cmp compare(const Exponent& a, const Exponent& b) {
    return compare(a, b, Constant::default_budget());
}

unsigned long archimedean_witness(const Exponent& a, const Exponent& b) {
    if (a.is_zero() || b.is_zero()) throw domain_error("witness needs nonzero exponents");
    Interval ia = a.embed().approx(64);
    Interval ib = b.embed().approx(64);
    double ra = std::max(std::abs(ia.lo_rat().get_d()), std::abs(ia.hi_rat().get_d()));
    double rb = std::min(std::abs(ib.lo_rat().get_d()), std::abs(ib.hi_rat().get_d()));
    double n = std::ceil(ra / rb);
    unsigned long w = n < 1 ? 1ul : static_cast<unsigned long>(n);
    // Certify |a| <= w|b| exactly.
    while (true) {
        Constant lhs = a.embed();
        if (compare(lhs, Constant()) == Cmp::Less) lhs = -lhs;
        Constant rhs = b.embed();
        if (compare(rhs, Constant()) == Cmp::Less) rhs = -rhs;
        rhs = rhs * Constant(Rat(static_cast<long>(w)));
        if (compare(lhs, rhs) != Cmp::Greater) return w;
        w *= 2;
    }
}

} // namespace hm
