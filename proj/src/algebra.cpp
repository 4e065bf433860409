#include "hahnmeasure/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace hm {

AlgebraElement::AlgebraElement() : group_(ExponentGroup::rationals()) {}
AlgebraElement::AlgebraElement(GroupPtr group) : group_(std::move(group)) {}

AlgebraElement::AlgebraElement(Series s) : group_(s.group()) {
    coeffs_.push_back(std::move(s));
    trim();
}

AlgebraElement AlgebraElement::X(GroupPtr group) {
    AlgebraElement p(group);
    p.coeffs_.push_back(Series(group));
    p.coeffs_.push_back(Series::rational(Rat(1), group));
    return p;
}

AlgebraElement AlgebraElement::constant(Constant c, GroupPtr group) {
    return AlgebraElement(Series::constant(std::move(c), std::move(group)));
}

AlgebraElement AlgebraElement::from_coeffs(GroupPtr group, std::vector<Series> coeffs) {
    // Adopt the richest group among the coefficients so the element is
    // internally consistent; Q-side coefficients lift.
    GroupPtr g = std::move(group);
    for (const auto& c : coeffs) {
        if (c.group()->same(*g)) continue;
        if (g->rank() == 1 && g->basis(0).is_one()) g = c.group();
    }
    AlgebraElement p(g);
    for (auto& c : coeffs) p.coeffs_.push_back(c.lifted_to(g));
    p.trim();
    return p;
}

void AlgebraElement::trim() {
    while (!coeffs_.empty() && coeffs_.back().provably_zero()) coeffs_.pop_back();
}

Series AlgebraElement::coeff(size_t i) const {
    if (i < coeffs_.size()) return coeffs_[i];
    return Series(group_);
}

bool AlgebraElement::provably_zero() const {
    for (const auto& c : coeffs_)
        if (!c.provably_zero()) return false;
    return true;
}

size_t AlgebraElement::degree() const {
    for (size_t i = coeffs_.size(); i-- > 0;) {
        if (!coeffs_[i].terms().empty()) return i;
        if (!coeffs_[i].is_exact())
            throw precision_exhausted("top coefficient is zero only up to precision");
    }
    throw domain_error("degree of the zero polynomial");
}

size_t AlgebraElement::degree_bound() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    if (!group_->same(*o.group_)) {
        // Series addition lifts Q-side coefficients; adopt the richer group.
        bool self_q = group_->rank() == 1 && group_->basis(0).is_one();
        const GroupPtr& g = self_q ? o.group_ : group_;
        AlgebraElement r(g);
        size_t n = std::max(coeffs_.size(), o.coeffs_.size());
        for (size_t i = 0; i < n; ++i) r.coeffs_.push_back(coeff(i).lifted_to(g) + o.coeff(i).lifted_to(g));
        r.trim();
        return r;
    }
    AlgebraElement r(group_);
    size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    r.coeffs_.reserve(n);
    for (size_t i = 0; i < n; ++i) r.coeffs_.push_back(coeff(i) + o.coeff(i));
    r.trim();
    return r;
}

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement r(group_);
    for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
    return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + (-o); }

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    if (!group_->same(*o.group_)) {
        bool self_q = group_->rank() == 1 && group_->basis(0).is_one();
        const GroupPtr& g = self_q ? o.group_ : group_;
        AlgebraElement a(g), b(g);
        for (const auto& c : coeffs_) a.coeffs_.push_back(c.lifted_to(g));
        for (const auto& c : o.coeffs_) b.coeffs_.push_back(c.lifted_to(g));
        return a * b;
    }
    if (coeffs_.empty() || o.coeffs_.empty()) return AlgebraElement(group_);
    AlgebraElement r(group_);
    r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, Series(group_));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j)
            r.coeffs_[i + j] = r.coeffs_[i + j] + coeffs_[i] * o.coeffs_[j];
    r.trim();
    return r;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    if (!group_->same(*o.group_)) return false;
    size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    for (size_t i = 0; i < n; ++i)
        if (!(coeff(i) == o.coeff(i))) return false;
    return true;
}

bool AlgebraElement::equal_up_to_precision(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement d = a - b;
    for (const auto& c : d.coeffs_)
        if (!c.terms().empty()) return false;
    return true;
}

AlgebraElement AlgebraElement::scale(const Series& s) const {
    AlgebraElement r(group_);
    for (const auto& c : coeffs_) r.coeffs_.push_back(c * s);
    r.trim();
    return r;
}

AlgebraElement AlgebraElement::scale(const Constant& c) const {
    AlgebraElement r(group_);
    for (const auto& s : coeffs_) r.coeffs_.push_back(s.scale(c));
    r.trim();
    return r;
}

AlgebraElement AlgebraElement::pow_int(unsigned n) const {
    AlgebraElement acc(Series::rational(Rat(1), group_));
    AlgebraElement base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

AlgebraElement AlgebraElement::substitute_X(const AlgebraElement& image) const {
    AlgebraElement acc(group_);
    // Horner from the top coefficient.
    for (size_t i = coeffs_.size(); i-- > 0;)
        acc = acc * image + AlgebraElement(coeffs_[i]);
    return acc;
}

Series AlgebraElement::as_series() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].provably_zero())
            throw domain_error("algebra element has X-degree >= 1; not a series");
    return coeffs_.empty() ? Series(group_) : coeffs_[0];
}

namespace {

// Index of the dominant coefficient of a nonzero element: among coefficients
// with minimal valuation, the highest X-power. Coefficients that are zero up
// to precision (no known terms) cannot be placed and raise.
size_t dominant_index(const AlgebraElement& p, unsigned budget) {
    (void)budget;
    std::optional<Exponent> best;
    std::optional<size_t> idx;
    bool any_unknown = false;
    for (size_t i = 0; i < p.coeffs().size(); ++i) {
        const Series& c = p.coeffs()[i];
        auto o = c.ord();
        if (!o) {
            if (!c.is_exact()) any_unknown = true;
            continue;
        }
        if (!best || compare(*o, *best) == Cmp::Less) {
            best = o;
            idx = i;
        } else if (compare(*o, *best) == Cmp::Equal) {
            idx = i; // later index = higher X power dominates
        }
    }
    if (!idx) {
        if (any_unknown)
            throw precision_exhausted("sign of algebra element: all coefficients cancel "
                                      "within precision");
        throw domain_error("dominant term of the zero element");
    }
    // Truncated coefficients could hide terms that would steal dominance:
    // an unknown exponent below best (any index), or one equal to best at a
    // higher X-power.
    for (size_t i = 0; i < p.coeffs().size(); ++i) {
        const Series& c = p.coeffs()[i];
        if (c.is_exact()) continue;
        Cmp rel = compare(*c.known_below(), *best);
        if (rel == Cmp::Less || (rel == Cmp::Equal && i > *idx))
            throw precision_exhausted("coefficient precision too coarse to certify dominance");
    }
    return *idx;
}

} // namespace

Cmp AlgebraElement::sign(unsigned budget_bits) const {
    if (provably_zero()) return Cmp::Equal;
    size_t i = dominant_index(*this, budget_bits);
    return coeffs_[i].sign(budget_bits);
}

Cmp compare(const AlgebraElement& a, const AlgebraElement& b, unsigned budget_bits) {
    return (a - b).sign(budget_bits);
}

Cmp compare(const AlgebraElement& a, const AlgebraElement& b) {
    return compare(a, b, Constant::default_budget());
}

Series::StandardPart AlgebraElement::standard_part() const {
    for (size_t i = 1; i < coeffs_.size(); ++i) {
        if (coeffs_[i].provably_zero()) continue;
        // Any genuine X-power makes the element unbounded (X > R).
        return {true, Constant()};
    }
    return coeff(0).standard_part();
}

double AlgebraElement::instantiate(double tau0) const {
    double x = std::log(1.0 / tau0);
    double acc = 0;
    double xp = 1;
    for (const auto& c : coeffs_) {
        acc += c.instantiate(tau0) * xp;
        xp *= x;
    }
    return acc;
}

std::string AlgebraElement::str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        const Series& c = coeffs_[i];
        if (c.provably_zero()) continue;
        std::string cs = c.str();
        std::string xp = i == 0 ? "" : (i == 1 ? "X" : "X^" + std::to_string(i));
        std::string piece;
        if (i == 0) {
            piece = cs;
        } else if (cs == "1") {
            piece = xp;
        } else if (cs == "-1") {
            piece = "-" + xp;
        } else {
            bool needs_paren = cs.find_first_of("+") != std::string::npos ||
                               cs.find(" - ") != std::string::npos;
            piece = (needs_paren ? "(" + cs + ")" : cs) + "*" + xp;
        }
        if (first) {
            out = piece;
            first = false;
        } else if (!piece.empty() && piece[0] == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out.empty() ? "0" : out;
}

ReducedElement::ReducedElement(const AlgebraElement& p) : rep_(p.group()) {
    // Strip the bounded part (exponents >= 0) of the X^0 coefficient.
    const Series& c0 = p.coeff(0);
    const Exponent zero = Exponent::rational(Rat(0), p.group());
    if (!c0.is_exact() && compare(*c0.known_below(), zero) == Cmp::Less)
        throw precision_exhausted("cannot certify the bounded part of c0 (precision " +
                                  c0.known_below()->str() + ")");
    std::vector<Series::Term> neg;
    for (const auto& t : c0.terms())
        if (compare(t.exp, zero) == Cmp::Less) neg.push_back(t);
    std::vector<Series> coeffs;
    coeffs.push_back(Series::make(p.group(), std::move(neg)));
    for (size_t i = 1; i < p.coeffs().size(); ++i) coeffs.push_back(p.coeffs()[i]);
    rep_ = AlgebraElement::from_coeffs(p.group(), std::move(coeffs));
}

ReducedElement reduce(const AlgebraElement& p) { return ReducedElement(p); }

} // namespace hm
