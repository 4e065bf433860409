#include "hahnmeasure/series.hpp"

#include <algorithm>
#include <cmath>

namespace hm {

namespace {

Rat g_default_units = Rat(8);

std::optional<Exponent> min_opt(const std::optional<Exponent>& a,
                                const std::optional<Exponent>& b) {
    if (!a) return b;
    if (!b) return a;
    return compare(*a, *b) == Cmp::Greater ? b : a;
}

} // namespace

Rat default_precision_units() { return g_default_units; }
void set_default_precision_units(const Rat& q) { g_default_units = q; }

Exponent default_target(const GroupPtr& group) {
    return Exponent::rational(g_default_units, group);
}

Series::Series() : group_(ExponentGroup::rationals()) {}
Series::Series(GroupPtr group) : group_(std::move(group)) {}

Series Series::constant(Constant c, GroupPtr group) {
    Series s(std::move(group));
    if (!c.is_zero()) s.terms_.push_back(Term{Exponent::rational(Rat(0), s.group_), std::move(c)});
    return s;
}

Series Series::rational(const Rat& q, GroupPtr group) {
    return constant(Constant(q), std::move(group));
}

Series Series::monomial(Constant coeff, const Exponent& exp) {
    Series s(exp.group());
    if (!coeff.is_zero()) s.terms_.push_back(Term{exp, std::move(coeff)});
    return s;
}

Series Series::t_power(const Exponent& exp) { return monomial(Constant(1L), exp); }

Series Series::make(GroupPtr group, std::vector<Term> terms,
                    std::optional<Exponent> known_below) {
    Series s(std::move(group));
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return compare(a.exp, b.exp) == Cmp::Less;
    });
    for (auto& t : terms) {
        if (!s.terms_.empty() && s.terms_.back().exp == t.exp) {
            s.terms_.back().coeff = s.terms_.back().coeff + t.coeff;
            if (s.terms_.back().coeff.is_zero()) s.terms_.pop_back();
        } else if (!t.coeff.is_zero()) {
            s.terms_.push_back(std::move(t));
        }
    }
    s.known_below_ = std::move(known_below);
    s.drop_beyond_precision();
    return s;
}

void Series::drop_beyond_precision() {
    if (!known_below_) return;
    while (!terms_.empty() && compare(terms_.back().exp, *known_below_) != Cmp::Less)
        terms_.pop_back();
}

std::optional<Exponent> Series::ord() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exp;
}

Constant Series::leading_coeff() const {
    if (terms_.empty()) throw domain_error("leading coefficient of a term-free series");
    return terms_.front().coeff;
}

Constant Series::coeff_at(const Exponent& e) const {
    for (const auto& t : terms_)
        if (t.exp == e) return t.coeff;
    return Constant();
}

Series Series::lifted_to(const GroupPtr& g) const {
    if (group_->same(*g)) return *this;
    bool self_q = group_->rank() == 1 && group_->basis(0).is_one();
    if (!self_q || !g->basis(0).is_one())
        throw domain_error("series over incompatible exponent groups");
    auto lift_exp = [&](const Exponent& e) {
        std::vector<Rat> coords(g->rank(), Rat(0));
        coords[0] = e.coords()[0];
        return Exponent(g, std::move(coords));
    };
    Series s(g);
    for (const auto& t : terms_) s.terms_.push_back(Term{lift_exp(t.exp), t.coeff});
    if (known_below_) s.known_below_ = lift_exp(*known_below_);
    return s;
}

namespace {
// Align two series on a common group, lifting the Q-side when they differ.
std::pair<Series, Series> aligned(const Series& a, const Series& b) {
    if (a.group()->same(*b.group())) return {a, b};
    if (a.group()->rank() == 1 && a.group()->basis(0).is_one())
        return {a.lifted_to(b.group()), b};
    return {a, b.lifted_to(a.group())};
}
} // namespace

Series Series::operator+(const Series& o) const {
    if (!group_->same(*o.group_)) {
        auto [a, b] = aligned(*this, o);
        return a + b;
    }
    std::vector<Term> merged = terms_;
    merged.insert(merged.end(), o.terms_.begin(), o.terms_.end());
    return make(group_, std::move(merged), min_opt(known_below_, o.known_below_));
}

Series Series::operator-() const {
    Series s(group_);
    s.terms_ = terms_;
    for (auto& t : s.terms_) t.coeff = -t.coeff;
    s.known_below_ = known_below_;
    return s;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator*(const Series& o) const {
    if (!group_->same(*o.group_)) {
        auto [a, b] = aligned(*this, o);
        return a * b;
    }
    if (provably_zero() || o.provably_zero()) return Series(group_);
    // Precision of the product: min over (omega_f + low_g, omega_g + low_f)
    // where low is the least known exponent (or the precision bound itself
    // when no term is known).
    std::optional<Exponent> prec;
    auto low_of = [](const Series& s) -> std::optional<Exponent> {
        if (auto o2 = s.ord()) return o2;
        return s.known_below_; // KnownBelow with no terms
    };
    if (known_below_) {
        auto lg = low_of(o);
        if (lg) prec = min_opt(prec, *known_below_ + *lg);
    }
    if (o.known_below_) {
        auto lf = low_of(*this);
        if (lf) prec = min_opt(prec, *o.known_below_ + *lf);
    }
    std::vector<Term> prods;
    prods.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_)
            prods.push_back(Term{a.exp + b.exp, a.coeff * b.coeff});
    return make(group_, std::move(prods), std::move(prec));
}

bool Series::operator==(const Series& o) const {
    if (!group_->same(*o.group_)) return false;
    if (known_below_.has_value() != o.known_below_.has_value()) return false;
    if (known_below_ && !(*known_below_ == *o.known_below_)) return false;
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (!(terms_[i].exp == o.terms_[i].exp)) return false;
        if (!(terms_[i].coeff == o.terms_[i].coeff)) return false;
    }
    return true;
}

Series Series::scale(const Constant& c) const {
    if (c.is_zero()) {
        Series s(group_);
        s.known_below_ = known_below_;
        return s;
    }
    Series s(group_);
    s.terms_ = terms_;
    for (auto& t : s.terms_) t.coeff = t.coeff * c;
    s.known_below_ = known_below_;
    return s;
}

Series Series::shift(const Exponent& e) const {
    if (!group_->same(*e.group()) && group_->rank() == 1 && group_->basis(0).is_one())
        return lifted_to(e.group()).shift(e);
    Series s(group_);
    s.terms_ = terms_;
    for (auto& t : s.terms_) t.exp = t.exp + e;
    if (known_below_) s.known_below_ = *known_below_ + e;
    return s;
}

Series Series::truncate(const Exponent& omega) const {
    Series s(group_);
    s.terms_ = terms_;
    s.known_below_ = known_below_ ? min_opt(known_below_, omega) : std::optional<Exponent>(omega);
    s.drop_beyond_precision();
    return s;
}

Series Series::inv(const Exponent& target) const {
    if (terms_.empty()) {
        if (is_exact()) throw domain_error("inverse of the zero series");
        throw precision_exhausted("leading coefficient not separable from zero");
    }
    const Term& lead = terms_.front();
    Constant a_inv = lead.coeff.inverse();
    if (terms_.size() == 1 && is_exact()) return monomial(a_inv, -lead.exp);
    // f = a t^g (1 + h); 1/f = a^-1 t^-g sum (-h)^k.
    Series h = (*this * monomial(a_inv, -lead.exp)) - rational(Rat(1), group_);
    // Working precision: asking beyond ord-shifted input knowledge is wrong.
    Exponent eff = target + lead.exp; // needed precision for sum (-h)^k, pre-shift
    if (known_below_) {
        Exponent own = *known_below_ - lead.exp;
        if (compare(own, eff) == Cmp::Less) eff = own;
    }
    auto h_ord = h.ord();
    Series acc = rational(Rat(1), group_).truncate(eff);
    if (h_ord) {
        Series pw = rational(Rat(1), group_);
        Series mh = (-h).truncate(eff);
        Exponent reached = Exponent::rational(Rat(0), group_);
        while (compare(reached, eff) == Cmp::Less) {
            pw = (pw * mh).truncate(eff);
            acc = acc + pw;
            reached = reached + *h_ord;
            if (pw.terms().empty()) break;
        }
    }
    return acc.shift(-lead.exp).scale(a_inv);
}

Series Series::div(const Series& o, const Exponent& target) const {
    return *this * o.inv(target);
}

Series Series::pow_int(long n, const Exponent& target) const {
    if (n == 0) return rational(Rat(1), group_);
    if (n < 0) return inv(target).pow_int(-n, target);
    Series acc = rational(Rat(1), group_);
    Series base = *this;
    long k = n;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return acc;
}

Series Series::nth_root(unsigned long n, const Exponent& target) const {
    if (n == 0) throw domain_error("0th root");
    if (n == 1) return *this;
    return pow_rat(Rat(1, static_cast<long>(n)), target);
}

namespace {

// Exact square root of a finite exact series, when it is a perfect square of
// another finite series. The iteration peels leading terms; a perfect square
// of an m-term series empties the remainder within a bounded number of steps.
std::optional<Series> sqrt_exact_attempt(const Series& f) {
    if (!f.is_exact() || f.terms().empty()) return std::nullopt;
    const auto& lead = f.terms().front();
    Rat half(1, 2);
    Exponent root_exp = lead.exp.scale(half);
    Constant r0;
    try {
        if (lead.coeff.sign() != Cmp::Greater) return std::nullopt;
        r0 = lead.coeff.pow(half);
    } catch (const error&) {
        return std::nullopt;
    }
    Series r = Series::monomial(r0, root_exp);
    Constant two_r0_inv = (Constant(2L) * r0).inverse();
    size_t budget = 2 * f.terms().size() + 4;
    for (size_t step = 0; step < budget; ++step) {
        Series rem = f - r * r;
        if (rem.provably_zero()) return r;
        if (rem.terms().empty()) return std::nullopt;
        const auto& d = rem.terms().front();
        r = r + Series::monomial(d.coeff * two_r0_inv, d.exp - root_exp);
    }
    return std::nullopt;
}

} // namespace

Series Series::pow_rat(const Rat& q, const Exponent& target) const {
    if (q == 0) return rational(Rat(1), group_);
    if (is_integer(q)) return pow_int(q.get_num().get_si(), target);
    if (terms_.empty()) {
        if (is_exact()) {
            if (q > 0) return Series(group_);
            throw domain_error("zero series to a negative power");
        }
        throw precision_exhausted("leading coefficient not separable from zero");
    }
    // Perfect squares of finite series take exact roots.
    if (q.get_den() == 2 && is_exact() && terms_.size() > 1) {
        if (auto root = sqrt_exact_attempt(*this)) {
            long num = static_cast<long>(q.get_num().get_si());
            return root->pow_int(num, target);
        }
    }
    const Term& lead = terms_.front();
    bool even_den = mpz_even_p(Int(q.get_den()).get_mpz_t());
    Cmp lead_sign = lead.coeff.sign();
    if (even_den && lead_sign == Cmp::Less)
        throw domain_error("even root of a negative series");
    Constant a_pow = lead.coeff.pow(q);
    Exponent root_exp = lead.exp.scale(q);
    if (terms_.size() == 1 && is_exact()) return monomial(a_pow, root_exp);
    Series h = (*this * monomial(lead.coeff.inverse(), -lead.exp)) - rational(Rat(1), group_);
    Exponent eff = target - root_exp; // precision needed for the unit part
    if (known_below_) {
        Exponent own = *known_below_ - lead.exp;
        if (compare(own, eff) == Cmp::Less) eff = own;
    }
    auto h_ord = h.ord();
    Series acc = rational(Rat(1), group_).truncate(eff);
    if (h_ord) {
        // Binomial series: sum_k C(q, k) h^k.
        Series pw = rational(Rat(1), group_);
        Series ht = h.truncate(eff);
        Rat binom(1);
        Exponent reached = Exponent::rational(Rat(0), group_);
        unsigned long k = 0;
        while (compare(reached, eff) == Cmp::Less) {
            ++k;
            binom *= (q - Rat(static_cast<long>(k) - 1)) / Rat(static_cast<long>(k));
            pw = (pw * ht).truncate(eff);
            if (pw.terms().empty()) break;
            acc = acc + pw.scale(Constant(binom));
            reached = reached + *h_ord;
        }
    }
    return acc.shift(root_exp).scale(a_pow);
}

Cmp Series::sign(unsigned budget_bits) const {
    if (terms_.empty()) {
        if (is_exact()) return Cmp::Equal;
        throw precision_exhausted("series is zero up to its precision " + known_below_->str() +
                                  "; sign undetermined");
    }
    return terms_.front().coeff.sign(budget_bits);
}

Cmp compare(const Series& a, const Series& b, unsigned budget_bits) {
    return (a - b).sign(budget_bits);
}

Cmp compare(const Series& a, const Series& b) {
    return compare(a, b, Constant::default_budget());
}

Series::StandardPart Series::standard_part() const {
    const Exponent zero = Exponent::rational(Rat(0), group_);
    for (const auto& t : terms_) {
        if (compare(t.exp, zero) == Cmp::Less) return {true, Constant()};
        break; // terms sorted: only the first can be negative
    }
    if (known_below_ && compare(*known_below_, zero) != Cmp::Greater)
        throw precision_exhausted("standard part needs knowledge at exponent 0 (precision " +
                                  known_below_->str() + ")");
    return {false, coeff_at(zero)};
}

bool Series::is_bounded() const {
    auto sp = standard_part();
    return !sp.infinite;
}

bool Series::is_infinitesimal() const {
    auto sp = standard_part();
    return !sp.infinite && sp.value.is_zero();
}

bool Series::equal_up_to_precision(const Series& a, const Series& b) {
    Series d = a - b;
    return d.terms().empty();
}

double Series::instantiate(double tau0) const {
    double acc = 0;
    for (const auto& t : terms_)
        acc += t.coeff.to_double() * std::pow(tau0, t.exp.embed().to_double());
    return acc;
}

std::string Series::str() const {
    std::string out;
    auto term_str = [](const Term& t) -> std::string {
        const bool zero_exp = t.exp.is_zero();
        std::string c = t.coeff.str();
        bool simple_coeff = c.find_first_of("+-") == std::string::npos ||
                            (c.size() > 1 && c.find_first_of("+-", 1) == std::string::npos &&
                             c[0] == '-');
        if (zero_exp) return simple_coeff ? c : "(" + c + ")";
        std::string tp = "t";
        if (!(t.exp == Exponent::rational(Rat(1), t.exp.group()))) tp += "^(" + t.exp.str() + ")";
        if (t.coeff.is_one()) return tp;
        if ((-t.coeff).is_one()) return "-" + tp;
        return (simple_coeff ? c : "(" + c + ")") + "*" + tp;
    };
    if (terms_.empty()) {
        out = "0";
    } else {
        for (size_t i = 0; i < terms_.size(); ++i) {
            std::string s = term_str(terms_[i]);
            if (i == 0) {
                out = s;
            } else if (!s.empty() && s[0] == '-') {
                out += " - " + s.substr(1);
            } else {
                out += " + " + s;
            }
        }
    }
    if (known_below_) out += " + O(t^(" + known_below_->str() + "))";
    return out;
}

} // namespace hm
