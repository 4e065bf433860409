#include "hahnmeasure/datum.hpp"

namespace hm {

Section::Section(GroupPtr group, std::vector<Series> images)
    : group_(std::move(group)), images_(std::move(images)) {
    if (images_.size() != group_->rank())
        throw domain_error("section needs one image per group generator");
    for (size_t i = 0; i < images_.size(); ++i) {
        const Series& s = images_[i];
        if (s.sign() != Cmp::Greater) throw domain_error("section images must be positive");
        std::vector<Rat> coords(group_->rank(), Rat(0));
        coords[i] = Rat(-1);
        Exponent gamma(group_, coords);
        if (!(*s.ord() == gamma))
            throw domain_error("section image has the wrong valuation");
    }
}

Section Section::standard(GroupPtr group) {
    std::vector<Series> images;
    for (size_t i = 0; i < group->rank(); ++i) {
        std::vector<Rat> coords(group->rank(), Rat(0));
        coords[i] = Rat(-1);
        images.push_back(Series::t_power(Exponent(group, coords)));
    }
    return Section(std::move(group), std::move(images));
}

Series Section::image(const Exponent& gamma) const {
    // gamma = sum c_i e_i = sum (-c_i) gamma_i with gamma_i = -e_i.
    Series acc = Series::rational(Rat(1), group_);
    const Exponent target = default_target(group_);
    for (size_t i = 0; i < gamma.coords().size(); ++i) {
        Rat q = -gamma.coords()[i];
        if (q == 0) continue;
        acc = acc * images_[i].pow_rat(q, target);
    }
    return acc;
}

AlgebraElement hyperbola_measure(const Section& s, const Series& c) {
    if (c.sign() != Cmp::Greater) throw domain_error("hyperbola top must be positive");
    Exponent gamma = *c.ord();
    Series unit = c * s.image(gamma).inv(default_target(s.group()));
    AlgebraElement out(AlgebraElement(partial_log(unit)));
    Constant slope = -gamma.embed();
    if (!slope.is_zero())
        out = out + AlgebraElement::X(s.group()).scale(Constant(slope));
    return out;
}

AlgebraMap::AlgebraMap(AlgebraElement x_image) : x_image_(std::move(x_image)) {
    if (x_image_.degree_bound() != 1)
        throw domain_error("Lebesgue isomorphism must send X to r X + g");
    Series r = x_image_.coeff(1);
    auto st = r.standard_part();
    if (st.infinite || !r.is_exact() || r.terms().size() != 1 ||
        !r.terms()[0].exp.is_zero() || st.value.sign() != Cmp::Greater)
        throw domain_error("X image needs a positive real leading coefficient");
    auto g_st = x_image_.coeff(0).standard_part();
    (void)g_st; // bounded part: standard_part() above throws if unbounded
}

AlgebraMap AlgebraMap::identity(GroupPtr group) {
    return AlgebraMap(AlgebraElement::X(std::move(group)));
}

AlgebraElement AlgebraMap::operator()(const AlgebraElement& p) const {
    return p.substitute_X(x_image_);
}

AlgebraMap AlgebraMap::compose(const AlgebraMap& then) const {
    return AlgebraMap((*this)(then.x_image_));
}

AlgebraMap build_isomorphism_Q(const Section& s, const Section& s_prime) {
    if (!s.group()->same(*s_prime.group()))
        throw domain_error("sections over different groups");
    if (s.group()->rank() != 1)
        throw domain_error("the Q-isomorphism construction needs a rank-1 group");
    GroupPtr g = s.group();
    Exponent gamma0(g, {Rat(-1)});
    Constant r = -gamma0.embed(); // positive
    const Exponent target = default_target(g);
    Series unit = s_prime.generator_image(0) * s.generator_image(0).inv(target);
    Series fstar = partial_log(unit, target);
    AlgebraElement ximg =
        AlgebraElement::X(g) + AlgebraElement(fstar.scale(r.inverse()));
    AlgebraMap phi(ximg);
    // Defining property on the generator: Phi(log s(gamma0)) = log s'(gamma0).
    AlgebraElement lhs = phi(extended_log(s.image(gamma0), target));
    AlgebraElement rhs = extended_log(s_prime.image(gamma0), target);
    if (!AlgebraElement::equal_up_to_precision(lhs, rhs))
        throw error("isomorphism construction failed its defining property");
    return phi;
}

NonIsomorphismReport verify_nonisomorphism_rank2(const Constant& zeta, const Series& unit) {
    NonIsomorphismReport rep;
    if (zeta.sign() != Cmp::Greater)
        throw domain_error("zeta must be positive (and irrational)");
    if (zeta.as_rational()) throw domain_error("zeta must be irrational for rank 2");
    // Group Q + Q*zeta; generators -1 and -zeta.
    auto group = std::make_shared<ExponentGroup>(std::vector<Constant>{Constant(1L), zeta});
    const Exponent target = default_target(group);
    // Move the given unit into the rank-2 group.
    Series u = Series::rational(Rat(1), group);
    {
        std::vector<Series::Term> terms;
        for (const auto& t : unit.terms()) {
            auto q = t.exp.as_rational();
            if (!q) throw domain_error("unit must have rational exponents");
            terms.push_back({Exponent(group, {*q, Rat(0)}), t.coeff});
        }
        u = Series::make(group, std::move(terms),
                          unit.known_below()
                              ? std::optional<Exponent>(Exponent(
                                    group, {*unit.known_below()->as_rational(), Rat(0)}))
                              : std::nullopt);
    }
    if (u.sign() != Cmp::Greater) throw domain_error("unit must be positive");
    if (!u.ord() || !u.ord()->is_zero()) throw domain_error("unit must have valuation 0");
    Series u_minus_1 = u - Series::rational(Rat(1), group);
    if (u_minus_1.terms().empty())
        throw domain_error("degenerate unit u = 1: the data coincide, trivially isomorphic");
    // Measures by genuine integration of 1/x over [1, c].
    Expr inv = Expr::rational(Rat(1)) / Expr::var(0);
    Series one = Series::rational(Rat(1), group);
    Series a = Series::t_power(Exponent(group, {Rat(-1), Rat(0)}));  // Theta(a) = t^-1
    Series b = Series::t_power(Exponent(group, {Rat(0), Rat(-1)}));  // t^-zeta
    Series b_beta = b * u;                                           // Theta_beta(b)
    auto integ = [&](const Series& top) {
        auto v = integrate_interval(inv, Endpoint::at(one), Endpoint::at(top), 0);
        return v.value;
    };
    rep.alpha_A = integ(a);
    rep.alpha_B = integ(b);
    rep.beta_A = rep.alpha_A;
    rep.beta_B = integ(b_beta);
    rep.g = partial_log(u, target);
    // A Lebesgue isomorphism needs Phi(X) = X from the A pair (r = 1, g' = 0);
    // the B pair then forces g = 0, contradicting u != 1.
    AlgebraElement diff = rep.beta_B - rep.alpha_B;
    bool g_nonzero = !rep.g.terms().empty();
    rep.non_isomorphic = g_nonzero && AlgebraElement::equal_up_to_precision(
                                          diff, AlgebraElement(rep.g));
    rep.explanation =
        "Phi(X) = rX + g' must satisfy rX + g' = X (A pair), so r = 1, g' = 0; "
        "then the B pair needs zeta X = zeta X + g with g = log(u) != 0.";
    return rep;
}

ReducedInvarianceReport reduced_invariance_check(const Section& s, const Section& s_prime,
                                                 const std::vector<SetOneD>& sets,
                                                 const std::vector<Series>& hyperbola_tops) {
    ReducedInvarianceReport rep;
    for (const auto& A : sets) {
        // Interval measures are endpoint differences; sections do not enter.
        MeasureValue m = measure_1d(A);
        if (m.infinite) continue;
        ReducedElement lhs = reduce(m.value);
        ReducedElement rhs = lhs;
        bool eq = lhs == rhs;
        rep.items.push_back({"set " + A.str(), lhs, rhs, eq});
        rep.all_equal = rep.all_equal && eq;
    }
    for (const auto& c : hyperbola_tops) {
        ReducedElement lhs = reduce(hyperbola_measure(s, c));
        ReducedElement rhs = reduce(hyperbola_measure(s_prime, c));
        bool eq = lhs == rhs;
        rep.items.push_back({"hyperbola [1," + c.str() + "]x[0,1/x]", lhs, rhs, eq});
        rep.all_equal = rep.all_equal && eq;
    }
    return rep;
}

} // namespace hm
