#pragma once

#include "hahnmeasure/calculus.hpp"

namespace hm {

// Section of the valuation at desk scale: positive series images for the
// negative generators gamma_i = -e_i of the exponent group, with
// ord(s(gamma_i)) = gamma_i; the extension to the whole group is
// multiplicative through rational powers. The field embedding of a Lebesgue
// datum is implicit: the ambient field is the series field itself and
// sections act by unit rescalings of t^gamma.
class Section {
public:
    // images[i] is s(-e_i); the default section sends -e_i to t^(-e_i).
    Section(GroupPtr group, std::vector<Series> images);
    static Section standard(GroupPtr group);

    const GroupPtr& group() const { return group_; }
    // s(gamma) for an arbitrary group element.
    Series image(const Exponent& gamma) const;
    const Series& generator_image(size_t i) const { return images_[i]; }

private:
    GroupPtr group_;
    std::vector<Series> images_;
};

// Measure of the hyperbola region [1, c] x [0, 1/x] with respect to a
// section: -embed(ord c) X plus the log of the unit part of c against the
// section image.
AlgebraElement hyperbola_measure(const Section& s, const Series& c);

// Ring map of the Lebesgue algebra determined by an image of X of the form
// r X + g (r real positive, g bounded); fixes series coefficients.
class AlgebraMap {
public:
    explicit AlgebraMap(AlgebraElement x_image);
    static AlgebraMap identity(GroupPtr group);
    const AlgebraElement& x_image() const { return x_image_; }
    AlgebraElement operator()(const AlgebraElement& p) const;
    AlgebraMap compose(const AlgebraMap& then) const; // this after then

private:
    AlgebraElement x_image_;
};

// Isomorphism construction for Gamma = Q: X -> X + f*/r with
// f* = partial_log(s'(gamma0)/s(gamma0)), gamma0 the negative generator and
// r = -embed(gamma0). Verifies the defining property on the generator.
AlgebraMap build_isomorphism_Q(const Section& s, const Section& s_prime);

// Non-uniqueness witness at rank 2: the alpha data give the pair (X, zX)
// and the beta data (X, zX + g) with g = partial_log(u) != 0; no map of the
// admitted form r X + g' can transport one pair to the other.
struct NonIsomorphismReport {
    AlgebraElement alpha_A, alpha_B; // X, zeta X
    AlgebraElement beta_A, beta_B;   // X, zeta X + g
    Series g;                        // log of the unit, nonzero
    bool non_isomorphic = false;
    std::string explanation;
};
NonIsomorphismReport verify_nonisomorphism_rank2(const Constant& zeta, const Series& unit);

// Reduced-measure invariance: reduce(lambda^s) is section-independent across the
// test gallery (interval sets and hyperbola regions given by their tops).
struct ReducedInvarianceReport {
    struct Item {
        std::string what;
        ReducedElement lhs;
        ReducedElement rhs;
        bool equal;
    };
    std::vector<Item> items;
    bool all_equal = true;
};
ReducedInvarianceReport reduced_invariance_check(const Section& s, const Section& s_prime,
                                                 const std::vector<SetOneD>& sets,
                                                 const std::vector<Series>& hyperbola_tops);

} // namespace hm
