#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hahnmeasure/constant.hpp"

namespace hm {

// Finitely generated archimedean ordered abelian group Gamma embedded in
// (R,+): elements are rational coordinate vectors over a fixed basis of real
// values b_1,...,b_k. Q-linear independence of the basis is a constructor
// contract (not verified; undecidable in general).
class ExponentGroup {
public:
    explicit ExponentGroup(std::vector<Constant> basis);

    static std::shared_ptr<const ExponentGroup> rationals();        // basis {1}
    static std::shared_ptr<const ExponentGroup> with_sqrt2();       // basis {1, sqrt 2}

    size_t rank() const { return basis_.size(); }
    const Constant& basis(size_t i) const { return basis_[i]; }
    bool same(const ExponentGroup& o) const;

    std::string str() const;

private:
    std::vector<Constant> basis_;
};

using GroupPtr = std::shared_ptr<const ExponentGroup>;

class Exponent {
public:
    Exponent(); // zero of Q
    Exponent(GroupPtr group, std::vector<Rat> coords);
    static Exponent rational(const Rat& q, GroupPtr group = ExponentGroup::rationals());

    const GroupPtr& group() const { return group_; }
    const std::vector<Rat>& coords() const { return coords_; }
    bool is_zero() const;
    // Exact rational value when the group is Q (or the coordinate vector is
    // supported on the unit basis element).
    std::optional<Rat> as_rational() const;

    Exponent operator+(const Exponent& o) const;
    Exponent operator-(const Exponent& o) const;
    Exponent operator-() const;
    Exponent scale(const Rat& q) const;
    bool operator==(const Exponent& o) const;

    // Order-preserving embedding into the reals: sum coords_i * b_i.
    Constant embed() const;

    std::string str() const;

private:
    GroupPtr group_;
    std::vector<Rat> coords_;
};

Cmp compare(const Exponent& a, const Exponent& b, unsigned budget_bits);
Cmp compare(const Exponent& a, const Exponent& b);

// Archimedean witness: least-ish n in N with |a| <= n|b|; both nonzero.
unsigned long archimedean_witness(const Exponent& a, const Exponent& b);

} // namespace hm
