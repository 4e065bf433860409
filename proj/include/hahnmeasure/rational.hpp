#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hm {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Largest integer <= q.
inline Int rat_floor(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Exact n-th root of a non-negative integer, if it exists.
std::optional<Int> exact_root(const Int& a, unsigned long n);

// Factor n >= 1 into prime powers. Trial division with a bound; a residual
// cofactor beyond the bound is returned as-is (treated atomically by callers,
// consistently so since the factorization is deterministic).
std::vector<std::pair<Int, unsigned long>> factor(Int n);

std::string rat_string(const Rat& q);

} // namespace hm
