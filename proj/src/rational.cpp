#include "hahnmeasure/rational.hpp"

namespace hm {

std::optional<Int> exact_root(const Int& a, unsigned long n) {
    if (a < 0) return std::nullopt;
    Int r;
    int exact = mpz_root(r.get_mpz_t(), a.get_mpz_t(), n);
    if (exact) return r;
    return std::nullopt;
}

std::vector<std::pair<Int, unsigned long>> factor(Int n) {
    std::vector<std::pair<Int, unsigned long>> out;
    if (n <= 1) return out;
    static const unsigned long kTrialBound = 1000000;
    unsigned long count = 0;
    for (Int p = 2; p * p <= n; ++p) {
        if (mpz_cmp_ui(p.get_mpz_t(), kTrialBound) > 0) break;
        count = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++count;
        }
        if (count) out.emplace_back(p, count);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::string rat_string(const Rat& q) { return q.get_str(); }

} // namespace hm
