#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "padiclab/arith.hpp"
#include "padiclab/forms.hpp"

namespace padiclab {

struct FundamentalFactorization {
    long long d;  // fundamental discriminant
    long long f;  // conductor, D = d f^2
};

inline bool is_fundamental_discriminant(long long d) {
    if (d >= 0) return false;
    long long m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) {
        long long n = -d;
        for (long long q = 2; q * q <= n; ++q)
            if (n % (q * q) == 0) return false;
        return true;
    }
    if (m4 != 0) return false;
    long long d0 = d / 4;
    long long m = ((d0 % 4) + 4) % 4;
    if (m != 2 && m != 3) return false;
    long long n = -d0;
    for (long long q = 2; q * q <= n; ++q)
        if (n % (q * q) == 0) return false;
    return true;
}

inline FundamentalFactorization factor_discriminant(long long D) {
    if (!is_discriminant(D))
        throw std::invalid_argument("factor_discriminant: not a discriminant");
    long long best = 0;
    for (long long f = 1; f * f <= -D; ++f) {
        if (D % (f * f)) continue;
        if (is_fundamental_discriminant(D / (f * f))) best = f;
    }
    if (best == 0) throw std::logic_error("factor_discriminant: no fundamental part");
    return {D / (best * best), best};
}

// d is p-supersingular iff p is ramified or inert in Q(sqrt(d)).
inline bool is_p_supersingular(long long D, long long p) {
    long long d = factor_discriminant(D).d;
    if (p == 2) {
        long long m = ((d % 8) + 8) % 8;
        return m != 1;
    }
    return kronecker(d, p) != 1;
}

// Fundamental p-adic discriminant classes, Appendix A tables.
// Odd p (ids 0..2):   0 = nonsquare units (unramified),
//                     1 = p * (squares),  2 = p * (nonsquares)   (both ramified).
// p = 2 (ids 0..6):   cosets -3+8Z2, -4+32Z2, 12+32Z2, 8+64Z2, -8+64Z2,
//                     24+64Z2, -24+64Z2, attached to d0 = -3,-1,-5,-14,-2,-10,-6.
struct PadicDiscClass {
    long long p;
    int fundamental_id;
    long long m;    // padic disc = fundamental class * p^(2m)
    bool ramified;

    // canonical local field generator d0 for p = 2 classes (eq. of App. A)
    long long two_adic_d0() const {
        static const std::array<long long, 7> d0s = {-3, -1, -5, -14, -2, -10, -6};
        return d0s[fundamental_id];
    }
};

inline int fundamental_class_count(long long p) { return p == 2 ? 7 : 3; }

namespace detail {
// (representative, modulus) pairs for the seven fundamental 2-adic classes
inline constexpr std::array<std::pair<long long, long long>, 7> kTwoAdicClasses = {{
    {-3, 8}, {-4, 32}, {12, 32}, {8, 64}, {-8, 64}, {24, 64}, {-24, 64},
}};
}  // namespace detail

// Classify D = d f^2 into its p-adic discriminant class; nullopt when D is
// not p-supersingular (Lemma on p-adic discriminants: membership in a p-adic
// discriminant is equivalent to supersingularity).
inline std::optional<PadicDiscClass> classify_padic(long long D, long long p) {
    auto [d, f] = factor_discriminant(D);
    long long m = ord_p(f, p);
    if (p == 2) {
        long long dm = ((d % 8) + 8) % 8;
        if (dm == 1) return std::nullopt;
        for (int id = 0; id < 7; ++id) {
            auto [rep, mod] = detail::kTwoAdicClasses[id];
            long long r = ((d - rep) % mod + mod) % mod;
            if (r == 0) return PadicDiscClass{p, id, m, id != 0};
        }
        throw std::logic_error("classify_padic: 2-adic class table incomplete");
    }
    if (kronecker(d, p) == 1) return std::nullopt;
    if (d % p != 0) return PadicDiscClass{p, 0, m, false};
    int id = (kronecker(d / p, p) == 1) ? 1 : 2;
    return PadicDiscClass{p, id, m, true};
}

// Check membership of a discriminant in the coset fundamental_class * p^(2m);
// the round-trip test for classify_padic.
inline bool padic_class_contains(const PadicDiscClass& cls, long long Delta) {
    long long p = cls.p;
    long long p2m = 1;
    for (long long i = 0; i < 2 * cls.m; ++i) p2m *= p;
    if (Delta % p2m) return false;
    long long core = Delta / p2m;
    if (p == 2) {
        auto [rep, mod] = detail::kTwoAdicClasses[cls.fundamental_id];
        return ((core - rep) % mod + mod) % mod == 0;
    }
    if (cls.fundamental_id == 0)
        return core % p != 0 && kronecker(core % p, p) == -1;
    if (core % p != 0 || (core / p) % p == 0) return false;
    long long u = (core / p) % p;
    return kronecker(u, p) == (cls.fundamental_id == 1 ? 1 : -1);
}

// Norm group table: does the p-adic unit n lie in Nr(O_Q^x) for the
// quadratic field attached to the fundamental class?
inline bool norm_group_contains(long long n, const PadicDiscClass& cls) {
    long long p = cls.p;
    if (n % p == 0) throw std::invalid_argument("norm_group_contains: n not a unit");
    if (!cls.ramified) return true;  // unramified: all units are norms
    if (p != 2) return kronecker(n, p) == 1;
    long long d0 = cls.two_adic_d0();
    long long n8 = ((n % 8) + 8) % 8;
    if (d0 == -1 || d0 == -5) return n8 == 1 || n8 == 5;  // 1 + 4 Z_2
    if (d0 == -2 || d0 == -10) return n8 == 1 || n8 == 3;
    return n8 == 1 || n8 == 7;  // d0 = -6 or -14
}

// w_{d,f} = #(O_{d,f}^x) / 2
inline long long unit_weight(long long d, long long f) {
    if (f == 1 && d == -3) return 3;
    if (f == 1 && d == -4) return 2;
    return 1;
}

// Factor a fundamental discriminant into pairwise coprime prime quadratic
// discriminants (+-q for odd primes q, and -4, +-8 at 2).
inline std::vector<long long> prime_quadratic_factorization(long long d) {
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("prime_quadratic_factorization: not fundamental");
    std::vector<long long> out;
    long long rest = d;
    for (auto [q, e] : factorize(-d)) {
        if (q == 2) continue;
        long long qs = (q % 4 == 1) ? q : -q;
        out.push_back(qs);
        rest /= qs;
    }
    if (rest != 1) {
        if (rest != -4 && rest != 8 && rest != -8)
            throw std::logic_error("prime_quadratic_factorization: bad 2-part");
        out.push_back(rest);
    }
    return out;
}

// The prime quadratic discriminant p* at p in the factorization of d (d
// fundamental, p | d).
inline long long prime_quadratic_factor_at(long long d, long long p) {
    for (long long q : prime_quadratic_factorization(d)) {
        long long qa = q < 0 ? -q : q;
        if (qa % p == 0) return q;
    }
    throw std::invalid_argument("prime_quadratic_factor_at: p does not divide d");
}

}  // namespace padiclab
