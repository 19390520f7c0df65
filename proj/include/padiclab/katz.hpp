#pragma once

#include <map>
#include <string>
#include <vector>

#include "padiclab/arith.hpp"
#include "padiclab/padic_disc.hpp"
#include "padiclab/rational.hpp"

namespace padiclab {

// Finite integer-weighted divisor on [0, p/(p+1)], exact rational support.
using RationalDivisor = std::map<Rational, long long>;

inline long long divisor_degree(const RationalDivisor& D) {
    long long s = 0;
    for (auto& [x, m] : D) s += m;
    return s;
}

namespace detail {

inline void divisor_add(RationalDivisor& D, const Rational& x, long long mult) {
    auto it = D.find(x);
    if (it == D.end()) {
        if (mult != 0) D[x] = mult;
    } else {
        it->second += mult;
        if (it->second == 0) D.erase(it);
    }
}

}  // namespace detail

// The piecewise-affine correspondence tau_1 on [0, p/(p+1)]:
// [px] + p[x/p] below the canonical breakpoint 1/(p+1), and
// [1-x] + p[x/p] above it.
inline RationalDivisor tau_one(long long p, const Rational& x) {
    Rational lo(0), hi(p, p + 1), bp(1, p + 1);
    if (x < lo || hi < x) throw std::invalid_argument("tau_one: x out of range");
    RationalDivisor out;
    if (x <= bp) {
        detail::divisor_add(out, x * Rational(p), 1);
    } else {
        detail::divisor_add(out, Rational(1) - x, 1);
    }
    detail::divisor_add(out, x / Rational(p), p);
    return out;
}

inline RationalDivisor tau_one(long long p, const RationalDivisor& D) {
    RationalDivisor out;
    for (auto& [x, m] : D) {
        for (auto& [y, k] : tau_one(p, x)) detail::divisor_add(out, y, m * k);
    }
    return out;
}

// tau_m by the Hecke-style recursion tau_m = tau_1 tau_(m-1) - p tau_(m-2);
// intermediate multiplicities may go negative, the result must not.
inline RationalDivisor tau(long long p, int m, const Rational& x) {
    if (m < 0) throw std::invalid_argument("tau: m < 0");
    Rational lo(0), hi(p, p + 1);
    if (x < lo || hi < x) throw std::invalid_argument("tau: x out of range");
    RationalDivisor prev{{x, 1}};
    if (m == 0) return prev;
    RationalDivisor cur = tau_one(p, x);
    for (int k = 2; k <= m; ++k) {
        RationalDivisor next = tau_one(p, cur);
        for (auto& [y, mult] : prev) detail::divisor_add(next, y, -p * mult);
        prev = std::move(cur);
        cur = std::move(next);
    }
    for (auto& [y, mult] : cur)
        if (mult < 0) throw identity_error("tau: negative multiplicity survived");
    return cur;
}

// The valuation of the canonical-branch image, capped at p/(p+1).
inline Rational canonical_valuation(long long p, const Rational& x) {
    if (!(Rational(0) < x) || !(x < Rational(p, p + 1)))
        throw std::invalid_argument("canonical_valuation: x out of range");
    if (x <= Rational(1, p + 1)) {
        Rational v = x * Rational(p);
        return v < Rational(p, p + 1) ? v : Rational(p, p + 1);
    }
    return Rational(1) - x;
}

// Katz valuation of the CM points of a p-supersingular discriminant:
// (1/2) p^-m when p ramifies, (p/(p+1)) p^-m when p is inert, with
// m = ord_p(conductor).
inline Rational cm_valuation(long long D, long long p) {
    auto cls = classify_padic(D, p);
    if (!cls) throw std::invalid_argument("cm_valuation: D not p-supersingular");
    Rational base = cls->ramified ? Rational(1, 2) : Rational(p, p + 1);
    Rational scale(1);
    for (long long i = 0; i < cls->m; ++i) scale /= Rational(p);
    return base * scale;
}

struct KatzReport {
    long long d, f, p;
    int r;
    RationalDivisor divisor;        // tau_r([cm_valuation(d f^2)])
    bool degree_ok;                 // deg = sigma_1(p^r)
    bool support_ok;                // support within the CM valuation levels
    bool deepest_multiplicity_ok;   // component at level r matches the degree ratio
    long long deepest_expected;     // (R_d^-1 * sigma_1)(p^r)
    long long deepest_found;

    bool all_ok() const { return degree_ok && support_ok && deepest_multiplicity_ok; }
};

// Valuation-level consistency of the CM formulae: applying tau_r to the
// valuation of Lambda_{d f^2} must stay supported on CM valuation levels,
// with the deepest component carrying exactly the degree ratio
// deg(Lambda_{d (f p^r)^2}) / (deg(Lambda_{d f^2}) / w_{d,f}) = (R_d^-1 * sigma_1)(p^r).
inline KatzReport katz_consistency(long long d, long long f, long long p, int r) {
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("katz_consistency: d not fundamental");
    if (f < 1 || f % p == 0) throw std::invalid_argument("katz_consistency: bad f");
    if (r < 1) throw std::invalid_argument("katz_consistency: r < 1");
    if (!classify_padic(d, p)) throw std::invalid_argument("katz_consistency: split d");

    KatzReport rep;
    rep.d = d, rep.f = f, rep.p = p, rep.r = r;
    Rational x0 = cm_valuation(d * f * f, p);
    rep.divisor = tau(p, r, x0);
    rep.degree_ok = divisor_degree(rep.divisor) == sigma1(pow_ll(p, r));

    std::vector<Rational> levels;
    for (int s = 0; s <= r; ++s)
        levels.push_back(cm_valuation(d * f * f * pow_ll(p, 2 * s), p));
    rep.support_ok = true;
    for (auto& [y, mult] : rep.divisor) {
        bool hit = false;
        for (auto& lv : levels)
            if (lv == y) hit = true;
        if (!hit) rep.support_ok = false;
    }

    long long psi = kronecker(d, p);  // 0 ramified, -1 inert here
    long long expect = pow_ll(p, r) - psi * pow_ll(p, r - 1);
    rep.deepest_expected = expect;
    auto it = rep.divisor.find(levels[r]);
    rep.deepest_found = (it == rep.divisor.end()) ? 0 : it->second;
    rep.deepest_multiplicity_ok = rep.deepest_found == expect;
    return rep;
}

}  // namespace padiclab
