#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padiclab/classpoly.hpp"
#include "padiclab/forms.hpp"
#include "padiclab/padic_disc.hpp"
#include "padiclab/rational.hpp"
#include "padiclab/ssgraph.hpp"

namespace padiclab {

// v(Lambda_D): multiplicities of the supersingular j-invariants among the
// roots of H_D mod p over F_{p^2}; entries indexed like the SupersingularSet.
struct ReductionVector {
    long long p;
    long long D;
    std::vector<long long> entries;
    long long deg;  // = h(D)
};

inline ReductionVector reduction_vector(const SupersingularSet& ss, long long D,
                                        long long cap = 40000) {
    if (!classify_padic(D, ss.p()))
        throw std::invalid_argument("reduction_vector: D not p-supersingular");
    ClassPoly H = hilbert_class_poly(D, cap);
    const Fp2Ctx& F = ss.ctx();
    auto cmod = H.mod_p(ss.p());
    PolyFp2 poly;
    for (long long c : cmod) poly.push_back(F.make(c));
    poly_trim(F, poly);
    if (poly.size() != H.coeffs.size())
        throw identity_error("reduction_vector: H_D mod p dropped degree");
    ReductionVector out{ss.p(), D, std::vector<long long>(ss.size(), 0),
                        (long long)H.coeffs.size() - 1};
    PolyFp2 rest = poly;
    for (size_t t = 0; t < ss.size(); ++t) {
        int mult = 0;
        while (rest.size() > 1 && F.is_zero(poly_eval(F, rest, ss.points()[t].j))) {
            rest = poly_deflate(F, rest, ss.points()[t].j);
            ++mult;
        }
        out.entries[t] = mult;
    }
    if (rest.size() != 1)
        throw identity_error("reduction_vector: non-supersingular root of H_D mod p");
    return out;
}

// Deviation of the normalized reduction vector from the homogeneous vector
// v^ss (the statistic of the residual equidistribution theorem).
struct ResidualReport {
    long long d, f, D;
    long long deg;
    std::vector<long long> vector;
    Rational max_deviation;
};

inline ResidualReport residual_report(const SupersingularSet& ss, long long d, long long f,
                                      long long cap = 40000) {
    long long D = d * f * f;
    auto v = reduction_vector(ss, D, cap);
    auto vss = ss.homogeneous_vector();
    Rational maxdev(0);
    for (size_t i = 0; i < ss.size(); ++i) {
        Rational dev = Rational(v.entries[i], v.deg) - vss[i];
        if (dev < Rational(0)) dev = -dev;
        if (maxdev < dev) maxdev = dev;
    }
    return {d, f, D, v.deg, v.entries, maxdev};
}

// The three exact identities relating reduction vectors, Brandt matrices and
// degree formulas; all are theorems, so any mismatch signals a defect.
struct ZhangReport {
    long long d, f, p;
    bool id_hecke;                 // v(L_{df^2})/w_{d,f} = sum R_d^-1(f/f0) B(f0)^T v(L_d)/w_{d,1}
    bool id_degree;                // h(df^2) = (h(d)/w_{d,1}) (R_d^-1 * sigma_1)(f)
    std::vector<std::pair<int, bool>> id_ppower;  // (r, ok) for |D p^(2r)| <= cap
    std::string detail;            // set on the first failing identity

    bool all_ok() const {
        if (!id_hecke || !id_degree) return false;
        for (auto [r, ok] : id_ppower)
            if (!ok) return false;
        return true;
    }
};

// Optional cross-call cache of reduction vectors keyed by discriminant,
// for grids that revisit the same d with several conductors.
using ReductionVectorCache = std::map<long long, ReductionVector>;

inline ReductionVector cached_reduction_vector(const SupersingularSet& ss, long long D,
                                               long long cap, ReductionVectorCache* cache) {
    if (!cache) return reduction_vector(ss, D, cap);
    auto it = cache->find(D);
    if (it == cache->end()) it = cache->emplace(D, reduction_vector(ss, D, cap)).first;
    return it->second;
}

inline ZhangReport zhang_consistency(const SupersingularSet& ss, long long d, long long f,
                                     long long cap = 40000, int max_ppower = 2,
                                     ReductionVectorCache* cache = nullptr) {
    long long p = ss.p();
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("zhang_consistency: d not fundamental");
    if (f < 1 || f % p == 0) throw std::invalid_argument("zhang_consistency: bad f");
    for (auto [q, e] : factorize(f))
        if (q > 7) throw std::invalid_argument("zhang_consistency: unsupported factor of f");

    ZhangReport rep{d, f, p, true, true, {}, ""};
    long long D = d * f * f;
    auto vd = cached_reduction_vector(ss, d, cap, cache);
    auto vD = cached_reduction_vector(ss, D, cap, cache);
    long long w1 = unit_weight(d, 1), wf = unit_weight(d, f);
    ArithFn Rinv = ArithFn::R(d, std::max(f, 2LL)).dirichlet_inverse();

    // (1) Hecke/Zhang vector identity
    std::vector<Rational> rhs(ss.size(), Rational(0));
    for (long long f0 : divisors(f)) {
        auto B = brandt_matrix(ss, f0);
        long long coef = Rinv(f / f0);
        if (coef == 0) continue;
        for (size_t i = 0; i < ss.size(); ++i) {
            Rational acc(0);
            for (size_t jj = 0; jj < ss.size(); ++jj)
                acc += Rational(B.entries[jj][i]) * Rational(vd.entries[jj], w1);
            rhs[i] += Rational(coef) * acc;
        }
    }
    for (size_t i = 0; i < ss.size(); ++i) {
        if (Rational(vD.entries[i], wf) != rhs[i]) {
            rep.id_hecke = false;
            rep.detail = "hecke identity fails at class " + std::to_string(i);
            break;
        }
    }

    // (2) degree formula (for f = 1 it degenerates to h(d) = h(d))
    if (f >= 2) {
        ArithFn conv = Rinv.convolve(ArithFn::sigma1_fn(f));
        Rational want = Rational(vd.deg, w1) * Rational(conv(f));
        if (Rational(vD.deg) != want) {
            rep.id_degree = false;
            if (rep.detail.empty()) rep.detail = "degree formula fails";
        }
    }

    // (3) p-power invariance of the normalized vector, within the class
    // polynomial cap
    for (int r = 1; r <= max_ppower; ++r) {
        long long Dp = D * pow_ll(p, 2 * r);
        if (-Dp > cap) break;
        auto vDp = cached_reduction_vector(ss, Dp, cap, cache);
        bool ok = true;
        for (size_t i = 0; i < ss.size(); ++i)
            if (vDp.entries[i] * vD.deg != vD.entries[i] * vDp.deg) ok = false;
        rep.id_ppower.push_back({r, ok});
        if (!ok && rep.detail.empty())
            rep.detail = "p-power invariance fails at r = " + std::to_string(r);
    }
    return rep;
}

struct GenusPartition {
    long long deg_plus, deg_minus;
};

struct character_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Genus character on Cl(d) at the prime quadratic factor p* of d, evaluated
// through represented primes; lifted to conductor f by the norm-group-split
// convolution formula.
inline GenusPartition genus_partition(long long d, long long f, long long p,
                                      long long search_box = 600) {
    if (!is_fundamental_discriminant(d) || d % p != 0)
        throw std::invalid_argument("genus_partition: need d fundamental, p | d");
    if (f < 1 || f % p == 0) throw std::invalid_argument("genus_partition: bad f");
    long long pstar = prime_quadratic_factor_at(d, p);
    auto cls = classify_padic(d, p).value();

    long long degp = 0, degm = 0;
    for (const auto& form : class_group(d)) {
        std::optional<long long> q;
        for (long long box = 30; box <= search_box && !q; box *= 3)
            q = represented_prime(form, d, box);
        if (!q)
            throw character_error("genus_partition: no represented prime coprime to d");
        int chi = kronecker(pstar, *q);
        if (chi == 1) ++degp;
        else ++degm;
    }
    if (f == 1) return {degp, degm};

    long long w1 = unit_weight(d, 1);
    ArithFn Rinv = ArithFn::R(d, f).dirichlet_inverse();
    long long s_in = 0, s_out = 0;
    for (long long f0 : divisors(f)) {
        long long term = Rinv(f / f0) * sigma1(f0);
        if (norm_group_contains(f0, cls)) s_in += term;
        else s_out += term;
    }
    Rational plus = Rational(degp, w1) * Rational(s_in) + Rational(degm, w1) * Rational(s_out);
    Rational minus = Rational(degm, w1) * Rational(s_in) + Rational(degp, w1) * Rational(s_out);
    if (!plus.is_integer() || !minus.is_integer())
        throw identity_error("genus_partition: non-integral degree split");
    return {plus.num(), minus.num()};
}

}  // namespace padiclab
