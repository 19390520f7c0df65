#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "padiclab/quadform.hpp"
#include "padiclab/rational.hpp"
#include "padiclab/spheres.hpp"

namespace padiclab {

using Complex = std::complex<double>;

// Function on an ordered residue set Sigma, with <f,g> = sum f conj(g).
struct FunctionOnSigma {
    std::vector<Vec> sigma;       // ordered residues
    std::vector<Complex> values;  // one per residue

    Complex at(const Vec& s) const {
        for (size_t i = 0; i < sigma.size(); ++i)
            if (sigma[i] == s) return values[i];
        return 0.0;
    }
};

inline Complex inner(const FunctionOnSigma& f, const FunctionOnSigma& g) {
    Complex s = 0;
    for (size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s;
}

inline std::vector<Vec> sorted_sigma(const std::set<Vec>& sigma) {
    return std::vector<Vec>(sigma.begin(), sigma.end());
}

inline FunctionOnSigma indicator(const std::vector<Vec>& sigma) {
    return {sigma, std::vector<Complex>(sigma.size(), 1.0)};
}

// Orthonormal basis of the complement of 1_Sigma: the classical chain
// f_k = (e_1 + ... + e_k - k e_{k+1}) / sqrt(k(k+1)), k = 1..#Sigma-1.
inline std::vector<FunctionOnSigma> basis_complement(const std::vector<Vec>& sigma) {
    size_t S = sigma.size();
    std::vector<FunctionOnSigma> out;
    for (size_t k = 1; k < S; ++k) {
        std::vector<Complex> v(S, 0.0);
        double nrm = std::sqrt((double)k * (k + 1));
        for (size_t i = 0; i < k; ++i) v[i] = 1.0 / nrm;
        v[k] = -(double)k / nrm;
        out.push_back({sigma, std::move(v)});
    }
    return out;
}

// Integer variant: same chain unnormalized, squared norm k(k+1).  Used for
// the exact-rational variance identity.
struct IntBasisVector {
    std::vector<long long> values;
    long long norm_sq;
};

inline std::vector<IntBasisVector> basis_complement_exact(size_t S) {
    std::vector<IntBasisVector> out;
    for (size_t k = 1; k < S; ++k) {
        std::vector<long long> v(S, 0);
        for (size_t i = 0; i < k; ++i) v[i] = 1;
        v[k] = -(long long)k;
        out.push_back({std::move(v), (long long)(k * (k + 1))});
    }
    return out;
}

// m-th theta coefficient sum_{x in V_m, red(x) in Sigma} f(red(x)).
inline Complex theta_coefficient(const QuadFormZ& Q, const FunctionOnSigma& f, long long p,
                                 int r, long long m,
                                 const std::vector<Vec>* points_hint = nullptr) {
    std::vector<Vec> pts = points_hint ? *points_hint : Q.lattice_points(m);
    long long M = pow_ll(p, r);
    std::map<Vec, Complex> lookup;
    for (size_t i = 0; i < f.sigma.size(); ++i) lookup[f.sigma[i]] = f.values[i];
    Complex s = 0;
    for (const auto& x : pts) {
        auto it = lookup.find(reduce_mod(x, M));
        if (it != lookup.end()) s += it->second;
    }
    return s;
}

// counts of reductions of V_m per residue; the theta coefficient of f is
// then sum_sigma f(sigma) counts[sigma], one enumeration for any number of f
inline std::map<Vec, long long> residue_counts(const std::vector<Vec>& pts, long long p,
                                               int r) {
    long long M = pow_ll(p, r);
    std::map<Vec, long long> counts;
    for (const auto& x : pts) ++counts[reduce_mod(x, M)];
    return counts;
}

inline Complex theta_coefficient_from_counts(const FunctionOnSigma& f,
                                             const std::map<Vec, long long>& counts) {
    Complex s = 0;
    for (size_t i = 0; i < f.sigma.size(); ++i) {
        auto it = counts.find(f.sigma[i]);
        if (it != counts.end()) s += f.values[i] * (double)it->second;
    }
    return s;
}

// N = lcm(2 p^(2r) N_Q, det(A_Q) 2^(n+2))
inline long long level_N(const QuadFormZ& Q, long long p, int r) {
    long long a = 2 * pow_ll(p, 2 * r) * Q.level();
    long long b = Q.det() << (Q.dim() + 2);
    return std::lcm(a, b);
}

// E_{a,c}(sigma) = sum over sigma' in (Z/p^t c)^n with sigma' = sigma mod p^r
// of exp(2 pi i a Q(sigma') / c).
inline Complex cusp_sum(const QuadFormZ& Q, long long p, int r, int t, long long a,
                        long long c, const Vec& sigma) {
    if (c < 1) throw std::invalid_argument("cusp_sum: c < 1");
    long long pr = pow_ll(p, r);
    long long M = pow_ll(p, t) * c;
    if (M % pr != 0) throw std::invalid_argument("cusp_sum: p^r does not divide p^t c");
    int n = Q.dim();
    long long lifts = M / pr;
    std::vector<Complex> table(c);
    for (long long k = 0; k < c; ++k)
        table[k] = std::polar(1.0, 2.0 * std::numbers::pi * (double)k / (double)c);
    Complex s = 0;
    Vec x(sigma);
    std::function<void(int)> gen = [&](int i) {
        if (i == n) {
            long long q = Q(x) % c;
            long long k = ((a % c) * (q % c)) % c;
            if (k < 0) k += c;
            s += table[k];
            return;
        }
        for (long long h = 0; h < lifts; ++h) {
            x[i] = sigma[i] + h * pr;
            gen(i + 1);
        }
        x[i] = sigma[i];
    };
    gen(0);
    return s;
}

// E_{a,c} evaluated on every residue of an ordered set, one cusp_sum per
// residue (shared across basis functions).
inline std::vector<Complex> cusp_sum_vector(const QuadFormZ& Q, long long p, int r, int t,
                                            long long a, long long c,
                                            const std::vector<Vec>& sigma) {
    std::vector<Complex> out;
    out.reserve(sigma.size());
    for (const auto& s : sigma) out.push_back(cusp_sum(Q, p, r, t, a, c, s));
    return out;
}

// Value of lim theta_f(gamma tau) / (-i tau)^(n/2) at the cusp a/c (eq. of
// the finite cusp expansion): prefactor 1/(p^((r-s)n) sqrt(det A)) times
// sum_sigma f(sigma) E_{a,c}(sigma) with s = min(r, ord_p(c)), t = r - s.
inline Complex finite_cusp_limit_from_sums(const QuadFormZ& Q, const FunctionOnSigma& f,
                                           long long p, int r, int s,
                                           const std::vector<Complex>& sums) {
    Complex acc = 0;
    for (size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * sums[i];
    double pref = std::pow((double)p, -(double)(r - s) * Q.dim()) / std::sqrt((double)Q.det());
    return pref * acc;
}

inline Complex finite_cusp_limit(const QuadFormZ& Q, const FunctionOnSigma& f, long long p,
                                 int r, long long a, long long c) {
    int s = std::min((long long)r, (long long)(c % p == 0 ? ord_p(c, p) : 0));
    int t = r - s;
    auto sums = cusp_sum_vector(Q, p, r, t, a, c, f.sigma);
    return finite_cusp_limit_from_sums(Q, f, p, r, s, sums);
}

// Least-squares slope of log|coef| against log m over nonzero coefficients;
// nullopt ("insufficient") when fewer than 5 nonzero coefficients exist.
inline std::optional<double> decay_estimate(const std::vector<std::pair<long long, double>>& ladder) {
    std::vector<std::pair<double, double>> pts;
    for (auto [m, c] : ladder)
        if (std::abs(c) > 1e-12) pts.push_back({std::log((double)m), std::log(std::abs(c))});
    if (pts.size() < 5) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) { sx += x; sy += y; sxx += x * x; sxy += x * y; }
    double n = (double)pts.size();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Exact-rational variance identity data: Var(m, Sigma) computed both from
// the definition and from the basis expansion sum |<F, f_k>|^2 / |f_k|^2
// over the integer orthogonal chain, divided by #V^2.  The basis side is
// accumulated in GMP rationals since the intermediate denominators k(k+1)
// do not share a small lcm.
struct VarianceCheck {
    Rational direct;
    double basis_sum;
    bool equal;
};

inline VarianceCheck variance_identity_check(const QuadFormZ& Q, long long m, long long p,
                                             int r, const std::set<Vec>& sigma,
                                             const std::vector<Vec>* points_hint = nullptr) {
    DeviationReport rep = deviation_report(Q, m, p, r, sigma, points_hint);
    std::vector<Vec> ord = sorted_sigma(sigma);
    std::vector<long long> counts(ord.size(), 0);
    for (size_t i = 0; i < ord.size(); ++i) counts[i] = rep.counts.at(ord[i]);
    mpq_class sum(0);
    long long prefix = 0;
    for (size_t k = 1; k < ord.size(); ++k) {
        // <F, f_k> with f_k = e_1 + ... + e_k - k e_{k+1}
        prefix += counts[k - 1];
        long long dot = prefix - (long long)k * counts[k];
        mpq_class term((long)dot, 1);
        term = term * term / mpq_class((long)(k * (k + 1)), 1);
        sum += term;
    }
    sum /= mpq_class((long)rep.num_points, 1) * mpq_class((long)rep.num_points, 1);
    sum.canonicalize();
    mpq_class direct((long)rep.variance.num(), (long)rep.variance.den());
    direct.canonicalize();
    return {rep.variance, sum.get_d(), sum == direct};
}

}  // namespace padiclab
