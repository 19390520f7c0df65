#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "padiclab/fp2.hpp"
#include "padiclab/rational.hpp"

namespace padiclab {

inline std::string data_dir() {
    if (const char* env = std::getenv("PADICLAB_DATA")) return env;
#ifdef PADICLAB_DATA_DIR
    return PADICLAB_DATA_DIR;
#else
    return "data";
#endif
}

struct SSPoint {
    Fp2 j;
    int aut;  // #Aut in {2, 4, 6, 12, 24}
};

// The supersingular classes over F_p-bar: j-invariants in F_{p^2} with
// automorphism weights and the Frobenius involution j -> j^p.
class SupersingularSet {
public:
    SupersingularSet(long long p, std::vector<SSPoint> points, Fp2Ctx ctx)
        : p_(p), ctx_(std::move(ctx)), points_(std::move(points)) {
        std::sort(points_.begin(), points_.end(),
                  [](const SSPoint& x, const SSPoint& y) { return x.j < y.j; });
        frob_.resize(points_.size());
        for (size_t i = 0; i < points_.size(); ++i) {
            Fp2 fj = ctx_.frobenius(points_[i].j);
            frob_[i] = index_of(fj);
        }
        // Deuring-Eichler mass formula, exact
        Rational mass(0);
        for (const auto& pt : points_) mass += Rational(1, pt.aut);
        if (mass != Rational(p_ - 1, 24))
            throw identity_error("SupersingularSet: mass formula violated");
        for (size_t i = 0; i < frob_.size(); ++i)
            if (frob_[frob_[i]] != (int)i)
                throw identity_error("SupersingularSet: Frobenius is not an involution");
    }

    long long p() const { return p_; }
    const Fp2Ctx& ctx() const { return ctx_; }
    size_t size() const { return points_.size(); }
    const std::vector<SSPoint>& points() const { return points_; }
    const std::vector<int>& frob() const { return frob_; }

    int index_of(const Fp2& j) const {
        for (size_t i = 0; i < points_.size(); ++i)
            if (points_[i].j == j) return (int)i;
        return -1;
    }

    // v^ss_i = 24 / ((p-1) #Aut(i)), a probability vector
    std::vector<Rational> homogeneous_vector() const {
        std::vector<Rational> v;
        for (const auto& pt : points_) v.push_back(Rational(24, (p_ - 1) * pt.aut));
        return v;
    }

private:
    long long p_;
    Fp2Ctx ctx_;
    std::vector<SSPoint> points_;
    std::vector<int> frob_;
};

// Supersingular j-invariants via the Deuring polynomial
// H(L) = sum_k binom((p-1)/2, k)^2 L^k, mapped through
// j(L) = 256 (L^2 - L + 1)^3 / (L^2 (L - 1)^2); p = 2, 3 are special-cased.
inline SupersingularSet supersingular_set(long long p, long long cap = 500) {
    if (!is_prime(p)) throw std::invalid_argument("supersingular_set: p not prime");
    if (p > cap) throw budget_error("supersingular_set: prime exceeds cap");
    Fp2Ctx F(p);
    if (p == 2) return SupersingularSet(2, {{F.make(0), 24}}, F);
    if (p == 3) return SupersingularSet(3, {{F.make(0), 12}}, F);

    long long m = (p - 1) / 2;
    // binom(m, k) mod p by the multiplicative recurrence
    std::vector<long long> deuring(m + 1);
    long long binom = 1;
    for (long long k = 0; k <= m; ++k) {
        deuring[k] = mulmod(binom, binom, p);
        if (k < m) binom = mulmod(binom, mulmod((m - k) % p, invmod(k + 1, p), p), p);
    }
    PolyFp2 H;
    for (long long k = 0; k <= m; ++k) H.push_back(F.make(deuring[k]));

    std::vector<SSPoint> points;
    long long j1728 = ((1728 % p) + p) % p;
    for (const Fp2& lam : F.all_elements()) {
        if (F.is_zero(lam) || lam == F.one()) continue;
        if (!F.is_zero(poly_eval(F, H, lam))) continue;
        Fp2 l2 = F.mul(lam, lam);
        Fp2 num = F.add(F.sub(l2, lam), F.one());
        num = F.mul(F.mul(num, num), num);
        num = F.mul(num, F.make(256));
        Fp2 den = F.mul(l2, F.mul(F.sub(lam, F.one()), F.sub(lam, F.one())));
        Fp2 j = F.mul(num, F.inv(den));
        bool seen = false;
        for (const auto& pt : points)
            if (pt.j == j) { seen = true; break; }
        if (seen) continue;
        int aut = 2;
        if (F.is_zero(j)) aut = 6;
        else if (j == F.make(j1728)) aut = 4;
        points.push_back({j, aut});
    }
    return SupersingularSet(p, std::move(points), F);
}

// Classical modular polynomial, coefficients as arbitrary precision
// integers; stored sparsely with i >= j and symmetric closure implied.
struct ModularPolynomial {
    int ell;
    std::map<std::pair<int, int>, mpz_class> coeffs;  // full symmetric closure

    // dense coefficient table mod p: table[i][j] for X^i Y^j
    std::vector<std::vector<long long>> mod_p(long long p) const {
        int d = ell + 2;
        std::vector<std::vector<long long>> out(d, std::vector<long long>(d, 0));
        for (const auto& [im, c] : coeffs) {
            mpz_class r = c % (long)p;
            if (r < 0) r += (long)p;
            out[im.first][im.second] = r.get_si();
        }
        return out;
    }

    // specialization Phi(0, Y) as integer coefficients, degree ell+1
    std::vector<mpz_class> at_x_zero() const {
        std::vector<mpz_class> out(ell + 2, 0);
        for (const auto& [im, c] : coeffs)
            if (im.first == 0) out[im.second] = c;
        return out;
    }
};

inline ModularPolynomial load_modular_polynomial(int ell, std::string dir = "") {
    if (ell != 2 && ell != 3 && ell != 5 && ell != 7)
        throw std::invalid_argument("load_modular_polynomial: unsupported level");
    if (dir.empty()) dir = data_dir();
    std::string path = dir + "/phi" + std::to_string(ell) + ".txt";
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_modular_polynomial: cannot open " + path);
    std::string header;
    std::getline(is, header);
    if (header != "ell=" + std::to_string(ell))
        throw std::runtime_error("load_modular_polynomial: bad header in " + path);
    ModularPolynomial phi{ell, {}};
    int i, j;
    std::string cs;
    while (is >> i >> j >> cs) {
        mpz_class c(cs);
        phi.coeffs[{i, j}] = c;
        phi.coeffs[{j, i}] = c;
    }
    // integrity: monic of degree ell+1 in each variable, and the Kronecker
    // congruence Phi = (X - Y^ell)(X^ell - Y) mod ell
    if (phi.coeffs[{ell + 1, 0}] != 1 || phi.coeffs[{0, ell + 1}] != 1)
        throw identity_error("modular polynomial: not monic of degree ell+1");
    for (const auto& [im, c] : phi.coeffs)
        if (im.first > ell + 1 || im.second > ell + 1 ||
            (im.first == ell + 1 && im.second > 0))
            throw identity_error("modular polynomial: degree too large");
    auto tab = phi.mod_p(ell);
    for (int a = 0; a <= ell + 1; ++a)
        for (int b = 0; b <= ell + 1; ++b) {
            long long want = 0;
            if ((a == ell + 1 && b == 0) || (a == 0 && b == ell + 1)) want = 1 % ell;
            if ((a == 1 && b == 1) || (a == ell && b == ell)) want = (ell - 1) % ell;
            if (tab[a][b] != want)
                throw identity_error("modular polynomial: Kronecker congruence fails");
        }
    return phi;
}

struct BrandtMatrix {
    long long p;
    long long m;
    std::vector<std::vector<long long>> entries;  // entries[s][t] indexed like ss
};

namespace detail {

inline std::vector<std::vector<long long>> mat_mul(const std::vector<std::vector<long long>>& A,
                                                   const std::vector<std::vector<long long>>& B) {
    size_t n = A.size();
    std::vector<std::vector<long long>> C(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (A[i][k] == 0) continue;
            for (size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

inline std::vector<std::vector<long long>> mat_identity(size_t n) {
    std::vector<std::vector<long long>> I(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

// B(ell) for a supported prime ell != p: entry (s,t) is the multiplicity of
// j_t as a root of Phi_ell(j_s, Y) over F_{p^2}.
inline std::vector<std::vector<long long>> brandt_prime(const SupersingularSet& ss, int ell) {
    const Fp2Ctx& F = ss.ctx();
    auto tab = load_modular_polynomial(ell).mod_p(ss.p());
    size_t n = ss.size();
    std::vector<std::vector<long long>> B(n, std::vector<long long>(n, 0));
    for (size_t s = 0; s < n; ++s) {
        // specialize X = j_s
        PolyFp2 P(ell + 2, F.zero());
        Fp2 xpow = F.one();
        for (int i = 0; i <= ell + 1; ++i) {
            for (int j = 0; j <= ell + 1; ++j)
                if (tab[i][j]) P[j] = F.add(P[j], F.mul(xpow, F.make(tab[i][j])));
            xpow = F.mul(xpow, ss.points()[s].j);
        }
        poly_trim(F, P);
        if ((int)P.size() != ell + 2)
            throw identity_error("brandt_matrix: specialization dropped degree");
        PolyFp2 rest = P;
        long long total = 0;
        for (size_t t = 0; t < n; ++t) {
            int mult = 0;
            while (!rest.empty() && rest.size() > 1 &&
                   F.is_zero(poly_eval(F, rest, ss.points()[t].j))) {
                rest = poly_deflate(F, rest, ss.points()[t].j);
                ++mult;
            }
            B[s][t] = mult;
            total += mult;
        }
        if (total != ell + 1)
            throw identity_error("brandt_matrix: non-supersingular root of Phi_ell(j_s, Y)");
    }
    return B;
}

}  // namespace detail

// Brandt matrix of index m: realizes the Hecke correspondence T_m on
// reduction vectors via v(T_m L) = B(m)^T v(L).  Prime-to-p part from
// modular polynomial factorization; p-part sigma_1(p^r) Frob^r; composite
// indices assembled by multiplicativity.
inline BrandtMatrix brandt_matrix(const SupersingularSet& ss, long long m) {
    if (m < 1) throw std::invalid_argument("brandt_matrix: m < 1");
    size_t n = ss.size();
    auto B = detail::mat_identity(n);
    for (auto [q, e] : factorize(m)) {
        if (q == ss.p()) {
            // sigma_1(p^e) * Frob^e; Frob is an involution
            auto P = detail::mat_identity(n);
            if (e % 2 == 1) {
                auto Fr = detail::mat_identity(n);
                std::vector<std::vector<long long>> perm(n, std::vector<long long>(n, 0));
                for (size_t i = 0; i < n; ++i) perm[i][ss.frob()[i]] = 1;
                P = perm;
            }
            long long scale = sigma1(pow_ll(ss.p(), e));
            for (auto& row : P)
                for (auto& v : row) v *= scale;
            B = detail::mat_mul(B, P);
            continue;
        }
        if (q > 7) throw std::invalid_argument("brandt_matrix: unsupported prime factor");
        auto Bq = detail::brandt_prime(ss, (int)q);
        auto Bqe = Bq;
        auto prev = detail::mat_identity(n);  // B(q^0)
        for (int k = 2; k <= e; ++k) {
            // B(q^k) = B(q) B(q^(k-1)) - q B(q^(k-2))
            auto next = detail::mat_mul(Bq, Bqe);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) next[i][j] -= q * prev[i][j];
            prev = std::move(Bqe);
            Bqe = std::move(next);
        }
        B = detail::mat_mul(B, e >= 1 ? Bqe : detail::mat_identity(n));
    }
    return {ss.p(), m, std::move(B)};
}

// Row sums, weighted self-adjointness and Frobenius commutation checks used
// by the test suites.
inline bool brandt_row_sums_ok(const SupersingularSet& ss, const BrandtMatrix& B) {
    long long want = sigma1(B.m);
    for (const auto& row : B.entries) {
        long long s = 0;
        for (long long v : row) s += v;
        if (s != want) return false;
    }
    return true;
}

// Entrywise form of self-adjointness in the weighted inner product:
// B_{st} / aut_s = B_{ts} / aut_t.
inline bool brandt_self_adjoint(const SupersingularSet& ss, const BrandtMatrix& B) {
    size_t n = ss.size();
    for (size_t s = 0; s < n; ++s)
        for (size_t t = 0; t < n; ++t)
            if (B.entries[s][t] * ss.points()[t].aut != B.entries[t][s] * ss.points()[s].aut)
                return false;
    return true;
}

// Symmetric Jacobi eigenvalue iteration for the small dense matrices here.
inline void jacobi_eigen(std::vector<std::vector<double>> A, std::vector<double>& values,
                         std::vector<std::vector<double>>& vectors, int sweeps = 100) {
    size_t n = A.size();
    vectors.assign(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += A[i][j] * A[i][j];
        if (off < 1e-26) break;
        for (size_t pp = 0; pp < n; ++pp)
            for (size_t q = pp + 1; q < n; ++q) {
                if (std::abs(A[pp][q]) < 1e-300) continue;
                double theta = (A[q][q] - A[pp][pp]) / (2 * A[pp][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double akp = A[k][pp], akq = A[k][q];
                    A[k][pp] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double apk = A[pp][k], aqk = A[q][k];
                    A[pp][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    double vkp = vectors[k][pp], vkq = vectors[k][q];
                    vectors[k][pp] = c * vkp - s * vkq;
                    vectors[k][q] = s * vkp + c * vkq;
                }
            }
    }
    values.resize(n);
    for (size_t i = 0; i < n; ++i) values[i] = A[i][i];
}

struct SpectralReport {
    std::vector<long long> ells;
    // eigenvalues[k][i]: i-th eigenvalue (shared eigenbasis) of B(ells[k])^T
    std::vector<std::vector<double>> eigenvalues;
    bool vss_exact_eigenvector;    // B(ell)^T v^ss = sigma_1(ell) v^ss, exact
    bool commuting;                // all pairs commute, exact
    double max_residual;           // max ||A v - lambda v||_2 over pairs
    bool ramanujan_ok;             // non-Eisenstein |lambda| <= 2 sqrt(ell) + tol
};

inline SpectralReport spectral_report(const SupersingularSet& ss,
                                      const std::vector<long long>& ells,
                                      double tol = 1e-8) {
    size_t n = ss.size();
    std::vector<BrandtMatrix> Bs;
    for (long long ell : ells) Bs.push_back(brandt_matrix(ss, ell));

    SpectralReport rep;
    rep.ells = ells;
    rep.vss_exact_eigenvector = true;
    rep.commuting = true;
    rep.max_residual = 0;
    rep.ramanujan_ok = true;

    // exact checks
    auto vss = ss.homogeneous_vector();
    for (size_t k = 0; k < Bs.size(); ++k) {
        for (size_t i = 0; i < n; ++i) {
            Rational acc(0);
            for (size_t j = 0; j < n; ++j)
                acc += Rational(Bs[k].entries[j][i]) * vss[j];  // (B^T v)_i
            if (acc != Rational(sigma1(ells[k])) * vss[i]) rep.vss_exact_eigenvector = false;
        }
        for (size_t l = k + 1; l < Bs.size(); ++l) {
            if (detail::mat_mul(Bs[k].entries, Bs[l].entries) !=
                detail::mat_mul(Bs[l].entries, Bs[k].entries))
                rep.commuting = false;
        }
    }
    if (!rep.commuting) throw identity_error("spectral_report: Brandt matrices do not commute");

    // weighted symmetrization: M = W^(1/2) B^T W^(-1/2), W = diag(1/v^ss)
    std::vector<double> whalf(n);
    for (size_t i = 0; i < n; ++i) whalf[i] = 1.0 / std::sqrt(vss[i].to_double());
    auto symmetrize = [&](const BrandtMatrix& B) {
        std::vector<std::vector<double>> M(n, std::vector<double>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                M[i][j] = whalf[i] * (double)B.entries[j][i] / whalf[j];
        return M;
    };

    // shared eigenbasis by sequential refinement: diagonalize the first
    // matrix, then rediagonalize each degenerate block under the next ones
    std::vector<std::vector<double>> vecs(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;
    std::vector<std::vector<size_t>> groups{std::vector<size_t>()};
    for (size_t i = 0; i < n; ++i) groups[0].push_back(i);
    const double group_tol = 1e-7;
    for (size_t k = 0; k < Bs.size(); ++k) {
        auto M = symmetrize(Bs[k]);
        std::vector<std::vector<size_t>> next;
        for (const auto& g : groups) {
            if (g.size() == 1) { next.push_back(g); continue; }
            size_t gs = g.size();
            std::vector<std::vector<double>> R(gs, std::vector<double>(gs, 0.0));
            for (size_t a = 0; a < gs; ++a)
                for (size_t b = 0; b < gs; ++b) {
                    double s = 0;
                    for (size_t i = 0; i < n; ++i)
                        for (size_t j = 0; j < n; ++j)
                            s += vecs[i][g[a]] * M[i][j] * vecs[j][g[b]];
                    R[a][b] = s;
                }
            std::vector<double> rvals;
            std::vector<std::vector<double>> rvecs;
            jacobi_eigen(R, rvals, rvecs);
            // rotate the block columns
            std::vector<std::vector<double>> rotated(n, std::vector<double>(gs, 0.0));
            for (size_t i = 0; i < n; ++i)
                for (size_t b = 0; b < gs; ++b)
                    for (size_t a = 0; a < gs; ++a)
                        rotated[i][b] += vecs[i][g[a]] * rvecs[a][b];
            for (size_t i = 0; i < n; ++i)
                for (size_t b = 0; b < gs; ++b) vecs[i][g[b]] = rotated[i][b];
            // split the group by the new eigenvalues
            std::vector<size_t> order(gs);
            for (size_t a = 0; a < gs; ++a) order[a] = a;
            std::sort(order.begin(), order.end(),
                      [&](size_t a, size_t b) { return rvals[a] < rvals[b]; });
            std::vector<size_t> cur;
            for (size_t idx = 0; idx < gs; ++idx) {
                if (!cur.empty() &&
                    std::abs(rvals[order[idx]] - rvals[order[idx - 1]]) > group_tol) {
                    next.push_back(cur);
                    cur.clear();
                }
                cur.push_back(g[order[idx]]);
            }
            if (!cur.empty()) next.push_back(cur);
        }
        groups = std::move(next);
    }

    // identify the v^ss column: the symmetrized image of v^ss is
    // proportional to (whalf_i * vss_i) = sqrt(vss_i)
    size_t vss_col = 0;
    double best = -1;
    for (size_t c = 0; c < n; ++c) {
        double dot = 0, nv = 0, nw = 0;
        for (size_t i = 0; i < n; ++i) {
            double wv = std::sqrt(vss[i].to_double());
            dot += vecs[i][c] * wv;
            nv += vecs[i][c] * vecs[i][c];
            nw += wv * wv;
        }
        double cosang = std::abs(dot) / std::sqrt(nv * nw);
        if (cosang > best) { best = cosang; vss_col = c; }
    }

    for (size_t k = 0; k < Bs.size(); ++k) {
        auto M = symmetrize(Bs[k]);
        std::vector<double> lambdas(n, 0);
        for (size_t c = 0; c < n; ++c) {
            // Rayleigh quotient and residual
            std::vector<double> Mv(n, 0);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) Mv[i] += M[i][j] * vecs[j][c];
            double lam = 0, nv = 0;
            for (size_t i = 0; i < n; ++i) { lam += vecs[i][c] * Mv[i]; nv += vecs[i][c] * vecs[i][c]; }
            lam /= nv;
            double resid = 0;
            for (size_t i = 0; i < n; ++i) {
                double d = Mv[i] - lam * vecs[i][c];
                resid += d * d;
            }
            rep.max_residual = std::max(rep.max_residual, std::sqrt(resid));
            lambdas[c] = lam;
            if (c != vss_col && std::abs(lam) > 2 * std::sqrt((double)ells[k]) + tol)
                rep.ramanujan_ok = false;
        }
        rep.eigenvalues.push_back(std::move(lambdas));
    }
    if (rep.max_residual > tol)
        throw identity_error("spectral_report: eigenbasis residual above tolerance");
    return rep;
}

}  // namespace padiclab
