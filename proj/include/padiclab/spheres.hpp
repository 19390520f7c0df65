#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "padiclab/arith.hpp"
#include "padiclab/quadform.hpp"
#include "padiclab/rational.hpp"

namespace padiclab {

inline Vec reduce_mod(const Vec& x, long long M) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = ((x[i] % M) + M) % M;
    return r;
}

// Residues mod p^r that lift to Z_p-points of Q = ell, certified by the
// Hensel condition |Q(x)-ell|_p < max_i |dQ_i(x)|_p^2 together with
// |Q(x)-ell|_p <= p^-r max_i |dQ_i(x)|_p.
struct ReducedSphere {
    long long p;
    int r;
    std::set<Vec> residues;        // certified liftable residues mod p^r
    std::vector<Vec> undecided;    // branches cut by the depth cap (mod p^N)
    bool complete() const { return undecided.empty(); }
};

inline ReducedSphere reduced_sphere(const QuadFormZ& Q, long long ell, long long p, int r,
                                    int depth_cap = 24, long long node_budget = 20000000LL) {
    if (ell == 0) throw std::invalid_argument("reduced_sphere: ell = 0");
    if (r < 1) throw std::invalid_argument("reduced_sphere: r < 1");
    const int n = Q.dim();
    ReducedSphere out{p, r, {}, {}};

    double start_nodes = std::pow((double)p, (double)r * n);
    if (start_nodes > (double)node_budget)
        throw budget_error("reduced_sphere: too many initial residues");

    long long processed = 0;
    // node: (level N, representative x mod p^N)
    struct Node { int N; Vec x; };
    std::vector<Node> stack;
    {
        long long M = pow_ll(p, r);
        Vec x(n, 0);
        std::function<void(int)> gen = [&](int i) {
            if (i == n) { stack.push_back({r, x}); return; }
            for (long long v = 0; v < M; ++v) { x[i] = v; gen(i + 1); }
            x[i] = 0;
        };
        gen(0);
    }

    while (!stack.empty()) {
        Node nd = std::move(stack.back());
        stack.pop_back();
        if (++processed > node_budget)
            throw budget_error("reduced_sphere: refinement budget exceeded");
        long long M = pow_ll(p, nd.N);
        long long t = ((Q(nd.x) - ell) % M + M) % M;
        int v_exact = -1;  // -1 means >= N
        if (t != 0) v_exact = ord_p(t, p);
        Vec grad = Q.gradient(nd.x);
        int g = nd.N;  // observed min valuation, capped at N
        for (int i = 0; i < n; ++i) {
            long long gi = ((grad[i] % M) + M) % M;
            if (gi != 0) g = std::min(g, ord_p(gi, p));
        }
        int v_eff = (v_exact >= 0) ? v_exact : nd.N;
        bool certified = (g < nd.N) && (v_eff > 2 * g) && (v_eff >= r + g);
        if (certified) {
            out.residues.insert(reduce_mod(nd.x, pow_ll(p, r)));
            continue;
        }
        if (v_exact >= 0) continue;  // exact nonzero valuation, fails: no lift here
        if (nd.N >= r + depth_cap) {
            out.undecided.push_back(nd.x);
            continue;
        }
        // refine to level N+1
        Vec child(nd.x);
        std::function<void(int)> gen = [&](int i) {
            if (i == n) { stack.push_back({nd.N + 1, child}); return; }
            for (long long e = 0; e < p; ++e) {
                child[i] = nd.x[i] + e * M;
                gen(i + 1);
            }
            child[i] = nd.x[i];
        };
        gen(0);
    }
    return out;
}

struct DeviationReport {
    long long m;
    long long num_points;                 // #V_m(Q)
    std::map<Vec, long long> counts;      // per residue in Sigma
    Rational variance;
    Rational max_dev;
    double bound_ratio;                   // max_dev * #V_m / m^(n/4 - kappa_n)
};

inline Rational kappa_n(int n) { return (n % 2 == 0) ? Rational(1, 2) : Rational(2, 7); }

inline DeviationReport deviation_report(const QuadFormZ& Q, long long m, long long p, int r,
                                        const std::set<Vec>& sigma,
                                        const std::vector<Vec>* points_hint = nullptr) {
    if (sigma.empty()) throw std::invalid_argument("deviation_report: empty Sigma");
    std::vector<Vec> pts = points_hint ? *points_hint : Q.lattice_points(m);
    if (pts.empty()) throw std::invalid_argument("deviation_report: V_m empty");
    long long M = pow_ll(p, r);
    std::map<Vec, long long> counts;
    for (const auto& s : sigma) counts[s] = 0;
    for (const auto& x : pts) {
        Vec red = reduce_mod(x, M);
        auto it = counts.find(red);
        if (it == counts.end())
            throw std::invalid_argument("deviation_report: red_r(V_m) not contained in Sigma");
        ++it->second;
    }
    long long V = (long long)pts.size(), S = (long long)sigma.size();
    Rational var(0), maxdev(0);
    for (const auto& [res, c] : counts) {
        Rational dev = Rational(c, V) - Rational(1, S);
        var += dev * dev;
        Rational a = dev < Rational(0) ? -dev : dev;
        if (maxdev < a) maxdev = a;
    }
    double expo = Rational(Q.dim(), 4).to_double() - kappa_n(Q.dim()).to_double();
    double ratio = maxdev.to_double() * (double)V / std::pow((double)m, expo);
    return {m, V, std::move(counts), var, maxdev, ratio};
}

// One row of the Linnik pushforward table.
struct LinnikRow {
    long long m;
    bool skipped;
    std::string reason;
    long long u;              // unit with m = ell u^2 mod p^(2(r+buffer))
    long long num_points;
    double tv_distance;       // to uniform on red_r(S_ell(Q))
    double mass_outside;      // image mass outside the reference sphere
};

inline std::vector<LinnikRow> linnik_pushforward_test(
    const QuadFormZ& Q, long long ell, long long p, int r,
    const std::vector<long long>& ms, long long square_cap = 0,
    int buffer = 3) {
    ReducedSphere ref = reduced_sphere(Q, ell, p, r);
    if (!ref.complete())
        throw budget_error("linnik_pushforward_test: reference sphere undecided");
    long long M = pow_ll(p, r);
    std::vector<LinnikRow> out;
    int e0 = ord_p(ell, p);
    long long ell_unit = ell / pow_ll(p, e0);
    for (long long m : ms) {
        LinnikRow row{m, false, "", 0, 0, 0.0, 0.0};
        if (Q.dim() == 3 && square_cap > 0) {
            long long sq = square_part(m);
            if (sq * sq > square_cap) {
                row.skipped = true;
                row.reason = "square part exceeds cap";
                out.push_back(row);
                continue;
            }
        }
        if (m <= 0 || ord_p(m, p) != e0) {
            row.skipped = true;
            row.reason = "m not in ell * (unit squares)";
            out.push_back(row);
            continue;
        }
        int prec = 2 * (r + buffer);
        if (p == 2) prec = std::max(prec, 3);
        long long pk = pow_ll(p, prec);
        long long q = mulmod((m / pow_ll(p, e0)) % pk, invmod(ell_unit % pk < 0
                                                                  ? ell_unit % pk + pk
                                                                  : ell_unit % pk,
                                                              pk),
                             pk);
        auto u = padic_sqrt(q, p, prec);
        if (!u) {
            row.skipped = true;
            row.reason = "m/ell is not a square unit";
            out.push_back(row);
            continue;
        }
        row.u = *u % M;
        long long uinv = invmod(row.u, M);
        auto pts = Q.lattice_points(m);
        row.num_points = (long long)pts.size();
        if (pts.empty()) {
            row.skipped = true;
            row.reason = "V_m empty";
            out.push_back(row);
            continue;
        }
        std::map<Vec, long long> counts;
        long long outside = 0;
        for (const auto& x : pts) {
            Vec red = reduce_mod(x, M);
            for (auto& c : red) c = mulmod(c, uinv, M);
            if (ref.residues.count(red))
                ++counts[red];
            else
                ++outside;
        }
        long long V = row.num_points, S = (long long)ref.residues.size();
        Rational tv(0);
        for (const auto& res : ref.residues) {
            auto it = counts.find(res);
            long long c = it == counts.end() ? 0 : it->second;
            Rational dev = Rational(c, V) - Rational(1, S);
            tv += (dev < Rational(0)) ? -dev : dev;
        }
        tv += Rational(outside, V);
        row.tv_distance = (tv / Rational(2)).to_double();
        row.mass_outside = Rational(outside, V).to_double();
        out.push_back(row);
    }
    return out;
}

// Full orthogonal group of Q mod p^r by brute force, with orbit helper.
class OrthogonalGroupModPr {
public:
    OrthogonalGroupModPr(const QuadFormZ& Q, long long p, int r,
                         double budget = 5e6)
        : n_(Q.dim()), M_(pow_ll(p, r)) {
        double cand = std::pow((double)M_, (double)n_ * n_);
        if (cand > budget)
            throw budget_error("orbit_bruteforce: modulus too large for brute force");
        const auto& A = Q.gram();
        long long diag_mod = (p == 2) ? 2 * M_ : M_;
        std::vector<long long> T(n_ * n_, 0);
        std::function<void(int)> gen = [&](int idx) {
            if (idx == n_ * n_) {
                if (!is_unit_det(T, p)) return;
                // check T^t A T = A (diagonal mod 2M at p = 2)
                for (int i = 0; i < n_; ++i)
                    for (int j = i; j < n_; ++j) {
                        __int128 s = 0;
                        for (int k = 0; k < n_; ++k)
                            for (int l = 0; l < n_; ++l)
                                s += (__int128)T[k * n_ + i] * A[k][l] * T[l * n_ + j];
                        long long mod = (i == j) ? diag_mod : M_;
                        long long want = ((A[i][j] % mod) + mod) % mod;
                        if ((long long)(((s % mod) + mod) % mod) != want) return;
                    }
                elements_.push_back(T);
                return;
            }
            for (long long v = 0; v < M_; ++v) {
                T[idx] = v;
                gen(idx + 1);
            }
            T[idx] = 0;
        };
        gen(0);
    }

    size_t order() const { return elements_.size(); }

    std::set<Vec> orbit(const Vec& x) const {
        std::set<Vec> out;
        for (const auto& T : elements_) {
            Vec y(n_, 0);
            for (int i = 0; i < n_; ++i) {
                __int128 s = 0;
                for (int j = 0; j < n_; ++j) s += (__int128)T[i * n_ + j] * x[j];
                y[i] = (long long)(((s % M_) + M_) % M_);
            }
            out.insert(std::move(y));
        }
        return out;
    }

    std::vector<std::set<Vec>> all_orbits() const {
        std::vector<std::set<Vec>> orbits;
        std::set<Vec> seen;
        Vec x(n_, 0);
        std::function<void(int)> gen = [&](int i) {
            if (i == n_) {
                if (!seen.count(x)) {
                    auto orb = orbit(x);
                    seen.insert(orb.begin(), orb.end());
                    orbits.push_back(std::move(orb));
                }
                return;
            }
            for (long long v = 0; v < M_; ++v) { x[i] = v; gen(i + 1); }
            x[i] = 0;
        };
        gen(0);
        return orbits;
    }

private:
    int n_;
    long long M_;
    std::vector<std::vector<long long>> elements_;

    bool is_unit_det(const std::vector<long long>& T, long long p) const {
        // det mod p by Gaussian elimination over F_p
        std::vector<long long> m(T);
        for (auto& v : m) v = ((v % p) + p) % p;
        long long det = 1;
        for (int c = 0; c < n_; ++c) {
            int piv = -1;
            for (int rr = c; rr < n_; ++rr)
                if (m[rr * n_ + c] % p != 0) { piv = rr; break; }
            if (piv < 0) return false;
            if (piv != c) {
                for (int j = 0; j < n_; ++j) std::swap(m[piv * n_ + j], m[c * n_ + j]);
                det = p - det;
            }
            long long inv = invmod(m[c * n_ + c], p);
            det = mulmod(det, m[c * n_ + c], p);
            for (int rr = c + 1; rr < n_; ++rr) {
                long long f = mulmod(m[rr * n_ + c], inv, p);
                for (int j = c; j < n_; ++j) {
                    m[rr * n_ + j] = ((m[rr * n_ + j] - mulmod(f, m[c * n_ + j], p)) % p + p) % p;
                }
            }
        }
        return det % p != 0;
    }
};

inline std::set<Vec> orbit_bruteforce(const QuadFormZ& Q, long long p, int r, const Vec& x) {
    return OrthogonalGroupModPr(Q, p, r).orbit(x);
}

}  // namespace padiclab
