#pragma once

#include <climits>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "padiclab/arith.hpp"
#include "padiclab/rational.hpp"

namespace padiclab {

using Vec = std::vector<long long>;

// Positive definite integral quadratic form Q(x) = (1/2) x^T A x with A
// symmetric, even diagonal.
class QuadFormZ {
public:
    explicit QuadFormZ(std::vector<std::vector<long long>> gram) : gram_(std::move(gram)) {
        n_ = (int)gram_.size();
        if (n_ < 1) throw std::invalid_argument("QuadFormZ: empty Gram matrix");
        for (int i = 0; i < n_; ++i) {
            if ((int)gram_[i].size() != n_)
                throw std::invalid_argument("QuadFormZ: not square");
            if (gram_[i][i] % 2)
                throw std::invalid_argument("QuadFormZ: odd diagonal");
            for (int j = 0; j < n_; ++j)
                if (gram_[i][j] != gram_[j][i])
                    throw std::invalid_argument("QuadFormZ: not symmetric");
        }
        compute_cholesky();
        det_ = det_rational();
        level_ = compute_level();
    }

    static QuadFormZ sum_of_squares(int n) {
        std::vector<std::vector<long long>> g(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i) g[i][i] = 2;
        return QuadFormZ(std::move(g));
    }

    int dim() const { return n_; }
    const std::vector<std::vector<long long>>& gram() const { return gram_; }
    long long det() const { return det_; }     // det(A_Q)
    long long level() const { return level_; } // least N with N A^-1 integral

    long long operator()(const Vec& x) const {
        __int128 s = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += (__int128)gram_[i][j] * x[i] * x[j];
        return (long long)(s / 2);
    }

    Vec gradient(const Vec& x) const {  // (A x)_i = dQ/dx_i
        Vec g(n_, 0);
        for (int i = 0; i < n_; ++i) {
            __int128 s = 0;
            for (int j = 0; j < n_; ++j) s += (__int128)gram_[i][j] * x[j];
            g[i] = (long long)s;
        }
        return g;
    }

    // All x with Q(x) = m, each exactly once (closed under x -> -x).
    std::vector<Vec> lattice_points(long long m, long long budget = 500000000LL) const {
        if (m < 1) throw std::invalid_argument("lattice_points: m < 1");
        // node estimate: product of ranges over the outer n-1 levels
        double est = 1;
        for (int i = 1; i < n_; ++i)
            est *= 2 * std::sqrt((double)m / chol_d_[i].to_double()) + 1;
        if (est > (double)budget)
            throw budget_error("lattice_points: enumeration budget exceeded");
        std::vector<Vec> out;
        Vec x(n_, 0);
        if (diagonal_)
            recurse_diag(n_ - 1, m, x, true, out);
        else
            recurse(n_ - 1, Rational(m), x, true, out);
        // mirror: each stored point has positive leading nonzero coordinate
        size_t half = out.size();
        out.reserve(2 * half);
        for (size_t k = 0; k < half; ++k) {
            Vec neg(n_);
            for (int i = 0; i < n_; ++i) neg[i] = -out[k][i];
            out.push_back(std::move(neg));
        }
        return out;
    }

    // "n" then n rows of n integers.
    static QuadFormZ read(std::istream& is) {
        int n;
        if (!(is >> n)) throw std::invalid_argument("QuadFormZ::read: missing dimension");
        std::vector<std::vector<long long>> g(n, std::vector<long long>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(is >> g[i][j]))
                    throw std::invalid_argument("QuadFormZ::read: truncated matrix");
        return QuadFormZ(std::move(g));
    }
    static QuadFormZ read_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::invalid_argument("QuadFormZ::read_file: cannot open " + path);
        return read(is);
    }

private:
    int n_;
    std::vector<std::vector<long long>> gram_;
    long long det_ = 0, level_ = 0;
    bool diagonal_ = false;  // fast integer path for diagonal Gram matrices
    // Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2 over rationals
    std::vector<Rational> chol_d_;
    std::vector<std::vector<Rational>> chol_u_;

    void compute_cholesky() {
        diagonal_ = true;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j && gram_[i][j] != 0) diagonal_ = false;
        std::vector<std::vector<Rational>> q(n_, std::vector<Rational>(n_));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) q[i][j] = Rational(gram_[i][j], 2);
        chol_d_.assign(n_, Rational(0));
        chol_u_.assign(n_, std::vector<Rational>(n_, Rational(0)));
        for (int i = 0; i < n_; ++i) {
            if (!(Rational(0) < q[i][i]))
                throw std::invalid_argument("QuadFormZ: not positive definite");
            chol_d_[i] = q[i][i];
            for (int j = i + 1; j < n_; ++j) chol_u_[i][j] = q[i][j] / q[i][i];
            for (int k = i + 1; k < n_; ++k)
                for (int l = i + 1; l < n_; ++l)
                    q[k][l] -= q[k][i] * q[i][l] / q[i][i];
        }
    }

    long long det_rational() const {
        // det(A) = 2^n * prod d_i
        Rational d(1);
        for (int i = 0; i < n_; ++i) d *= chol_d_[i] * Rational(2);
        if (!d.is_integer()) throw std::logic_error("QuadFormZ: non-integer determinant");
        return d.num();
    }

    long long compute_level() const {
        // smallest N with N A^{-1} integral: N = lcm of denominators of A^{-1}
        // computed from adjugate / det over rationals
        int n = n_;
        std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n)),
            inv(n, std::vector<Rational>(n, Rational(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m[i][j] = Rational(gram_[i][j]);
            inv[i][i] = Rational(1);
        }
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int r = c; r < n; ++r)
                if (m[r][c] != Rational(0)) { piv = r; break; }
            if (piv < 0) throw std::logic_error("QuadFormZ: singular Gram matrix");
            std::swap(m[c], m[piv]);
            std::swap(inv[c], inv[piv]);
            Rational s = m[c][c];
            for (int j = 0; j < n; ++j) { m[c][j] /= s; inv[c][j] /= s; }
            for (int r = 0; r < n; ++r) {
                if (r == c || m[r][c] == Rational(0)) continue;
                Rational f = m[r][c];
                for (int j = 0; j < n; ++j) {
                    m[r][j] -= f * m[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
        long long N = 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                N = std::lcm(N, inv[i][j].den());
        return N;
    }

    // Integer specialization for diagonal Gram matrices: Q = sum c_i x_i^2
    // with c_i = gram[i][i] / 2.
    void recurse_diag(int i, long long remaining, Vec& x, bool on_axis,
                      std::vector<Vec>& out) const {
        long long ci = gram_[i][i] / 2;
        if (i == 0) {
            if (remaining % ci == 0) {
                long long q = remaining / ci;
                long long t = (long long)std::sqrt((double)q);
                while (t * t < q) ++t;
                while (t > 0 && t * t > q) --t;
                if (t * t == q && t > 0) {
                    x[0] = t;
                    out.push_back(x);
                    if (!on_axis) {
                        x[0] = -t;
                        out.push_back(x);
                    }
                    x[0] = 0;
                } else if (q == 0 && !on_axis) {
                    x[0] = 0;
                    out.push_back(x);
                }
            }
            return;
        }
        long long bound = (long long)std::sqrt((double)(remaining / ci)) + 1;
        while (ci * bound * bound > remaining) --bound;
        long long lo = on_axis ? 0 : -bound;
        for (long long t = lo; t <= bound; ++t) {
            x[i] = t;
            recurse_diag(i - 1, remaining - ci * t * t, x, on_axis && t == 0, out);
        }
        x[i] = 0;
    }

    // Enumerates representatives with positive leading nonzero coordinate
    // (on_axis tracks whether every fixed coordinate so far is zero).
    void recurse(int i, Rational remaining, Vec& x, bool on_axis,
                 std::vector<Vec>& out) const {
        Rational c(0);
        for (int j = i + 1; j < n_; ++j)
            if (x[j] != 0) c += chol_u_[i][j] * Rational(x[j]);
        double cd = c.to_double();
        double s = std::sqrt(std::max(0.0, remaining.to_double() / chol_d_[i].to_double()));
        if (i == 0) {
            // solve d_0 (t + c)^2 = remaining exactly near the two real roots
            long long prev = LLONG_MIN;
            for (double root : {-cd - s, -cd + s}) {
                for (long long t = (long long)std::floor(root) - 1;
                     t <= (long long)std::floor(root) + 1; ++t) {
                    if (t == prev || (on_axis && t <= 0)) continue;
                    Rational term = Rational(t) + c;
                    if (chol_d_[0] * term * term == remaining) {
                        x[0] = t;
                        out.push_back(x);
                        x[0] = 0;
                        prev = t;
                        break;
                    }
                }
            }
            return;
        }
        long long lo = (long long)std::floor(-cd - s) - 1;
        long long hi = (long long)std::ceil(-cd + s) + 1;
        if (on_axis) lo = std::max(lo, 0LL);
        for (long long t = lo; t <= hi; ++t) {
            Rational term = Rational(t) + c;
            Rational used = chol_d_[i] * term * term;
            if (remaining < used) continue;
            x[i] = t;
            recurse(i - 1, remaining - used, x, on_axis && t == 0, out);
        }
        x[i] = 0;
    }
};

}  // namespace padiclab
