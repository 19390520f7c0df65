#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padiclab/forms.hpp"

namespace padiclab {

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace mp {

// Minimal RAII real for the class polynomial evaluation.
class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v, prec); mpfr_set_zero(v, 1); }
    Real(const Real& o) { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_set(v, o.v, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_swap(v, o.v); }
    Real& operator=(const Real& o) {
        if (this != &o) mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v, o.v);
        return *this;
    }
    ~Real() { mpfr_clear(v); }
    mpfr_t v;
};

struct Complex {
    Real re, im;
    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
};

}  // namespace mp

struct ClassPoly {
    long long D;
    std::vector<mpz_class> coeffs;  // degree h(D), monic, coeffs[k] of X^k

    std::vector<long long> mod_p(long long p) const {
        std::vector<long long> out(coeffs.size());
        for (size_t i = 0; i < coeffs.size(); ++i) {
            mpz_class r = coeffs[i] % (long)p;
            if (r < 0) r += (long)p;
            out[i] = r.get_si();
        }
        return out;
    }
};

namespace detail {

// j(tau) for tau = (-b + sqrt(D)) / (2a), via j = E4^3 / Delta with
// Delta = q prod(1-q^n)^24 (pentagonal series) and E4 = 1 + 240 sum sigma_3 q^n.
inline void eval_j(mp::Complex& out, long long a, long long b, long long D,
                   mpfr_prec_t prec, const std::vector<long long>& sigma3) {
    using namespace mp;
    mpfr_rnd_t R = MPFR_RNDN;
    Real pi(prec), y(prec), angle(prec), qabs(prec), t(prec), u(prec), t2(prec);
    mpfr_const_pi(pi.v, R);
    // y = pi sqrt(|D|) / a  (this is 2 pi Im tau)
    mpfr_set_si(y.v, -D, R);
    mpfr_sqrt(y.v, y.v, R);
    mpfr_mul(y.v, y.v, pi.v, R);
    mpfr_div_si(y.v, y.v, a, R);
    // angle = -pi b / a (this is 2 pi Re tau)
    mpfr_mul_si(angle.v, pi.v, -b, R);
    mpfr_div_si(angle.v, angle.v, a, R);
    // q = qabs (cos angle + i sin angle), qabs = exp(-y)
    mpfr_neg(qabs.v, y.v, R);
    mpfr_exp(qabs.v, qabs.v, R);
    Complex q(prec);
    mpfr_sin_cos(q.im.v, q.re.v, angle.v, R);
    mpfr_mul(q.re.v, q.re.v, qabs.v, R);
    mpfr_mul(q.im.v, q.im.v, qabs.v, R);

    auto cmul = [&](Complex& z, const Complex& w) {
        // z *= w; alias-safe (reads both operands before writing z)
        mpfr_mul(t.v, z.re.v, w.re.v, R);
        mpfr_mul(u.v, z.im.v, w.im.v, R);
        mpfr_sub(t.v, t.v, u.v, R);
        mpfr_mul(u.v, z.re.v, w.im.v, R);
        mpfr_mul(t2.v, z.im.v, w.re.v, R);
        mpfr_add(u.v, u.v, t2.v, R);
        mpfr_swap(z.re.v, t.v);
        mpfr_swap(z.im.v, u.v);
    };
    auto cadd_scaled = [&](Complex& z, const Complex& w, long long s) {
        mpfr_mul_si(t.v, w.re.v, s, R);
        mpfr_add(z.re.v, z.re.v, t.v, R);
        mpfr_mul_si(t.v, w.im.v, s, R);
        mpfr_add(z.im.v, z.im.v, t.v, R);
    };

    double yd = mpfr_get_d(y.v, R);
    double target = ((double)prec + 16) * std::log(2.0);
    // E4 = 1 + 240 sum sigma3(n) q^n: tail below 2^-(prec+16)
    long long n4 = 8;
    while ((double)n4 * yd - 4.0 * std::log((double)n4 + 1) - std::log(240.0) < target) ++n4;
    if ((size_t)n4 >= sigma3.size())
        throw std::logic_error("eval_j: sigma3 table too small");
    // pentagonal exponents for P = prod (1 - q^n), same power chain as E4
    std::vector<std::pair<long long, int>> pent;  // (exponent, sign)
    for (long long k = 1;; ++k) {
        long long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
        if ((double)g1 * yd > target && (double)g2 * yd > target) break;
        int s = (k % 2 == 0) ? 1 : -1;
        if ((double)g1 * yd <= target) pent.push_back({g1, s});
        if ((double)g2 * yd <= target) pent.push_back({g2, s});
    }
    std::sort(pent.begin(), pent.end());
    Complex e4(prec), P(prec), qn(prec);
    mpfr_set_si(e4.re.v, 1, R);
    mpfr_set_si(P.re.v, 1, R);
    mpfr_set_si(qn.re.v, 1, R);
    long long chain_max = std::max(n4, pent.empty() ? 0 : pent.back().first);
    size_t pent_idx = 0;
    for (long long n = 1; n <= chain_max; ++n) {
        cmul(qn, q);
        if (n <= n4) cadd_scaled(e4, qn, 240 * sigma3[n]);
        while (pent_idx < pent.size() && pent[pent_idx].first == n) {
            cadd_scaled(P, qn, pent[pent_idx].second);
            ++pent_idx;
        }
    }
    // Delta = q * P^24
    Complex delta(prec);
    delta = P;
    for (int i = 0; i < 3; ++i) cmul(delta, delta);  // P^8
    Complex p8(prec);
    p8 = delta;
    cmul(delta, p8);   // P^16
    cmul(delta, p8);   // P^24
    cmul(delta, q);
    // j = E4^3 / Delta
    Complex num(prec);
    num = e4;
    cmul(num, e4);
    cmul(num, e4);
    // divide: num / delta = num * conj(delta) / |delta|^2
    Real norm(prec);
    mpfr_mul(t.v, delta.re.v, delta.re.v, R);
    mpfr_mul(u.v, delta.im.v, delta.im.v, R);
    mpfr_add(norm.v, t.v, u.v, R);
    Complex conj(prec);
    conj = delta;
    mpfr_neg(conj.im.v, conj.im.v, R);
    cmul(num, conj);
    mpfr_div(out.re.v, num.re.v, norm.v, R);
    mpfr_div(out.im.v, num.im.v, norm.v, R);
}

}  // namespace detail

// Hilbert class polynomial of a discriminant D (|D| <= cap), coefficients
// exact after the rounding-margin check.  The precision bound
// bits = 20 + 3.5 pi sqrt(|D|) (sum over reduced forms of 1/a) / ln 2
// is raised by x1.5 on margin failure, a bounded number of times.
inline ClassPoly hilbert_class_poly(long long D, long long cap = 40000) {
    if (!is_discriminant(D)) throw std::invalid_argument("hilbert_class_poly: bad D");
    if (-D > cap) throw budget_error("hilbert_class_poly: |D| exceeds cap");
    auto forms = class_group(D);
    const size_t h = forms.size();
    double inv_a_sum = 0;
    for (const auto& f : forms) inv_a_sum += 1.0 / (double)f.a;
    double bits = 20 + 3.5 * 3.14159265358979 * std::sqrt((double)-D) * inv_a_sum /
                         std::log(2.0);
    mpfr_prec_t prec = (mpfr_prec_t)bits + 16;

    for (int attempt = 0; attempt < 5; ++attempt) {
        // sigma3 table sized for the worst form (largest a)
        long long amax = 1;
        for (const auto& f : forms) amax = std::max(amax, f.a);
        double ymin = 3.14159265358979 * std::sqrt((double)-D) / (double)amax;
        long long nmax = (long long)(((double)prec + 16) * std::log(2.0) / ymin) + 64;
        std::vector<long long> sigma3(nmax + 8, 0);
        for (long long d = 1; d <= nmax + 4; ++d)
            for (long long n = d; n <= nmax + 4; n += d) sigma3[n] += d * d * d;

        mpfr_rnd_t R = MPFR_RNDN;
        // real polynomial accumulated from linear/quadratic real factors
        std::vector<mp::Real> poly;
        poly.emplace_back(prec);
        mpfr_set_si(poly[0].v, 1, R);
        mp::Real t(prec), u(prec);

        auto mul_factor = [&](const std::vector<mp::Real>& fac) {
            std::vector<mp::Real> res;
            size_t deg = poly.size() - 1 + fac.size() - 1;
            res.reserve(deg + 1);
            for (size_t k = 0; k <= deg; ++k) res.emplace_back(prec);
            for (size_t i = 0; i < poly.size(); ++i)
                for (size_t j = 0; j < fac.size(); ++j) {
                    mpfr_mul(t.v, poly[i].v, fac[j].v, R);
                    mpfr_add(res[i + j].v, res[i + j].v, t.v, R);
                }
            poly = std::move(res);
        };

        bool ok = true;
        for (const auto& f : forms) {
            if (f.b < 0) continue;  // conjugate pair handled with its partner
            mp::Complex j(prec);
            detail::eval_j(j, f.a, f.b, D, prec, sigma3);
            bool self_paired = (f.b == 0 || f.b == f.a || f.a == f.c);
            if (self_paired) {
                // real j: linear factor (X - j)
                std::vector<mp::Real> fac;
                fac.emplace_back(prec);
                fac.emplace_back(prec);
                mpfr_neg(fac[0].v, j.re.v, R);
                mpfr_set_si(fac[1].v, 1, R);
                mul_factor(fac);
            } else {
                // (X - j)(X - conj j) = X^2 - 2 Re(j) X + |j|^2
                std::vector<mp::Real> fac;
                for (int k = 0; k < 3; ++k) fac.emplace_back(prec);
                mpfr_mul(t.v, j.re.v, j.re.v, R);
                mpfr_mul(u.v, j.im.v, j.im.v, R);
                mpfr_add(fac[0].v, t.v, u.v, R);
                mpfr_mul_si(fac[1].v, j.re.v, -2, R);
                mpfr_set_si(fac[2].v, 1, R);
                mul_factor(fac);
            }
        }
        if (poly.size() != h + 1) throw std::logic_error("hilbert_class_poly: degree mismatch");

        // round to integers with margin check (distance to nearest integer
        // must stay below 0.2, i.e. margin 0.5 - dist >= 0.3)
        ClassPoly out{D, std::vector<mpz_class>(h + 1)};
        for (size_t k = 0; k <= h && ok; ++k) {
            mpz_class z;
            mpfr_get_z(z.get_mpz_t(), poly[k].v, MPFR_RNDN);
            mpfr_set_z(t.v, z.get_mpz_t(), R);
            mpfr_sub(t.v, poly[k].v, t.v, R);
            double dist = std::abs(mpfr_get_d(t.v, R));
            if (dist > 0.2) ok = false;
            out.coeffs[k] = z;
        }
        if (ok) {
            if (out.coeffs[h] != 1)
                throw std::logic_error("hilbert_class_poly: not monic after rounding");
            return out;
        }
        prec = (mpfr_prec_t)(prec * 3 / 2);
    }
    throw precision_error("hilbert_class_poly: rounding margin exhausted");
}

}  // namespace padiclab
