#pragma once

#include <stdexcept>
#include <vector>

#include "padiclab/arith.hpp"

namespace padiclab {

// Element a + b t of F_{p^2}; the modulus for t is carried by Fp2Ctx.
struct Fp2 {
    long long a, b;
    friend bool operator==(const Fp2& x, const Fp2& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Fp2& x, const Fp2& y) { return !(x == y); }
    friend bool operator<(const Fp2& x, const Fp2& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
};

// F_{p^2} = F_p[t]/(t^2 - alpha) for odd p with alpha the least nonresidue;
// F_4 = F_2[t]/(t^2 + t + 1).
class Fp2Ctx {
public:
    explicit Fp2Ctx(long long p) : p_(p) {
        if (p < 2 || !is_prime(p)) throw std::invalid_argument("Fp2Ctx: p not prime");
        if (p == 2) {
            alpha_ = -1;  // marker: t^2 = t + 1
        } else {
            alpha_ = 2;
            while (kronecker(alpha_, p) != -1) ++alpha_;
        }
    }

    long long p() const { return p_; }

    Fp2 make(long long a, long long b = 0) const {
        return {((a % p_) + p_) % p_, ((b % p_) + p_) % p_};
    }
    Fp2 zero() const { return {0, 0}; }
    Fp2 one() const { return {1, 0}; }
    bool is_zero(const Fp2& x) const { return x.a == 0 && x.b == 0; }

    Fp2 add(const Fp2& x, const Fp2& y) const {
        return {(x.a + y.a) % p_, (x.b + y.b) % p_};
    }
    Fp2 sub(const Fp2& x, const Fp2& y) const {
        return {((x.a - y.a) % p_ + p_) % p_, ((x.b - y.b) % p_ + p_) % p_};
    }
    Fp2 neg(const Fp2& x) const { return {(p_ - x.a) % p_, (p_ - x.b) % p_}; }

    Fp2 mul(const Fp2& x, const Fp2& y) const {
        if (p_ == 2) {
            // (a1 + b1 t)(a2 + b2 t), t^2 = t + 1
            long long a = (x.a * y.a + x.b * y.b) & 1;
            long long b = (x.a * y.b + x.b * y.a + x.b * y.b) & 1;
            return {a, b};
        }
        long long a = (mulmod(x.a, y.a, p_) + mulmod(mulmod(x.b, y.b, p_), alpha_ % p_, p_)) % p_;
        long long b = (mulmod(x.a, y.b, p_) + mulmod(x.b, y.a, p_)) % p_;
        return {a, b};
    }

    Fp2 inv(const Fp2& x) const {
        if (is_zero(x)) throw std::domain_error("Fp2: inverse of zero");
        if (p_ == 2) {
            // units of F_4: 1, t, t+1 with t * (t+1) = t^2 + t = 1
            if (x.b == 0) return {1, 0};
            if (x.a == 0) return {1, 1};
            return {0, 1};
        }
        // (a + bt)^-1 = (a - bt) / (a^2 - alpha b^2)
        long long n = ((mulmod(x.a, x.a, p_) - mulmod(mulmod(x.b, x.b, p_), alpha_ % p_, p_)) % p_ + p_) % p_;
        long long ninv = invmod(n, p_);
        return {mulmod(x.a, ninv, p_), mulmod((p_ - x.b) % p_, ninv, p_)};
    }

    Fp2 pow(Fp2 x, long long e) const {
        Fp2 r = one();
        while (e > 0) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }

    Fp2 frobenius(const Fp2& x) const { return pow(x, p_); }
    bool in_base_field(const Fp2& x) const { return x.b == 0; }

    std::vector<Fp2> all_elements() const {
        std::vector<Fp2> out;
        out.reserve(p_ * p_);
        for (long long a = 0; a < p_; ++a)
            for (long long b = 0; b < p_; ++b) out.push_back({a, b});
        return out;
    }

private:
    long long p_;
    long long alpha_;
};

// Dense univariate polynomial over F_{p^2}, coefficient index = degree.
using PolyFp2 = std::vector<Fp2>;

inline Fp2 poly_eval(const Fp2Ctx& F, const PolyFp2& f, const Fp2& x) {
    Fp2 acc = F.zero();
    for (size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
    return acc;
}

inline void poly_trim(const Fp2Ctx& F, PolyFp2& f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
}

// Divide f by (X - root); returns quotient, requires exact division.
inline PolyFp2 poly_deflate(const Fp2Ctx& F, const PolyFp2& f, const Fp2& root) {
    if (f.empty()) throw std::invalid_argument("poly_deflate: zero polynomial");
    PolyFp2 q(f.size() - 1, F.zero());
    Fp2 carry = F.zero();
    for (size_t i = f.size(); i-- > 1;) {
        carry = F.add(f[i], F.mul(carry, root));
        q[i - 1] = carry;
    }
    Fp2 rem = F.add(f[0], F.mul(carry, root));
    if (!F.is_zero(rem)) throw std::invalid_argument("poly_deflate: not a root");
    return q;
}

// Multiplicity of root in f (possibly 0).
inline int poly_root_multiplicity(const Fp2Ctx& F, PolyFp2 f, const Fp2& root) {
    poly_trim(F, f);
    int mult = 0;
    while (!f.empty() && F.is_zero(poly_eval(F, f, root))) {
        f = poly_deflate(F, f, root);
        ++mult;
    }
    return mult;
}

}  // namespace padiclab
