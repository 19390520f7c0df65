#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "padiclab/arith.hpp"

namespace padiclab {

inline bool is_discriminant(long long D) {
    if (D >= 0) return false;
    long long m = D % 4;
    if (m < 0) m += 4;
    return m == 0 || m == 1;
}

// Primitive integral binary quadratic form a x^2 + b xy + c y^2.
struct BinaryForm {
    long long a, b, c;

    long long disc() const { return b * b - 4 * a * c; }
    long long eval(long long x, long long y) const {
        return a * x * x + b * x * y + c * y * y;
    }
    bool is_reduced() const {
        if (!(std::llabs(b) <= a && a <= c)) return false;
        if ((std::llabs(b) == a || a == c) && b < 0) return false;
        return true;
    }
    friend bool operator==(const BinaryForm& f, const BinaryForm& g) {
        return f.a == g.a && f.b == g.b && f.c == g.c;
    }
    friend bool operator<(const BinaryForm& f, const BinaryForm& g) {
        if (f.a != g.a) return f.a < g.a;
        if (f.b != g.b) return f.b < g.b;
        return f.c < g.c;
    }
};

// Gauss reduction of a positive definite form.
inline BinaryForm reduce_form(BinaryForm f) {
    if (f.a <= 0 || f.disc() >= 0)
        throw std::invalid_argument("reduce_form: not positive definite");
    while (true) {
        if (f.c < f.a) { f = {f.c, -f.b, f.a}; continue; }
        if (f.b > f.a || f.b <= -f.a) {
            // normalize b into (-a, a]
            long long r = f.b % (2 * f.a);
            if (r > f.a) r -= 2 * f.a;
            if (r <= -f.a) r += 2 * f.a;
            long long s = (f.b - r) / (2 * f.a);
            long long c2 = f.c - s * (f.b + r) / 2;
            f = {f.a, r, c2};
            continue;
        }
        if (f.a == f.c && f.b < 0) { f = {f.a, -f.b, f.c}; continue; }
        if (std::llabs(f.b) == f.a && f.b < 0) { f = {f.a, -f.b, f.c}; continue; }
        break;
    }
    return f;
}

// All primitive reduced forms of discriminant D; size h(D).
inline std::vector<BinaryForm> class_group(long long D) {
    if (!is_discriminant(D)) throw std::invalid_argument("class_group: bad discriminant");
    std::vector<BinaryForm> out;
    for (long long a = 1; 3 * a * a <= -D; ++a) {
        for (long long b = -a + 1; b <= a; ++b) {
            long long num = b * b - D;
            if (num % (4 * a)) continue;
            long long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline long long class_number(long long D) { return (long long)class_group(D).size(); }

inline BinaryForm principal_form(long long D) {
    long long m = ((D % 2) + 2) % 2;
    return {1, m, (m * m - D) / 4};
}

inline BinaryForm inverse_form(const BinaryForm& f) {
    return reduce_form({f.a, -f.b, f.c});
}

// Dirichlet composition of primitive forms of equal discriminant.
inline BinaryForm compose(const BinaryForm& f, const BinaryForm& g) {
    if (f.disc() != g.disc())
        throw std::invalid_argument("compose: discriminants differ");
    long long D = f.disc();
    long long a1 = f.a, b1 = f.b, a2 = g.a, b2 = g.b, c2 = g.c;
    long long s = (b1 + b2) / 2, n = (b1 - b2) / 2;
    // d1 = gcd(a1, a2, s) = u a1 + v a2 + w s
    long long u, v, w;
    long long g1 = std::gcd(a1, a2);
    // extended gcd in two steps
    auto ext = [](long long a, long long b, long long& x, long long& y) {
        long long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
        while (b) {
            long long q = a / b, t;
            t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
            t = y0 - q * y1; y0 = y1; y1 = t;
        }
        x = x0, y = y0;
        return a;
    };
    long long x1, y1_, x2, y2_;
    long long d0 = ext(a1, a2, x1, y1_);
    long long d1 = ext(d0, s, x2, y2_);
    (void)g1;
    u = x2 * x1;
    v = x2 * y1_;
    w = y2_;
    long long a3 = (a1 / d1) * (a2 / d1);
    // b3 = b2 + 2 (a2/d1) (v n - w c2) mod 2 a3
    __int128 t = (__int128)v * n - (__int128)w * c2;
    __int128 b3 = b2 + 2 * (__int128)(a2 / d1) * t;
    __int128 mod = 2 * (__int128)a3;
    b3 %= mod;
    if (b3 < 0) b3 += mod;
    long long b3n = (long long)b3;
    if (((__int128)b3n * b3n - D) % (4 * (__int128)a3) != 0)
        throw identity_error("compose: B^2 != D mod 4A");
    __int128 c3 = ((__int128)b3n * b3n - D) / (4 * (__int128)a3);
    if (c3 > INT64_MAX || c3 < INT64_MIN) throw std::overflow_error("compose");
    return reduce_form({a3, b3n, (long long)c3});
}

// Smallest prime represented by the form that is coprime to `coprime_to`;
// used for evaluating genus characters on classes.
inline std::optional<long long> represented_prime(const BinaryForm& f, long long coprime_to,
                                                  long long box = 60) {
    long long best = -1;
    for (long long x = -box; x <= box; ++x) {
        for (long long y = -box; y <= box; ++y) {
            if (x == 0 && y == 0) continue;
            long long v = f.eval(x, y);
            if (v < 2) continue;
            if (best != -1 && v >= best) continue;
            if (std::gcd(v, coprime_to) != 1) continue;
            if (!is_prime(v)) continue;
            best = v;
        }
    }
    if (best == -1) return std::nullopt;
    return best;
}

}  // namespace padiclab
