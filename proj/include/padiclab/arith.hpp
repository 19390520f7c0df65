#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace padiclab {

// Error raised when a configured enumeration/depth budget is exceeded.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Error raised when an exact identity that is a theorem fails; always a bug.
struct identity_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline long long pow_ll(long long p, int e) {
    long long r = 1;
    while (e-- > 0) r *= p;
    return r;
}

inline long long mulmod(long long a, long long b, long long m) {
    return (long long)(((__int128)a * b) % m);
}

inline long long powmod(long long a, long long e, long long m) {
    a %= m;
    if (a < 0) a += m;
    long long r = 1 % m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Modular inverse mod m (m need not be prime, a must be a unit).
inline long long invmod(long long a, long long m) {
    long long t = 0, nt = 1, r = m, nr = a % m;
    if (nr < 0) nr += m;
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not a unit");
    return t < 0 ? t + m : t;
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline int ord_p(long long n, long long p) {
    if (n == 0) throw std::invalid_argument("ord_p(0)");
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline long long sigma1(long long n) {
    long long s = 1;
    for (long long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        long long qs = 1, acc = 1;
        while (n % q == 0) { n /= q; qs *= q; acc += qs; }
        s *= acc;
    }
    if (n > 1) s *= 1 + n;
    return s;
}

inline long long moebius(long long n) {
    if (n < 1) throw std::invalid_argument("moebius: n < 1");
    int k = 0;
    for (long long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        n /= q;
        if (n % q == 0) return 0;
        ++k;
    }
    if (n > 1) ++k;
    return (k % 2 == 0) ? 1 : -1;
}

inline long long num_divisors(long long n) {
    long long c = 1;
    for (long long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) { n /= q; ++e; }
        c *= e + 1;
    }
    if (n > 1) c *= 2;
    return c;
}

inline std::vector<long long> divisors(long long n) {
    std::vector<long long> out;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        if (d != n / d) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Factorization as (prime, exponent) pairs, trial division.
inline std::vector<std::pair<long long, int>> factorize(long long n) {
    std::vector<std::pair<long long, int>> out;
    if (n < 0) n = -n;
    for (long long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) { n /= q; ++e; }
        out.push_back({q, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline long long square_part(long long n) {
    long long s = 1;
    for (auto [q, e] : factorize(n))
        for (int i = 0; i + 1 < e; i += 2) s *= q;
    return s;
}

// Full Kronecker symbol (a|n): n may be zero, negative or even.
inline int kronecker(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int s = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) s = -s;
    }
    int v = 0;
    while ((n & 1) == 0) { n >>= 1; ++v; }
    if (v & 1) {
        long long am = a % 8;
        if (am < 0) am += 8;
        if (am == 3 || am == 5) s = -s;  // (a|2) = -1 iff a = +-3 mod 8
    }
    a %= n;
    if (a < 0) a += n;
    // Jacobi loop on odd positive n
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            long long nm = n % 8;
            if (nm == 3 || nm == 5) s = -s;
        }
        std::swap(a, n);
        if ((a % 4) == 3 && (n % 4) == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

// Hilbert symbol (a,b)_p over Q_p, p prime (p = 2 allowed).
inline int hilbert_symbol(long long a, long long b, long long p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
    int alpha = ord_p(a, p), beta = ord_p(b, p);
    long long u = a, v = b;
    for (int i = 0; i < alpha; ++i) u /= p;
    for (int i = 0; i < beta; ++i) v /= p;
    if (p != 2) {
        int sign = 1;
        if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1) sign = -sign;
        if (beta & 1) sign *= kronecker(u, p);
        if (alpha & 1) sign *= kronecker(v, p);
        return sign;
    }
    auto eps = [](long long x) { long long m = ((x - 1) / 2) % 2; return m < 0 ? m + 2 : m; };
    auto omega = [](long long x) { long long m = ((x * x - 1) / 8) % 2; return m < 0 ? m + 2 : m; };
    long long e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return (e % 2 == 0) ? 1 : -1;
}

// Bounded arithmetic function, memoized on 1..bound.  Values are integers;
// the Dirichlet inverse of an integer function with f(1) = +-1 is again
// integer-valued.
class ArithFn {
public:
    ArithFn(std::function<long long(long long)> fn, long long bound)
        : values_(bound + 1, 0) {
        if (bound < 1) throw std::invalid_argument("ArithFn: bound < 1");
        for (long long n = 1; n <= bound; ++n) values_[n] = fn(n);
    }

    long long bound() const { return (long long)values_.size() - 1; }
    long long operator()(long long n) const {
        if (n < 1 || n > bound()) throw std::out_of_range("ArithFn: index");
        return values_[n];
    }

    static ArithFn one(long long bound) {
        return ArithFn([](long long) { return 1; }, bound);
    }
    static ArithFn identity_e(long long bound) {
        return ArithFn([](long long n) { return n == 1 ? 1 : 0; }, bound);
    }
    static ArithFn moebius_fn(long long bound) {
        return ArithFn([](long long n) { return moebius(n); }, bound);
    }
    static ArithFn sigma1_fn(long long bound) {
        return ArithFn([](long long n) { return sigma1(n); }, bound);
    }
    // psi_d(n) = Kronecker (d|n)
    static ArithFn psi(long long d, long long bound) {
        return ArithFn([d](long long n) { return kronecker(d, n); }, bound);
    }
    // R_d = 1 * psi_d
    static ArithFn R(long long d, long long bound) {
        return one(bound).convolve(psi(d, bound));
    }

    ArithFn convolve(const ArithFn& g) const {
        long long b = std::min(bound(), g.bound());
        ArithFn out = identity_e(b);
        for (long long n = 1; n <= b; ++n) {
            long long s = 0;
            for (long long d = 1; d * d <= n; ++d) {
                if (n % d) continue;
                s += values_[d] * g.values_[n / d];
                if (d != n / d) s += values_[n / d] * g.values_[d];
            }
            out.values_[n] = s;
        }
        return out;
    }

    // Dirichlet inverse up to the bound; requires f(1) = +-1.
    ArithFn dirichlet_inverse() const {
        long long f1 = values_[1];
        if (f1 != 1 && f1 != -1)
            throw std::invalid_argument("dirichlet_inverse: f(1) must be a unit");
        ArithFn out = identity_e(bound());
        out.values_[1] = f1;  // 1/f(1) = f(1) for f(1) = +-1
        for (long long n = 2; n <= bound(); ++n) {
            long long s = 0;
            for (long long d = 1; d < n; ++d) {
                if (n % d) continue;
                s += values_[n / d] * out.values_[d];
            }
            out.values_[n] = -f1 * s;
        }
        return out;
    }

private:
    ArithFn() = default;
    std::vector<long long> values_;
};

// x with x^2 = a mod p^r, for a p-adic unit a; nullopt when a is not a
// square unit.  Requires r >= 3 if p = 2.
inline std::optional<long long> padic_sqrt(long long a, long long p, int r) {
    if (r < 1) throw std::invalid_argument("padic_sqrt: r < 1");
    long long pr = 1;
    for (int i = 0; i < r; ++i) pr *= p;
    long long am = a % pr;
    if (am < 0) am += pr;
    if (am % p == 0) throw std::invalid_argument("padic_sqrt: a not a unit");
    if (p == 2) {
        if (r < 3) throw std::invalid_argument("padic_sqrt: need r >= 3 at p = 2");
        if (am % 8 != 1) return std::nullopt;
        long long x = 1;
        for (int k = 3; k < r; ++k) {
            long long mod = 1LL << (k + 1);
            if (((__int128)x * x - am) % mod != 0) x += 1LL << (k - 1);
        }
        return x % pr;
    }
    if (kronecker(am % p, p) != 1) return std::nullopt;
    // Tonelli-Shanks mod p
    long long q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    long long z = 2;
    while (kronecker(z, p) != -1) ++z;
    long long m = s, c = powmod(z, q, p), t = powmod(am, q, p),
              x = powmod(am, (q + 1) / 2, p);
    while (t != 1) {
        long long i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        long long bexp = m - i - 1, bb = c;
        for (long long e = 0; e < bexp; ++e) bb = mulmod(bb, bb, p);
        m = i;
        c = mulmod(bb, bb, p);
        t = mulmod(t, c, p);
        x = mulmod(x, bb, p);
    }
    // Newton lift to p^r
    long long mod = p;
    while (mod < pr) {
        mod = (mod > pr / mod) ? pr : mod * mod;
        long long inv2x = invmod((2 * x) % mod, mod);
        long long fx = (long long)((((__int128)x * x - am) % mod + mod) % mod);
        x = (long long)(((x - (__int128)fx * inv2x) % mod + mod) % mod);
    }
    return x % pr;
}

}  // namespace padiclab
