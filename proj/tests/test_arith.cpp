#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "padiclab/arith.hpp"

using namespace padiclab;

TEST_CASE("kronecker basic values") {
    for (long long d : {-3LL, -4LL, -7LL, 5LL, 12LL, -163LL})
        CHECK(kronecker(d, 1) == 1);
    CHECK(kronecker(-4, 7) == -1);   // squares mod 7 are {1,2,4}, -4 = 3 is not
    CHECK(kronecker(-23, 2) == 1);   // -23 = 1 mod 8
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(6, 3) == 0);
    CHECK(kronecker(5, 0) == 0);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(-1, 0) == 1);
}

TEST_CASE("kronecker agrees with Euler criterion at odd primes") {
    for (long long p : {3LL, 5LL, 7LL, 11LL, 13LL, 97LL}) {
        for (long long a = -30; a <= 30; ++a) {
            long long am = ((a % p) + p) % p;
            int want;
            if (am == 0) {
                want = 0;
            } else {
                long long e = powmod(am, (p - 1) / 2, p);
                want = (e == 1) ? 1 : -1;
            }
            CHECK(kronecker(a, p) == want);
        }
    }
}

TEST_CASE("kronecker mod-8 rule at n = 2 backed by solvability") {
    // -23 = 1 mod 8: x^2 = -23 mod 64 must be solvable
    bool solvable = false;
    for (long long x = 0; x < 64; ++x)
        if (((x * x + 23) % 64) == 0) solvable = true;
    CHECK(solvable);
    CHECK(kronecker(-23, 2) == 1);
}

TEST_CASE("kronecker completely multiplicative in each argument") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long long> dist(-200, 200);
    for (int it = 0; it < 500; ++it) {
        long long a = dist(rng), b = dist(rng), n = dist(rng), m = dist(rng);
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
        CHECK(kronecker(a, n * m) == kronecker(a, n) * kronecker(a, m));
    }
}

TEST_CASE("hilbert symbol basics") {
    CHECK_THROWS_AS(hilbert_symbol(0, 5, 3), std::invalid_argument);
    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        for (long long b : {1LL, 2LL, -3LL, 10LL, -14LL})
            CHECK(hilbert_symbol(1, b, p) == 1);
    }
    CHECK(hilbert_symbol(3, -7, 7) == -1);
}

TEST_CASE("hilbert symbol -1 consistent with non-solvability search") {
    // (3,-7)_7 = -1: no nonsingular solution of z^2 = 3x^2 - 7y^2 mod 7^3
    long long M = 343;
    bool found = false;
    for (long long x = 0; x < M && !found; ++x)
        for (long long y = 0; y < M && !found; ++y) {
            if (x % 7 == 0 && y % 7 == 0) continue;
            long long rhs = ((3 * x * x - 7 * y * y) % M + M) % M;
            for (long long z = 0; z < M; ++z)
                if (z * z % M == rhs && (z % 7 || x % 7)) { found = true; break; }
        }
    CHECK_FALSE(found);
}

TEST_CASE("hilbert symbol symmetric and bimultiplicative") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> dist(1, 60);
    for (long long p : {2LL, 3LL, 5LL, 11LL}) {
        for (int it = 0; it < 300; ++it) {
            long long a = dist(rng), b = dist(rng), c = dist(rng);
            if (rng() & 1) a = -a;
            if (rng() & 1) b = -b;
            if (rng() & 1) c = -c;
            CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
            CHECK(hilbert_symbol(a * c, b, p) ==
                  hilbert_symbol(a, b, p) * hilbert_symbol(c, b, p));
        }
    }
}

TEST_CASE("dirichlet inverse of R_d") {
    const long long B = 10000;
    for (long long d : {-3LL, -4LL, -7LL, -15LL, -23LL, -56LL}) {
        ArithFn Rd = ArithFn::R(d, B);
        ArithFn Rinv = Rd.dirichlet_inverse();
        ArithFn conv = Rd.convolve(Rinv);
        CHECK(conv(1) == 1);
        for (long long n = 2; n <= B; ++n) {
            if (conv(n) != 0) {
                CAPTURE(d, n);
                REQUIRE(conv(n) == 0);
            }
        }
        // closed form mu * (mu . psi_d)
        ArithFn mu = ArithFn::moebius_fn(B);
        ArithFn mupsi([d](long long n) { return moebius(n) * kronecker(d, n); }, B);
        ArithFn closed = mu.convolve(mupsi);
        for (long long n = 1; n <= 200; ++n) CHECK(Rinv(n) == closed(n));
    }
}

TEST_CASE("R_d inverse prime power table") {
    const long long B = 2500;
    for (long long d : {-7LL, -15LL, -20LL}) {
        ArithFn Rinv = ArithFn::R(d, B).dirichlet_inverse();
        for (long long q : {2LL, 3LL, 5LL, 7LL, 11LL}) {
            long long psi = kronecker(d, q);
            CHECK(Rinv(q) == -1 - psi);
            if (q * q <= B) CHECK(Rinv(q * q) == psi);
            if (q * q * q <= B) CHECK(Rinv(q * q * q) == 0);
            // psi(q) = -1 and odd s: inverse vanishes
            if (psi == -1 && q * q * q <= B) CHECK(Rinv(q * q * q) == 0);
        }
    }
    ArithFn Rinv7 = ArithFn::R(-7, 10).dirichlet_inverse();
    CHECK(Rinv7(1) == 1);
    CHECK(Rinv7(2) == -1 - kronecker(-7, 2));
    CHECK(Rinv7(2) == -2);
}

TEST_CASE("R_d inverse bounds") {
    const long long B = 10000;
    for (long long d : {-4LL, -23LL, -40LL}) {
        ArithFn Rinv = ArithFn::R(d, B).dirichlet_inverse();
        ArithFn conv = Rinv.convolve(ArithFn::sigma1_fn(B));
        for (long long m = 1; m <= B; ++m) {
            CHECK(std::llabs(Rinv(m)) <= num_divisors(m));
            // (Rinv * sigma1)(m) >= m prod_{q|m} (1 - 1/q), checked as integers
            long long lhs = conv(m);
            long long num = m, den = 1;
            for (auto [q, e] : factorize(m)) { num *= q - 1; den *= q; }
            CHECK(lhs * den >= num);
        }
    }
}

TEST_CASE("dirichlet inverse rejects f(1) = 0") {
    ArithFn f([](long long n) { return n - 1; }, 10);
    CHECK_THROWS_AS(f.dirichlet_inverse(), std::invalid_argument);
}

TEST_CASE("padic sqrt") {
    CHECK(padic_sqrt(1, 7, 4).value() == 1);
    CHECK(padic_sqrt(1, 2, 5).value() == 1);

    // oracle: square all residues mod 343 and collect the roots of 2
    std::vector<long long> roots;
    for (long long x = 0; x < 343; ++x)
        if (x * x % 343 == 2) roots.push_back(x);
    REQUIRE(roots == std::vector<long long>{108, 235});
    long long r = padic_sqrt(2, 7, 3).value();
    CHECK((r == 108 || r == 235));

    CHECK_FALSE(padic_sqrt(3, 2, 4).has_value());  // 3 != 1 mod 8
    CHECK_FALSE(padic_sqrt(5, 7, 2).has_value());  // 5 is not a QR mod 7
    CHECK_THROWS_AS(padic_sqrt(14, 7, 3), std::invalid_argument);
    CHECK_THROWS_AS(padic_sqrt(3, 2, 2), std::invalid_argument);

    std::mt19937_64 rng(7);
    for (long long p : {3LL, 5LL, 7LL, 11LL}) {
        long long pr = 1;
        for (int i = 0; i < 5; ++i) pr *= p;
        for (int it = 0; it < 50; ++it) {
            long long u = (long long)(rng() % pr);
            if (u % p == 0) continue;
            long long a = mulmod(u, u, pr);
            long long x = padic_sqrt(a, p, 5).value();
            CHECK(mulmod(x, x, pr) == a % pr);
        }
    }
    for (int it = 0; it < 50; ++it) {
        std::mt19937_64 rng2(100 + it);
        long long u = (long long)(rng2() % 256) | 1;
        long long a = (u * u) % 256;
        long long x = padic_sqrt(a, 2, 8).value();
        CHECK((x * x) % 256 == a);
    }
}

TEST_CASE("arith helpers") {
    CHECK(sigma1(1) == 1);
    CHECK(sigma1(6) == 12);
    CHECK(sigma1(49) == 57);
    CHECK(moebius(1) == 1);
    CHECK(moebius(30) == -1);
    CHECK(moebius(12) == 0);
    CHECK(ord_p(48, 2) == 4);
    CHECK(num_divisors(36) == 9);
    CHECK(square_part(72) == 6);   // 72 = 36 * 2, largest square 36
    CHECK(square_part(10) == 1);
}
