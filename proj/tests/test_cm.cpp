#include <catch2/catch_amalgamated.hpp>

#include "padiclab/cm.hpp"

using namespace padiclab;

TEST_CASE("hilbert class polynomials, small cases") {
    // D = -3 -> X ; oracle: j(zeta_3 point) = 0
    auto h3 = hilbert_class_poly(-3);
    REQUIRE(h3.coeffs.size() == 2);
    CHECK(h3.coeffs[0] == 0);
    CHECK(h3.coeffs[1] == 1);

    // D = -7 -> X + 3375
    auto h7 = hilbert_class_poly(-7);
    REQUIRE(h7.coeffs.size() == 2);
    CHECK(h7.coeffs[0] == 3375);

    auto h4 = hilbert_class_poly(-4);
    CHECK(h4.coeffs[0] == -1728);

    // classical h = 3 example: X^3 + 3491750 X^2 - 5151296875 X + 12771880859375
    auto h23 = hilbert_class_poly(-23);
    REQUIRE(h23.coeffs.size() == 4);
    CHECK(h23.coeffs[2] == mpz_class("3491750"));
    CHECK(h23.coeffs[1] == mpz_class("-5151296875"));
    CHECK(h23.coeffs[0] == mpz_class("12771880859375"));

    // degree equals the class number
    for (long long D : {-15LL, -20LL, -47LL, -71LL, -84LL, -195LL}) {
        auto H = hilbert_class_poly(D);
        CHECK((long long)H.coeffs.size() - 1 == class_number(D));
    }

    CHECK_THROWS_AS(hilbert_class_poly(-100000), budget_error);
}

TEST_CASE("reduction vectors") {
    auto s7 = supersingular_set(7);
    // H_{-7} = X + 3375 = X + 1 mod 7, root 6 = j(ss)
    auto v = reduction_vector(s7, -7);
    REQUIRE(v.entries.size() == 1);
    CHECK(v.entries[0] == 1);
    CHECK(v.deg == 1);

    auto v4 = reduction_vector(s7, -4);
    CHECK(v4.entries[0] == 1);

    CHECK_THROWS_AS(reduction_vector(supersingular_set(2), -23), std::invalid_argument);

    // sum of entries = h(D) across a range
    auto s11 = supersingular_set(11);
    for (long long D : {-7LL, -8LL, -11LL, -19LL, -20LL, -35LL, -40LL, -52LL, -84LL}) {
        if (!classify_padic(D, 11)) continue;
        auto vv = reduction_vector(s11, D);
        long long sum = 0;
        for (long long e : vv.entries) sum += e;
        CHECK(sum == vv.deg);
        CHECK(vv.deg == class_number(D));
    }
}

TEST_CASE("residual report") {
    // single-class p: deviation is always 0
    auto s7 = supersingular_set(7);
    for (long long d : {-7LL, -4LL, -8LL, -11LL}) {
        if (!classify_padic(d, 7)) continue;
        auto rep = residual_report(s7, d, 1);
        CHECK(rep.max_deviation == Rational(0));
    }
    // deviations are bounded by 2 trivially, and nonnegative
    auto s11 = supersingular_set(11);
    for (long long d : {-7LL, -8LL, -19LL, -40LL, -43LL}) {
        if (!classify_padic(d, 11)) continue;
        auto rep = residual_report(s11, d, 1);
        CHECK(rep.max_deviation >= Rational(0));
        CHECK(rep.max_deviation <= Rational(2));
    }
}

TEST_CASE("zhang consistency examples") {
    auto s11 = supersingular_set(11);
    // d = -3 (inert at 11, w_{d,1} = 3), f = 2: both sides computed
    // independently; the spec's nominal example d = -7 is split at 11
    auto rep = zhang_consistency(s11, -3, 2);
    CHECK(rep.id_hecke);
    CHECK(rep.id_degree);
    CHECK(rep.all_ok());

    // f = 1 trivial (d = -3 is inert at 11)
    auto rep1 = zhang_consistency(s11, -3, 1);
    CHECK(rep1.id_hecke);

    // d = -4, p = 7, r = 1: v(L_{-4}) vs v(L_{-196}) ratio equality
    auto s7 = supersingular_set(7);
    auto rep2 = zhang_consistency(s7, -4, 1);
    REQUIRE(!rep2.id_ppower.empty());
    CHECK(rep2.id_ppower[0].first == 1);
    CHECK(rep2.id_ppower[0].second);

    CHECK_THROWS_AS(zhang_consistency(s7, -4, 7), std::invalid_argument);
    CHECK_THROWS_AS(zhang_consistency(s7, -4, 11), std::invalid_argument);
}

TEST_CASE("zhang consistency small grid") {
    auto s11 = supersingular_set(11);
    int count = 0;
    for (long long d = -3; d >= -60; --d) {
        if (!is_fundamental_discriminant(d)) continue;
        if (!classify_padic(d, 11)) continue;
        for (long long f : {1LL, 2LL, 3LL, 4LL}) {
            auto rep = zhang_consistency(s11, d, f, 40000, 1);
            CAPTURE(d, f, rep.detail);
            CHECK(rep.all_ok());
            ++count;
        }
    }
    CHECK(count >= 30);
}

TEST_CASE("genus partition") {
    // prime discriminants: one-sided per kronecker(d, f)
    struct Case { long long d, p; };
    for (auto [d, p] : {Case{-7, 7}, Case{-11, 11}, Case{-4, 2}, Case{-8, 2}}) {
        long long h = class_number(d);
        auto g1 = genus_partition(d, 1, p);
        CHECK(g1.deg_plus == h);
        CHECK(g1.deg_minus == 0);
        for (long long f = 2; f <= 12; ++f) {
            if (f % p == 0) continue;
            auto g = genus_partition(d, f, p);
            long long hf = class_number(d * f * f);
            if (kronecker(d, f) == 1) {
                CHECK(g.deg_plus == hf);
                CHECK(g.deg_minus == 0);
            } else {
                CHECK(g.deg_plus == 0);
                CHECK(g.deg_minus == hf);
            }
        }
    }
    // non-prime d divisible by p: equal split
    for (auto [d, p] : {Case{-15, 3}, Case{-15, 5}, Case{-20, 2}, Case{-20, 5},
                        Case{-24, 2}, Case{-24, 3}}) {
        auto g1 = genus_partition(d, 1, p);
        CHECK(g1.deg_plus == g1.deg_minus);
        CHECK(g1.deg_plus + g1.deg_minus == class_number(d));
        for (long long f = 2; f <= 8; ++f) {
            if (f % p == 0) continue;
            auto g = genus_partition(d, f, p);
            CHECK(g.deg_plus == g.deg_minus);
            CHECK(g.deg_plus + g.deg_minus == class_number(d * f * f));
        }
    }
    CHECK_THROWS_AS(genus_partition(-7, 1, 3), std::invalid_argument);
}

TEST_CASE("genus character is trivial exactly on prime discriminants") {
    // chi = 1 on all classes iff d is a prime discriminant (one genus per
    // the symmetry-breaking dichotomy)
    for (long long d : {-7LL, -11LL, -19LL, -23LL, -43LL}) {
        if (!is_fundamental_discriminant(d)) continue;
        long long p = -d % 2 == 0 ? 2 : -d;
        if (!is_prime(p)) continue;
        auto g = genus_partition(d, 1, p);
        CHECK(g.deg_minus == 0);
    }
}
