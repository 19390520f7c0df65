#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "padiclab/forms.hpp"
#include "padiclab/padic_disc.hpp"
#include "padiclab/quadform.hpp"
#include "padiclab/rational.hpp"
#include "padiclab/ssgraph.hpp"

namespace padiclab {

// Quaternion q0 + q1 i + q2 j + q3 k with i^2 = a, j^2 = b, k = ij.
struct Quat {
    std::array<Rational, 4> c;
};

struct QuaternionAlgebra {
    long long a, b;

    Quat mul(const Quat& x, const Quat& y) const {
        Rational A(a), B(b);
        Quat z;
        z.c[0] = x.c[0] * y.c[0] + A * x.c[1] * y.c[1] + B * x.c[2] * y.c[2] -
                 A * B * x.c[3] * y.c[3];
        z.c[1] = x.c[0] * y.c[1] + x.c[1] * y.c[0] - B * (x.c[2] * y.c[3] - x.c[3] * y.c[2]);
        z.c[2] = x.c[0] * y.c[2] + x.c[2] * y.c[0] + A * (x.c[1] * y.c[3] - x.c[3] * y.c[1]);
        z.c[3] = x.c[0] * y.c[3] + x.c[3] * y.c[0] + (x.c[1] * y.c[2] - x.c[2] * y.c[1]);
        return z;
    }
    Quat conj(const Quat& x) const { return {{x.c[0], -x.c[1], -x.c[2], -x.c[3]}}; }
    Rational trd(const Quat& x) const { return x.c[0] * Rational(2); }
    Rational nrd(const Quat& x) const {
        Rational A(a), B(b);
        return x.c[0] * x.c[0] - A * x.c[1] * x.c[1] - B * x.c[2] * x.c[2] +
               A * B * x.c[3] * x.c[3];
    }
};

// Maximal order data: verified on load (integrality, multiplicative closure,
// reduced discriminant p).
struct MaximalOrderData {
    long long p;
    QuaternionAlgebra alg;
    std::array<Quat, 4> basis;
};

namespace detail {

// solve sum_i x_i basis_i = target over Q; returns coordinates
inline std::array<Rational, 4> solve_in_basis(const std::array<Quat, 4>& basis,
                                              const Quat& target) {
    // Gaussian elimination on the 4x4 system (columns = basis elements)
    std::array<std::array<Rational, 5>, 4> m;
    for (int r = 0; r < 4; ++r) {
        for (int cidx = 0; cidx < 4; ++cidx) m[r][cidx] = basis[cidx].c[r];
        m[r][4] = target.c[r];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (m[r][col] != Rational(0)) { piv = r; break; }
        if (piv < 0) throw std::logic_error("solve_in_basis: singular basis");
        std::swap(m[col], m[piv]);
        Rational s = m[col][col];
        for (int cidx = 0; cidx < 5; ++cidx) m[col][cidx] /= s;
        for (int r = 0; r < 4; ++r) {
            if (r == col || m[r][col] == Rational(0)) continue;
            Rational f = m[r][col];
            for (int cidx = 0; cidx < 5; ++cidx) m[r][cidx] -= f * m[col][cidx];
        }
    }
    return {m[0][4], m[1][4], m[2][4], m[3][4]};
}

inline Rational det4(std::array<std::array<Rational, 4>, 4> m) {
    Rational det(1);
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (m[r][col] != Rational(0)) { piv = r; break; }
        if (piv < 0) return Rational(0);
        if (piv != col) { std::swap(m[col], m[piv]); det = -det; }
        det *= m[col][col];
        for (int r = col + 1; r < 4; ++r) {
            if (m[r][col] == Rational(0)) continue;
            Rational f = m[r][col] / m[col][col];
            for (int cidx = col; cidx < 4; ++cidx) m[r][cidx] -= f * m[col][cidx];
        }
    }
    return det;
}

}  // namespace detail

// Verify the order axioms; throws identity_error on any failure.
inline void verify_maximal_order(const MaximalOrderData& ord) {
    const auto& alg = ord.alg;
    for (const auto& e : ord.basis) {
        if (!alg.trd(e).is_integer() || !alg.nrd(e).is_integer())
            throw identity_error("maximal_order: basis element not integral");
    }
    // 1 in the order
    Quat one{{Rational(1), Rational(0), Rational(0), Rational(0)}};
    for (const Rational& c : detail::solve_in_basis(ord.basis, one))
        if (!c.is_integer()) throw identity_error("maximal_order: 1 not in order");
    // closure under multiplication
    for (const auto& x : ord.basis)
        for (const auto& y : ord.basis) {
            Quat z = alg.mul(x, y);
            for (const Rational& c : detail::solve_in_basis(ord.basis, z))
                if (!c.is_integer())
                    throw identity_error("maximal_order: not closed under multiplication");
        }
    // reduced discriminant p: det(trd(e_i conj(e_j))) = p^2
    std::array<std::array<Rational, 4>, 4> gram;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            gram[i][j] = alg.trd(alg.mul(ord.basis[i], alg.conj(ord.basis[j])));
    Rational det = detail::det4(gram);
    if (det < Rational(0)) det = -det;
    if (det != Rational(ord.p * ord.p))
        throw identity_error("maximal_order: reduced discriminant is not p");
}

// Load all orders from the data file (header "p=<p> a=<a> b=<b>", then 4
// rows of 4 rationals) and verify each.
inline std::vector<MaximalOrderData> load_orders(std::string dir = "") {
    if (dir.empty()) dir = data_dir();
    std::ifstream is(dir + "/orders.txt");
    if (!is) throw std::runtime_error("load_orders: cannot open orders.txt");
    std::vector<MaximalOrderData> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        long long p, a, b;
        if (std::sscanf(line.c_str(), "p=%lld a=%lld b=%lld", &p, &a, &b) != 3)
            throw std::runtime_error("load_orders: bad header line: " + line);
        MaximalOrderData ord{p, {a, b}, {}};
        for (int r = 0; r < 4; ++r) {
            if (!std::getline(is, line)) throw std::runtime_error("load_orders: truncated");
            std::istringstream row(line);
            for (int c = 0; c < 4; ++c) {
                std::string tok;
                row >> tok;
                auto slash = tok.find('/');
                if (slash == std::string::npos)
                    ord.basis[r].c[c] = Rational(std::stoll(tok));
                else
                    ord.basis[r].c[c] = Rational(std::stoll(tok.substr(0, slash)),
                                                 std::stoll(tok.substr(slash + 1)));
            }
        }
        verify_maximal_order(ord);
        out.push_back(std::move(ord));
    }
    return out;
}

inline MaximalOrderData maximal_order(long long p, std::string dir = "") {
    for (auto& ord : load_orders(dir))
        if (ord.p == p) return ord;
    throw std::invalid_argument("maximal_order: unsupported prime");
}

// The Gross lattice {phi in Z + 2 O : trd(phi) = 0} with the Gram matrix of
// the reduced norm (even-diagonal convention: Q(x) = (1/2) x^T A x = nrd).
struct GrossLattice {
    std::array<Quat, 3> basis;
    std::vector<std::vector<long long>> gram;
    long long index_in_two_trace_zero;  // [L : 2 (trace-zero part of O)]

    QuadFormZ form() const { return QuadFormZ(gram); }
};

inline GrossLattice gross_lattice(const MaximalOrderData& ord) {
    const auto& alg = ord.alg;
    // lattice Z + 2O: generators 1, 2 e_i; bring to a Z-basis via integer HNF
    // on scaled coordinates
    std::vector<std::array<Rational, 4>> gens;
    gens.push_back({Rational(1), Rational(0), Rational(0), Rational(0)});
    for (const auto& e : ord.basis)
        gens.push_back({e.c[0] * Rational(2), e.c[1] * Rational(2), e.c[2] * Rational(2),
                        e.c[3] * Rational(2)});
    long long den = 1;
    for (const auto& g : gens)
        for (const auto& c : g) den = std::lcm(den, c.den());
    // integer generator matrix (rows)
    std::vector<std::array<long long, 4>> rows;
    for (const auto& g : gens) {
        std::array<long long, 4> r;
        for (int c = 0; c < 4; ++c) r[c] = (g[c] * Rational(den)).num();
        rows.push_back(r);
    }
    // row HNF by column elimination with gcd steps
    int rank = 0;
    for (int col = 0; col < 4 && rank < (int)rows.size(); ++col) {
        // gcd-reduce all rows below rank on this column
        while (true) {
            int piv = -1;
            long long best = 0;
            for (int r = rank; r < (int)rows.size(); ++r)
                if (rows[r][col] != 0 &&
                    (piv == -1 || std::llabs(rows[r][col]) < std::llabs(best))) {
                    piv = r;
                    best = rows[r][col];
                }
            if (piv == -1) break;
            std::swap(rows[rank], rows[piv]);
            bool again = false;
            for (int r = rank + 1; r < (int)rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                long long q = rows[r][col] / rows[rank][col];
                for (int c = 0; c < 4; ++c) rows[r][c] -= q * rows[rank][c];
                if (rows[r][col] != 0) again = true;
            }
            if (!again) { ++rank; break; }
        }
    }
    rows.resize(4);
    // trace zero inside Z + 2O: coordinate of 1 vanishes; the sublattice of
    // the HNF basis with first coordinate 0 is spanned by the rows whose
    // leading column is > 0 after triangularization, intersected with c0 = 0.
    // Solve directly: integer kernel of the map v -> sum v_i rows[i][0].
    std::vector<std::array<long long, 4>> kernel;
    {
        // rows are upper triangular by construction; rows with rows[i][0] == 0
        // are already trace-free generators, and combinations eliminating the
        // first coordinate among the rest are handled by the triangular shape:
        // only rows[0][0] != 0.
        for (int i = 1; i < 4; ++i)
            if (rows[i][0] != 0)
                throw std::logic_error("gross_lattice: HNF not triangular");
        for (int i = 1; i < 4; ++i) kernel.push_back(rows[i]);
    }
    GrossLattice L;
    for (int i = 0; i < 3; ++i) {
        Quat phi;
        for (int c = 0; c < 4; ++c) phi.c[c] = Rational(kernel[i][c], den);
        if (alg.trd(phi) != Rational(0))
            throw std::logic_error("gross_lattice: basis element has nonzero trace");
        L.basis[i] = phi;
    }
    L.gram.assign(3, std::vector<long long>(3, 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational bij = alg.trd(alg.mul(L.basis[i], alg.conj(L.basis[j])));
            if (!bij.is_integer())
                throw identity_error("gross_lattice: non-integral Gram entry");
            L.gram[i][j] = bij.num();
        }
    // index of 2*(trace-zero of O) inside L via Gram determinants
    // trace-zero part of O: kernel of trd on O
    std::vector<Quat> tz;
    {
        // solve trd(sum v_i e_i) = 0 over Z: trd(e_i) are integers
        std::array<long long, 4> t;
        for (int i = 0; i < 4; ++i) t[i] = alg.trd(ord.basis[i]).num();
        // integer kernel of a 1x4 row: use the standard unimodular completion
        // via iterated gcd elimination
        std::vector<std::array<long long, 4>> id(4);
        for (int i = 0; i < 4; ++i) {
            id[i] = {0, 0, 0, 0};
            id[i][i] = 1;
        }
        // eliminate: repeatedly combine the two smallest nonzero entries
        while (true) {
            int nz = -1, nz2 = -1;
            for (int i = 0; i < 4; ++i)
                if (t[i] != 0) {
                    if (nz == -1 || std::llabs(t[i]) < std::llabs(t[nz])) nz = i;
                }
            for (int i = 0; i < 4; ++i)
                if (i != nz && t[i] != 0) {
                    if (nz2 == -1) nz2 = i;
                    else if (std::llabs(t[i]) < std::llabs(t[nz2])) nz2 = i;
                }
            if (nz2 == -1) break;
            long long q = t[nz2] / t[nz];
            t[nz2] -= q * t[nz];
            for (int c = 0; c < 4; ++c) id[nz2][c] -= q * id[nz][c];
        }
        for (int i = 0; i < 4; ++i) {
            if (t[i] != 0) continue;
            Quat phi{{Rational(0), Rational(0), Rational(0), Rational(0)}};
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                    phi.c[d] += Rational(id[i][c]) * ord.basis[c].c[d];
            tz.push_back(phi);
        }
    }
    if (tz.size() != 3) throw std::logic_error("gross_lattice: trace-zero rank != 3");
    auto gram_det3 = [&](const std::vector<Quat>& v) {
        Rational m[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = alg.trd(alg.mul(v[i], alg.conj(v[j])));
        Rational det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        return det;
    };
    std::vector<Quat> two_tz;
    for (const auto& q : tz) {
        Quat s;
        for (int c = 0; c < 4; ++c) s.c[c] = q.c[c] * Rational(2);
        two_tz.push_back(s);
    }
    Rational dL = gram_det3({L.basis[0], L.basis[1], L.basis[2]});
    Rational dS = gram_det3(two_tz);
    Rational idx2 = dS / dL;
    if (!idx2.is_integer()) throw std::logic_error("gross_lattice: index not integral");
    long long idx = (long long)std::llround(std::sqrt((double)idx2.num()));
    while (idx * idx < idx2.num()) ++idx;
    while (idx * idx > idx2.num()) --idx;
    if (idx * idx != idx2.num()) throw std::logic_error("gross_lattice: index not a square");
    L.index_in_two_trace_zero = idx;
    return L;
}

struct GrossCount {
    long long count;      // #V_{|d|}(ss) from lattice enumeration
    Rational expected;    // (aut / (2 w_{d,1})) h(d) / eps_d
    bool match;
};

// Optimal-embedding count identity at a class-number-one prime.
inline GrossCount gross_count(const MaximalOrderData& ord, const GrossLattice& L,
                              long long d) {
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("gross_count: d not fundamental");
    if (!is_p_supersingular(d, ord.p))
        throw std::invalid_argument("gross_count: d not p-supersingular");
    auto ss = supersingular_set(ord.p);
    if (ss.size() != 1)
        throw std::invalid_argument("gross_count: p is not class-number-one");
    long long aut = ss.points()[0].aut;
    Rational eps = (d % ord.p == 0) ? Rational(1) : Rational(1, 2);
    long long h = class_number(d);
    Rational expected = Rational(aut, 2 * unit_weight(d, 1)) * Rational(h) / eps;
    long long cnt = (long long)L.form().lattice_points(-d).size();
    return {cnt, expected, Rational(cnt) == expected};
}

}  // namespace padiclab
