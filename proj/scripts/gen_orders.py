#!/usr/bin/env python3
"""Search maximal orders in the rational quaternion algebras ramified at {p, oo}
for p in {2, 3, 5, 7, 13} and write them as data files.

Algebra conventions: i^2 = a, j^2 = b, k = ij.  For these class-number-one
primes a maximal order is found by saturating Z<1,i,j,k> with integral
elements of denominator 2 or 4 and closing under multiplication until the
trace-form Gram determinant reaches p^2 (reduced discriminant p, which is
minimal, hence maximal).

Output format (data/orders.txt): per order a header "p=<p> a=<a> b=<b>"
followed by 4 lines of 4 rationals (basis rows in 1,i,j,k coordinates).
"""

from fractions import Fraction
from itertools import product
import sys
from pathlib import Path


def qmul(x, y, a, b):
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    return (
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * (x2 * y3 - x3 * y2),
        x0 * y2 + x2 * y0 + a * (x1 * y3 - x3 * y1),
        x0 * y3 + x3 * y0 + (x1 * y2 - x2 * y1),
    )


def conj(x):
    return (x[0], -x[1], -x[2], -x[3])


def trd(x):
    return 2 * x[0]


def nrd(x, a, b):
    x0, x1, x2, x3 = x
    return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3


def hnf_basis(vectors):
    """Return a canonical basis (list of 4 tuples of Fractions) of the lattice
    spanned by the given rational 4-vectors, via sympy's integer HNF on a
    common denominator."""
    import math
    from sympy import Matrix
    from sympy.matrices.normalforms import hermite_normal_form

    den = 1
    for v in vectors:
        for c in v:
            den = den * c.denominator // math.gcd(den, c.denominator)
    cols = Matrix([[int(c * den) for c in v] for v in vectors]).T
    H = hermite_normal_form(cols)
    if H.shape[1] != 4:
        raise ValueError("rank < 4")
    return [tuple(Fraction(H[r, c], den) for r in range(4)) for c in range(4)]


def close_under_mult(basis, a, b, max_rounds=12):
    for _ in range(max_rounds):
        gens = list(basis)
        prods = [qmul(x, y, a, b) for x in basis for y in basis]
        newbasis = hnf_basis(gens + prods)
        if newbasis == basis:
            return basis
        basis = newbasis
    raise ValueError("no closure")


def gram_det(basis, a, b):
    g = [[trd(qmul(x, conj(y), a, b)) for y in basis] for x in basis]
    # 4x4 determinant over Fractions
    from functools import reduce

    def det(m):
        if len(m) == 1:
            return m[0][0]
        s = 0
        for c in range(len(m)):
            if m[0][c] == 0:
                continue
            minor = [row[:c] + row[c + 1 :] for row in m[1:]]
            s += (-1) ** c * m[0][c] * det(minor)
        return s

    return det(g)


def is_integral(x, a, b):
    return trd(x).denominator == 1 and nrd(x, a, b).denominator == 1


def find_order(p, a, b):
    one = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    base = [one,
            (Fraction(0), Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(0), Fraction(1))]
    target = Fraction(p * p)
    basis = hnf_basis(base)
    for den in (2, 4):
        candidates = []
        for v in product(range(den), repeat=4):
            if all(x == 0 for x in v):
                continue
            x = tuple(Fraction(c, den) for c in v)
            if is_integral(x, a, b):
                candidates.append(x)
        progress = True
        while progress and gram_det(basis, a, b) != target:
            progress = False
            for x in candidates:
                trial = hnf_basis(basis + [x])
                if trial == basis:
                    continue
                try:
                    closed = close_under_mult(trial, a, b)
                except ValueError:
                    continue
                if not all(is_integral(y, a, b) for y in closed):
                    continue
                d = gram_det(basis, a, b)
                dc = gram_det(closed, a, b)
                if dc < d and dc >= target:
                    basis = closed
                    progress = True
        if gram_det(basis, a, b) == target:
            return basis
    raise ValueError(f"no maximal order found for p={p}")


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    outdir.mkdir(parents=True, exist_ok=True)
    algebras = {2: (-1, -1), 3: (-1, -3), 5: (-2, -5), 7: (-1, -7), 13: (-2, -13)}
    with open(outdir / "orders.txt", "w") as fh:
        for p in (2, 3, 5, 7, 13):
            a, b = algebras[p]
            basis = find_order(p, a, b)
            basis = close_under_mult(basis, a, b)
            assert gram_det(basis, a, b) == p * p
            assert all(is_integral(x, a, b) for x in basis)
            # closure double-check
            for x in basis:
                for y in basis:
                    z = qmul(x, y, a, b)
                    trial = hnf_basis(basis + [z])
                    assert trial == basis, (p, x, y)
            fh.write(f"p={p} a={a} b={b}\n")
            for row in basis:
                fh.write(" ".join(str(c) for c in row) + "\n")
            print(f"p={p}: order found, det = {p*p}")
            for row in basis:
                print("   ", row)


if __name__ == "__main__":
    main()
