#!/usr/bin/env python3
"""Generate the classical modular polynomials Phi_ell for ell in {2,3,5,7}.

Uses exact integer q-expansions: j = E4^3 / Delta, and the product

    Phi_ell(X, j(tau)) = (X - j(ell*tau)) * prod_{k=0}^{ell-1} (X - j((tau+k)/ell))

expanded in the ring Z[zeta_ell][[q^(1/ell)]].  Coefficient series are then
rewritten as integer polynomials in j by pole subtraction.

Output format (data/phiN.txt): header "ell=N", then lines "i j c" for the
coefficient c of X^i Y^j with i >= j; symmetric closure implied.
"""

import sys
from pathlib import Path


def sigma(n, k):
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
        d += 1
    return s


def j_coefficients(nterms):
    """Return list jc with jc[m+1] = coefficient of q^m in j(q), for m = -1..nterms."""
    N = nterms + 2
    e4 = [0] * N
    e4[0] = 1
    for n in range(1, N):
        e4[n] = 240 * sigma(n, 3)
    eta1 = [0] * N
    eta1[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= N and g2 >= N:
            break
        s = 1 if k % 2 == 0 else -1
        if g1 < N:
            eta1[g1] += s
        if g2 < N:
            eta1[g2] += s
        k += 1

    def mul(a, b):
        out = [0] * N
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for jj in range(N - i):
                bj = b[jj]
                if bj:
                    out[i + jj] += ai * bj
        return out

    p24 = [0] * N
    p24[0] = 1
    pw = eta1
    exp = 24
    while exp:
        if exp & 1:
            p24 = mul(p24, pw)
        exp >>= 1
        if exp:
            pw = mul(pw, pw)
    num = mul(mul(e4, e4), e4)
    quo = [0] * N
    for n in range(N):
        acc = num[n]
        for m in range(1, n + 1):
            if p24[m]:
                acc -= p24[m] * quo[n - m]
        quo[n] = acc
    return quo[: nterms + 2]


class CycSeries:
    """Laurent series in t with coefficients in Z[x]/(x^ell - 1)."""

    def __init__(self, ell, prec):
        self.ell = ell
        self.prec = prec
        self.c = {}

    def add_term(self, e, vec):
        if e >= self.prec:
            return
        cur = self.c.get(e)
        if cur is None:
            self.c[e] = list(vec)
        else:
            for u in range(self.ell):
                cur[u] += vec[u]

    def mul(self, other):
        out = CycSeries(self.ell, self.prec)
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                if e >= self.prec:
                    continue
                conv = [0] * self.ell
                for u in range(self.ell):
                    a = v1[u]
                    if a == 0:
                        continue
                    for v in range(self.ell):
                        b = v2[v]
                        if b:
                            conv[(u + v) % self.ell] += a * b
                cur = out.c.get(e)
                if cur is None:
                    out.c[e] = conv
                else:
                    for u in range(self.ell):
                        cur[u] += conv[u]
        out.trim()
        return out

    def trim(self):
        dead = [e for e, v in self.c.items() if all(x == 0 for x in v)]
        for e in dead:
            del self.c[e]

    def to_integer_qseries(self, emax=None):
        out = {}
        for e, v in self.c.items():
            if emax is not None and e > emax:
                continue
            a0 = v[0]
            rest = v[1:]
            if rest and any(r != rest[0] for r in rest):
                raise AssertionError("non-invariant coefficient at t^%d: %s" % (e, v))
            val = a0 - rest[0] if rest else a0
            if val == 0:
                continue
            if e % self.ell != 0:
                raise AssertionError("fractional exponent t^%d nonzero" % e)
            out[e // self.ell] = val
        return out


def gen_phi(ell, hi=2):
    # final q-precision hi; a single factor can be needed up to
    # t^(ell*hi + ell^2 + ell) against the other factors' poles
    K = ell * hi + ell * ell + ell + 2
    Tmax = K + 1
    jc = j_coefficients(max(K, Tmax // (ell * ell) + 2))

    def j_of_zeta_t(k):
        s = CycSeries(ell, Tmax)
        for m in range(-1, K + 1):
            coeff = jc[m + 1]
            if coeff == 0:
                continue
            vec = [0] * ell
            vec[(k * m) % ell] += coeff
            s.add_term(m, vec)
        return s

    def j_of_qell():
        s = CycSeries(ell, Tmax)
        for m in range(-1, Tmax // (ell * ell) + 1):
            coeff = jc[m + 1]
            if coeff == 0:
                continue
            vec = [0] * ell
            vec[0] = coeff
            s.add_term(m * ell * ell, vec)
        return s

    one = CycSeries(ell, Tmax)
    one.add_term(0, [1] + [0] * (ell - 1))
    poly = [one]

    def mul_in_root(poly, root):
        newpoly = [CycSeries(ell, Tmax) for _ in range(len(poly) + 1)]
        for i, c in enumerate(poly):
            for e, v in c.c.items():
                newpoly[i + 1].add_term(e, v)
            t = c.mul(root)
            for e, v in t.c.items():
                newpoly[i].add_term(e, [-x for x in v])
        for s in newpoly:
            s.trim()
        return newpoly

    for k in range(ell):
        poly = mul_in_root(poly, j_of_zeta_t(k))
    poly = mul_in_root(poly, j_of_qell())

    jq = {}
    for m in range(-1, K + 1):
        if jc[m + 1]:
            jq[m] = jc[m + 1]

    def qmul(a, b, hi):
        out = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = e1 + e2
                if e > hi:
                    continue
                out[e] = out.get(e, 0) + v1 * v2
        return {e: v for e, v in out.items() if v != 0}

    coeffs = {}
    for i in range(ell + 2):
        # the product is only guaranteed exact through t^(ell*hi)
        series = poly[i].to_integer_qseries(emax=ell * hi)
        series = {e: v for e, v in series.items() if e <= hi}
        maxpole = max((-min(series.keys()), 0)) if series else 0
        powers = [{0: 1}]
        for _ in range(maxpole):
            powers.append(qmul(powers[-1], jq, hi + maxpole))
        powers = [{e: v for e, v in pw.items() if e <= hi} for pw in powers]
        while series and min(series.keys()) <= 0:
            P = -min(series.keys())
            a = series[-P]
            for e, v in powers[P].items():
                nv = series.get(e, 0) - a * v
                if nv == 0:
                    series.pop(e, None)
                else:
                    series[e] = nv
            coeffs[(i, P)] = coeffs.get((i, P), 0) + a
        if series:
            raise AssertionError("residual series for X^%d: %s" % (i, series))

    deg = ell + 1
    for i in range(deg + 1):
        for m in range(deg + 1):
            if coeffs.get((i, m), 0) != coeffs.get((m, i), 0):
                raise AssertionError("asymmetry at (%d,%d)" % (i, m))
    # Kronecker congruence: Phi_ell == (X - Y^ell)(X^ell - Y) mod ell,
    # i.e. X^(ell+1) + Y^(ell+1) - X^ell Y^ell - X Y mod ell.
    for i in range(deg + 1):
        for m in range(deg + 1):
            c = coeffs.get((i, m), 0) % ell
            want = 0
            if (i, m) in ((deg, 0), (0, deg)):
                want = 1 % ell
            elif (i, m) in ((1, 1), (ell, ell)):
                want = (-1) % ell
            if c != want:
                raise AssertionError("Kronecker congruence fails at (%d,%d)" % (i, m))
    return coeffs


if __name__ == "__main__":
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    outdir.mkdir(parents=True, exist_ok=True)
    for ell in (2, 3, 5, 7):
        coeffs = gen_phi(ell)
        nterms = 0
        with open(outdir / f"phi{ell}.txt", "w") as fh:
            fh.write(f"ell={ell}\n")
            for (i, m) in sorted(coeffs):
                c = coeffs[(i, m)]
                if i >= m and c != 0:
                    fh.write(f"{i} {m} {c}\n")
                    nterms += 1
        print(f"phi{ell}: {nterms} stored terms")
