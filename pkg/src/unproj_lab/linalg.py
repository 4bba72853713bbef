"""Macaulay-matrix linear algebra on graded slices of an ideal.

Nothing here touches Groebner bases: the degree-d piece of an ideal is spanned
by monomial multiples of its generators, and its dimension is a matrix rank.
This is the independent oracle the Hilbert-function code is checked against.

To keep the matrices small the slice is split along the finest grading that
makes every generator homogeneous.  Rows m*g only ever touch monomials in one
coset of the lattice spanned by the exponent differences inside the
generators, so each coset is an independent block.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations_with_replacement

# rank over Q is taken modulo this prime (see rank_mod_p)
RATIONAL_PRIME = (1 << 61) - 1


def _hnf(vectors: list) -> list:
    """Row-style Hermite normal form of the integer span of ``vectors``.

    Returns (pivot_column, row) pairs with positive pivots and entries above
    each pivot reduced into [0, pivot).
    """
    rows = [list(v) for v in vectors if any(v)]
    out = []
    if not rows:
        return out
    n = len(rows[0])
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        # Euclid on the column entries
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append((col, piv))
        rows = rest
        col += 1
    for k in range(len(out)):
        c, r = out[k]
        for k2 in range(k):
            c2, r2 = out[k2]
            q = r2[c] // r[c]
            if q:
                out[k2] = (c2, [a - q * b for a, b in zip(r2, r)])
    return out


class CosetReducer:
    """Canonical representatives of Z^n modulo an integer lattice."""

    def __init__(self, generators: list):
        self.basis = _hnf(generators)

    def __call__(self, v) -> tuple:
        v = list(v)
        for c, r in self.basis:
            q = v[c] // r[c]
            if q:
                v = [a - q * b for a, b in zip(v, r)]
        return tuple(v)


def grading_lattice(polys) -> CosetReducer:
    """Lattice of exponent differences occurring inside each polynomial."""
    diffs = []
    for f in polys:
        exps = [e for e, _ in f.terms()]
        base = exps[0]
        for e in exps[1:]:
            diffs.append([a - b for a, b in zip(e, base)])
    n = polys[0].ring.nvars if polys else 0
    if not diffs:
        diffs = [[0] * n]
    return CosetReducer(diffs)


def monomials_of_degree(n: int, d: int):
    """All exponent vectors of total degree d in n variables."""
    if d < 0:
        return
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for v in combo:
            e[v] += 1
        yield tuple(e)


def rank_mod_p(rows: list, p: int) -> int:
    """Rank of sparse rows ({column: value}) over F_p.

    Rows are taken in increasing order of their largest column and reduced in
    every pivot column they touch, largest first.  Stored pivots then stay
    close to reduced echelon form, which keeps fill-in low on dense slices.
    """
    clean = []
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        if r:
            clean.append(r)
    if not clean:
        return 0
    cols = sorted({c for r in clean for c in r})
    idx = {c: k for k, c in enumerate(cols)}
    clean = [{idx[c]: v for c, v in r.items()} for r in clean]
    clean.sort(key=max)
    pivots = {}
    for row in clean:
        heap = [-c for c in row if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = -heapq.heappop(heap)
            v = row.get(c)
            if v is None:
                continue
            for cc, w in pivots[c].items():
                x = (row.get(cc, 0) - v * w) % p
                if x:
                    if cc not in row and cc in pivots:
                        heapq.heappush(heap, -cc)
                    row[cc] = x
                else:
                    row.pop(cc, None)
        if row:
            lead = max(row)
            inv = pow(row[lead], -1, p)
            pivots[lead] = {c: v * inv % p for c, v in row.items()}
    return len(pivots)


def _coeff_mod(c, p: int) -> int:
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, p) % p
    return int(c) % p


def slice_rank(I, d: int, prime: int | None = None) -> int:
    """dim_k of the degree-d piece of the homogeneous ideal I.

    Over a prime field the rank is exact.  Over Q it is computed modulo a
    61-bit prime; this can only undercount, and never does for the integer
    fixtures used here unless the prime divides a pivot minor.
    """
    ring = I.ring
    n = ring.nvars
    gens = [g for g in I.gens if g]
    if not gens:
        return 0
    p = prime or ring.characteristic or RATIONAL_PRIME
    red = grading_lattice(gens)
    blocks: dict = {}
    for g in gens:
        e = g.degree()
        if e > d:
            continue
        terms = [(ex, _coeff_mod(c, p)) for ex, c in g.terms()]
        base = terms[0][0]
        for m in monomials_of_degree(n, d - e):
            key = red(tuple(a + b for a, b in zip(m, base)))
            row = {}
            for ex, c in terms:
                if c:
                    row[tuple(a + b for a, b in zip(m, ex))] = c
            if row:
                blocks.setdefault(key, []).append(row)
    return sum(rank_mod_p(rows, p) for rows in blocks.values())


def linear_solve_mod_p(columns: list, target: dict, p: int):
    """Solve sum_k x_k * columns[k] = target over F_p (sparse dict vectors).

    Entries may be ints or Fractions.  Returns the solution list or None when
    the system is inconsistent.
    """
    ncols = len(columns)
    # augmented elimination on rows indexed by keys
    keys = set(target)
    for col in columns:
        keys.update(col)
    keys = sorted(keys)
    rows = []
    for key in keys:
        r = {k: _coeff_mod(col[key], p) for k, col in enumerate(columns)
             if _coeff_mod(col.get(key, 0), p)}
        t = _coeff_mod(target.get(key, 0), p)
        if r or t:
            rows.append((r, t))
    pivots = {}
    for r, t in rows:
        r = dict(r)
        while r:
            lead = min(r)
            if lead not in pivots:
                inv = pow(r[lead], -1, p)
                pivots[lead] = ({c: v * inv % p for c, v in r.items()}, t * inv % p)
                break
            pr, pt = pivots[lead]
            c0 = r[lead]
            for c, v in pr.items():
                w = (r.get(c, 0) - c0 * v) % p
                if w:
                    r[c] = w
                else:
                    r.pop(c, None)
            t = (t - c0 * pt) % p
        else:
            if t:
                return None
    x = [0] * ncols
    for lead in sorted(pivots, reverse=True):
        pr, pt = pivots[lead]
        s = pt
        for c, v in pr.items():
            if c != lead:
                s = (s - v * x[c]) % p
        x[lead] = s
    return x


def solve_rational(columns: list, target: dict):
    """Exact solve over Q (Fraction entries); None when inconsistent."""
    ncols = len(columns)
    keys = set(target)
    for col in columns:
        keys.update(col)
    pivots = {}
    for key in sorted(keys):
        r = {k: Fraction(col[key]) for k, col in enumerate(columns) if col.get(key, 0)}
        t = Fraction(target.get(key, 0))
        while r:
            lead = min(r)
            if lead not in pivots:
                c = r[lead]
                pivots[lead] = ({k: v / c for k, v in r.items()}, t / c)
                break
            pr, pt = pivots[lead]
            c0 = r[lead]
            for k, v in pr.items():
                w = r.get(k, 0) - c0 * v
                if w:
                    r[k] = w
                else:
                    r.pop(k, None)
            t -= c0 * pt
        else:
            if t:
                return None
    x = [Fraction(0)] * ncols
    for lead in sorted(pivots, reverse=True):
        pr, pt = pivots[lead]
        s = pt
        for k, v in pr.items():
            if k != lead:
                s -= v * x[k]
        x[lead] = s
    return x
