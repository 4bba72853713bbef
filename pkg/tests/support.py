"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the packed-monomial kernel: they work on
exponent tuples with textbook definitions so that agreement means something.
"""

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from unproj_lab import families, pei, unproj
from unproj_lab.groebner import Ideal
from unproj_lab.polyring import DEFAULT_PRIME, PolyRing

# ---------------------------------------------------------------------------
# textbook monomial orders on exponent tuples


def lex_greater(a, b) -> bool:
    for x, y in zip(a, b):
        if x != y:
            return x > y
    return False


def grevlex_greater(a, b) -> bool:
    if sum(a) != sum(b):
        return sum(a) > sum(b)
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return x < y
    return False


def order_key_fn(ring):
    """Sort key implementing the ring's order with Python tuple comparison only."""
    kind = ring.order.kind
    if kind == "lex":
        return lambda e: tuple(e)
    if kind == "grevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    raise NotImplementedError(kind)


# ---------------------------------------------------------------------------
# a naive polynomial layer: {exps: coeff} dicts


def to_dict(f):
    return dict(f.terms())


def _norm(c, p):
    return c % p if p else c


def d_sub(a, b, p):
    out = dict(a)
    for e, c in b.items():
        v = _norm(out.get(e, 0) - c, p)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def d_scale_shift(a, c, shift, p):
    return {tuple(x + y for x, y in zip(e, shift)): _norm(v * c, p) for e, v in a.items()}


def d_inv(c, p):
    return pow(c, -1, p) if p else Fraction(1) / c


def naive_remainder(f, G, key, p):
    """Multivariate division of dict f by the dict list G (textbook algorithm)."""
    f = dict(f)
    rem = {}
    leads = [(max(g, key=key), g) for g in G if g]
    while f:
        lt = max(f, key=key)
        c = f[lt]
        for lm, g in leads:
            if all(x >= y for x, y in zip(lt, lm)):
                q = tuple(x - y for x, y in zip(lt, lm))
                f = d_sub(f, d_scale_shift(g, _norm(c * d_inv(g[lm], p), p), q, p), p)
                break
        else:
            rem[lt] = c
            del f[lt]
    return rem


def naive_is_groebner(G_polys, I_polys) -> bool:
    """Buchberger's criterion plus membership of the inputs, all on dicts."""
    ring = G_polys[0].ring
    p = ring.characteristic
    key = order_key_fn(ring)
    G = [to_dict(g) for g in G_polys]
    for f in I_polys:
        if naive_remainder(to_dict(f), G, key, p):
            return False
    for g, h in combinations(G, 2):
        lg, lh = max(g, key=key), max(h, key=key)
        L = tuple(max(x, y) for x, y in zip(lg, lh))
        s1 = d_scale_shift(g, d_inv(g[lg], p), tuple(x - y for x, y in zip(L, lg)), p)
        s2 = d_scale_shift(h, d_inv(h[lh], p), tuple(x - y for x, y in zip(L, lh)), p)
        if naive_remainder(d_sub(s1, s2, p), G, key, p):
            return False
    return True


def dense_rank(rows, p=0) -> int:
    """Rank of a dense matrix by Gaussian elimination (Fractions when p == 0)."""
    M = [[Fraction(x) if not p else x % p for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = d_inv(M[rank][col], p)
        for r in range(len(M)):
            if r != rank and M[r][col]:
                c = M[r][col] * inv
                M[r] = [_norm(a - c * b, p) for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# fixture ideals


def koszul(n=4, char=DEFAULT_PRIME):
    R = PolyRing([f"x{i}" for i in range(n)], char)
    return Ideal(R, R.gens())


def twisted_cubic(char=DEFAULT_PRIME):
    R = PolyRing("x0 x1 x2 x3", char)
    return Ideal(R, [R("x0*x2 - x1^2"), R("x1*x3 - x2^2"), R("x0*x3 - x1*x2")])


def conic(char=DEFAULT_PRIME):
    R = PolyRing("x1 x2 x3", char)
    return Ideal(R, [R("x1*x2 - x3^2")])


def sextic(char=DEFAULT_PRIME):
    ex = families.example53(char)
    return Ideal(ex.R, [ex.sextic])


@lru_cache(maxsize=None)
def sextic_unprojection(char=DEFAULT_PRIME):
    ex = families.example53(char)
    lam = unproj.check_fake_linear(Ideal(ex.R, [ex.sextic]), ex.a, ex.f)
    return lam, unproj.unproject(lam, "x0", certify=True)


def sextic_T(char=DEFAULT_PRIME):
    from unproj_lab.cli import example53_prop51
    return example53_prop51(char).T


@lru_cache(maxsize=None)
def elliptic(char=DEFAULT_PRIME):
    return families.elliptic_quartic(1, char)


def conic_ci(char=DEFAULT_PRIME):
    I_Y = conic(char)
    R = I_Y.ring
    lam = unproj.check_fake_linear(I_Y, R("x2^2"), R("x1"))
    return unproj.unproject(lam, "x0").I_X


FIXTURES = {
    "koszul4": lambda c: koszul(4, c),
    "twisted_cubic": twisted_cubic,
    "caviglia2": lambda c: families.caviglia(2, c),
    "caviglia3": lambda c: families.caviglia(3, c),
    "caviglia4": lambda c: families.caviglia(4, c),
    "conic": conic,
    "conic_ci": conic_ci,
    "elliptic_quartic": lambda c: elliptic(c)[0],
    "thm43_k2": lambda c: families.thm43_ideal([2, 4], [3], [4], c),
    "sextic": sextic,
    "sextic_T": sextic_T,
    "sextic_unprojection": lambda c: sextic_unprojection(c)[1].I_X,
}


def contexts(char=DEFAULT_PRIME):
    """Projection contexts used for the additivity and determinism checks."""
    out = {}
    I, z, _ = elliptic(char)
    out["elliptic_quartic"] = pei.make_context(I, z)
    out["twisted_cubic_at_point"] = pei.make_context(twisted_cubic(char), [1, 1, 1, 1])
    out["twisted_cubic_outside"] = pei.make_context(twisted_cubic(char), [0, 1, 0, 0])
    out["conic_ci"] = pei.make_context(conic_ci(char), x0="x0")
    out["sextic_unprojection"] = sextic_unprojection(char)[1].ctx
    return out


# ---------------------------------------------------------------------------
# seeded inputs for the round-trip and regular-pair laws

def _random_form(ring, degree, rng):
    return unproj.random_form(ring, degree, rng)


def _random_hypersurface(names, degree, rng, char):
    R = PolyRing(names, char)
    return Ideal(R, [_random_form(R, degree, rng)])


def fake_linear_inputs(seed=0, char=DEFAULT_PRIME):
    """25 (I_Y, a, f) triples: 10 conics, 10 quadric surfaces, 5 on the sextic."""
    rng = random.Random(seed)
    out = []
    while len(out) < 10:
        I = _random_hypersurface("u0 u1 u2", 2, rng, char)
        R = I.ring
        out.append(("conic", I, _random_form(R, 2, rng), _random_form(R, 1, rng)))
    while len(out) < 20:
        I = _random_hypersurface("u0 u1 u2 u3", 2, rng, char)
        R = I.ring
        df = 1 + len(out) % 2
        out.append(("quadric_surface", I, _random_form(R, df + 1, rng), _random_form(R, df, rng)))
    ex = families.example53(char)
    I = Ideal(ex.R, [ex.sextic])
    while len(out) < 25:
        # a/f + l for a random linear form l is again fake
        l = _random_form(ex.R, 1, rng)
        out.append(("sextic", I, ex.a + l * ex.f, ex.f))
    return out


def regular_pair_inputs(seed=0, char=DEFAULT_PRIME):
    """25 (I_Y, a, f) with S_Y Cohen-Macaulay and {f, a} regular on it."""
    rng = random.Random(seed)
    bases = [("conic", lambda: conic(char)), ("twisted_cubic", lambda: twisted_cubic(char)),
             ("quadric_surface", lambda: _random_hypersurface("u0 u1 u2 u3", 2, rng, char)),
             ("cubic_surface", lambda: _random_hypersurface("u0 u1 u2 u3", 3, rng, char)),
             ("ci_curve", lambda: _ci(rng, char))]
    out = []
    k = 0
    while len(out) < 25:
        name, make = bases[k % len(bases)]
        I = make()
        R = I.ring
        df = 1 + (k // len(bases)) % 2
        f = _random_form(R, df, rng)
        a = _random_form(R, df + 1, rng)
        k += 1
        out.append((name, I, a, f))
    return out


def _ci(rng, char):
    R = PolyRing("u0 u1 u2 u3", char)
    return Ideal(R, [_random_form(R, 2, rng), _random_form(R, 2, rng)])
