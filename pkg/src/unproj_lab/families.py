"""Ideal families with large regularity and the counterexample pipeline.

Constructors return ideals together with the invariants the theory predicts,
so callers (tests, the CLI, sweeps) can compare prediction with computation.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from math import prod

from . import pei, unproj
from .groebner import Ideal
from .homalg import (BettiTable, GradedFreeModule, SubquotientModule, betti_invariants,
                     hilbert, resolve)
from .linalg import monomials_of_degree
from .polyring import DEFAULT_PRIME, Polynomial, PolyRing, multigrade_select


class ConstraintViolation(ValueError):
    """A family parameter tuple breaks a hypothesis; the message names it."""


def _yz_names(k: int, start: int = 1) -> list:
    out = []
    for i in range(start, k + 1):
        out += [f"y{i}", f"z{i}"]
    return out


def yz_ring(k: int, char: int = DEFAULT_PRIME, start: int = 1) -> PolyRing:
    return PolyRing(_yz_names(k, start), char)


def _binomial(Q, i, a):
    """z_{i+1}^a y_i - y_{i+1}^a z_i."""
    return Q(f"z{i + 1}^{a}*y{i} - y{i + 1}^{a}*z{i}")


# ---------------------------------------------------------------------------
# Caviglia-type ideals

def caviglia(d: int, char: int = DEFAULT_PRIME) -> Ideal:
    if d < 2:
        raise ConstraintViolation("need d >= 2")
    Q = yz_ring(2, char)
    return Ideal(Q, [_binomial(Q, 1, d - 1), Q(f"y1^{d}"), Q(f"z1^{d}")])


def caviglia_chain(k: int, d: int, char: int = DEFAULT_PRIME) -> Ideal:
    if k < 2 or d < 2:
        raise ConstraintViolation("need k >= 2 and d >= 2")
    Q = yz_ring(k, char)
    gens = [_binomial(Q, i, d - 1) for i in range(1, k)]
    return Ideal(Q, gens + [Q(f"y1^{d}"), Q(f"z1^{d}")])


def borna_mohajer(k: int, d: int, char: int = DEFAULT_PRIME) -> Ideal:
    if k < 2 or d < 2:
        raise ConstraintViolation("need k >= 2 and d >= 2")
    Q = yz_ring(k, char)
    gens = []
    for i in range(1, k):
        gens += [_binomial(Q, i, d - 1), Q(f"y{i}^{d}"), Q(f"z{i}^{d}")]
    return Ideal(Q, gens)


def bmnsss(k: int, d: int, char: int = DEFAULT_PRIME) -> Ideal:
    """Three-generated ideal (F_1, G_1, H_1) from the downward recursion."""
    if k < 2 or d < 0:
        raise ConstraintViolation("need k >= 2 and d >= 0")
    Q = yz_ring(k, char)
    F = Q(f"y{k - 1}^{d + 2}")
    G = _binomial(Q, k - 1, d + 1)
    H = Q(f"z{k - 1}^{d + 2}")
    for i in range(k - 2, 0, -1):
        y, z = Q.var(f"y{i}"), Q.var(f"z{i}")
        G = F * y * y + G * y * z + H * z * z
        F = Q(f"y{i}^{d + 2 * k - 2 * i}")
        H = Q(f"z{i}^{d + 2 * k - 2 * i}")
    return Ideal(Q, [F, G, H])


# ---------------------------------------------------------------------------
# the three-parameter family and its witness module

@dataclass
class Thm43Result:
    ideal: Ideal
    predicted_reg_lb: int
    predicted_pd: int
    witness: BettiTable
    alpha: int
    rows: tuple          # (j0, j1, j2)


def thm43_check(a, b, c) -> None:
    a, b, c = list(a), list(b), list(c)
    k = len(a)
    if k < 2:
        raise ConstraintViolation("need k >= 2 (at least two entries in a)")
    if len(b) != k - 1 or len(c) != k - 1:
        raise ConstraintViolation("b and c need k - 1 entries")
    if min(a + b + c) < 1:
        raise ConstraintViolation("all parameters must be positive")
    if not (a[0] < b[0] and a[0] < c[0]):
        raise ConstraintViolation("a_1 < b_1, c_1 is violated")
    for i in range(1, k - 1):
        if not (2 <= a[i] <= b[i] and a[i] <= c[i]):
            raise ConstraintViolation(f"2 <= a_{i + 1} <= b_{i + 1}, c_{i + 1} is violated")


def thm43_ideal(a, b, c, char: int = DEFAULT_PRIME) -> Ideal:
    thm43_check(a, b, c)
    k = len(a)
    Q = yz_ring(k, char)
    gens = []
    for i in range(1, k):
        gens += [_binomial(Q, i, a[i]), Q(f"y{i}^{b[i - 1]}"), Q(f"z{i}^{c[i - 1]}")]
    return Ideal(Q, gens)


def thm43_predictions(a, b, c) -> dict:
    k = len(a)
    alpha = prod(a[:k - 1])
    base = b[0] + c[0] - 2 * a[0]
    j0 = base + sum(x - 1 for x in a[:k - 1])
    j1 = base + sum(x - 1 for x in a)
    j2 = j1 + prod(a) - 1
    return {"reg_lb": prod(a) + base + sum(x - 1 for x in a), "pd": 2 * k,
            "alpha": alpha, "rows": (j0, j1, j2),
            "witness": BettiTable({(0, j0): alpha, (1, j1): alpha + 1, (2, j2): 1})}


def witness_module(I: Ideal, k: int, target) -> SubquotientModule:
    """The A = k[y_k, z_k] summand of Q/I of multidegree ``target`` in blocks 1..k-1.

    Generators are the block monomials of that multidegree; relations are the
    multiples t*g of the generators of I landing in the same multidegree,
    written over A.
    """
    Q = I.ring
    A = PolyRing([f"y{k}", f"z{k}"], Q.field)
    grading = []
    for i in range(1, k + 1):
        for _ in range(2):
            v = [0] * (k - 1)
            if i < k:
                v[i - 1] = 1
            grading.append(tuple(v))
    target = tuple(target)

    def block_monos(degs):
        # monomials in y_1..z_{k-1} with block degrees degs
        out = [()]
        for dgi in degs:
            out = [m + e for m in out for e in monomials_of_degree(2, dgi)]
        return [m + (0, 0) for m in out]

    basis = block_monos(target)
    pos = {m: j for j, m in enumerate(basis)}
    deg_of = [sum(m) for m in basis]

    def split(f: Polynomial):
        vec = [A.zero() for _ in basis]
        for e, cf in f.terms():
            head = e[:-2] + (0, 0)
            vec[pos[head]] = vec[pos[head]] + A.monomial(e[-2:], cf)
        return tuple(vec)

    cands = []
    for g in I.gens:
        e0 = next(iter(g.terms()))[0]
        gdeg = [e0[2 * i] + e0[2 * i + 1] for i in range(k - 1)]
        room = [t - x for t, x in zip(target, gdeg)]
        if min(room) < 0:
            continue
        for t in block_monos(room):
            cands.append(g * Q.monomial(t))
    rels = [split(f) for f in multigrade_select(cands, grading, target)]
    ambient = GradedFreeModule(A, deg_of)
    gens = [tuple(A.one() if i == j else A.zero() for i in range(len(basis)))
            for j in range(len(basis))]
    return SubquotientModule(ambient, gens, rels)


def thm43(a, b, c, char: int = DEFAULT_PRIME, witness: bool = True) -> Thm43Result:
    """Ideal, predicted bounds and (optionally) the computed witness table."""
    I = thm43_ideal(a, b, c, char)
    pr = thm43_predictions(list(a), list(b), list(c))
    W = None
    if witness:
        k = len(a)
        target = [b[0] + c[0] - a[0] - 1] + [x - 1 for x in a[1:k - 1]]
        W = resolve(witness_module(I, k, target)).betti()
    return Thm43Result(I, pr["reg_lb"], pr["pd"], W, pr["alpha"], pr["rows"])


# ---------------------------------------------------------------------------
# gluing three-generated data into a hypersurface

@dataclass
class Prop51Result:
    G: Polynomial
    T: Ideal
    U: Ideal
    s: int
    m: int
    Delta: int
    delta: int
    predictions: dict
    notes: list = field(default_factory=list)


def prop51(g, m: int, Delta: int, delta: int, names=("y0", "z0")) -> Prop51Result:
    """G = sum_i g_i y0^i z0^((m+1)(s-i)) and T = (G, y0^Delta, z0^delta)."""
    g = list(g)
    s = len(g) - 1
    if s < 0 or not g[s]:
        raise ConstraintViolation("g_s must be nonzero")
    Q = g[0].ring
    if any(nm in Q.index for nm in names):
        raise ConstraintViolation("the g_i must not involve y0, z0")
    for i, gi in enumerate(g):
        if gi and not gi.is_homogeneous():
            raise ConstraintViolation(f"g_{i} is not homogeneous")
    base = next(gi.degree() - m * i for i, gi in enumerate(g) if gi)
    for i, gi in enumerate(g):
        if gi and gi.degree() != m * i + base:
            raise ConstraintViolation(f"deg g_{i} = m*{i} + deg g_0 is violated")
    if not Delta > s:
        raise ConstraintViolation("Delta > s is violated")
    if not delta > (m + 1) * s:
        raise ConstraintViolation("delta > (m+1)s is violated")
    R = PolyRing(tuple(names) + Q.names, Q.field)
    y0, z0 = R.var(names[0]), R.var(names[1])
    G = R.zero()
    for i, gi in enumerate(g):
        if gi:
            G = G + gi.to_ring(R) * y0 ** i * z0 ** ((m + 1) * (s - i))
    T = Ideal(R, [G, y0 ** Delta, z0 ** delta])
    U = Ideal(Q, [gi for gi in g if gi])
    equality = (m + 1) * (Delta - s + 1) >= delta
    pred = {"deg_RT_max": delta * s, "deg_equality_expected": equality,
            "reg_T_minus_reg_U_min": Delta + delta - 2, "pd_gap_min": 2}
    notes = []
    if m == 0 and len(set(gi.degree() for gi in g if gi)) == 1:
        notes.append("m = 0: irreducibility of G needs the g_i linearly independent")
    notes.append("G is irreducible whenever g_s is (sufficient condition only)")
    return Prop51Result(G, T, U, s, m, Delta, delta, pred, notes)


def prop51_verify(res: Prop51Result) -> dict:
    """Compute deg R/T, reg T, pd R/T, reg U, pd Q/U and test the three bounds."""
    hT = hilbert(res.T)
    bT = betti_invariants(res.T)
    bU = betti_invariants(res.U)
    degRT = hT.degree if hT.dim == res.T.ring.nvars - 2 else 0
    out = {"deg_RT": degRT, "reg_T": bT.reg, "pd_RT": bT.pd_quotient,
           "reg_U": bU.reg, "pd_QU": bU.pd_quotient}
    out["deg_bound"] = degRT <= res.delta * res.s
    out["deg_equal"] = degRT == res.delta * res.s
    out["reg_bound"] = bT.reg >= bU.reg + res.Delta + res.delta - 2
    out["pd_bound"] = bT.pd_quotient >= bU.pd_quotient + 2
    return out


# ---------------------------------------------------------------------------
# the counterexample pipeline

def pipeline_parameters(k: int, d: int) -> tuple:
    """(a, b, c) for U_d with generator degrees exactly d, d+1, ..., d+3k-4.

    The last binomial takes the top degree, the other binomials the smallest
    degrees, then b_i and c_i in order; a_1 = min(b_1, c_1) - 1.
    """
    if k < 2:
        raise ConstraintViolation("need k >= 2")
    degs = list(range(d, d + 3 * k - 3))
    a = [0] * k
    a[k - 1] = degs.pop() - 1
    for i in range(1, k - 1):          # binomial i links blocks i and i+1
        a[i] = degs.pop(0) - 1
    b, c = [], []
    for i in range(k - 1):
        b.append(degs.pop(0))
        c.append(degs.pop(0))
    a[0] = min(b[0], c[0]) - 1
    thm43_check(a, b, c)
    return a, b, c


@dataclass
class PipelineReport:
    k: int
    d: int
    e: int
    params: dict
    stages: dict = field(default_factory=dict)
    invariants: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return asdict(self)


def pipeline(k: int, d: int, e: int = 2, char: int = DEFAULT_PRIME, seed: int = 0,
             verify: bool = True):
    """Build X_d and certify every stage; returns (I_X, report)."""
    if k < 2:
        raise ConstraintViolation("need k >= 2")
    if e < 2:
        raise ConstraintViolation("need e >= 2")
    a, b, c = pipeline_parameters(k, d)
    U = thm43_ideal(a, b, c, char)
    g = sorted(U.gens, key=lambda f: f.degree())
    degs = [f.degree() for f in g]
    if degs != list(range(d, d + 3 * k - 3)):
        raise ConstraintViolation(f"generator degrees {degs} are not d, ..., d+3k-4")
    Delta, delta = 6 * k - 6, 6 * k - 7
    p51 = prop51(g, 1, Delta, delta)
    rep = PipelineReport(k, d, e, {"a": a, "b": b, "c": c, "Delta": Delta, "delta": delta,
                                   "m": 1, "seed": seed, "char": char})
    reg_U_lb = thm43_predictions(a, b, c)["reg_lb"]
    rep.bounds["reg_U_lb"] = reg_U_lb
    rep.bounds["deg_RT"] = (6 * k - 7) * (3 * k - 4)
    R = p51.T.ring
    I_Y = Ideal(R, [p51.G])
    lam = unproj.check_fake_linear(I_Y, R.var("y0") ** Delta, R.var("z0") ** delta)
    rep.stages["fake_linear_form"] = lam.certificate.recheck()
    un = unproj.unproject(lam, "x0", certify=True)
    rep.stages.update(un.certified)
    df = delta
    if verify:
        v51 = prop51_verify(p51)
        rep.stages["prop51_bounds"] = v51["deg_bound"] and v51["reg_bound"] and v51["pd_bound"]
        rep.stages["deg_RT_predicted"] = v51["deg_RT"] == rep.bounds["deg_RT"]
        rep.stages["reg_U_bound"] = v51["reg_U"] >= reg_U_lb
        rep.bounds.update(reg_U=v51["reg_U"], reg_T=v51["reg_T"], pd_RT=v51["pd_RT"])
        tr = unproj.cor37_invariants(lam, un)
        rep.stages["cor37_hypotheses"] = tr.path == "T_bounds"
        rep.notes += tr.notes
        inv = unproj.invariants(un.I_X)
        rep.stages["cor37_matches_direct"] = (inv.deg, inv.reg, inv.pd) == (tr.deg_X, tr.reg_X, tr.pd_X)
        rep.invariants = {"dim": inv.dim, "deg": inv.deg, "reg": inv.reg, "pd": inv.pd,
                          "codim": inv.codim, "depth": inv.depth}
        rep.bounds["reg_X_lb"] = reg_U_lb + Delta + delta - 2 - df + 1
        rep.stages["reg_X_bound"] = inv.reg >= rep.bounds["reg_X_lb"]
    I_X = un.I_X
    if e > 2:
        I_X = unproj.extend_codim(I_X, e - 2, deg_f=1, seed=seed, verify=verify)
        if verify:
            inv = unproj.invariants(I_X)
            rep.invariants = {"dim": inv.dim, "deg": inv.deg, "reg": inv.reg, "pd": inv.pd,
                              "codim": inv.codim, "depth": inv.depth}
    failed = [s for s, ok in rep.stages.items() if not ok]
    if failed:
        raise unproj.UnprojectionError("pipeline stage failed: " + ", ".join(failed))
    return I_X, rep


# ---------------------------------------------------------------------------
# fixtures

EXAMPLE53_TABLE = {
    (0, 4): 1, (0, 6): 1, (0, 7): 2, (0, 10): 3, (0, 12): 1, (0, 13): 1, (0, 14): 1,
    (0, 16): 1, (0, 18): 1,
    (1, 7): 3, (1, 10): 6, (1, 12): 4, (1, 13): 2, (1, 14): 4, (1, 16): 4, (1, 18): 4,
    (2, 10): 3, (2, 12): 5, (2, 13): 1, (2, 14): 6, (2, 16): 6, (2, 18): 6,
    (3, 12): 2, (3, 14): 4, (3, 16): 4, (3, 18): 4,
    (4, 14): 1, (4, 16): 1, (4, 18): 1,
}


@dataclass
class Example53:
    R: PolyRing
    sextic: Polynomial
    a: Polynomial
    f: Polynomial
    expected: dict
    table: BettiTable
    notes: list = field(default_factory=list)


def example53(char: int = DEFAULT_PRIME) -> Example53:
    R = PolyRing("y0 z0 y1 z1 y2 z2", char)
    G = R("y1^4*y0^2 + (z2^3*y1 - y2^3*z1)*y0*z0 + z1^4*z0^2")
    expected = {"deg_RT": 6, "reg_T": 20, "pd_RT": 6, "deg_X": 18, "reg_X": 18, "pd_SX": 5,
                "deg_PCzX": 12, "reg_PCzX": 17}
    notes = ["irreducibility of the sextic is taken from the source, not certified here"]
    return Example53(R, G, R("y0^4"), R("z0^3"), expected, BettiTable(dict(EXAMPLE53_TABLE)), notes)


def _quadric_through(S, z, rng, p):
    """Random quadric vanishing at z (coordinates mod p)."""
    while True:
        f = S.zero()
        n = S.nvars
        for i in range(n):
            for j in range(i, n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                f = f + S.monomial(e, rng.randrange(p))
        val = f.evaluate(z)
        # subtract val/l(z)^2 * l^2 for a random linear l with l(z) != 0
        l = S.zero()
        for i in range(n):
            e = [0] * n
            e[i] = 1
            l = l + S.monomial(e, rng.randrange(1, p))
        lz = l.evaluate(z)
        if lz % p == 0:
            continue
        return f - (l * l).scale(val * pow(lz * lz, -1, p) % p)


EXAMPLE34_M0 = {(0, 3): 1}
EXAMPLE34_M1 = {(0, 2): 2, (1, 2): 1, (1, 3): 1}
EXAMPLE34_IE = {(0, 2): 2, (1, 3): 1}


def elliptic_quartic(seed: int = 1, char: int = DEFAULT_PRIME, retries: int = 20):
    """Two random quadrics through a random point z of P^3, resampled until the
    partial elimination tables are those of a general point of an elliptic quartic.

    Returns (I_E, z, seed_used).
    """
    if not char:
        raise ValueError("the elliptic quartic fixture is sampled over a prime field")
    S = PolyRing("x0 x1 x2 x3", char)
    for attempt in range(retries):
        sd = seed + attempt
        rng = random.Random(sd)
        z = [rng.randrange(1, char) for _ in range(4)]
        I = Ideal(S, [_quadric_through(S, z, rng, char) for _ in range(2)])
        ctx = pei.make_context(I, z)
        try:
            tabs = pei.module_tables(ctx)
        except (pei.CertificationError, pei.NotGenericallyFinite):
            continue
        if {i: B.entries for i, B in tabs.items()} == {0: EXAMPLE34_M0, 1: EXAMPLE34_M1}:
            return I, z, sd
    raise RuntimeError("no general point found within the retry budget")


# ---------------------------------------------------------------------------
# serialisable parameter records

FAMILY_TAGS = ("caviglia", "caviglia_chain", "borna_mohajer", "bmnsss", "thm43", "prop51",
               "pipeline")


@dataclass
class FamilySpec:
    family: str
    k: int | None = None
    d: int | None = None
    e: int | None = None
    a: list | None = None
    b: list | None = None
    c: list | None = None
    m: int | None = None
    Delta: int | None = None
    delta: int | None = None
    char: int = DEFAULT_PRIME
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILY_TAGS:
            raise ConstraintViolation(f"unknown family {self.family!r}")

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v is not None}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        return cls(**json.loads(text))

    def build(self) -> Ideal:
        f = self.family
        if f == "caviglia":
            return caviglia(self.d, self.char)
        if f == "caviglia_chain":
            return caviglia_chain(self.k, self.d, self.char)
        if f == "borna_mohajer":
            return borna_mohajer(self.k, self.d, self.char)
        if f == "bmnsss":
            return bmnsss(self.k, self.d, self.char)
        if f == "thm43":
            return thm43_ideal(self.a, self.b, self.c, self.char)
        if f == "pipeline":
            return pipeline(self.k, self.d, self.e or 2, self.char, self.seed)[0]
        raise ConstraintViolation("prop51 needs explicit polynomials; use prop51()")
