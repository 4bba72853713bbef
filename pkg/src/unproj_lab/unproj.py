"""Fake linear forms and the unprojection construction.

A fake linear form on Y is a degree-one fraction lambda = a/f that is not
represented by a linear form modulo I_Y.  Adjoining a new variable x0 with
f*x0 = a and saturating by f produces X, whose projection from
z = (1:0:...:0) is Y.  The helpers here build X, certify the round trip and
transfer degree, regularity and projective dimension between Y and X.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import pei
from .groebner import Ideal, eliminate, quotient, same_ideal, saturate
from .homalg import betti_invariants, hilbert
from .linalg import linear_solve_mod_p, monomials_of_degree, solve_rational
from .polyring import Polynomial, PolyRing, RingMap, apply_map


class NotFakeError(ValueError):
    """a/f agrees with a linear form modulo I_Y; ``representative`` is that form."""

    def __init__(self, representative):
        super().__init__(f"not fake: a/f = {representative} on Y")
        self.representative = representative


class DenominatorInIdeal(ValueError):
    pass


class UnprojectionError(AssertionError):
    pass


@dataclass
class FakeCertificate:
    """The infeasible system a - sum c_v v f in (I_Y)_{deg a}."""
    degree: int
    columns: list
    target: dict
    field_char: int

    def recheck(self) -> bool:
        """True when the system is still infeasible."""
        return _solve(self.columns, self.target, self.field_char) is None


@dataclass
class FakeLinearForm:
    I_Y: Ideal
    a: Polynomial
    f: Polynomial
    certificate: FakeCertificate = field(repr=False)

    @property
    def ring(self) -> PolyRing:
        return self.I_Y.ring

    def __str__(self):
        return f"({self.a}) / ({self.f})"


def _solve(columns, target, char):
    if char:
        return linear_solve_mod_p(columns, target, char)
    return solve_rational(columns, target)


def _as_vector(f: Polynomial) -> dict:
    return {e: c for e, c in f.terms()}


def check_fake_linear(I_Y: Ideal, a, f) -> FakeLinearForm:
    """Certify that a/f is a fake linear form on V(I_Y).

    Solves a - sum_v c_v * x_v * f in (I_Y)_{deg a} by linear algebra over the
    degree slice.  Raises NotFakeError carrying sum c_v x_v when solvable.
    """
    R = I_Y.ring
    a = R(a) if not isinstance(a, Polynomial) else a
    f = R(f) if not isinstance(f, Polynomial) else f
    if not (a.is_homogeneous() and f.is_homogeneous()) or not a or not f:
        raise ValueError("a and f must be nonzero homogeneous polynomials")
    if a.degree() != f.degree() + 1:
        raise ValueError("need deg a = deg f + 1")
    if I_Y.contains(f):
        raise DenominatorInIdeal("denominator lies in I_Y")
    d = a.degree()
    char = R.characteristic
    n = R.nvars
    columns = [_as_vector(R.gens()[v] * f) for v in range(n)]
    for g in I_Y.gens:
        e = g.degree()
        if e > d:
            continue
        for m in monomials_of_degree(n, d - e):
            columns.append(_as_vector(g * R.monomial(m)))
    target = _as_vector(a)
    sol = _solve(columns, target, char)
    if sol is not None:
        lam0 = R.zero()
        for v in range(n):
            if sol[v]:
                lam0 = lam0 + R.gens()[v].scale(sol[v])
        raise NotFakeError(lam0)
    cert = FakeCertificate(d, columns, target, char)
    return FakeLinearForm(I_Y, a, f, cert)


def ideal_of_denominators(lam: FakeLinearForm) -> Ideal:
    """Preimage in R of D(lambda) = ((f) : a) in S_Y, i.e. (I_Y + (f)) : a."""
    return quotient(lam.I_Y + Ideal(lam.ring, [lam.f]), lam.a)


@dataclass
class Unprojection:
    I_X: Ideal
    ctx: "pei.ProjectionContext"
    new_var: str
    certified: dict
    notes: list = field(default_factory=list)


def _extended_ring(R: PolyRing, new_var: str) -> PolyRing:
    if new_var in R.index:
        raise ValueError(f"variable {new_var} already in the ring")
    return PolyRing((new_var,) + R.names, R.field)


def unproject(lam: FakeLinearForm, new_var: str = "x0", certify: bool = True) -> Unprojection:
    """I_X = (I_Y S + (f x0 - a)) : f^inf in S = R[x0], with certification."""
    R = lam.ring
    S = _extended_ring(R, new_var)
    x0 = S.var(new_var)
    f = lam.f.to_ring(S)
    a = lam.a.to_ring(S)
    J = Ideal(S, [g.to_ring(S) for g in lam.I_Y.gens] + [f * x0 - a])
    I_X = saturate(J, f)
    I_X = Ideal(S, I_X.groebner_basis())
    ctx = pei.make_context(I_X, x0=new_var)
    cert = {}
    if certify:
        K0 = eliminate(I_X, [new_var]).to_ring(R)
        cert["projection_is_I_Y"] = same_ideal(K0, lam.I_Y)
        D = ideal_of_denominators(lam)
        cert["K1_equals_D"] = same_ideal(pei.partial_elimination_ideal(ctx, 1), D)
        cert["nondegenerate"] = all(g.degree() >= 2 for g in I_X.groebner_basis())
        failed = [k for k, v in cert.items() if not v]
        if failed:
            raise UnprojectionError("unprojection certification failed: " + ", ".join(failed))
    notes = ["primality of I_X is not certified"]
    return Unprojection(I_X, ctx, new_var, cert, notes)


# ---------------------------------------------------------------------------
# invariants

@dataclass
class Invariants:
    dim: int            # projective dimension of the variety
    deg: int
    reg: int | None     # regularity of the ideal
    pd: int             # projective dimension of the coordinate ring
    depth: int
    codim: int


def invariants(I: Ideal) -> Invariants:
    h = hilbert(I)
    b = betti_invariants(I)
    n = I.ring.nvars
    return Invariants(h.dim - 1, h.degree, b.reg, b.pd_quotient, b.depth_quotient, n - h.dim)


@dataclass
class DegreeSequence:
    d: list
    convex: bool
    increments_bounded: bool
    linear: bool
    bound: int
    context_check: bool | None = None
    notes: list = field(default_factory=list)


def _chi(h, n) -> int:
    return h.degree if h.dim - 1 == n - 1 else 0


def degree_sequence(lam: FakeLinearForm, i_max: int, cohen_macaulay: bool = False,
                    ctx=None) -> DegreeSequence:
    """d_i = chi_{n-1}(W_i) with W_i cut out by (a, f)^i on Y, plus diagnostics."""
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    R = lam.ring
    hY = hilbert(lam.I_Y)
    n = hY.dim - 1
    af = Ideal(R, [lam.a, lam.f])
    d = [0]
    for i in range(1, i_max + 1):
        W = lam.I_Y + af ** i
        d.append(_chi(hilbert(W), n))
    inc = [d[i] - d[i - 1] for i in range(1, len(d))]
    bound = lam.f.degree() * hY.degree
    convex = all(inc[k + 1] >= inc[k] for k in range(len(inc) - 1))
    bounded = all(x <= bound for x in inc)
    linear = len(set(inc)) <= 1
    out = DegreeSequence(d, convex, bounded, linear, bound)
    if cohen_macaulay:
        inv = betti_invariants(lam.I_Y)
        if inv.depth_quotient != hY.dim:
            out.notes.append("S_Y is not Cohen-Macaulay; linearity test skipped")
        else:
            if ctx is None:
                ctx = unproject(lam, certify=False).ctx
            st = pei.stabilization(ctx)
            out.context_check = linear == (st.z_in_X and st.index <= 1)
    return out


# ---------------------------------------------------------------------------
# regular sequences and invariant transfer

def is_regular_pair(I_Y: Ideal, f, a) -> bool:
    """{f, a} is a regular sequence on R/I_Y (two colon computations)."""
    if I_Y.contains(f):
        return False
    if not same_ideal(quotient(I_Y, f), I_Y):
        return False
    J = I_Y + Ideal(I_Y.ring, [f])
    if J.contains(a):
        return False
    return same_ideal(quotient(J, a), J)


@dataclass
class TransferResult:
    deg_X: int
    reg_X: int
    pd_X: int
    path: str
    notes: list = field(default_factory=list)


def cor37_invariants(lam: FakeLinearForm, unproj: Unprojection | None = None) -> TransferResult:
    """deg X, reg I_X and pd S_X from data on Y, falling back to a direct computation."""
    I_Y, a, f = lam.I_Y, lam.a, lam.f
    df = f.degree()
    hY = hilbert(I_Y)
    bY = betti_invariants(I_Y)
    if is_regular_pair(I_Y, f, a):
        return TransferResult((df + 1) * hY.degree, bY.reg + df, bY.pd_quotient + 1,
                              "regular_sequence")
    notes = []
    T = I_Y + Ideal(I_Y.ring, [a, f])
    bT = betti_invariants(T)
    hT = hilbert(T)
    if unproj is None:
        unproj = unproject(lam, certify=False)
    ctx = unproj.ctx
    st = pei.stabilization(ctx)
    ok = True
    if st.index > 1:
        ok = False
        notes.append("M_i != 0 for some i >= 2")
    if not bT.reg > bY.reg + df:
        ok = False
        notes.append("reg T <= reg Y + deg f")
    if not bT.pd_quotient > bY.pd_quotient + 2:
        ok = False
        notes.append("pd R/T <= pd S_Y + 2")
    if ok:
        degW = hT.degree if hT.dim == hY.dim - 1 else 0
        return TransferResult((df + 1) * hY.degree - degW, bT.reg - df + 1,
                              bT.pd_quotient - 1, "T_bounds", notes)
    inv = invariants(unproj.I_X)
    return TransferResult(inv.deg, inv.reg, inv.pd, "direct", notes)


def random_form(ring: PolyRing, degree: int, rng: random.Random, density: float = 1.0) -> Polynomial:
    """Seeded random homogeneous form; coefficients in [1, 100] (or the field)."""
    char = ring.characteristic
    top = char - 1 if char else 100
    f = ring.zero()
    for e in monomials_of_degree(ring.nvars, degree):
        if rng.random() <= density:
            f = f + ring.monomial(e, rng.randint(1, top))
    return f


def _fresh_name(ring: PolyRing, stem="w") -> str:
    k = 0
    while f"{stem}{k}" in ring.index:
        k += 1
    return f"{stem}{k}"


def extend_codim(I_X: Ideal, steps: int, deg_f: int = 1, seed: int = 0, retries: int = 10,
                 verify: bool = True) -> Ideal:
    """Unproject ``steps`` times along random regular pairs (f, a).

    Each step multiplies the degree by deg_f + 1 and raises reg by deg_f and
    pd and codim by one; the predictions are asserted against a direct
    computation when ``verify`` is set.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if steps == 0:
        return I_X
    rng = random.Random(seed)
    cur = I_X
    inv = invariants(cur) if verify else None
    if verify and inv.depth < 2:
        raise ValueError("depth S_X must be at least 2")
    for _ in range(steps):
        R = cur.ring
        for _try in range(retries):
            f = random_form(R, deg_f, rng)
            a = random_form(R, deg_f + 1, rng)
            if is_regular_pair(cur, f, a):
                break
        else:
            raise UnprojectionError("no regular pair found within the retry budget")
        lam = check_fake_linear(cur, a, f)
        nxt = unproject(lam, _fresh_name(R), certify=verify).I_X
        if verify:
            new = invariants(nxt)
            expect = (inv.deg * (deg_f + 1), inv.reg + deg_f, inv.pd + 1, inv.codim + 1)
            got = (new.deg, new.reg, new.pd, new.codim)
            if got != expect:
                raise UnprojectionError(f"codimension step predicted {expect}, got {got}")
            inv = new
        cur = nxt
    return cur


def hyperplane_section(I_X: Ideal, seed: int = 0, retries: int = 5) -> Ideal:
    """Cut by a seeded random hyperplane and eliminate the last variable.

    deg, reg and pd must survive and the dimension must drop by one; a bad
    sample is redrawn a bounded number of times.
    """
    S = I_X.ring
    before = invariants(I_X)
    if before.depth < 2:
        raise ValueError("depth S_X must be at least 2")
    rng = random.Random(seed)
    names = S.names[:-1]
    T = PolyRing(names, S.field)
    F = S.field
    for _ in range(retries):
        c = [rng.randint(1, 100) for _ in range(S.nvars)]
        # x_last = -(sum c_i x_i) / c_last
        inv_last = F.inv(F(c[-1]))
        sub = T.zero()
        for k, nm in enumerate(names):
            sub = sub - T.var(nm).scale(F(c[k] * inv_last))
        images = [T.var(nm) for nm in names] + [sub]
        phi = RingMap(S, T, images)
        gens = [apply_map(phi, g) for g in I_X.gens]
        J = Ideal(T, [g for g in gens if g])
        J = Ideal(T, J.groebner_basis())
        after = invariants(J)
        if (after.deg, after.reg, after.pd, after.dim) == \
                (before.deg, before.reg, before.pd, before.dim - 1):
            return J
    raise UnprojectionError("no hyperplane preserved the invariants within the retry budget")
