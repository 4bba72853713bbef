"""Partial elimination ideals and modules for the projection from a point.

After a linear change of coordinates the centre is z = (1:0:...:0) and x0 is
the distinguished variable.  K_i is read off a Groebner basis of I_X for a
block order with x0 in the first block: the x0-leading coefficients of basis
elements of x0-degree at most i generate K_i.  Every K_i is re-certified
against the definition before it is handed out.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field

from .groebner import Ideal, same_ideal
from .homalg import (BettiTable, SubquotientModule, betti_invariants, cancellation_check,
                     hilbert, resolve)
from .polyring import PolyRing, RingMap, apply_map, block_order


class NotGenericallyFinite(ValueError):
    pass


class CertificationError(AssertionError):
    pass


@dataclass
class Stabilization:
    index: int
    K_inf: Ideal
    z_in_X: bool
    tangent_cone_degree: int | None = None
    tangent_cone_dim: int | None = None


class ProjectionContext:
    """(I_X, z, x0) with caches for K_i and M_i."""

    def __init__(self, I: Ideal, x0: str, point, change=None):
        self.I = I
        self.S = I.ring
        self.x0 = x0
        self.v0 = self.S.index[x0]
        self.point = tuple(point)
        self.change = change
        rest = [nm for nm in self.S.names if nm != x0]
        self.R = PolyRing(rest, self.S.field)
        perm = [self.v0] + [k for k in range(self.S.nvars) if k != self.v0]
        self.elim_order = block_order(1, "grevlex", perm=perm)
        self._K: dict = {}
        self._M: dict = {}
        self._betti: dict = {}
        self._lock = threading.Lock()
        self._gb = None

    # -- basic data ----------------------------------------------------
    def elimination_gb(self) -> list:
        if self._gb is None:
            gb = [g.to_ring(self.S) for g in self.I.groebner_basis(self.elim_order)]
            with self._lock:
                if self._gb is None:
                    self._gb = gb
        return self._gb

    def x0_degrees(self) -> list:
        return [g.degree_in(self.v0) for g in self.elimination_gb()]

    def max_x0_degree(self) -> int:
        return max(self.x0_degrees(), default=0)

    def z_in_X(self) -> bool:
        # every generator vanishes at (1:0:...:0) iff no pure power of x0 occurs
        for g in self.I.gens:
            d = g.degree()
            if g.coefficient_of_power(self.v0, d):
                return False
        return True

    def to_R(self, f):
        return f.to_ring(self.R)

    def K(self, i: int) -> Ideal:
        return partial_elimination_ideal(self, i)

    def M(self, i: int) -> SubquotientModule:
        return partial_elimination_module(self, i)


def make_context(I: Ideal, point=None, x0: str | None = None) -> ProjectionContext:
    """Move ``point`` to (1:0:...:0) by a linear change and set up the context.

    With no point, z = (1:0:...:0) in the given coordinates and x0 defaults to
    the first variable.
    """
    S = I.ring
    n = S.nvars
    F = S.field
    if point is None:
        v0 = S.index[x0] if x0 else 0
        point = [0] * n
        point[v0] = 1
    point = [F(c) for c in point]
    if len(point) != n:
        raise ValueError("point has the wrong number of coordinates")
    if all(c == 0 for c in point):
        raise ValueError("the origin is not a projective point")
    if x0 is not None and point[S.index[x0]] != 0:
        v0 = S.index[x0]
    else:
        v0 = next(k for k, c in enumerate(point) if c != 0)
    inv = F.inv(point[v0])
    p = [F(c * inv) for c in point]
    if all(p[k] == 0 for k in range(n) if k != v0):
        J = I
        change = None
    else:
        # old x_k = new x_k + p_k * x0 sends z to (1:0:...:0)
        x0v = S.gens()[v0]
        images = [S.gens()[k] + x0v.scale(p[k]) if k != v0 else x0v for k in range(n)]
        phi = RingMap(S, S, images)
        J = Ideal(S, [apply_map(phi, g) for g in I.gens])
        change = phi
    return ProjectionContext(J, S.names[v0], p, change)


def _lift(ctx, g, i):
    """g * x0^(i - deg_x0 g), an element of I_X of x0-degree i."""
    e = [0] * ctx.S.nvars
    e[ctx.v0] = i - g.degree_in(ctx.v0)
    return g * ctx.S.monomial(e)


def partial_elimination_ideal(ctx: ProjectionContext, i: int, certify: bool = True,
                              samples: int = 4, seed: int = 0) -> Ideal:
    """K_i(X, z) inside R, certified against the definition."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    cached = ctx._K.get(i)
    if cached is not None:
        return cached
    gb = ctx.elimination_gb()
    gens = []
    for g in gb:
        e = g.degree_in(ctx.v0)
        if e <= i:
            gens.append(ctx.to_R(g.coefficient_of_power(ctx.v0, e)))
    K = Ideal(ctx.R, gens)
    if certify:
        _certify_K(ctx, K, i, samples, seed)
    with ctx._lock:
        K = ctx._K.setdefault(i, K)
    return K


def _certify_K(ctx, K, i, samples, seed):
    # (a) every generator is the x0^i coefficient of a member of I_X of x0-degree <= i
    gb = ctx.elimination_gb()
    for g in gb:
        if g.degree_in(ctx.v0) <= i:
            if not ctx.I.contains(_lift(ctx, g, i)):
                raise CertificationError(f"K_{i}: generator does not lift to I_X")
    # (b) sampled members of I_X of x0-degree <= i have x0^i coefficient in K_i
    rng = random.Random(seed * 1000 + i)
    S = ctx.S
    pool = [g for g in ctx.I.gens if g.degree_in(ctx.v0) <= i]
    pool += [g for g in gb if g.degree_in(ctx.v0) <= i]
    if not pool:
        return
    Rgens = [S.var(nm) for nm in ctx.R.names]
    for _ in range(samples):
        f = S.zero()
        top = max(g.degree() for g in pool)
        for g in pool:
            room = i - g.degree_in(ctx.v0)
            k = rng.randint(0, room)
            coef = S.constant(rng.randint(1, 97))
            for _ in range(top - g.degree()):
                coef = coef * rng.choice(Rgens)
            e = [0] * S.nvars
            e[ctx.v0] = k
            f = f + g * coef * S.monomial(e)
        if f.degree_in(ctx.v0) > i:
            continue
        c = ctx.to_R(f.coefficient_of_power(ctx.v0, i))
        if c and not K.contains(c):
            raise CertificationError(f"K_{i}: sampled coefficient outside the computed ideal")


def stabilization(ctx: ProjectionContext) -> Stabilization:
    """Smallest certified i with K_i = K_{i+1} = K_inf."""
    cand = ctx.max_x0_degree()
    Kc = partial_elimination_ideal(ctx, cand)
    ok = False
    for extra in range(0, 3):
        Kn = partial_elimination_ideal(ctx, cand + extra + 1)
        if same_ideal(Kc, Kn):
            ok = True
            break
        cand, Kc = cand + extra + 1, Kn
    if not ok:
        raise CertificationError("partial elimination ideals did not stabilise")
    # the first index where the chain reaches K_inf
    idx = cand
    while idx > 0 and same_ideal(partial_elimination_ideal(ctx, idx - 1), Kc):
        idx -= 1
    zin = ctx.z_in_X()
    st = Stabilization(idx, Kc, zin)
    if zin:
        h = hilbert(Kc)
        hx = hilbert(ctx.I)
        st.tangent_cone_degree = h.degree
        st.tangent_cone_dim = h.dim - 1
        if h.dim - 1 != hx.dim - 2:
            raise CertificationError("tangent cone dimension is not dim X - 1")
    elif not Kc.is_unit():
        raise CertificationError("z outside X but K_inf is not the unit ideal")
    return st


def partial_elimination_module(ctx: ProjectionContext, i: int) -> SubquotientModule:
    """M_i = (K_i / K_{i-1})(-i) as an R-module."""
    cached = ctx._M.get(i)
    if cached is not None:
        return cached
    Ki = partial_elimination_ideal(ctx, i)
    if i == 0:
        M = SubquotientModule.from_ideals(Ki)
    else:
        M = SubquotientModule.from_ideals(Ki, partial_elimination_ideal(ctx, i - 1), shift=i)
    with ctx._lock:
        M = ctx._M.setdefault(i, M)
    return M


def module_betti(ctx: ProjectionContext, i: int) -> BettiTable:
    B = ctx._betti.get(i)
    if B is None:
        B = resolve(partial_elimination_module(ctx, i)).betti()
        with ctx._lock:
            B = ctx._betti.setdefault(i, B)
    return B


def module_tables(ctx: ProjectionContext) -> dict:
    """Betti tables of M_0 .. M_s (s the stabilisation index); later M_i vanish."""
    st = stabilization(ctx)
    return {i: module_betti(ctx, i) for i in range(st.index + 1)}


def hilbert_additivity(ctx: ProjectionContext, upto: int = 30) -> bool:
    """sum_i HS(M_i) = (1 - t) HS(I_X), compared coefficientwise up to ``upto``."""
    st = stabilization(ctx)
    total = [0] * (upto + 1)
    for i in range(st.index + 1):
        h = hilbert(partial_elimination_module(ctx, i))
        for d, v in enumerate(h.series(upto)):
            total[d] += v
    hs = hilbert(ctx.I)
    n = ctx.S.nvars
    # HS(I_X)_d = dim S_d - HS(S/I_X)_d
    from math import comb
    hi = [comb(d + n - 1, n - 1) - v for d, v in enumerate(hs.series(upto))]
    rhs = [hi[0]] + [hi[d] - hi[d - 1] for d in range(1, upto + 1)]
    return total == rhs


@dataclass
class ProjectionInvariants:
    deg_map: int
    deg_X: int
    deg_Xz: int
    z_in_X: bool
    deg_tangent_cone: int | None
    degree_formula_check: bool
    notes: list = field(default_factory=list)


def projection_invariants(ctx: ProjectionContext) -> ProjectionInvariants:
    """Degree of pi_z restricted to X and the degree formula check."""
    hX = hilbert(ctx.I)
    K0 = partial_elimination_ideal(ctx, 0)
    h0 = hilbert(K0)
    if h0.dim != hX.dim:
        raise NotGenericallyFinite("projection is not generically finite")
    st = stabilization(ctx)
    deg_map = None
    for i in range(1, st.index + 2):
        Ki = partial_elimination_ideal(ctx, i)
        hi = hilbert(Ki)
        same = hi.dim == h0.dim and hi.degree == h0.degree
        if not same:
            deg_map = i
            break
    if deg_map is None:
        raise NotGenericallyFinite("Z_i = X_z for every i")
    corr = st.tangent_cone_degree if st.z_in_X else 0
    ok = hX.degree == deg_map * h0.degree + corr
    return ProjectionInvariants(deg_map, hX.degree, h0.degree, st.z_in_X,
                                st.tangent_cone_degree, ok)


def exceptional_fundamental_ideal(ctx: ProjectionContext) -> Ideal:
    """K_1 in R; its image in S_{X_z} is K_1/K_0."""
    inv = projection_invariants(ctx)
    if inv.deg_map != 1:
        raise ValueError("projection is not birational")
    return partial_elimination_ideal(ctx, 1)


@dataclass
class DominanceResult:
    holds: bool
    mode: str
    i: int
    value: int | None = None       # reg M_i, or pd M_i + 1
    verified: bool | None = None


def dominance(ctx: ProjectionContext, i: int, mode: str = "regularity",
              verify: bool = True) -> DominanceResult:
    """Does M_i dominate the others; if so, check the predicted reg X or pd S_X."""
    tables = module_tables(ctx)
    nz = {j: B for j, B in tables.items() if B}
    if i not in nz:
        return DominanceResult(False, mode, i)
    Bi = nz[i]
    if mode == "regularity":
        holds = all(Bi.reg >= B.reg for j, B in nz.items() if j < i) and \
            all(Bi.reg >= B.reg + 2 for j, B in nz.items() if j > i)
        value = Bi.reg
    elif mode in ("projective_dimension", "pd"):
        mode = "projective_dimension"
        holds = all(Bi.pd >= B.pd + 2 for j, B in nz.items() if j < i) and \
            all(Bi.pd >= B.pd for j, B in nz.items() if j > i)
        value = Bi.pd + 1
    else:
        raise ValueError(f"unknown mode {mode!r}")
    res = DominanceResult(holds, mode, i, value)
    if holds and verify:
        inv = betti_invariants(ctx.I)
        direct = inv.reg if mode == "regularity" else inv.pd_quotient
        res.verified = direct == value
        if not res.verified:
            raise CertificationError(f"dominance predicted {value}, direct computation gave {direct}")
    return res


def cancellation_report(ctx: ProjectionContext):
    """Check that the M-tables cancel down to the table of I_X."""
    seq = module_tables(ctx)
    target = betti_invariants(ctx.I).table
    return cancellation_check(seq, target)
