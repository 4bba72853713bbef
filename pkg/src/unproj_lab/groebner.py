"""Reduced Groebner bases and the ideal toolkit built on them.

The engine is Buchberger's algorithm with Gebauer-Moeller pair elimination and
normal/sugar selection.  Homogeneous input is processed degree by degree, which
is what makes degree-truncated runs and minimal-generator detection possible.
"""

from __future__ import annotations

import heapq
import threading
import time

from . import kernels
from .polyring import (FIELD_MASK, GREVLEX, MonomialOrder, Polynomial, PolyRing, block_order)


class ComputationAborted(RuntimeError):
    """A resource limit was hit; the computation produced no answer."""


class Buchberger:
    """One Groebner basis computation over packed monomials.

    ``module`` disables the product criterion (it is only valid for ideals).
    Subclasses can override :meth:`on_result` to intercept reduced elements and
    :meth:`pair_rank` to order pairs of equal degree.
    """

    def __init__(self, layout, p, module=False, backend=None, max_pairs=None, deadline=None):
        self.lay = layout
        self.p = p
        self.module = module
        self.basis = kernels.make_basis(layout, p, backend)
        self.G: list[int] = []
        self.leads: list[int] = []
        self.sugar: list[int] = []
        self.pairs: dict = {}
        self.heap: list = []
        self.inputs: list = []
        self._seq = 0
        self.max_pairs = max_pairs
        self.deadline = deadline
        self.npairs = 0
        self.truncated = False

    # -- element bookkeeping -------------------------------------------
    def add_input(self, kpoly, degree=None):
        if degree is None:
            degree = max(m & FIELD_MASK for m in kpoly.monos)
        heapq.heappush(self.inputs, (degree, self._seq, kpoly))
        self._seq += 1

    def insert(self, f, sugar) -> int:
        idx = self.basis.add(f)
        self.leads.append(f.lead)
        self.sugar.append(sugar)
        self._update(idx)
        return idx

    def _update(self, h):
        lay = self.lay
        leads = self.leads
        lh = leads[h]
        divides = lay.divides
        cmask = lay.cmask
        module = self.module
        cands = []
        for g in self.G:
            lg = leads[g]
            if (lg ^ lh) & cmask:
                continue
            L = lay.lcm(lh, lg)
            coprime = (not module) and L == lh + lg
            cands.append((L, g, coprime))
        kept = []
        for k, (L, g, cp) in enumerate(cands):
            if cp:
                kept.append((L, g, cp))
                continue
            redundant = False
            for L2, _, _ in cands[k + 1:]:
                if divides(L2, L):
                    redundant = True
                    break
            if not redundant:
                for L2, _, _ in kept:
                    if divides(L2, L):
                        redundant = True
                        break
            if not redundant:
                kept.append((L, g, cp))
        # old pairs made redundant by h
        dead = []
        for key, (s, L) in self.pairs.items():
            if divides(lh, L):
                i, j = key
                if lay.lcm(leads[i], lh) != L and lay.lcm(leads[j], lh) != L:
                    dead.append(key)
        for key in dead:
            del self.pairs[key]
        sug = self.sugar
        dh = lh & FIELD_MASK
        for L, g, cp in kept:
            if cp:
                continue
            dL = L & FIELD_MASK
            s = max(sug[h] - dh, sug[g] - (leads[g] & FIELD_MASK)) + dL
            key = (g, h)
            self.pairs[key] = (s, L)
            heapq.heappush(self.heap, (s, self.pair_rank(g, h), L, g, h))
        self.G = [g for g in self.G if not divides(lh, leads[g])]
        self.G.append(h)

    def pair_rank(self, i, j) -> int:
        return 0

    def on_result(self, r, sugar, origin) -> None:
        if r is not None:
            self.insert(r, sugar)

    # -- main loop -----------------------------------------------------
    def _next_pair_degree(self):
        heap = self.heap
        while heap:
            s, _, L, i, j = heap[0]
            cur = self.pairs.get((i, j))
            if cur is None or cur[1] != L:
                heapq.heappop(heap)
                continue
            return s
        return None

    def run(self, degree_bound=None):
        basis = self.basis
        while True:
            dp = self._next_pair_degree()
            di = self.inputs[0][0] if self.inputs else None
            if dp is None and di is None:
                break
            d = min(x for x in (dp, di) if x is not None)
            if degree_bound is not None and d > degree_bound:
                self.truncated = True
                break
            batch = []
            while self.heap and self.heap[0][0] == d:
                item = heapq.heappop(self.heap)
                if (item[3], item[4]) in self.pairs:
                    batch.append(item)
            batch.sort(key=lambda t: (t[1], t[2], t[3], t[4]))
            for s, _, L, i, j in batch:
                if self.pairs.pop((i, j), None) is None:
                    continue
                self.npairs += 1
                if self.max_pairs is not None and self.npairs > self.max_pairs:
                    raise ComputationAborted(f"pair limit {self.max_pairs} exceeded")
                if self.deadline is not None and time.monotonic() > self.deadline:
                    raise ComputationAborted("time limit exceeded")
                r = basis.spair(i, j, L)
                self.on_result(r, s, ("pair", i, j))
            while self.inputs and self.inputs[0][0] == d:
                _, seq, f = heapq.heappop(self.inputs)
                r = basis.reduce(f)
                self.on_result(r, d, ("input", seq))
        return self

    def reduced(self) -> list:
        """Interreduce the minimal basis G; returns sorted (monos, coeffs) lists."""
        basis = self.basis
        Gset = set(self.G)
        for k in range(len(basis)):
            if k not in Gset:
                basis.deactivate(k)
        out = []
        for g in sorted(self.G, key=lambda k: self.leads[k]):
            r = basis.reduce(basis.get(g), True, g)
            basis.replace(g, r)
            m, c = basis.get(g).to_lists()
            p = self.p
            if p:
                inv = pow(c[0], -1, p)
                c = [x * inv % p for x in c]
            else:
                c = [x / c[0] for x in c]
            out.append((m, c))
        return out


def _to_kernel(basis, f: Polynomial):
    return basis.make(f.monos, f.coeffs)


def compute_gb(ring: PolyRing, gens, degree_bound=None, backend=None, max_pairs=None,
               deadline=None) -> list:
    """Reduced Groebner basis of ``gens`` under ``ring``'s order (list of Polynomial)."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    run = Buchberger(ring.layout, ring.field.p, backend=backend, max_pairs=max_pairs,
                     deadline=deadline)
    for g in gens:
        run.add_input(_to_kernel(run.basis, g))
    run.run(degree_bound)
    return [ring.from_terms(m, c) for m, c in run.reduced()]


def minimal_generators(ring: PolyRing, gens) -> list:
    """A minimal homogeneous generating subset (processed by degree)."""
    gens = [g for g in gens if g]
    if not all(g.is_homogeneous() for g in gens):
        raise ValueError("minimal generators need homogeneous input")
    run = Buchberger(ring.layout, ring.field.p)
    keep = []
    order = {}

    def on_result(r, sugar, origin, _orig=run.on_result):
        if origin[0] == "input" and r is not None:
            keep.append(order[origin[1]])
        _orig(r, sugar, origin)

    run.on_result = on_result
    for k, g in enumerate(gens):
        order[run._seq] = k
        run.add_input(_to_kernel(run.basis, g))
    run.run()
    return [gens[k] for k in sorted(keep)]


# ---------------------------------------------------------------------------
# ideals

def _as_poly(ring, x):
    if isinstance(x, Polynomial):
        if x.ring != ring:
            return x.to_ring(ring)
        return x
    return ring(x)


class Ideal:
    """An ideal given by generators, with reduced Groebner bases cached per order."""

    def __init__(self, ring: PolyRing, gens=()):
        self.ring = ring
        self.gens = tuple(g for g in (_as_poly(ring, x) for x in gens) if g)
        self._gb: dict = {}
        self._lock = threading.Lock()

    def __repr__(self):
        body = ", ".join(str(g) for g in self.gens[:4])
        more = ", ..." if len(self.gens) > 4 else ""
        return f"Ideal({body}{more})"

    @property
    def homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def groebner_basis(self, order: MonomialOrder | None = None, backend=None) -> list:
        order = order or self.ring.order
        gb = self._gb.get(order)
        if gb is None:
            R = self.ring.with_order(order)
            gb = compute_gb(R, [g.to_ring(R) for g in self.gens], backend=backend)
            with self._lock:
                gb = self._gb.setdefault(order, gb)
        return gb

    def normal_form(self, f, order: MonomialOrder | None = None) -> Polynomial:
        return normal_form(f, self, order)

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    __contains__ = contains

    def is_subset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if other.ring.names != self.ring.names:
            return False
        gb1 = self.groebner_basis()
        gb2 = Ideal(self.ring, other.gens).groebner_basis()
        return gb1 == gb2

    __hash__ = None

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant()

    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        return ideal_product(self, other)

    def __pow__(self, k):
        return ideal_power(self, k)

    def intersect(self, other):
        return intersection(self, other)

    def to_ring(self, ring: PolyRing, name_map=None) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring, name_map) for g in self.gens])

    def minimal_generators(self) -> "Ideal":
        return Ideal(self.ring, minimal_generators(self.ring, self.gens))

    def lead_monomials(self, order=None) -> list:
        return [g.lead_exps() for g in self.groebner_basis(order)]

    def max_degree(self) -> int:
        return max((g.degree() for g in self.gens), default=0)


def groebner_basis(I: Ideal, order: MonomialOrder | None = None) -> list:
    return I.groebner_basis(order)


def normal_form(f, I: Ideal, order: MonomialOrder | None = None) -> Polynomial:
    order = order or I.ring.order
    R = I.ring.with_order(order)
    f = _as_poly(I.ring, f)
    gb = I.groebner_basis(order)
    if not f or not gb:
        return f
    basis = kernels.make_basis(R.layout, R.field.p)
    for g in gb:
        basis.add(basis.make(g.monos, g.coeffs))
    fr = f.to_ring(R)
    r = basis.reduce(basis.make(fr.monos, fr.coeffs))
    if r is None:
        return I.ring.zero()
    m, c = r.to_lists()
    return R.from_terms(m, c).to_ring(I.ring)


def ideal_sum(I: Ideal, J) -> Ideal:
    J = J if isinstance(J, Ideal) else Ideal(I.ring, [J] if isinstance(J, Polynomial) else J)
    return Ideal(I.ring, I.gens + J.gens)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(I.ring, [f * g for f in I.gens for g in J.gens])


def ideal_power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return Ideal(I.ring, [I.ring.one()])
    gens = list(I.gens)
    cur = {g: None for g in gens}
    for _ in range(k - 1):
        nxt = {}
        for a in cur:
            for g in gens:
                nxt[a * g] = None
        cur = nxt
    return Ideal(I.ring, list(cur))


def _tag_ring(ring: PolyRing, tag="_t"):
    """ring with an extra degree-0 tag variable in front, eliminated by a block order."""
    name = tag
    while name in ring.index:
        name += "_"
    R = PolyRing((name,) + ring.names, ring.field, block_order(1), degrees=(0,) + ring.degrees)
    return R, name


def intersection(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via elimination of a tag variable t from t*I + (1-t)*J."""
    if I.is_zero() or J.is_zero():
        return Ideal(I.ring, [])
    R, t = _tag_ring(I.ring)
    T = R.var(t)
    one = R.one()
    gens = [T * g.to_ring(R) for g in I.gens] + [(one - T) * g.to_ring(R) for g in J.gens]
    gb = compute_gb(R, gens)
    ti = R.index[t]
    out = [g for g in gb if g.degree_in(ti) == 0]
    return Ideal(I.ring, [g.to_ring(I.ring) for g in out])


def divide_exact(h: Polynomial, g: Polynomial) -> Polynomial:
    """h / g, for h known to be a multiple of g."""
    ring = h.ring
    F = ring.field
    lay = ring.layout
    q = {}
    rem = h
    lg = g.monos[0]
    inv = F.inv(g.coeffs[0])
    while rem:
        lm = rem.monos[0]
        if not lay.divides(lg, lm):
            raise ArithmeticError("polynomial division is not exact")
        c = rem.coeffs[0] * inv
        if F.p:
            c %= F.p
        shift = lm - lg
        q[shift] = c
        rem = rem - Polynomial(ring, tuple(m + shift for m in g.monos), g.coeffs).scale(c)
    return Polynomial._from_acc(ring, q)


def quotient(I: Ideal, J) -> Ideal:
    """(I : J) for an ideal or a single polynomial J."""
    if isinstance(J, Polynomial):
        polys = [J]
    elif isinstance(J, Ideal):
        polys = list(J.gens)
    else:
        polys = [_as_poly(I.ring, x) for x in J]
    polys = [f for f in polys if f]
    if not polys:
        return Ideal(I.ring, [I.ring.one()])
    result = None
    for f in polys:
        if f.is_constant():
            Q = Ideal(I.ring, I.gens)
        else:
            cap = intersection(I, Ideal(I.ring, [f]))
            Q = Ideal(I.ring, [divide_exact(h, f) for h in cap.gens])
        result = Q if result is None else intersection(result, Q)
    return result


def _monomial_support(f: Polynomial):
    if len(f.monos) != 1:
        return None
    return f.lead_exps()


def _saturate_variable(I: Ideal, v: int) -> Ideal:
    """I : x_v^inf for homogeneous I: grevlex with x_v last, strip x_v powers."""
    ring = I.ring
    n = ring.nvars
    perm = [k for k in range(n) if k != v] + [v]
    R = ring.with_order(MonomialOrder("grevlex", perm=perm))
    gb = I.groebner_basis(R.order)
    out = []
    for g in gb:
        k = min(e[v] for e, _ in g.terms())
        if k:
            e = [0] * n
            e[v] = k
            g = divide_exact(g, R.monomial(e))
        out.append(g.to_ring(ring))
    return Ideal(ring, out)


def saturate(I: Ideal, f, max_iter=None) -> Ideal:
    """(I : f^inf).  Monomials use the grevlex trick; otherwise I <- I : f to a fixpoint."""
    f = _as_poly(I.ring, f)
    if not f:
        raise ValueError("cannot saturate by zero")
    if f.is_constant():
        return Ideal(I.ring, I.gens)
    exps = _monomial_support(f)
    if exps is not None and I.homogeneous:
        J = I
        for v, e in enumerate(exps):
            if e:
                J = _saturate_variable(J, v)
        return J
    if max_iter is None:
        max_iter = max(1, 2 * max(I.max_degree(), f.degree()) * I.ring.nvars)
    cur = I
    for _ in range(max_iter):
        nxt = quotient(cur, f)
        if nxt.groebner_basis() == Ideal(I.ring, cur.gens).groebner_basis():
            return nxt
        cur = nxt
    raise ComputationAborted(f"saturation did not stabilise within {max_iter} steps")


def eliminate(I: Ideal, variables) -> Ideal:
    """I cap k[remaining variables]; generators stay in I's ring."""
    ring = I.ring
    idx = sorted({ring.index[v] if isinstance(v, str) else int(v) for v in variables})
    if not idx:
        return Ideal(ring, I.gens)
    rest = [k for k in range(ring.nvars) if k not in idx]
    order = block_order(len(idx), "grevlex", perm=idx + rest)
    gb = I.groebner_basis(order)
    keep = [g for g in gb if not any(g.degree_in(v) > 0 for v in idx)]
    return Ideal(ring, [g.to_ring(ring) for g in keep])


def kernel_of_map(phi) -> Ideal:
    """Kernel of a ring map k[x] -> k[y] through the graph ideal (x_i - phi(x_i))."""
    src, tgt = phi.source, phi.target
    names = []
    rename = {}
    for nm in tgt.names:
        new = nm if nm not in src.index else nm + "_t"
        while new in src.index:
            new += "_"
        rename[nm] = new
        names.append(new)
    R = PolyRing(tuple(names) + src.names, src.field,
                 degrees=((1,) * len(names)) + src.degrees)
    gens = []
    for nm, im in zip(src.names, phi.images):
        gens.append(R.var(nm) - im.to_ring(R, rename))
    J = eliminate(Ideal(R, gens), names)
    return Ideal(src, [g.to_ring(src) for g in J.gens])


def ideal_arith(I: Ideal, J=None, op="sum", k=None) -> Ideal:
    if op == "sum":
        return ideal_sum(I, J)
    if op == "product":
        return ideal_product(I, J)
    if op == "power":
        return ideal_power(I, k)
    if op == "intersection":
        return intersection(I, J)
    raise ValueError(f"unknown ideal operation {op!r}")


def same_ideal(I: Ideal, J: Ideal) -> bool:
    return I.groebner_basis() == Ideal(I.ring, [g.to_ring(I.ring) for g in J.gens]).groebner_basis()
