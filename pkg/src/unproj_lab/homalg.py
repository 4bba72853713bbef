"""Graded free modules, minimal free resolutions, Betti tables and Hilbert data.

Minimal resolutions are built one syzygy module at a time.  Each step runs a
homogeneous Buchberger computation on the extended vectors ``(h_j, e_j)``
whose ``h``-part outranks the tracking part; elements whose ``h``-part reduces
away are syzygies.  Because degrees are processed in increasing order and the
tracking-part pairs of a degree are handled first, every syzygy that survives
reduction is a new minimal generator, so no separate pruning pass is needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import kernels
from .groebner import Buchberger, Ideal
from .polyring import FIELD_MASK, Polynomial, PolyRing


# ---------------------------------------------------------------------------
# free modules and maps

class GradedFreeModule:
    """S(-a_1) + ... + S(-a_r); ``degrees`` holds the generator degrees a_i."""

    def __init__(self, ring: PolyRing, degrees):
        self.ring = ring
        self.degrees = tuple(int(a) for a in degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def twists(self) -> tuple:
        return tuple(-a for a in self.degrees)

    def __repr__(self):
        return f"GradedFreeModule(rank={self.rank}, degrees={list(self.degrees)})"


class ModuleMap:
    """A graded map source -> target; ``columns[j]`` is the image of source generator j."""

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, columns):
        cols = [tuple(c) for c in columns]
        if len(cols) != source.rank:
            raise ValueError("one column per source generator is required")
        for j, col in enumerate(cols):
            if len(col) != target.rank:
                raise ValueError("column length does not match the target rank")
            for i, f in enumerate(col):
                if f and (not f.is_homogeneous()
                          or f.degree() != source.degrees[j] - target.degrees[i]):
                    raise ValueError(f"entry ({i},{j}) has the wrong degree")
        self.source = source
        self.target = target
        self.columns = cols

    def entry(self, i, j) -> Polynomial:
        return self.columns[j][i]

    def has_unit_entries(self) -> bool:
        return any(f and f.is_constant() for col in self.columns for f in col)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        R = self.target.ring
        cols = []
        for col in other.columns:
            out = [R.zero() for _ in range(self.target.rank)]
            for k, c in enumerate(col):
                if c:
                    for i, f in enumerate(self.columns[k]):
                        if f:
                            out[i] = out[i] + c * f
            cols.append(tuple(out))
        return ModuleMap(other.source, self.target, cols)

    def is_zero(self) -> bool:
        return all(not f for col in self.columns for f in col)


class SubquotientModule:
    """(image of ``gens`` + image of ``relations``) / image of ``relations`` inside a free module."""

    def __init__(self, ambient: GradedFreeModule, gens, relations=(), shift: int = 0):
        self.ambient = ambient
        self.ring = ambient.ring
        self.gens = [tuple(g) for g in gens]
        self.relations = [tuple(r) for r in relations]
        self.shift = shift

    @classmethod
    def from_ideals(cls, K: Ideal, L: Ideal | None = None, shift: int = 0):
        """The module (K + L)/L twisted so that degrees move up by ``shift``."""
        A = GradedFreeModule(K.ring, [0])
        return cls(A, [(g,) for g in K.gens], [(g,) for g in (L.gens if L else ())], shift)


# ---------------------------------------------------------------------------
# packing vectors into module monomials

class _Codec:
    """Vectors over ``ring`` <-> packed module polynomials with per-component offsets."""

    def __init__(self, ring: PolyRing, offsets):
        self.ring = ring
        self.lay = ring.layout
        self.offsets = list(offsets)

    def pack(self, vec, extra=()):
        terms = {}
        for c, f in enumerate(vec):
            if f:
                off = self.offsets[c]
                for m, a in zip(f.monos, f.coeffs):
                    terms[m + off] = a
        for m, a in extra:
            terms[m] = a
        items = sorted(terms.items(), reverse=True)
        return [m for m, _ in items], [a for _, a in items]

    def unpack(self, monos, coeffs, comps=None):
        lay = self.lay
        cs = lay.comp_shift
        rank = len(self.offsets)
        acc = [dict() for _ in range(rank)]
        for m, a in zip(monos, coeffs):
            c = (m >> cs) & FIELD_MASK
            if comps is not None:
                c = comps[c]
            acc[c][m - self.offsets[c]] = a
        return tuple(Polynomial._from_acc(self.ring, d) for d in acc)


def _offset(lay, prio: int, comp: int, degree: int) -> int:
    """Base offset of a free-module generator of the given degree."""
    return (prio << lay.prio_shift) + (comp << lay.comp_shift) + degree


def _one(p):
    return 1 if p else Fraction(1)


class _TrackedRun(Buchberger):
    """Buchberger on extended vectors (h | e); h-free results are syzygies.

    Syzygies are recorded but not inserted, so no pairs among them are formed.
    Together they generate the syzygy module of the inputs.
    """

    def __init__(self, lay, p, prio_bit):
        super().__init__(lay, p, module=True)
        self.prio_bit = prio_bit
        self.found = []

    def on_result(self, r, sugar, origin):
        if r is None:
            return
        if r.lead & self.prio_bit:
            self.insert(r, sugar)
        else:
            self.found.append(r.to_lists())


def _e_offsets(lay, leads, base_comp):
    """Schreyer offsets: each new generator copies the order rows and degree of its lead."""
    clear = (1 << lay.prio_shift) | lay.cmask | lay.expmask
    return [(ld & ~clear) + ((base_comp + k) << lay.comp_shift) for k, ld in enumerate(leads)]


def _syzygy_generators(ring, f_offsets, cols):
    """A (not necessarily minimal) generating set of Syz(cols), packed over E."""
    lay = ring.layout
    p = ring.field.p
    prio_bit = 1 << lay.prio_shift
    e_off = _e_offsets(lay, [mon[0] for mon, _ in cols], len(f_offsets))
    run = _TrackedRun(lay, p, prio_bit)
    for j, (mon, co) in enumerate(cols):
        run.add_input(run.basis.make(list(mon) + [e_off[j]], list(co) + [_one(p)]),
                      degree=mon[0] & FIELD_MASK)
    run.run()
    return e_off, run.found


def _module_min_gens(ring, offsets, fixed, cands):
    """Indices of ``cands`` forming a minimal generating set modulo the span of ``fixed``."""
    lay = ring.layout
    run = Buchberger(lay, ring.field.p, module=True)
    keep = []
    tag = {}
    orig = run.on_result

    def on_result(r, sugar, origin):
        if origin[0] == "input" and r is not None and origin[1] in tag:
            keep.append(tag[origin[1]])
        orig(r, sugar, origin)

    run.on_result = on_result
    for mon, co in fixed:
        run.add_input(run.basis.make(mon, co), degree=mon[0] & FIELD_MASK)
    order = sorted(range(len(cands)), key=lambda k: cands[k][0][0] & FIELD_MASK)
    for k in order:
        mon, co = cands[k]
        tag[run._seq] = k
        run.add_input(run.basis.make(mon, co), degree=mon[0] & FIELD_MASK)
    run.run()
    return sorted(keep)


def _module_gb(ring, offsets, packed):
    run = Buchberger(ring.layout, ring.field.p, module=True)
    for mon, co in packed:
        run.add_input(run.basis.make(mon, co), degree=mon[0] & FIELD_MASK)
    run.run()
    return run.reduced()


def _schreyer_level(ring, elems, nf):
    """Syzygies of a Groebner basis ``elems`` (packed over F with ``nf`` components).

    ``elems`` must be sorted so that index order refines the F-component order
    of the leads.  The returned syzygies form a Groebner basis for the induced
    Schreyer order, which is what makes the next level a plain repeat.
    """
    lay = ring.layout
    p = ring.field.p
    prio_bit = 1 << lay.prio_shift
    leads = [mon[0] for mon, _ in elems]
    e_off = _e_offsets(lay, leads, nf)
    basis = kernels.make_basis(lay, p)
    for k, (mon, co) in enumerate(elems):
        basis.add(basis.make(list(mon) + [e_off[k]], list(co) + [_one(p)]))
    groups = {}
    for k, ld in enumerate(leads):
        groups.setdefault(lay.comp(ld), []).append(k)
    decode = lay.decode
    exps = [decode(ld) for ld in leads]
    out = []
    for idxs in groups.values():
        for a, i in enumerate(idxs):
            ei = exps[i]
            cands = []
            for j in idxs[:a]:
                q = tuple(max(x, y) - x for x, y in zip(ei, exps[j]))
                cands.append((sum(q), j, q))
            cands.sort()
            kept = []
            for _, j, q in cands:
                if any(all(u <= v for u, v in zip(q2, q)) for q2, _ in kept):
                    continue
                kept.append((q, j))
            for q, j in kept:
                L = lay.lcm(leads[i], leads[j])
                r = basis.spair(i, j, L, False)
                if r is None or r.lead & prio_bit:
                    raise AssertionError("Schreyer step met a non-Groebner input")
                out.append(r.to_lists())
    return e_off, out


def _to_columns(ring, offsets, packed, nf=0):
    """Packed vectors -> sparse columns {component: Polynomial}."""
    lay = ring.layout
    cs = lay.comp_shift
    cols = []
    for mon, co in packed:
        acc = {}
        for m, a in zip(mon, co):
            c = ((m >> cs) & FIELD_MASK) - nf
            acc.setdefault(c, {})[m - offsets[c]] = a
        cols.append({c: Polynomial._from_acc(ring, d) for c, d in acc.items()})
    return cols


def _frame(ring, top_degrees, packed_gens, max_length=None):
    """Non-minimal Schreyer resolution of the submodule spanned by ``packed_gens``.

    Returns (degrees, maps): degrees[0] = top_degrees, maps[i] sends generator
    s of level i+1 to a sparse column over level i.
    """
    lay = ring.layout
    prio_bit = 1 << lay.prio_shift
    cs = lay.comp_shift
    nf = len(top_degrees)
    f_off = [_offset(lay, 1, c, a) for c, a in enumerate(top_degrees)]
    elems = _module_gb(ring, f_off, packed_gens)
    elems.sort(key=lambda e: (lay.comp(e[0][0]), e[0][0]))
    degrees = [list(top_degrees)]
    maps = []
    level = 0
    while elems:
        degrees.append([mon[0] & FIELD_MASK for mon, _ in elems])
        maps.append(_to_columns(ring, f_off, elems))
        level += 1
        if max_length is not None and level > max_length:
            break
        if level > ring.nvars + 2:
            raise AssertionError("Schreyer resolution longer than expected")
        e_off, syz = _schreyer_level(ring, elems, nf)
        # E becomes the next F: renumber components from 0 and raise the prio bit
        shift = nf << cs
        f_off = [o - shift + prio_bit for o in e_off]
        nxt = []
        for mon, co in syz:
            nxt.append(([m - shift + prio_bit for m in mon], co))
        nxt.sort(key=lambda e: (lay.comp(e[0][0]), e[0][0]))
        nf = len(elems)
        elems = nxt
    return degrees, maps


def _prune(ring, degrees, maps, first=1):
    """Cancel unit entries of maps[first:], giving a minimal complex.

    A unit c at (r, s) of d: C_{i+1} -> C_i splits off e_s -> e_r; after the
    column operations clearing row r, generator s and r are dropped and the
    neighbouring maps just lose the matching row or column.
    """
    F = ring.field
    p = F.p
    alive = [set(range(len(d))) for d in degrees]
    # reverse index: rows -> columns holding them
    rindex = []
    for d in maps:
        ri = {}
        for s, col in enumerate(d):
            for r in col:
                ri.setdefault(r, set()).add(s)
        rindex.append(ri)
    for i in range(first, len(maps)):
        d = maps[i]
        ri = rindex[i]
        src_deg = degrees[i + 1]
        tgt_deg = degrees[i]
        work = [s for s in range(len(d))]
        while work:
            s = work.pop()
            if s not in alive[i + 1]:
                continue
            col = d[s]
            piv = None
            for r, f in col.items():
                if tgt_deg[r] == src_deg[s] and f:
                    piv = r
                    break
            if piv is None:
                continue
            r = piv
            c = col[r].coeffs[0]
            cinv = F.inv(c)
            for t in list(ri.get(r, ())):
                if t == s or t not in alive[i + 1]:
                    continue
                ct = d[t]
                b = ct.get(r)
                if not b:
                    continue
                fac = b.scale(cinv)
                for r2, g in col.items():
                    new = ct.get(r2, ring.zero()) - fac * g
                    if new:
                        if r2 not in ct:
                            ri.setdefault(r2, set()).add(t)
                        ct[r2] = new
                    else:
                        ct.pop(r2, None)
                        ri.get(r2, set()).discard(t)
                work.append(t)
            # drop generator s of level i+1 and r of level i
            for r2 in col:
                ri.get(r2, set()).discard(s)
            d[s] = {}
            alive[i + 1].discard(s)
            alive[i].discard(r)
            if i + 1 < len(maps):
                nxt = maps[i + 1]
                for u in list(rindex[i + 1].get(s, ())):
                    nxt[u].pop(s, None)
                rindex[i + 1].pop(s, None)
            prev = maps[i - 1]
            for r3 in prev[r]:
                rindex[i - 1].get(r3, set()).discard(r)
            prev[r] = {}
    return alive


def _assemble(ring, degrees, maps, alive, start, shift):
    """Dense ModuleMaps of the pruned complex starting at level ``start``."""
    mods = []
    pos = []
    for lv in range(start, len(degrees)):
        keep = sorted(alive[lv], key=lambda k: (degrees[lv][k], k))
        if not keep:
            break
        pos.append({k: n for n, k in enumerate(keep)})
        mods.append(GradedFreeModule(ring, [degrees[lv][k] + shift for k in keep]))
    out = []
    for n in range(1, len(mods)):
        lv = start + n
        d = maps[lv - 1]
        tgt = pos[n - 1]
        cols = []
        for s in sorted(pos[n], key=pos[n].get):
            vec = [ring.zero()] * mods[n - 1].rank
            for r, f in d[s].items():
                if r in tgt:
                    vec[tgt[r]] = f
                elif f:
                    raise AssertionError("pruned complex lost an entry")
            cols.append(tuple(vec))
        out.append(ModuleMap(mods[n], mods[n - 1], cols))
    return mods, out, pos


# ---------------------------------------------------------------------------
# resolutions

class FreeResolution:
    """F_0 <- F_1 <- ... ; ``maps[i]`` is d_{i+1}: F_{i+1} -> F_i.

    ``augmentation`` lists the images of F_0's generators in the ambient module.
    """

    def __init__(self, free_modules, maps, augmentation=None, ambient=None):
        self.modules = list(free_modules)
        self.maps = list(maps)
        self.augmentation = augmentation
        self.ambient = ambient

    @property
    def length(self) -> int:
        return len([F for F in self.modules if F.rank]) - 1

    def ranks(self) -> list:
        return [F.rank for F in self.modules]

    def betti(self) -> "BettiTable":
        entries = {}
        for i, F in enumerate(self.modules):
            for a in F.degrees:
                entries[(i, a - i)] = entries.get((i, a - i), 0) + 1
        return BettiTable(entries)

    def is_complex(self) -> bool:
        for d1, d2 in zip(self.maps, self.maps[1:]):
            if not d1.compose(d2).is_zero():
                return False
        return True

    def is_minimal(self) -> bool:
        return not any(d.has_unit_entries() for d in self.maps)


def _vector_degree(vec, degrees):
    for f, a in zip(vec, degrees):
        if f:
            return f.degree() + a
    return None


def _check_homogeneous(vectors):
    for v in vectors:
        for f in v:
            if f and not f.is_homogeneous():
                raise ValueError("resolution needs homogeneous input")


def resolve(M, max_length=None) -> FreeResolution:
    """Minimal free resolution of an ideal (as a module) or of a SubquotientModule."""
    if isinstance(M, Ideal):
        ring = M.ring
        _check_homogeneous([(g,) for g in M.gens])
        if not M.gens:
            return FreeResolution([GradedFreeModule(ring, [])], [], [], GradedFreeModule(ring, [0]))
        lay = ring.layout
        codec = _Codec(ring, [_offset(lay, 1, 0, 0)])
        degrees, maps = _frame(ring, [0], [codec.pack((g,)) for g in M.gens],
                               None if max_length is None else max_length + 1)
        alive = _prune(ring, degrees, maps, first=1)
        mods, dmaps, pos = _assemble(ring, degrees, maps, alive, 1, 0)
        aug = [maps[0][k].get(0, ring.zero()) for k in sorted(pos[0], key=pos[0].get)]
        return FreeResolution(mods, dmaps, aug, GradedFreeModule(ring, [0]))
    ring = M.ring
    lay = ring.layout
    A = M.ambient
    _check_homogeneous(M.gens + M.relations)
    amb_off = [_offset(lay, 1, c, a) for c, a in enumerate(A.degrees)]
    codec = _Codec(ring, amb_off)
    gens = [g for g in M.gens if any(g)]
    rels = [r for r in M.relations if any(r)]
    packed_r = [codec.pack(r) for r in rels]
    keep = _module_min_gens(ring, amb_off, packed_r, [codec.pack(g) for g in gens])
    gens = sorted((gens[k] for k in keep), key=lambda v: _vector_degree(v, A.degrees))
    if not gens:
        return FreeResolution([GradedFreeModule(ring, [])], [], [], A)
    deg0 = [_vector_degree(g, A.degrees) for g in gens]
    # relations on the chosen generators: project Syz(gens | rels) onto the gens part
    cols = [codec.pack(g) for g in gens] + packed_r
    e_off, syz = _syzygy_generators(ring, amb_off, cols)
    r0 = len(gens)
    nf = len(amb_off)
    f0_off = [_offset(lay, 1, c, a) for c, a in enumerate(deg0)]
    rel_packed = []
    for mon, co in syz:
        terms = [(m - e_off[c - nf] + f0_off[c - nf], a)
                 for m, a in zip(mon, co)
                 for c in ((m >> lay.comp_shift) & FIELD_MASK,) if c - nf < r0]
        if terms:
            terms.sort(reverse=True)
            rel_packed.append(([t[0] for t in terms], [t[1] for t in terms]))
    if not rel_packed:
        F0 = GradedFreeModule(ring, [d + M.shift for d in deg0])
        return FreeResolution([F0], [], gens, A)
    degrees, maps = _frame(ring, deg0, rel_packed,
                           None if max_length is None else max_length)
    alive = _prune(ring, degrees, maps, first=1)
    if len(alive[0]) != len(deg0):
        raise AssertionError("presentation was not minimal")
    mods, dmaps, _ = _assemble(ring, degrees, maps, alive, 0, M.shift)
    return FreeResolution(mods, dmaps, gens, A)


minimal_free_resolution = resolve


def syzygies(columns, target_degrees=None) -> ModuleMap:
    """Minimal generators of the syzygy module of the given vectors (or polynomials)."""
    cols = [c if isinstance(c, tuple) else (c,) for c in columns]
    ring = next(f.ring for c in cols for f in c if f)
    if target_degrees is None:
        target_degrees = [0] * len(cols[0])
    lay = ring.layout
    t_off = [_offset(lay, 1, c, a) for c, a in enumerate(target_degrees)]
    tc = _Codec(ring, t_off)
    packed = [tc.pack(v) for v in cols]
    src_deg = [_vector_degree(v, target_degrees) for v in cols]
    e_off, syz = _syzygy_generators(ring, t_off, packed)
    nf = len(t_off)
    s_off = [_offset(lay, 1, c, a) for c, a in enumerate(src_deg)]
    repacked = []
    for mon, co in syz:
        terms = sorted(((m - e_off[((m >> lay.comp_shift) & FIELD_MASK) - nf]
                         + s_off[((m >> lay.comp_shift) & FIELD_MASK) - nf], a)
                        for m, a in zip(mon, co)), reverse=True)
        repacked.append(([t[0] for t in terms], [t[1] for t in terms]))
    keep = _module_min_gens(ring, s_off, [], repacked)
    sc = _Codec(ring, s_off)
    vecs = [sc.unpack(*repacked[k]) for k in keep]
    vecs.sort(key=lambda v: _vector_degree(v, src_deg))
    F = GradedFreeModule(ring, src_deg)
    Z = GradedFreeModule(ring, [_vector_degree(v, src_deg) for v in vecs])
    return ModuleMap(Z, F, vecs)


# ---------------------------------------------------------------------------
# Betti tables

class BettiTable:
    """beta_{i,j} with F_i = sum_j S(-i-j)^beta_{i,j}."""

    def __init__(self, entries=None):
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        for v in self.entries.values():
            if v < 0:
                raise ValueError("Betti numbers are nonnegative")

    def __getitem__(self, key):
        return self.entries.get(tuple(key), 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items())))

    def __bool__(self):
        return bool(self.entries)

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return BettiTable(out)

    @property
    def reg(self):
        return max((j for (_, j) in self.entries), default=None)

    @property
    def pd(self):
        return max((i for (i, _) in self.entries), default=0)

    def shift(self, di=0, dj=0) -> "BettiTable":
        return BettiTable({(i + di, j + dj): v for (i, j), v in self.entries.items()})

    def quotient_table(self) -> "BettiTable":
        """Table of S/I from the table of a proper ideal I."""
        out = {(i + 1, j - 1): v for (i, j), v in self.entries.items()}
        out[(0, 0)] = 1
        return BettiTable(out)

    def euler_polynomial(self) -> dict:
        """sum (-1)^i beta_{i,j} t^{i+j} as {exponent: coefficient}."""
        out = {}
        for (i, j), v in self.entries.items():
            out[i + j] = out.get(i + j, 0) + (-1) ** i * v
        return {k: v for k, v in out.items() if v}

    def total(self) -> int:
        return sum(self.entries.values())

    def to_json_obj(self) -> dict:
        ents = [{"i": i, "j": j, "beta": v} for (i, j), v in sorted(self.entries.items())]
        return {"entries": ents, "reg": self.reg, "pd": self.pd}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj) -> "BettiTable":
        return cls({(e["i"], e["j"]): e["beta"] for e in obj["entries"]})

    def _grid(self, transposed=False):
        if not self.entries:
            return [["j\\i"]]
        imax = max(i for i, _ in self.entries)
        js = [j for _, j in self.entries]
        jmin, jmax = min(js), max(js)
        if not transposed:
            head = ["j\\i"] + [str(i) for i in range(imax + 1)]
            rows = [head]
            for j in range(jmin, jmax + 1):
                rows.append([str(j)] + [str(self[(i, j)] or "") for i in range(imax + 1)])
        else:
            head = ["i\\j"] + [str(j) for j in range(jmin, jmax + 1)]
            rows = [head]
            for i in range(imax + 1):
                rows.append([str(i)] + [str(self[(i, j)] or "") for j in range(jmin, jmax + 1)])
        return rows

    def to_text(self, transposed=False) -> str:
        rows = self._grid(transposed)
        w = max(len(c) for r in rows for c in r)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in rows)

    def to_csv(self, transposed=False) -> str:
        return "\n".join(",".join(r) for r in self._grid(transposed))

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.entries.items()))})"


@dataclass
class BettiInvariants:
    table: BettiTable
    reg: int | None
    pd: int
    depth: int
    nvars: int
    # for ideals, the matching values of the quotient ring S/I
    pd_quotient: int | None = None
    depth_quotient: int | None = None
    reg_quotient: int | None = None
    resolution: FreeResolution | None = field(default=None, repr=False)


def betti_table(M) -> BettiTable:
    return resolve(M).betti()


def betti_invariants(M) -> BettiInvariants:
    """Betti table with reg, pd and depth (Auslander-Buchsbaum) read off it.

    For an ideal I the table is that of the module I; ``pd_quotient`` and
    ``depth_quotient`` refer to S/I.
    """
    res = resolve(M)
    B = res.betti()
    ring = res.modules[0].ring
    n = ring.nvars
    if not B:
        return BettiInvariants(B, None, 0, n, n, 0 if isinstance(M, Ideal) else None,
                               n if isinstance(M, Ideal) else None, None, res)
    pd = B.pd
    inv = BettiInvariants(B, B.reg, pd, n - pd, n, resolution=res)
    if isinstance(M, Ideal):
        inv.pd_quotient = pd + 1
        inv.depth_quotient = n - pd - 1
        inv.reg_quotient = B.reg - 1
    return inv


# ---------------------------------------------------------------------------
# Hilbert series

def _min_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]


def _trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def hilbert_numerator_monomial(gens, nvars) -> list:
    """Numerator N(t) of HS(S/(gens)) = N(t)/(1-t)^nvars for monomial generators."""
    return _trim(_hnum(tuple(_min_monomials([tuple(g) for g in gens])), nvars, {}))


def _hnum(gens, n, memo):
    if not gens:
        return [1]
    key = gens
    if key in memo:
        return memo[key]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # pairwise coprime generators: product formula
    used = [0] * n
    coprime = True
    for g in gens:
        for v, e in enumerate(g):
            if e:
                if used[v]:
                    coprime = False
                used[v] = 1
    if coprime:
        res = [1]
        for g in gens:
            d = sum(g)
            res = _poly_mul(res, [1] + [0] * (d - 1) + [-1])
        memo[key] = res
        return res
    # pivot on the most frequent variable of the mixed generators, median exponent
    mixed = [g for g in gens if sum(1 for e in g if e) > 1]
    counts = [0] * n
    for g in mixed:
        for v, e in enumerate(g):
            if e:
                counts[v] += 1
    v = max(range(n), key=lambda k: counts[k])
    exps = sorted(g[v] for g in mixed if g[v])
    e = exps[len(exps) // 2]
    piv = tuple(e if k == v else 0 for k in range(n))
    plus = _min_monomials([g for g in gens if g[v] < e] + [piv])
    colon = _min_monomials([tuple(max(0, x - (e if k == v else 0)) for k, x in enumerate(g))
                            for g in gens])
    a = _hnum(tuple(plus), n, memo)
    b = _hnum(tuple(colon), n, memo)
    res = _poly_add(a, [0] * e + b)
    memo[key] = res
    return res


@dataclass
class HilbertData:
    numerator: list
    nvars: int
    dim: int          # Krull dimension
    degree: int
    reduced: list     # numerator after removing all (1-t) factors

    @property
    def projective_dim(self) -> int:
        return self.dim - 1

    def series(self, upto: int) -> list:
        """Coefficients of the Hilbert series for degrees 0..upto."""
        out = []
        for d in range(upto + 1):
            out.append(self.value(d))
        return out

    def value(self, d: int) -> int:
        n = self.nvars
        s = 0
        for k, c in enumerate(self.numerator):
            if c and d - k >= 0:
                s += c * comb(d - k + n - 1, n - 1) if n > 0 else (c if d == k else 0)
        return s

    def polynomial_value(self, d: int) -> int:
        D = self.dim
        if D <= 0:
            return 0
        return sum(c * comb(d - k + D - 1, D - 1) for k, c in enumerate(self.reduced))

    def polynomial_coefficients(self) -> list:
        """Hilbert polynomial as rational coefficients [c_0, c_1, ...] in d."""
        D = self.dim
        if D <= 0:
            return [Fraction(0)]
        pts = [(x, self.polynomial_value(x)) for x in range(D)]
        coeffs = [Fraction(0)] * D
        for i, (xi, yi) in enumerate(pts):
            basis = [Fraction(1)]
            denom = Fraction(1)
            for j, (xj, _) in enumerate(pts):
                if j != i:
                    basis = [Fraction(0)] + basis
                    for k in range(len(basis) - 1):
                        basis[k] -= xj * basis[k + 1]
                    denom *= (xi - xj)
            for k in range(D):
                coeffs[k] += yi * basis[k] / denom
        return coeffs


def _hilbert_from_numerator(num, n) -> HilbertData:
    num = _trim(list(num))
    if all(c == 0 for c in num):
        return HilbertData([0], n, -1, 0, [0])
    q = list(num)
    k = 0
    while sum(q) == 0:
        # divide by (1 - t)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = _trim(out) if out else [0]
        k += 1
    return HilbertData(num, n, n - k, sum(q), q)


def hilbert(M) -> HilbertData:
    """Hilbert data of S/I (for an Ideal) or of a SubquotientModule."""
    if isinstance(M, Ideal):
        lead = M.lead_monomials()
        return _hilbert_from_numerator(hilbert_numerator_monomial(lead, M.ring.nvars), M.ring.nvars)
    if isinstance(M, SubquotientModule):
        return _module_hilbert(M)
    raise TypeError("hilbert() takes an Ideal or a SubquotientModule")


def _module_hilbert(M: SubquotientModule) -> HilbertData:
    # HS(M) = HS(A/rel) - HS(A/(gens+rel))
    ring = M.ring
    n = ring.nvars
    a = _quotient_module_numerator(M.ambient, M.relations)
    b = _quotient_module_numerator(M.ambient, M.gens + M.relations)
    num = _poly_add(a, [-x for x in b])
    if M.shift:
        if M.shift > 0:
            num = [0] * M.shift + num
        else:
            raise ValueError("negative shifts are not supported")
    return _hilbert_from_numerator(num, n)


def module_gb_leads(A: GradedFreeModule, vectors):
    """Leading (component, exponents) of a Groebner basis of the submodule spanned by vectors."""
    ring = A.ring
    lay = ring.layout
    off = [_offset(lay, 0, c, a) for c, a in enumerate(A.degrees)]
    codec = _Codec(ring, off)
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return []
    run = Buchberger(lay, ring.field.p, module=True)
    for v in vecs:
        mon, co = codec.pack(v)
        run.add_input(run.basis.make(mon, co), degree=mon[0] & FIELD_MASK)
    run.run()
    out = []
    for g in run.G:
        L = run.leads[g]
        c = lay.comp(L)
        out.append((c, lay.decode(L - off[c])))
    return out


def _quotient_module_numerator(A: GradedFreeModule, vectors):
    n = A.ring.nvars
    leads = module_gb_leads(A, vectors)
    total = [0]
    for c, a in enumerate(A.degrees):
        mons = [e for cc, e in leads if cc == c]
        num = hilbert_numerator_monomial(mons, n)
        if a < 0:
            raise ValueError("negative generator degrees are not supported")
        total = _poly_add(total, [0] * a + num)
    return _trim(total)


def hilbert_series_numerator_from_betti(B: BettiTable) -> dict:
    return B.euler_polynomial()


# ---------------------------------------------------------------------------
# brute-force Hilbert function

def hilbert_function_oracle(I: Ideal, d: int, max_monomials: int = 2_000_000) -> int:
    """dim (S/I)_d by linear algebra on the degree-d slice of I (no Groebner bases)."""
    from .linalg import slice_rank
    ring = I.ring
    if not I.homogeneous:
        raise ValueError("oracle needs a homogeneous ideal")
    total = comb(d + ring.nvars - 1, ring.nvars - 1)
    if total > max_monomials:
        raise MemoryError(f"degree-{d} slice has {total} monomials")
    return total - slice_rank(I, d)


# ---------------------------------------------------------------------------
# cancellation principle

@dataclass
class CancellationResult:
    verdict: str               # "cancellation", "refuted", "necessary-condition-only"
    moves: list                # (i, j, k, l, amount)
    mismatch: dict | None = None


def cancellation_check(seq: dict, target: BettiTable, max_states: int = 10_000) -> CancellationResult:
    """Can ``target`` be written as the sum of a cancellation of the table sequence ``seq``?

    A move (i, j, k, l), l > 0, subtracts the same amount from (B_k)_{i,j} and
    (B_{k-l})_{i-1,j+1}.
    """
    seq = {k: B for k, B in seq.items() if B}
    lhs = {}
    for B in seq.values():
        for e, c in B.euler_polynomial().items():
            lhs[e] = lhs.get(e, 0) + c
    rhs = target.euler_polynomial()
    keys = set(lhs) | set(rhs)
    diff = {e: lhs.get(e, 0) - rhs.get(e, 0) for e in keys if lhs.get(e, 0) != rhs.get(e, 0)}
    if diff:
        return CancellationResult("refuted", [], diff)
    total = BettiTable()
    for B in seq.values():
        total = total + B
    need = {}
    for key in set(total.entries) | set(target.entries):
        r = total[key] - target[key]
        if r < 0:
            return CancellationResult("refuted", [], {"entry": key, "excess": r})
        if r:
            need[key] = r
    if not need:
        return CancellationResult("cancellation", [])
    # per total degree t the number of moves between homological i and i-1 is forced
    by_t = {}
    for (i, j), r in need.items():
        by_t.setdefault(i + j, {})[i] = r
    plan = []
    for t, rs in by_t.items():
        imax = max(rs)
        carry = 0
        for i in range(0, imax + 2):
            r = rs.get(i, 0)
            m_i = carry
            m_next = r - m_i
            if m_next < 0:
                return CancellationResult("refuted", [], {"degree": t, "index": i})
            if m_next:
                plan.append((i + 1, t - i - 1, m_next))
            carry = m_next
        if carry:
            return CancellationResult("refuted", [], {"degree": t})
    # assign each forced move count to (k, k-l) pairs by backtracking over capacities
    cap = {}
    for k, B in seq.items():
        for key, v in B.entries.items():
            cap[(k, key)] = v
    ks = sorted(seq)
    states = [0]
    moves = []

    def place(idx):
        if idx == len(plan):
            return True
        i, j, amount = plan[idx]
        return split(idx, i, j, amount)

    def split(idx, i, j, amount):
        if amount == 0:
            return place(idx + 1)
        states[0] += 1
        if states[0] > max_states:
            raise _SearchBudget
        for k in reversed(ks):
            up = cap.get((k, (i, j)), 0)
            if not up:
                continue
            for k2 in ks:
                if k2 >= k:
                    break
                lo = cap.get((k2, (i - 1, j + 1)), 0)
                if not lo:
                    continue
                a = min(up, lo, amount)
                for take in range(a, 0, -1):
                    cap[(k, (i, j))] -= take
                    cap[(k2, (i - 1, j + 1))] -= take
                    moves.append((i, j, k, k - k2, take))
                    if split(idx, i, j, amount - take):
                        return True
                    moves.pop()
                    cap[(k, (i, j))] += take
                    cap[(k2, (i - 1, j + 1))] += take
        return False

    try:
        ok = place(0)
    except _SearchBudget:
        return CancellationResult("necessary-condition-only", [])
    if ok:
        return CancellationResult("cancellation", list(moves))
    return CancellationResult("refuted", [], {"reason": "no assignment of forced moves"})


class _SearchBudget(Exception):
    pass
