import json
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import FIXTURES, dense_rank, koszul, twisted_cubic
from unproj_lab import families
from unproj_lab.groebner import Ideal
from unproj_lab.homalg import (BettiTable, SubquotientModule, betti_invariants,
                               cancellation_check, hilbert, hilbert_function_oracle, resolve,
                               syzygies)
from unproj_lab.polyring import PolyRing

P = 101


# ---------------------------------------------------------------------------
# independent Betti oracle for monomial ideals (upper Koszul simplicial complex)

def _in_monomial_ideal(e, gens):
    return any(all(a >= b for a, b in zip(e, g)) for g in gens)


def _reduced_homology_dims(faces_by_dim, top):
    # faces_by_dim[k] lists faces (sorted tuples) of dimension k, k = -1..top
    ranks = {}
    for k in range(0, top + 1):
        rows = faces_by_dim.get(k - 1, [])
        cols = faces_by_dim.get(k, [])
        if not rows or not cols:
            ranks[k] = 0
            continue
        idx = {f: r for r, f in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for c, F in enumerate(cols):
            for s in range(len(F)):
                M[idx[F[:s] + F[s + 1:]]][c] = (-1) ** s
        ranks[k] = dense_rank(M, P)
    out = {}
    for k in range(-1, top + 1):
        n = len(faces_by_dim.get(k, []))
        out[k] = n - ranks.get(k, 0) - ranks.get(k + 1, 0)
    return out


def monomial_betti_oracle(gens, n):
    gens = [tuple(g) for g in gens]
    lcms = set()
    for r in range(1, len(gens) + 1):
        for sub in combinations(gens, r):
            lcms.add(tuple(max(c) for c in zip(*sub)))
    table = {}
    for b in lcms:
        support = [v for v in range(n) if b[v] > 0]
        faces = {}
        for r in range(0, len(support) + 1):
            for F in combinations(support, r):
                e = list(b)
                for v in F:
                    e[v] -= 1
                if _in_monomial_ideal(e, gens):
                    faces.setdefault(r - 1, []).append(F)
        h = _reduced_homology_dims(faces, len(support) - 1)
        for k, dim in h.items():
            if dim:
                i = k + 1
                j = sum(b) - i
                table[(i, j)] = table.get((i, j), 0) + dim
    return table


monomial_gens = st.lists(st.tuples(*[st.integers(0, 3)] * 3).filter(any), min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(monomial_gens)
def test_monomial_betti_tables_match_koszul_complex_oracle(gens):
    R = PolyRing("x y z", P)
    I = Ideal(R, [R.monomial(g) for g in gens])
    mins = [g for g in set(gens) if not any(h != g and all(a >= b for a, b in zip(g, h))
                                            for h in set(gens))]
    assert betti_invariants(I).table.entries == monomial_betti_oracle(mins, 3)


# ---------------------------------------------------------------------------
# known tables


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_koszul_table(n):
    B = betti_invariants(koszul(n))
    assert B.table.entries == {(i, 1): comb(n, i + 1) for i in range(n)}
    assert B.pd_quotient == n and B.reg == 1


def test_twisted_cubic_table():
    B = betti_invariants(twisted_cubic())
    assert B.table.entries == {(0, 2): 3, (1, 2): 2}
    assert B.reg == 2 and B.pd_quotient == 2 and B.depth_quotient == 2


@pytest.mark.parametrize("d,reg", [(2, 3), (3, 8), (4, 15)])
def test_caviglia_regularity(d, reg):
    B = betti_invariants(families.caviglia(d))
    assert B.reg == reg and B.pd_quotient == 4


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_resolution_is_minimal_complex_with_correct_euler_characteristic(name):
    I = FIXTURES[name](32003)
    res = resolve(I)
    assert res.is_complex()
    assert res.is_minimal()
    # Hilbert numerator of S/I (from the lead-term ideal) = 1 - euler(I)
    num = hilbert(I).numerator
    eul = res.betti().euler_polynomial()
    expect = {0: 1}
    for k, v in eul.items():
        expect[k] = expect.get(k, 0) - v
    got = {k: v for k, v in enumerate(num) if v}
    assert got == {k: v for k, v in expect.items() if v}


def test_hilbert_of_hypersurface():
    R = PolyRing("x y z", P)
    h = hilbert(Ideal(R, [R("x^3 + y^3 + z^3")]))
    assert h.degree == 3 and h.dim == 2
    assert h.series(5) == [comb(d + 2, 2) - (comb(d - 1, 2) if d >= 3 else 0) for d in range(6)]


@pytest.mark.parametrize("name", ["twisted_cubic", "caviglia3", "elliptic_quartic", "sextic_T"])
def test_hilbert_matches_macaulay_oracle(name):
    I = FIXTURES[name](32003)
    h = hilbert(I)
    for d in range(12):
        assert hilbert_function_oracle(I, d) == h.value(d)


def test_subquotient_module_hilbert_and_betti():
    R = PolyRing("x y", P)
    K = Ideal(R, [R("x"), R("y")])
    L = Ideal(R, [R("x^2"), R("y^2")])
    M = SubquotientModule.from_ideals(K, L, shift=1)
    h = hilbert(M)
    # K/L has basis x, y, xy in degrees 1, 1, 2; the shift moves them up one
    assert h.series(5) == [0, 0, 2, 1, 0, 0]
    B = resolve(M).betti()
    assert sum((-1) ** i * v for (i, j), v in B.entries.items()) == 0
    assert B[(0, 2)] == 2


def test_syzygies_of_twisted_cubic():
    I = twisted_cubic()
    S = syzygies(list(I.gens))
    assert S.source.rank == 2
    assert all(d == 3 for d in S.source.degrees)


def test_betti_json_schema_roundtrip():
    B = BettiTable({(0, 2): 3, (1, 2): 2})
    obj = json.loads(B.to_json())
    assert set(obj) == {"entries", "reg", "pd"}
    assert obj["entries"] == [{"i": 0, "j": 2, "beta": 3}, {"i": 1, "j": 2, "beta": 2}]
    assert BettiTable.from_json_obj(obj) == B


def test_betti_text_layouts():
    B = BettiTable({(0, 2): 3, (1, 2): 2})
    assert B.to_text().splitlines()[0].split() == ["j\\i", "0", "1"]
    assert B.to_text(transposed=True).splitlines()[0].split() == ["i\\j", "2"]
    assert B.to_csv() == "j\\i,0,1\n2,3,2"


def test_quotient_table_and_shift():
    B = BettiTable({(0, 2): 3, (1, 2): 2})
    assert B.quotient_table().entries == {(0, 0): 1, (1, 1): 3, (2, 1): 2}
    assert B.shift(1, 1).entries == {(1, 3): 3, (2, 3): 2}


def test_cancellation_identity_and_refutation():
    M0 = BettiTable({(0, 3): 1})
    M1 = BettiTable({(0, 2): 2, (1, 2): 1, (1, 3): 1})
    target = BettiTable({(0, 2): 2, (1, 3): 1})
    r = cancellation_check({0: M0, 1: M1}, target)
    assert r.verdict == "cancellation"
    bad = cancellation_check({0: M0, 1: M1}, BettiTable({(0, 2): 5}))
    assert bad.verdict == "refuted"


def test_negative_betti_rejected():
    with pytest.raises(ValueError):
        BettiTable({(0, 1): -1})
