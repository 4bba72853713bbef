import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import dense_rank, twisted_cubic
from unproj_lab.groebner import Ideal
from unproj_lab.linalg import (CosetReducer, grading_lattice, linear_solve_mod_p,
                               monomials_of_degree, rank_mod_p, slice_rank, solve_rational)
from unproj_lab.polyring import PolyRing

matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=1, max_size=7))


@settings(max_examples=100)
@given(matrices)
def test_sparse_rank_matches_dense(M):
    rows = [{c: v for c, v in enumerate(r) if v} for r in M]
    assert rank_mod_p(rows, 101) == dense_rank(M, 101)


@settings(max_examples=60)
@given(matrices, st.lists(st.integers(-5, 5), min_size=7, max_size=7))
def test_rational_solve(M, x):
    ncols = len(M[0])
    x = x[:ncols]
    columns = [{r: Fraction(M[r][c]) for r in range(len(M)) if M[r][c]} for c in range(ncols)]
    target = {r: sum(M[r][c] * x[c] for c in range(ncols)) for r in range(len(M))}
    target = {r: v for r, v in target.items() if v}
    sol = solve_rational(columns, target)
    assert sol is not None
    for r in range(len(M)):
        assert sum(M[r][c] * sol[c] for c in range(ncols)) == target.get(r, 0)
    sol_p = linear_solve_mod_p(columns, target, 101)
    for r in range(len(M)):
        assert sum(M[r][c] * sol_p[c] for c in range(ncols)) % 101 == target.get(r, 0) % 101


def test_inconsistent_systems():
    cols = [{0: 1, 1: 1}]
    assert solve_rational(cols, {0: 1, 1: 2}) is None
    assert linear_solve_mod_p(cols, {0: 1, 1: 2}, 7) is None


def test_coset_reducer_is_canonical():
    red = CosetReducer([[2, 0, -2], [0, 3, -3]])
    rng = random.Random(1)
    for _ in range(200):
        v = [rng.randrange(-9, 9) for _ in range(3)]
        a, b = rng.randrange(-3, 3), rng.randrange(-3, 3)
        w = [v[0] + 2 * a, v[1] + 3 * b, v[2] - 2 * a - 3 * b]
        assert red(v) == red(w)
    assert red([1, 0, 0]) != red([0, 0, 0])


def test_monomials_of_degree_count():
    for n in range(1, 5):
        for d in range(5):
            mons = list(monomials_of_degree(n, d))
            assert len(mons) == len(set(mons)) == comb(n + d - 1, d)


def test_grading_lattice_of_binomials():
    R = PolyRing("a b c", 101)
    red = grading_lattice([R("a*b - c^2")])
    assert red((1, 1, 0)) == red((0, 0, 2))
    assert red((1, 0, 0)) != red((0, 1, 0))


def _dense_slice_rank(I, d):
    """Unblocked Macaulay matrix of I in degree d, ranked densely."""
    n = I.ring.nvars
    cols = {m: k for k, m in enumerate(monomials_of_degree(n, d))}
    rows = []
    for g in I.gens:
        for m in monomials_of_degree(n, d - g.degree()):
            r = [0] * len(cols)
            for e, c in g.terms():
                r[cols[tuple(a + b for a, b in zip(m, e))]] = c
            rows.append(r)
    return dense_rank(rows, I.ring.characteristic) if rows else 0


@pytest.mark.parametrize("char", [0, 101])
def test_blocked_slice_rank_matches_dense(char):
    I = twisted_cubic(char)
    R = I.ring
    J = Ideal(R, list(I.gens) + [R("x0^3 + 2*x1*x2*x3")])
    for d in range(6):
        assert slice_rank(J, d) == _dense_slice_rank(J, d)
