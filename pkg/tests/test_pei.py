from concurrent.futures import ThreadPoolExecutor

import pytest

from support import contexts, elliptic, sextic_unprojection, twisted_cubic
from unproj_lab import families, pei
from unproj_lab.groebner import Ideal, same_ideal
from unproj_lab.homalg import betti_invariants
from unproj_lab.polyring import PolyRing


@pytest.fixture(scope="module")
def ctxs():
    return contexts()


def test_elliptic_quartic_module_tables():
    I, z, _ = elliptic()
    ctx = pei.make_context(I, z)
    tabs = pei.module_tables(ctx)
    assert tabs[0].entries == families.EXAMPLE34_M0
    assert tabs[1].entries == families.EXAMPLE34_M1
    assert set(tabs) == {0, 1}
    inv = pei.projection_invariants(ctx)
    assert (inv.deg_X, inv.deg_map, inv.deg_Xz, inv.deg_tangent_cone) == (4, 1, 3, 1)
    assert inv.degree_formula_check


def test_K_i_definition_by_brute_force():
    # K_i contains the x0^i coefficient of every element of I of x0-degree <= i
    I, z, _ = elliptic()
    ctx = pei.make_context(I, z)
    S = ctx.S
    for i in range(3):
        Ki = pei.partial_elimination_ideal(ctx, i)
        for g in ctx.I.gens:
            for m in S.gens():
                f = g * m
                if f.degree_in(ctx.v0) <= i:
                    assert Ki.contains(ctx.to_R(f.coefficient_of_power(ctx.v0, i)))


def test_chain_is_increasing(ctxs):
    for ctx in ctxs.values():
        st = pei.stabilization(ctx)
        prev = None
        for i in range(st.index + 2):
            Ki = pei.partial_elimination_ideal(ctx, i)
            if prev is not None:
                assert prev.is_subset(Ki)
            prev = Ki
        assert same_ideal(prev, st.K_inf)


def test_K0_is_projection_ideal():
    # eliminate x0 from the transformed ideal
    from unproj_lab.groebner import eliminate
    I, z, _ = elliptic()
    ctx = pei.make_context(I, z)
    K0 = pei.partial_elimination_ideal(ctx, 0)
    E = eliminate(ctx.I, [ctx.x0]).to_ring(ctx.R)
    assert same_ideal(K0, E)


def test_hilbert_additivity_everywhere(ctxs):
    for name, ctx in ctxs.items():
        assert pei.hilbert_additivity(ctx, 25), name


def test_point_outside_gives_unit_K_inf():
    ctx = pei.make_context(twisted_cubic(), [0, 1, 0, 0])
    st = pei.stabilization(ctx)
    assert not st.z_in_X
    assert st.K_inf.is_unit()
    inv = pei.projection_invariants(ctx)
    assert inv.deg_map == 1 and inv.deg_Xz == 3 and inv.degree_formula_check


def test_not_generically_finite():
    # projecting a line from a point on it collapses it to a point
    S = PolyRing("x0 x1 x2", 32003)
    ctx = pei.make_context(Ideal(S, [S("x2")]), [1, 0, 0])
    with pytest.raises(pei.NotGenericallyFinite):
        pei.projection_invariants(ctx)


def test_sextic_dominance_routes():
    lam, U = sextic_unprojection()
    ctx = U.ctx
    reg = pei.dominance(ctx, 1, "regularity")
    pd = pei.dominance(ctx, 1, "projective_dimension")
    assert reg.holds and reg.value == 18 and reg.verified
    assert pd.holds and pd.value == 5 and pd.verified
    st = pei.stabilization(ctx)
    assert st.index == 1 and st.tangent_cone_degree == 12
    assert betti_invariants(st.K_inf).reg == 17


def test_cancellation_reaches_ideal_table(ctxs):
    for name in ("elliptic_quartic", "sextic_unprojection", "conic_ci"):
        r = pei.cancellation_report(ctxs[name])
        assert r.verdict in ("cancellation", "necessary-condition-only"), name


def test_parallel_K_i_publication_is_consistent():
    I, z, _ = elliptic()
    serial = pei.make_context(I, z)
    want = [pei.partial_elimination_ideal(serial, i).groebner_basis() for i in range(4)]
    shared = pei.make_context(I, z)
    with ThreadPoolExecutor(4) as ex:
        got = list(ex.map(lambda i: pei.partial_elimination_ideal(shared, i).groebner_basis(),
                          [3, 2, 1, 0, 3, 1]))
    assert got == [want[3], want[2], want[1], want[0], want[3], want[1]]


def test_rational_and_prime_contexts_agree():
    tabs = []
    for char in (0, 32003):
        ctx = pei.make_context(twisted_cubic(char), [1, 2, 4, 8])
        tabs.append({i: B.entries for i, B in pei.module_tables(ctx).items()})
    assert tabs[0] == tabs[1]
