import json

import pytest

from unproj_lab import families
from unproj_lab.families import ConstraintViolation, FamilySpec
from unproj_lab.homalg import betti_invariants, hilbert, resolve
from unproj_lab.polyring import PolyRing


def test_caviglia_chain_and_bmnsss_build():
    for I in (families.caviglia_chain(2, 2), families.borna_mohajer(2, 2), families.bmnsss(2, 2)):
        assert I.homogeneous and I.gens


@pytest.mark.parametrize("a,b,c", [([2, 4], [3], [4]), ([1, 2], [2], [2]), ([2, 3], [4], [3]),
                                   ([3, 2], [4], [5])])
def test_three_parameter_family_k2(a, b, c):
    r = families.thm43(a, b, c)
    inv = betti_invariants(r.ideal)
    assert inv.reg >= r.predicted_reg_lb
    assert inv.pd_quotient == r.predicted_pd == 4
    pred = families.thm43_predictions(a, b, c)
    assert r.witness == pred["witness"]


def test_predicted_bound_for_sample_tuple():
    assert families.thm43_predictions([2, 4], [3], [4])["reg_lb"] == 15


@pytest.mark.parametrize("a,b,c,msg", [
    ([2], [], [], "k >= 2"),
    ([3, 4], [3], [4], "a_1 < b_1"),
    ([1, 1, 2], [2, 2], [2, 2], "2 <= a_2"),
    ([1, 2], [2, 2], [2], "k - 1 entries"),
])
def test_constraint_violations_name_the_inequality(a, b, c, msg):
    with pytest.raises(ConstraintViolation, match=msg.replace("(", r"\(")):
        families.thm43_check(a, b, c)


def test_gluing_construction_on_sextic_instance():
    from unproj_lab.cli import example53_prop51
    res = example53_prop51()
    v = families.prop51_verify(res)
    assert (v["deg_RT"], v["reg_T"], v["pd_RT"], v["reg_U"]) == (6, 20, 6, 15)
    assert v["deg_bound"] and v["reg_bound"] and v["pd_bound"]


def test_gluing_constraints():
    Q = PolyRing("y1 z1", 101)
    g = [Q("y1^2"), Q("z1^2")]
    with pytest.raises(ConstraintViolation, match="Delta > s"):
        families.prop51(g, 0, 1, 5)
    with pytest.raises(ConstraintViolation, match=r"delta > \(m\+1\)s"):
        families.prop51(g, 0, 3, 1)
    with pytest.raises(ConstraintViolation, match="deg g_1"):
        families.prop51([Q("y1^2"), Q("z1^3")], 0, 3, 3)


def test_pipeline_parameters_have_consecutive_degrees():
    for d in range(3, 7):
        a, b, c = families.pipeline_parameters(2, d)
        assert (a, b, c) == ([d - 1, d + 1], [d], [d + 1])
        I = families.thm43_ideal(a, b, c)
        assert sorted(g.degree() for g in I.gens) == [d, d + 1, d + 2]


def test_pipeline_small_instance():
    I_X, rep = families.pipeline(2, 3)
    assert all(rep.stages.values())
    assert rep.invariants["deg"] == 32 and rep.invariants["reg"] >= rep.bounds["reg_X_lb"]
    json.dumps(rep.to_json_obj())


@pytest.mark.slow
def test_pipeline_codim_extension():
    I_X, rep = families.pipeline(2, 3, e=3)
    assert rep.invariants["codim"] == 3 and rep.invariants["deg"] == 64


def test_elliptic_quartic_is_seed_stable():
    I1, z1, s1 = families.elliptic_quartic(1)
    I2, z2, s2 = families.elliptic_quartic(1)
    assert [str(g) for g in I1.gens] == [str(g) for g in I2.gens] and z1 == z2 and s1 == s2
    h = hilbert(I1)
    assert h.degree == 4 and h.dim == 2


def test_sextic_fixture_table_is_consistent():
    ex = families.example53()
    # the fixture table must satisfy the Euler relation of a degree-18 surface ideal
    assert ex.table.reg == 18 and ex.table.pd == 4


def test_family_spec_json_roundtrip():
    spec = FamilySpec("thm43", a=[2, 4], b=[3], c=[4])
    again = FamilySpec.from_json(spec.to_json())
    assert again == spec
    assert json.loads(spec.to_json())["family"] == "thm43"
    assert betti_invariants(again.build()).reg == 15
    with pytest.raises(ConstraintViolation):
        FamilySpec("nonsense")
