from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdisc.actions import (
    ActionError,
    ActionSpec,
    arrangement,
    discriminant_invariant,
    divides_two_sided,
    h2n2,
    homogeneous_divide,
    invariant_basis,
    jacobian,
    relative_invariants,
    reynolds,
    verify_main_theorem,
)
from ncdisc.bundle import load
from ncdisc.commpoly import canonical_up_to_scalar, parse_commpoly
from ncdisc.ncpoly import Presentation, monomial_basis
from ncdisc.scalar import zeta


@lru_cache(maxsize=None)
def inst(name):
    return load(name)


def test_h2n2_builder_matches_bundle():
    H, A, action, hdet = h2n2(3, 2, 0)
    b = inst("disc_ex_n3")
    assert action.matrices == b.action.matrices
    assert list(hdet.values) == list(b.hdet.values)
    assert A.parse("v*u") == A.parse("zeta(3,2)*u*v")


@pytest.mark.parametrize("name", ["disc_ex_n3", "h8_counterexample", "quantum_plane_m1", "s3", "z3_diagonal"])
def test_action_is_module_algebra(name):
    action = inst(name).action
    assert action.check_representation() == []
    assert action.check_relations() == []
    assert action.check_module_algebra(3) == []


def test_wrong_skew_parameter_breaks_relations():
    _, _, action, _ = h2n2(3, 2, 0, relation_scalar=zeta(3, 1))
    assert action.check_relations() != []


def test_from_generators_requires_reaching_all_elements():
    b = inst("disc_ex_n3")
    H = b.hopf
    with pytest.raises(ActionError):
        ActionSpec.from_generators(H, b.pres, {H.index("x"): b.action.matrices[H.index("x")]})


def test_disc_ex_generators():
    b = inst("disc_ex_n3")
    R = b.central
    jr = jacobian(b.action, b.hdet, 7, R, 10)
    assert jr.free_ok
    assert jr.element.equal_up_to_scalar(b.pres.parse("u^2*v^2*(u^3 - v^3)"))
    ar = arrangement(b.action, b.hdet, R, bound=8)
    assert ar.free_ok and ar.degree == 5
    assert ar.element.equal_up_to_scalar(b.pres.parse("u*v*(u^3 - v^3)"))
    inv = discriminant_invariant(jr.element, ar.element)
    assert inv.left_right_agree
    assert inv.delta.equal_up_to_scalar(b.pres.parse("u^3*v^3*(u^3 - v^3)^2"))


def test_relative_invariant_law_on_generators():
    b = inst("disc_ex_n3")
    H = b.hopf
    j = b.pres.parse("u^2*v^2*(u^3 - v^3)")
    a = b.pres.parse("u*v*(u^3 - v^3)")
    chi_inv = b.hdet.inverse()
    for g in range(H.dim):
        assert b.action.act(g, j) == j.scale(chi_inv.values[g])
        assert b.action.act(g, a) == a.scale(b.hdet.values[g])


def test_main_theorem_disc_ex():
    b = inst("disc_ex_n3")
    rep = verify_main_theorem(b.basis(), b.action, b.hdet)
    assert rep.ok, rep.checks
    d = parse_commpoly(rep.details["discriminant"])
    assert canonical_up_to_scalar(d) == canonical_up_to_scalar(parse_commpoly("P^12*(S^2 - 4*P)^9"))


def _h8_invariant_dimension(d):
    # x, y force even exponents; z pairs u^a v^b with u^b v^a and fixes one vector per orbit
    if d % 2:
        return 0
    k = d // 2
    return (k + 2) // 2


def test_h8_invariant_dimensions():
    b = inst("h8_counterexample")
    got = [len(invariant_basis(b.action, d)) for d in range(9)]
    assert got == [_h8_invariant_dimension(d) for d in range(9)]
    assert got == b.expected["invariant_dimensions"]


def test_h8_invariants_not_central():
    b = inst("h8_counterexample")
    (f,) = invariant_basis(b.action, 2)
    u = b.pres.parse("u")
    assert f * u != u * f


@settings(max_examples=25)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-3, 3)), max_size=4))
def test_reynolds_projects_onto_invariants(terms):
    b = inst("disc_ex_n3")
    pres = b.pres
    a = pres.zero()
    for i, j, c in terms:
        a = a + pres.parse(f"u^{i}*v^{j}").scale(c)
    r = reynolds(a, b.action)
    H = b.hopf
    for g in H.generators:
        assert b.action.act(g, r) == r
    assert reynolds(r, b.action) == r


def test_relative_invariants_sorted_canonical():
    b = inst("disc_ex_n3")
    sp = relative_invariants(b.action, b.hdet, 5)
    assert len(sp) == 1
    assert sp == relative_invariants(b.action, b.hdet, 5)


def test_homogeneous_divide_examples():
    P = Presentation.from_relations("uv", ["v*u = zeta(3,2)*u*v"])
    f = P.parse("u^2*v^3")
    assert homogeneous_divide(f, P.parse("v"), "left") == P.parse("u^2*v^2")
    q = homogeneous_divide(f, P.parse("v"), "right")
    assert P.parse("v") * q == f
    assert homogeneous_divide(P.parse("u^2"), P.parse("v")) is None
    assert homogeneous_divide(P.parse("u"), P.parse("u^2")) is None
    assert divides_two_sided(P.parse("(u^3 - v^3)^2*u"), P.parse("u^3 - v^3"))
    with pytest.raises(ZeroDivisionError):
        homogeneous_divide(f, P.zero())


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_divide_round_trip(a, b, c, d):
    P = Presentation.from_relations("uv", ["v*u = zeta(3,2)*u*v"])
    g = P.parse(f"u^{a}*v^{b} + u^{b}*v^{a}")
    h = P.parse(f"u^{c}*v^{d}")
    q = homogeneous_divide(h * g, g, "left")
    assert q is not None and q * g == h * g
    q = homogeneous_divide(g * h, g, "right")
    assert q is not None and g * q == g * h


def test_invariant_degree_zero_is_scalars():
    b = inst("disc_ex_n3")
    assert invariant_basis(b.action, 0) == [b.pres.one()]
    assert all(len(monomial_basis(b.pres, d)) == d + 1 for d in range(5))
