import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdisc.expr import ParseError
from ncdisc.ncpoly import (
    OrientationError,
    Presentation,
    RewriteBudgetExceeded,
    check_local_confluence,
    hilbert_check,
    monomial_basis,
    parse_series,
    series_coefficients,
)
from ncdisc.scalar import ONE, zeta

Q_I = Presentation.from_relations("xy", ["y*x = zeta(4,1)*x*y"], hilbert=parse_series("1", "(1-t)^2"))
Q_M1 = Presentation.from_relations("xy", ["y*x = -x*y"])
CUBIC = Presentation.from_relations("xy", ["y^2*x = x*y^2", "y*x^2 = -x^2*y"], hilbert=parse_series("1", "(1-t)^2*(1-t^2)"))
COMM2 = Presentation.from_relations("xy", ["y*x = x*y"])
COMM3 = Presentation.from_relations(["a", "b", "c"], ["b*a = a*b", "c*a = a*c", "c*b = b*c"], hilbert=parse_series("1", "(1-t)^3"))
DISC3 = Presentation.from_relations("uv", ["v*u = zeta(3,2)*u*v"])


def test_parse_examples():
    assert str(Q_I.parse("y*x")) == "zeta(4,1)*x*y"
    assert Q_I.parse("x^0") == Q_I.one()
    assert str(COMM2.parse("(x+y)^2")) == "x^2 + 2*x*y + y^2"


def test_parse_errors():
    for bad in ["x y", "x^-1", "z", "x*", "(x", "x^y", "zeta(4)"]:
        with pytest.raises(ParseError):
            Q_I.parse(bad)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        Q_I.parse("x + + y")
    assert "position" in str(info.value)


def test_normal_form_examples():
    assert str(Q_M1.parse("y*x")) == "-x*y"
    assert str(CUBIC.parse("y*y*x")) == "x*y^2"
    w = CUBIC.parse("x*y^2")
    assert w.terms == {(0, 1, 1): ONE}


def test_multiplication_examples():
    x, y = Q_I.gen(0), Q_I.gen(1)
    assert str(x * y) == "x*y"
    assert y * x == (x * y).scale(zeta(4, 1))
    p = Q_I.parse("x + 2*y^2")
    assert p * Q_I.one() == p
    assert COMM2.parse("(x+y)*(x-y)") == COMM2.parse("x^2 - y^2")


def test_disc_example_relation():
    u, v = DISC3.gen(0), DISC3.gen(1)
    assert v * u == (u * v).scale(zeta(3, 2))


def test_confluence_examples():
    assert check_local_confluence(Q_I, 8) == []
    assert check_local_confluence(CUBIC, 6) == []
    broken = Presentation("xy", [((1, 0), {(0, 1): 1}), ((1, 0), {(0, 1): 2})])
    assert len(check_local_confluence(broken, 4)) == 1


def test_confluence_finds_real_overlap_failure():
    # yy -> xy and yx -> 2xy reduce yyx to 2xxy and to 4xxy
    bad = Presentation("xy", [((1, 1), {(0, 1): 1}), ((1, 0), {(0, 1): 2})])
    assert check_local_confluence(bad, 4)


def test_monomial_basis_examples():
    assert monomial_basis(Q_I, 2) == [(0, 0), (0, 1), (1, 1)]
    assert monomial_basis(Q_I, 0) == [()]
    assert monomial_basis(CUBIC, 0) == [()]
    # the series 1/((1-t)^2(1-t^2)) has t^3 coefficient 6
    assert len(monomial_basis(CUBIC, 3)) == 6


def test_hilbert_examples():
    assert hilbert_check(Q_I, 8).ok
    assert hilbert_check(CUBIC, 10).ok
    assert hilbert_check(COMM3, 6).ok
    assert series_coefficients(*parse_series("1", "(1-t)^2*(1-t^2)"), 6) == [1, 2, 4, 6, 9, 12, 16]


def test_hilbert_mismatch_is_reported():
    wrong = Presentation.from_relations("xy", ["y*x = x*y"], hilbert=parse_series("1", "(1-t)^3"))
    rep = hilbert_check(wrong, 5)
    assert not rep.ok and rep.first_mismatch == 1


def test_orientation_is_checked():
    with pytest.raises(OrientationError):
        Presentation("xy", [((0, 1), {(1, 0): 1})])
    with pytest.raises(OrientationError):
        Presentation("xy", [((1, 0), {(0,): 1})])
    with pytest.raises(OrientationError):
        Presentation.from_relations("xy", ["x*y = x*y"])


def test_from_relations_orients_by_leading_word():
    a = Presentation.from_relations("xy", ["x*y = zeta(4,3)*y*x"])
    assert a.rules == Q_I.rules


def test_rewrite_budget_guard():
    tight = Presentation.from_relations("xy", ["y*x = x*y"], fast_path=False, budget=5)
    with pytest.raises(RewriteBudgetExceeded):
        tight.parse("(y^4)*(x^4)")


def test_relation_soundness():
    for pres in (Q_I, Q_M1, CUBIC, COMM3, DISC3):
        for rule in pres.rules:
            lhs = pres.word(rule.lhs)
            rhs = pres.zero()
            for w, c in rule.rhs:
                rhs = rhs + pres.word(w).scale(c)
            assert lhs == rhs


def _words(pres, max_degree):
    out = []
    for d in range(max_degree + 1):
        out.extend(monomial_basis(pres, d))
    return out


@pytest.mark.parametrize("pres", [Q_I, DISC3, COMM3, Presentation.from_relations("xyz", ["y*x = zeta(3,1)*x*y", "z*x = -x*z", "z*y = zeta(5,2)*y*z"])])
def test_fast_path_matches_rewriting(pres):
    assert pres.is_quantum_affine
    slow = pres.without_fast_path()
    assert not slow.is_quantum_affine
    words = [w for w in _words(pres, 3)]
    for u, v in itertools.product(words, repeat=2):
        assert pres.mul_words(u, v) == slow.mul_words(u, v)


@st.composite
def elements(draw, pres, max_degree=4):
    words = _words(pres, 2)
    terms = draw(st.lists(st.tuples(st.sampled_from(words), st.integers(-3, 3)), max_size=3))
    out = pres.zero()
    for w, c in terms:
        out = out + pres.word(w).scale(c)
    return out


@given(st.data())
def test_associativity(data):
    pres = data.draw(st.sampled_from([Q_I, CUBIC, DISC3, COMM3]))
    a, b, c = (data.draw(elements(pres)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(st.data())
def test_degree_grading(data):
    pres = data.draw(st.sampled_from([Q_I, CUBIC]))
    d1, d2 = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    u = pres.word(data.draw(st.sampled_from(monomial_basis(pres, d1))))
    v = pres.word(data.draw(st.sampled_from(monomial_basis(pres, d2))))
    p = u * v
    assert p.is_zero() or p.degrees() == {d1 + d2}


@given(st.data())
def test_normal_form_is_idempotent(data):
    pres = data.draw(st.sampled_from([Q_I, CUBIC]))
    a = data.draw(elements(pres))
    for w in a.terms:
        assert pres.is_normal(w)
    assert pres.parse(str(a)) == a


def test_canonical_equality_up_to_scalar():
    a = CUBIC.parse("x^2*((x*y)^2 - (y*x)^2)")
    assert a.equal_up_to_scalar(a.scale(zeta(4, 1)))
    assert not a.equal_up_to_scalar(CUBIC.parse("x^2*(x*y)^2"))
