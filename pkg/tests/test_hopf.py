import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdisc.bundle import available, load
from ncdisc.hopf import Character, HopfError, group_algebra, h2n2_hopf
from ncdisc.scalar import ONE, ZERO, zeta


def cyclic(n):
    return group_algebra([[(a + b) % n for b in range(n)] for a in range(n)])


def klein():
    return group_algebra([[a ^ b for b in range(4)] for a in range(4)])


def shipped_group_algebras():
    out = []
    for name in available():
        inst = load(name)
        if inst.hopf is not None and not inst.hopf.name.startswith("H_"):
            out.append((name, inst.hopf))
    return out


HOPFS = [("C3", cyclic(3)), ("V4", klein()), ("H8", h2n2_hopf(2)), ("H18", h2n2_hopf(3))] + shipped_group_algebras()


@pytest.mark.parametrize("name,H", HOPFS, ids=[n for n, _ in HOPFS])
def test_axioms(name, H):
    assert H.check_axioms() == []
    assert H.antipode_squared_is_identity()


@pytest.mark.parametrize("name,H", HOPFS, ids=[n for n, _ in HOPFS])
def test_integrals_normalized(name, H):
    assert len(H.right_integrals()) == 1
    assert len(H.left_integrals_dual()) == 1
    assert H.is_right_integral(H.t)
    assert H.is_left_integral_dual(H.alpha)
    assert H.pair(H.alpha, H.t) == ONE
    assert H.eps(H.t) != ZERO


@pytest.mark.parametrize("n", [2, 3])
def test_h2n2_structure(n):
    H = h2n2_hopf(n)
    assert H.dim == 2 * n * n
    z = H.basis(H.index("z"))
    assert H.eps(z) == ONE
    assert H.S(z) == z
    x, y = H.basis(H.index("x")), H.basis(H.index("y"))
    # z x = y z
    assert H.mul(z, x) == H.mul(y, z)
    xn = x
    for _ in range(n - 1):
        xn = H.mul(xn, x)
    assert xn == H.one()


def test_h8_is_not_a_group_algebra():
    H = h2n2_hopf(2)
    z = H.index("z")
    assert len(H.comult[z]) > 1


@pytest.mark.parametrize("n", [2, 3])
def test_dual_is_hopf(n):
    D = h2n2_hopf(n).dual()
    assert D.check_axioms() == []
    assert D.dual().mult == h2n2_hopf(n).mult


def test_group_algebra_rejects_bad_tables():
    with pytest.raises(HopfError):
        group_algebra([[0, 1], [0, 1]])
    with pytest.raises(HopfError):
        group_algebra([[0, 1, 2], [1, 2, 0]])


def test_characters():
    H = cyclic(3)
    w = zeta(3, 1)
    chi = Character(H, [ONE, w, w * w])
    assert chi.is_character()
    assert not Character(H, [ONE, w, w]).is_character()
    assert list(chi.convolve(chi.inverse()).values) == list(Character.counit(H).values)
    assert list(chi.convolve(chi).values) == [ONE, w * w, w]


def test_h18_character_from_bundle():
    inst = load("disc_ex_n3")
    chi = inst.hdet
    assert chi.is_character()
    assert chi(inst.hopf.basis(inst.hopf.index("z"))) == -zeta(3, 2)


@given(st.integers(0, 17), st.integers(0, 17), st.integers(0, 17))
def test_h18_associativity(a, b, c):
    H = h2n2_hopf(3)
    A, B, C = H.basis(a), H.basis(b), H.basis(c)
    assert H.mul(H.mul(A, B), C) == H.mul(A, H.mul(B, C))


@given(st.integers(0, 7), st.integers(0, 7))
def test_h8_comultiplication_is_multiplicative(a, b):
    H = h2n2_hopf(2)
    A, B = H.basis(a), H.basis(b)
    lhs = H.delta(H.mul(A, B))
    rhs = H._tensor_mul(H.delta(A), H.delta(B))
    assert lhs == rhs
