import pytest

from ncdisc.actions import h2n2
from ncdisc.bundle import BundleError, available, load, load_path, loads, parse_scalar
from ncdisc.ncpoly import check_local_confluence
from ncdisc.reflection import sn_instance
from ncdisc.scalar import ONE, zeta

MINIMAL = """
[algebra]
generators = ["x", "y"]
relations = ["y*x = -x*y"]
hilbert_denominator = "(1-t)^2"

[central]
X = "x^2"
Y = "y^2"
"""

SHIPPED = available()


def test_shipped_names():
    assert {"cubic", "disc_ex_n3", "h8_counterexample", "quantum_plane_m1", "s2", "s3", "z3_diagonal"} <= set(SHIPPED)


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_bundles_load(name):
    inst = load(name)
    assert inst.name == name
    assert inst.summary
    assert inst.central is not None


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_presentations_confluent_to_degree_8(name):
    inst = load(name)
    assert check_local_confluence(inst.pres, 8) == []


def test_minimal_bundle():
    inst = loads(MINIMAL, "mini")
    assert inst.name == "mini" and inst.hopf is None
    assert inst.basis().rank == 4
    assert str(inst.basis().discriminant()) == "X^2*Y^2"


def test_load_path(tmp_path):
    p = tmp_path / "mini.toml"
    p.write_text(MINIMAL)
    assert load(str(p)).basis().rank == 4
    assert load_path(p).name == "mini"


def test_parse_scalar():
    assert parse_scalar(3) == 3 * ONE
    assert parse_scalar("zeta(4,1)") == zeta(4, 1)
    assert parse_scalar("-1/2") * 2 == -ONE
    for bad in ("x", True, 1.5):
        with pytest.raises(BundleError):
            parse_scalar(bad)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("[algebra\n", "malformed"),
        ("name = 'a'\n", "[algebra]"),
        ("[algebra]\ngenerators = ['x']\n[extra]\n", "unknown top-level"),
        ("[algebra]\ngenerators = ['x', 'x']\n", "repeat"),
        ("[algebra]\ngenerators = ['x']\ndegrees = [0]\n", "degrees"),
        ("[algebra]\ngenerators = ['x']\n[central]\n", "empty"),
        ("[algebra]\ngenerators = ['x']\n[basis]\nside = 'up'\n", "side"),
        ("[algebra]\ngenerators = ['x']\n[hopf]\nkind = 'quantum'\n", "unknown hopf kind"),
        ("[algebra]\ngenerators = ['x']\n[hopf]\nkind = 'matrix_group'\ngenerators = [[[1, 0], [0, 1]]]\n", "1x1"),
        ("[algebra]\ngenerators = ['x', 'y']\n[hopf]\nkind = 'h2n2'\nn = 2\n", "[action]"),
        (
            "[algebra]\ngenerators = ['x', 'y']\n[hopf]\nkind = 'h2n2'\nn = 2\n[action]\nw = [[1, 0], [0, 1]]\n",
            "not a basis element",
        ),
        (
            "[algebra]\ngenerators = ['x']\n[hopf]\nkind = 'matrix_group'\ngenerators = [[[-1]]]\n[hdet]\nkind = 'values'\nvalues = { g1 = 2 }\n",
            "algebra map",
        ),
    ],
)
def test_bundle_errors(text, fragment):
    with pytest.raises(BundleError) as exc:
        loads(text)
    assert fragment in str(exc.value)


def test_unknown_instance():
    with pytest.raises(BundleError):
        load("no_such_instance")
    with pytest.raises(BundleError):
        load("missing.toml")


def test_h8_bundle_matches_builder():
    H, A, action, hdet = h2n2(2, 1, 0)
    inst = load("h8_counterexample")
    assert inst.action.matrices == action.matrices
    assert list(inst.hdet.values) == list(hdet.values)
    assert inst.hopf.mult == H.mult and inst.hopf.comult == H.comult


def test_s3_bundle_matches_builder():
    a, b = sn_instance(3), load("s3")
    assert sorted(map(str, a.hdet.values)) == sorted(map(str, b.hdet.values))
    assert b.basis().verify(8).ok
