"""Acceptance criteria, one PASS/FAIL line per criterion (run with -s or -v to see them)."""
import random
import time
from functools import lru_cache

import pytest

from ncdisc.actions import arrangement, discriminant_invariant, jacobian
from ncdisc.bundle import available, load
from ncdisc.commpoly import CommPoly, bareiss_determinant, canonical_up_to_scalar, cofactor_determinant, parse_commpoly
from ncdisc.graded_module import DegenerateTraceForm, different_omega, frobenius_theta, mu_normal, nakayama_on_generators
from ncdisc.hopf import group_algebra, h2n2_hopf
from ncdisc.ncpoly import check_local_confluence
from ncdisc.reflection import group_closure, jacobian_det, jacobian_from_arrangement
from ncdisc.scalar import ONE, ZERO, zeta
from ncdisc.smash import SmashBasis, SmashProduct, galois_trace_check


def _short(x, width=60):
    s = str(x)
    return s if len(s) <= width else f"{s[:width]}... ({len(s)} chars)"


@pytest.fixture
def line(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        return ok

    return emit


@lru_cache(maxsize=None)
def inst(name):
    return load(name)


def _three_routes(i):
    """(trace determinant, norm of the different, power of the Jacobian) in the algebra, and the generator used."""
    B = i.basis()
    d_trace = B.discriminant()
    fd = frobenius_theta(B)
    omega = different_omega(fd)
    d_norm = canonical_up_to_scalar(B.norm(omega))
    if i.action is not None:
        g = jacobian(i.action, i.hdet, B.top_degree, i.central, 2 * B.top_degree).element
        label = "j"
    else:
        g = omega
        label = "omega"
    power = g ** B.rank
    return d_trace, d_norm, power, label


# -- 1 ---------------------------------------------------------------------------------


def test_criterion_1a_quantum_plane(line):
    t = time.perf_counter()
    i = load("quantum_plane_m1")
    d = i.basis().discriminant()
    elapsed = time.perf_counter() - t
    ok = i.central.expand(d).equal_up_to_scalar(i.pres.parse("(x*y)^4")) and elapsed < 5
    assert line("1a", ok, f"d = {d} = (x y)^4 in {elapsed:.2f}s")


@pytest.mark.xfail(strict=True, reason="R = k[x^2, y^4] is not central when p = i; the trace form is degenerate")
def test_criterion_1b_quantum_plane_i(line):
    t = time.perf_counter()
    i = load("quantum_i_2_4")
    B = i.basis()
    try:
        d = B.discriminant()
        detail = f"d = {d}"
        ok = i.central.expand(d).equal_up_to_scalar(i.pres.parse("(x*y^3)^8"))
    except DegenerateTraceForm:
        detail = "trace form degenerate (x^2 is not central, so tr is not R-linear); expected (x y^3)^8"
        ok = False
    elapsed = time.perf_counter() - t
    ok = ok and elapsed < 5
    assert line("1b", ok, f"{detail} in {elapsed:.2f}s")


def test_quantum_plane_i_with_central_subalgebra(line):
    # not a criterion: the same algebra over the genuinely central k[x^4, y^4]
    i = load("quantum_i_4_4")
    d = i.basis().discriminant()
    ok = i.central.expand(d).equal_up_to_scalar(i.pres.parse("(x^3*y^3)^16"))
    assert line("1b-companion", ok, f"over k[x^4, y^4]: d = {d} = (x^3 y^3)^16")


# -- 2 ---------------------------------------------------------------------------------


def test_criterion_2_cubic(line):
    t = time.perf_counter()
    i = load("cubic")
    B = i.basis()
    fd = frobenius_theta(B)
    omega = different_omega(fd)
    mu = nakayama_on_generators(fd)
    d = B.discriminant()
    elapsed = time.perf_counter() - t
    p = i.pres
    checks = {
        "rank 16": B.rank == 16,
        "omega": omega.equal_up_to_scalar(p.parse("x^2*((x*y)^2 - (y*x)^2)")),
        "discriminant": i.central.expand(d).equal_up_to_scalar(p.parse("(x^4*(((x*y)^2 + (y*x)^2)^2 + 4*x^4*y^4))^8")),
        "mu": mu["x"] == p.parse("-x") and mu["y"] == p.parse("y"),
        "runtime": elapsed < 600,
    }
    ok = all(checks.values())
    assert line("2", ok, f"rank {B.rank}, omega = {omega}, d = {_short(d)}, mu = {{x: {mu['x']}, y: {mu['y']}}} in {elapsed:.2f}s; {checks}")


# -- 3 ---------------------------------------------------------------------------------


def test_criterion_3_h18(line):
    t = time.perf_counter()
    i = load("disc_ex_n3")
    B = i.basis()
    p = i.pres
    jr = jacobian(i.action, i.hdet, B.top_degree, i.central, 2 * B.top_degree)
    ar = arrangement(i.action, i.hdet, i.central, bound=B.top_degree + 2)
    delta = discriminant_invariant(jr.element, ar.element).delta
    d = B.discriminant()
    elapsed = time.perf_counter() - t
    checks = {
        "j": jr.element.equal_up_to_scalar(p.parse("u^2*v^2*(u^3 - v^3)")),
        "a": ar.element.equal_up_to_scalar(p.parse("u*v*(u^3 - v^3)")),
        "delta": delta.equal_up_to_scalar(p.parse("u^3*v^3*(u^3 - v^3)^2")),
        "d": i.central.expand(d).equal_up_to_scalar(p.parse("(u*v)^36*(u^3 - v^3)^18")),
        "runtime": elapsed < 600,
    }
    ok = all(checks.values())
    assert line("3", ok, f"j = {jr.element}, a = {ar.element}, d = {_short(d)} in {elapsed:.2f}s; {checks}")


# -- 4 ---------------------------------------------------------------------------------

MAIN = ["quantum_plane_m1", "quantum_i_2_4", "cubic", "disc_ex_n3", "s2", "s3", "z3_diagonal"]


@pytest.mark.parametrize(
    "name",
    [
        pytest.param(n, marks=pytest.mark.xfail(strict=True, raises=DegenerateTraceForm, reason="degenerate trace form"))
        if n == "quantum_i_2_4"
        else n
        for n in MAIN
    ],
)
def test_criterion_4_three_routes(line, name):
    i = inst(name)
    try:
        d_trace, d_norm, power, label = _three_routes(i)
    except DegenerateTraceForm:
        line("4", False, f"{name}: trace form degenerate, no routes to compare")
        raise
    a = i.central.expand(d_trace)
    ok = d_trace == d_norm and a.equal_up_to_scalar(power)
    assert line("4", ok, f"{name}: det = nr(omega) = {_short(d_trace)}, and equals {label}^{i.basis().rank}")


# -- 5 ---------------------------------------------------------------------------------


def test_criterion_5_symmetric_groups(line):
    t = time.perf_counter()
    s2 = load("s2")
    d2 = s2.basis().discriminant()
    ok2 = s2.central.expand(d2).equal_up_to_scalar(s2.pres.parse("(x1 - x2)^2"))
    t3 = time.perf_counter()
    s3 = load("s3")
    d3 = s3.basis().discriminant()
    ok3 = s3.central.expand(d3).equal_up_to_scalar(s3.pres.parse("((x1 - x2)*(x1 - x3)*(x2 - x3))^6"))
    elapsed3 = time.perf_counter() - t3
    assert line("5", ok2 and ok3 and elapsed3 < 120, f"S2: d = {d2}; S3: d = {_short(d3)} in {elapsed3:.2f}s (total {time.perf_counter() - t:.2f}s)")


def test_criterion_5_jacobian_formulas(line):
    def jac_pair(gens, invariants, names):
        G = group_closure(gens)
        return jacobian_det([parse_commpoly(f) for f in invariants], names), jacobian_from_arrangement(G, names)

    swap = [[ZERO, ONE], [ONE, ZERO]]
    t12 = [[ZERO, ONE, ZERO], [ONE, ZERO, ZERO], [ZERO, ZERO, ONE]]
    c3 = [[ZERO, ZERO, ONE], [ONE, ZERO, ZERO], [ZERO, ONE, ZERO]]
    cases = {
        "S2": jac_pair([swap], ["x1 + x2", "x1^2 + x2^2"], ["x1", "x2"]),
        "S3": jac_pair([t12, c3], ["x1 + x2 + x3", "x1^2 + x2^2 + x3^2", "x1^3 + x2^3 + x3^3"], ["x1", "x2", "x3"]),
        "Z3": jac_pair([[[zeta(3, 1), ZERO], [ZERO, ONE]]], ["x1^3", "x2"], ["x1", "x2"]),
    }
    ok = all(a == b for a, b in cases.values())
    assert line("5", ok, "; ".join(f"{k}: {a} vs {b}" for k, (a, b) in cases.items()))


# -- 6 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name,formula", [("s2", "(x1 - x2)^4"), ("quantum_plane_m1", "(x*y)^16")])
def test_criterion_6_smash(line, name, formula):
    t = time.perf_counter()
    i = load(name)
    B = i.basis()
    sb = SmashBasis(SmashProduct(i.action), B)
    d = sb.discriminant()
    j = jacobian(i.action, i.hdet, B.top_degree, i.central, 2 * B.top_degree).element
    nm = B.rank * i.hopf.dim
    elapsed = time.perf_counter() - t
    a = i.central.expand(d)
    ok = a.equal_up_to_scalar(i.pres.parse(formula)) and a.equal_up_to_scalar(j**nm) and elapsed < 300
    assert line("6", ok, f"{name}: d(A#H, R) = {d}, formula {formula}, j^{nm} with j = {j} in {elapsed:.2f}s")


# -- 7 ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["s2", "quantum_plane_m1"])
def test_criterion_7_mod_commutator(line, name):
    i = load(name)
    rep = galois_trace_check(None, i.action, 6)
    ok = rep.checks["mod_commutator"] and rep.checks["beta_is_one_tensor_t"]
    assert line("7", ok, f"{name}: tr(b) - eps(t) alpha.b in [B, B] for all homogeneous b of degree <= 6: {rep.checks}")


def test_criterion_7_counterexample(line):
    i = load("h8_counterexample")
    B = i.basis()
    p = i.pres
    u2 = p.parse("u^2")
    tr = B.hs_trace(u2)
    t_u2 = i.action.act(i.hopf.t, u2)
    ok = tr.is_zero() and t_u2 == p.parse("4*(u^2 + v^2)") and not t_u2.is_zero()
    assert line("7", ok, f"counterexample: tr(u^2) = {tr}, t.u^2 = {t_u2}")


# -- 8 ---------------------------------------------------------------------------------

NONDEGENERATE = [n for n in available() if n != "quantum_i_2_4"]


def test_criterion_8_trace_properties(line):
    bad = []
    skipped = []
    for name in NONDEGENERATE:
        i = inst(name)
        B = i.basis()
        if B.hs_trace(i.pres.one()) != CommPoly.const(B.rank):
            bad.append(f"{name}: tr(1)")
        for a in B.elements:
            for b in B.elements:
                if B.hs_trace(a * b) != B.hs_trace(b * a):
                    bad.append(f"{name}: tr({a}*{b})")
        if not B.is_central:
            # no Frobenius form over a non-central R, so omega and mu are undefined
            skipped.append(name)
            continue
        fd = frobenius_theta(B)
        if not mu_normal(nakayama_on_generators(fd), different_omega(fd)):
            bad.append(f"{name}: mu-normality")
    assert line(
        "8",
        not bad,
        f"trace symmetry, tr(1) = n on {len(NONDEGENERATE)} instances, mu-normal omega where R is central "
        f"(not applicable: {skipped}); failures {bad}",
    )


def test_criterion_8_confluence(line):
    unresolved = {n: len(check_local_confluence(inst(n).pres, 8)) for n in available()}
    assert line("8", not any(unresolved.values()), f"unresolved critical pairs up to degree 8: {unresolved}")


def test_criterion_8_bareiss(line):
    rng = random.Random(7)

    def rand_poly():
        out = CommPoly.zero()
        for _ in range(rng.randint(0, 2)):
            out = out + CommPoly.monomial({v: rng.randint(0, 2) for v in "ab"}, rng.randint(-3, 3))
        return out

    mismatches = 0
    for k in range(200):
        n = 3 + k % 2
        m = [[rand_poly() for _ in range(n)] for _ in range(n)]
        mismatches += bareiss_determinant(m) != cofactor_determinant(m)
    assert line("8", mismatches == 0, f"Bareiss vs cofactor on 200 random 3x3/4x4 matrices: {mismatches} mismatches")


def test_criterion_8_hopf_axioms(line):
    results = {}
    for name in available():
        H = inst(name).hopf
        if H is not None and not H.name.startswith("H_"):
            results[name] = H.check_axioms() == []
    results["h2n2(2)"] = h2n2_hopf(2).check_axioms() == []
    results["h2n2(3)"] = h2n2_hopf(3).check_axioms() == []
    results["Z5"] = group_algebra([[(a + b) % 5 for b in range(5)] for a in range(5)]).check_axioms() == []
    assert line("8", all(results.values()), f"Hopf axioms: {results}")
