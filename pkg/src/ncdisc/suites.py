"""Computation and verification suites over an :class:`Instance`, producing JSON-ready reports."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any

from .actions import arrangement, discriminant_invariant, invariant_basis, jacobian, verify_main_theorem
from .commpoly import CommPoly, canonical_up_to_scalar, parse_commpoly
from .graded_module import (
    DegenerateTraceForm,
    different_omega,
    frobenius_theta,
    mu_normal,
    nakayama_on_generators,
    nakayama_respects_relations,
)
from .instance import Instance
from .ncpoly import NCPoly, check_local_confluence, hilbert_check
from .reflection import discriminant_poly, is_invariant, jacobian_det, jacobian_from_arrangement
from .smash import dual_galois_check, galois_trace_check, hopf_galois_disc_check, smash_trace_and_discriminant

SCHEMA_VERSION = 1

__all__ = ["Report", "SCHEMA_VERSION", "SUITES", "run"]


@dataclass
class Report:
    command: str
    instance: str
    checks: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self, timings: bool = False) -> dict:
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "instance": self.instance,
            "ok": self.ok,
            "checks": dict(sorted(self.checks.items())),
            "values": self.values,
        }
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out


class _Clock:
    def __init__(self, rep: Report):
        self.rep = rep

    def __call__(self, label: str):
        rep = self.rep

        class _Span:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                rep.timings[label] = rep.timings.get(label, 0.0) + time.perf_counter() - self.t

        return _Span()


def _central_poly(inst: Instance, text: str) -> CommPoly:
    return parse_commpoly(text, inst.central.names)


def _same_in_algebra(inst: Instance, d: CommPoly, formula: NCPoly) -> bool:
    return inst.central.expand(d).equal_up_to_scalar(formula)


def _expected_disc_checks(inst: Instance, d: CommPoly, rep: Report, prefix: str = "", keys=("discriminant", "discriminant_formula")) -> None:
    exp = inst.expected
    central_key, formula_key = keys
    if central_key in exp:
        rep.checks[f"{prefix}{central_key}_matches_expected"] = d == canonical_up_to_scalar(_central_poly(inst, exp[central_key]))
    if formula_key in exp:
        rep.checks[f"{prefix}{formula_key}_matches_expected"] = _same_in_algebra(inst, d, inst.pres.parse(exp[formula_key]))


# -- presentation level -------------------------------------------------------------


def confluence(inst: Instance, degree: int | None = None) -> Report:
    rep = Report("confluence", inst.name)
    D = degree if degree is not None else int(inst.verify.get("confluence_degree", 8))
    bad = check_local_confluence(inst.pres, D)
    rep.values["degree"] = D
    rep.values["rules"] = [inst.pres.render_rule(r) for r in inst.pres.rules]
    rep.values["unresolved"] = [c.to_json() for c in bad]
    rep.checks["locally_confluent"] = not bad
    return rep


def hilbert(inst: Instance, degree: int | None = None) -> Report:
    rep = Report("hilbert", inst.name)
    D = degree if degree is not None else 10
    h = hilbert_check(inst.pres, D)
    rep.values["degree"] = D
    rep.values["expected"] = [e for _, e, _ in h.rows]
    rep.values["actual"] = [a for _, _, a in h.rows]
    rep.checks["series_matches"] = h.ok
    if not h.ok:
        rep.values["first_mismatch"] = h.first_mismatch
    return rep


# -- discriminant, different, Jacobian ---------------------------------------------------


def _basis_checks(inst: Instance, rep: Report, degree: int | None) -> None:
    B = inst.basis()
    D = degree if degree is not None else inst.degree_bound()
    fr = B.verify(D)
    rep.values["rank"] = B.rank
    rep.values["basis"] = [str(b) for b in B.elements]
    rep.values["basis_degrees"] = list(B.degrees)
    rep.values["side"] = B.side
    rep.checks["free_basis"] = fr.ok
    if not fr.ok:
        rep.values["basis_failure"] = fr.failure
    if "rank" in inst.expected:
        rep.checks["rank_matches_expected"] = B.rank == int(inst.expected["rank"])
    if "degrees" in inst.expected:
        rep.checks["degrees_match_expected"] = sorted(B.degrees) == list(inst.expected["degrees"])


def disc(inst: Instance, degree: int | None = None) -> Report:
    rep = Report("disc", inst.name)
    clock = _Clock(rep)
    with clock("basis"):
        _basis_checks(inst, rep, degree)
    B = inst.basis()
    rep.values["central"] = B.is_central
    with clock("discriminant"):
        try:
            d = B.discriminant()
        except DegenerateTraceForm:
            rep.values["discriminant"] = "0"
            rep.checks["trace_form_nondegenerate"] = False
            return rep
    rep.checks["trace_form_nondegenerate"] = True
    rep.values["discriminant"] = str(d)
    rep.values["discriminant_in_algebra"] = str(inst.central.expand(d).canonical())
    _expected_disc_checks(inst, d, rep)
    return rep


def norm_different(inst: Instance, degree: int | None = None) -> Report:
    rep = Report("norm-different", inst.name)
    B = inst.basis()
    fd = frobenius_theta(B)
    rep.checks["frobenius_form"] = fd.valid
    if not fd.valid:
        return rep
    omega = different_omega(fd)
    mu = nakayama_on_generators(fd)
    nr = canonical_up_to_scalar(B.norm(omega))
    rep.values["omega"] = str(omega.canonical())
    rep.values["nakayama"] = {k: str(v) for k, v in mu.items()}
    rep.values["norm_of_different"] = str(nr)
    rep.checks["nakayama_is_automorphism"] = nakayama_respects_relations(mu, inst.pres)
    rep.checks["omega_mu_normal"] = mu_normal(mu, omega)
    exp = inst.expected
    if "omega" in exp:
        rep.checks["omega_matches_expected"] = omega.equal_up_to_scalar(inst.pres.parse(exp["omega"]))
    if "mu" in exp:
        rep.checks["nakayama_matches_expected"] = all(
            (mu[k] - inst.pres.parse(v)).is_zero() for k, v in exp["mu"].items()
        )
    try:
        d = B.discriminant()
    except DegenerateTraceForm:
        rep.checks["norm_equals_discriminant"] = False
        return rep
    rep.checks["norm_equals_discriminant"] = nr == d
    rep._omega = omega
    return rep


def _hopf_required(inst: Instance, command: str) -> Report | None:
    if inst.action is None:
        rep = Report(command, inst.name)
        rep.values["error"] = "instance has no Hopf action"
        rep.checks["hopf_action_present"] = False
        return rep
    return None


def jacobian_report(inst: Instance, degree: int | None = None) -> Report:
    early = _hopf_required(inst, "jacobian")
    if early:
        return early
    rep = Report("jacobian", inst.name)
    B = inst.basis()
    R = inst.central
    bound = degree if degree is not None else 2 * B.top_degree
    jr = jacobian(inst.action, inst.hdet, None, R, bound)
    ar = arrangement(inst.action, inst.hdet, R, bound=bound)
    rep.checks["jacobian_free"] = jr.element is not None and jr.free_ok
    rep.checks["arrangement_free"] = ar.element is not None and ar.free_ok
    if jr.element is None or ar.element is None:
        rep.values["error"] = jr.message or ar.message
        return rep
    inv = discriminant_invariant(jr.element, ar.element)
    rep.values["jacobian"] = str(jr.element.canonical())
    rep.values["arrangement"] = str(ar.element.canonical())
    rep.values["delta"] = str(inv.delta)
    rep.checks["aj_equals_ja"] = inv.left_right_agree
    exp = inst.expected
    for key, val in (("jacobian", jr.element), ("arrangement", ar.element), ("delta", inv.delta)):
        if key in exp:
            rep.checks[f"{key}_matches_expected"] = val.equal_up_to_scalar(inst.pres.parse(exp[key]))
    rep._j = jr.element
    return rep


# -- verification suites ----------------------------------------------------------------


def verify_main(inst: Instance, degree: int | None = None) -> Report:
    """Trace determinant, norm of the different and a power of the Jacobian, all compared."""
    rep = Report("verify main", inst.name)
    clock = _Clock(rep)
    with clock("confluence"):
        rep.checks["locally_confluent"] = not check_local_confluence(inst.pres, int(inst.verify.get("confluence_degree", 8)))
    if inst.pres.hilbert is not None:
        with clock("hilbert"):
            rep.checks["hilbert_series"] = hilbert_check(inst.pres, 10).ok
    with clock("disc"):
        dr = disc(inst, degree)
    rep.checks.update(dr.checks)
    rep.values.update(dr.values)
    if not dr.checks.get("trace_form_nondegenerate"):
        return rep
    B = inst.basis()
    n = B.rank
    d = B.discriminant()
    with clock("norm_different"):
        nd = norm_different(inst, degree)
    rep.checks.update(nd.checks)
    rep.values.update(nd.values)
    d_in_A = inst.central.expand(d)
    if inst.action is not None:
        with clock("main_theorem"):
            mt = verify_main_theorem(B, inst.action, inst.hdet)
        rep.checks.update(mt.checks)
        for key in ("jacobian", "arrangement", "delta"):
            if key in mt.details:
                rep.values[key] = mt.details[key]
        j = inst.pres.parse(mt.details["jacobian"]) if "jacobian" in mt.details else None
        exp = inst.expected
        for key in ("jacobian", "arrangement", "delta"):
            if key in exp and key in mt.details:
                rep.checks[f"{key}_matches_expected"] = inst.pres.parse(mt.details[key]).equal_up_to_scalar(inst.pres.parse(exp[key]))
        if j is not None:
            rep.values["power_route"] = "jacobian"
            with clock("power"):
                rep.checks["three_routes_agree"] = nd.checks.get("norm_equals_discriminant", False) and d_in_A.equal_up_to_scalar(j**n)
    elif hasattr(nd, "_omega"):
        rep.values["power_route"] = "different"
        with clock("power"):
            rep.checks["three_routes_agree"] = nd.checks["norm_equals_discriminant"] and d_in_A.equal_up_to_scalar(nd._omega**n)
    return rep


def verify_smash(inst: Instance, degree: int | None = None) -> Report:
    early = _hopf_required(inst, "verify smash")
    if early:
        return early
    rep = Report("verify smash", inst.name)
    clock = _Clock(rep)
    B = inst.basis()
    with clock("jacobian"):
        jr = jacobian(inst.action, inst.hdet, B.top_degree, inst.central, 2 * B.top_degree)
    rep.checks["jacobian_free"] = jr.element is not None and jr.free_ok
    if jr.element is None:
        return rep
    with clock("smash_discriminant"):
        sr = smash_trace_and_discriminant(B, inst.action, jr.element)
    rep.values.update(sr.details)
    rep.checks.update(sr.checks)
    d_B = sr.sbasis.discriminant()
    with clock("hopf_galois_disc"):
        hg = hopf_galois_disc_check(B, inst.action, d_B)
    rep.checks.update(hg.checks)
    rep.values["d_A"] = hg.details["d_A"]
    _expected_disc_checks(inst, d_B, rep, "", ("smash_discriminant", "smash_formula"))
    return rep


def verify_galois(inst: Instance, degree: int | None = None) -> Report:
    early = _hopf_required(inst, "verify galois")
    if early:
        return early
    rep = Report("verify galois", inst.name)
    clock = _Clock(rep)
    if inst.galois.get("mode") == "dual":
        B = inst.basis()
        rep.values["non_central"] = not B.is_central
        with clock("basis"):
            fr = B.verify(degree if degree is not None else inst.degree_bound())
        rep.checks["free_basis"] = fr.ok
        probes = [inst.pres.parse(p) for p in inst.galois.get("probes", [])]
        loc = inst.galois.get("localizer")
        with clock("dual_check"):
            gr = dual_galois_check(B, inst.action, probes, inst.pres.parse(loc) if loc else None)
        rep.values.update(gr.details)
        rep.checks["mod_commutator"] = gr.checks["mod_commutator"]
        rep.values["exact_equality"] = gr.checks["exact_equality"]
        exp = inst.expected
        if "exact_equality" in exp:
            rep.checks["exact_equality_as_expected"] = gr.checks["exact_equality"] == bool(exp["exact_equality"])
        rows = {r["probe"]: r for r in gr.details["probes"]}
        for key, field_name in (("probe_trace", "trace"), ("probe_t_acting", "t_acting")):
            for probe, want in exp.get(key, {}).items():
                got = rows[str(inst.pres.parse(probe))][field_name]
                rep.checks[f"{key}[{probe}]"] = got == want
        if "invariant_dimensions" in exp:
            dims = [len(invariant_basis(inst.action, k)) for k in range(len(exp["invariant_dimensions"]))]
            rep.values["invariant_dimensions"] = dims
            rep.checks["invariant_dimensions_match_expected"] = dims == list(exp["invariant_dimensions"])
        return rep
    D = degree if degree is not None else int(inst.verify.get("galois_degree", 6))
    with clock("galois_trace"):
        gr = galois_trace_check(None, inst.action, D)
    rep.values["degree"] = D
    rep.values.update(gr.details)
    rep.checks.update(gr.checks)
    return rep


def verify_reflection(inst: Instance, degree: int | None = None) -> Report:
    rep = Report("verify reflection", inst.name)
    G = inst.group_matrices
    if not G:
        rep.values["error"] = "instance is not given by a matrix group"
        rep.checks["matrix_group_present"] = False
        return rep
    names = list(inst.pres.names)
    commutative = all(
        (inst.pres.gen(i) * inst.pres.gen(k) - inst.pres.gen(k) * inst.pres.gen(i)).is_zero()
        for i in range(len(names)) for k in range(i)
    )
    rep.checks["commutative"] = commutative
    if not commutative:
        return rep
    fs = [parse_commpoly(str(g), names) for g in inst.central.defs]
    j_partial = jacobian_det(fs, names)
    j_arr = jacobian_from_arrangement(G, names)
    dpoly = discriminant_poly(G, names)
    rep.values["group_order"] = len(G)
    rep.values["jacobian_partials"] = str(j_partial)
    rep.values["jacobian_hyperplanes"] = str(j_arr)
    rep.values["discriminant_hyperplanes"] = str(dpoly)
    rep.checks["jacobian_formulas_agree"] = j_partial == j_arr
    rep.checks["discriminant_poly_invariant"] = is_invariant(G, dpoly, names)
    B = inst.basis()
    rep.checks["rank_is_group_order"] = B.rank == len(G)
    d = B.discriminant()
    d_in_A = parse_commpoly(str(inst.central.expand(d)), names)
    rep.values["discriminant"] = str(canonical_up_to_scalar(d_in_A))
    rep.checks["d_equals_j_power_order"] = canonical_up_to_scalar(d_in_A) == canonical_up_to_scalar(j_arr ** len(G))
    return rep


SUITES = {
    "main": verify_main,
    "smash": verify_smash,
    "galois": verify_galois,
    "reflection": verify_reflection,
}


def run(inst: Instance, suite: str, degree: int | None = None) -> Report:
    return SUITES[suite](inst, degree)
