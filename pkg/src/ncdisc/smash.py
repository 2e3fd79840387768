"""Smash products A#H, their traces over R, and the Hopf-Galois Frobenius system."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .actions import ActionSpec
from .commpoly import CommPoly, canonical_up_to_scalar, determinant
from .graded_module import FreeBasis
from .hopf import HopfAlgebra
from .linalg import SpanBasis
from .ncpoly import NCPoly, monomial_basis
from .scalar import ONE, ZERO, Cyclo

__all__ = [
    "GaloisData",
    "SmashElement",
    "SmashProduct",
    "algebra_commutator_span",
    "commutator_span",
    "dual_galois_check",
    "dual_integral_operator",
    "galois_dual_basis",
    "in_commutators",
    "SmashBasis",
    "galois_trace_check",
    "hopf_galois_disc_check",
    "smash_trace_and_discriminant",
]


class SmashElement:
    """sum_j a_j # h_j, stored as {Hopf basis index: component in A}."""

    __slots__ = ("ring", "parts")

    def __init__(self, ring: "SmashProduct", parts: Mapping[int, NCPoly]):
        self.ring = ring
        self.parts = {j: a for j, a in parts.items() if not a.is_zero()}

    def __add__(self, other: "SmashElement") -> "SmashElement":
        out = dict(self.parts)
        for j, a in other.parts.items():
            out[j] = out[j] + a if j in out else a
        return SmashElement(self.ring, out)

    def __neg__(self) -> "SmashElement":
        return SmashElement(self.ring, {j: -a for j, a in self.parts.items()})

    def __sub__(self, other: "SmashElement") -> "SmashElement":
        return self + (-other)

    def scale(self, c) -> "SmashElement":
        return SmashElement(self.ring, {j: a.scale(c) for j, a in self.parts.items()})

    def __mul__(self, other):
        if isinstance(other, SmashElement):
            return self.ring.multiply(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, SmashElement) and self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def is_zero(self) -> bool:
        return not self.parts

    def vector(self) -> dict:
        """Flat coordinates keyed by (Hopf index, word)."""
        return {(j, w): c for j, a in self.parts.items() for w, c in a.terms.items()}

    def __str__(self) -> str:
        if not self.parts:
            return "0"
        H = self.ring.hopf
        return " + ".join(f"({a})#{H.labels[j]}" for j, a in sorted(self.parts.items()))

    __repr__ = __str__


class SmashProduct:
    def __init__(self, action: ActionSpec):
        self.action = action
        self.hopf: HopfAlgebra = action.hopf
        self.pres = action.pres
        self._mul_memo: dict = {}

    def element(self, a: NCPoly, h: Mapping[int, Cyclo] | int | None = None) -> SmashElement:
        if h is None:
            h = self.hopf.unit
        if isinstance(h, int):
            h = {h: ONE}
        return SmashElement(self, {j: a.scale(c) for j, c in h.items()})

    def one(self) -> SmashElement:
        return self.element(self.pres.one())

    def _basic(self, u: tuple, i: int, v: tuple, k: int) -> dict:
        """(u # h_i)(v # h_k) for words u, v, as {Hopf index: NCPoly}."""
        key = (u, i, v, k)
        hit = self._mul_memo.get(key)
        if hit is not None:
            return hit
        H = self.hopf
        pres = self.pres
        uu = pres.word(u)
        out: dict = {}
        for (a, b), c in H.comult[i].items():
            moved = self.action.act_basis_word(a, v)
            if moved.is_zero():
                continue
            left = (uu * moved).scale(c)
            for j, d in H.mult[(b, k)].items():
                piece = left.scale(d)
                out[j] = out[j] + piece if j in out else piece
        self._mul_memo[key] = out
        return out

    def multiply(self, s: SmashElement, t: SmashElement) -> SmashElement:
        out: dict = {}
        for i, a in s.parts.items():
            for k, b in t.parts.items():
                for u, cu in a.terms.items():
                    for v, cv in b.terms.items():
                        for j, p in self._basic(u, i, v, k).items():
                            piece = p.scale(cu * cv)
                            out[j] = out[j] + piece if j in out else piece
        return SmashElement(self, out)

    def coaction(self, s: SmashElement) -> dict:
        """rho(a#h) = sum (a#h_1) (x) h_2, as {H index of the right factor: SmashElement}."""
        out: dict = {}
        for i, a in s.parts.items():
            for (p, q), c in self.hopf.comult[i].items():
                piece = SmashElement(self, {p: a.scale(c)})
                out[q] = out[q] + piece if q in out else piece
        return {q: v for q, v in out.items() if not v.is_zero()}

    def homogeneous_basis(self, d: int) -> list[SmashElement]:
        return [self.element(self.pres.word(w), j) for w in monomial_basis(self.pres, d) for j in range(self.hopf.dim)]


# -- Galois data -----------------------------------------------------------------


@dataclass
class GaloisData:
    ring: SmashProduct
    pairs: list  # (x_i, y_i) SmashElements

    def theta(self, s: SmashElement) -> NCPoly:
        """alpha acting on b through the coaction: theta(a#h) = alpha(h) a."""
        H = self.ring.hopf
        alpha = H.alpha
        out = self.ring.pres.zero()
        for j, a in s.parts.items():
            c = alpha.get(j, ZERO)
            if c:
                out = out + a.scale(c)
        return out

    def beta(self) -> dict:
        """beta(sum x_i (x) y_i) = sum x_i (y_i)_0 (x) (y_i)_1."""
        out: dict = {}
        for x, y in self.pairs:
            for q, y0 in self.ring.coaction(y).items():
                piece = x * y0
                out[q] = out[q] + piece if q in out else piece
        return {q: v for q, v in out.items() if not v.is_zero()}

    def beta_is_one_tensor_t(self) -> bool:
        ring = self.ring
        target = {k: ring.one().scale(c) for k, c in ring.hopf.t.items()}
        return self.beta() == target

    def trace(self, s: SmashElement) -> NCPoly:
        """tr_{B_A}(b) = sum theta(y_i b x_i)."""
        out = self.ring.pres.zero()
        for x, y in self.pairs:
            out = out + self.theta(y * s * x)
        return out

    def frobenius_identities(self, s: SmashElement) -> bool:
        ring = self.ring
        left = SmashElement(ring, {})
        right = SmashElement(ring, {})
        for x, y in self.pairs:
            left = left + x * ring.element(self.theta(y * s))
            right = right + ring.element(self.theta(s * x)) * y
        return left == s and right == s


def galois_dual_basis(ring: SmashProduct) -> GaloisData:
    """x_i (x) y_i = sum (1 # S(t_1)) (x) (1 # t_2)."""
    H = ring.hopf
    one = ring.pres.one()
    pairs = []
    for (a, b), c in H.delta(H.t).items():
        pairs.append((ring.element(one, H.S(H.basis(a))).scale(c), ring.element(one, b)))
    return GaloisData(ring, pairs)


# -- discriminant over R -----------------------------------------------------------


class SmashBasis:
    """Basis {b_i # h_j} of A#H over the central subalgebra R of A."""

    def __init__(self, ring: SmashProduct, basis: FreeBasis):
        self.ring = ring
        self.abasis = basis
        self.central = basis.central
        m = ring.hopf.dim
        self.labels = [(i, j) for i in range(basis.rank) for j in range(m)]
        self.elements = [ring.element(basis.elements[i], j) for i, j in self.labels]
        self._table: dict | None = None
        self._traces: list | None = None

    @property
    def rank(self) -> int:
        return len(self.elements)

    def decompose(self, s: SmashElement) -> list[CommPoly]:
        zero = self.central.poly({})
        m = self.ring.hopf.dim
        out = [zero] * self.rank
        for j, a in s.parts.items():
            for i, r in enumerate(self.abasis.decompose(a)):
                out[i * m + j] = r
        return out

    def hs_trace(self, s: SmashElement) -> CommPoly:
        total = self.central.poly({})
        for k, e in enumerate(self.elements):
            total = total + self.decompose(s * e)[k]
        return total

    def table(self) -> dict:
        if self._table is None:
            E = self.elements
            self._table = {(i, j): self.decompose(E[i] * E[j]) for i in range(len(E)) for j in range(len(E))}
        return self._table

    def basis_traces(self) -> list[CommPoly]:
        if self._traces is None:
            t = self.table()
            N = self.rank
            self._traces = [sum((t[(k, q)][q] for q in range(N)), self.central.poly({})) for k in range(N)]
        return self._traces

    def trace_of_coeffs(self, coeffs: Sequence[CommPoly]) -> CommPoly:
        return sum((r * t for r, t in zip(coeffs, self.basis_traces())), self.central.poly({}))

    def trace_matrix(self) -> list[list[CommPoly]]:
        t = self.table()
        N = self.rank
        return [[self.trace_of_coeffs(t[(i, j)]) for j in range(N)] for i in range(N)]

    def discriminant(self) -> CommPoly:
        d = determinant(self.trace_matrix())
        if d.is_zero():
            raise ArithmeticError("degenerate trace form on A#H")
        return canonical_up_to_scalar(d)


@dataclass
class SmashReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "details": dict(self.details)}


def smash_trace_and_discriminant(basis: FreeBasis, action: ActionSpec, jacobian: NCPoly | None = None) -> SmashReport:
    ring = SmashProduct(action)
    sb = SmashBasis(ring, basis)
    rep = SmashReport()
    d = sb.discriminant()
    n, m = basis.rank, action.hopf.dim
    rep.details["rank_A"] = n
    rep.details["dim_H"] = m
    rep.details["discriminant"] = str(d)
    if jacobian is not None:
        rep.details["jacobian"] = str(jacobian)
        rep.checks["d_equals_j_power_nm"] = basis.central.expand(d).equal_up_to_scalar(jacobian ** (n * m))
    rep.sbasis = sb
    return rep


def hopf_galois_disc_check(basis: FreeBasis, action: ActionSpec, smash_disc: CommPoly | None = None) -> SmashReport:
    rep = SmashReport()
    m = action.hopf.dim
    if smash_disc is None:
        smash_disc = SmashBasis(SmashProduct(action), basis).discriminant()
    dA = basis.discriminant()
    rep.details["d_B"] = str(smash_disc)
    rep.details["d_A"] = str(dA)
    rep.checks["d_B_equals_d_A_power_m"] = smash_disc == canonical_up_to_scalar(dA**m)
    return rep


def commutator_span(ring: SmashProduct, d: int) -> SpanBasis:
    """Span of [u#h, v#k] over normal words u, v with deg u + deg v = d."""
    sb = SpanBasis()
    m = ring.hopf.dim
    pres = ring.pres
    for du in range(d + 1):
        for u in monomial_basis(pres, du):
            for v in monomial_basis(pres, d - du):
                for i in range(m):
                    for k in range(m):
                        x = ring.element(pres.word(u), i)
                        y = ring.element(pres.word(v), k)
                        sb.add((x * y - y * x).vector())
    return sb


def galois_trace_check(basis_or_none, action: ActionSpec, degree_bound: int, exact: bool = False) -> SmashReport:
    """tr_{B_A}(b) - eps(t)(alpha . b) in [B, B] for every basis element b of B up to the bound."""
    ring = SmashProduct(action)
    gd = galois_dual_basis(ring)
    H = action.hopf
    et = H.eps(H.t)
    rep = SmashReport()
    rep.checks["beta_is_one_tensor_t"] = gd.beta_is_one_tensor_t()
    rep.checks["alpha_t_is_one"] = H.pair(H.alpha, H.t) == ONE
    frob = True
    mod_ok = True
    exact_ok = True
    failures = []
    for d in range(degree_bound + 1):
        comm = commutator_span(ring, d)
        for b in ring.homogeneous_basis(d):
            if d <= 2 and not gd.frobenius_identities(b):
                frob = False
            diff = ring.element(gd.trace(b) - gd.theta(b).scale(et))
            if not diff.is_zero():
                exact_ok = False
            if not comm.contains(diff.vector()):
                mod_ok = False
                failures.append(str(b))
    rep.checks["frobenius_system"] = frob
    rep.checks["mod_commutator"] = mod_ok
    if exact:
        rep.checks["exact_equality"] = exact_ok
    rep.details["exact_equality_holds"] = exact_ok
    rep.details["failures"] = failures[:10]
    rep.galois = gd
    return rep


def algebra_commutator_span(pres, d: int) -> SpanBasis:
    """Span of uv - vu over normal words u, v of A with deg u + deg v = d."""
    sb = SpanBasis()
    for du in range(d + 1):
        for u in monomial_basis(pres, du):
            for v in monomial_basis(pres, d - du):
                x, y = pres.word(u), pres.word(v)
                sb.add((x * y - y * x).terms)
    return sb


def in_commutators(a: NCPoly) -> bool:
    """Homogeneous components of a all lie in [A, A]."""
    return all(algebra_commutator_span(a.pres, d).contains(a.component(d).terms) for d in a.degrees())


def dual_integral_operator(H: HopfAlgebra) -> dict:
    """eps_K(t_K) alpha_K for K = H*, written in the basis of H = K*."""
    K = H.dual()
    scale = K.eps(K.t)
    return {i: c * scale for i, c in K.alpha.items() if c}


def dual_galois_check(basis: FreeBasis, action: ActionSpec, probes: Sequence[NCPoly], localizer: NCPoly | None = None) -> SmashReport:
    """Trace lemma for B^H in B (B an H*-Galois object after localisation) on probe elements.

    tr is the trace of the right B^H-module B; the comparison operator is
    eps_K(t_K) alpha_K acting through H.
    """
    rep = SmashReport()
    H = action.hopf
    op = dual_integral_operator(H)
    rep.details["operator"] = H.render(op)
    rep.details["non_central"] = True
    exact_all = True
    mod_all = True
    rows = []
    for b in probes:
        tr = basis.hs_trace(b)
        tr_a = basis.central.expand(tr)
        rhs = action.act(op, b)
        t_b = action.act(H.t, b)
        diff = tr_a - rhs
        exact = diff.is_zero()
        mod = diff.is_zero() or in_commutators(diff)
        via_localizer = False
        if not mod and localizer is not None:
            mod = in_commutators(localizer * diff) and in_commutators(diff * localizer)
            via_localizer = mod
        rows.append(
            {
                "probe": str(b),
                "trace": str(tr),
                "t_acting": str(t_b),
                "operator_acting": str(rhs),
                "exact_equality": exact,
                "mod_commutator": mod,
                "needs_localizer": via_localizer,
            }
        )
        exact_all &= exact
        mod_all &= mod
    rep.details["probes"] = rows
    rep.checks["mod_commutator"] = mod_all
    rep.checks["exact_equality"] = exact_all
    return rep
