"""Hopf actions on presented algebras: invariants, Jacobian, arrangement and the main-theorem checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .commpoly import CommPoly
from .graded_module import FreeBasis, frobenius_theta
from .hopf import Character, HopfAlgebra, h2n2_hopf
from .linalg import NoSolution, NonUnique, nullspace, solve_unique
from .ncpoly import NCPoly, Presentation, monomial_basis
from .scalar import ONE, ZERO, Cyclo, as_scalar, zeta

__all__ = [
    "ActionError",
    "ActionSpec",
    "MainTheoremReport",
    "arrangement",
    "discriminant_invariant",
    "h2n2",
    "homogeneous_divide",
    "invariant_basis",
    "jacobian",
    "relative_invariants",
    "reynolds",
    "verify_main_theorem",
]

Matrix = list


class ActionError(ValueError):
    pass


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(len(b)) if a[i][k] and b[k][j]), ZERO) for j in range(m)] for i in range(n)]


def _identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


class ActionSpec:
    """Left action of a Hopf algebra on a presented algebra, fixed by its matrices on generators.

    Column j of ``matrices[h]`` is h acting on generator j.
    """

    def __init__(self, hopf: HopfAlgebra, pres: Presentation, matrices: Sequence[Matrix]):
        if len(matrices) != hopf.dim:
            raise ActionError("one matrix per Hopf basis element is required")
        n = len(pres.names)
        self.hopf = hopf
        self.pres = pres
        self.matrices = [[[as_scalar(c) for c in row] for row in m] for m in matrices]
        for m in self.matrices:
            if len(m) != n or any(len(row) != n for row in m):
                raise ActionError("action matrices must be square in the number of generators")
            for r in range(n):
                for j in range(n):
                    if m[r][j] and pres.degrees[r] != pres.degrees[j]:
                        raise ActionError("action must preserve generator degrees")
        self._memo: dict = {}

    @classmethod
    def from_generators(cls, hopf: HopfAlgebra, pres: Presentation, gen_matrices: Mapping[int, Matrix]) -> "ActionSpec":
        """Extend matrices given on algebra generators of H to every basis element."""
        n = len(pres.names)
        known: dict[int, Matrix] = {}
        if len(hopf.unit) != 1 or next(iter(hopf.unit.values())) != ONE:
            raise ActionError("unit of H must be a basis element")
        known[next(iter(hopf.unit))] = _identity(n)
        gm = {g: [[as_scalar(c) for c in row] for row in m] for g, m in gen_matrices.items()}
        frontier = list(known)
        while frontier:
            nxt = []
            for i in frontier:
                for g, mg in gm.items():
                    prod = hopf.mult[(i, g)]
                    if len(prod) != 1:
                        continue
                    (k, c), = prod.items()
                    if k in known:
                        continue
                    inv = c.inverse()
                    known[k] = [[v * inv for v in row] for row in _matmul(known[i], mg)]
                    nxt.append(k)
            frontier = nxt
        if len(known) != hopf.dim:
            raise ActionError("generator matrices do not reach every basis element of H")
        return cls(hopf, pres, [known[i] for i in range(hopf.dim)])

    # -- action -------------------------------------------------------------

    def act_basis_word(self, i: int, w: tuple) -> NCPoly:
        key = (i, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        pres = self.pres
        if not w:
            val = pres.scalar(self.hopf.counit[i])
        elif len(w) == 1:
            m = self.matrices[i]
            j = w[0]
            val = NCPoly(pres, {(r,): m[r][j] for r in range(len(m)) if m[r][j]}, normalized=True)
        else:
            val = pres.zero()
            for (a, b), c in self.hopf.comult[i].items():
                left = self.act_basis_word(a, w[:1])
                if left.is_zero():
                    continue
                right = self.act_basis_word(b, w[1:])
                if right.is_zero():
                    continue
                val = val + (left * right).scale(c)
        self._memo[key] = val
        return val

    def act(self, h: Mapping[int, Cyclo] | int, a: NCPoly) -> NCPoly:
        if isinstance(h, int):
            h = {h: ONE}
        out = self.pres.zero()
        for i, c in h.items():
            for w, v in a.terms.items():
                out = out + self.act_basis_word(i, w).scale(c * v)
        return out

    def matrix_of(self, h: Mapping[int, Cyclo]) -> Matrix:
        n = len(self.pres.names)
        out = [[ZERO] * n for _ in range(n)]
        for i, c in h.items():
            m = self.matrices[i]
            for r in range(n):
                for j in range(n):
                    if m[r][j]:
                        out[r][j] = out[r][j] + c * m[r][j]
        return out

    # -- checks -------------------------------------------------------------

    def check_representation(self) -> list[str]:
        H = self.hopf
        fails = []
        if self.matrix_of(H.unit) != _identity(len(self.pres.names)):
            fails.append("unit does not act as the identity")
        for i in range(H.dim):
            for j in range(H.dim):
                if _matmul(self.matrices[i], self.matrices[j]) != self.matrix_of(H.mult[(i, j)]):
                    fails.append(f"M({H.labels[i]})M({H.labels[j]}) != M({H.labels[i]}*{H.labels[j]})")
                    return fails
        return fails

    def check_relations(self) -> list[str]:
        """h acting on each rule lhs (taken as a raw word) must equal h acting on its rhs."""
        fails = []
        pres = self.pres
        for r in pres.rules:
            rhs = NCPoly(pres, r.rhs_dict())
            for i in range(self.hopf.dim):
                if self.act_basis_word(i, r.lhs) != self.act(i, rhs):
                    fails.append(f"{self.hopf.labels[i]} does not preserve {pres.render_rule(r)}")
                    break
        return fails

    def check_module_algebra(self, max_degree: int = 2) -> list[str]:
        """h(uv) = sum (h_1 u)(h_2 v) on pairs of normal words of total degree <= max_degree."""
        pres = self.pres
        H = self.hopf
        words = [w for d in range(1, max_degree) for w in monomial_basis(pres, d)]
        for u in words:
            for v in words:
                if pres.word_degree(u) + pres.word_degree(v) > max_degree:
                    continue
                prod = pres.word(u) * pres.word(v)
                for i in range(H.dim):
                    lhs = self.act(i, prod)
                    rhs = pres.zero()
                    for (a, b), c in H.comult[i].items():
                        rhs = rhs + (self.act(a, pres.word(u)) * self.act(b, pres.word(v))).scale(c)
                    if lhs != rhs:
                        return [f"module-algebra law fails for {H.labels[i]} on {pres.render_word(u)}, {pres.render_word(v)}"]
        return []


def reynolds(a: NCPoly, action: ActionSpec) -> NCPoly:
    H = action.hopf
    e = H.eps(H.t)
    if not e:
        raise ActionError("eps(t) = 0: the Hopf algebra is not semisimple")
    return action.act(H.t, a).scale(e.inverse())


def relative_invariants(action: ActionSpec, chi: Character, d: int) -> list[NCPoly]:
    """Basis of {a in A_d : h a = chi(h) a} (canonical, sorted)."""
    pres = action.pres
    words = monomial_basis(pres, d)
    rows: dict = {}
    for g in action.hopf.generators:
        val = chi.values[g]
        for w in words:
            image = action.act_basis_word(g, w)
            col = dict(image.terms)
            col[w] = col.get(w, ZERO) - val
            for x, c in col.items():
                if c:
                    rows.setdefault((g, x), {})[w] = c
    null = nullspace(list(rows.values()), list(words))
    out = [NCPoly(pres, v, normalized=True).canonical() for v in null]
    out.sort(key=lambda p: [pres.key(w) for w, _ in p.sorted_terms()])
    return out


def invariant_basis(action: ActionSpec, d: int) -> list[NCPoly]:
    return relative_invariants(action, Character.counit(action.hopf), d)


@dataclass
class GeneratorResult:
    element: NCPoly | None
    degree: int | None
    free_ok: bool
    message: str = ""


def _rank_one_generator(action: ActionSpec, chi: Character, R, degree: int | None, bound: int) -> GeneratorResult:
    found = None
    if degree is None:
        for d in range(bound + 1):
            sp = relative_invariants(action, chi, d)
            if sp:
                degree = d
                found = sp
                break
        if found is None:
            return GeneratorResult(None, None, False, f"no relative invariants up to degree {bound}")
    else:
        found = relative_invariants(action, chi, degree)
    if len(found) != 1:
        return GeneratorResult(None, degree, False, f"relative invariants of degree {degree} have dimension {len(found)}")
    g = found[0]
    ok = True
    msg = ""
    if R is not None:
        for d in range(bound + 1):
            sp = relative_invariants(action, chi, d)
            mons = R.monomials(d - degree)
            if len(sp) != len(mons):
                ok = False
                msg = f"dimension {len(sp)} != {len(mons)} central multiples in degree {d}"
                break
            for side in ("left", "right"):
                cols = {}
                for e in mons:
                    m = R.expand_monomial(e)
                    cols[e] = (m * g if side == "left" else g * m).terms
                for s in sp:
                    try:
                        solve_unique(cols, s.terms)
                    except (NoSolution, NonUnique):
                        ok = False
                        msg = f"{side} multiples of the generator do not give degree {d}"
                        break
            if not ok:
                break
    return GeneratorResult(g, degree, ok, msg)


def jacobian(action: ActionSpec, hdet: Character, expected_degree: int | None = None, R=None, bound: int | None = None) -> GeneratorResult:
    """Free generator of A^{hdet^{-1}}."""
    bound = bound if bound is not None else (expected_degree or 0) + 4
    return _rank_one_generator(action, hdet.inverse(), R, expected_degree, bound)


def arrangement(action: ActionSpec, hdet: Character, R=None, bound: int = 12, degree: int | None = None) -> GeneratorResult:
    """Free generator of A^{hdet}, located by scanning degrees."""
    return _rank_one_generator(action, hdet, R, degree, bound)


def homogeneous_divide(f: NCPoly, g: NCPoly, side: str = "left") -> NCPoly | None:
    """q with f = q*g (side='left') or f = g*q (side='right'); None if none exists."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero element")
    if f.is_zero():
        return f.pres.zero()
    d = f.degree() - g.degree()
    if d < 0:
        return None
    pres = f.pres
    cols = {}
    for w in monomial_basis(pres, d):
        cols[w] = (pres.word(w) * g if side == "left" else g * pres.word(w)).terms
    try:
        x = solve_unique(cols, f.terms)
    except NoSolution:
        return None
    except NonUnique:
        # zero divisors: fall back to any solution
        from .linalg import SpanBasis

        sb = SpanBasis(track=True)
        for w, c in cols.items():
            sb.add(c, w)
        x = sb.express(f.terms)
        if x is None:
            return None
    return NCPoly(pres, x, normalized=True)


def divides_two_sided(f: NCPoly, g: NCPoly) -> bool:
    """g divides f on both sides."""
    return homogeneous_divide(f, g, "left") is not None and homogeneous_divide(f, g, "right") is not None


@dataclass
class InvariantDiscriminant:
    delta: NCPoly
    left_right_agree: bool


def discriminant_invariant(j: NCPoly, a: NCPoly) -> InvariantDiscriminant:
    aj = a * j
    ja = j * a
    return InvariantDiscriminant(aj.canonical(), aj.equal_up_to_scalar(ja))


# -- main theorem -------------------------------------------------------------------


@dataclass
class MainTheoremReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "details": dict(self.details)}


def verify_main_theorem(
    basis: FreeBasis,
    action: ActionSpec,
    hdet: Character,
    j: NCPoly | None = None,
    a: NCPoly | None = None,
) -> MainTheoremReport:
    rep = MainTheoremReport()
    R = basis.central
    n = basis.rank
    if j is None:
        jr = jacobian(action, hdet, basis.top_degree, R, 2 * basis.top_degree)
        j = jr.element
        rep.checks["jacobian_free"] = jr.free_ok and j is not None
    if a is None:
        ar = arrangement(action, hdet, R, bound=basis.top_degree + 2)
        a = ar.element
        rep.checks["arrangement_free"] = ar.free_ok and a is not None
    if j is None or a is None:
        rep.checks["generators_found"] = False
        return rep
    d = basis.discriminant()
    d_in_A = R.expand(d)
    jn = j**n
    rep.details["discriminant"] = str(d)
    rep.details["jacobian"] = str(j)
    rep.details["arrangement"] = str(a)
    rep.details["rank"] = n
    rep.checks["d_equals_j_power_rank"] = d_in_A.equal_up_to_scalar(jn)
    inv = discriminant_invariant(j, a)
    delta = inv.delta
    rep.details["delta"] = str(delta)
    rep.checks["aj_equals_ja"] = inv.left_right_agree
    rep.checks["delta_divides_d"] = divides_two_sided(d_in_A, delta)
    rep.checks["d_divides_delta_power"] = divides_two_sided(delta**n, d_in_A)
    fd = frobenius_theta(basis)
    traces = basis.basis_traces()
    theta_j = [fd.theta(j * b) for b in basis.elements]
    rep.checks["trace_is_theta_j"] = _proportional(traces, theta_j)
    rep.checks["theta_semi_invariant"] = _theta_semi_invariant(basis, fd, action, hdet)
    rep.checks["trace_equivariant"] = _trace_equivariant(basis, action)
    return rep


def _proportional(u: Sequence[CommPoly], v: Sequence[CommPoly]) -> bool:
    """u = c v for a nonzero scalar c."""
    ratio = None
    for x, y in zip(u, v):
        if x.is_zero() != y.is_zero():
            return False
        if x.is_zero():
            continue
        if ratio is None:
            ey, cy = y.leading()
            cx = dict(x.with_gens(y.gens).terms).get(ey)
            if cx is None:
                return False
            ratio = cx / cy
        if x != y * ratio:
            return False
    return ratio is not None


def _theta_semi_invariant(basis: FreeBasis, fd, action: ActionSpec, hdet: Character) -> bool:
    """(h . theta)(b) = theta(S(h) b) equals hdet(h) theta(b) on the basis."""
    H = action.hopf
    for i in range(H.dim):
        s = H.S(H.basis(i))
        for b in basis.elements:
            if fd.theta(action.act(s, b)) != fd.theta(b) * hdet.values[i]:
                return False
    return True


def _trace_equivariant(basis: FreeBasis, action: ActionSpec) -> bool:
    """tr(h a) = eps(h) tr(a) on products of basis elements."""
    H = action.hopf
    for bi in basis.elements:
        for bj in basis.elements:
            p = bi * bj
            tp = basis.trace_of_coeffs(basis.decompose(p))
            for g in H.generators:
                if basis.trace_of_coeffs(basis.decompose(action.act(g, p))) != tp * H.counit[g]:
                    return False
    return True


# -- the H_{2n^2} family ------------------------------------------------------------


def h2n2(n: int, i: int, j: int, relation_scalar: Cyclo | None = None):
    """(H, A, action, hdet) for H_{2n^2} acting on k<u,v>/(vu - p^{i^2-j^2} uv).

    p = -exp(pi i/n) = zeta_{2n}^{n+1} and q = zeta_n.  ``relation_scalar``
    overrides the skew parameter of A (the action formulas are unchanged).
    """
    if not (0 <= i < n and 0 <= j < n):
        raise ActionError("need 0 <= i, j <= n-1")
    H = h2n2_hopf(n)
    q = zeta(n, 1)
    p = zeta(2 * n, n + 1)
    c = relation_scalar if relation_scalar is not None else p ** (i * i - j * j)
    A = Presentation(("u", "v"), [((1, 0), {(0, 1): c})])
    idx = H.h2n2_index
    mx = [[q**i, ZERO], [ZERO, q**j]]
    my = [[q**j, ZERO], [ZERO, q**i]]
    mz = [[ZERO, ONE], [q ** (i * j), ZERO]]
    action = ActionSpec.from_generators(H, A, {idx(1, 0, 0): mx, idx(0, 1, 0): my, idx(0, 0, 1): mz})
    hx = q ** (i + j)
    hz = -(p ** ((i + j) ** 2))
    vals = []
    for e in range(2):
        for a in range(n):
            for b in range(n):
                vals.append(hx ** (a + b) * (hz if e else ONE))
    return H, A, action, Character(H, vals)
