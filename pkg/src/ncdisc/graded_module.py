"""Free bases over a central subalgebra, Hattori-Stallings traces, discriminants and Frobenius data.

Coefficients in R are returned as :class:`CommPoly` in the names of the
central generators; :meth:`CentralSubalgebra.expand` maps them back into A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .commpoly import CommPoly, canonical_up_to_scalar, determinant
from .linalg import NonUnique, NoSolution, SpanBasis, solve_unique
from .ncpoly import NCPoly, Presentation, monomial_basis, series_coefficients
from .scalar import ONE, ZERO

__all__ = [
    "CentralSubalgebra",
    "DegenerateTraceForm",
    "FreeBasis",
    "FrobeniusData",
    "NoSolution",
    "NonUnique",
    "decompose",
    "different_omega",
    "discriminant",
    "find_free_basis",
    "frobenius_theta",
    "hs_trace",
    "nakayama_on_generators",
    "norm",
    "trace_matrix",
    "verify_central",
    "verify_free_basis",
]


class DegenerateTraceForm(ArithmeticError):
    pass


class CentralSubalgebra:
    """Polynomial subalgebra R of A generated by named homogeneous elements.

    Generators are kept sorted by name so that CommPoly exponent tuples line up
    with ``self.names``.
    """

    def __init__(self, pres: Presentation, generators: Sequence[tuple[str, NCPoly]]):
        gens = sorted(generators, key=lambda g: g[0])
        names = tuple(g[0] for g in gens)
        if len(set(names)) != len(names):
            raise ValueError("central generator names must be distinct")
        clash = set(names) & set(pres.names)
        if clash:
            raise ValueError(f"central names clash with algebra generators: {sorted(clash)}")
        self.pres = pres
        self.names = names
        self.defs = tuple(g[1] for g in gens)
        for n, d in zip(names, self.defs):
            if d.is_zero() or not d.is_homogeneous():
                raise ValueError(f"central generator {n} must be a nonzero homogeneous element")
        self.degrees = tuple(d.degree() for d in self.defs)
        self._mono_cache: dict[int, list[tuple[int, ...]]] = {}
        self._expand_cache: dict[tuple[int, ...], NCPoly] = {(0,) * len(names): pres.one()}

    @classmethod
    def parse(cls, pres: Presentation, items: Sequence[tuple[str, str]]) -> "CentralSubalgebra":
        return cls(pres, [(name, pres.parse(text)) for name, text in items])

    def monomials(self, d: int) -> list[tuple[int, ...]]:
        """Exponent vectors of central monomials of degree d."""
        if d < 0:
            return []
        hit = self._mono_cache.get(d)
        if hit is not None:
            return hit
        out: list[tuple[int, ...]] = []
        degs = self.degrees

        def rec(i, left, acc):
            if i == len(degs):
                if left == 0:
                    out.append(tuple(acc))
                return
            for e in range(left // degs[i] + 1):
                acc.append(e)
                rec(i + 1, left - e * degs[i], acc)
                acc.pop()

        rec(0, d, [])
        out.sort()
        self._mono_cache[d] = out
        return out

    def expand_monomial(self, e: tuple[int, ...]) -> NCPoly:
        hit = self._expand_cache.get(e)
        if hit is not None:
            return hit
        i = max(k for k, x in enumerate(e) if x)
        prev = e[:i] + (e[i] - 1,) + e[i + 1 :]
        val = self.expand_monomial(prev) * self.defs[i]
        self._expand_cache[e] = val
        return val

    def expand(self, f: CommPoly) -> NCPoly:
        """Image of a polynomial in the central names inside A."""
        f = f.with_gens(tuple(sorted(set(f.gens) | set(self.names))))
        if f.gens != self.names:
            raise ValueError(f"unknown central variables in {f}")
        out = self.pres.zero()
        for e, c in f.terms.items():
            out = out + self.expand_monomial(e).scale(c)
        return out

    def poly(self, terms: dict) -> CommPoly:
        return CommPoly(self.names, terms, _trusted=True)

    def variable(self, name: str) -> CommPoly:
        return CommPoly.var(name).with_gens(self.names)


def verify_central(central: CentralSubalgebra, pres: Presentation | None = None) -> bool:
    pres = pres or central.pres
    for g in central.defs:
        for i in range(len(pres.names)):
            x = pres.gen(i)
            if not (g * x - x * g).is_zero():
                return False
    return True


@dataclass
class FreeReport:
    ok: bool
    rows: list = field(default_factory=list)  # (degree, dim A_d, expected from basis, verdict)
    failure: str | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "failure": self.failure,
            "degrees": [{"degree": d, "dim": a, "from_basis": b, "ok": v} for d, a, b, v in self.rows],
        }


class FreeBasis:
    """A homogeneous basis of A as a module over a central subalgebra.

    ``side`` selects right (a = sum b_k r_k) or left (a = sum r_k b_k)
    coefficients; the two agree when R is central.
    """

    def __init__(self, central: CentralSubalgebra, elements: Sequence[NCPoly], side: str = "right"):
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        self.central = central
        self.pres = central.pres
        self.elements = tuple(elements)
        for b in self.elements:
            if b.is_zero() or not b.is_homogeneous():
                raise ValueError("basis elements must be nonzero and homogeneous")
        self.degrees = tuple(b.degree() for b in self.elements)
        self.side = side
        self._solvers: dict[int, SpanBasis] = {}
        self._table: dict | None = None
        self._traces: list | None = None
        self._central_ok: bool | None = None

    @property
    def rank(self) -> int:
        return len(self.elements)

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def _column(self, k: int, e: tuple[int, ...]) -> NCPoly:
        m = self.central.expand_monomial(e)
        b = self.elements[k]
        return b * m if self.side == "right" else m * b

    def solver(self, d: int) -> SpanBasis:
        sb = self._solvers.get(d)
        if sb is None:
            sb = SpanBasis(track=True)
            for k, dk in enumerate(self.degrees):
                for e in self.central.monomials(d - dk):
                    sb.add(self._column(k, e).terms, (k, e))
            self._solvers[d] = sb
        return sb

    def decompose(self, a: NCPoly) -> list[CommPoly]:
        """Coefficients r_k in R with a = sum b_k r_k (right) or sum r_k b_k (left)."""
        coeffs: list[dict] = [{} for _ in self.elements]
        for d in sorted(a.degrees()):
            sb = self.solver(d)
            if sb.dependent:
                raise NonUnique(f"basis is not free in degree {d}")
            x = sb.express(a.component(d).terms)
            if x is None:
                raise NoSolution(f"{a.component(d)} is not in the span of the basis over R")
            for (k, e), c in x.items():
                coeffs[k][e] = coeffs[k].get(e, ZERO) + c
        return [self.central.poly({e: c for e, c in ck.items() if c}) for ck in coeffs]

    def recombine(self, coeffs: Sequence[CommPoly]) -> NCPoly:
        out = self.pres.zero()
        for b, r in zip(self.elements, coeffs):
            m = self.central.expand(r)
            out = out + (b * m if self.side == "right" else m * b)
        return out

    # -- traces -------------------------------------------------------------

    def hs_trace(self, a: NCPoly) -> CommPoly:
        """Trace of left multiplication by a on the right module (by definition)."""
        total = self.central.poly({})
        for k, b in enumerate(self.elements):
            total = total + self.decompose(a * b)[k]
        return total

    def table(self) -> dict:
        """Decomposition table: (i, j) -> coefficients of b_i b_j."""
        if self._table is None:
            n = self.rank
            self._table = {(i, j): self.decompose(self.elements[i] * self.elements[j]) for i in range(n) for j in range(n)}
        return self._table

    def basis_traces(self) -> list[CommPoly]:
        if self._traces is None:
            t = self.table()
            n = self.rank
            self._traces = [sum((t[(k, m)][m] for m in range(n)), self.central.poly({})) for k in range(n)]
        return self._traces

    def trace_of_coeffs(self, coeffs: Sequence[CommPoly]) -> CommPoly:
        tr = self.basis_traces()
        return sum((r * t for r, t in zip(coeffs, tr)), self.central.poly({}))

    @property
    def is_central(self) -> bool:
        if self._central_ok is None:
            self._central_ok = verify_central(self.central)
        return self._central_ok

    def trace_matrix(self) -> list[list[CommPoly]]:
        """[tr(b_i b_j)]; through the table and R-linearity when R is central, directly otherwise."""
        if not self.is_central:
            return self.trace_matrix_direct()
        t = self.table()
        n = self.rank
        return [[self.trace_of_coeffs(t[(i, j)]) for j in range(n)] for i in range(n)]

    def trace_matrix_direct(self) -> list[list[CommPoly]]:
        n = self.rank
        return [[self.hs_trace(self.elements[i] * self.elements[j]) for j in range(n)] for i in range(n)]

    def discriminant_raw(self) -> CommPoly:
        return determinant(self.trace_matrix())

    def discriminant(self) -> CommPoly:
        d = self.discriminant_raw()
        if d.is_zero():
            raise DegenerateTraceForm("trace form is degenerate (zero determinant)")
        return canonical_up_to_scalar(d)

    def left_multiplication_matrix(self, a: NCPoly) -> list[list[CommPoly]]:
        cols = [self.decompose(a * b) for b in self.elements]
        n = self.rank
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self, a: NCPoly) -> CommPoly:
        return determinant(self.left_multiplication_matrix(a))

    # -- verification -------------------------------------------------------

    def verify(self, D: int) -> FreeReport:
        rep = FreeReport(ok=True)
        for d in range(D + 1):
            words = monomial_basis(self.pres, d)
            expected = sum(len(self.central.monomials(d - dk)) for dk in self.degrees)
            sb = self.solver(d)
            good = len(words) == expected and not sb.dependent
            if good:
                for w in words:
                    if sb.express({w: ONE}) is None:
                        good = False
                        break
            rep.rows.append((d, len(words), expected, good))
            if not good and rep.ok:
                rep.ok = False
                rep.failure = f"degree {d}: dim A_d = {len(words)}, basis gives {expected}" + (
                    ", dependent" if sb.dependent else ""
                )
        return rep


def find_free_basis(pres: Presentation, central: CentralSubalgebra, D: int, side: str = "right") -> FreeBasis:
    """Greedy degree-by-degree choice of normal words completing R-multiples of earlier picks."""
    expected_rank = _expected_rank(pres, central)
    picks: list[tuple[int, ...]] = []
    for d in range(D + 1):
        sb = SpanBasis()
        for w in picks:
            dw = pres.word_degree(w)
            for e in central.monomials(d - dw):
                m = central.expand_monomial(e)
                col = pres.word(w) * m if side == "right" else m * pres.word(w)
                sb.add(col.terms)
        for w in monomial_basis(pres, d):
            if sb.add({w: ONE}):
                picks.append(w)
        if expected_rank is not None and len(picks) > expected_rank:
            raise NoSolution(f"rank {expected_rank} exceeded at degree {d}; A is not free over R or R is wrong")
    if expected_rank is not None and len(picks) != expected_rank:
        raise NoSolution(f"found {len(picks)} basis elements up to degree {D}, expected {expected_rank}")
    return FreeBasis(central, [pres.word(w) for w in picks], side=side)


def _expected_rank(pres: Presentation, central: CentralSubalgebra) -> int | None:
    """Value at t=1 of h_A/h_R when a Hilbert series is declared."""
    if pres.hilbert is None:
        return None
    num, den = pres.hilbert
    t = CommPoly.var("t")
    for d in central.degrees:
        num = num * (1 - t**d)
    coeffs = series_coefficients(num, den, 200)
    if any(coeffs[150:]):
        return None
    total = sum((c for c in coeffs), ZERO)
    return int(total.to_fraction())


def quotient_series(pres: Presentation, central: CentralSubalgebra, upto: int = 64) -> list[int]:
    """Coefficients of h_A/h_R (the expected degree distribution of a free basis)."""
    num, den = pres.hilbert
    t = CommPoly.var("t")
    for d in central.degrees:
        num = num * (1 - t**d)
    coeffs = [int(c.to_fraction()) for c in series_coefficients(num, den, upto)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


# -- Frobenius data -----------------------------------------------------------


@dataclass
class FrobeniusData:
    basis: FreeBasis
    top: int
    theta_values: list = field(default_factory=list)
    pairing_det: CommPoly | None = None
    omega: NCPoly | None = None
    nakayama: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        d = self.pairing_det
        return d is not None and d.is_constant() and not d.is_zero()

    def theta(self, a: NCPoly) -> CommPoly:
        return self.basis.decompose(a)[self.top]


def frobenius_theta(basis: FreeBasis) -> FrobeniusData:
    """theta = dual functional of the unique top-degree basis element, with its validity test."""
    top_deg = basis.top_degree
    tops = [k for k, d in enumerate(basis.degrees) if d == top_deg]
    if len(tops) != 1:
        raise ValueError("basis must have exactly one element of maximal degree")
    fd = FrobeniusData(basis=basis, top=tops[0])
    table = basis.table()
    n = basis.rank
    fd.theta_values = [[table[(i, j)][fd.top] for j in range(n)] for i in range(n)]
    fd.pairing_det = determinant(fd.theta_values)
    return fd


def _solve_words(fd: FrobeniusData, degree: int, target: list[CommPoly], left_factor: bool) -> NCPoly:
    """Homogeneous w of the given degree with theta(w b_j) = target_j."""
    basis = fd.basis
    pres = basis.pres
    words = monomial_basis(pres, degree)
    columns = {}
    for w in words:
        wp = pres.word(w)
        col = {}
        for j, b in enumerate(basis.elements):
            val = fd.theta(wp * b)
            for e, c in val.terms.items():
                col[(j, e)] = c
        columns[w] = col
    rhs = {}
    for j, tv in enumerate(target):
        for e, c in tv.terms.items():
            rhs[(j, e)] = c
    x = solve_unique(columns, rhs)
    return NCPoly(pres, x, normalized=True)


def different_omega(fd: FrobeniusData) -> NCPoly:
    """The omega of degree l with theta(omega * b) = tr(b) for every basis element b."""
    omega = _solve_words(fd, fd.basis.top_degree, fd.basis.basis_traces(), True)
    fd.omega = omega
    return omega


def nakayama_on_generators(fd: FrobeniusData) -> dict[str, NCPoly]:
    """mu(g) for every generator g, from theta(mu(g) b) = theta(b g)."""
    basis = fd.basis
    pres = basis.pres
    out = {}
    for i, name in enumerate(pres.names):
        g = pres.gen(i)
        target = [fd.theta(b * g) for b in basis.elements]
        out[name] = _solve_words(fd, pres.degrees[i], target, True)
    fd.nakayama = out
    return out


def apply_algebra_map(images: dict[str, NCPoly], a: NCPoly) -> NCPoly:
    """Extend a generator assignment multiplicatively and linearly to a."""
    pres = a.pres
    out = pres.zero()
    for w, c in a.terms.items():
        t = pres.one()
        for letter in w:
            t = t * images[pres.names[letter]]
        out = out + t.scale(c)
    return out


def nakayama_respects_relations(mu: dict[str, NCPoly], pres: Presentation) -> bool:
    """mu(lhs) == mu(rhs) for every rule, computed without reducing lhs first."""
    for r in pres.rules:
        left = pres.one()
        for letter in r.lhs:
            left = left * mu[pres.names[letter]]
        right = apply_algebra_map(mu, NCPoly(pres, r.rhs_dict()))
        if left != right:
            return False
    return True


def mu_normal(mu: dict[str, NCPoly], omega: NCPoly) -> bool:
    pres = omega.pres
    return all((mu[name] * omega - omega * pres.gen(name)).is_zero() for name in pres.names)


# -- functional wrappers ---------------------------------------------------------


def decompose(a: NCPoly, basis: FreeBasis) -> list[CommPoly]:
    return basis.decompose(a)


def verify_free_basis(basis: FreeBasis, D: int) -> FreeReport:
    return basis.verify(D)


def hs_trace(a: NCPoly, basis: FreeBasis) -> CommPoly:
    return basis.hs_trace(a)


def trace_matrix(basis: FreeBasis) -> list[list[CommPoly]]:
    return basis.trace_matrix()


def discriminant(basis: FreeBasis) -> CommPoly:
    return basis.discriminant()


def norm(a: NCPoly, basis: FreeBasis) -> CommPoly:
    return basis.norm(a)
