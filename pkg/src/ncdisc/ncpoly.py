"""Noncommutative polynomials reduced by a graded rewriting system.

Words are tuples of generator indices.  The monomial order compares weighted
degree first, then the index tuples lexicographically, so ``x < y`` makes
``y*x -> ...`` the natural orientation of a skew relation.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .commpoly import CommPoly, parse_commpoly
from .expr import Builder, ParseError, parse
from .scalar import ONE, ZERO, Cyclo, as_scalar

__all__ = [
    "NCPoly",
    "Presentation",
    "RewriteBudgetExceeded",
    "OrientationError",
    "CriticalPair",
    "HilbertReport",
    "check_local_confluence",
    "hilbert_check",
    "monomial_basis",
    "normal_form",
    "parse_expr",
    "parse_series",
    "series_coefficients",
]

Word = tuple
STEP_BUDGET = 10**6

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class RewriteBudgetExceeded(RuntimeError):
    def __init__(self, word, budget):
        self.word = word
        super().__init__(f"rewrite step budget {budget} exceeded while reducing {word}")


class OrientationError(ValueError):
    pass


# free-algebra dicts (word -> scalar) used before a presentation exists


def _free_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, ZERO) + (c if sign > 0 else -c)
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def _free_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, c in a.items():
        for v, d in b.items():
            w = u + v
            s = out.get(w, ZERO) + c * d
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


class _FreeBuilder(Builder):
    def __init__(self, names: Sequence[str], text: str):
        self.index = {n: i for i, n in enumerate(names)}
        self.text = text

    def scalar(self, c):
        return {(): c} if c else {}

    def ident(self, name, pos):
        if name not in self.index:
            raise ParseError(f"unknown identifier {name!r}", self.text, pos)
        return {(self.index[name],): ONE}

    def add(self, a, b):
        return _free_add(a, b)

    def sub(self, a, b):
        return _free_add(a, b, -1)

    def mul(self, a, b):
        return _free_mul(a, b)

    def neg(self, a):
        return {w: -c for w, c in a.items()}

    def power(self, a, k):
        out = {(): ONE}
        for _ in range(k):
            out = _free_mul(out, a)
        return out


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: tuple  # ((word, scalar), ...)

    def rhs_dict(self) -> dict:
        return dict(self.rhs)


class Presentation:
    """Generators with positive degrees and oriented homogeneous rewrite rules."""

    def __init__(
        self,
        names: Sequence[str],
        rules: Iterable[tuple[Word, Mapping[Word, Cyclo]]] = (),
        degrees: Sequence[int] | None = None,
        hilbert: tuple[CommPoly, CommPoly] | None = None,
        fast_path: bool = True,
        budget: int = STEP_BUDGET,
    ):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        self.names = names
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(names)
        if len(self.degrees) != len(names) or any(d < 1 for d in self.degrees):
            raise ValueError("generator degrees must be positive integers, one per generator")
        self.rules: tuple[Rule, ...] = tuple(
            Rule(tuple(l), tuple(sorted(((tuple(w), as_scalar(c)) for w, c in r.items() if c), key=lambda t: self.key(t[0]))))
            for l, r in rules
        )
        self.hilbert = hilbert
        self.budget = budget
        self._check_orientation()
        self._by_last: dict[int, list[Rule]] = {}
        for rule in self.rules:
            self._by_last.setdefault(rule.lhs[-1], []).append(rule)
        self._qa = self._quantum_affine_table() if fast_path else None
        self._append_memo: dict = {}
        self._mul_memo: dict = {}
        self._steps = 0
        self._depth = 0

    # -- construction helpers ----------------------------------------------

    @classmethod
    def from_relations(
        cls,
        names: Sequence[str],
        relations: Iterable[str],
        degrees: Sequence[int] | None = None,
        **kw,
    ) -> "Presentation":
        """Build from relation strings ``"lhs = rhs"`` or ``"poly"`` (meaning poly = 0)."""
        names = tuple(names)
        degs = tuple(degrees) if degrees is not None else (1,) * len(names)
        rules = []
        for text in relations:
            if "=" in text:
                left, _, right = text.partition("=")
                poly = _free_add(parse(left, _FreeBuilder(names, text)), parse(right, _FreeBuilder(names, text)), -1)
            else:
                poly = parse(text, _FreeBuilder(names, text))
            if not poly:
                raise OrientationError(f"relation {text!r} is trivially zero")
            lead = max(poly, key=lambda w: (sum(degs[i] for i in w), w))
            c = poly[lead]
            rhs = {w: -v / c for w, v in poly.items() if w != lead}
            rules.append((lead, rhs))
        return cls(names, rules, degs, **kw)

    def key(self, w: Word) -> tuple:
        return (self.word_degree(w), w)

    def word_degree(self, w: Word) -> int:
        d = self.degrees
        return sum(d[i] for i in w)

    def _check_orientation(self) -> None:
        for r in self.rules:
            if len(r.lhs) < 2:
                raise OrientationError(f"rule lhs {self.render_word(r.lhs)} must have length at least 2")
            d = self.word_degree(r.lhs)
            for w, _ in r.rhs:
                if any(i >= len(self.names) for i in w):
                    raise OrientationError("rule mentions an unknown generator")
                if self.word_degree(w) != d:
                    raise OrientationError(f"rule {self.render_rule(r)} is not homogeneous")
                if not self.key(w) < self.key(r.lhs):
                    raise OrientationError(f"rule {self.render_rule(r)} is not decreasing in the monomial order")

    def _quantum_affine_table(self):
        n = len(self.names)
        if len(self.rules) != n * (n - 1) // 2:
            return None
        table = {}
        for r in self.rules:
            if len(r.lhs) != 2 or len(r.rhs) != 1:
                return None
            j, i = r.lhs
            (w, c), = r.rhs
            if not i < j or w != (i, j) or (i, j) in table:
                return None
            table[(i, j)] = c
        return table

    def _qa_pow(self, i: int, j: int, e: int) -> Cyclo:
        memo = self.__dict__.setdefault("_qa_pow_memo", {})
        key = (i, j, e)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = self._qa[(i, j)] ** e
        return hit

    @property
    def is_quantum_affine(self) -> bool:
        return self._qa is not None

    def without_fast_path(self) -> "Presentation":
        return Presentation(
            self.names,
            [(r.lhs, r.rhs_dict()) for r in self.rules],
            self.degrees,
            self.hilbert,
            fast_path=False,
            budget=self.budget,
        )

    # -- rendering -----------------------------------------------------------

    def render_word(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.names[w[i]]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)

    def render_rule(self, r: Rule) -> str:
        return f"{self.render_word(r.lhs)} -> {NCPoly(self, r.rhs_dict(), normalized=True)}"

    # -- rewriting -----------------------------------------------------------

    def _enter(self, word):
        if self._depth == 0:
            self._steps = 0
        self._depth += 1

    def _leave(self):
        self._depth -= 1

    def _tick(self, word):
        self._steps += 1
        if self._steps > self.budget:
            self._depth = 0
            raise RewriteBudgetExceeded(self.render_word(word), self.budget)

    def nf_append(self, u: Word, a: int) -> dict:
        """Normal form of the word u*a where u is already normal."""
        key = (u, a)
        hit = self._append_memo.get(key)
        if hit is not None:
            return hit
        w = u + (a,)
        match = None
        for r in self._by_last.get(a, ()):
            k = len(r.lhs)
            if k <= len(w) and w[-k:] == r.lhs and (match is None or k > len(match.lhs)):
                match = r
        if match is None:
            result = {w: ONE}
        else:
            self._tick(w)
            prefix = w[: len(w) - len(match.lhs)]
            result = {}
            for rw, c in match.rhs:
                part = {prefix: c}
                for letter in rw:
                    part = self._append_poly(part, letter)
                for x, v in part.items():
                    s = result.get(x, ZERO) + v
                    if s:
                        result[x] = s
                    else:
                        result.pop(x, None)
        self._append_memo[key] = result
        return result

    def _append_poly(self, poly: Mapping[Word, Cyclo], a: int) -> dict:
        out: dict = {}
        for u, c in poly.items():
            for x, v in self.nf_append(u, a).items():
                s = out.get(x, ZERO) + c * v
                if s:
                    out[x] = s
                else:
                    out.pop(x, None)
        return out

    def nf_word(self, w: Word) -> dict:
        """Normal form of an arbitrary word."""
        self._enter(w)
        try:
            poly = {(): ONE}
            for a in w:
                poly = self._append_poly(poly, a)
            return poly
        finally:
            self._leave()

    def mul_words(self, u: Word, v: Word) -> dict:
        """Normal form of u*v for normal words u, v."""
        if not v:
            return {u: ONE}
        if not u:
            return {v: ONE}
        key = (u, v)
        hit = self._mul_memo.get(key)
        if hit is not None:
            return hit
        if self._qa is not None:
            # x^a x^b = prod_{i<j} p_ij^(a_j b_i) x^(a+b)
            n = len(self.names)
            ca = [0] * n
            cb = [0] * n
            for x in u:
                ca[x] += 1
            for x in v:
                cb[x] += 1
            c = ONE
            for (i, j), p in self._qa.items():
                e = ca[j] * cb[i]
                if e:
                    c = c * self._qa_pow(i, j, e)
            result = {tuple(sorted(u + v)): c}
        else:
            self._enter(u + v)
            try:
                poly = {u: ONE}
                for a in v:
                    poly = self._append_poly(poly, a)
            finally:
                self._leave()
            result = poly
        self._mul_memo[key] = result
        return result

    def is_normal(self, w: Word) -> bool:
        for r in self.rules:
            k = len(r.lhs)
            for s in range(len(w) - k + 1):
                if w[s : s + k] == r.lhs:
                    return False
        return True

    # -- elements ------------------------------------------------------------

    def gen(self, name_or_index) -> "NCPoly":
        i = self.names.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return NCPoly(self, {(i,): ONE}, normalized=True)

    def one(self) -> "NCPoly":
        return NCPoly(self, {(): ONE}, normalized=True)

    def zero(self) -> "NCPoly":
        return NCPoly(self, {}, normalized=True)

    def scalar(self, c) -> "NCPoly":
        c = as_scalar(c)
        return NCPoly(self, {(): c} if c else {}, normalized=True)

    def word(self, w: Word) -> "NCPoly":
        return NCPoly(self, {tuple(w): ONE})

    def parse(self, text: str) -> "NCPoly":
        return parse_expr(text, self)


class NCPoly:
    """Element of a presented algebra, stored as normal words with nonzero coefficients."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: Presentation, terms: Mapping[Word, Cyclo] | None = None, normalized: bool = False):
        self.pres = pres
        terms = {tuple(w): as_scalar(c) for w, c in (terms or {}).items() if c}
        if not normalized:
            out: dict = {}
            for w, c in terms.items():
                for x, v in pres.nf_word(w).items():
                    s = out.get(x, ZERO) + c * v
                    if s:
                        out[x] = s
                    else:
                        out.pop(x, None)
            terms = out
        self.terms = terms

    def _wrap(self, terms) -> "NCPoly":
        return NCPoly(self.pres, terms, normalized=True)

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            if other.pres is not self.pres:
                raise ValueError("operands belong to different presentations")
            return other
        try:
            return self.pres.scalar(other)
        except TypeError:
            return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return self._wrap({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "NCPoly":
        c = as_scalar(c)
        if not c:
            return self._wrap({})
        return self._wrap({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        pres = self.pres
        out: dict = {}
        for u, c in self.terms.items():
            for v, d in other.terms.items():
                cd = c * d
                for w, e in pres.mul_words(u, v).items():
                    s = out.get(w, ZERO) + cd * e
                    if s:
                        out[w] = s
                    else:
                        out.pop(w, None)
        return self._wrap(out)

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int) -> "NCPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = self.pres.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other) if not isinstance(other, NCPoly) else other
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- grading -------------------------------------------------------------

    def degrees(self) -> set[int]:
        return {self.pres.word_degree(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous element."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("degree of a zero or inhomogeneous element")
        return ds.pop()

    def component(self, d: int) -> "NCPoly":
        return self._wrap({w: c for w, c in self.terms.items() if self.pres.word_degree(w) == d})

    def leading(self) -> tuple[Word, Cyclo]:
        w = max(self.terms, key=self.pres.key)
        return w, self.terms[w]

    def coefficient(self, w: Word) -> Cyclo:
        return self.terms.get(tuple(w), ZERO)

    def canonical(self) -> "NCPoly":
        """Divide by the leading coefficient; equal canonical forms mean equal up to a nonzero scalar."""
        if not self.terms:
            raise ValueError("zero element has no canonical form up to scalar")
        _, c = self.leading()
        return self.scale(c.inverse())

    def equal_up_to_scalar(self, other: "NCPoly") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.canonical() == other.canonical()

    # -- printing ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Word, Cyclo]]:
        pres = self.pres
        return sorted(self.terms.items(), key=lambda t: (-pres.word_degree(t[0]), t[0]))

    def __str__(self) -> str:
        from .commpoly import _join_term

        if not self.terms:
            return "0"
        out = ""
        for i, (w, c) in enumerate(self.sorted_terms()):
            out += _join_term(i == 0, c, self.pres.render_word(w) if w else "")
        return out

    def __repr__(self) -> str:
        return f"NCPoly({self})"


class _AlgebraBuilder(Builder):
    def __init__(self, pres: Presentation, text: str):
        self.pres = pres
        self.text = text

    def scalar(self, c):
        return self.pres.scalar(c)

    def ident(self, name, pos):
        if name not in self.pres.names:
            raise ParseError(f"unknown identifier {name!r}", self.text, pos)
        return self.pres.gen(name)


def parse_expr(text: str, pres: Presentation) -> NCPoly:
    return parse(text, _AlgebraBuilder(pres, text))


def normal_form(p: NCPoly | Mapping[Word, Cyclo], pres: Presentation | None = None) -> NCPoly:
    """Reduce raw terms (or re-reduce an element) to normal form."""
    if isinstance(p, NCPoly):
        return NCPoly(p.pres, p.terms)
    if pres is None:
        raise ValueError("a presentation is required for raw terms")
    return NCPoly(pres, p)


# ---------------------------------------------------------------------------
# confluence, bases, Hilbert series


@dataclass
class CriticalPair:
    word: str
    first: str
    second: str

    def to_json(self) -> dict:
        return {"word": self.word, "first": self.first, "second": self.second}


def _rewrite_at(pres: Presentation, w: Word, pos: int, rule: Rule) -> NCPoly:
    k = len(rule.lhs)
    prefix, suffix = w[:pos], w[pos + k :]
    raw = {prefix + rw + suffix: c for rw, c in rule.rhs}
    return NCPoly(pres, raw)


def check_local_confluence(pres: Presentation, degree_bound: int) -> list[CriticalPair]:
    """Resolve every overlap and inclusion ambiguity of weighted degree <= bound."""
    failures = []
    rules = pres.rules
    for i, r1 in enumerate(rules):
        for j, r2 in enumerate(rules):
            l1, l2 = r1.lhs, r2.lhs
            ambiguities = []
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    ambiguities.append((l1 + l2[k:], 0, len(l1) - k))
            if i != j and len(l2) <= len(l1) and (len(l2) < len(l1) or i < j):
                for s in range(len(l1) - len(l2) + 1):
                    if l1[s : s + len(l2)] == l2:
                        ambiguities.append((l1, 0, s))
            for w, p1, p2 in ambiguities:
                if pres.word_degree(w) > degree_bound:
                    continue
                a = _rewrite_at(pres, w, p1, r1)
                b = _rewrite_at(pres, w, p2, r2)
                if a != b:
                    failures.append(CriticalPair(pres.render_word(w), str(a), str(b)))
    return failures


def monomial_basis(pres: Presentation, d: int) -> list[Word]:
    """Normal words of weighted degree d, sorted in the monomial order."""
    cache = pres.__dict__.setdefault("_basis_cache", {0: [()]})
    if d < 0:
        return []
    if d in cache:
        return cache[d]
    out = []
    for a, da in enumerate(pres.degrees):
        if da > d:
            continue
        for u in monomial_basis(pres, d - da):
            w = u + (a,)
            ok = True
            for r in pres._by_last.get(a, ()):
                k = len(r.lhs)
                if k <= len(w) and w[-k:] == r.lhs:
                    ok = False
                    break
            if ok:
                out.append(w)
    out.sort()
    cache[d] = out
    return out


def series_coefficients(numerator: CommPoly, denominator: CommPoly, upto: int, var: str = "t") -> list:
    """Power-series coefficients of numerator/denominator in one variable up to t^upto."""

    def dense(p: CommPoly) -> list:
        p = p.trim()
        if p.gens and p.gens != (var,):
            raise ValueError(f"series must be a rational function of {var}")
        out = [ZERO] * (max((sum(e) for e in p.terms), default=0) + 1)
        for e, c in p.terms.items():
            out[sum(e)] = c
        return out

    num, den = dense(numerator), dense(denominator)
    if not den[0]:
        raise ValueError("denominator must have a nonzero constant term")
    inv0 = den[0].inverse()
    coeffs = []
    for k in range(upto + 1):
        s = num[k] if k < len(num) else ZERO
        for i in range(1, min(k, len(den) - 1) + 1):
            s = s - den[i] * coeffs[k - i]
        coeffs.append(s * inv0)
    return coeffs


@dataclass
class HilbertReport:
    rows: list = field(default_factory=list)  # (degree, expected, actual)
    first_mismatch: int | None = None

    @property
    def ok(self) -> bool:
        return self.first_mismatch is None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "first_mismatch": self.first_mismatch,
            "dimensions": [{"degree": d, "expected": e, "actual": a} for d, e, a in self.rows],
        }


def hilbert_check(pres: Presentation, D: int) -> HilbertReport:
    if pres.hilbert is None:
        raise ValueError("presentation carries no expected Hilbert series")
    num, den = pres.hilbert
    coeffs = series_coefficients(num, den, D)
    rep = HilbertReport()
    for d in range(D + 1):
        c = coeffs[d]
        expected = int(c.to_fraction()) if c.is_rational() and c.to_fraction().denominator == 1 else str(c)
        actual = len(monomial_basis(pres, d))
        rep.rows.append((d, expected, actual))
        if expected != actual and rep.first_mismatch is None:
            rep.first_mismatch = d
    return rep


def parse_series(numerator: str, denominator: str) -> tuple[CommPoly, CommPoly]:
    return parse_commpoly(numerator, ["t"]), parse_commpoly(denominator, ["t"])
