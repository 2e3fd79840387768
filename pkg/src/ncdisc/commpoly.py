"""Commutative polynomials in named variables over the cyclotomic scalars.

Also home of the exact determinant (fraction-free Bareiss elimination, with
cofactor expansion for small matrices) used for trace forms and norms.
"""
from __future__ import annotations

import heapq
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .expr import FnBuilder, ParseError, parse
from .scalar import ONE, ZERO, Cyclo, as_scalar

__all__ = [
    "CommPoly",
    "NotDivisible",
    "bareiss_determinant",
    "canonical_up_to_scalar",
    "cofactor_determinant",
    "determinant",
    "exact_divide",
    "leibniz_determinant",
    "parse_commpoly",
    "partial_derivative",
]


class NotDivisible(ArithmeticError):
    pass


def _grlex_key(e: tuple[int, ...]) -> tuple:
    return (sum(e), e)


class CommPoly:
    """Sparse polynomial: ``terms`` maps exponent tuples (over ``gens``) to scalars.

    ``gens`` is kept sorted by name, so comparing exponent tuples is graded-lex
    on variable names once the total degree is compared first.
    """

    __slots__ = ("gens", "terms")

    def __init__(self, gens: Sequence[str] = (), terms: Mapping | None = None, *, _trusted=False):
        gens = tuple(gens)
        if _trusted:
            self.gens = gens
            self.terms = terms
            return
        if list(gens) != sorted(set(gens)):
            order = sorted(set(gens))
            idx = [gens.index(g) for g in order]
            new = {}
            for e, c in (terms or {}).items():
                ne = tuple(e[i] for i in idx)
                new[ne] = new.get(ne, ZERO) + c
            gens, terms = tuple(order), new
        self.gens = gens
        self.terms = {e: as_scalar(c) for e, c in (terms or {}).items() if c}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "CommPoly":
        return cls((), {}, _trusted=True)

    @classmethod
    def const(cls, c) -> "CommPoly":
        c = as_scalar(c)
        return cls((), {(): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, name: str) -> "CommPoly":
        return cls((name,), {(1,): ONE}, _trusted=True)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "CommPoly":
        gens = tuple(sorted(exps))
        return cls(gens, {tuple(exps[g] for g in gens): as_scalar(coeff)})

    # -- structure --------------------------------------------------------

    def with_gens(self, gens: tuple[str, ...]) -> "CommPoly":
        """Re-express over a (sorted) superset of variables."""
        if gens == self.gens:
            return self
        idx = [gens.index(g) for g in self.gens]
        n = len(gens)
        new = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in zip(idx, e):
                ne[i] = k
            new[tuple(ne)] = c
        return CommPoly(gens, new, _trusted=True)

    def _unify(self, other: "CommPoly") -> tuple["CommPoly", "CommPoly"]:
        if self.gens == other.gens:
            return self, other
        gens = tuple(sorted(set(self.gens) | set(other.gens)))
        return self.with_gens(gens), other.with_gens(gens)

    def trim(self) -> "CommPoly":
        """Drop variables that do not occur."""
        used = [i for i in range(len(self.gens)) if any(e[i] for e in self.terms)]
        if len(used) == len(self.gens):
            return self
        gens = tuple(self.gens[i] for i in used)
        return CommPoly(gens, {tuple(e[i] for i in used): c for e, c in self.terms.items()}, _trusted=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        """(exponent dict, coefficient) pairs in descending graded-lex order."""
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            yield {g: k for g, k in zip(self.gens, e) if k}, self.terms[e]

    def leading(self) -> tuple[tuple[int, ...], Cyclo]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degrees(self, weights: Mapping[str, int]) -> set[int]:
        w = [weights[g] for g in self.gens]
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Cyclo:
        for e, c in self.terms.items():
            if not any(e):
                return c
        return ZERO

    def variables(self) -> set[str]:
        return set(self.trim().gens)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unify(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            cur = terms.get(e)
            if cur is None:
                terms[e] = c
            else:
                s = cur + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return CommPoly(a.gens, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "CommPoly":
        return CommPoly(self.gens, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Cyclo)) or type(other).__name__ == "Fraction":
            c = as_scalar(other)
            if not c:
                return CommPoly(self.gens, {}, _trusted=True)
            return CommPoly(self.gens, {e: v * c for e, v in self.terms.items()}, _trusted=True)
        if not isinstance(other, CommPoly):
            return NotImplemented
        a, b = self._unify(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = c1 * c2
                cur = terms.get(e)
                terms[e] = v if cur is None else cur + v
        return CommPoly(a.gens, {e: c for e, c in terms.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CommPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = CommPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.trim(), other.trim()
        if a.gens != b.gens:
            return False
        return a.terms == b.terms

    def __hash__(self):
        return hash(str(self))

    # -- substitution -----------------------------------------------------

    def subs(self, values: Mapping[str, "CommPoly"]) -> "CommPoly":
        """Simultaneously substitute polynomials for variables."""
        out = CommPoly.zero()
        powers: dict = {}
        for e, c in self.terms.items():
            t = CommPoly.const(c)
            for g, k in zip(self.gens, e):
                if not k:
                    continue
                if g in values:
                    key = (g, k)
                    if key not in powers:
                        powers[key] = _coerce(values[g]) ** k
                    t = t * powers[key]
                else:
                    t = t * CommPoly.monomial({g: k})
            out = out + t
        return out

    def evaluate(self, values: Mapping[str, Cyclo]) -> Cyclo:
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for g, k in zip(self.gens, e):
                if k:
                    v = v * as_scalar(values[g]) ** k
            total = total + v
        return total

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for i, (mono, c) in enumerate(self.items()):
            body = "*".join(g if k == 1 else f"{g}^{k}" for g, k in sorted(mono.items()))
            out += _join_term(i == 0, c, body)
        return out

    def __repr__(self) -> str:
        return f"CommPoly({self})"


def _join_term(first: bool, c: Cyclo, body: str) -> str:
    """Render one signed term 'c*body' for sum output."""
    neg = False
    cs = str(c)
    if not c.is_compound() and cs.startswith("-"):
        neg = True
        cs = cs[1:]
    if body:
        if cs == "1":
            txt = body
        else:
            txt = (f"({cs})" if c.is_compound() else cs) + "*" + body
    else:
        txt = f"({cs})" if c.is_compound() and not first else cs
    if first:
        return ("-" if neg else "") + txt
    return (" - " if neg else " + ") + txt


def _coerce(x):
    if isinstance(x, CommPoly):
        return x
    try:
        return CommPoly.const(as_scalar(x))
    except TypeError:
        return None


def parse_commpoly(text: str, variables: Iterable[str] | None = None) -> CommPoly:
    """Parse the expression DSL into a CommPoly; restrict identifiers if ``variables`` is given."""
    allowed = set(variables) if variables is not None else None

    def ident(name, pos):
        if allowed is not None and name not in allowed:
            raise ParseError(f"unknown identifier {name!r}", text, pos)
        return CommPoly.var(name)

    return parse(text, FnBuilder(CommPoly.const, ident))


# ---------------------------------------------------------------------------
# operations


def partial_derivative(f: CommPoly, var: str) -> CommPoly:
    if var not in f.gens:
        return CommPoly.zero()
    i = f.gens.index(var)
    terms = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            ne = e[:i] + (k - 1,) + e[i + 1 :]
            terms[ne] = c * k
    return CommPoly(f.gens, terms, _trusted=True)


def canonical_up_to_scalar(f: CommPoly) -> CommPoly:
    """Divide by the graded-lex leading coefficient; the =_{k^x} normal form."""
    if f.is_zero():
        raise ValueError("zero polynomial has no canonical form up to scalar")
    _, c = f.leading()
    return (f * c.inverse()).trim()


def exact_divide(f: CommPoly, g: CommPoly) -> CommPoly | None:
    """Return q with f = q*g, or None if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return CommPoly.zero()
    f, g = f._unify(g)
    ge, gc = g.leading()
    ginv = gc.inverse()
    rem = dict(f.terms)
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    quot: dict = {}
    gterms = list(g.terms.items())
    while heap:
        _, ne = heapq.heappop(heap)
        e = tuple(-x for x in ne)
        c = rem.get(e)
        if c is None:
            continue
        qe = tuple(a - b for a, b in zip(e, ge))
        if any(x < 0 for x in qe):
            return None
        qc = c * ginv
        quot[qe] = qc
        for te, tc in gterms:
            me = tuple(a + b for a, b in zip(qe, te))
            cur = rem.get(me)
            v = qc * tc
            if cur is None:
                rem[me] = -v
                heapq.heappush(heap, (-sum(me), tuple(-x for x in me)))
            else:
                nv = cur - v
                if nv:
                    rem[me] = nv
                else:
                    del rem[me]
    return CommPoly(f.gens, quot, _trusted=True)


def _as_matrix(m) -> list[list[CommPoly]]:
    return [[_coerce(x) for x in row] for row in m]


def cofactor_determinant(m: Sequence[Sequence]) -> CommPoly:
    """Laplace expansion along the first row; exponential, used as an oracle and for n <= 4."""
    m = _as_matrix(m)
    n = len(m)
    if n == 0:
        return CommPoly.const(1)
    if n == 1:
        return m[0][0]
    total = CommPoly.zero()
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        t = m[0][j] * cofactor_determinant(minor)
        total = total + t if j % 2 == 0 else total - t
    return total


def leibniz_determinant(m: Sequence[Sequence]) -> CommPoly:
    """Sum over permutations; independent oracle for tests."""
    m = _as_matrix(m)
    n = len(m)
    total = CommPoly.zero()
    for perm in permutations(range(n)):
        sign = 1
        p = list(perm)
        for i in range(n):
            while p[i] != i:
                j = p[i]
                p[i], p[j] = p[j], p[i]
                sign = -sign
        t = CommPoly.const(sign)
        for i in range(n):
            t = t * m[i][perm[i]]
            if t.is_zero():
                break
        total = total + t
    return total


def _blocks(m: list[list[CommPoly]]) -> list[tuple[list[int], list[int]]]:
    """Connected components of the bipartite row/column nonzero pattern."""
    n = len(m)
    parent = list(range(2 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(n):
            if not m[i][j].is_zero():
                a, b = find(i), find(n + j)
                if a != b:
                    parent[a] = b
    comps: dict = {}
    for x in range(2 * n):
        comps.setdefault(find(x), ([], []))
        r = comps[find(x)]
        (r[0] if x < n else r[1]).append(x % n)
    return list(comps.values())


def _perm_sign(p: list[int]) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def determinant(m: Sequence[Sequence]) -> CommPoly:
    """Exact determinant of a square matrix of CommPoly entries.

    The nonzero pattern is first split into independent blocks; blocks of size
    at most 4 use cofactor expansion, larger ones fraction-free Bareiss
    elimination with exact division.
    """
    m = _as_matrix(m)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return CommPoly.const(1)
    blocks = _blocks(m)
    if len(blocks) > 1:
        row_order: list[int] = []
        col_order: list[int] = []
        result = CommPoly.const(1)
        for rows, cols in blocks:
            if len(rows) != len(cols):
                return CommPoly.zero()
            rows, cols = sorted(rows), sorted(cols)
            row_order += rows
            col_order += cols
            sub = [[m[i][j] for j in cols] for i in rows]
            result = result * _det_block(sub)
            if result.is_zero():
                return result
        sign = _perm_sign(row_order) * _perm_sign(col_order)
        return result if sign == 1 else -result
    return _det_block(m)


def _det_block(m: list[list[CommPoly]]) -> CommPoly:
    if len(m) <= 4:
        return cofactor_determinant(m)
    return bareiss_determinant(m)


def bareiss_determinant(m: Sequence[Sequence]) -> CommPoly:
    a = [list(row) for row in _as_matrix(m)]
    n = len(a)
    sign = 1
    prev = CommPoly.const(1)
    for k in range(n - 1):
        cands = [i for i in range(k, n) if not a[i][k].is_zero()]
        if not cands:
            return CommPoly.zero()
        p = min(cands, key=lambda i: (len(a[i][k]), i))
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                akj = a[k][j]
                num = piv * a[i][j]
                if not aik.is_zero() and not akj.is_zero():
                    num = num - aik * akj
                if k == 0 or prev.is_constant():
                    c = prev.constant_value()
                    a[i][j] = num if c.is_one() else num * c.inverse()
                else:
                    q = exact_divide(num, prev)
                    if q is None:
                        raise ArithmeticError("Bareiss exact division failed")
                    a[i][j] = q
            a[i][k] = CommPoly.zero()
        prev = piv
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det
