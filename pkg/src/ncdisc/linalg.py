"""Sparse exact linear algebra over the scalar field.

Vectors are plain dicts mapping a sortable key to a nonzero :class:`Cyclo`.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Mapping

from .scalar import Cyclo

Vec = dict


def axpy(vec: dict, c: Cyclo, other: Mapping) -> None:
    """In place: vec += c * other, dropping zeros."""
    for k, v in other.items():
        cur = vec.get(k)
        new = c * v if cur is None else cur + c * v
        if new:
            vec[k] = new
        elif cur is not None:
            del vec[k]


def scale(vec: Mapping, c: Cyclo) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in vec.items()}


class SpanBasis:
    """Incrementally built semi-echelon basis of a subspace.

    With ``track=True`` every stored row remembers which combination of the
    added (tagged) vectors produced it, so :meth:`express` can write a vector
    in terms of the original generators.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._rows: list[tuple[Hashable, dict, dict | None]] = []
        self.dependent: list = []

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: dict, combo: dict | None) -> None:
        for piv, row, rcombo in self._rows:
            c = vec.get(piv)
            if c is not None:
                axpy(vec, -c, row)
                if combo is not None:
                    axpy(combo, -c, rcombo)

    def add(self, vec: Mapping, tag=None) -> bool:
        """Add a vector; return False (and record the tag) if it is dependent."""
        vec = dict(vec)
        combo = {tag: Cyclo.rational(1)} if self.track else None
        self._reduce(vec, combo)
        if not vec:
            self.dependent.append(tag)
            return False
        piv = min(vec)
        inv = vec[piv].inverse()
        vec = scale(vec, inv)
        if combo is not None:
            combo = scale(combo, inv)
        self._rows.append((piv, vec, combo))
        return True

    def residual(self, vec: Mapping) -> dict:
        vec = dict(vec)
        self._reduce(vec, None)
        return vec

    def contains(self, vec: Mapping) -> bool:
        return not self.residual(vec)

    def express(self, vec: Mapping) -> dict | None:
        """Coefficients on the added tags reproducing ``vec``, or None if outside the span."""
        if not self.track:
            raise ValueError("basis was built without tracking")
        vec = dict(vec)
        out: dict = {}
        for piv, row, rcombo in self._rows:
            c = vec.get(piv)
            if c is not None:
                axpy(vec, -c, row)
                axpy(out, c, rcombo)
        if vec:
            return None
        return out

    def pivots(self) -> list:
        return [p for p, _, _ in self._rows]


def rref(rows: Iterable[Mapping], order: list) -> list[tuple[Hashable, dict]]:
    """Fully reduced row echelon form; pivots chosen by position in ``order``."""
    pos = {k: i for i, k in enumerate(order)}
    basis: list[tuple[Hashable, dict]] = []
    for r in rows:
        vec = dict(r)
        for piv, row in basis:
            c = vec.get(piv)
            if c is not None:
                axpy(vec, -c, row)
        if not vec:
            continue
        piv = min(vec, key=pos.__getitem__)
        vec = scale(vec, vec[piv].inverse())
        for i, (p2, row2) in enumerate(basis):
            c = row2.get(piv)
            if c is not None:
                axpy(row2, -c, vec)
        basis.append((piv, vec))
    basis.sort(key=lambda pr: pos[pr[0]])
    return basis


def nullspace(rows: Iterable[Mapping], variables: list) -> list[dict]:
    """Basis of {x : sum_k row[k] * x[k] = 0 for every row}, one vector per free variable."""
    red = rref(rows, variables)
    pivots = {p for p, _ in red}
    out = []
    for free in variables:
        if free in pivots:
            continue
        vec = {free: Cyclo.rational(1)}
        for p, row in red:
            c = row.get(free)
            if c is not None:
                vec[p] = -c
        out.append(vec)
    return out


def rank(rows: Iterable[Mapping]) -> int:
    sb = SpanBasis()
    for r in rows:
        sb.add(r)
    return len(sb)


class NoSolution(ArithmeticError):
    pass


class NonUnique(ArithmeticError):
    pass


def solve_unique(columns: Mapping[Hashable, Mapping], target: Mapping) -> dict:
    """Unique x with sum_k x[k] * columns[k] = target.

    Raises NonUnique if the columns are dependent, NoSolution if the target is
    outside their span.
    """
    sb = SpanBasis(track=True)
    for tag, col in columns.items():
        sb.add(col, tag)
    if sb.dependent:
        raise NonUnique(f"{len(sb.dependent)} dependent unknowns")
    x = sb.express(target)
    if x is None:
        raise NoSolution("target is outside the span")
    return x
