"""Finite-dimensional Hopf algebras given by structure constants.

Elements are sparse dicts from basis index to scalar.  ``mult[(i, j)]`` and
``comult[i]`` hold the products and coproducts of basis elements.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .linalg import axpy, nullspace
from .scalar import ONE, ZERO, Cyclo, as_scalar, zeta

__all__ = ["HopfAlgebra", "HopfError", "group_algebra", "h2n2_hopf", "Character"]

Elt = dict


class HopfError(ValueError):
    pass


def _clean(v: Mapping) -> dict:
    return {k: c for k, c in v.items() if c}


class HopfAlgebra:
    def __init__(
        self,
        labels: Sequence[str],
        mult: Mapping[tuple[int, int], Mapping[int, Cyclo]],
        comult: Mapping[int, Mapping[tuple[int, int], Cyclo]],
        counit: Sequence,
        antipode: Mapping[int, Mapping[int, Cyclo]],
        unit: Mapping[int, Cyclo],
        generators: Sequence[int] | None = None,
        name: str = "H",
    ):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.mult = {k: _clean(v) for k, v in mult.items()}
        self.comult = {k: _clean(v) for k, v in comult.items()}
        self.counit = tuple(as_scalar(c) for c in counit)
        self.antipode = {k: _clean(v) for k, v in antipode.items()}
        self.unit = _clean(unit)
        self.generators = tuple(generators) if generators is not None else tuple(range(self.dim))
        self.name = name
        self._t: Elt | None = None
        self._alpha: Elt | None = None

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def basis(self, i: int) -> Elt:
        return {i: ONE}

    def one(self) -> Elt:
        return dict(self.unit)

    # -- linear structure maps --------------------------------------------

    def mul(self, a: Mapping, b: Mapping) -> Elt:
        out: dict = {}
        for i, c in a.items():
            for j, d in b.items():
                axpy(out, c * d, self.mult[(i, j)])
        return out

    def delta(self, a: Mapping) -> dict:
        out: dict = {}
        for i, c in a.items():
            axpy(out, c, self.comult[i])
        return out

    def eps(self, a: Mapping) -> Cyclo:
        return sum((c * self.counit[i] for i, c in a.items()), ZERO)

    def S(self, a: Mapping) -> Elt:
        out: dict = {}
        for i, c in a.items():
            axpy(out, c, self.antipode[i])
        return out

    def render(self, a: Mapping) -> str:
        if not a:
            return "0"
        parts = []
        for i in sorted(a):
            c = a[i]
            lab = self.labels[i]
            if c.is_one():
                parts.append(lab)
            else:
                cs = str(c)
                parts.append((f"({cs})" if c.is_compound() else cs) + "*" + lab)
        return " + ".join(parts)

    # -- axioms -------------------------------------------------------------

    def _tensor_mul(self, x: Mapping, y: Mapping) -> dict:
        """Product in H (x) H of tensors keyed by index pairs."""
        out: dict = {}
        for (a, b), c in x.items():
            for (a2, b2), d in y.items():
                for k, e in self.mult[(a, a2)].items():
                    for l, f in self.mult[(b, b2)].items():
                        key = (k, l)
                        v = out.get(key, ZERO) + c * d * e * f
                        if v:
                            out[key] = v
                        else:
                            out.pop(key, None)
        return out

    def check_axioms(self) -> list[str]:
        """Every Hopf axiom on basis elements; returns a list of failures."""
        fails = []
        n = self.dim
        B = [self.basis(i) for i in range(n)]
        for i, j, k in product(range(n), repeat=3):
            if self.mul(self.mul(B[i], B[j]), B[k]) != self.mul(B[i], self.mul(B[j], B[k])):
                fails.append(f"associativity ({self.labels[i]},{self.labels[j]},{self.labels[k]})")
                break
        for i in range(n):
            if self.mul(self.unit, B[i]) != B[i] or self.mul(B[i], self.unit) != B[i]:
                fails.append(f"unit at {self.labels[i]}")
        for i in range(n):
            d = self.comult[i]
            left: dict = {}
            right: dict = {}
            for (a, b), c in d.items():
                for (a2, b2), c2 in self.comult[a].items():
                    key = (a2, b2, b)
                    left[key] = left.get(key, ZERO) + c * c2
                for (a2, b2), c2 in self.comult[b].items():
                    key = (a, a2, b2)
                    right[key] = right.get(key, ZERO) + c * c2
            if _clean(left) != _clean(right):
                fails.append(f"coassociativity at {self.labels[i]}")
            l1: dict = {}
            l2: dict = {}
            for (a, b), c in d.items():
                axpy(l1, c * self.counit[a], {b: ONE})
                axpy(l2, c * self.counit[b], {a: ONE})
            if l1 != B[i] or l2 != B[i]:
                fails.append(f"counit at {self.labels[i]}")
            s1: dict = {}
            s2: dict = {}
            for (a, b), c in d.items():
                axpy(s1, c, self.mul(self.S(B[a]), B[b]))
                axpy(s2, c, self.mul(B[a], self.S(B[b])))
            target = {k: v * self.counit[i] for k, v in self.unit.items()}
            if s1 != _clean(target) or s2 != _clean(target):
                fails.append(f"antipode at {self.labels[i]}")
        for i, j in product(range(n), repeat=2):
            prod = self.mult[(i, j)]
            if self.delta(prod) != self._tensor_mul(self.comult[i], self.comult[j]):
                fails.append(f"comultiplication not multiplicative at ({self.labels[i]},{self.labels[j]})")
                break
        for i, j in product(range(n), repeat=2):
            if self.eps(self.mult[(i, j)]) != self.counit[i] * self.counit[j]:
                fails.append("counit not multiplicative")
                break
        unit_delta = {(a, b): c * d for a, c in self.unit.items() for b, d in self.unit.items()}
        if self.delta(self.unit) != _clean(unit_delta):
            fails.append("comultiplication of unit")
        if self.eps(self.unit) != ONE:
            fails.append("counit of unit")
        return fails

    def antipode_squared_is_identity(self) -> bool:
        return all(self.S(self.S(self.basis(i))) == self.basis(i) for i in range(self.dim))

    # -- integrals ------------------------------------------------------------

    def right_integrals(self) -> list[Elt]:
        """Basis of {t : t h = eps(h) t for all basis h}."""
        rows = []
        n = self.dim
        for h in range(n):
            for l in range(n):
                row = {}
                for k in range(n):
                    c = self.mult[(k, h)].get(l, ZERO)
                    if k == l:
                        c = c - self.counit[h]
                    if c:
                        row[k] = c
                if row:
                    rows.append(row)
        return nullspace(rows, list(range(n)))

    def left_integrals_dual(self) -> list[Elt]:
        """Basis of left integrals alpha of H*, i.e. sum h_1 alpha(h_2) = alpha(h) 1."""
        rows = []
        n = self.dim
        for h in range(n):
            for l in range(n):
                row: dict = {}
                for (a, b), c in self.comult[h].items():
                    if a == l:
                        row[b] = row.get(b, ZERO) + c
                u = self.unit.get(l, ZERO)
                if u:
                    row[h] = row.get(h, ZERO) - u
                row = _clean(row)
                if row:
                    rows.append(row)
        return nullspace(rows, list(range(n)))

    def pair(self, f: Mapping, h: Mapping) -> Cyclo:
        """<f, h> for f in H* written in the dual basis."""
        return sum((f.get(i, ZERO) * c for i, c in h.items()), ZERO)

    @property
    def t(self) -> Elt:
        if self._t is None:
            self._normalize_integrals()
        return self._t

    @property
    def alpha(self) -> Elt:
        if self._alpha is None:
            self._normalize_integrals()
        return self._alpha

    def _normalize_integrals(self) -> None:
        ts = self.right_integrals()
        als = self.left_integrals_dual()
        if len(ts) != 1 or len(als) != 1:
            raise HopfError(f"integral spaces have dimensions {len(ts)}, {len(als)}; expected 1")
        t = ts[0]
        anchor = min(self.unit)
        c = t.get(anchor) or t[min(t)]
        t = {k: v / c for k, v in t.items()}
        alpha = als[0]
        p = self.pair(alpha, t)
        if not p:
            raise HopfError("<alpha, t> = 0; H is not semisimple")
        self._t = t
        self._alpha = {k: v / p for k, v in alpha.items()}

    def set_integrals(self, t: Mapping, alpha: Mapping) -> None:
        self._t = _clean(t)
        self._alpha = _clean(alpha)

    def is_right_integral(self, t: Mapping) -> bool:
        return all(self.mul(t, self.basis(h)) == _clean({k: v * self.counit[h] for k, v in t.items()}) for h in range(self.dim))

    def is_left_integral_dual(self, alpha: Mapping) -> bool:
        for h in range(self.dim):
            lhs: dict = {}
            for (a, b), c in self.comult[h].items():
                v = alpha.get(b, ZERO)
                if v:
                    axpy(lhs, c * v, {a: ONE})
            rhs = _clean({k: u * alpha.get(h, ZERO) for k, u in self.unit.items()})
            if lhs != rhs:
                return False
        return True

    # -- dual -----------------------------------------------------------------

    def dual(self) -> "HopfAlgebra":
        """H* in the dual basis {delta_i}."""
        n = self.dim
        mult = {}
        for i, j in product(range(n), repeat=2):
            mult[(i, j)] = {k: self.comult[k][(i, j)] for k in range(n) if (i, j) in self.comult[k]}
        comult = {}
        for k in range(n):
            comult[k] = {}
            for (i, j), prod_ij in self.mult.items():
                c = prod_ij.get(k)
                if c:
                    comult[k][(i, j)] = c
        counit = [self.unit.get(i, ZERO) for i in range(n)]
        antipode = {i: {k: self.antipode[k].get(i, ZERO) for k in range(n)} for i in range(n)}
        unit = {i: self.counit[i] for i in range(n)}
        labels = [f"d({lab})" for lab in self.labels]
        return HopfAlgebra(labels, mult, comult, counit, antipode, unit, name=f"{self.name}*")


class Character:
    """Algebra map H -> k given by values on the basis."""

    def __init__(self, hopf: HopfAlgebra, values: Sequence):
        self.hopf = hopf
        self.values = tuple(as_scalar(v) for v in values)
        if len(self.values) != hopf.dim:
            raise ValueError("character needs one value per basis element")

    def __call__(self, h: Mapping) -> Cyclo:
        return sum((c * self.values[i] for i, c in h.items()), ZERO)

    def is_character(self) -> bool:
        H = self.hopf
        if self(H.unit) != ONE:
            return False
        return all(
            self(H.mult[(i, j)]) == self.values[i] * self.values[j] for i in range(H.dim) for j in range(H.dim)
        )

    def inverse(self) -> "Character":
        """hdet^{-1} = hdet o S."""
        H = self.hopf
        return Character(H, [self(H.S(H.basis(i))) for i in range(H.dim)])

    def convolve(self, other: "Character") -> "Character":
        H = self.hopf
        vals = []
        for i in range(H.dim):
            vals.append(sum((c * self.values[a] * other.values[b] for (a, b), c in H.comult[i].items()), ZERO))
        return Character(H, vals)

    @classmethod
    def counit(cls, hopf: HopfAlgebra) -> "Character":
        return cls(hopf, hopf.counit)


def group_algebra(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None, generators=None, name="kG") -> HopfAlgebra:
    """kG from a multiplication table ``table[g][h] = index of g*h``."""
    n = len(table)
    if any(len(row) != n for row in table):
        raise HopfError("multiplication table must be square")
    if any(not all(0 <= x < n for x in row) for row in table):
        raise HopfError("table entries out of range")
    ident = [e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))]
    if len(ident) != 1:
        raise HopfError("table has no two-sided identity")
    e = ident[0]
    for g in range(n):
        if sorted(table[g]) != list(range(n)) or sorted(row[g] for row in table) != list(range(n)):
            raise HopfError("table is not a Latin square")
    for a, b, c in product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise HopfError("table is not associative")
    inv = [next(h for h in range(n) if table[g][h] == e) for g in range(n)]
    labels = list(labels) if labels is not None else [f"g{i}" for i in range(n)]
    mult = {(a, b): {table[a][b]: ONE} for a in range(n) for b in range(n)}
    comult = {g: {(g, g): ONE} for g in range(n)}
    H = HopfAlgebra(labels, mult, comult, [ONE] * n, {g: {inv[g]: ONE} for g in range(n)}, {e: ONE}, generators, name)
    H.set_integrals({g: ONE for g in range(n)}, {e: ONE})
    H.group_identity = e
    H.group_inverse = inv
    return H


def h2n2_hopf(n: int) -> HopfAlgebra:
    """The 2n^2-dimensional semisimple Hopf algebra kG[z; sigma]/(z^2 - ...), G = <x> x <y> cyclic of order n.

    Basis x^a y^b z^e is indexed by e*n*n + a*n + b.
    """
    if n < 2:
        raise HopfError("n must be at least 2")
    q = zeta(n, 1)
    inv_n = Cyclo.rational(Fraction(1, n))

    def idx(a, b, e):
        return e * n * n + (a % n) * n + (b % n)

    def label(a, b, e):
        parts = []
        if a:
            parts.append("x" if a == 1 else f"x^{a}")
        if b:
            parts.append("y" if b == 1 else f"y^{b}")
        if e:
            parts.append("z")
        return "*".join(parts) or "1"

    elems = [(a, b, e) for e in range(2) for a in range(n) for b in range(n)]
    labels = [label(*t) for t in elems]
    z2 = {idx(a, b, 0): inv_n * q ** (-(a * b)) for a in range(n) for b in range(n)}

    mult = {}
    for a, b, e in elems:
        for a2, b2, f in elems:
            # z g' = sigma(g') z with sigma swapping the exponents of x and y
            s_a, s_b = (b2, a2) if e else (a2, b2)
            ga, gb = a + s_a, b + s_b
            if e + f < 2:
                mult[(idx(a, b, e), idx(a2, b2, f))] = {idx(ga, gb, e + f): ONE}
            else:
                out: dict = {}
                for k, c in z2.items():
                    ka, kb = (k // n) % n, k % n
                    key = idx(ga + ka, gb + kb, 0)
                    out[key] = out.get(key, ZERO) + c
                mult[(idx(a, b, e), idx(a2, b2, f))] = _clean(out)
    comult = {}
    for a, b, e in elems:
        if not e:
            comult[idx(a, b, 0)] = {(idx(a, b, 0), idx(a, b, 0)): ONE}
        else:
            out = {}
            for s in range(n):
                for t in range(n):
                    key = (idx(a + s, b, 1), idx(a, b + t, 1))
                    out[key] = out.get(key, ZERO) + inv_n * q ** (-(s * t))
            comult[idx(a, b, 1)] = _clean(out)
    counit = [ONE] * len(elems)
    antipode = {}
    for a, b, e in elems:
        if not e:
            antipode[idx(a, b, 0)] = {idx(-a, -b, 0): ONE}
        else:
            # S(g z) = z g^{-1} = sigma(g^{-1}) z
            antipode[idx(a, b, 1)] = {idx(-b, -a, 1): ONE}
    gens = [idx(1, 0, 0), idx(0, 1, 0), idx(0, 0, 1)]
    H = HopfAlgebra(labels, mult, comult, counit, antipode, {idx(0, 0, 0): ONE}, gens, name=f"H_{2 * n * n}")
    H.h2n2_index = idx
    H.h2n2_n = n
    return H
