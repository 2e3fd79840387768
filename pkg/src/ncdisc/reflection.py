"""Finite groups generated by reflections acting on polynomial rings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .actions import ActionSpec
from .commpoly import CommPoly, canonical_up_to_scalar, determinant, partial_derivative
from .graded_module import CentralSubalgebra
from .hopf import Character, group_algebra
from .instance import Instance
from .linalg import rank
from .ncpoly import Presentation, parse_series
from .scalar import ONE, ZERO, Cyclo, as_scalar

__all__ = [
    "ClosureError",
    "HyperplaneDatum",
    "arrangement_poly",
    "commutative_presentation",
    "discriminant_poly",
    "group_algebra_from_matrices",
    "group_closure",
    "is_invariant",
    "act_on_poly",
    "permutation_matrix",
    "jacobian_det",
    "jacobian_from_arrangement",
    "matrix_det",
    "reflections_and_hyperplanes",
    "sn_instance",
]

Mat = tuple  # tuple of row tuples of Cyclo


class ClosureError(RuntimeError):
    pass


def _mat(m) -> Mat:
    return tuple(tuple(as_scalar(c) for c in row) for row in m)


def _mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n) if a[i][k] and b[k][j]), ZERO) for j in range(n)) for i in range(n))


def _eye(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def matrix_det(m) -> Cyclo:
    return determinant([[CommPoly.const(c) for c in row] for row in m]).constant_value()


def group_closure(gens: Sequence, cap: int = 10**4) -> list[Mat]:
    """All products of the generators, identity first, in breadth-first order."""
    gens = [_mat(g) for g in gens]
    if not gens:
        raise ClosureError("at least one generator is required")
    n = len(gens[0])
    for g in gens:
        if len(g) != n or any(len(r) != n for r in g):
            raise ClosureError("generators must be square matrices of the same size")
        if not matrix_det(g):
            raise ClosureError("generators must be invertible")
    e = _eye(n)
    seen = {e: 0}
    order = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = _mul(a, g)
                if p not in seen:
                    seen[p] = len(order)
                    order.append(p)
                    nxt.append(p)
                    if len(order) > cap:
                        raise ClosureError(f"closure exceeds {cap} elements")
        frontier = nxt
    return order


def group_algebra_from_matrices(gens: Sequence, labels: Sequence[str] | None = None, cap: int = 10**4):
    """(kG, list of matrices) with basis ordered as the closure; generators marked."""
    elems = group_closure(gens, cap)
    index = {m: i for i, m in enumerate(elems)}
    table = [[index[_mul(a, b)] for b in elems] for a in elems]
    gen_idx = sorted({index[_mat(g)] for g in gens})
    if labels is None:
        labels = ["1"] + [f"g{i}" for i in range(1, len(elems))]
    H = group_algebra(table, labels, gen_idx)
    return H, elems


@dataclass
class HyperplaneDatum:
    form: tuple  # linear form whose kernel is the fixed hyperplane
    alpha: tuple  # non-unit eigenvector direction, first nonzero entry 1
    order: int

    def alpha_poly(self, names: Sequence[str]) -> CommPoly:
        out = CommPoly.zero()
        for name, c in zip(names, self.alpha):
            if c:
                out = out + CommPoly.var(name) * c
        return out


def _normalize_vec(v) -> tuple:
    for c in v:
        if c:
            inv = c.inverse()
            return tuple(x * inv for x in v)
    raise ValueError("zero vector")


def reflections_and_hyperplanes(G: Sequence[Mat]) -> list[HyperplaneDatum]:
    """Reflections grouped by fixed hyperplane; e_U is the order of the pointwise stabiliser."""
    if not G:
        return []
    n = len(G[0])
    e = _eye(n)
    groups: dict[tuple, list[Mat]] = {}
    alphas: dict[tuple, tuple] = {}
    for g in G:
        if g == e:
            continue
        diff = [[g[i][j] - e[i][j] for j in range(n)] for i in range(n)]
        rows = [{j: c for j, c in enumerate(r) if c} for r in diff]
        if rank(rows) != 1:
            continue
        row = next(r for r in diff if any(r))
        key = _normalize_vec(row)
        col = next(tuple(diff[i][j] for i in range(n)) for j in range(n) if any(diff[i][j] for i in range(n)))
        groups.setdefault(key, []).append(g)
        alphas.setdefault(key, _normalize_vec(col))
    out = [HyperplaneDatum(k, alphas[k], len(v) + 1) for k, v in groups.items()]
    out.sort(key=lambda h: tuple(str(c) for c in h.alpha))
    return out


def _names(d: int, names: Sequence[str] | None) -> list[str]:
    return list(names) if names is not None else [f"x{i + 1}" for i in range(d)]


def jacobian_det(fs: Sequence[CommPoly], names: Sequence[str]) -> CommPoly:
    m = [[partial_derivative(f, x) for x in names] for f in fs]
    return canonical_up_to_scalar(determinant(m))


def _product(G, names, power) -> CommPoly:
    d = len(G[0]) if G else 0
    names = _names(d, names)
    out = CommPoly.const(1)
    for h in reflections_and_hyperplanes(G):
        out = out * h.alpha_poly(names) ** power(h.order)
    return canonical_up_to_scalar(out)


def jacobian_from_arrangement(G: Sequence[Mat], names: Sequence[str] | None = None) -> CommPoly:
    return _product(G, names, lambda e: e - 1)


def arrangement_poly(G: Sequence[Mat], names: Sequence[str] | None = None) -> CommPoly:
    return _product(G, names, lambda e: 1)


def discriminant_poly(G: Sequence[Mat], names: Sequence[str] | None = None) -> CommPoly:
    return _product(G, names, lambda e: e)


def act_on_poly(g: Mat, f: CommPoly, names: Sequence[str]) -> CommPoly:
    """g acting by x_j -> sum_r g[r][j] x_r."""
    images = {}
    for j, x in enumerate(names):
        img = CommPoly.zero()
        for r, y in enumerate(names):
            if g[r][j]:
                img = img + CommPoly.var(y) * g[r][j]
        images[x] = img
    return f.subs(images)


def is_invariant(G: Sequence[Mat], f: CommPoly, names: Sequence[str]) -> bool:
    return all(act_on_poly(g, f, names) == f for g in G)


def commutative_presentation(names: Sequence[str], **kw) -> Presentation:
    n = len(names)
    rules = [((j, i), {(i, j): ONE}) for i in range(n) for j in range(i + 1, n)]
    return Presentation(names, rules, **kw)


def permutation_matrix(perm: Sequence[int]) -> Mat:
    n = len(perm)
    return tuple(tuple(ONE if perm[j] == i else ZERO for j in range(n)) for i in range(n))


def sn_instance(n: int) -> Instance:
    """S_n permuting x1..xn: power sums as R, staircase basis, permutation action, sign as hdet."""
    if not 1 <= n <= 4:
        raise ValueError("desk scale: 1 <= n <= 4")
    names = [f"x{i + 1}" for i in range(n)]
    series = parse_series("1", "*".join(["(1-t)"] * n) if n else "1")
    pres = commutative_presentation(names, hilbert=series)
    central = CentralSubalgebra(
        pres, [(f"p{k}", pres.parse(" + ".join(f"{x}^{k}" for x in names))) for k in range(1, n + 1)]
    )
    basis = []
    for exps in _staircase(n):
        w = tuple(i for i, e in enumerate(exps) for _ in range(e))
        basis.append(pres.word(w))
    basis.sort(key=lambda b: pres.key(next(iter(b.terms))))
    if n == 1:
        gens = [_eye(1)]
    else:
        gens = [permutation_matrix([1, 0] + list(range(2, n)))]
        if n > 2:
            gens.append(permutation_matrix(list(range(1, n)) + [0]))
    H, elems = group_algebra_from_matrices(gens)
    action = ActionSpec(H, pres, [[list(r) for r in m] for m in elems])
    hdet = Character(H, [matrix_det(m) for m in elems])
    inst = Instance(f"S{n}", pres, central, basis, H, action, hdet)
    inst.group_matrices = elems
    return inst


def _staircase(n: int):
    def rec(i):
        if i == n:
            yield ()
            return
        for e in range(n - i):
            for rest in rec(i + 1):
                yield (e,) + rest

    return list(rec(0))
