"""Instance bundles: TOML files describing an algebra, its central subalgebra and an optional Hopf action.

The grammar is documented in ``docs/bundle_format.md``.
"""
from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .actions import ActionSpec
from .commpoly import parse_commpoly
from .expr import ParseError
from .graded_module import CentralSubalgebra
from .hopf import Character, HopfAlgebra, h2n2_hopf
from .instance import Instance
from .ncpoly import Presentation, parse_series
from .reflection import group_algebra_from_matrices, matrix_det
from .scalar import ONE, Cyclo, as_scalar

__all__ = ["BundleError", "available", "load", "load_path", "loads", "parse_scalar"]

SECTIONS = {"name", "summary", "algebra", "central", "basis", "hopf", "action", "hdet", "expected", "verify", "galois"}


class BundleError(ValueError):
    pass


def parse_scalar(value) -> Cyclo:
    if isinstance(value, str):
        try:
            p = parse_commpoly(value, [])
        except ParseError as exc:
            raise BundleError(f"scalar expected, got {value!r}: {exc}") from None
        if not p.is_constant():
            raise BundleError(f"scalar expected, got {value!r}")
        return p.constant_value()
    if isinstance(value, bool) or not isinstance(value, int):
        raise BundleError(f"scalar expected, got {value!r}")
    return as_scalar(value)


def _matrix(rows, n: int, what: str) -> list[list[Cyclo]]:
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise BundleError(f"{what}: expected a {n}x{n} matrix")
    return [[parse_scalar(c) for c in r] for r in rows]


def _require(d: Mapping, key: str, where: str):
    if key not in d:
        raise BundleError(f"[{where}] is missing '{key}'")
    return d[key]


def _presentation(sec: Mapping, fast_path: bool) -> Presentation:
    names = _require(sec, "generators", "algebra")
    if not isinstance(names, list) or not all(isinstance(x, str) and x.isidentifier() for x in names):
        raise BundleError("[algebra] generators must be a list of identifiers")
    if len(set(names)) != len(names):
        raise BundleError("[algebra] generator names repeat")
    degrees = sec.get("degrees")
    if degrees is not None and (len(degrees) != len(names) or any(not isinstance(d, int) or d < 1 for d in degrees)):
        raise BundleError("[algebra] degrees must be positive integers, one per generator")
    hilbert = None
    if "hilbert_denominator" in sec:
        hilbert = parse_series(sec.get("hilbert_numerator", "1"), sec["hilbert_denominator"])
    relations = sec.get("relations", [])
    return Presentation.from_relations(names, relations, degrees, hilbert=hilbert, fast_path=fast_path)


def _extend_character(H: HopfAlgebra, on_gens: Mapping[int, Cyclo]) -> Character:
    """Multiplicative extension of values on generators along products of basis elements."""
    (u, c0), = H.unit.items()
    vals: dict[int, Cyclo] = {u: ONE}
    frontier = [u]
    while frontier:
        nxt = []
        for i in frontier:
            for g, vg in on_gens.items():
                prod = H.mult[(i, g)]
                if len(prod) != 1:
                    continue
                (k, c), = prod.items()
                if k not in vals:
                    vals[k] = vals[i] * vg * c.inverse()
                    nxt.append(k)
        frontier = nxt
    if len(vals) != H.dim:
        raise BundleError("hdet values on generators do not determine a character")
    chi = Character(H, [vals[i] for i in range(H.dim)])
    if not chi.is_character():
        raise BundleError("hdet values do not define an algebra map")
    return chi


def _hopf(doc: Mapping, pres: Presentation):
    sec = doc.get("hopf")
    if sec is None:
        return None, None, None, None
    kind = _require(sec, "kind", "hopf")
    n = len(pres.names)
    group = None
    if kind == "matrix_group":
        gens = [_matrix(m, n, "[hopf] generators") for m in _require(sec, "generators", "hopf")]
        H, group = group_algebra_from_matrices(gens)
        action = ActionSpec(H, pres, [[list(r) for r in m] for m in group])
    elif kind == "h2n2":
        order = _require(sec, "n", "hopf")
        H = h2n2_hopf(order)
        mats = doc.get("action")
        if not mats:
            raise BundleError("[action] matrices are required for kind = 'h2n2'")
        gm = {}
        for label, m in mats.items():
            try:
                gm[H.index(label)] = _matrix(m, n, f"[action] {label}")
            except (KeyError, ValueError):
                raise BundleError(f"[action] {label} is not a basis element of H") from None
        action = ActionSpec.from_generators(H, pres, gm)
    else:
        raise BundleError(f"unknown hopf kind {kind!r}")
    hsec = doc.get("hdet", {"kind": "det"})
    hkind = hsec.get("kind", "det")
    if hkind == "det":
        if group is None:
            raise BundleError("hdet kind 'det' needs a matrix group")
        hdet = Character(H, [matrix_det(m) for m in group])
    elif hkind == "values":
        vals = _require(hsec, "values", "hdet")
        hdet = _extend_character(H, {H.index(k): parse_scalar(v) for k, v in vals.items()})
    else:
        raise BundleError(f"unknown hdet kind {hkind!r}")
    return H, action, hdet, group


def _check_keys(doc: Mapping) -> None:
    extra = set(doc) - SECTIONS
    if extra:
        raise BundleError(f"unknown top-level keys: {', '.join(sorted(extra))}")
    if "algebra" not in doc:
        raise BundleError("bundle needs an [algebra] section")


def build(doc: Mapping[str, Any], name: str = "bundle", fast_path: bool = True) -> Instance:
    _check_keys(doc)
    pres = _presentation(doc["algebra"], fast_path)
    central = None
    if "central" in doc:
        items = list(doc["central"].items())
        if not items:
            raise BundleError("[central] is empty")
        central = CentralSubalgebra.parse(pres, items)
    side = "right"
    elements = None
    if "basis" in doc:
        side = doc["basis"].get("side", "right")
        if side not in ("left", "right"):
            raise BundleError("[basis] side must be 'left' or 'right'")
        if "elements" in doc["basis"]:
            elements = [pres.parse(e) for e in doc["basis"]["elements"]]
    H, action, hdet, group = _hopf(doc, pres)
    inst = Instance(
        doc.get("name", name),
        pres,
        central,
        elements,
        H,
        action,
        hdet,
        expected=dict(doc.get("expected", {})),
        verify=dict(doc.get("verify", {})),
        galois=dict(doc.get("galois", {})),
        side=side,
    )
    inst.summary = doc.get("summary", "")
    inst.group_matrices = group
    return inst


def loads(text: str, name: str = "bundle", fast_path: bool = True) -> Instance:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise BundleError(f"malformed bundle: {exc}") from None
    return build(doc, name, fast_path)


def load_path(path, fast_path: bool = True) -> Instance:
    path = Path(path)
    return loads(path.read_text(), path.stem, fast_path)


def available() -> list[str]:
    root = resources.files("ncdisc") / "instances"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def load(name_or_path: str, fast_path: bool = True) -> Instance:
    """A shipped instance by name, or a bundle file by path."""
    p = Path(name_or_path)
    if p.suffix == ".toml" or p.exists():
        if not p.exists():
            raise BundleError(f"no such bundle file: {name_or_path}")
        return load_path(p, fast_path)
    res = resources.files("ncdisc") / "instances" / f"{name_or_path}.toml"
    if not res.is_file():
        raise BundleError(f"unknown instance {name_or_path!r}; shipped: {', '.join(available())}")
    return loads(res.read_text(), name_or_path, fast_path)
