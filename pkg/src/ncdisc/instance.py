"""A computational instance: algebra, central subalgebra, basis and optional Hopf action."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .actions import ActionSpec
from .graded_module import CentralSubalgebra, FreeBasis, find_free_basis
from .hopf import Character, HopfAlgebra
from .ncpoly import NCPoly, Presentation


@dataclass
class Instance:
    name: str
    pres: Presentation
    central: CentralSubalgebra | None = None
    basis_elements: list[NCPoly] | None = None
    hopf: HopfAlgebra | None = None
    action: ActionSpec | None = None
    hdet: Character | None = None
    expected: dict[str, Any] = field(default_factory=dict)
    verify: dict[str, Any] = field(default_factory=dict)
    galois: dict[str, Any] = field(default_factory=dict)
    side: str = "right"
    summary: str = ""
    group_matrices: list | None = None
    _basis: FreeBasis | None = None

    @property
    def non_central(self) -> bool:
        return self.side == "right" and bool(self.verify.get("non_central", False))

    def basis(self) -> FreeBasis:
        if self._basis is None:
            if self.central is None:
                raise ValueError(f"instance {self.name} has no central subalgebra")
            if self.basis_elements is not None:
                self._basis = FreeBasis(self.central, self.basis_elements, side=self.side)
            else:
                bound = int(self.verify.get("basis_search_degree", self.verify.get("degree", 12)))
                self._basis = find_free_basis(self.pres, self.central, bound, side=self.side)
        return self._basis

    def degree_bound(self) -> int:
        if "degree" in self.verify:
            return int(self.verify["degree"])
        return 2 * self.basis().top_degree
