"""Containers for A_n-algebra and A_n-module structures with their unit data."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graded import ChainComplex, GradingError
from .hhc import (
    EndAlgebra,
    MultiMap,
    UnitData,
    Verdict,
    check_an_algebra,
    check_module_structure,
    end_algebra,
    hom_of,
    is_strictly_unital,
    suspended_differential,
)

__all__ = ["AnStructure", "AnModuleStructure"]


def _sign(e):
    return -1 if e % 2 else 1


@dataclass
class AnStructure:
    """``(A, nu)`` with ``nu^1 = -[d]``; ``level`` is the verified ``n`` (``None``: no bound).

    ``augmentation`` optionally lists the generators spanning the augmentation
    ideal (a complement of the unit closed under ``nu``).
    """

    complex: ChainComplex
    nu: MultiMap
    level: int | None = None
    unit: UnitData | None = None
    augmentation: tuple | None = None
    flags: dict = field(default_factory=dict)
    # structure only valid on tensors of suspended total degree <= window
    window: float = float("inf")

    @property
    def module(self):
        return self.complex.module

    @property
    def max_sdeg(self):
        return None if self.window == float("inf") else self.window

    @property
    def ring(self):
        return self.complex.ring

    @classmethod
    def from_products(cls, C: ChainComplex, products: dict, unit=None, augmentation=None) -> "AnStructure":
        """A dg algebra from its multiplication table on generators (labels).

        The product enters as ``nu^2[a|b] = (-1)^{|a|}[ab]``.
        """
        M = C.module
        comps = dict(suspended_differential(C).comps)
        for (a, b), val in products.items():
            ia, ib = M.index[a], M.index[b]
            comps[(ia, ib)] = {k: _sign(M.degrees[ia]) * c for k, c in M.element(val).items()}
        nu = MultiMap(M, M, -1, comps, (1, 2))
        ud = UnitData(M, M.index[unit]) if unit is not None else None
        aug = tuple(M.index[g] for g in augmentation) if augmentation is not None else None
        return cls(C, nu, None, ud, aug, {"associative": True})

    def top(self, n: int) -> int:
        """The level to check: ``n`` capped by the verified level."""
        return n if self.level is None else min(n, self.level)

    def verify(self, n: int | None = None) -> Verdict:
        n = n if n is not None else (self.level or 2 * self.nu.lrange[1])
        if not self.nu.component(1) == suspended_differential(self.complex):
            return Verdict(False, "tensor degree 1 part is not the suspended differential")
        v = check_an_algebra(self.nu, n, self.max_sdeg)
        if not v or self.unit is None:
            return v
        return is_strictly_unital(self.nu.truncate(n, 1), self.unit, "structure")


@dataclass
class AnModuleStructure:
    """``(M, p)`` over an algebra: ``p^0 = [delta_M]`` and ``p^{>=1}`` a tower into ``End M``."""

    algebra: AnStructure
    complex: ChainComplex
    p: MultiMap
    level: int | None = None
    end: EndAlgebra | None = None

    def __post_init__(self):
        if self.end is None:
            self.end = end_algebra(self.complex)
        if self.p.target is not self.end.module:
            raise GradingError("module tower must land in End of its complex")

    @classmethod
    def from_action(cls, algebra: AnStructure, C: ChainComplex, action: dict) -> "AnModuleStructure":
        """A dg module from ``{(algebra label, module label): element}``; ``p^1[b] = [b . -]``."""
        end = end_algebra(C)
        H = end.module
        A, M = algebra.module, C.module
        lam: dict[int, dict] = {}
        for (b, m), val in action.items():
            ib, im = A.index[b], M.index[m]
            img = M.element(val)
            lam.setdefault(ib, {})[im] = img
        comps = {(): end.delta}
        for ib, images in lam.items():
            comps[(ib,)] = H.from_images(images)
        p = MultiMap(A, H, 0, comps, (0, 1))
        return cls(algebra, C, p, None, end)

    @property
    def module(self):
        return self.complex.module

    def verify(self, n: int) -> Verdict:
        v = check_module_structure(self.p, self.end, self.algebra.nu, n, self.algebra.max_sdeg)
        if not v or self.algebra.unit is None or n <= 1:
            return v
        return is_strictly_unital(
            self.p.positive_part().truncate(n - 1, 1),
            self.algebra.unit,
            "morphism",
            target_one=self.end.identity,
        )

    def hom_to(self, other: "AnModuleStructure"):
        return hom_of(self.module, other.module)
