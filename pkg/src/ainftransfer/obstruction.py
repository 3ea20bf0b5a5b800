"""The six obstruction classes, each checked to be a cycle when it is built.

Every obstruction ``o`` is normalized so that a candidate ``x`` extends the
tower exactly when ``d(x) = o`` in the ambient complex.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .hhc import (
    MultiMap,
    UnitData,
    check_an_algebra,
    check_an_homotopy,
    check_an_morphism,
    check_module_homotopy,
    check_module_morphism,
    check_module_structure,
    clip,
    gerstenhaber,
    hhc_differential,
    hom_nu1,
    homotopy_star,
    module_operator,
    star,
)

__all__ = [
    "Obstruction",
    "ObstructionError",
    "STATS",
    "obs_algebra",
    "obs_morphism",
    "obs_homotopy",
    "obs_module",
    "obs_module_morphism",
    "obs_module_homotopy",
    "strictly_unital_obstruction",
]

# counts of obstructions built and cycle checks passed, per kind
STATS: Counter = Counter()

_DEGREES = {
    "algebra": -2,
    "morphism": -1,
    "homotopy": 0,
    "module": -1,
    "module_morphism": 0,
    "module_homotopy": 1,
}


class ObstructionError(ArithmeticError):
    pass


@dataclass
class Obstruction:
    kind: str
    value: MultiMap
    tensor_degree: int
    nu_source: MultiMap
    nu_target: MultiMap
    max_sdeg: float = float("inf")

    def __post_init__(self):
        want = _DEGREES[self.kind]
        l = self.tensor_degree
        self.value = clip(self.value.truncate(l, l), self.max_sdeg)
        if self.value.comps and self.value.degree != want:
            raise ObstructionError(f"{self.kind} obstruction has degree {self.value.degree}, expected {want}")
        self.value.degree = want
        STATS[self.kind] += 1
        dv = clip(self.d(self.value).truncate(l, l), self.max_sdeg)
        first = dv.first_nonzero()
        if first is not None:
            key, val = first
            src = "|".join(str(self.value.source.labels[i]) for i in key)
            raise ObstructionError(
                f"{self.kind} obstruction in tensor degree {l} is not a cycle: "
                f"d(obs)[{src}] = {dv.target.format(val)}"
            )
        STATS[self.kind + ":cycle"] += 1

    def d(self, x: MultiMap) -> MultiMap:
        return hhc_differential(x, self.nu_source, self.nu_target)

    def extends(self, x: MultiMap) -> bool:
        """The extension criterion ``d(x) = obs``."""
        l = self.tensor_degree
        return clip(self.d(x.truncate(l, l)).truncate(l, l) - self.value, self.max_sdeg).is_zero()

    def is_zero(self) -> bool:
        return self.value.is_zero()


def _bound(max_sdeg):
    return float("inf") if max_sdeg is None else max_sdeg


def _require(v, what):
    if not v:
        raise ObstructionError(f"{what}: {v.witness}")


def obs_algebra(nu: MultiMap, n: int, *, check: bool = True, max_sdeg=None) -> Obstruction:
    """``-(nu^{<=n} o nu^{<=n})^{n+1}`` for an A_n-structure ``nu``."""
    nu = nu.truncate(n, 1)
    if check:
        _require(check_an_algebra(nu, n, max_sdeg), "input is not an A_n-structure")
    val = -gerstenhaber(nu, nu, n + 1).truncate(n + 1, n + 1)
    nu1 = nu.component(1)
    return Obstruction("algebra", val, n + 1, nu1, nu1, _bound(max_sdeg))


def obs_morphism(alpha: MultiMap, nuA: MultiMap, nuB: MultiMap, n: int, *, check: bool = True, max_sdeg=None) -> Obstruction:
    """``-pi^{n+1}(nu_B * alpha^{<=n} - alpha^{<=n} o nu_A)`` with both structures at level ``n + 1``."""
    alpha = alpha.truncate(n, 1)
    nuA, nuB = nuA.truncate(n + 1, 1), nuB.truncate(n + 1, 1)
    if check:
        _require(check_an_algebra(nuA, n + 1, max_sdeg), "source structure")
        _require(check_an_algebra(nuB, n + 1, max_sdeg), "target structure")
        _require(check_an_morphism(alpha, nuA, nuB, n, max_sdeg), "input is not an A_n-morphism")
    val = star(nuB, alpha, n + 1) - gerstenhaber(alpha, nuA, n + 1)
    return Obstruction("morphism", -val.truncate(n + 1, n + 1), n + 1, nuA.component(1), nuB.component(1), _bound(max_sdeg))


def obs_homotopy(
    r: MultiMap, alpha: MultiMap, beta: MultiMap, nuA: MultiMap, nuB: MultiMap, n: int, *, check: bool = True, max_sdeg=None
) -> Obstruction:
    """``alpha^{n+1} - beta^{n+1} - pi^{n+1}(nu_B (*) r + r o nu_A)`` for ``|r| = 1``.

    ``n = 0`` gives ``alpha^1 - beta^1``.
    """
    nuA, nuB = nuA.truncate(n + 1, 1), nuB.truncate(n + 1, 1)
    alpha, beta = alpha.truncate(n + 1, 1), beta.truncate(n + 1, 1)
    r = r.truncate(max(n, 1), 1) if n >= 1 else MultiMap(r.source, r.target, 1, {}, (1, 1))
    if check:
        _require(check_an_morphism(alpha, nuA, nuB, n + 1, max_sdeg), "alpha")
        _require(check_an_morphism(beta, nuA, nuB, n + 1, max_sdeg), "beta")
        if n >= 1:
            _require(check_an_homotopy(r, alpha, beta, nuA, nuB, n, max_sdeg), "input is not a homotopy at level n")
    diff = (alpha - beta).component(n + 1)
    if n >= 1:
        X = homotopy_star(nuB, r, alpha, beta, n + 1) + gerstenhaber(r, nuA, n + 1)
        diff = diff.with_range(1, n + 1) - X.truncate(n + 1, n + 1).with_range(1, n + 1)
    diff.degree = 0
    return Obstruction("homotopy", diff, n + 1, nuA.component(1), nuB.component(1), _bound(max_sdeg))


def obs_module(p: MultiMap, end, nu: MultiMap, n: int, *, check: bool = True) -> Obstruction:
    """``-pi^n(nu_End * p^{>=1} - p^{>=1} o nu)`` for a module tower ``p^{<=n-1}``."""
    nu = nu.truncate(n, 1)
    if check:
        _require(check_an_algebra(nu, n), "algebra")
        _require(check_module_structure(p.truncate(n - 1, 0), end, nu, n), "input is not an A_n-module")
    pp = p.positive_part().truncate(max(n - 1, 1), 1)
    if n == 1:
        pp = MultiMap(p.source, p.target, 0, {}, (1, 1))
    val = star(end.nu, pp, n) - gerstenhaber(pp, nu, n)
    return Obstruction("module", -val.truncate(n, n), n, nu.component(1), end.nu.component(1))


def _module_nu1(M, N) -> MultiMap:
    """``nu^1`` on ``Hom(M, N)`` for module structures ``M``, ``N``."""
    return hom_nu1(M.complex, N.complex)


def obs_module_morphism(f: MultiMap, M, N, nu: MultiMap, n: int, *, check: bool = True) -> Obstruction:
    """``pi^n(p_N * f + f * p_M - f^{>=1} o nu)`` for ``f^{<=n-1}``; ``M``, ``N`` are module structures."""
    f = f.truncate(n - 1, 0)
    pM, pN = M.p.truncate(n, 0), N.p.truncate(n, 0)
    if check:
        _require(check_module_structure(pM, M.end, nu, n + 1), "source module")
        _require(check_module_structure(pN, N.end, nu, n + 1), "target module")
        if n >= 2:
            _require(check_module_morphism(f, pM, pN, nu, n), "input is not a module morphism at level n")
    val = module_operator(f, pM, pN, nu, n).truncate(n, n)
    val.degree = 0
    return Obstruction("module_morphism", val, n, nu.component(1), _module_nu1(M, N))


def obs_module_homotopy(r: MultiMap, f: MultiMap, g: MultiMap, M, N, nu: MultiMap, n: int, *, check: bool = True) -> Obstruction:
    """``pi^n(p_N * r + r * p_M + r^{>=1} o nu) - (f^n - g^n)`` for ``r^{<=n-1}``."""
    r = r.truncate(n - 1, 0) if n >= 1 else MultiMap(r.source, r.target, 2, {}, (0, 0))
    pM, pN = M.p.truncate(n, 0), N.p.truncate(n, 0)
    if check:
        _require(check_module_morphism(f, pM, pN, nu, n + 1), "f")
        _require(check_module_morphism(g, pM, pN, nu, n + 1), "g")
        if n >= 1:
            _require(check_module_homotopy(r, f, g, pM, pN, nu, n), "input is not a module homotopy at level n")
    D = module_operator(r, pM, pN, nu, n).truncate(n, n) if n >= 1 else MultiMap(r.source, r.target, 1, {}, (0, 0))
    val = D.with_range(n, n) - (f - g).truncate(n, n).with_range(n, n)
    val.degree = 1
    return Obstruction("module_homotopy", val, n, nu.component(1), _module_nu1(M, N))


def strictly_unital_obstruction(ob: Obstruction, unit: UnitData, trivial: MultiMap | None = None) -> Obstruction:
    """The obstruction for the complement part of the next component.

    ``trivial`` is the fixed unit part of that component (``mu_su`` when the
    next algebra component is in tensor degree 2, ``[1] -> [id]`` for a module
    at tensor degree 1). Its boundary is moved to the right-hand side; the
    result must vanish on every tensor with a unit slot.
    """
    l = ob.tensor_degree
    val = ob.value
    if trivial is not None and trivial.comps:
        dt = ob.d(trivial.truncate(l, l)).truncate(l, l)
        val = (val.with_range(l, l) - dt.with_range(l, l))
        val.degree = ob.value.degree if ob.value.comps else dt.degree
    for key in sorted(val.comps, key=lambda k: k):
        if unit.touches(key):
            src = "|".join(str(val.source.labels[i]) for i in key)
            raise ObstructionError(
                f"{ob.kind} obstruction does not vanish on the unit slot [{src}]: {val.target.format(val.comps[key])}"
            )
    STATS[ob.kind + ":unit-slots"] += 1
    val.degree = _DEGREES[ob.kind]
    return Obstruction(ob.kind, val, l, ob.nu_source, ob.nu_target, ob.max_sdeg)
