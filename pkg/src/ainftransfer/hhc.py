"""Towers of multilinear maps ``(PiA)^{(x)l} -> PiB`` and the products acting on them.

A :class:`MultiMap` stores one component per tuple of source generator
indices (the tuple length is the tensor degree). Degrees are always the
suspended ones: generator ``a`` contributes ``|a| + 1``. Signs are applied at
evaluation time from those degrees and never stored twice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .graded import (
    ChainComplex,
    GradedModule,
    GradingError,
    HomModule,
    WindowError,
    elem_add,
    elem_scale,
    hom_differential,
)
from .ring import BaseRing

__all__ = [
    "MultiMap",
    "UnitData",
    "Verdict",
    "EndAlgebra",
    "hom_of",
    "end_algebra",
    "hom_nu1",
    "suspended_differential",
    "strict_map",
    "gerstenhaber",
    "star",
    "homotopy_star",
    "postcompose",
    "module_star",
    "module_operator",
    "hhc_differential",
    "mu_su",
    "g_su",
    "module_unit",
    "split_decompose",
    "is_strictly_unital",
    "check_an_algebra",
    "check_an_morphism",
    "check_an_homotopy",
    "check_module_structure",
    "check_module_morphism",
    "check_module_homotopy",
    "clip",
    "UnitError",
]


class UnitError(ValueError):
    pass


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def sdeg_tuple(M: GradedModule, key: Sequence[int]) -> int:
    return sum(M.degrees[i] + 1 for i in key)


class MultiMap:
    """A homogeneous element of ``hhc^{lo..hi}(A, B)`` of suspended degree ``degree``.

    ``comps`` maps a tuple of source generator indices to an element of the
    target (generator index -> coefficient). The empty tuple is the tensor
    degree zero slot, used by module towers.
    """

    __slots__ = ("source", "target", "degree", "comps", "lrange")

    def __init__(
        self,
        source: GradedModule,
        target: GradedModule,
        degree: int,
        comps: dict | None = None,
        lrange: tuple[int, int] | None = None,
    ):
        self.source = source
        self.target = target
        self.degree = degree
        clean = {}
        for key, val in (comps or {}).items():
            key = tuple(key)
            val = target.reduce(val)
            if not val:
                continue
            want = sdeg_tuple(source, key) + degree - 1
            got = target.degree_of(val)
            if got != want:
                raise GradingError(
                    f"component {key} lands in degree {got}, expected {want} for a degree {degree} map"
                )
            clean[key] = val
        self.comps = clean
        if lrange is None:
            lens = [len(k) for k in clean] or [1]
            lrange = (min(lens), max(lens))
        lo, hi = lrange
        for k in clean:
            if not lo <= len(k) <= hi:
                raise WindowError(f"component of tensor degree {len(k)} outside range {lrange}")
        self.lrange = (lo, hi)

    @property
    def ring(self) -> BaseRing:
        return self.target.ring

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, source, target, degree, lrange=(1, 1)):
        return cls(source, target, degree, {}, lrange)

    def _like(self, comps, lrange=None, degree=None) -> "MultiMap":
        return MultiMap(
            self.source,
            self.target,
            self.degree if degree is None else degree,
            comps,
            self.lrange if lrange is None else lrange,
        )

    # -- arithmetic -------------------------------------------------------
    def _check_compatible(self, other: "MultiMap"):
        if other.source is not self.source or other.target is not self.target:
            raise GradingError("towers between different modules")
        if other.degree != self.degree and self.comps and other.comps:
            raise GradingError(f"adding towers of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "MultiMap") -> "MultiMap":
        return self.add(other, 1)

    def __sub__(self, other: "MultiMap") -> "MultiMap":
        return self.add(other, -1)

    def add(self, other: "MultiMap", c=1) -> "MultiMap":
        self._check_compatible(other)
        ring = self.ring
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = elem_add(ring, out.get(k, {}), v, c)
        lo = min(self.lrange[0], other.lrange[0])
        hi = max(self.lrange[1], other.lrange[1])
        deg = self.degree if self.comps or not other.comps else other.degree
        return self._like(out, (lo, hi), deg)

    def __neg__(self) -> "MultiMap":
        return self.scale(-1)

    def scale(self, c) -> "MultiMap":
        return self._like({k: elem_scale(self.ring, v, c) for k, v in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiMap):
            return NotImplemented
        if other.source is not self.source or other.target is not self.target:
            return False
        return (self - other).is_zero() if (self.degree == other.degree or not (self.comps and other.comps)) else False

    __hash__ = None  # mutable-looking value; compare with ==

    def is_zero(self) -> bool:
        return not self.comps

    def first_nonzero(self):
        """Smallest (tensor degree, key) with a nonzero component, or ``None``."""
        if not self.comps:
            return None
        key = min(self.comps, key=lambda k: (len(k), k))
        return key, self.comps[key]

    # -- restriction ------------------------------------------------------
    def component(self, l: int) -> "MultiMap":
        return self._like({k: v for k, v in self.comps.items() if len(k) == l}, (l, l))

    def truncate(self, hi: int, lo: int | None = None) -> "MultiMap":
        lo = self.lrange[0] if lo is None else lo
        return self._like({k: v for k, v in self.comps.items() if lo <= len(k) <= hi}, (lo, hi))

    def with_range(self, lo: int, hi: int) -> "MultiMap":
        return self._like(self.comps, (lo, hi))

    def filter(self, pred) -> "MultiMap":
        return self._like({k: v for k, v in self.comps.items() if pred(k)})

    def positive_part(self) -> "MultiMap":
        """Tensor degree >= 1 components (drops the module slot)."""
        lo = max(1, self.lrange[0])
        return self._like({k: v for k, v in self.comps.items() if k}, (lo, max(lo, self.lrange[1])))

    # -- evaluation -------------------------------------------------------
    def __call__(self, *xs: dict) -> dict:
        """Evaluate on a tensor of source elements (multilinear expansion)."""
        l = len(xs)
        if not self.lrange[0] <= l <= self.lrange[1]:
            raise WindowError(f"tensor degree {l} outside range {self.lrange}")
        ring = self.ring
        out: dict = {}
        for combo in itertools.product(*(x.items() for x in xs)):
            key = tuple(g for g, _ in combo)
            val = self.comps.get(key)
            if val is None:
                continue
            c = 1
            for _, a in combo:
                c *= a
            out = elem_add(ring, out, val, c)
        return self.target.reduce(out)

    def format(self) -> str:
        S, T = self.source, self.target
        lines = []
        for k in sorted(self.comps, key=lambda k: (len(k), k)):
            src = "|".join(str(S.labels[i]) for i in k)
            lines.append(f"[{src}] -> {T.format(self.comps[k])}")
        return "\n".join(lines) or "0"

    def __repr__(self):
        return f"MultiMap(deg={self.degree}, range={self.lrange}, {len(self.comps)} comps)"


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def _default_hi(*xs: MultiMap) -> int:
    return sum(x.lrange[1] for x in xs)


def gerstenhaber(mu: MultiMap, nu: MultiMap, lmax: int | None = None) -> MultiMap:
    """``mu o nu``: insert ``nu`` into every slot of ``mu``.

    ``nu`` must be an endomorphism tower of the source of ``mu``.
    """
    A = mu.source
    if nu.source is not A or nu.target is not A:
        raise GradingError("Gerstenhaber product needs nu in hhc(A, A) for mu in hhc(A, B)")
    if lmax is None:
        lmax = mu.lrange[1] + nu.lrange[1] - 1
    ring = mu.ring
    index: dict[int, list] = {}
    for nkey, nval in nu.comps.items():
        if not nkey:
            continue
        for g, c in nval.items():
            index.setdefault(g, []).append((nkey, c))
    acc: dict[tuple, dict] = {}
    for mkey, mval in mu.comps.items():
        prefix = 0
        for j, g in enumerate(mkey):
            for nkey, c in index.get(g, ()):
                L = len(mkey) - 1 + len(nkey)
                if L > lmax:
                    continue
                key = mkey[:j] + nkey + mkey[j + 1 :]
                acc[key] = elem_add(ring, acc.get(key, {}), mval, _sign(nu.degree * prefix) * c)
            prefix += A.degrees[g] + 1
    return MultiMap(A, mu.target, mu.degree + nu.degree, acc, (1, max(1, lmax)))


def _expand(nu: MultiMap, slot_maps, lmax: int, acc: dict, src: GradedModule):
    """Accumulate ``sum nu^i(F_1 (x) ... (x) F_i)`` for each choice of factor list.

    ``slot_maps(i)`` yields lists of ``i`` towers to place in the slots.
    Koszul signs come from each factor's degree and the inputs to its left.
    """
    ring = nu.ring
    for nkey, nval in nu.comps.items():
        i = len(nkey)
        if i == 0:
            continue
        for maps in slot_maps(i):
            indices = []
            for F in maps:
                ix: dict[int, list] = {}
                for akey, aval in F.comps.items():
                    if not akey:
                        continue
                    for g, c in aval.items():
                        ix.setdefault(g, []).append((akey, c))
                indices.append(ix)

            def dfs(q, key, coeff, left):
                if q == i:
                    acc[key] = elem_add(ring, acc.get(key, {}), nval, coeff)
                    return
                F = maps[q]
                for akey, c in indices[q].get(nkey[q], ()):
                    if len(key) + len(akey) + (i - q - 1) > lmax:
                        continue
                    sgn = _sign(F.degree * left)
                    dfs(q + 1, key + akey, coeff * c * sgn, left + sdeg_tuple(src, akey))

            dfs(0, (), 1, 0)


def star(nu: MultiMap, alpha: MultiMap, lmax: int | None = None) -> MultiMap:
    """``nu * alpha = sum nu^j(alpha^{i_1} (x) ... (x) alpha^{i_j})``."""
    if alpha.degree != 0:
        raise GradingError(f"*-product needs a degree 0 tower, got degree {alpha.degree}")
    return _tensor_compose(nu, alpha, lmax, lambda i: [[alpha] * i])


def postcompose(lin: MultiMap, x: MultiMap) -> MultiMap:
    """Apply a tensor-degree-one tower to the outputs of ``x`` (no sign: nothing sits to the left)."""
    if x.target is not lin.source:
        raise GradingError("outputs of x must live in the source of the linear map")
    comps = {k: lin(v) for k, v in x.comps.items()}
    return MultiMap(x.source, lin.target, lin.degree + x.degree, comps, x.lrange)


def _tensor_compose(nu: MultiMap, first: MultiMap, lmax, slot_maps, degree=None) -> MultiMap:
    A = first.source
    if first.target is not nu.source:
        raise GradingError("factor towers must land in the source of nu")
    if lmax is None:
        lmax = nu.lrange[1] * first.lrange[1]
    acc: dict = {}
    _expand(nu, slot_maps, lmax, acc, A)
    deg = nu.degree + first.degree if degree is None else degree
    return MultiMap(A, nu.target, deg, acc, (1, max(lmax, 1)))


def homotopy_star(nu: MultiMap, r: MultiMap, alpha: MultiMap, beta: MultiMap, lmax: int | None = None) -> MultiMap:
    """``nu (*) r``: one slot carries ``r``, slots to its left ``alpha``, to its right ``beta``."""
    if alpha.degree != 0 or beta.degree != 0:
        raise GradingError("flanking towers of a homotopy product must have degree 0")
    for F in (alpha, beta):
        if F.source is not r.source or F.target is not r.target:
            raise GradingError("homotopy and flanking morphisms must share source and target")

    def slots(i):
        for k in range(i):
            yield [alpha] * k + [r] + [beta] * (i - k - 1)

    if lmax is None:
        lmax = nu.lrange[1] * max(r.lrange[1], alpha.lrange[1], beta.lrange[1])
    return _tensor_compose(nu, r, lmax, slots, degree=nu.degree + r.degree)


@lru_cache(maxsize=None)
def hom_of(M: GradedModule, N: GradedModule) -> HomModule:
    """The cached ``Hom(F(M), N)`` module, so towers share one target object."""
    return HomModule(M, N)


def module_star(a: MultiMap, b: MultiMap, lmax: int | None = None) -> MultiMap:
    """``a * b = s gamma (s^{-1} (x) s^{-1}) sum_j a^j (x) b^{n-j}`` (module slot included)."""
    Ha, Hb = a.target, b.target
    if not isinstance(Ha, HomModule) or not isinstance(Hb, HomModule):
        raise GradingError("module product needs Hom-valued towers")
    if Ha.source is not Hb.target:
        raise GradingError("towers are not composable")
    if a.source is not b.source:
        raise GradingError("towers over different algebras")
    A = a.source
    Hres = hom_of(Hb.source, Ha.target)
    if lmax is None:
        lmax = a.lrange[1] + b.lrange[1]
    ring = a.ring
    bim: list = []
    for kb, gb in b.comps.items():
        bim.append((kb, Hb.images(gb)))
    acc: dict = {}
    for ka, fa in a.comps.items():
        s_ka = sdeg_tuple(A, ka)
        s_fa = a.degree + s_ka
        base = _sign(b.degree * s_ka + s_fa)
        fim = Ha.images(fa)
        for kb, gim in bim:
            if len(ka) + len(kb) > lmax:
                continue
            out: dict = {}
            for i, img in gim.items():
                for j, c in img.items():
                    for k, d in fim.get(j, {}).items():
                        key = Hres.index[i, k]
                        out[key] = out.get(key, 0) + c * d
            key = ka + kb
            acc[key] = elem_add(ring, acc.get(key, {}), out, base)
    lo = min(a.lrange[0] + b.lrange[0], lmax)
    return MultiMap(A, Hres, a.degree + b.degree - 1, acc, (lo, lmax))


def module_operator(x: MultiMap, pM: MultiMap, pN: MultiMap, nu: MultiMap, lmax: int) -> MultiMap:
    """``p_N * x + x * p_M + (-1)^{|x|} x^{>=1} o nu`` truncated at ``lmax``.

    Module morphisms are its zeros, homotopies move ``f`` to ``f - D(r)``
    and a module structure satisfies ``p * p + p o nu = 0``.
    """
    out = module_star(pN, x, lmax) + module_star(x, pM, lmax)
    xp = x.positive_part()
    if xp.comps:
        g = gerstenhaber(xp, nu.truncate(lmax), lmax)
        out = out.add(g, _sign(x.degree))
    return out.truncate(lmax, 0)


# ---------------------------------------------------------------------------
# differentials and endomorphism algebras
# ---------------------------------------------------------------------------


def suspended_differential(C: ChainComplex) -> MultiMap:
    """``nu^1 [a] = -[d a]`` as a tensor-degree-one tower on ``C``."""
    M = C.module
    comps = {(i,): elem_scale(C.ring, img, -1) for i, img in C.differential.items() if img}
    return MultiMap(M, M, -1, comps, (1, 1))


def strict_map(q, source: GradedModule, target: GradedModule) -> MultiMap:
    """A chain map as a degree 0 tower concentrated in tensor degree one."""
    comps = {(i,): img for i, img in q.images.items()}
    return MultiMap(source, target, 0, comps, (1, 1))


def hom_nu1(M: ChainComplex, N: ChainComplex) -> MultiMap:
    """``nu^1 [phi] = -[delta_Hom phi]`` on ``Hom(M, N)``."""
    H = hom_of(M.module, N.module)
    comps = {}
    for g in range(len(H)):
        v = hom_differential(H, M, N, {g: H.ring.one()})
        if v:
            comps[(g,)] = elem_scale(H.ring, v, -1)
    return MultiMap(H, H, -1, comps, (1, 1))


@dataclass
class EndAlgebra:
    """``(End M, nu^1, nu^2)`` for a complex ``M`` and the unit ``[id]``."""

    complex: ChainComplex
    module: HomModule
    nu: MultiMap
    identity: dict

    @property
    def delta(self) -> dict:
        """``[delta_M]`` as an element of ``Pi End M``."""
        H = self.module
        return H.from_images(self.complex.differential)


def end_algebra(C: ChainComplex) -> EndAlgebra:
    H = hom_of(C.module, C.module)
    nu1 = hom_nu1(C, C)
    comps = dict(nu1.comps)
    ring = C.ring
    for e1, (i, j) in enumerate(H.labels):
        s = _sign(H.degrees[e1])
        for e2, (k, l) in enumerate(H.labels):
            if l == i:
                comps[(e1, e2)] = {H.index[k, j]: s * ring.one()}
    nu = MultiMap(H, H, -1, comps, (1, 2))
    return EndAlgebra(C, H, nu, H.identity())


def hhc_differential(x: MultiMap, nuA1: MultiMap, nuB1: MultiMap) -> MultiMap:
    """``d x = nu^1_B x - (-1)^{|x|} x o nu^1_A``."""
    a = postcompose(nuB1, x)
    if x.positive_part().comps:
        b = gerstenhaber(x.positive_part(), nuA1.component(1), x.lrange[1])
        a = a.add(b, -_sign(x.degree))
    return a.with_range(min(a.lrange[0], x.lrange[0]), max(a.lrange[1], x.lrange[1]))


# ---------------------------------------------------------------------------
# units
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitData:
    """A unit generator ``index`` of ``module``; the complement is the other generators.

    The unit is split when it spans a free rank-one summand, i.e. no relation
    involves it.
    """

    module: GradedModule
    index: int

    def __post_init__(self):
        if self.module.degrees[self.index] != 0:
            raise UnitError("the unit must sit in degree 0")

    @property
    def is_split(self) -> bool:
        return not any(self.index in r for r in self.module.relations)

    def require_split(self):
        if not self.is_split:
            raise UnitError("the unit generator takes part in a relation, so it does not split")

    @property
    def bar(self) -> list[int]:
        return [i for i in range(len(self.module)) if i != self.index]

    def splitting(self, x: dict):
        return x.get(self.index, 0)

    def touches(self, key: Sequence[int]) -> bool:
        return self.index in key


def mu_su(unit: UnitData) -> MultiMap:
    """The trivial strictly unital structure: unit laws in tensor degree two, zero on bar tensors."""
    A = unit.module
    u = unit.index
    comps = {(u, u): {u: 1}}
    for a in unit.bar:
        comps[(u, a)] = {a: 1}
        comps[(a, u)] = {a: _sign(A.degrees[a])}
    return MultiMap(A, A, -1, comps, (2, 2))


def _su_in_range(unit: UnitData, lrange) -> MultiMap:
    lo, hi = lrange
    if lo <= 2 <= hi:
        return mu_su(unit).with_range(lo, hi)
    return MultiMap(unit.module, unit.module, -1, {}, lrange)


def g_su(unitA: UnitData, unitB: UnitData) -> MultiMap:
    """``[1] -> [1]``, zero on the complement."""
    return MultiMap(unitA.module, unitB.module, 0, {(unitA.index,): {unitB.index: 1}}, (1, 1))


def module_unit(unit: UnitData, end: EndAlgebra) -> MultiMap:
    """``[1] -> [id]`` into ``End M``; the trivial strictly unital module tower."""
    return MultiMap(unit.module, end.module, 0, {(unit.index,): end.identity}, (1, 1))


def split_decompose(nu: MultiMap, unit: UnitData) -> tuple[MultiMap, MultiMap]:
    """``nu = mu + mu_su`` with ``mu`` supported on bar tensors."""
    v = is_strictly_unital(nu, unit, "structure")
    if not v:
        raise UnitError(v.witness)
    su = _su_in_range(unit, nu.lrange)
    mu = (nu - su).with_range(*nu.lrange)
    return mu, su


@dataclass
class Verdict:
    ok: bool
    witness: str | None = None

    def __bool__(self):
        return self.ok


def _describe(x: MultiMap, key) -> str:
    S = x.source
    src = "|".join(str(S.labels[i]) for i in key)
    return f"[{src}] -> {x.target.format(x.comps.get(key, {}))}"


def is_strictly_unital(x: MultiMap, unit: UnitData, role: str, target_unit: UnitData | None = None, target_one=None) -> Verdict:
    """Check the unit equations for a structure, morphism or homotopy tower.

    For morphisms ``target_one`` is the element that ``[1]`` must hit; it
    defaults to the unit of ``target_unit``.
    """
    if role == "structure":
        diff = x - _su_in_range(unit, x.lrange)
        for key in sorted(diff.comps, key=lambda k: (len(k), k)):
            if unit.touches(key):
                return Verdict(False, f"unit equation fails at {_describe(x, key)}")
        return Verdict(True)
    if role == "morphism":
        if target_one is None:
            if target_unit is None:
                raise UnitError("morphism check needs the target unit")
            target_one = {target_unit.index: 1}
        for key, val in sorted(x.comps.items(), key=lambda kv: (len(kv[0]), kv[0])):
            if key == (unit.index,):
                continue
            if unit.touches(key):
                return Verdict(False, f"unit slot nonzero at {_describe(x, key)}")
        got = x.comps.get((unit.index,), {})
        if not x.target.equal(got, target_one):
            return Verdict(False, f"[1] maps to {x.target.format(got)}")
        return Verdict(True)
    if role == "homotopy":
        for key in sorted(x.comps, key=lambda k: (len(k), k)):
            if key and unit.touches(key):
                return Verdict(False, f"unit slot nonzero at {_describe(x, key)}")
        return Verdict(True)
    raise ValueError(f"unknown role {role!r}")


# ---------------------------------------------------------------------------
# identity checkers
# ---------------------------------------------------------------------------


def clip(x: MultiMap, max_sdeg=None) -> MultiMap:
    """Components on tensors of suspended total degree at most ``max_sdeg``.

    That set of tensors is closed under every identity used here: products
    keep the suspended degree of the outer tensor and differentials lower it.
    """
    if max_sdeg is None or max_sdeg == float("inf"):
        return x
    S = x.source
    return x.filter(lambda k: sdeg_tuple(S, k) <= max_sdeg)


def _zero_verdict(x: MultiMap, what: str, max_sdeg=None) -> Verdict:
    first = clip(x, max_sdeg).first_nonzero()
    if first is None:
        return Verdict(True)
    key, _ = first
    return Verdict(False, f"{what} fails in tensor degree {len(key)} at {_describe(x, key)}")


def check_an_algebra(nu: MultiMap, n: int, max_sdeg=None) -> Verdict:
    nu = nu.truncate(n, 1)
    return _zero_verdict(gerstenhaber(nu, nu, n), "Stasheff identity", max_sdeg)


def check_an_morphism(alpha: MultiMap, nuA: MultiMap, nuB: MultiMap, n: int, max_sdeg=None) -> Verdict:
    alpha = alpha.truncate(n, 1)
    lhs = star(nuB.truncate(n, 1), alpha, n) - gerstenhaber(alpha, nuA.truncate(n, 1), n)
    return _zero_verdict(lhs.truncate(n, 1), "morphism identity", max_sdeg)


def check_an_homotopy(r: MultiMap, alpha: MultiMap, beta: MultiMap, nuA: MultiMap, nuB: MultiMap, n: int, max_sdeg=None) -> Verdict:
    """``alpha - beta = nu_B (*) r - (-1)^{|r|} r o nu_A`` in tensor degrees ``<= n``."""
    r = r.truncate(n, 1)
    alpha, beta = alpha.truncate(n, 1), beta.truncate(n, 1)
    rhs = homotopy_star(nuB.truncate(n, 1), r, alpha, beta, n)
    rhs = rhs.add(gerstenhaber(r, nuA.truncate(n, 1), n), -_sign(r.degree))
    lhs = (alpha - beta).with_range(1, n)
    return _zero_verdict((lhs - rhs.with_range(1, n)).truncate(n, 1), "homotopy identity", max_sdeg)


def check_module_structure(p: MultiMap, end: EndAlgebra, nu: MultiMap, n: int, max_sdeg=None) -> Verdict:
    """``p^0 = [delta]`` and ``p^{>=1}`` is a morphism of A_{n-1}-algebras into ``End M``."""
    H = end.module
    if not H.equal(p.comps.get((), {}), end.delta):
        return Verdict(False, "tensor degree 0 slot is not the differential")
    if n <= 1:
        return Verdict(True)
    return check_an_morphism(p.positive_part().truncate(n - 1, 1), nu, end.nu, n - 1, max_sdeg)


def check_module_morphism(f: MultiMap, pM: MultiMap, pN: MultiMap, nu: MultiMap, n: int, max_sdeg=None) -> Verdict:
    return _zero_verdict(module_operator(f.truncate(n - 1, 0), pM, pN, nu, n - 1), "module morphism identity", max_sdeg)


def check_module_homotopy(
    r: MultiMap, f: MultiMap, g: MultiMap, pM: MultiMap, pN: MultiMap, nu: MultiMap, n: int, max_sdeg=None
) -> Verdict:
    D = module_operator(r.truncate(n - 1, 0), pM, pN, nu, n - 1)
    diff = (f.truncate(n - 1, 0) - g.truncate(n - 1, 0)).with_range(0, n - 1) - D.with_range(0, n - 1)
    return _zero_verdict(diff, "module homotopy identity", max_sdeg)
