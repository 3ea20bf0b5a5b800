"""Tensor-coalgebra cross-check, written independently of the product formulas in :mod:`hhc`.

Words are tuples of generator indices of ``PiA``; a chain in the truncated
tensor coalgebra is a dict ``word -> coefficient``. Towers are consumed only
through their raw ``comps`` data, and all signs are recomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .hhc import MultiMap

__all__ = [
    "TruncatedTensorCoalgebra",
    "CoalgebraMap",
    "psi_inverse",
    "phi_inverse",
    "coderivation_of",
    "is_coalgebra_morphism",
    "is_coderivation",
    "apply_tower",
    "oracle_identities",
    "OracleReport",
]


def _parity_sign(k: int) -> int:
    return -1 if k & 1 else 1


@dataclass(frozen=True)
class TruncatedTensorCoalgebra:
    """``T^{<=n}(PiA)`` with the reduced deconcatenation coproduct."""

    module: object
    n: int

    def weight(self, word) -> int:
        return sum(self.module.degrees[g] + 1 for g in word)

    def coproduct(self, chain: dict) -> dict:
        out: dict = {}
        for w, c in chain.items():
            for k in range(1, len(w)):
                key = (w[:k], w[k:])
                out[key] = out.get(key, 0) + c
        return {k: v for k, v in out.items() if v}


class CoalgebraMap:
    """A linear map between truncated tensor coalgebras, given on basis words."""

    def __init__(self, source: TruncatedTensorCoalgebra, target: TruncatedTensorCoalgebra, degree: int, table: dict):
        self.source = source
        self.target = target
        self.degree = degree
        self.table = table  # word -> chain

    def __call__(self, chain: dict) -> dict:
        out: dict = {}
        for w, c in chain.items():
            for v, d in self.table.get(w, {}).items():
                out[v] = out.get(v, 0) + c * d
        return {k: v for k, v in out.items() if v}

    def tensor_apply(self, left: "CoalgebraMap", right: "CoalgebraMap", pairs: dict) -> dict:
        """``(left (x) right)`` on a chain of word pairs, with the Koszul sign of ``right``."""
        out: dict = {}
        for (u, v), c in pairs.items():
            s = _parity_sign(right.degree * self.source.weight(u))
            for u2, a in left.table.get(u, {}).items():
                for v2, b in right.table.get(v, {}).items():
                    key = (u2, v2)
                    out[key] = out.get(key, 0) + s * c * a * b
        return {k: x for k, x in out.items() if x}


def _words(module, n):
    from itertools import product

    for k in range(1, n + 1):
        yield from product(range(len(module)), repeat=k)


def _blocks(word, parts):
    """All ways of cutting ``word`` into ``parts`` nonempty consecutive blocks."""
    k = len(word)
    if parts == 1:
        yield [word]
        return
    for cut in range(1, k - parts + 2):
        for rest in _blocks(word[cut:], parts - 1):
            yield [word[:cut]] + rest


def _apply_blocks(maps, blocks, src_module) -> dict:
    """``(F_1 (x) ... (x) F_j)`` on the concatenation of ``blocks``; returns target words."""
    chain = {(): 1}
    left_weight = 0
    for F, blk in zip(maps, blocks):
        vals = F.comps.get(tuple(blk))
        new: dict = {}
        if vals:
            s = _parity_sign(F.degree * left_weight)
            for w, c in chain.items():
                for g, d in vals.items():
                    key = w + (g,)
                    new[key] = new.get(key, 0) + s * c * d
        chain = new
        if not chain:
            return {}
        left_weight += sum(src_module.degrees[g] + 1 for g in blk)
    return chain


def psi_inverse(alpha: MultiMap, n: int) -> CoalgebraMap:
    """Coalgebra morphism whose word-length-``j`` block is ``sum alpha^{i_1} (x) ... (x) alpha^{i_j}``."""
    A, B = alpha.source, alpha.target
    TA, TB = TruncatedTensorCoalgebra(A, n), TruncatedTensorCoalgebra(B, n)
    table = {}
    for w in _words(A, n):
        out: dict = {}
        for j in range(1, len(w) + 1):
            for blocks in _blocks(w, j):
                for v, c in _apply_blocks([alpha] * j, blocks, A).items():
                    out[v] = out.get(v, 0) + c
        out = {k: x for k, x in out.items() if x}
        if out:
            table[w] = out
    return CoalgebraMap(TA, TB, alpha.degree, table)


def phi_inverse(r: MultiMap, alpha: MultiMap, beta: MultiMap, n: int) -> CoalgebraMap:
    """The ``(alpha, beta)``-coderivation extending ``r``: alphas left of ``r``, betas right."""
    A, B = r.source, r.target
    TA, TB = TruncatedTensorCoalgebra(A, n), TruncatedTensorCoalgebra(B, n)
    table = {}
    for w in _words(A, n):
        out: dict = {}
        for j in range(1, len(w) + 1):
            for blocks in _blocks(w, j):
                for k in range(j):
                    maps = [alpha] * k + [r] + [beta] * (j - k - 1)
                    for v, c in _apply_blocks(maps, blocks, A).items():
                        out[v] = out.get(v, 0) + c
        out = {k: x for k, x in out.items() if x}
        if out:
            table[w] = out
    return CoalgebraMap(TA, TB, r.degree, table)


def _identity_tower(A, n) -> MultiMap:
    return MultiMap(A, A, 0, {(g,): {g: 1} for g in range(len(A))}, (1, n))


def coderivation_of(nu: MultiMap, n: int) -> CoalgebraMap:
    """``sum 1^{(x)a} (x) nu (x) 1^{(x)b}``: the coderivation with both flanks the identity."""
    one = _identity_tower(nu.source, n)
    return phi_inverse(nu, one, one, n)


def is_coalgebra_morphism(F: CoalgebraMap) -> bool:
    TA, TB = F.source, F.target
    for w in _words(TA.module, TA.n):
        lhs = TB.coproduct(F({w: 1}))
        rhs = F.tensor_apply(F, F, TA.coproduct({w: 1}))
        if _trim(lhs, TB) != _trim(rhs, TB):
            return False
    return True


def is_coderivation(R: CoalgebraMap, Fa: CoalgebraMap, Fb: CoalgebraMap) -> bool:
    """``Delta R = (R (x) Psi^{-1} beta + Psi^{-1} alpha (x) R) Delta``."""
    TA, TB = R.source, R.target
    for w in _words(TA.module, TA.n):
        d = TA.coproduct({w: 1})
        lhs = TB.coproduct(R({w: 1}))
        rhs = R.tensor_apply(R, Fb, d)
        for k, v in R.tensor_apply(Fa, R, d).items():
            rhs[k] = rhs.get(k, 0) + v
        if _trim(lhs, TB) != _trim(rhs, TB):
            return False
    return True


def _trim(pairs: dict, T: TruncatedTensorCoalgebra) -> dict:
    """Pairs of total length within the truncation, coefficients reduced in the ring."""
    ring = T.module.ring
    out = {k: ring(v) for k, v in pairs.items() if len(k[0]) + len(k[1]) <= T.n}
    return {k: v for k, v in out.items() if v}


def apply_tower(mu: MultiMap, F: CoalgebraMap, n: int) -> MultiMap:
    """The tower ``mu o F`` read back on words of length ``<= n``."""
    A = F.source.module
    comps = {}
    for w in _words(A, n):
        out: dict = {}
        for v, c in F.table.get(w, {}).items():
            for g, d in mu.comps.get(v, {}).items():
                out[g] = out.get(g, 0) + c * d
        out = {g: x for g, x in out.items() if x}
        if out:
            comps[w] = out
    return MultiMap(A, mu.target, mu.degree + F.degree, comps, (1, n))


@dataclass
class OracleReport:
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is True for v in self.checks.values())

    def __bool__(self):
        return self.ok


def oracle_identities(mu=None, nu=None, alpha=None, beta=None, r=None, n: int = 4, nu_B=None) -> OracleReport:
    """Compare the three product formulas with their coalgebra readings.

    ``mu`` and ``nu`` give ``(mu o nu)``; ``nu_B`` with ``alpha`` gives the
    *-product; ``nu_B``, ``r``, ``alpha``, ``beta`` give the homotopy product.
    """
    from .hhc import gerstenhaber, homotopy_star, star

    rep = OracleReport()

    def compare(name, lhs, rhs):
        diff = lhs.truncate(n, 1).with_range(1, n) - rhs.truncate(n, 1).with_range(1, n)
        first = diff.first_nonzero()
        rep.checks[name] = True if first is None else f"differs at {first[0]}"

    if mu is not None and nu is not None:
        compare("gerstenhaber", gerstenhaber(mu, nu, n), apply_tower(mu, coderivation_of(nu, n), n))
    if nu_B is not None and alpha is not None:
        compare("star", star(nu_B, alpha, n), apply_tower(nu_B, psi_inverse(alpha, n), n))
    if nu_B is not None and r is not None and alpha is not None and beta is not None:
        compare(
            "homotopy_star",
            homotopy_star(nu_B, r, alpha, beta, n),
            apply_tower(nu_B, phi_inverse(r, alpha, beta, n), n),
        )
    return rep
