"""Random inputs for property checks and the three worked problems E1, E2, E3."""

from __future__ import annotations

import itertools
import random

from .graded import ChainComplex, GradedModule
from .hhc import MultiMap, sdeg_tuple
from .ring import ZZ, BaseRing

__all__ = [
    "random_complex",
    "random_multimap",
    "tuples_by_degree",
    "e1_problem",
    "e2_problem",
    "e3_problem",
    "periodic_complex",
]


def _unimodular(ring: BaseRing, n: int, rng: random.Random) -> tuple[list[list], list[list]]:
    """A random invertible matrix and its inverse, built from elementary moves."""
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Uinv = [row[:] for row in U]
    for _ in range(2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-2, 2)
        # row_i += c row_j on U, col_j -= c col_i on the inverse
        U[i] = [ring(a + c * b) for a, b in zip(U[i], U[j])]
        for row in Uinv:
            row[j] = ring(row[j] - c * row[i])
    return U, Uinv


def random_complex(ring: BaseRing, rng: random.Random, degrees=(0, 1, 2), max_rank: int = 2, prefix: str = "x") -> ChainComplex:
    """A free complex: a random sum of disks and spheres in a scrambled basis."""
    gens: dict[int, list] = {d: [] for d in degrees}
    diff_pairs = []
    for d in degrees:
        for _ in range(rng.randint(0, max_rank)):
            gens[d].append(None)
    # pair some generators into disks d_{n} -> d_{n-1}
    counter = itertools.count()
    labels: dict[int, list] = {d: [f"{prefix}{d}_{next(counter)}" for _ in gens[d]] for d in degrees}
    used: dict[int, set] = {d: set() for d in degrees}
    for d in degrees:
        if d - 1 not in labels:
            continue
        for i, lab in enumerate(labels[d]):
            if i in used[d] or rng.random() < 0.4:
                continue
            free = [j for j in range(len(labels[d - 1])) if j not in used[d - 1]]
            if not free:
                break
            j = rng.choice(free)
            used[d].add(i)
            used[d - 1].add(j)
            c = ring(rng.choice([1, 2, 3, 4, -2]))
            if c:
                diff_pairs.append((lab, labels[d - 1][j], c))
    M = GradedModule(ring, [(lab, d) for d in degrees for lab in labels[d]], name=prefix)
    base = {lab: {} for d in degrees for lab in labels[d]}
    for s, t, c in diff_pairs:
        base[s] = {t: c}
    # scramble: new basis e'_i = sum_j U_ij e_j in each degree
    change: dict[int, tuple] = {d: _unimodular(ring, len(labels[d]), rng) for d in degrees}

    def to_new(d, vec_old):
        _, Uinv = change[d]
        n = len(labels[d])
        # an old basis vector e_j equals sum_i Uinv_{ji} e'_i
        out = {}
        for j, c in vec_old.items():
            for i in range(n):
                x = Uinv[j][i]
                if x:
                    out[labels[d][i]] = ring(out.get(labels[d][i], 0) + c * x)
        return {k: v for k, v in out.items() if v}

    diff = {}
    for d in degrees:
        U, _ = change[d]
        for i, lab in enumerate(labels[d]):
            if d - 1 not in labels:
                continue
            img_old: dict = {}
            for j, c in enumerate(U[i]):
                if not c:
                    continue
                for t, e in base[labels[d][j]].items():
                    jj = labels[d - 1].index(t)
                    img_old[jj] = ring(img_old.get(jj, 0) + c * e)
            diff[lab] = to_new(d - 1, {k: v for k, v in img_old.items() if v})
    return ChainComplex(M, diff)


def tuples_by_degree(source: GradedModule, l: int, total_sdeg=None, allowed=None):
    """All ``l``-tuples of generator indices, optionally with fixed suspended total degree."""
    pool = list(range(len(source))) if allowed is None else list(allowed)
    for key in itertools.product(pool, repeat=l):
        if total_sdeg is None or sdeg_tuple(source, key) == total_sdeg:
            yield key


def random_multimap(
    source: GradedModule,
    target: GradedModule,
    degree: int,
    lrange: tuple[int, int],
    rng: random.Random,
    density: float = 0.5,
    coeffs=(-2, -1, 1, 2, 3),
    allowed=None,
) -> MultiMap:
    """A random tower; every component lands in the degree forced by ``degree``."""
    comps = {}
    lo, hi = lrange
    for l in range(lo, hi + 1):
        pool = list(range(len(source))) if allowed is None else list(allowed)
        for key in itertools.product(pool, repeat=l):
            d = sdeg_tuple(source, key) + degree - 1
            tg = target.gens_in_degree(d)
            if not tg or rng.random() > density:
                continue
            val = {j: rng.choice(coeffs) for j in tg if rng.random() < 0.7}
            if val:
                comps[key] = val
    return MultiMap(source, target, degree, comps, lrange)


def periodic_complex(ring: BaseRing, lo: int, hi: int, factor: int) -> ChainComplex:
    """A window ``K_hi -> ... -> K_lo`` of the two-sided complex with every map ``factor``."""
    gens = [(f"c{d}", d) for d in range(lo, hi + 1)]
    M = GradedModule(ring, gens, name="periodic")
    diff = {f"c{d}": {f"c{d - 1}": factor} for d in range(lo + 1, hi + 1)}
    return ChainComplex(M, diff, complete=False, unbounded_below=True)


# ---------------------------------------------------------------------------
# worked problems
# ---------------------------------------------------------------------------


def e1_problem():
    """``B = Z/4`` over ``Z`` with unit ``1``."""
    from .structures import AnStructure

    B = GradedModule(ZZ, [("1", 0)], [{"1": 4}], name="B")
    CB = ChainComplex(B, {})
    return AnStructure.from_products(CB, {("1", "1"): {"1": 1}}, unit="1")


def e2_problem():
    """``B = (Z/4)[x]/(x^2 - 2)`` over ``Z``, basis ``1, x``."""
    from .structures import AnStructure

    B = GradedModule(ZZ, [("1", 0), ("x", 0)], [{"1": 4}, {"x": 4}], name="B")
    CB = ChainComplex(B, {})
    products = {
        ("1", "1"): {"1": 1},
        ("1", "x"): {"x": 1},
        ("x", "1"): {"x": 1},
        ("x", "x"): {"1": 2},
    }
    return AnStructure.from_products(CB, products, unit="1")


def e3_problem():
    """The module ``M = Z/2`` over ``B = Z/4`` together with its presentation complex."""
    from .structures import AnModuleStructure

    algebra = e1_problem()
    Mmod = GradedModule(ZZ, [("m", 0)], [{"m": 2}], name="M")
    CM = ChainComplex(Mmod, {})
    return algebra, AnModuleStructure.from_action(algebra, CM, {("1", "m"): {"m": 1}})
