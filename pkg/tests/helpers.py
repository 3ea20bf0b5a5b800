"""Random fixtures shared by the property suites and the acceptance run."""

import random

from ainftransfer.graded import ChainComplex, GradedModule, elem_add
from ainftransfer.hhc import (
    MultiMap,
    UnitData,
    end_algebra,
    hom_nu1,
    suspended_differential,
)
from ainftransfer.ring import ZZ, BaseRing
from ainftransfer.samples import random_complex, random_multimap

RINGS = [ZZ, BaseRing.integers_mod(8), BaseRing.prime_field(5)]


def small_complex(ring, rng, prefix, degrees=(0, 1), max_rank=2):
    """A nonzero random free complex."""
    while True:
        C = random_complex(ring, rng, degrees=degrees, max_rank=max_rank, prefix=prefix)
        if len(C.module):
            return C


def unital_complex(ring, rng, prefix="a"):
    """A random free complex with an extra cycle ``1`` in degree 0 that nothing hits."""
    C = small_complex(ring, rng, prefix, degrees=(0, 1, 2), max_rank=1)
    M = C.module
    gens = [("1", 0)] + [(lab, d) for lab, d in zip(M.labels, M.degrees)]
    U = GradedModule(ring, gens, name=prefix)
    diff = {M.labels[i]: M.labelled(v) for i, v in C.differential.items()}
    D = ChainComplex(U, diff)
    return D, UnitData(U, U.index["1"])


def random_tower(rng, source, target, degree, lrange, allowed=None):
    return random_multimap(source, target, degree, lrange, rng, density=0.8, allowed=allowed)


def sign_engine_cases(ring, rng):
    """One random tower for each of the four Hom-type complexes, with its differentials.

    Yields ``(name, x, nu_source, nu_target, unit_or_None)``.
    """
    A = small_complex(ring, rng, "a")
    B = small_complex(ring, rng, "b", degrees=(0, 1, 2))
    nuA, nuB = suspended_differential(A), suspended_differential(B)
    deg = rng.choice([-1, 0, 1])
    yield "AB", random_tower(rng, A.module, B.module, deg, (1, 2)), nuA, nuB, None

    Au, unit = unital_complex(ring, rng)
    nuAu = suspended_differential(Au)
    x = random_tower(rng, Au.module, B.module, deg, (1, 2), allowed=unit.bar)
    yield "AbarB", x, nuAu, nuB, unit

    M = small_complex(ring, rng, "m", degrees=(0, 1), max_rank=1)
    end = end_algebra(M)
    x = random_tower(rng, A.module, end.module, deg, (1, 2))
    yield "AEnd", x, nuA, end.nu.component(1), None

    N = small_complex(ring, rng, "n", degrees=(0, 1), max_rank=1)
    nuH = hom_nu1(M, N)
    x = random_tower(rng, A.module, nuH.source, deg, (1, 2))
    yield "AHom", x, nuA, nuH, None


def perturb(x: MultiMap, rng: random.Random) -> MultiMap:
    """Add one to a random coefficient of a random nonzero component."""
    key = rng.choice(sorted(x.comps))
    val = x.comps[key]
    j = rng.choice(sorted(val))
    comps = dict(x.comps)
    comps[key] = elem_add(x.ring, val, {j: 1})
    return MultiMap(x.source, x.target, x.degree, comps, x.lrange)
