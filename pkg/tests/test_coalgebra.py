"""The tensor-coalgebra cross-check against the hom-complex product formulas."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainftransfer.coalgebra import (
    CoalgebraMap,
    apply_tower,
    is_coalgebra_morphism,
    is_coderivation,
    oracle_identities,
    phi_inverse,
    psi_inverse,
)
from ainftransfer.hhc import MultiMap, star, suspended_differential

from helpers import RINGS, random_tower, small_complex

N = 4


def identity(A, n=N):
    return MultiMap(A, A, 0, {(g,): {g: 1} for g in range(len(A))}, (1, n))


def instance(ring, rng):
    A = small_complex(ring, rng, "a", degrees=(-1, 0, 1), max_rank=2)
    B = small_complex(ring, rng, "b", degrees=(-1, 0, 1), max_rank=2)
    nuB = suspended_differential(B) + random_tower(rng, B.module, B.module, -1, (2, N))
    alpha = random_tower(rng, A.module, B.module, 0, (1, N))
    beta = random_tower(rng, A.module, B.module, 0, (1, N))
    r = random_tower(rng, A.module, B.module, 1, (1, N))
    mu = random_tower(rng, A.module, A.module, -1, (1, N))
    nu = random_tower(rng, A.module, A.module, rng.choice([-1, 0, 1]), (1, N))
    return dict(mu=mu, nu=nu, alpha=alpha, beta=beta, r=r, nu_B=nuB)


class TestPsiInverse:
    def test_identity_tower_gives_identity(self):
        rng = random.Random(0)
        A = small_complex(RINGS[0], rng, "a")
        F = psi_inverse(identity(A.module), 3)
        assert all(F.table[w] == {w: 1} for w in F.table)
        assert len(F.table) == sum(len(A.module) ** k for k in range(1, 4))

    @pytest.mark.parametrize("ring", RINGS, ids=str)
    def test_morphism_and_projection(self, ring):
        rng = random.Random(RINGS.index(ring) + 10)
        for _ in range(5):
            ex = instance(ring, rng)
            alpha = ex["alpha"]
            F = psi_inverse(alpha, 3)
            assert is_coalgebra_morphism(F)
            # projecting to word length one recovers alpha
            for w, out in F.table.items():
                single = {v[0]: c for v, c in out.items() if len(v) == 1}
                assert {g: ring(c) for g, c in single.items() if ring(c)} == alpha.comps.get(w, {})


class TestPhiInverse:
    @pytest.mark.parametrize("ring", RINGS, ids=str)
    def test_is_coderivation(self, ring):
        rng = random.Random(RINGS.index(ring) + 20)
        for _ in range(5):
            ex = instance(ring, rng)
            Fa, Fb = psi_inverse(ex["alpha"], 3), psi_inverse(ex["beta"], 3)
            R = phi_inverse(ex["r"], ex["alpha"], ex["beta"], 3)
            assert is_coderivation(R, Fa, Fb)

    def test_swapped_flanks_fail(self):
        # the (beta, alpha) reading is a different condition once alpha != beta
        rng = random.Random(31)
        failures = 0
        for _ in range(10):
            ex = instance(RINGS[0], rng)
            if ex["alpha"] == ex["beta"]:
                continue
            Fa, Fb = psi_inverse(ex["alpha"], 3), psi_inverse(ex["beta"], 3)
            R = phi_inverse(ex["r"], ex["alpha"], ex["beta"], 3)
            failures += not is_coderivation(R, Fb, Fa)
        assert failures > 0

    def test_projection_recovers_r(self):
        rng = random.Random(5)
        ex = instance(RINGS[0], rng)
        R = phi_inverse(ex["r"], ex["alpha"], ex["beta"], 3)
        for w, out in R.table.items():
            single = {v[0]: c for v, c in out.items() if len(v) == 1}
            assert {g: c for g, c in single.items() if c} == ex["r"].comps.get(w, {})

    def test_apply_tower_is_linear_in_the_outer_map(self):
        rng = random.Random(8)
        ex = instance(RINGS[0], rng)
        F = psi_inverse(ex["alpha"], 3)
        nu = ex["nu_B"]
        twice = apply_tower(nu + nu, F, 3)
        assert twice == apply_tower(nu, F, 3) + apply_tower(nu, F, 3)


class TestOracle:
    def test_zero_inputs(self):
        rng = random.Random(1)
        A = small_complex(RINGS[0], rng, "a")
        z = MultiMap(A.module, A.module, -1, {}, (1, N))
        zero0 = MultiMap(A.module, A.module, 0, {}, (1, N))
        zero1 = MultiMap(A.module, A.module, 1, {}, (1, N))
        rep = oracle_identities(z, z, zero0, zero0, zero1, N, nu_B=z)
        assert rep.ok and set(rep.checks) == {"gerstenhaber", "star", "homotopy_star"}

    @pytest.mark.parametrize("ring", RINGS, ids=str)
    def test_random_instances(self, ring):
        rng = random.Random(RINGS.index(ring) + 40)
        nontrivial = 0
        for _ in range(6):
            ex = instance(ring, rng)
            rep = oracle_identities(n=N, **ex)
            assert rep.ok, rep.checks
            nontrivial += bool(star(ex["nu_B"], ex["alpha"], N).comps)
        assert nontrivial

    def test_detects_a_wrong_sign(self):
        rng = random.Random(2)
        lhs = None
        while not (lhs and lhs.comps):
            ex = instance(RINGS[0], rng)
            lhs = star(ex["nu_B"], ex["alpha"], N)
        F = psi_inverse(ex["alpha"], N)
        bad = CoalgebraMap(F.source, F.target, F.degree, {w: {v: -c for v, c in out.items()} for w, out in F.table.items()})
        assert lhs != apply_tower(ex["nu_B"], bad, N)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_oracle_agrees_on_random_towers(seed):
    rng = random.Random(seed)
    rep = oracle_identities(n=3, **instance(RINGS[seed % 3], rng))
    assert rep.ok, rep.checks
