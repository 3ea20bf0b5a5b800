"""Products, differentials, units and identity checkers on towers."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainftransfer.graded import ChainComplex, GradedModule, GradingError
from ainftransfer.hhc import (
    MultiMap,
    UnitData,
    UnitError,
    check_an_algebra,
    check_an_homotopy,
    check_an_morphism,
    check_module_structure,
    end_algebra,
    g_su,
    gerstenhaber,
    hhc_differential,
    homotopy_star,
    module_star,
    mu_su,
    is_strictly_unital,
    split_decompose,
    star,
    suspended_differential,
)
from ainftransfer.ring import ZZ
from ainftransfer.samples import e2_problem, e3_problem, random_multimap
from ainftransfer.structures import AnModuleStructure, AnStructure

from helpers import RINGS, random_tower, sign_engine_cases, small_complex, unital_complex


def identity_tower(M, degree=0):
    return MultiMap(M, M, degree, {(g,): {g: 1} for g in range(len(M))}, (1, 1))


def two_term():
    M = GradedModule(ZZ, [("1", 0), ("e", 1)], name="A")
    return ChainComplex(M, {"e": {"1": 4}})


class TestDifferential:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_squares_to_zero(self, seed):
        rng = random.Random(seed)
        ring = RINGS[seed % 3]
        for name, x, nu_s, nu_t, unit in sign_engine_cases(ring, rng):
            d = hhc_differential(x, nu_s, nu_t)
            assert hhc_differential(d, nu_s, nu_t).is_zero(), name
            if unit is not None:
                # the complement subspace is preserved
                assert not any(unit.touches(k) for k in d.comps)

    def test_suspended_differential_is_cycle(self):
        nu1 = suspended_differential(two_term())
        assert hhc_differential(nu1, nu1, nu1).is_zero()

    def test_chain_map_is_cycle(self):
        C = two_term()
        nu1 = suspended_differential(C)
        assert hhc_differential(identity_tower(C.module), nu1, nu1).is_zero()


class TestGerstenhaber:
    def test_linear_parts_compose(self):
        rng = random.Random(2)
        A = small_complex(ZZ, rng, "a", degrees=(0, 1, 2))
        mu = random_tower(rng, A.module, A.module, -1, (1, 1))
        nu = random_tower(rng, A.module, A.module, -1, (1, 1))
        out = gerstenhaber(mu, nu, 3)
        assert set(len(k) for k in out.comps) <= {1}
        for (g,), _ in nu.comps.items():
            assert out.comps.get((g,), {}) == mu(nu.comps[(g,)])

    def test_identity_counts_slots(self):
        rng = random.Random(4)
        A = small_complex(ZZ, rng, "a", degrees=(0,))
        mu = random_multimap(A.module, A.module, -1, (1, 3), rng, density=1.0)
        out = gerstenhaber(mu, identity_tower(A.module), 3)
        assert out == mu.scale(1).add(mu.component(2), 1).add(mu.component(3), 2).truncate(3, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_pre_lie(self, seed):
        rng = random.Random(seed)
        ring = RINGS[seed % 3]
        A = small_complex(ring, rng, "a", degrees=(-1, 0, 1))
        f = random_multimap(A.module, A.module, -1, (1, 4), rng, density=0.8)
        ff = gerstenhaber(f, f, 4)
        assert gerstenhaber(f, ff, 4) == gerstenhaber(ff, f, 4)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 4))
    def test_truncation_compatible(self, seed, n):
        rng = random.Random(seed)
        A = small_complex(ZZ, rng, "a", degrees=(-1, 0, 1))
        nu = random_multimap(A.module, A.module, -1, (1, 4), rng, density=0.7)
        full = gerstenhaber(nu, nu, 8).truncate(n, 1)
        cut = gerstenhaber(nu.truncate(n, 1), nu.truncate(n, 1), n).truncate(n, 1)
        assert full == cut


class TestStar:
    def test_strict_identity(self):
        rng = random.Random(1)
        A = small_complex(ZZ, rng, "a", degrees=(0, 1))
        nu = random_multimap(A.module, A.module, -1, (1, 3), rng, density=0.8)
        assert star(nu, identity_tower(A.module), 3) == nu

    def test_linear_alpha_feeds_diagonal(self):
        rng = random.Random(5)
        A = small_complex(ZZ, rng, "a", degrees=(0, 1))
        nu = random_multimap(A.module, A.module, -1, (1, 2), rng, density=0.9)
        alpha = identity_tower(A.module).scale(3)
        out = star(nu, alpha, 2)
        # nu^l(3 a_1, ..., 3 a_l) = 3^l nu^l
        assert out == nu.component(1).scale(3).add(nu.component(2), 9).truncate(2, 1)

    def test_not_degree_zero(self):
        rng = random.Random(5)
        A = small_complex(ZZ, rng, "a", degrees=(0, 1))
        with pytest.raises(GradingError):
            star(suspended_differential(A), identity_tower(A.module, degree=1), 2)


class TestHomotopyStar:
    def test_zero_homotopy(self):
        rng = random.Random(3)
        A = small_complex(ZZ, rng, "a", degrees=(0, 1))
        nu = random_multimap(A.module, A.module, -1, (1, 2), rng)
        ident = identity_tower(A.module)
        r = MultiMap(A.module, A.module, 1, {}, (1, 2))
        assert homotopy_star(nu, r, ident, ident, 2).is_zero()

    def test_tensor_degree_one(self):
        rng = random.Random(8)
        A = small_complex(ZZ, rng, "a", degrees=(0, 1, 2))
        nu = random_multimap(A.module, A.module, -1, (1, 2), rng, density=0.9)
        r = random_multimap(A.module, A.module, 1, (1, 1), rng, density=0.9)
        ident = identity_tower(A.module)
        out = homotopy_star(nu, r, ident, ident, 1)
        expect = {k: nu.component(1)(v) for k, v in r.comps.items()}
        assert {k: v for k, v in out.comps.items()} == {k: v for k, v in expect.items() if v}


class TestModuleStar:
    def setup_method(self):
        _, self.M = e3_problem()
        self.end = self.M.end
        self.A = self.M.algebra.module

    @pytest.mark.parametrize("degree", [0, 1])
    def test_identity_signs(self, degree):
        # By hand on M = Z m: (a * [id])^n[x] carries (-1)^{|id| |x|} from the
        # tensor and (-1)^{|a[x]|} from desuspending, so the total is (-1)^{|a|};
        # ([id] * a) only picks up (-1)^{|[id]|} = -1 from desuspending.
        rng = random.Random(degree)
        A = ChainComplex(GradedModule(ZZ, [("u", -1), ("v", -1), ("w", 0)], name="A"), {})
        M = ChainComplex(GradedModule(ZZ, [("m", 0)], name="M"), {})
        end = end_algebra(M)
        a = random_multimap(A.module, end.module, degree, (1, 2), rng, density=1.0)
        assert a.comps
        ident = MultiMap(A.module, end.module, 1, {(): end.identity}, (0, 0))
        right = module_star(a, ident, 2)
        left = module_star(ident, a, 2)
        assert right == (a if degree % 2 == 0 else -a).with_range(1, 2)
        assert left == (-a).with_range(1, 2)

    def test_zero_tower(self):
        H = self.end.module
        zero = MultiMap(self.A, H, 0, {}, (0, 1))
        assert module_star(self.M.p, zero, 2).is_zero()

    def test_not_composable(self):
        other = end_algebra(two_term())
        b = MultiMap(self.A, other.module, 0, {}, (0, 0))
        with pytest.raises(GradingError):
            module_star(self.M.p, b, 1)


class TestUnits:
    def setup_method(self):
        self.C, self.unit = unital_complex(ZZ, random.Random(3))
        self.A = self.C.module

    def test_trivial_structure_values(self):
        su = mu_su(self.unit)
        u = self.unit.index
        assert su.comps[(u, u)] == {u: 1}
        for a in self.unit.bar:
            sign = -1 if self.A.degrees[a] % 2 else 1
            assert su.comps[(a, u)] == {a: sign}
            assert su.comps[(u, a)] == {a: 1}
        assert all(self.unit.touches(k) for k in su.comps)

    def test_trivial_objects_are_strictly_unital(self):
        assert is_strictly_unital(mu_su(self.unit), self.unit, "structure")
        assert is_strictly_unital(g_su(self.unit, self.unit), self.unit, "morphism", target_unit=self.unit)

    def test_bar_supported_homotopy(self):
        r = random_multimap(self.A, self.A, 1, (1, 2), random.Random(1), allowed=self.unit.bar)
        assert is_strictly_unital(r, self.unit, "homotopy")

    def test_decomposition(self):
        rng = random.Random(9)
        mu = random_multimap(self.A, self.A, -1, (1, 3), rng, allowed=self.unit.bar)
        nu = mu + mu_su(self.unit).with_range(1, 3)
        bar, su = split_decompose(nu, self.unit)
        assert bar + su == nu
        assert not any(self.unit.touches(k) for k in bar.comps)
        # uniqueness: decomposing the recombination returns the same pieces
        bar2, su2 = split_decompose(bar + su, self.unit)
        assert bar2 == bar and su2 == su

    def test_trivial_decomposes_to_zero(self):
        bar, su = split_decompose(mu_su(self.unit).with_range(1, 2), self.unit)
        assert bar.is_zero()

    def test_non_unital_rejected(self):
        u, a = self.unit.index, self.unit.bar[0]
        bad = MultiMap(self.A, self.A, -1, {(u, a): {a: 1}}, (1, 2))
        with pytest.raises(UnitError, match=f"1\\|{self.A.labels[a]}"):
            split_decompose(bad + mu_su(self.unit).with_range(1, 2), self.unit)

    def test_unit_must_sit_in_degree_zero(self):
        M = GradedModule(ZZ, [("e", 1)])
        with pytest.raises(UnitError):
            UnitData(M, 0)


class TestCheckers:
    def test_associative_algebra(self):
        B = e2_problem()
        assert check_an_algebra(B.nu, 3)

    def test_perturbed_structure_located(self):
        # 1 * x = x + 1 breaks associativity: (1 1) x = x + 1 but 1 (1 x) = x + 2
        B = e2_problem()
        M = B.module
        one, x = M.index["1"], M.index["x"]
        bump = MultiMap(M, M, -1, {(one, x): {one: 1}}, (1, 2))
        v = check_an_algebra(B.nu + bump, 3)
        assert not v and "tensor degree 3" in v.witness and "[1|1|x]" in v.witness

    def test_identity_morphism(self):
        B = e2_problem()
        assert check_an_morphism(identity_tower(B.module), B.nu, B.nu, 4)

    def test_scaled_identity_is_not_a_morphism(self):
        B = e2_problem()
        v = check_an_morphism(identity_tower(B.module).scale(3), B.nu, B.nu, 2)
        assert not v

    def test_zero_homotopy_between_equal(self):
        B = e2_problem()
        ident = identity_tower(B.module)
        r = MultiMap(B.module, B.module, 1, {}, (1, 3))
        assert check_an_homotopy(r, ident, ident, B.nu, B.nu, 3)

    def test_complex_as_module(self):
        alg, M = e3_problem()
        p = MultiMap(alg.module, M.end.module, 0, {(): M.end.delta}, (0, 0))
        assert check_module_structure(p, M.end, alg.nu, 3)

    def test_module_action_and_perturbation(self):
        alg, M = e3_problem()
        assert M.verify(3)
        # over E2, x acting as 1 on Z/2 fails x (x m) = (x x) m = 2 m = 0
        B = e2_problem()
        Mz2 = M.complex
        good = AnModuleStructure.from_action(B, Mz2, {("1", "m"): {"m": 1}})
        bad = AnModuleStructure.from_action(B, Mz2, {("1", "m"): {"m": 1}, ("x", "m"): {"m": 1}})
        assert good.verify(3)
        v = bad.verify(3)
        assert not v and "x|x" in v.witness

    def test_degree_forced_on_construction(self):
        A = two_term().module
        with pytest.raises(GradingError):
            MultiMap(A, A, -1, {(0,): {0: 1}}, (1, 1))

    def test_from_products_sign(self):
        M = GradedModule(ZZ, [("1", 0), ("y", 1)])
        C = ChainComplex(M, {})
        S = AnStructure.from_products(C, {("y", "1"): {"y": 1}}, unit="1")
        assert S.nu.comps[(1, 0)] == {1: -1}
