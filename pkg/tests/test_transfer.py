"""Transfer of algebras, morphisms, homotopies and modules onto resolutions."""

import random

import pytest

from ainftransfer.coalgebra import apply_tower, coderivation_of
from ainftransfer.graded import WindowError
from ainftransfer.hhc import (
    check_an_algebra,
    check_an_homotopy,
    check_an_morphism,
    check_module_homotopy,
    check_module_morphism,
    is_strictly_unital,
    strict_map,
)
from ainftransfer.resolution import free_resolution
from ainftransfer.samples import e1_problem, e2_problem, e3_problem
from ainftransfer.structures import AnStructure
from ainftransfer.transfer import (
    HomotopyFailure,
    HypothesisError,
    build_homotopy,
    build_module_homotopy,
    compose_module_morphisms,
    compose_morphisms,
    h0_vanishing_check,
    identity_module_morphism,
    identity_morphism,
    lift_module_morphism,
    lift_morphism,
    restrict_module,
    strict_module_morphism,
    transfer_algebra,
    transfer_module,
)

from pipelines import cyclic_module, quadratic_algebra


@pytest.fixture(scope="module")
def e1():
    B = e1_problem()
    R = free_resolution(B.complex, 7, unit="1")
    A, cert = transfer_algebra(B, R, 6)
    return B, R, A, cert


@pytest.fixture(scope="module")
def e2_pair():
    B = e2_problem()
    R = free_resolution(B.complex, 6, unit="1")
    A1, _ = transfer_algebra(B, R, 5, seed=1)
    A2, _ = transfer_algebra(B, R, 5, seed=2)
    return B, R, A1, A2


class TestE1:
    def test_bar_products_vanish(self, e1):
        B, R, A, cert = e1
        Am = A.module
        e = Am.index["e"]
        assert not A.nu.comps.get((e, e))
        bar = set(A.unit.bar)
        assert not any(len(k) >= 3 and set(k) <= bar for k in A.nu.comps)

    def test_structure_identities(self, e1):
        B, R, A, cert = e1
        assert check_an_algebra(A.nu, 6)
        assert is_strictly_unital(A.nu, A.unit, "structure")
        q = strict_map(R.q, A.module, B.module)
        assert check_an_morphism(q, A.nu, B.nu, 6)
        assert cert.ok and {f"square_{i}" for i in range(1, 7)} <= set(cert.identities)

    def test_unit_products(self, e1):
        _, _, A, _ = e1
        one, e = A.module.index["1"], A.module.index["e"]
        # nu^2[1|e] = [e] and nu^2[e|1] = -[e]
        assert A.nu.comps[(one, e)] == {e: 1}
        assert A.nu.comps[(e, one)] == {e: -1}


class TestE2:
    def test_verifies(self, e2_pair):
        _, _, A1, A2 = e2_pair
        assert check_an_algebra(A1.nu, 5) and check_an_algebra(A2.nu, 5)

    def test_coalgebra_reading_squares_to_zero(self, e2_pair):
        _, _, A1, _ = e2_pair
        nu = A1.nu
        assert apply_tower(nu, coderivation_of(nu, 4), 4).is_zero()

    def test_seeds_reproducible(self, e2_pair):
        B, R, A1, _ = e2_pair
        again, _ = transfer_algebra(B, R, 5, seed=1)
        assert again.nu == A1.nu
        plain1, _ = transfer_algebra(B, R, 3)
        plain2, _ = transfer_algebra(B, R, 3)
        assert plain1.nu == plain2.nu

    def test_seeds_vary_the_choice(self):
        B = e2_problem()
        R = free_resolution(B.complex, 5, unit="1")
        outs = {transfer_algebra(B, R, 4, seed=s)[0].nu.format() for s in range(6)}
        assert len(outs) > 1


class TestUniqueness:
    def test_loop(self, e2_pair):
        B, R, A1, A2 = e2_pair
        N = 5
        q = strict_map(R.q, R.A.module, B.module)
        d, _ = lift_morphism(q, A1, A2, B, R.q, N, seed=3)
        e, _ = lift_morphism(q, A2, A1, B, R.q, N, seed=4)
        for f, (X, Y) in ((d, (A1, A2)), (e, (A2, A1))):
            assert check_an_morphism(f, X.nu, Y.nu, N)
            assert is_strictly_unital(f, X.unit, "morphism", target_unit=Y.unit)
            assert check_an_morphism(compose_morphisms(q, f, N).truncate(N, 1), X.nu, B.nu, N)
        I = identity_morphism(R.A.module)
        ed, de = compose_morphisms(e, d, N), compose_morphisms(d, e, N)
        r1 = build_homotopy(ed, I, A1, A1, N, seed=5)
        r2 = build_homotopy(de, I, A2, A2, N)
        assert not isinstance(r1, HomotopyFailure) and not isinstance(r2, HomotopyFailure)
        assert check_an_homotopy(r1, ed, I, A1.nu, A1.nu, N)
        assert check_an_homotopy(r2, de, I, A2.nu, A2.nu, N)

    def test_h0_by_degree(self, e2_pair):
        B, _, A1, _ = e2_pair
        h0 = h0_vanishing_check(A1, A1, range(1, 5), comparison=B.complex)
        assert all(v.ok and "degree argument" in v.witness for v in h0.values())

    def test_h0_direct_agrees(self, e2_pair):
        _, _, A1, _ = e2_pair
        h0 = h0_vanishing_check(A1, A1, range(1, 3), direct=True)
        assert all(v.ok and "direct" in v.witness for v in h0.values())

    def test_lift_of_q_is_unique_up_to_homotopy(self, e2_pair):
        B, R, A1, A2 = e2_pair
        q = strict_map(R.q, R.A.module, B.module)
        d1, _ = lift_morphism(q, A1, A2, B, R.q, 4, seed=11)
        d2, _ = lift_morphism(q, A1, A2, B, R.q, 4, seed=12)
        r = build_homotopy(d1, d2, A1, A2, 4)
        assert r and check_an_homotopy(r, d1, d2, A1.nu, A2.nu, 4)


class TestModules:
    @pytest.fixture(scope="class")
    @staticmethod
    def e3():
        alg, M = e3_problem()
        R = free_resolution(alg.complex, 6, unit="1")
        A, _ = transfer_algebra(alg, R, 6)
        MA = restrict_module(M, A, R.q)
        RG = free_resolution(M.complex, 6, labels=lambda n, k: f"g{n}" if k == 0 else f"g{n}_{k}")
        G1, cert = transfer_module(MA, RG, 5)
        G2, _ = transfer_module(MA, RG, 5, seed=7)
        return A, MA, RG, G1, G2, cert

    def test_module_identities(self, e3):
        A, MA, RG, G1, G2, cert = e3
        assert MA.verify(6)
        assert G1.verify(5) and G2.verify(5) and cert.ok

    def test_module_loop(self, e3):
        A, MA, RG, G1, G2, _ = e3
        qG = strict_module_morphism(RG.q, G1, MA)
        d, _ = lift_module_morphism(qG, G1, G2, RG.q, MA, 5, seed=1)
        e, _ = lift_module_morphism(strict_module_morphism(RG.q, G2, MA), G2, G1, RG.q, MA, 5, seed=2)
        assert check_module_morphism(d, G1.p, G2.p, A.nu, 5)
        ed = compose_module_morphisms(e, d, 5)
        assert check_module_morphism(ed, G1.p, G1.p, A.nu, 5)
        I = identity_module_morphism(G1)
        r = build_module_homotopy(ed, I, G1, G1, 5)
        assert not isinstance(r, HomotopyFailure)
        assert check_module_homotopy(r, ed, I, G1.p, G1.p, A.nu, 5)

    def test_random_cyclic_modules(self):
        for k, j in [(6, 2), (9, 3)]:
            B = quadratic_algebra(k, 0)
            R = free_resolution(B.complex, 5, unit="1")
            A, _ = transfer_algebra(B, R, 4)
            MA = restrict_module(cyclic_module(B, j), A, R.q)
            G, cert = transfer_module(MA, free_resolution(MA.complex, 5), 3)
            assert cert.ok and G.verify(3)


class TestHypotheses:
    def test_missing_unit(self):
        B = e1_problem()
        R = free_resolution(B.complex, 3)
        with pytest.raises(HypothesisError, match="units"):
            transfer_algebra(B, R, 3)

    def test_non_associative_input(self):
        from ainftransfer.graded import ChainComplex, GradedModule
        from ainftransfer.ring import ZZ

        # (x y) y = x but x (y y) = 0
        gens = [("1", 0), ("x", 0), ("y", 0)]
        M = GradedModule(ZZ, gens, [{g: 4} for g, _ in gens], name="B")
        products = {("1", g): {g: 1} for g, _ in gens} | {(g, "1"): {g: 1} for g, _ in gens}
        products[("x", "y")] = {"x": 1}
        bad = AnStructure.from_products(ChainComplex(M, {}), products, unit="1")
        R = free_resolution(bad.complex, 4, unit="1")
        with pytest.raises(HypothesisError, match="not a strictly unital"):
            transfer_algebra(bad, R, 3)

    def test_augmented_needs_an_ideal(self):
        B = e2_problem()
        with pytest.raises(HypothesisError, match="augmentation"):
            transfer_algebra(B, free_resolution(B.complex, 4, unit="1"), 3, mode="augmented")

    def test_augmented_mode(self):
        from ainftransfer.graded import ChainComplex, GradedModule
        from ainftransfer.ring import ZZ

        # Z 1 + (Z/4) x with x^2 = 0: the unit is split and q kills the new generator
        M = GradedModule(ZZ, [("1", 0), ("x", 0)], [{"x": 4}], name="B")
        products = {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}}
        B = AnStructure.from_products(ChainComplex(M, {}), products, unit="1", augmentation=["x"])
        A, cert = transfer_algebra(B, free_resolution(B.complex, 5, unit="1"), 4, mode="augmented")
        assert cert.identities["augmented"] is True
        bar = set(A.augmentation)
        assert all(set(v) <= bar for k, v in A.nu.comps.items() if set(k) <= bar)

    def test_bad_mode_and_level(self):
        B = e1_problem()
        R = free_resolution(B.complex, 3, unit="1")
        with pytest.raises(ValueError):
            transfer_algebra(B, R, 0)
        with pytest.raises(ValueError):
            transfer_algebra(B, R, 2, mode="other")


class TestTruncated:
    def setup_method(self):
        from ainftransfer.graded import ChainComplex, GradedModule
        from ainftransfer.ring import BaseRing

        Z8 = BaseRing.integers_mod(8)
        Bm = GradedModule(Z8, [("1", 0)], [{"1": 4}], name="B")
        self.B = AnStructure.from_products(ChainComplex(Bm, {}), {("1", "1"): {"1": 1}}, unit="1")

    @pytest.mark.parametrize("depth", [3, 5])
    def test_window_is_stamped(self, depth):
        R = free_resolution(self.B.complex, depth, unit="1")
        A, cert = transfer_algebra(self.B, R, 4)
        assert cert.window == (0, R.valid_through - 1)
        assert A.window == R.valid_through - 1
        assert A.verify(4) and check_an_algebra(A.nu, 4, A.max_sdeg)

    def test_window_beyond_exactness(self):
        R = free_resolution(self.B.complex, 3, unit="1")
        with pytest.raises(WindowError, match="depth >= 6"):
            transfer_algebra(self.B, R, 3, window=(0, 4))

    def test_lifts_and_homotopies_on_window(self):
        R = free_resolution(self.B.complex, 5, unit="1")
        A1, _ = transfer_algebra(self.B, R, 4, seed=1)
        A2, _ = transfer_algebra(self.B, R, 4, seed=2)
        q = strict_map(R.q, R.A.module, self.B.module)
        d, _ = lift_morphism(q, A1, A2, self.B, R.q, 4)
        e, _ = lift_morphism(q, A2, A1, self.B, R.q, 4)
        r = build_homotopy(compose_morphisms(e, d, 4), identity_morphism(R.A.module), A1, A1, 4)
        assert not isinstance(r, HomotopyFailure)

    def test_module_transfer_refuses_truncation(self):
        R = free_resolution(self.B.complex, 4, unit="1")
        A, _ = transfer_algebra(self.B, R, 3)
        from ainftransfer.structures import AnModuleStructure

        M = AnModuleStructure.from_action(A, A.complex, {("1", "1"): {"1": 1}})
        with pytest.raises(WindowError):
            transfer_module(M, R, 2)


def test_random_quadratic_algebras():
    rng = random.Random(0)
    for _ in range(4):
        k, c = rng.choice([4, 6, 8, 9]), rng.randrange(4)
        B = quadratic_algebra(k, c)
        A, cert = transfer_algebra(B, free_resolution(B.complex, 5, unit="1"), 4, seed=rng.randrange(100))
        assert cert.ok and check_an_algebra(A.nu, 4)
