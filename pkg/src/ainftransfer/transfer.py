"""Transfer of strictly unital structures onto free resolutions, with lifts and homotopies.

Every driver follows the same inductive step: lift the target data through
post-composition with ``q`` (or ``q_*``), subtract the obstruction, and fix
the difference by a boundary solve inside the kernel. Results are re-verified
from scratch before they are returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import obstruction as ob
from .graded import ChainComplex, ChainMap, WindowError
from .hhc import (
    MultiMap,
    Verdict,
    check_an_algebra,
    check_an_homotopy,
    check_an_morphism,
    check_module_homotopy,
    check_module_morphism,
    check_module_structure,
    clip,
    end_algebra,
    hhc_differential,
    hom_nu1,
    hom_of,
    is_strictly_unital,
    module_star,
    module_unit,
    mu_su,
    postcompose,
    sdeg_tuple,
    star,
    strict_map,
    suspended_differential,
)
from .resolution import (
    LiftContext,
    LiftError,
    Resolution,
    build_lift_context,
    is_semiprojective_witness,
    kernel_boundary_solve,
    kernel_homology_vanishes,
    lift_preimage,
)
from .structures import AnModuleStructure, AnStructure

__all__ = [
    "HypothesisError",
    "TransferCertificate",
    "HomotopyFailure",
    "transfer_algebra",
    "lift_morphism",
    "build_homotopy",
    "h0_vanishing_check",
    "compose_morphisms",
    "identity_morphism",
    "restrict_module",
    "transfer_module",
    "lift_module_morphism",
    "build_module_homotopy",
    "compose_module_morphisms",
    "identity_module_morphism",
    "strict_module_morphism",
    "joint_bound",
    "post_hom_map",
    "pre_hom_map",
]


class HypothesisError(ValueError):
    """A transfer precondition could not be verified; ``witness`` says why."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class TransferCertificate:
    level: int
    window: tuple
    mode: str
    seed: int | None
    identities: dict = field(default_factory=dict)
    hypotheses: dict = field(default_factory=dict)
    kernel_degrees: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v is True for v in self.identities.values())

    def record(self, name: str, verdict) -> None:
        self.identities[name] = True if verdict else (getattr(verdict, "witness", None) or False)

    def to_dict(self) -> dict:
        lo, hi = self.window
        return {
            "level": self.level,
            "window": [lo, "inf" if hi == float("inf") else hi],
            "mode": self.mode,
            "seed": self.seed,
            "identities": dict(sorted(self.identities.items())),
            "hypotheses": dict(sorted(self.hypotheses.items())),
            "kernel_degrees": [list(x) for x in self.kernel_degrees],
            "steps": [list(x) for x in self.steps],
        }


@dataclass
class HomotopyFailure:
    """A homotopy solve that had no solution, with the degree and the obstruction that failed to bound."""

    tensor_degree: int
    witness: str

    def __bool__(self):
        return False


def _rng(seed):
    return random.Random(seed) if seed is not None else None


def _checked(ctx: LiftContext, l: int, degree: int, cert: TransferCertificate | None, verify: bool):
    """Acyclicity of the kernel in the degree the boundary solve lands in."""
    if not verify:
        return
    v = kernel_homology_vanishes(ctx, l, degree)
    if cert is not None:
        cert.kernel_degrees.append((l, degree))
    if not v:
        raise HypothesisError(f"kernel complex not acyclic in tensor degree {l}, degree {degree}", v.witness)


def _step(ctx, target: MultiMap, obs_value: MultiMap, l: int, degree: int, cert, verify) -> MultiMap:
    """The component ``y`` with ``Q o y = target`` and ``d(y) = obs`` in tensor degree ``l``."""
    y = lift_preimage(ctx, target.with_range(l, l))
    c = hhc_differential(y, ctx.nu_S, ctx.nu_T).truncate(l, l).filter(lambda k: all(g in ctx.allowed for g in k))
    c = c.with_range(l, l) - obs_value.with_range(l, l)
    c.degree = degree - 1
    _checked(ctx, l, degree - 1, cert, verify and not c.is_zero())
    x = kernel_boundary_solve(ctx, c, l)
    out = (y - x.with_range(l, l)) if x.comps else y
    if cert is not None:
        cert.steps.append((l, len(y.comps), len(x.comps)))
    return out


def _window_guard(res: Resolution | None, window):
    if res is None or window is None:
        return
    lo, hi = window
    if hi > res.valid_through - 1:
        raise WindowError(
            f"the resolution is exact only through degree {res.valid_through}; "
            f"inputs up to degree {hi} need depth >= {hi + 2}"
        )


def _certified_window(res: Resolution, window):
    """The range of suspended input degrees the transferred tower is valid on."""
    if res.complete:
        return (0, float("inf")) if window is None else tuple(window)
    hi = res.valid_through - 1 if window is None else window[1]
    return (0 if window is None else window[0], hi)


def _bar_keys(module, allowed, l):
    import itertools

    return itertools.product(allowed, repeat=l)


def _pull_back(nuB: MultiMap, qmap: MultiMap, l: int, allowed) -> MultiMap:
    """``nu_B^l o q^{(x) l}`` on tensors of allowed generators."""
    pulled = star(nuB.component(l).with_range(1, l), qmap, l).truncate(l, l)
    allowed = set(allowed)
    return pulled.filter(lambda k: all(g in allowed for g in k)).with_range(l, l)


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------


def _algebra_hypotheses(B: AnStructure, res: Resolution, N: int, cert: TransferCertificate):
    A = res.A
    sp = is_semiprojective_witness(A)
    cert.hypotheses["semiprojective"] = sp.witness if sp else False
    if not sp:
        raise HypothesisError("the resolution is not semiprojective", sp.witness)
    cert.hypotheses["surjective_quasi_iso"] = True
    if B.unit is None or res.unit is None:
        raise HypothesisError("strictly unital transfer needs units on both sides")
    u = res.unit.index
    if A.differential.get(u):
        raise HypothesisError("the unit of A is not a cycle")
    if res.q({u: 1}) != B.module.reduce({B.unit.index: 1}):
        raise HypothesisError("q does not send 1 to 1")
    if not res.unit.is_split:
        raise HypothesisError("the unit of A is not split")
    v = B.verify(max(N, 2))
    if not v:
        raise HypothesisError("the input structure is not a strictly unital A_N-algebra", v.witness)
    cert.hypotheses["unit"] = True


def transfer_algebra(
    B: AnStructure,
    res: Resolution,
    N: int,
    *,
    mode: str = "plain",
    seed: int | None = None,
    window=None,
    verify_kernel: bool = True,
) -> tuple[AnStructure, TransferCertificate]:
    """A strictly unital A_N-structure on the resolution for which ``q`` is strict."""
    if N < 1:
        raise ValueError("level must be at least 1")
    if mode not in ("plain", "augmented"):
        raise ValueError(f"unknown mode {mode!r}")
    _window_guard(res, window)
    win = _certified_window(res, window)
    cert = TransferCertificate(N, win, mode, seed)
    _algebra_hypotheses(B, res, N, cert)
    bound = None if win[1] == float("inf") else win[1]
    A = res.A.module
    unit = res.unit
    bar = unit.bar
    target_allowed = None
    if mode == "augmented":
        target_allowed = _augmented_targets(B, res)
    qmap = strict_map(res.q, A, B.module)
    nu1 = suspended_differential(res.A)
    ctx = build_lift_context(
        A, bar, qmap, nu1, nu1, B.nu.component(1), rng=_rng(seed), target_allowed=target_allowed, max_sdeg=bound,
        surject_onto=set(B.augmentation) if mode == "augmented" else None,
    )
    nu = nu1.with_range(1, 1)
    su = mu_su(unit)
    try:
        for n in range(1, N):
            l = n + 1
            target = clip(_pull_back(B.nu, qmap, l, bar), bound)
            o0 = ob.obs_algebra(nu, n, max_sdeg=bound)
            o = ob.strictly_unital_obstruction(o0, unit, trivial=su if l == 2 else None)
            part = _step(ctx, target, o.value, l, -1, cert, verify_kernel)
            full = part + su if l == 2 else part
            if not o0.extends(full.with_range(l, l)):
                raise LiftError(f"tensor degree {l} component does not satisfy d(x) = obs")
            nu = nu.with_range(1, l) + full.with_range(1, l)
    except LiftError as exc:
        if not res.complete:
            raise WindowError(f"{exc}; enlarge the resolution depth") from exc
        raise
    out = AnStructure(res.A, nu, N, unit, tuple(bar) if mode == "augmented" else None, {"mode": mode}, win[1])
    _certify_algebra(out, B, qmap, N, cert)
    return out, cert


def _augmented_targets(B: AnStructure, res: Resolution):
    if B.augmentation is None:
        raise HypothesisError("augmented mode needs an augmentation ideal for B")
    if not B.unit.is_split:
        raise HypothesisError("augmented mode needs a split unit in B")
    ideal = set(B.augmentation)
    for g in res.unit.bar:
        img = res.q({g: 1})
        if any(i not in ideal for i in img):
            raise HypothesisError(
                f"q maps {res.A.module.labels[g]} outside the augmentation ideal; resolve the ideal separately"
            )
    return frozenset(res.unit.bar)


def _certify_algebra(out: AnStructure, B: AnStructure, qmap: MultiMap, N: int, cert: TransferCertificate):
    nu = out.nu
    bound = out.max_sdeg
    cert.record("stasheff", check_an_algebra(nu, N, bound))
    cert.record("strict_unit", is_strictly_unital(nu, out.unit, "structure"))
    cert.record("d_of_unit", Verdict(not out.complex.differential.get(out.unit.index)))
    for i in range(1, N + 1):
        lhs = postcompose(qmap, nu.component(i).with_range(i, i))
        rhs = star(B.nu.component(i).with_range(1, i), qmap, i).truncate(i, i).with_range(i, i)
        cert.record(f"square_{i}", Verdict(clip(lhs - rhs, bound).is_zero(), f"q o nu^{i} != nu_B^{i} o q"))
    if out.augmentation is not None:
        bar = set(out.augmentation)
        ok = all(set(v) <= bar for k, v in nu.comps.items() if all(g in bar for g in k))
        cert.record("augmented", Verdict(ok, "a bar product leaves the complement"))
    if not cert.ok:
        bad = {k: v for k, v in cert.identities.items() if v is not True}
        raise ArithmeticError(f"transferred structure failed re-verification: {bad}")


def joint_bound(*structures: AnStructure):
    """The smallest window among the structures, ``None`` when all are unbounded."""
    w = min(S.window for S in structures)
    return None if w == float("inf") else w


def identity_morphism(A) -> MultiMap:
    return MultiMap(A, A, 0, {(g,): {g: 1} for g in range(len(A))}, (1, 1))


def compose_morphisms(outer: MultiMap, inner: MultiMap, n: int) -> MultiMap:
    """``outer o inner`` as A_n-morphisms."""
    return star(outer.truncate(n, 1), inner.truncate(n, 1), n).truncate(n, 1)


def lift_morphism(
    alpha: MultiMap,
    C: AnStructure,
    A: AnStructure,
    B: AnStructure,
    q: ChainMap,
    N: int,
    delta1: MultiMap | None = None,
    *,
    seed: int | None = None,
    verify_kernel: bool = True,
) -> tuple[MultiMap, TransferCertificate]:
    """A strictly unital A_N-morphism ``delta: C -> A`` with ``q o delta = alpha``."""
    bound = joint_bound(C, A)
    cert = TransferCertificate(N, (0, float("inf") if bound is None else bound), "lift", seed)
    CM, AM = C.module, A.module
    sp = is_semiprojective_witness(C.complex)
    if not sp:
        raise HypothesisError("the source is not semiprojective", sp.witness)
    cert.hypotheses["semiprojective"] = sp.witness
    qmap = strict_map(q, AM, B.module)
    if delta1 is None:
        if CM is not AM or not (alpha.component(1) - qmap).is_zero():
            raise HypothesisError("delta^1 must be supplied unless C = A and alpha^1 = q")
        delta1 = identity_morphism(AM)
    delta1 = delta1.component(1)
    if not (postcompose(qmap, delta1) - alpha.component(1)).is_zero():
        raise HypothesisError("q o delta^1 != alpha^1")
    if not hhc_differential(delta1, C.nu.component(1), A.nu.component(1)).is_zero():
        raise HypothesisError("delta^1 is not a chain map")
    if C.unit is None or A.unit is None:
        raise HypothesisError("strictly unital lifting needs units")
    C.unit.require_split()
    v = is_strictly_unital(delta1, C.unit, "morphism", target_unit=A.unit)
    if not v:
        raise HypothesisError("delta^1 does not send 1 to 1", v.witness)
    bar = C.unit.bar
    ctx = build_lift_context(
        CM, bar, qmap, C.nu.component(1), A.nu.component(1), B.nu.component(1), rng=_rng(seed), max_sdeg=bound
    )
    delta = delta1.with_range(1, 1)
    for n in range(1, N):
        l = n + 1
        target = clip(alpha.component(l).filter(lambda k: all(g in bar for g in k)).with_range(l, l), bound)
        o = ob.obs_morphism(delta, C.nu, A.nu, n, max_sdeg=bound)
        o = ob.strictly_unital_obstruction(o, C.unit)
        part = _step(ctx, target, o.value, l, 0, cert, verify_kernel)
        if not o.extends(part):
            raise LiftError(f"morphism component {l} does not bound its obstruction")
        delta = delta.with_range(1, l) + part.with_range(1, l)
    cert.record("morphism", check_an_morphism(delta, C.nu, A.nu, N, bound))
    cert.record("strict_unit", is_strictly_unital(delta, C.unit, "morphism", target_unit=A.unit))
    lifted = (postcompose(qmap, delta) - alpha.truncate(N, 1).with_range(1, N)).truncate(N, 1)
    cert.record("lifts_alpha", Verdict(clip(lifted, bound).is_zero()))
    if not cert.ok:
        raise ArithmeticError(f"lifted morphism failed re-verification: {cert.identities}")
    return delta, cert


def h0_vanishing_check(
    C: AnStructure, A: AnStructure, n_range, comparison=None, *, direct: bool = False
) -> dict:
    """Per ``n``, whether ``H_0(hhc^{n+1}(Cbar, A), d) = 0``, and how it was certified.

    ``comparison`` is the complex ``B`` of a surjective quasi-isomorphism
    ``A -> B``; when every component of ``hhc^{n+1}(Cbar, B)_0`` vanishes for
    degree reasons that certifies the claim. Otherwise homology is computed.
    """
    out = {}
    bar = C.unit.bar if C.unit is not None else list(range(len(C.module)))
    Cm = C.module
    degree_ok = comparison is not None and all(d >= 0 for d in Cm.degrees) and not direct
    ctx = None
    for n in n_range:
        l = n + 1
        if degree_ok:
            Bm = comparison.module
            low = min(sdeg_tuple(Cm, k) for k in _bar_keys(Cm, bar, l)) if bar else None
            if low is None or all(not Bm.gens_in_degree(t) for t in range(low - 1, max(Bm.degrees, default=0) + 1)):
                out[n] = Verdict(True, "degree argument: Cbar^{(x) n+1} sits in degrees where Hom into B vanishes")
                continue
        if ctx is None:
            ctx = build_lift_context(Cm, bar, None, C.nu.component(1), A.nu.component(1), max_sdeg=joint_bound(C, A))
        v = kernel_homology_vanishes(ctx, l, 0)
        out[n] = Verdict(v.ok, f"direct computation: {v.witness}")
    return out


def build_homotopy(
    delta: MultiMap,
    delta_prime: MultiMap,
    C: AnStructure,
    A: AnStructure,
    N: int,
    *,
    seed: int | None = None,
) -> MultiMap | HomotopyFailure:
    """A strictly unital homotopy ``r`` from ``delta`` to ``delta_prime`` up to level ``N``."""
    CM, AM = C.module, A.module
    bar = C.unit.bar
    bound = joint_bound(C, A)
    ctx = build_lift_context(CM, bar, None, C.nu.component(1), A.nu.component(1), rng=_rng(seed), max_sdeg=bound)
    r = MultiMap(CM, AM, 1, {}, (1, 1))
    for n in range(0, N):
        l = n + 1
        o = ob.obs_homotopy(r, delta, delta_prime, C.nu, A.nu, n, max_sdeg=bound)
        o = ob.strictly_unital_obstruction(o, C.unit)
        try:
            x = kernel_boundary_solve(ctx, o.value.with_range(l, l), l)
        except LiftError:
            v = kernel_homology_vanishes(ctx, l, 0)
            return HomotopyFailure(l, v.witness or "no solution")
        if not o.extends(x):
            raise LiftError("homotopy component does not bound its obstruction")
        r = r.with_range(1, l) + x.with_range(1, l)
    v = check_an_homotopy(r, delta, delta_prime, C.nu, A.nu, N, bound)
    if not v:
        raise ArithmeticError(f"homotopy failed re-verification: {v.witness}")
    u = is_strictly_unital(r, C.unit, "homotopy")
    if not u:
        raise ArithmeticError(f"homotopy is not strictly unital: {u.witness}")
    return r


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------


def restrict_module(M: AnModuleStructure, A: AnStructure, q: ChainMap) -> AnModuleStructure:
    """The module over ``A`` obtained through the strict morphism ``q: A -> B``."""
    qmap = strict_map(q, A.module, M.algebra.module)
    pos = M.p.positive_part()
    comps = {(): M.end.delta}
    if pos.comps:
        pulled = star(pos, qmap, pos.lrange[1])
        comps.update(pulled.comps)
    p = MultiMap(A.module, M.end.module, 0, comps, (0, max(1, pos.lrange[1])))
    return AnModuleStructure(A, M.complex, p, M.level, M.end)


def post_hom_map(q: ChainMap, source_mod, mid: ChainComplex, target: ChainComplex) -> MultiMap:
    """``q_*: Hom(S, G) -> Hom(S, M)`` as a linear tower."""
    H1 = hom_of(source_mod, mid.module)
    H2 = hom_of(source_mod, target.module)
    comps = {}
    for e, (i, j) in enumerate(H1.labels):
        img = {}
        for k, c in q.images.get(j, {}).items():
            img[H2.index[i, k]] = c
        if img:
            comps[(e,)] = img
    return MultiMap(H1, H2, 0, comps, (1, 1))


def pre_hom_map(q: ChainMap, M: ChainComplex) -> MultiMap:
    """``q^*: End M -> Hom(G, M)`` as a linear tower."""
    G = q.source.module
    H1 = hom_of(M.module, M.module)
    H2 = hom_of(G, M.module)
    comps = {}
    for e, (i, j) in enumerate(H1.labels):
        img = {}
        for g, c in q.images.items():
            # g maps to sum c_k m_k; the generator (i -> j) reads the m_i coefficient
            a = c.get(i, 0)
            if a:
                img[H2.index[g, j]] = a
        if img:
            comps[(e,)] = img
    return MultiMap(H1, H2, 0, comps, (1, 1))


def _module_hypotheses(M: AnModuleStructure, res: Resolution, N: int, cert: TransferCertificate):
    sp = is_semiprojective_witness(res.A)
    if not sp:
        raise HypothesisError("the module resolution is not semiprojective", sp.witness)
    cert.hypotheses["semiprojective"] = sp.witness
    spa = is_semiprojective_witness(M.algebra.complex)
    if not spa:
        raise HypothesisError("the algebra complex is not semiprojective", spa.witness)
    cert.hypotheses["algebra_semiprojective"] = spa.witness
    cert.hypotheses["surjective_quasi_iso"] = True
    if M.algebra.unit is None:
        raise HypothesisError("strictly unital module transfer needs a unit")
    M.algebra.unit.require_split()
    v = M.verify(N)
    if not v:
        raise HypothesisError("the input is not a strictly unital A_N-module", v.witness)


def transfer_module(
    M: AnModuleStructure,
    res: Resolution,
    N: int,
    *,
    seed: int | None = None,
    window=None,
    verify_kernel: bool = True,
) -> tuple[AnModuleStructure, TransferCertificate]:
    """A strictly unital A_N-module on the resolution ``G -> M`` for which ``q_G`` is strict."""
    if N < 1:
        raise ValueError("level must be at least 1")
    if not res.complete or M.algebra.window != float("inf"):
        raise WindowError(
            "module transfer needs a complete resolution of the module over a complete algebra; "
            f"this one is exact only through degree {res.valid_through}"
        )
    _window_guard(res, window)
    cert = TransferCertificate(N, (0, float("inf")), "module", seed)
    _module_hypotheses(M, res, N, cert)
    alg = M.algebra
    A = alg.module
    unit = alg.unit
    bar = unit.bar
    G = res.A
    endG = end_algebra(G)
    qs = post_hom_map(res.q, G.module, G, M.complex)
    qu = pre_hom_map(res.q, M.complex)
    nuA1 = alg.nu.component(1)
    ctx = build_lift_context(A, bar, qs, nuA1, endG.nu.component(1), hom_nu1(G, M.complex), rng=_rng(seed))
    p = MultiMap(A, endG.module, 0, {(): endG.delta}, (0, 0))
    trivial = module_unit(unit, endG)
    try:
        for n in range(1, N):
            target = postcompose(qu, M.p.component(n).with_range(n, n))
            target = target.filter(lambda k: all(g in bar for g in k)).with_range(n, n)
            o = ob.obs_module(p, endG, alg.nu, n)
            oM = ob.obs_module(M.p, M.end, alg.nu, n)
            # the two obstructions agree after pushing to Hom(G, M)
            lhs = postcompose(qs, o.value)
            rhs = postcompose(qu, oM.value)
            if not (lhs - rhs).is_zero():
                raise ArithmeticError(f"pushed-forward obstructions disagree in tensor degree {n}")
            o0 = o
            o = ob.strictly_unital_obstruction(o0, unit, trivial=trivial if n == 1 else None)
            part = _step(ctx, target, o.value, n, 0, cert, verify_kernel)
            full = part + trivial if n == 1 else part
            if not o0.extends(full.with_range(n, n)):
                raise LiftError(f"module component {n} does not bound its obstruction")
            p = p.with_range(0, n) + full.with_range(0, n)
    except LiftError as exc:
        if not res.complete:
            raise WindowError(f"{exc}; enlarge the resolution depth") from exc
        raise
    out = AnModuleStructure(alg, G, p, N, endG)
    cert.record("module", check_module_structure(p, endG, alg.nu, N))
    cert.record("strict_unit", out.verify(N))
    for i in range(1, N):
        lhs = postcompose(qs, p.component(i).with_range(i, i))
        rhs = postcompose(qu, M.p.component(i).with_range(i, i))
        cert.record(f"square_{i}", Verdict((lhs - rhs).is_zero(), f"q_* p_G^{i} != q^* p_M^{i}"))
    if not cert.ok:
        raise ArithmeticError(f"transferred module failed re-verification: {cert.identities}")
    return out, cert


def identity_module_morphism(M: AnModuleStructure) -> MultiMap:
    H = hom_of(M.module, M.module)
    return MultiMap(M.algebra.module, H, 1, {(): H.identity()}, (0, 0))


def strict_module_morphism(q: ChainMap, source: AnModuleStructure, target: AnModuleStructure) -> MultiMap:
    """A chain map as a module morphism concentrated in tensor degree zero."""
    H = hom_of(source.module, target.module)
    return MultiMap(source.algebra.module, H, 1, {(): H.from_images(q.images)}, (0, 0))


def compose_module_morphisms(g: MultiMap, f: MultiMap, n: int) -> MultiMap:
    """``g o f`` for module morphisms ``f: M -> N``, ``g: N -> P``."""
    return -module_star(g.truncate(n - 1, 0), f.truncate(n - 1, 0), n - 1).truncate(n - 1, 0)


def lift_module_morphism(
    alpha: MultiMap,
    source: AnModuleStructure,
    G: AnModuleStructure,
    q: ChainMap,
    M: AnModuleStructure,
    N: int,
    delta0: MultiMap | None = None,
    *,
    seed: int | None = None,
    verify_kernel: bool = True,
) -> tuple[MultiMap, TransferCertificate]:
    """A strictly unital morphism ``delta: source -> G`` with ``q_* delta = alpha``."""
    cert = TransferCertificate(N, (0, float("inf")), "module-lift", seed)
    sp = is_semiprojective_witness(source.complex)
    if not sp:
        raise HypothesisError("the source module complex is not semiprojective", sp.witness)
    cert.hypotheses["semiprojective"] = sp.witness
    alg = source.algebra
    A, unit = alg.module, alg.unit
    bar = unit.bar
    qs = post_hom_map(q, source.module, G.complex, M.complex)
    nuH = hom_nu1(source.complex, G.complex)
    ctx = build_lift_context(A, bar, qs, alg.nu.component(1), nuH, hom_nu1(source.complex, M.complex), rng=_rng(seed))
    if not check_module_morphism(alpha, source.p, M.p, alg.nu, N):
        raise HypothesisError("alpha is not a module morphism at the requested level")
    H = nuH.source
    if delta0 is not None:
        d0 = delta0.truncate(0, 0)
        if not (postcompose(qs, d0) - alpha.truncate(0, 0)).is_zero():
            raise HypothesisError("q_* delta^0 != alpha^0")
    else:
        zero = MultiMap(A, H, 0, {}, (0, 0))
        d0 = _step(ctx, alpha.truncate(0, 0).with_range(0, 0), zero, 0, 1, cert, verify_kernel)
        d0.degree = 1
    if not hhc_differential(d0, alg.nu.component(1), nuH).is_zero():
        raise HypothesisError("delta^0 is not a chain map")
    delta = d0.with_range(0, 0)
    for n in range(1, N):
        target = alpha.component(n).filter(lambda k: all(g in bar for g in k)).with_range(n, n)
        o = ob.obs_module_morphism(delta, source, G, alg.nu, n)
        o = ob.strictly_unital_obstruction(o, unit)
        part = _step(ctx, target, o.value, n, 1, cert, verify_kernel)
        if not o.extends(part):
            raise LiftError(f"module morphism component {n} does not bound its obstruction")
        delta = delta.with_range(0, n) + part.with_range(0, n)
    cert.record("module_morphism", check_module_morphism(delta, source.p, G.p, alg.nu, N))
    cert.record("strict_unit", is_strictly_unital(delta.positive_part(), unit, "homotopy") if delta.positive_part().comps else Verdict(True))
    lifted = postcompose(qs, delta) - alpha.truncate(N - 1, 0).with_range(0, max(N - 1, 0))
    cert.record("lifts_alpha", Verdict(lifted.truncate(N - 1, 0).is_zero()))
    if not cert.ok:
        raise ArithmeticError(f"lifted module morphism failed re-verification: {cert.identities}")
    return delta, cert


def build_module_homotopy(
    f: MultiMap,
    g: MultiMap,
    source: AnModuleStructure,
    target: AnModuleStructure,
    N: int,
    *,
    seed: int | None = None,
) -> MultiMap | HomotopyFailure:
    """A strictly unital module homotopy between ``f`` and ``g`` up to level ``N``."""
    alg = source.algebra
    A, unit = alg.module, alg.unit
    nuH = hom_nu1(source.complex, target.complex)
    ctx = build_lift_context(A, unit.bar, None, alg.nu.component(1), nuH, rng=_rng(seed))
    H = nuH.source
    r = MultiMap(A, H, 2, {}, (0, 0))
    for n in range(0, N):
        o = ob.obs_module_homotopy(r, f, g, source, target, alg.nu, n)
        o = ob.strictly_unital_obstruction(o, unit)
        try:
            x = kernel_boundary_solve(ctx, o.value.with_range(n, n), n)
        except LiftError:
            v = kernel_homology_vanishes(ctx, n, 1)
            return HomotopyFailure(n, v.witness or "no solution")
        if not o.extends(x):
            raise LiftError("module homotopy component does not bound its obstruction")
        r = r.with_range(0, n) + x.with_range(0, n)
    v = check_module_homotopy(r, f, g, source.p, target.p, alg.nu, N)
    if not v:
        raise ArithmeticError(f"module homotopy failed re-verification: {v.witness}")
    return r
