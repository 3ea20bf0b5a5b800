"""Free resolutions and the two linear lifting steps used by the transfer algorithms.

A lifting context describes post-composition ``phi = Q o -`` from towers
``S -> T`` to towers ``S -> T'`` in one tensor degree, restricted to tensors
from an allowed subset of generators of ``S`` (the complement of the unit).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .graded import (
    ChainComplex,
    ChainMap,
    GradedModule,
    GradingError,
    is_surjective_quasi_iso,
)
from .hhc import MultiMap, UnitData, Verdict, clip, hhc_differential, sdeg_tuple
from .linalg import kernel_basis, solve_linear

__all__ = [
    "Resolution",
    "ResolutionError",
    "LiftError",
    "free_resolution",
    "is_semiprojective_witness",
    "LiftContext",
    "build_lift_context",
    "lift_preimage",
    "kernel_boundary_solve",
    "kernel_homology_vanishes",
]


class ResolutionError(ValueError):
    pass


class LiftError(ArithmeticError):
    pass


def _default_label(n: int, k: int) -> str:
    base = "efgh"[k] if k < 4 else f"e{k}"
    return base if n == 1 else f"{base}{n}"


@dataclass
class Resolution:
    """``q: A -> B`` with ``A`` degreewise free; exact on ``[0, valid_through]``."""

    A: ChainComplex
    q: ChainMap
    unit: UnitData | None
    valid_through: float
    complete: bool
    witness: dict = field(default_factory=dict)

    @property
    def B(self) -> ChainComplex:
        return self.q.target


def free_resolution(B: ChainComplex, depth: int, unit=None, labels=None, name: str = "A") -> Resolution:
    """Resolve ``B`` by killing the cycles of the mapping cone one degree at a time.

    In degree ``n`` the new generators correspond to generators of
    ``{(z, b) : dz = 0, q z = d b}`` with ``z`` in ``A_{n-1}`` and ``b`` in
    ``B_n``; the generator maps to ``z`` under ``d`` and to ``b`` under ``q``.
    ``labels(n, k)`` names the generators of degree ``n >= 1``.
    """
    if depth < 1:
        raise ResolutionError("depth must be at least 1")
    ring = B.ring
    MB = B.module
    if any(d < 0 for d in MB.degrees):
        raise ResolutionError("the target must be concentrated in nonnegative degrees")
    namer = labels or _default_label
    top_B = max(MB.degrees, default=0)
    gens: list[tuple[str, int]] = []
    diff: dict[str, dict] = {}
    qimg: dict[str, dict] = {}
    prev: list[str] = []  # labels in degree n - 1
    complete = False
    unit_label = None
    for n in range(0, depth + 2):
        bgens = MB.gens_in_degree(n)
        brels = MB.relation_vectors(n)
        bprev = MB.gens_in_degree(n - 1)
        bprev_rels = MB.relation_vectors(n - 1)
        a2 = [lab for lab, d in gens if d == n - 2]
        nz, nb = len(prev), len(bgens)
        nslack = len(bprev_rels)
        ncols = nz + nb + nslack
        rows = []
        # d z = 0 in A_{n-2}
        for t, lab2 in enumerate(a2):
            row = [0] * ncols
            for c, lab in enumerate(prev):
                row[c] = diff[lab].get(lab2, 0)
            rows.append(row)
        # q z - d_B b + rels * s = 0 in F(B_{n-1})
        for t, bi in enumerate(bprev):
            row = [0] * ncols
            for c, lab in enumerate(prev):
                row[c] = qimg[lab].get(bi, 0)
            for c, bj in enumerate(bgens):
                row[nz + c] = -B.differential.get(bj, {}).get(bi, 0)
            for c, r in enumerate(bprev_rels):
                row[nz + nb + c] = r[t]
            rows.append(row)
        if ncols == 0:
            K = []
        elif rows:
            Km = kernel_basis(ring, rows, shape=(len(rows), ncols))
            K = [Km.column(j)[: nz + nb] for j in range(Km.cols)]
        else:
            K = [[1 if i == j else 0 for i in range(nz + nb)] for j in range(nz + nb)]
        # canonical b modulo the relations of B_n
        P = MB.presentations.get(n)
        cand = []
        if n == 0 and unit is not None:
            u = MB.index[unit]
            if MB.degrees[u] != 0:
                raise ResolutionError("the unit of B must sit in degree 0")
            e = [0] * (nz + nb)
            e[nz + bgens.index(u)] = 1
            cand.append(e)
        for v in K:
            b = v[nz:]
            if P is not None and not P.is_free:
                b = P.reduce(b)
            cand.append(list(v[:nz]) + list(b))
        if ring.kind in ("Integers", "Rationals"):
            cand = [v if next((x for x in v if x), 0) > 0 else [-x for x in v] for v in cand]
        chosen: list[list] = []
        relcols = [[0] * nz + list(r) for r in brels]
        for v in cand:
            if not any(v):
                continue
            cols = chosen + relcols
            if cols:
                mat = [[c[i] for c in cols] for i in range(nz + nb)]
                if solve_linear(ring, mat, v, shape=(nz + nb, len(cols))) is not None:
                    continue
            chosen.append(v)
        if n == depth + 1:
            complete = not chosen and n > top_B
            break
        if not chosen and n > top_B:
            complete = True
            break
        new = []
        taken = {g for g, _ in gens}
        for k, v in enumerate(chosen):
            support = [(bgens[i], c) for i, c in enumerate(v[nz:]) if c]
            if n == 0 and k == 0 and unit is not None:
                lab = str(unit)
                unit_label = lab
            elif labels is not None:
                lab = namer(n, k)
            elif n == 0 and len(support) == 1 and support[0][1] == 1 and str(MB.labels[support[0][0]]) not in taken:
                lab = str(MB.labels[support[0][0]])
            elif n == 0:
                lab = f"a{k}"
            else:
                lab = namer(n, k)
            taken.add(lab)
            gens.append((lab, n))
            diff[lab] = {prev[c]: x for c, x in enumerate(v[:nz]) if x}
            qimg[lab] = {bgens[c]: x for c, x in enumerate(v[nz:]) if x}
            new.append(lab)
        prev = new
    A_mod = GradedModule(ring, gens, name=name)
    A = ChainComplex(A_mod, diff, complete=complete)
    q = ChainMap(A, B, {lab: {MB.labels[j]: c for j, c in img.items()} for lab, img in qimg.items()})
    ud = UnitData(A_mod, A_mod.index[unit_label]) if unit_label is not None else None
    top = max(A_mod.degrees, default=0)
    valid = float("inf") if complete else top - 1
    res = Resolution(A, q, ud, valid, complete)
    lo, hi = 0, (max(top, top_B) if complete else top - 1)
    ok, wit = is_surjective_quasi_iso(q, (lo, hi))
    if not ok:
        raise ResolutionError(f"constructed map is not a surjective quasi-isomorphism: {wit}")
    res.witness = wit
    if ud is not None:
        if A.differential.get(ud.index):
            raise ResolutionError("d(1) != 0")
    return res


def is_semiprojective_witness(C: ChainComplex) -> Verdict:
    """Bounded below and degreewise free (the syntactic criterion)."""
    if C.unbounded_below:
        return Verdict(False, "unbounded below")
    M = C.module
    for d, P in sorted(M.presentations.items()):
        if not P.is_free:
            return Verdict(False, f"component in degree {d} is not free")
    return Verdict(True, f"free in degrees {sorted(M.presentations)}")


# ---------------------------------------------------------------------------
# lifting contexts
# ---------------------------------------------------------------------------


@dataclass
class LiftContext:
    """Post-composition with a linear map ``Q: T -> T'`` on towers out of ``S``.

    ``allowed`` lists the generators of ``S`` that may appear in tensors (the
    complement of the unit), ``nu_S``, ``nu_T``, ``nu_T2`` the suspended
    differentials of source, target and the image target.
    """

    S: GradedModule
    T: GradedModule
    T2: GradedModule | None
    Q: MultiMap | None
    nu_S: MultiMap
    nu_T: MultiMap
    nu_T2: MultiMap | None
    allowed: tuple
    rng: random.Random | None = None
    target_allowed: frozenset | None = None
    max_sdeg: float = float("inf")
    log: list = field(default_factory=list)

    def tgens(self, t: int) -> list[int]:
        gs = self.T.gens_in_degree(t)
        if self.target_allowed is None:
            return gs
        return [g for g in gs if g in self.target_allowed]

    def keys(self, l: int, degree: int, module: GradedModule):
        """Tensors of length ``l`` whose output under a degree ``degree`` map has somewhere to go."""
        out = []
        for key in itertools.product(self.allowed, repeat=l):
            if sdeg_tuple(self.S, key) > self.max_sdeg:
                continue
            t = sdeg_tuple(self.S, key) + degree - 1
            if (self.tgens(t) if module is self.T else module.gens_in_degree(t)):
                out.append((key, t))
        return out

    def apply(self, y: MultiMap) -> MultiMap:
        if self.Q is None:
            return MultiMap(self.S, self.T, y.degree, {}, y.lrange)
        comps = {k: self.Q(v) for k, v in y.comps.items()}
        return MultiMap(self.S, self.T2, y.degree + self.Q.degree, comps, y.lrange)


def build_lift_context(
    S: GradedModule,
    allowed,
    Q: MultiMap | None,
    nu_S: MultiMap,
    nu_T: MultiMap,
    nu_T2: MultiMap | None = None,
    *,
    rng: random.Random | None = None,
    check_surjective: bool = True,
    target_allowed=None,
    max_sdeg=None,
    surject_onto=None,
) -> LiftContext:
    """Assemble a context; ``Q = None`` gives plain boundary solves in ``hhc(S_allowed, T)``.

    ``surject_onto`` restricts the surjectivity check to those generators of ``T'``.
    """
    T = nu_T.source
    T2 = Q.target if Q is not None else None
    if not T.is_free:
        raise GradingError("the lifting target must be degreewise free")
    if Q is not None and (Q.degree != 0 or Q.lrange != (1, 1) or Q.source is not T):
        raise GradingError("Q must be a degree 0 linear map out of the target")
    ta = frozenset(target_allowed) if target_allowed is not None else None
    ctx = LiftContext(S, T, T2, Q, nu_S, nu_T, nu_T2, tuple(allowed), rng, ta)
    if max_sdeg is not None:
        ctx.max_sdeg = max_sdeg
    if check_surjective and Q is not None:
        for d in sorted(T2.by_degree):
            for j in T2.gens_in_degree(d):
                if surject_onto is not None and j not in surject_onto:
                    continue
                if _solve_component(ctx, {j: 1}, d) is None:
                    raise LiftError(f"Q is not surjective: {T2.labels[j]} has no preimage")
    return ctx


def _solve_component(ctx: LiftContext, z: dict, t: int, rng=None):
    """``y`` in ``T_t`` with ``Q(y) = z`` modulo the relations of ``T'``."""
    T, T2 = ctx.T, ctx.T2
    src = ctx.tgens(t)
    tgt = T2.gens_in_degree(t)
    rels = T2.relation_vectors(t)
    if not tgt:
        return {}
    mat = [[0] * (len(src) + len(rels)) for _ in tgt]
    for c, g in enumerate(src):
        v = T2.vector(ctx.Q({g: 1}), t)
        for r, x in enumerate(v):
            mat[r][c] = x
    for c, rel in enumerate(rels):
        for r, x in enumerate(rel):
            mat[r][len(src) + c] = x
    b = T2.vector(z, t) if z else [0] * len(tgt)
    x = solve_linear(T.ring, mat, b, shape=(len(tgt), len(src) + len(rels)), rng=rng)
    if x is None:
        return None
    return {g: x[c] for c, g in enumerate(src) if x[c]}


def lift_preimage(ctx: LiftContext, z: MultiMap) -> MultiMap:
    """A tower ``y: S -> T`` with ``Q o y = z``, componentwise."""
    comps = {}
    for key, val in sorted(z.comps.items()):
        t = z.target.degree_of(val)
        y = _solve_component(ctx, val, t, ctx.rng)
        if y is None:
            raise LiftError(f"component {key} of degree {t} has no preimage")
        comps[key] = y
    y = MultiMap(ctx.S, ctx.T, z.degree - ctx.Q.degree, comps, z.lrange)
    if not (ctx.apply(y) - z).is_zero():
        raise LiftError("preimage does not map onto its target")
    return y


def kernel_boundary_solve(ctx: LiftContext, c: MultiMap, l: int) -> MultiMap:
    """``x`` with ``Q o x = 0`` and ``d x = c`` in tensor degree ``l``."""
    ring = ctx.T.ring
    c = clip(c.truncate(l, l), ctx.max_sdeg)
    for key in c.comps:
        if any(g not in ctx.allowed for g in key):
            raise LiftError(f"right-hand side has a component outside the allowed tensors: {key}")
    if ctx.target_allowed is not None and any(g not in ctx.target_allowed for v in c.comps.values() for g in v):
        raise LiftError("right-hand side leaves the allowed target generators")
    if not ctx.apply(c).is_zero():
        raise LiftError("right-hand side is not in the kernel of Q")
    dc = hhc_differential(c.with_range(l, l), ctx.nu_S, ctx.nu_T).truncate(l, l)
    if not clip(dc, ctx.max_sdeg).is_zero():
        raise LiftError("right-hand side is not a cycle")
    if c.is_zero() and ctx.rng is None:
        return MultiMap(ctx.S, ctx.T, c.degree + 1, {}, (l, l))
    deg = c.degree + 1
    T, T2 = ctx.T, ctx.T2
    xkeys = ctx.keys(l, deg, T)
    var: dict = {}
    for key, t in xkeys:
        for g in ctx.tgens(t):
            var[key, g] = len(var)
    nx = len(var)
    slack: dict = {}
    if ctx.Q is not None:
        for key, t in xkeys:
            for j, _ in enumerate(T2.relation_vectors(t)):
                slack[key, j] = nx + len(slack)
    ncols = nx + len(slack)
    eq: dict = {}
    rows: list[list] = []
    rhs: list = []

    def row_for(tag):
        if tag not in eq:
            eq[tag] = len(rows)
            rows.append([0] * ncols)
            rhs.append(0)
        return eq[tag]

    # d(x) = c on allowed tensors
    for (key, g), v in var.items():
        e = MultiMap(ctx.S, T, deg, {key: {g: 1}}, (l, l))
        de = hhc_differential(e, ctx.nu_S, ctx.nu_T).truncate(l, l)
        for k2, val in de.comps.items():
            if any(h not in ctx.allowed for h in k2) or sdeg_tuple(ctx.S, k2) > ctx.max_sdeg:
                continue
            for h, a in val.items():
                rows[row_for(("d", k2, h))][v] = a
    for k2, val in c.comps.items():
        for h, a in val.items():
            rhs[row_for(("d", k2, h))] = a
    # Q(x_key) + rels * s = 0
    for key, t in (xkeys if ctx.Q is not None else ()):
        tg = T2.gens_in_degree(t)
        for g in ctx.tgens(t):
            img = ctx.Q({g: 1})
            for h, a in img.items():
                rows[row_for(("q", key, h))][var[key, g]] = a
        for j, rel in enumerate(T2.relation_vectors(t)):
            for p, a in enumerate(rel):
                if a:
                    rows[row_for(("q", key, tg[p]))][slack[key, j]] = a
    if not rows:
        return MultiMap(ctx.S, T, deg, {}, (l, l))
    sol = solve_linear(ring, rows, rhs, shape=(len(rows), ncols), rng=ctx.rng)
    if sol is None:
        raise LiftError(
            f"no x in ker Q with d(x) = c in tensor degree {l}: the kernel is not acyclic here "
            "(enlarge the resolution window)"
        )
    comps: dict = {}
    for (key, g), v in var.items():
        if sol[v]:
            comps.setdefault(key, {})[g] = sol[v]
    x = MultiMap(ctx.S, T, deg, comps, (l, l))
    check = clip(hhc_differential(x, ctx.nu_S, ctx.nu_T).truncate(l, l), ctx.max_sdeg)
    check = check.filter(lambda k: all(h in ctx.allowed for h in k))
    if not (check.with_range(l, l) - c.with_range(l, l)).is_zero() or not ctx.apply(x).is_zero():
        raise LiftError("boundary solve failed its substitution check")
    ctx.log.append(("boundary", l, deg, nx))
    return x


def kernel_homology_vanishes(ctx: LiftContext, l: int, degree: int) -> Verdict:
    """Whether ``H_degree`` of ``ker Q`` inside ``hhc^l(S_allowed, T)`` is zero.

    With ``Q = None`` this is the homology of ``hhc^l`` itself.
    """
    ring = ctx.T.ring
    S, T = ctx.S, ctx.T
    degs = [degree - 1, degree, degree + 1]
    gens = {}
    for deg in degs:
        gens[deg] = [(key, g) for key, t in ctx.keys(l, deg, T) for g in ctx.tgens(t)]
    pos = {deg: {v: i for i, v in enumerate(gens[deg])} for deg in degs}

    def dmatrix(deg):
        rows = [[0] * len(gens[deg]) for _ in gens[deg - 1]]
        for c, (key, g) in enumerate(gens[deg]):
            e = MultiMap(S, T, deg, {key: {g: 1}}, (l, l))
            de = hhc_differential(e, ctx.nu_S, ctx.nu_T).truncate(l, l)
            for k2, val in de.comps.items():
                if any(h not in ctx.allowed for h in k2) or sdeg_tuple(S, k2) > ctx.max_sdeg:
                    continue
                for h, a in val.items():
                    r = pos[deg - 1].get((k2, h))
                    if r is None:
                        return None
                    rows[r][c] = a
        return rows

    def kernel_of_q(deg):
        n = len(gens[deg])
        if ctx.Q is None or n == 0:
            return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        T2 = ctx.T2
        eqs: dict = {}
        cols = n
        entries = []
        for c, (key, g) in enumerate(gens[deg]):
            for h, a in ctx.Q({g: 1}).items():
                entries.append(((key, h), c, a))
        slack = []
        for key in {k for k, _ in gens[deg]}:
            t = sdeg_tuple(S, key) + deg - 1
            tg = T2.gens_in_degree(t)
            for rel in T2.relation_vectors(t):
                for p, a in enumerate(rel):
                    if a:
                        entries.append(((key, tg[p]), cols, a))
                cols += 1
                slack.append(None)
        for tag, _, _ in entries:
            eqs.setdefault(tag, len(eqs))
        mat = [[0] * cols for _ in eqs]
        for tag, c, a in entries:
            mat[eqs[tag]][c] = ring(mat[eqs[tag]][c] + a)
        if not mat:
            return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        K = kernel_basis(ring, mat, shape=(len(mat), cols))
        return [v for v in (K.column(j)[:n] for j in range(K.cols)) if any(v)]

    n0 = len(gens[degree])
    if n0 == 0:
        return Verdict(True, f"no components in degree {degree}")
    D0, D1 = dmatrix(degree), dmatrix(degree + 1)
    if D0 is None or D1 is None:
        return Verdict(False, "differential leaves the listed components")
    K0, K1 = kernel_of_q(degree), kernel_of_q(degree + 1)
    # cycles: K0 a with D0 K0 a = 0
    m = len(gens[degree - 1])
    if m and K0:
        DK = [[sum(D0[i][p] * v[p] for p in range(n0)) for v in K0] for i in range(m)]
        Z = kernel_basis(ring, DK, shape=(m, len(K0)))
        cycles = [[sum(K0[j][p] * z[j] for j in range(len(K0))) for p in range(n0)] for z in (Z.column(c) for c in range(Z.cols))]
    else:
        cycles = K0
    cycles = [[ring(x) for x in v] for v in cycles if any(ring(x) for x in v)]
    if not cycles:
        return Verdict(True, f"no cycles in degree {degree}")
    n1 = len(gens[degree + 1])
    bounds = [[sum(D1[i][p] * v[p] for p in range(n1)) for i in range(n0)] for v in K1] if n1 else []
    for z in cycles:
        if not bounds:
            return Verdict(False, f"cycle {_describe_vec(gens[degree], z, S, T)} is not a boundary")
        mat = [[b[i] for b in bounds] for i in range(n0)]
        if solve_linear(ring, mat, z, shape=(n0, len(bounds))) is None:
            return Verdict(False, f"cycle {_describe_vec(gens[degree], z, S, T)} is not a boundary")
    return Verdict(True, f"{len(cycles)} cycle generators bound in degree {degree}")


def _describe_vec(gens, v, S, T) -> str:
    parts = []
    for (key, g), a in zip(gens, v):
        if a:
            src = "|".join(str(S.labels[i]) for i in key)
            parts.append(f"{a}*([{src}] -> {T.labels[g]})")
    return " + ".join(parts)
