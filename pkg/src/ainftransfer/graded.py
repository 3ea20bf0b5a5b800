"""Graded modules, complexes, suspension and the Koszul sign rule.

Elements of a graded module are sparse dicts ``{generator index: coefficient}``
with zero coefficients dropped. A finitely presented module carries per-degree
relations; equality of elements is always decided after :meth:`GradedModule.reduce`.

Sign conventions used everywhere in the package:

* ``(f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)``
* the suspension ``[x]`` of ``x`` has degree ``|x| + 1`` and the suspended
  differential is ``-s d s^{-1}``
* the Hom differential is ``d_N f - (-1)^{|f|} f d_M``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .linalg import Presentation, kernel_basis, solve_linear
from .ring import BaseRing

__all__ = [
    "GradedModule",
    "HomModule",
    "ChainComplex",
    "ChainMap",
    "WindowError",
    "GradingError",
    "elem_add",
    "elem_scale",
    "elem_sub",
    "koszul_sign",
    "koszul_apply",
    "suspend",
    "tensor_complex",
    "hom_complex",
    "homology",
    "is_surjective_quasi_iso",
]


class GradingError(ValueError):
    pass


class WindowError(ValueError):
    """A query outside the degrees where a (truncated) complex is known."""


# ---------------------------------------------------------------------------
# sparse element arithmetic
# ---------------------------------------------------------------------------


def elem_add(ring: BaseRing, x: dict, y: dict, c=1) -> dict:
    """``x + c*y``."""
    out = dict(x)
    for k, v in y.items():
        v = ring(out.get(k, 0) + c * v)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def elem_sub(ring: BaseRing, x: dict, y: dict) -> dict:
    return elem_add(ring, x, y, -1)


def elem_scale(ring: BaseRing, x: dict, c) -> dict:
    out = {}
    for k, v in x.items():
        v = ring(c * v)
        if v:
            out[k] = v
    return out


def koszul_sign(map_degrees: Sequence[int], input_degrees: Sequence[int]) -> int:
    """Sign of ``(f_1 (x) ... (x) f_n)(x_1 (x) ... (x) x_n)``.

    Each ``f_q`` passes over every ``x_p`` with ``p < q``.
    """
    if len(map_degrees) != len(input_degrees):
        raise GradingError("arity mismatch")
    e = 0
    left = 0
    for fd, xd in zip(map_degrees, input_degrees):
        e += fd * left
        left += xd
    return -1 if e % 2 else 1


def koszul_apply(maps: Sequence[tuple[int, Callable]], inputs: Sequence[tuple[int, object]]):
    """Apply a tensor product of graded maps to a tensor of homogeneous inputs.

    ``maps`` holds ``(degree, callable)`` pairs and ``inputs`` ``(degree, value)``
    pairs; returns ``(sign, [f_1(x_1), ..., f_n(x_n)])``.
    """
    if len(maps) != len(inputs):
        raise GradingError(f"{len(maps)} maps applied to {len(inputs)} factors")
    sign = koszul_sign([d for d, _ in maps], [d for d, _ in inputs])
    return sign, [f(x) for (_, f), (_, x) in zip(maps, inputs)]


# ---------------------------------------------------------------------------
# graded modules
# ---------------------------------------------------------------------------


class GradedModule:
    """A graded module with finitely many generators, presented degreewise.

    ``gens`` is a sequence of ``(label, degree)``; ``relations`` a sequence of
    elements (dicts keyed by generator label or index), each homogeneous.
    """

    def __init__(
        self,
        ring: BaseRing,
        gens: Iterable[tuple[object, int]],
        relations: Iterable[dict] = (),
        *,
        name: str = "",
    ):
        self.ring = ring
        self.name = name
        gens = list(gens)
        self.labels = [g for g, _ in gens]
        self.degrees = [int(d) for _, d in gens]
        if len(set(self.labels)) != len(self.labels):
            raise GradingError("duplicate generator labels")
        if any(isinstance(lab, int) for lab in self.labels):
            # ints are reserved for generator indices
            raise GradingError("generator labels must not be integers")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.by_degree: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            self.by_degree.setdefault(d, []).append(i)
        self._pos = {i: p for d, idx in self.by_degree.items() for p, i in enumerate(idx)}
        rel_by_degree: dict[int, list[dict]] = {}
        self.relations = []
        for r in relations:
            r = self.element(r)
            if not r:
                continue
            d = self.degree_of(r)
            rel_by_degree.setdefault(d, []).append(r)
            self.relations.append(r)
        self.presentations = {
            d: Presentation(ring, len(idx), [self._vector(r, d) for r in rel_by_degree.get(d, [])])
            for d, idx in self.by_degree.items()
        }

    # -- construction helpers ---------------------------------------------
    def element(self, data: dict) -> dict:
        out = {}
        for k, v in data.items():
            i = self.index.get(k, k)
            if not isinstance(i, int) or i not in self._pos:
                raise GradingError(f"unknown generator {k!r} in {self.name or 'module'}")
            v = self.ring(out.get(i, 0) + self.ring(v))
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return out

    def labelled(self, x: dict) -> dict:
        return {self.labels[i]: c for i, c in x.items()}

    def gen(self, label) -> dict:
        return {self.index[label]: self.ring.one()}

    def __len__(self):
        return len(self.labels)

    @property
    def is_free(self) -> bool:
        return all(p.is_free for p in self.presentations.values())

    def degree_of(self, x: dict) -> int:
        ds = {self.degrees[i] for i in x}
        if len(ds) > 1:
            raise GradingError(f"inhomogeneous element {x}")
        if not ds:
            raise GradingError("zero element has no degree")
        return ds.pop()

    def gens_in_degree(self, d: int) -> list[int]:
        return self.by_degree.get(d, [])

    def _vector(self, x: dict, d: int) -> list:
        idx = self.by_degree.get(d, [])
        v = [0] * len(idx)
        for i, c in x.items():
            v[self._pos[i]] = c
        return v

    def _from_vector(self, v: Sequence, d: int) -> dict:
        idx = self.by_degree.get(d, [])
        return {idx[p]: c for p, c in enumerate(v) if c != 0}

    def vector(self, x: dict, d: int) -> list:
        return self._vector(x, d)

    def from_vector(self, v: Sequence, d: int) -> dict:
        return self._from_vector(v, d)

    def reduce(self, x: dict) -> dict:
        """Canonical representative of ``x`` (any mix of degrees)."""
        if not x:
            return {}
        groups: dict[int, dict] = {}
        for i, c in x.items():
            groups.setdefault(self.degrees[i], {})[i] = c
        out = {}
        for d, part in groups.items():
            P = self.presentations[d]
            if P.is_free:
                out.update({i: self.ring(c) for i, c in part.items() if self.ring(c)})
            else:
                out.update(self._from_vector(P.reduce(self._vector(part, d)), d))
        return out

    def is_zero(self, x: dict) -> bool:
        return not self.reduce(x)

    def equal(self, x: dict, y: dict) -> bool:
        return self.is_zero(elem_sub(self.ring, x, y))

    def relation_vectors(self, d: int) -> list[list]:
        return self.presentations[d].rels if d in self.presentations else []

    def format(self, x: dict) -> str:
        if not x:
            return "0"
        return " + ".join(f"{c}*{self.name_of(i)}" for i, c in sorted(x.items()))

    def name_of(self, i: int) -> str:
        """Printable name of generator ``i``."""
        return str(self.labels[i])

    def __repr__(self):
        return f"GradedModule({self.name or '?'}, gens={list(zip(self.labels, self.degrees))})"


class HomModule(GradedModule):
    """``Hom(F(M), N)`` where ``F(M)`` is free on the generators of ``M``.

    A homomorphism out of a finitely presented ``M`` is stored by the images of
    generators; generator ``(i, j)`` sends ``m_i`` to ``n_j`` and has degree
    ``|n_j| - |m_i|``. Relations come from those of ``N``, one copy per
    generator of ``M``. Well-definedness on the relations of ``M`` is checked
    separately (:meth:`is_well_defined`).
    """

    def __init__(self, source: GradedModule, target: GradedModule):
        if source.ring != target.ring:
            raise GradingError("Hom between modules over different rings")
        self.source = source
        self.target = target
        gens = [
            ((i, j), target.degrees[j] - source.degrees[i])
            for i in range(len(source))
            for j in range(len(target))
        ]
        rels = []
        for i in range(len(source)):
            for r in target.relations:
                rels.append({(i, j): c for j, c in r.items()})
        super().__init__(source.ring, gens, rels, name=f"Hom({source.name},{target.name})")

    def name_of(self, g: int) -> str:
        i, j = self.labels[g]
        return f"{self.source.name_of(i)}->{self.target.name_of(j)}"

    def from_images(self, images: dict) -> dict:
        """Element from ``{source gen index: target element}``."""
        out = {}
        for i, img in images.items():
            for j, c in img.items():
                out[self.index[i, j]] = c
        return self.reduce(out)

    def images(self, f: dict) -> dict:
        out: dict = {}
        for g, c in f.items():
            i, j = self.labels[g]
            out.setdefault(i, {})[j] = c
        return out

    def apply(self, f: dict, x: dict) -> dict:
        out: dict = {}
        ring = self.ring
        for g, c in f.items():
            i, j = self.labels[g]
            if i in x:
                out = elem_add(ring, out, {j: c * x[i]})
        return out

    def is_well_defined(self, f: dict) -> bool:
        return all(self.target.is_zero(self.apply(f, r)) for r in self.source.relations)

    def identity(self) -> dict:
        if self.source is not self.target:
            raise GradingError("identity needs End")
        return self.reduce({self.index[i, i]: 1 for i in range(len(self.source))})


def compose(ring: BaseRing, outer: HomModule, f: dict, inner: HomModule, g: dict, result: HomModule) -> dict:
    """``f o g`` for ``g`` in ``inner = Hom(M,N)`` and ``f`` in ``outer = Hom(N,P)``."""
    fim = outer.images(f)
    out: dict = {}
    for gg, c in g.items():
        i, j = inner.labels[gg]
        for k, d in fim.get(j, {}).items():
            key = result.index[i, k]
            out = elem_add(ring, out, {key: c * d})
    return result.reduce(out)


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------


class ChainComplex:
    """A graded module with a degree -1 differential given on generators.

    ``complete`` says the generator list is the whole complex; a truncated
    resolution has ``complete=False`` and is only trusted below its top degree.
    ``unbounded_below`` flags a finite window cut out of a complex that
    continues forever downward (it is never semiprojective-certifiable here).
    """

    def __init__(
        self,
        module: GradedModule,
        differential: dict,
        *,
        complete: bool = True,
        unbounded_below: bool = False,
    ):
        self.module = module
        self.ring = module.ring
        self.differential = {}
        for g, img in differential.items():
            i = module.index[g] if g in module.index else g
            if not isinstance(i, int) or not 0 <= i < len(module):
                raise GradingError(f"unknown generator {g!r}")
            img = module.element(img)
            if img and module.degree_of(img) != module.degrees[i] - 1:
                raise GradingError(f"differential of {module.labels[i]} has wrong degree")
            self.differential[i] = module.reduce(img)
        self.complete = complete
        self.unbounded_below = unbounded_below

    @property
    def degrees(self) -> list[int]:
        return sorted(self.module.by_degree)

    @property
    def window(self) -> tuple[int, int]:
        ds = self.degrees
        return (ds[0], ds[-1]) if ds else (0, -1)

    @property
    def valid_top(self) -> float:
        """Highest degree whose homology is computable."""
        lo, hi = self.window
        return float("inf") if self.complete else hi - 1

    def d(self, x: dict) -> dict:
        out: dict = {}
        for i, c in x.items():
            out = elem_add(self.ring, out, self.differential.get(i, {}), c)
        return self.module.reduce(out)

    def matrix(self, n: int) -> list[list]:
        """Dense matrix of ``d_n : C_n -> C_{n-1}`` in generator coordinates."""
        M = self.module
        src = M.gens_in_degree(n)
        tgt = M.gens_in_degree(n - 1)
        out = [[0] * len(src) for _ in tgt]
        for col, i in enumerate(src):
            v = M.vector(self.differential.get(i, {}), n - 1)
            for row, x in enumerate(v):
                out[row][col] = x
        return out

    def check_d_squared(self) -> bool:
        return all(not self.d(self.d({i: 1})) for i in range(len(self.module)))

    def __repr__(self):
        return f"ChainComplex({self.module!r})"


@dataclass
class ChainMap:
    """Graded map ``source -> target`` of the given degree, stored on generators."""

    source: ChainComplex
    target: ChainComplex
    images: dict
    degree: int = 0
    _clean: dict = field(init=False, repr=False)

    def __post_init__(self):
        S, T = self.source.module, self.target.module
        clean = {}
        for g, img in self.images.items():
            i = S.index[g] if g in S.index else g
            img = T.reduce(T.element(img))
            if img and T.degree_of(img) != S.degrees[i] + self.degree:
                raise GradingError(f"image of {S.labels[i]} has wrong degree")
            if img:
                clean[i] = img
        self.images = clean

    def __call__(self, x: dict) -> dict:
        ring = self.source.ring
        out: dict = {}
        for i, c in x.items():
            out = elem_add(ring, out, self.images.get(i, {}), c)
        return self.target.module.reduce(out)

    def is_chain_map(self) -> bool:
        sign = -1 if self.degree % 2 else 1
        for i in range(len(self.source.module)):
            x = {i: 1}
            lhs = self.target.d(self(x))
            rhs = self(self.source.d(x))
            if not self.target.module.equal(lhs, elem_add(self.source.ring, {}, rhs, sign)):
                return False
        return True


def suspend(C: ChainComplex) -> ChainComplex:
    """``Pi C``: degrees shifted up by one, differential ``-s d s^{-1}``."""
    M = C.module
    SM = GradedModule(
        C.ring,
        [(lab, d + 1) for lab, d in zip(M.labels, M.degrees)],
        [M.labelled(r) for r in M.relations],
        name=f"Pi{M.name}",
    )
    diff = {M.labels[i]: M.labelled(elem_scale(C.ring, img, -1)) for i, img in C.differential.items()}
    return ChainComplex(SM, diff, complete=C.complete, unbounded_below=C.unbounded_below)


def tensor_complex(Cs: Sequence[ChainComplex]) -> ChainComplex:
    """Tensor product of degreewise free complexes, basis tuples in lex order."""
    if not Cs:
        raise GradingError("empty tensor product")
    ring = Cs[0].ring
    for C in Cs:
        if C.ring != ring:
            raise GradingError("factors over different rings")
        if not C.module.is_free:
            raise GradingError("tensor products of non-free modules are not supported")
    ranges = [range(len(C.module)) for C in Cs]
    tuples = list(itertools.product(*ranges))
    gens = [
        (tuple(C.module.labels[i] for C, i in zip(Cs, t)), sum(C.module.degrees[i] for C, i in zip(Cs, t)))
        for t in tuples
    ]
    T = GradedModule(ring, gens, name="(x)".join(C.module.name for C in Cs))
    diff = {}
    for t, (lab, _) in zip(tuples, gens):
        out: dict = {}
        left = 0
        for pos, (C, i) in enumerate(zip(Cs, t)):
            sign = -1 if left % 2 else 1
            for j, c in C.differential.get(i, {}).items():
                nt = t[:pos] + (j,) + t[pos + 1 :]
                key = T.index[tuple(C2.module.labels[k] for C2, k in zip(Cs, nt))]
                out = elem_add(ring, out, {key: sign * c})
            left += C.module.degrees[i]
        diff[T.index[lab]] = out
    complete = all(C.complete for C in Cs)
    return ChainComplex(T, diff, complete=complete)


def hom_complex(M: ChainComplex, N: ChainComplex) -> ChainComplex:
    """``Hom(M, N)`` with ``d f = d_N f - (-1)^{|f|} f d_M``."""
    if not M.complete or not N.complete:
        raise WindowError("Hom of a truncated complex has no bounded window")
    H = HomModule(M.module, N.module)
    ring = M.ring
    diff = {}
    for g in range(len(H)):
        f = {g: ring.one()}
        diff[g] = hom_differential(H, M, N, f)
    return ChainComplex(H, diff)


def hom_differential(H: HomModule, M: ChainComplex, N: ChainComplex, f: dict) -> dict:
    ring = H.ring
    imgs = H.images(f)
    out: dict = {}
    degs = {H.degrees[g] for g in f}
    for deg in degs:
        part = {g: c for g, c in f.items() if H.degrees[g] == deg}
        pim = H.images(part)
        sign = -1 if deg % 2 else 1
        res: dict = {}
        for i in range(len(M.module)):
            a = N.d(pim.get(i, {}))
            b = H.apply(part, M.differential.get(i, {}))
            v = elem_add(ring, a, b, -sign)
            if v:
                res[i] = v
        out = elem_add(ring, out, H.from_images(res))
    del imgs
    return H.reduce(out)


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def _relation_columns(M: GradedModule, d: int) -> list[list]:
    return [list(r) for r in M.relation_vectors(d)]


def _cols_to_matrix(cols: list[list], nrows: int) -> list[list]:
    return [[c[i] for c in cols] for i in range(nrows)]


def homology_presentation(C: ChainComplex, n: int) -> tuple[Presentation, list[list]]:
    """Presentation of ``H_n`` and the cycle vectors used as its generators."""
    ring = C.ring
    M = C.module
    cn = len(M.gens_in_degree(n))
    if cn == 0:
        return Presentation(ring, 0), []
    D = C.matrix(n)
    R_prev = _relation_columns(M, n - 1)
    rows_prev = len(M.gens_in_degree(n - 1))
    if rows_prev:
        block = [list(D[i]) + [r[i] for r in R_prev] for i in range(rows_prev)]
        K = kernel_basis(ring, block, shape=(rows_prev, cn + len(R_prev)))
        cycles = []
        for j in range(K.cols):
            v = K.column(j)[:cn]
            if any(v):
                cycles.append(v)
    else:
        cycles = [[1 if i == j else 0 for i in range(cn)] for j in range(cn)]
    if not cycles:
        return Presentation(ring, 0), []
    bounds = [list(col) for col in zip(*C.matrix(n + 1))] if M.gens_in_degree(n + 1) else []
    bounds += _relation_columns(M, n)
    ncyc = len(cycles)
    block = [[cyc[i] for cyc in cycles] + [-b[i] for b in bounds] for i in range(cn)]
    K = kernel_basis(ring, block, shape=(cn, ncyc + len(bounds)))
    rels = [K.column(j)[:ncyc] for j in range(K.cols)]
    return Presentation(ring, ncyc, [r for r in rels if any(r)]), cycles


def homology(C: ChainComplex, window: tuple[int, int]) -> dict[int, Presentation]:
    """``H_n = ker d_n / im d_{n+1}`` for each ``n`` in the inclusive window."""
    lo, hi = window
    if hi > C.valid_top:
        raise WindowError(f"homology in degree {hi} needs the complex beyond its truncation")
    return {n: homology_presentation(C, n)[0] for n in range(lo, hi + 1)}


def cone(q: ChainMap) -> ChainComplex:
    """Mapping cone ``A[-1] + B`` with ``d(a, b) = (-d a, q a + d b)``."""
    A, B = q.source.module, q.target.module
    ring = q.source.ring
    gens = [(("a", lab), d + 1) for lab, d in zip(A.labels, A.degrees)]
    gens += [(("b", lab), d) for lab, d in zip(B.labels, B.degrees)]
    rels = [{("b", B.labels[i]): c for i, c in r.items()} for r in B.relations]
    Cm = GradedModule(ring, gens, rels, name=f"cone({A.name}->{B.name})")
    diff = {}
    for i, lab in enumerate(A.labels):
        img: dict = {}
        for j, c in q.source.differential.get(i, {}).items():
            img[("a", A.labels[j])] = -c
        for j, c in q.images.get(i, {}).items():
            img[("b", B.labels[j])] = img.get(("b", B.labels[j]), 0) + c
        diff[("a", lab)] = img
    for i, lab in enumerate(B.labels):
        diff[("b", lab)] = {("b", B.labels[j]): c for j, c in q.target.differential.get(i, {}).items()}
    complete = q.source.complete and q.target.complete
    return ChainComplex(Cm, diff, complete=complete)


def is_surjective_quasi_iso(q: ChainMap, window: tuple[int, int] | None = None) -> tuple[bool, dict]:
    """Degreewise surjectivity plus acyclicity of the cone inside ``window``."""
    ring = q.source.ring
    A, B = q.source.module, q.target.module
    if q.degree != 0:
        return False, {"reason": "degree is not zero"}
    if window is None:
        ds = sorted(set(A.by_degree) | set(B.by_degree))
        window = (ds[0], ds[-1]) if ds else (0, -1)
    lo, hi = window
    witness: dict = {"window": [lo, hi], "checked": []}
    for n in range(lo, hi + 1):
        tgt = B.gens_in_degree(n)
        if not tgt:
            continue
        src = A.gens_in_degree(n)
        R = _relation_columns(B, n)
        mat = [[0] * (len(src) + len(R)) for _ in tgt]
        for col, i in enumerate(src):
            v = B.vector(q.images.get(i, {}), n)
            for row, x in enumerate(v):
                mat[row][col] = x
        for k, r in enumerate(R):
            for row, x in enumerate(r):
                mat[row][len(src) + k] = x
        for row, j in enumerate(tgt):
            e = [1 if r == row else 0 for r in range(len(tgt))]
            if solve_linear(ring, mat, e, shape=(len(tgt), len(src) + len(R))) is None:
                witness["reason"] = f"generator {B.labels[j]} not in the image"
                return False, witness
    Cq = cone(q)
    top = min(hi + 1, Cq.valid_top)
    if not Cq.complete:
        witness["truncated"] = True
    for n in range(lo, int(top) + 1):
        P, _ = homology_presentation(Cq, n)
        witness["checked"].append(n)
        if not P.is_zero():
            witness["reason"] = f"cone homology nonzero in degree {n}"
            return False, witness
    witness["range"] = [lo, int(top)]
    return True, witness
