"""Exact linear algebra over the supported base rings.

Matrices are stored sparsely (``Matrix``) and converted to dense row lists for
elimination; all arithmetic is on Python integers or fractions, so there is no
overflow. Over Z/m every question is lifted to Z by adjoining ``m * I`` as
extra columns (or rows), which is how the Howell form is obtained too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ring import BaseRing, RingError

__all__ = [
    "Matrix",
    "Presentation",
    "smith_normal_form",
    "hermite_normal_form",
    "howell_form",
    "solve_linear",
    "kernel_basis",
    "fp_reduce",
    "LinalgError",
]


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    """Sparse matrix, entries keyed by ``(row, col)``; zeros are never stored."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    @classmethod
    def from_dense(cls, ring: BaseRing, data: Sequence[Sequence], cols: int | None = None):
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise LinalgError("ragged matrix")
            for j, x in enumerate(row):
                x = ring(x)
                if x != 0:
                    entries[i, j] = x
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, ring: BaseRing, n: int):
        return cls(n, n, {(i, i): ring.one() for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int):
        return cls(rows, cols, {})

    def dense(self, ring: BaseRing) -> list[list]:
        out = [[ring.zero()] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def matmul(self, ring: BaseRing, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list] = {}
        for (k, j), y in other.entries.items():
            by_row.setdefault(k, []).append((j, y))
        acc: dict = {}
        for (i, k), x in self.entries.items():
            for j, y in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + x * y
        entries = {}
        for ij, v in acc.items():
            v = ring(v)
            if v != 0:
                entries[ij] = v
        return Matrix(self.rows, other.cols, entries)

    def apply(self, ring: BaseRing, v: Sequence) -> list:
        if len(v) != self.cols:
            raise LinalgError("vector length mismatch")
        out = [0] * self.rows
        for (i, j), x in self.entries.items():
            out[i] += x * v[j]
        return [ring(x) for x in out]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(j, i): x for (i, j), x in self.entries.items()})

    def column(self, j: int) -> list:
        col = [0] * self.rows
        for (i, jj), x in self.entries.items():
            if jj == j:
                col[i] = x
        return col

    def is_zero(self) -> bool:
        return not self.entries


def _as_dense(ring: BaseRing, M) -> list[list]:
    if isinstance(M, Matrix):
        return M.dense(ring)
    return [[ring(x) for x in row] for row in M]


def _shape(M) -> tuple[int, int]:
    if isinstance(M, Matrix):
        return M.rows, M.cols
    rows = len(M)
    return rows, (len(M[0]) if rows else 0)


def _identity(n: int, one=1) -> list[list]:
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(ring: BaseRing, M, shape: tuple[int, int] | None = None):
    """Return ``(U, S, V)`` with ``U @ M @ V == S``.

    Over Z the diagonal of ``S`` is nonnegative with ``d1 | d2 | ...``; over a
    field it is a 0/1 rank form. Z/m is not a principal ideal domain, use
    :func:`howell_form` instead.
    """
    if ring.kind == "IntegersMod" and not ring.is_field:
        raise RingError("Smith form over Z/m with m composite; use howell_form")
    m, n = shape if shape is not None else _shape(M)
    S = _as_dense(ring, M) if m else []
    U = [[ring(x) for x in row] for row in _identity(m)]
    V = [[ring(x) for x in row] for row in _identity(n)]
    if ring.is_field:
        _snf_field(ring, S, U, V, m, n)
    else:
        _snf_integers(S, U, V, m, n)
    return (
        Matrix.from_dense(ring, U, m),
        Matrix.from_dense(ring, S, n),
        Matrix.from_dense(ring, V, n),
    )


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


def _snf_field(ring, S, U, V, m, n):
    t = 0
    while t < min(m, n):
        piv = next(((i, j) for i in range(t, m) for j in range(t, n) if S[i][j] != 0), None)
        if piv is None:
            break
        i, j = piv
        _swap_rows(S, t, i)
        _swap_rows(U, t, i)
        _swap_cols(S, t, j)
        _swap_cols(V, t, j)
        inv = ring.inverse(S[t][t])
        S[t] = [ring(x * inv) for x in S[t]]
        U[t] = [ring(x * inv) for x in U[t]]
        for i in range(m):
            if i != t and S[i][t] != 0:
                c = S[i][t]
                S[i] = [ring(a - c * b) for a, b in zip(S[i], S[t])]
                U[i] = [ring(a - c * b) for a, b in zip(U[i], U[t])]
        for j in range(t + 1, n):
            if S[t][j] != 0:
                c = S[t][j]
                for row in S:
                    row[j] = ring(row[j] - c * row[t])
                for row in V:
                    row[j] = ring(row[j] - c * row[t])
        t += 1


def _snf_integers(S, U, V, m, n):
    t = 0
    while t < min(m, n):
        cands = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j] != 0]
        if not cands:
            break
        _, i, j = min(cands)
        _swap_rows(S, t, i)
        _swap_rows(U, t, i)
        _swap_cols(S, t, j)
        _swap_cols(V, t, j)
        while True:
            p = S[t][t]
            moved = False
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    q = S[i][t] // p
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                    if S[i][t] != 0:
                        _swap_rows(S, t, i)
                        _swap_rows(U, t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    q = S[t][j] // p
                    for row in S:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    if S[t][j] != 0:
                        _swap_cols(S, t, j)
                        _swap_cols(V, t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p != 0),
                None,
            )
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1


# ---------------------------------------------------------------------------
# Echelon forms of row lattices
# ---------------------------------------------------------------------------


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form over Z of the lattice spanned by ``rows``.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    """
    A = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col] != 0]
        rest = [r for r in A if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        p = nz[0]
        if p[col] < 0:
            p = [-a for a in p]
        for k, b in enumerate(basis):
            q = b[col] // p[col]
            if q:
                basis[k] = [x - q * y for x, y in zip(b, p)]
        basis.append(p)
        A = rest
        col += 1
    return basis


def howell_form(ring: BaseRing, rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Howell form of the Z/m row span of ``rows``.

    Computed as the Hermite form of ``rows + m * Z^ncols`` reduced mod m; rows
    that become zero are dropped.
    """
    if not ring.is_quotient:
        raise RingError("Howell form is defined over Z/m")
    m = ring.modulus
    lifted = [[int(x) for x in r] for r in rows]
    lifted += [[m if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    hnf = hermite_normal_form(lifted, ncols)
    out = []
    for r in hnf:
        r = [x % m for x in r]
        if any(r):
            out.append(r)
    return out


def _rref_field(ring: BaseRing, rows, ncols):
    A = [[ring(x) for x in r] for r in rows]
    basis = []
    for col in range(ncols):
        piv = next((r for r in A if r[col] != 0), None)
        if piv is None:
            continue
        A.remove(piv)
        inv = ring.inverse(piv[col])
        piv = [ring(x * inv) for x in piv]
        A = [[ring(a - r[col] * b) for a, b in zip(r, piv)] for r in A]
        A = [r for r in A if any(r)]
        basis = [[ring(a - b[col] * c) for a, c in zip(b, piv)] for b in basis]
        basis.append(piv)
    return basis


def echelon_basis(ring: BaseRing, rows, ncols):
    """Canonical echelon basis of the row span over ``ring``."""
    rows = [list(r) for r in rows]
    if ring.is_field:
        return _rref_field(ring, rows, ncols)
    if ring.kind == "Integers":
        return hermite_normal_form(rows, ncols)
    return howell_form(ring, rows, ncols)


def _reduce_by_echelon(ring: BaseRing, basis, v):
    v = [ring(x) for x in v]
    for row in basis:
        c = next(i for i, x in enumerate(row) if x != 0)
        if ring.is_field:
            q = v[c]
        else:
            q = int(v[c]) // int(row[c])
        if q:
            v = [ring(a - q * b) for a, b in zip(v, row)]
    return v


# ---------------------------------------------------------------------------
# Solving and kernels
# ---------------------------------------------------------------------------


def _lift_mod(ring: BaseRing, M, shape):
    """Integer matrix ``[M | m I]`` for a Z/m system."""
    m_, n = shape
    A = _as_dense(ring, M) if m_ else []
    mod = ring.modulus
    return [list(map(int, row)) + [mod if i == j else 0 for j in range(m_)] for i, row in enumerate(A)]


def solve_linear(ring: BaseRing, M, b: Sequence, *, shape=None, rng: random.Random | None = None):
    """A solution ``x`` of ``M x = b`` over ``ring``, or ``None`` if there is none.

    Deterministic for fixed input; pass ``rng`` to add a random element of the
    kernel (the seeded preimage mode).
    """
    m, n = shape if shape is not None else _shape(M)
    if len(b) != m:
        raise LinalgError(f"right-hand side has length {len(b)}, expected {m}")
    b = [ring(x) for x in b]
    if ring.is_quotient and not ring.is_field:
        A = _lift_mod(ring, M, (m, n))
        x = solve_linear(BaseRing.integers(), A, [int(x) for x in b], shape=(m, n + m))
        if x is None:
            return None
        x = [ring(v) for v in x[:n]]
    else:
        if m == 0:
            x = [ring.zero()] * n
        else:
            U, S, V = smith_normal_form(ring, M, (m, n))
            c = U.apply(ring, b)
            y = [ring.zero()] * n
            for i in range(m):
                d = S[i, i] if i < n else 0
                if d == 0:
                    if c[i] != 0:
                        return None
                    continue
                if ring.is_field:
                    y[i] = ring(c[i] / d) if ring.kind == "Rationals" else ring(c[i] * ring.inverse(d))
                else:
                    if c[i] % d:
                        return None
                    y[i] = c[i] // d
            x = V.apply(ring, y)
    if rng is not None:
        K = kernel_basis(ring, M, shape=(m, n))
        for j in range(K.cols):
            t = ring(rng.randint(-3, 3))
            if t:
                col = K.column(j)
                x = [ring(a + t * k) for a, k in zip(x, col)]
    return x


def kernel_basis(ring: BaseRing, M, *, shape=None) -> Matrix:
    """Matrix whose columns generate ``ker M`` (a basis over Z and fields)."""
    m, n = shape if shape is not None else _shape(M)
    if n == 0:
        return Matrix(0, 0)
    if ring.is_quotient and not ring.is_field:
        A = _lift_mod(ring, M, (m, n))
        K = kernel_basis(BaseRing.integers(), A, shape=(m, n + m))
        cols = []
        for j in range(K.cols):
            col = [ring(x) for x in K.column(j)[:n]]
            if any(col):
                cols.append(col)
        hw = howell_form(ring, cols, n)
        return Matrix.from_dense(ring, [list(r) for r in zip(*hw)], len(hw)) if hw else Matrix(n, 0)
    if m == 0:
        return Matrix.identity(ring, n)
    U, S, V = smith_normal_form(ring, M, (m, n))
    rank = sum(1 for i in range(min(m, n)) if S[i, i] != 0)
    cols = list(range(rank, n))
    entries = {}
    for (i, j), x in V.entries.items():
        if j >= rank:
            entries[i, j - rank] = x
    return Matrix(n, len(cols), entries)


# ---------------------------------------------------------------------------
# Finitely presented modules
# ---------------------------------------------------------------------------


class Presentation:
    """``k^gens / (column span of rels)`` with an eagerly cached normal form.

    ``rels`` is a list of relation vectors (the columns of the relation
    matrix), each of length ``gens``.
    """

    __slots__ = ("ring", "gens", "rels", "_echelon")

    def __init__(self, ring: BaseRing, gens: int, rels: Iterable[Sequence] = ()):
        self.ring = ring
        self.gens = gens
        rels = [[ring(x) for x in r] for r in rels]
        for r in rels:
            if len(r) != gens:
                raise LinalgError("relation length does not match generator count")
        self._echelon = echelon_basis(ring, rels, gens) if gens else []
        self.rels = [list(r) for r in self._echelon]

    @property
    def is_free(self) -> bool:
        return not self._echelon

    def reduce(self, v: Sequence) -> list:
        if len(v) != self.gens:
            raise LinalgError(f"vector length {len(v)} != {self.gens} generators")
        if not self._echelon:
            return [self.ring(x) for x in v]
        return _reduce_by_echelon(self.ring, self._echelon, v)

    def relation_matrix(self) -> Matrix:
        """Relations as the columns of a ``gens x len(rels)`` matrix."""
        entries = {}
        for j, r in enumerate(self.rels):
            for i, x in enumerate(r):
                if x != 0:
                    entries[i, j] = x
        return Matrix(self.gens, len(self.rels), entries)

    def invariant_factors(self) -> list:
        """Diagonal of the Smith form of the relations, one entry per generator.

        Zero entries are free summands; unit entries are omitted.
        """
        ring = self.ring
        if ring.is_quotient and not ring.is_field:
            rows = [list(map(int, r)) for r in self.rels]
            rows += [[ring.modulus if i == j else 0 for j in range(self.gens)] for i in range(self.gens)]
            Z = BaseRing.integers()
            _, S, _ = smith_normal_form(Z, [list(c) for c in zip(*rows)], (self.gens, len(rows)))
            ds = [S[i, i] for i in range(self.gens)]
            return [d for d in ds if d != 1]
        if not self.rels:
            return [0] * self.gens
        R = self.relation_matrix()
        _, S, _ = smith_normal_form(ring, R)
        ds = [S[i, i] if i < R.cols else 0 for i in range(self.gens)]
        if ring.is_field:
            return [d for d in ds if d == 0]
        return [d for d in ds if d != 1]

    def is_zero(self) -> bool:
        return self.gens == 0 or len(self.invariant_factors()) == 0

    def __repr__(self):
        return f"Presentation({self.ring}, gens={self.gens}, rels={self.rels})"


def fp_reduce(P: Presentation, v: Sequence) -> list:
    """Canonical representative of ``v`` modulo the relations of ``P``."""
    return P.reduce(v)
