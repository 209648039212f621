"""Dense exact linear algebra: matrices, reduced row echelon form, kernels,
and canonical subspace bases with lattice operations.

A subspace is always stored by the reduced row echelon form of a spanning
set (pivot columns strictly increasing, pivot entries 1, pivot columns
otherwise zero, no zero rows), so equal subspaces compare equal as values.
"""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Iterable, Sequence

from .fields import Field


def zero_vector(field: Field, dim: int) -> tuple:
    return (field.zero,) * dim


def unit_vector(field: Field, dim: int, i: int) -> tuple:
    if not 0 <= i < dim:
        raise ValueError(f"unit vector index {i} out of range for dimension {dim}")
    return tuple(field.one if j == i else field.zero for j in range(dim))


def vec_add(field: Field, a: Sequence, b: Sequence) -> tuple:
    return tuple(field.add(x, y) for x, y in zip(a, b, strict=True))


def vec_sub(field: Field, a: Sequence, b: Sequence) -> tuple:
    return tuple(field.sub(x, y) for x, y in zip(a, b, strict=True))


def vec_scale(field: Field, c, a: Sequence) -> tuple:
    return tuple(field.mul(c, x) for x in a)


def is_zero_vector(a: Sequence) -> bool:
    return all(x == 0 for x in a)


class Matrix:
    """An immutable rows-by-columns matrix over an exact field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: Field, rows: Iterable[Sequence]):
        frozen = tuple(tuple(r) for r in rows)
        if frozen:
            width = len(frozen[0])
            if any(len(r) != width for r in frozen):
                raise ValueError("ragged rows")
        self.field = field
        self.rows = frozen

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [unit_vector(field, n, i) for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [zero_vector(field, ncols)] * nrows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, zip(*self.rows)) if self.rows else Matrix(self.field, [])

    def add(self, other: "Matrix") -> "Matrix":
        f = self.field
        return Matrix(f, [vec_add(f, a, b) for a, b in zip(self.rows, other.rows, strict=True)])

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [vec_scale(f, c, r) for r in self.rows])

    def mul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        f = self.field
        cols = other.transpose().rows
        out = []
        for row in self.rows:
            out.append(tuple(_dot(f, row, col) for col in cols))
        return Matrix(f, out)

    def matvec(self, v: Sequence) -> tuple:
        f = self.field
        return tuple(_dot(f, row, v) for row in self.rows)

    def trace(self):
        f = self.field
        t = f.zero
        for i in range(min(self.nrows, self.ncols)):
            t = f.add(t, self.rows[i][i])
        return t

    def is_zero(self) -> bool:
        return all(is_zero_vector(r) for r in self.rows)

    def rref(self) -> tuple["Matrix", int]:
        """Reduced row echelon form (same shape, zero rows at the bottom) and rank."""
        f = self.field
        m = [list(r) for r in self.rows]
        nr, nc = len(m), self.ncols
        pr = 0
        for pc in range(nc):
            pivot = next((r for r in range(pr, nr) if m[r][pc] != 0), None)
            if pivot is None:
                continue
            m[pr], m[pivot] = m[pivot], m[pr]
            inv = f.inv(m[pr][pc])
            if inv != f.one:
                m[pr] = [f.mul(inv, x) for x in m[pr]]
            for r in range(nr):
                if r != pr and m[r][pc] != 0:
                    c = m[r][pc]
                    m[r] = [f.sub(a, f.mul(c, b)) for a, b in zip(m[r], m[pr])]
            pr += 1
            if pr == nr:
                break
        return Matrix(f, m), pr

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        return f"Matrix({self.field}, {self.nrows}x{self.ncols})"


def _dot(field: Field, a: Sequence, b: Sequence):
    acc = field.zero
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            acc = field.add(acc, field.mul(x, y))
    return acc


class EchelonAccumulator:
    """Mutable reduced row echelon accumulator for incremental span growth."""

    __slots__ = ("field", "ambient_dim", "rows", "pivots")

    def __init__(self, field: Field, ambient_dim: int):
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows: list[list] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence) -> list:
        f = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != 0:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec: Sequence) -> bool:
        return is_zero_vector(self.reduce(vec))

    def add(self, vec: Sequence) -> tuple | None:
        """Insert a vector; return its canonical new basis row, or None if already spanned."""
        if len(vec) != self.ambient_dim:
            raise ValueError("vector length does not match the ambient dimension")
        f = self.field
        v = self.reduce(vec)
        lead = next((j for j, x in enumerate(v) if x != 0), None)
        if lead is None:
            return None
        inv = f.inv(v[lead])
        if inv != f.one:
            v = [f.mul(inv, x) for x in v]
        for i, row in enumerate(self.rows):
            c = row[lead]
            if c != 0:
                self.rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(row, v)]
        at = bisect_left(self.pivots, lead)
        self.rows.insert(at, v)
        self.pivots.insert(at, lead)
        return tuple(v)

    def to_subspace(self) -> "SubspaceBasis":
        return SubspaceBasis._trusted(
            self.field, self.ambient_dim, tuple(tuple(r) for r in self.rows), tuple(self.pivots)
        )


class SubspaceBasis:
    """Canonical (reduced row echelon) basis of a subspace of F^d."""

    __slots__ = ("field", "ambient_dim", "rows", "pivots")

    def __init__(self, field: Field, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        acc = EchelonAccumulator(field, ambient_dim)
        for v in vectors:
            acc.add(v)
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows = tuple(tuple(r) for r in acc.rows)
        self.pivots = tuple(acc.pivots)

    @classmethod
    def _trusted(cls, field, ambient_dim, rows, pivots) -> "SubspaceBasis":
        # rows must already be in reduced echelon form; freezing here keeps
        # equality and hashing independent of the caller's container types
        obj = object.__new__(cls)
        obj.field = field
        obj.ambient_dim = ambient_dim
        obj.rows = tuple(tuple(r) for r in rows)
        obj.pivots = tuple(pivots)
        return obj

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls._trusted(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        rows = tuple(unit_vector(field, ambient_dim, i) for i in range(ambient_dim))
        return cls._trusted(field, ambient_dim, rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.ambient_dim

    def reduce(self, vec: Sequence) -> tuple:
        f = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != 0:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vec: Sequence) -> bool:
        return is_zero_vector(self.reduce(vec))

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        self._check_compatible(other)
        return all(self.contains(r) for r in other.rows)

    def coordinates_of(self, vec: Sequence) -> tuple | None:
        """Coefficients of `vec` in this basis, or None if it lies outside."""
        if not self.contains(vec):
            return None
        return tuple(vec[p] for p in self.pivots)

    def sum(self, other: "SubspaceBasis") -> "SubspaceBasis":
        self._check_compatible(other)
        return SubspaceBasis(self.field, self.ambient_dim, self.rows + other.rows)

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        """Intersection, via the kernel of the stacked bases."""
        self._check_compatible(other)
        if self.is_zero() or other.is_zero():
            return SubspaceBasis.zero(self.field, self.ambient_dim)
        f = self.field
        a, b = self.rows, other.rows
        stacked = Matrix(
            f,
            [
                [a[r][i] for r in range(len(a))] + [f.neg(b[r][i]) for r in range(len(b))]
                for i in range(self.ambient_dim)
            ],
        )
        vectors = []
        for sol in kernel(stacked).rows:
            v = zero_vector(f, self.ambient_dim)
            for c, row in zip(sol[: len(a)], a):
                if c != 0:
                    v = vec_add(f, v, vec_scale(f, c, row))
            vectors.append(v)
        return SubspaceBasis(f, self.ambient_dim, vectors)

    def _check_compatible(self, other: "SubspaceBasis") -> None:
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient spaces")

    def __eq__(self, other):
        return (
            isinstance(other, SubspaceBasis)
            and other.field == self.field
            and other.ambient_dim == self.ambient_dim
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.rows))

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim}, {self.field})"


def span(field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> SubspaceBasis:
    return SubspaceBasis(field, ambient_dim, vectors)


def kernel(matrix: Matrix) -> SubspaceBasis:
    """Canonical basis of the right kernel {v : M v = 0}."""
    f = matrix.field
    nc = matrix.ncols
    acc = EchelonAccumulator(f, nc)
    for row in matrix.rows:
        acc.add(row)
    rows, pivots = acc.rows, acc.pivots
    pivot_set = set(pivots)
    basis = []
    for free in range(nc):
        if free in pivot_set:
            continue
        v = [f.zero] * nc
        v[free] = f.one
        for row, p in zip(rows, pivots):
            if row[free] != 0:
                v[p] = f.neg(row[free])
        basis.append(v)
    return SubspaceBasis(f, nc, basis)


def quotient_complement(whole: SubspaceBasis, sub: SubspaceBasis) -> list[tuple]:
    """Deterministic coset representatives spanning `whole` modulo `sub`.

    Returns the rows of `whole` whose pivots are not pivots of `sub`; their
    classes form a basis of the quotient space.
    """
    whole._check_compatible(sub)
    if not whole.contains_subspace(sub):
        raise ValueError("sub is not contained in whole")
    skip = set(sub.pivots)
    return [row for row, p in zip(whole.rows, whole.pivots) if p not in skip]


def determinant(field: Field, grid: Sequence[Sequence]):
    """Determinant of a square scalar matrix by exact Gaussian elimination."""
    n = len(grid)
    if any(len(r) != n for r in grid):
        raise ValueError("determinant of a non-square matrix")
    m = [list(r) for r in grid]
    det = field.one
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = field.neg(det)
        det = field.mul(det, m[c][c])
        inv = field.inv(m[c][c])
        for r in range(c + 1, n):
            if m[r][c] != 0:
                factor = field.mul(inv, m[r][c])
                m[r] = [field.sub(a, field.mul(factor, b)) for a, b in zip(m[r], m[c])]
    return det
