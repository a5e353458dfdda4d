"""Exact matrices over a :class:`RingSpec`."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput
from .rings import RingSpec


@dataclass(frozen=True)
class Matrix:
    ring: RingSpec
    rows: int
    cols: int
    data: tuple  # tuple of row tuples of canonical payloads

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise InvalidInput("entry count does not match shape")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rows(cls, ring: RingSpec, rows, cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = tuple(tuple(ring(x) for x in r) for r in rows)
        return cls(ring, len(rows), cols, data)

    @classmethod
    def zeros(cls, ring: RingSpec, rows: int, cols: int) -> "Matrix":
        z = ring.zero()
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "Matrix":
        return cls.diag(ring, [ring.one()] * n)

    @classmethod
    def diag(cls, ring: RingSpec, entries, rows: int | None = None, cols: int | None = None) -> "Matrix":
        entries = list(entries)
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        z = ring.zero()
        data = [[z] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            data[i][i] = ring.reduce(e)
        return cls(ring, rows, cols, tuple(map(tuple, data)))

    @classmethod
    def from_sparse(cls, ring: RingSpec, rows: int, cols: int, entries: dict) -> "Matrix":
        """``entries`` maps ``(i, j)`` to cover elements; zeros may be omitted."""
        z = ring.zero()
        data = [[z] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            data[i][j] = ring.reduce(v)
        return cls(ring, rows, cols, tuple(map(tuple, data)))

    # -- access ------------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        R = self.ring
        return all(R.is_zero(x) for r in self.data for x in r)

    def nonzero_entries(self):
        R = self.ring
        for i, r in enumerate(self.data):
            for j, x in enumerate(r):
                if not R.is_zero(x):
                    yield i, j, x

    # -- algebra -------------------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise InvalidInput("ring mismatch")
        if self.cols != other.rows:
            raise InvalidInput(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        R = self.ring
        E = R.cover
        z = E.zero()
        cols = other.columns()
        out = []
        for r in self.data:
            nz = [(k, x) for k, x in enumerate(r) if not E.is_zero(x)]
            row = []
            for c in cols:
                acc = z
                for k, x in nz:
                    y = c[k]
                    if not E.is_zero(y):
                        acc = E.add(acc, E.mul(x, y))
                row.append(R.reduce(acc))
            out.append(tuple(row))
        return Matrix(R, self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols) or self.ring != other.ring:
            raise InvalidInput("shape or ring mismatch")
        R = self.ring
        return Matrix(R, self.rows, self.cols, tuple(tuple(R.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        R = self.ring
        return Matrix(R, self.rows, self.cols, tuple(tuple(R.neg(a) for a in r) for r in self.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        R = self.ring
        return Matrix(R, self.rows, self.cols, tuple(tuple(R.mul(c, a) for a in r) for r in self.data))

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def map_entries(self, fn, ring: RingSpec) -> "Matrix":
        return Matrix(ring, self.rows, self.cols, tuple(tuple(ring.reduce(fn(a)) for a in r) for r in self.data))

    def apply(self, vec) -> list:
        R = self.ring
        E = R.cover
        out = []
        for r in self.data:
            acc = E.zero()
            for x, y in zip(r, vec):
                if not E.is_zero(x) and not E.is_zero(y):
                    acc = E.add(acc, E.mul(x, y))
            out.append(R.reduce(acc))
        return out

    # -- serialisation -------------------------------------------------------------

    def to_json(self) -> dict:
        R = self.ring
        return {
            "ring": R.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [R.elem_to_json(x) for r in self.data for x in r],
        }

    @classmethod
    def from_json(cls, data: dict, ring: RingSpec | None = None) -> "Matrix":
        R = ring or RingSpec.from_json(data["ring"])
        rows, cols = int(data["rows"]), int(data["cols"])
        flat = [R.elem_from_json(x) for x in data["entries"]]
        if len(flat) != rows * cols:
            raise InvalidInput("entry count does not match shape")
        return cls(R, rows, cols, tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows)))


def hstack(ring: RingSpec, rows: int, blocks) -> Matrix:
    data = [[] for _ in range(rows)]
    for b in blocks:
        if b.rows != rows:
            raise InvalidInput("hstack row mismatch")
        for i in range(rows):
            data[i].extend(b.data[i])
    cols = sum(b.cols for b in blocks)
    return Matrix(ring, rows, cols, tuple(map(tuple, data)))


def vstack(ring: RingSpec, cols: int, blocks) -> Matrix:
    data = []
    for b in blocks:
        if b.cols != cols:
            raise InvalidInput("vstack column mismatch")
        data.extend(b.data)
    return Matrix(ring, len(data), cols, tuple(data))


def block_diag(ring: RingSpec, blocks) -> Matrix:
    entries = {}
    r0 = c0 = 0
    for b in blocks:
        for i, j, x in b.nonzero_entries():
            entries[(r0 + i, c0 + j)] = x
        r0 += b.rows
        c0 += b.cols
    return Matrix.from_sparse(ring, r0, c0, entries)
