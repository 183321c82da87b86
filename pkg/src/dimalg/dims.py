"""Dimension vectors in Z^m and additive maps between them."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import InconsistentIdentification, ShapeMismatch


class DimVector:
    """An element of Z^m; the slice tag of a power-ring element."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[int] = ()):
        self.entries = tuple(int(e) for e in entries)

    @classmethod
    def zero(cls, m: int) -> "DimVector":
        return cls((0,) * m)

    @classmethod
    def basis(cls, m: int, i: int) -> "DimVector":
        return cls(1 if j == i else 0 for j in range(m))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if isinstance(other, DimVector):
            return self.entries == other.entries
        if isinstance(other, tuple):
            return self.entries == other
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def _check(self, other: "DimVector"):
        if len(other) != len(self):
            raise ShapeMismatch(f"dimension vectors of lengths {len(self)} and {len(other)}")

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "DimVector":
        return DimVector(-a for a in self.entries)

    def __mul__(self, k: int) -> "DimVector":
        return DimVector(k * a for a in self.entries)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return f"DimVector({list(self.entries)})"

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.entries) + "]"


class DimMap:
    """Additive map Z^m -> Z^n given by an n x m integer matrix."""

    __slots__ = ("source_m", "target_n", "matrix")

    def __init__(self, source_m: int, target_n: int, matrix: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        if len(rows) != target_n or any(len(r) != source_m for r in rows):
            raise ShapeMismatch(f"matrix is not {target_n}x{source_m}")
        self.source_m = source_m
        self.target_n = target_n
        self.matrix = rows

    @classmethod
    def identity(cls, m: int) -> "DimMap":
        return cls(m, m, [[int(i == j) for j in range(m)] for i in range(m)])

    @classmethod
    def zero(cls, m: int, n: int) -> "DimMap":
        return cls(m, n, [[0] * m for _ in range(n)])

    def __call__(self, v: DimVector) -> DimVector:
        if len(v) != self.source_m:
            raise ShapeMismatch(f"vector of length {len(v)} fed to map from Z^{self.source_m}")
        return DimVector(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def __eq__(self, other):
        if not isinstance(other, DimMap):
            return NotImplemented
        return (self.source_m, self.target_n, self.matrix) == (other.source_m, other.target_n, other.matrix)

    def __hash__(self):
        return hash((self.source_m, self.target_n, self.matrix))

    def __repr__(self):
        return f"DimMap({self.source_m}->{self.target_n}, {[list(r) for r in self.matrix]})"

    def transpose(self) -> "DimMap":
        return DimMap(self.target_n, self.source_m, list(zip(*self.matrix)) if self.matrix else [[] for _ in range(self.source_m)])


def compose(f: DimMap, g: DimMap) -> DimMap:
    """The map f after g."""
    if f.source_m != g.target_n:
        raise ShapeMismatch(f"cannot compose Z^{f.source_m}->Z^{f.target_n} after Z^{g.source_m}->Z^{g.target_n}")
    rows = [
        [sum(f.matrix[i][k] * g.matrix[k][j] for k in range(f.source_m)) for j in range(g.source_m)]
        for i in range(f.target_n)
    ]
    return DimMap(g.source_m, f.target_n, rows)


def tensor_dim_set(m: int, n: int, identified: Iterable[tuple[int, int]] = ()) -> tuple[DimMap, DimMap]:
    """Quotient maps Z^m -> Z^k <- Z^n merging identified coordinate pairs.

    Each pair ``(i, j)`` identifies coordinate i of the left factor with
    coordinate j of the right one.  Coordinates of the quotient follow
    the first left (then right) coordinate of each merged class.
    Identifying two coordinates of the same factor, directly or through
    a chain, is rejected.
    """
    parent = list(range(m + n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in identified:
        if not (0 <= i < m and 0 <= j < n):
            raise InconsistentIdentification(f"pair ({i}, {j}) out of range for Z^{m} x Z^{n}")
        a, b = find(i), find(m + j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    classes: dict[int, int] = {}
    for node in range(m + n):
        classes.setdefault(find(node), len(classes))
    members: dict[int, list[int]] = {}
    for node in range(m + n):
        members.setdefault(find(node), []).append(node)
    for group in members.values():
        if sum(1 for node in group if node < m) > 1 or sum(1 for node in group if node >= m) > 1:
            raise InconsistentIdentification("identification merges two coordinates of one factor")
    k = len(classes)
    left = [[0] * m for _ in range(k)]
    right = [[0] * n for _ in range(k)]
    for node in range(m + n):
        c = classes[find(node)]
        if node < m:
            left[c][node] = 1
        else:
            right[c][node - m] = 1
    return DimMap(m, k, left), DimMap(n, k, right)
