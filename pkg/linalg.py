"""Dense exact-rational linear algebra.

Everything is Gaussian elimination over ``fractions.Fraction``; the pivot in
each column is the candidate entry with the largest absolute numerator
(ties go to the upper row). There is no tolerance anywhere.
"""
import logging
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from errors import PreconditionError

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


def _pivot_row(rows: List[List[Fraction]], column: int, start: int) -> Optional[int]:
    best = None
    for r in range(start, len(rows)):
        entry = rows[r][column]
        if entry == 0:
            continue
        if best is None or abs(entry.numerator) > abs(rows[best][column].numerator):
            best = r
    return best


def _reduce(rows: List[List[Fraction]], ncols: int) -> List[int]:
    """Bring ``rows`` to reduced row echelon form in place over the first ``ncols`` columns.

    Returns the pivot columns in order.
    """
    pivots = []
    pivot_row = 0
    for column in range(ncols):
        if pivot_row == len(rows):
            break
        r = _pivot_row(rows, column, pivot_row)
        if r is None:
            continue
        rows[pivot_row], rows[r] = rows[r], rows[pivot_row]
        head = rows[pivot_row][column]
        rows[pivot_row] = [x / head for x in rows[pivot_row]]
        for other in range(len(rows)):
            if other == pivot_row:
                continue
            factor = rows[other][column]
            if factor != 0:
                source = rows[pivot_row]
                rows[other] = [x - factor * y for x, y in zip(rows[other], source)]
        pivots.append(column)
        pivot_row += 1
    return pivots


class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Iterable[Iterable], cols: Optional[int] = None):
        data = tuple(tuple(Fraction(x) for x in row) for row in entries)
        if cols is None:
            if not data:
                raise ValueError("cols is required for a matrix without rows")
            cols = len(data[0])
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {cols}")
        self.rows = len(data)
        self.cols = cols
        self._entries = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._entries[i][j]

    def row(self, i: int) -> Vector:
        return self._entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self._entries)

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self._entries]

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.cols, self._entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._entries)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([self.column(j) for j in range(self.cols)], cols=self.rows)

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        columns = [other.column(j) for j in range(other.cols)]
        return RationalMatrix(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in columns] for row in self._entries],
            cols=other.cols,
        )

    __matmul__ = matmul

    def apply(self, vector: Sequence) -> Vector:
        """Matrix-vector product"""
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} for {self.cols} columns")
        return tuple(sum((a * Fraction(x) for a, x in zip(row, vector)), Fraction(0)) for row in self._entries)

    def scale_columns(self, weights: Sequence) -> "RationalMatrix":
        return RationalMatrix(
            [[a * Fraction(w) for a, w in zip(row, weights)] for row in self._entries], cols=self.cols
        )

    def select_rows(self, indices: Iterable[int]) -> "RationalMatrix":
        return RationalMatrix([self._entries[i] for i in indices], cols=self.cols)

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.cols:
            raise ValueError(f"cannot stack {self.shape} on {other.shape}")
        return RationalMatrix(self._entries + other._entries, cols=self.cols)

    def rref(self) -> Tuple["RationalMatrix", Tuple[int, ...]]:
        rows = self.to_lists()
        pivots = _reduce(rows, self.cols)
        return RationalMatrix(rows, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        return len(_reduce(self.to_lists(), self.cols))

    def kernel_basis(self) -> List[Vector]:
        """Basis of the right null space, one vector per free column"""
        rows = self.to_lists()
        pivots = _reduce(rows, self.cols)
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            vector = [Fraction(0)] * self.cols
            vector[free] = Fraction(1)
            for r, p in enumerate(pivots):
                vector[p] = -rows[r][free]
            basis.append(tuple(vector))
        return basis

    def solve(self, rhs: Sequence) -> Optional[Vector]:
        """One solution of ``self @ x = rhs`` with free variables at zero, or None if inconsistent"""
        if len(rhs) != self.rows:
            raise ValueError(f"right-hand side of length {len(rhs)} for {self.rows} rows")
        rows = [list(row) + [Fraction(b)] for row, b in zip(self._entries, rhs)]
        pivots = _reduce(rows, self.cols)
        for row in rows[len(pivots):]:
            if row[-1] != 0:
                return None
        solution = [Fraction(0)] * self.cols
        for r, p in enumerate(pivots):
            solution[p] = rows[r][-1]
        return tuple(solution)

    def inverse(self) -> "RationalMatrix":
        if self.rows != self.cols:
            raise PreconditionError(f"cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        rows = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(self._entries)]
        pivots = _reduce(rows, n)
        if len(pivots) < n:
            raise PreconditionError("matrix is singular")
        return RationalMatrix([row[n:] for row in rows], cols=n)


def rank(m: RationalMatrix) -> int:
    return m.rank()


def kernel_basis(m: RationalMatrix) -> List[Vector]:
    return m.kernel_basis()


class EchelonBasis:
    """Incrementally grown row space, used to pick independent rows greedily.

    Stored rows are normalized to pivot 1 and reduced against every earlier
    pivot, so reducing a candidate in insertion order clears all pivots.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: List[Tuple[int, List[Fraction]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vector: Sequence) -> List[Fraction]:
        residual = [Fraction(x) for x in vector]
        for pivot, row in self._rows:
            factor = residual[pivot]
            if factor != 0:
                residual = [x - factor * y for x, y in zip(residual, row)]
        return residual

    def contains(self, vector: Sequence) -> bool:
        return not any(self.reduce(vector))

    def add(self, vector: Sequence) -> bool:
        """Add ``vector`` if it is independent of the basis; report whether it was added"""
        if len(vector) != self.ncols:
            raise ValueError(f"vector of length {len(vector)} for {self.ncols} columns")
        residual = self.reduce(vector)
        pivot = next((j for j, x in enumerate(residual) if x != 0), None)
        if pivot is None:
            return False
        head = residual[pivot]
        self._rows.append((pivot, [x / head for x in residual]))
        return True


def primitive_integer_vector(vector: Sequence) -> Vector:
    """Scale a nonzero rational vector to coprime integers with a positive first nonzero entry"""
    values = [Fraction(x) for x in vector]
    nonzero = [x for x in values if x != 0]
    if not nonzero:
        raise ValueError("zero vector has no primitive form")
    scale = 1
    for x in nonzero:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    integers = [int(x * scale) for x in values]
    divisor = 0
    for x in integers:
        divisor = gcd(divisor, abs(x))
    if nonzero[0] < 0:
        divisor = -divisor
    return tuple(Fraction(x, divisor) for x in integers)


def is_constant(vector: Sequence) -> bool:
    return all(x == vector[0] for x in vector)
