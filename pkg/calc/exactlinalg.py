"""
Exact integer matrix arithmetic and Smith normal form.

Entries are plain Python ints, so there is no magnitude bound: intermediate
values during elimination can grow well past the 0/1 inputs of the cokernel
pipeline without overflow.
"""

import logging
import time
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


class MatrixShapeError(ValueError):
    """Raised when matrix data does not match its declared shape or an index is out of range"""


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense row-major matrix of arbitrary-precision integers"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise MatrixShapeError(f"Negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise MatrixShapeError(
                f"Expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        """Build a matrix from a list of rows; cols is required only when rows is empty."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise MatrixShapeError(f"Row {i} has {len(row)} entries, expected {cols}")
        return cls(len(rows), cols, tuple(int(x) for row in rows for x in row))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)], cols=size)

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntegerMatrix":
        size = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(size)] for i in range(size)], cols=size)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise MatrixShapeError(f"Index ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        """Mutable copy as a list of row lists."""
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows([list(col) for col in zip(*self.to_rows())], cols=self.rows) \
            if self.rows else IntegerMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise MatrixShapeError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        right_cols = list(zip(*other.to_rows())) if other.rows else [()] * other.cols
        product = [[sum(a * b for a, b in zip(row, col)) for col in right_cols] for row in self.to_rows()]
        return IntegerMatrix.from_rows(product, cols=other.cols)

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "IntegerMatrix":
        rows = self.to_rows()
        return IntegerMatrix.from_rows([[rows[i][j] for j in col_order] for i in row_order], cols=len(col_order))

    def with_row_negated(self, i: int) -> "IntegerMatrix":
        rows = self.to_rows()
        rows[i] = [-x for x in rows[i]]
        return IntegerMatrix.from_rows(rows, cols=self.cols)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> List[List[int]]:
        c = self.cols
        return [[self.entries[i * c + j] for j in col_idx] for i in row_idx]


@dataclass(frozen=True)
class SmithForm:
    """Diagonal of a Smith normal form: d1 | d2 | ... with zeros last"""
    divisors: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)

    def counts(self) -> dict:
        """Multiplicity of each divisor value, keys ascending with 0 (if any) last."""
        tally = {}
        for d in self.divisors:
            tally[d] = tally.get(d, 0) + 1
        return dict(sorted(tally.items(), key=lambda kv: (kv[0] == 0, kv[0])))

    def is_chain(self) -> bool:
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b != 0 and (a == 0 or b % a != 0):
                return False
            if a == 0 and b != 0:
                return False
        return all(d >= 0 for d in self.divisors)


# ========================= Determinants and minors =========================

def determinant(square: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(square)
    if n == 0:
        return 1
    a = [list(row) for row in square]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def minor_gcd(m: IntegerMatrix, k: int) -> int:
    """
    Gcd of all k x k minors of m (0 if every minor vanishes).

    Combinatorial cost; intended as an oracle on small matrices.

    Raises:
        MatrixShapeError: if k is not in 1..min(rows, cols)
    """
    if not 1 <= k <= min(m.rows, m.cols):
        raise MatrixShapeError(f"Minor size {k} out of range for a {m.rows}x{m.cols} matrix")
    g = 0
    for row_idx in combinations(range(m.rows), k):
        for col_idx in combinations(range(m.cols), k):
            g = gcd(g, determinant(m.submatrix(row_idx, col_idx)))
            if g == 1:
                return 1
    return g


# ========================= Smith normal form =========================

def _min_pivot(rows: List[List[int]]) -> Optional[Tuple[int, int]]:
    best = None
    best_abs = 0
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x and (best is None or abs(x) < best_abs):
                best, best_abs = (i, j), abs(x)
                if best_abs == 1:
                    return best
    return best


def _diagonalize(rows: List[List[int]]) -> List[int]:
    """
    Reduce rows in place to a diagonal by unimodular row and column operations.
    Returns the absolute values of the diagonal, one per eliminated pivot.
    """
    diagonal = []
    while rows and rows[0]:
        pos = _min_pivot(rows)
        if pos is None:
            break
        r, c = pos
        while True:
            pivot = rows[r][c]
            prow = rows[r]
            column_clear = True
            for i in range(len(rows)):
                if i == r:
                    continue
                row = rows[i]
                x = row[c]
                if x == 0:
                    continue
                q = x // pivot
                rows[i] = row = [a - q * b for a, b in zip(row, prow)]
                if row[c] != 0:
                    column_clear = False
            if column_clear:
                # only the pivot row is non-zero in column c, so column
                # operations touch nothing but the pivot row
                row_clear = True
                for j, x in enumerate(prow):
                    if j == c or x == 0:
                        continue
                    prow[j] = x - (x // pivot) * pivot
                    if prow[j] != 0:
                        row_clear = False
                if row_clear:
                    break
            pos = _min_pivot(rows)
            r, c = pos
        diagonal.append(abs(rows[r][c]))
        del rows[r]
        for row in rows:
            del row[c]
    return diagonal


def _invariant_factors(diagonal: List[int]) -> List[int]:
    d = list(diagonal)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            if a == 0 and b == 0:
                continue
            g = gcd(a, b)
            d[i], d[j] = g, (a * b // g)
    return d


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    """
    Diagonal of the Smith normal form of m.

    Pivot selection takes the non-zero entry of least absolute value and the
    scan restarts after every elimination round. The diagonal obtained this way
    is then normalised into a divisibility chain by pairwise gcd/lcm exchange.

    Returns:
        SmithForm with min(rows, cols) non-negative divisors, zeros last.
    """
    size = min(m.rows, m.cols)
    started = time.perf_counter()
    work = m.to_rows()
    diagonal = _diagonalize(work)
    diagonal.extend([0] * (size - len(diagonal)))
    divisors = _invariant_factors(diagonal)
    logger.debug(f"SNF of {m.rows}x{m.cols} matrix: rank {size - divisors.count(0)} "
                 f"in {time.perf_counter() - started:.3f}s")
    return SmithForm(tuple(divisors))


def agrees_with_minors(m: IntegerMatrix, form: Optional[SmithForm] = None) -> bool:
    """
    True iff d1 * ... * dk equals the gcd of the k x k minors for every k,
    the invariant that pins the Smith form down uniquely.
    """
    form = smith_normal_form(m) if form is None else form
    if not form.is_chain():
        return False
    product = 1
    for k, d in enumerate(form.divisors, start=1):
        product *= d
        if minor_gcd(m, k) != product:
            return False
    return True
