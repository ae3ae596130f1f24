"""
Fixed lines and isotropy subgroups of real representations over Q(sqrt 2).

Every element of a finite group acts orthogonally, so its only real
eigenvalues are +1 and -1, and a line is fixed exactly when it lies in one of
the two eigenspaces. All rotation angles in use are multiples of pi/4, whose
sines and cosines live in Q(sqrt 2), so the whole analysis is exact.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class OrderMismatch(ValueError):
    """Raised when the generated group does not have the declared order"""


class NotASubgroup(ValueError):
    """Raised when a set of elements is not closed under multiplication"""


class IsotropyNotInFamily(ValueError):
    """Raised when some isotropy group is not elementary abelian"""


class NotOrthogonal(ValueError):
    """Raised when a generator matrix is not orthogonal"""


# ========================= Q(sqrt 2) =========================

class QSqrt2:
    """The number a + b*sqrt(2) with a, b rational"""

    __slots__ = ("_a", "_b")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def from_int(cls, x: int) -> QSqrt2:
        return cls(x, 0)

    @classmethod
    def parse(cls, pair: Sequence[Union[int, str]]) -> QSqrt2:
        """Read [a, b]; each part may be an int or a string like '-1/2'."""
        if len(pair) != 2:
            raise ValueError(f"Expected an (a, b) pair, got {pair!r}")
        return cls(Fraction(str(pair[0])), Fraction(str(pair[1])))

    def __repr__(self) -> str:
        return f"QSqrt2({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return f"{self._b}√2"
        sign = "+" if self._b > 0 else "-"
        return f"{self._a}{sign}{abs(self._b)}√2"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self._a == other and self._b == 0
        if isinstance(other, QSqrt2):
            return self._a == other._a and self._b == other._b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __add__(self, other: Union[int, QSqrt2]) -> QSqrt2:
        if isinstance(other, int):
            other = QSqrt2.from_int(other)
        return QSqrt2(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __neg__(self) -> QSqrt2:
        return QSqrt2(-self._a, -self._b)

    def __sub__(self, other: Union[int, QSqrt2]) -> QSqrt2:
        return self + (-other)

    def __rsub__(self, other: int) -> QSqrt2:
        return (-self) + other

    def __mul__(self, other: Union[int, QSqrt2]) -> QSqrt2:
        if isinstance(other, int):
            other = QSqrt2.from_int(other)
        return QSqrt2(self._a * other._a + 2 * self._b * other._b,
                      self._a * other._b + self._b * other._a)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt2:
        return QSqrt2(self._a, -self._b)

    def norm(self) -> Fraction:
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self) -> QSqrt2:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("0 has no inverse in Q(sqrt 2)")
        c = self.conjugate()
        return QSqrt2(c._a / n, c._b / n)

    def __truediv__(self, other: Union[int, QSqrt2]) -> QSqrt2:
        if isinstance(other, int):
            other = QSqrt2.from_int(other)
        return self * other.inverse()


ZERO = QSqrt2(0)
ONE = QSqrt2(1)

Vector = Tuple[QSqrt2, ...]
Matrix = Tuple[Tuple[QSqrt2, ...], ...]


# ========================= Matrices =========================

def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), ZERO) for col in cols) for row in a)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), ZERO) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def scaled_identity_minus(a: Matrix, c: int) -> Matrix:
    """a - c*I."""
    return tuple(tuple(x - c if i == j else x for j, x in enumerate(row)) for i, row in enumerate(a))


def is_orthogonal(a: Matrix) -> bool:
    return mat_mul(transpose(a), a) == identity_matrix(len(a))


def parse_matrix(rows: Sequence[Sequence[Sequence[Union[int, str]]]]) -> Matrix:
    return tuple(tuple(QSqrt2.parse(entry) for entry in row) for row in rows)


def format_matrix(a: Matrix) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in a) + "]"


# ========================= Row reduction =========================

def rref(rows: Sequence[Vector]) -> List[Vector]:
    """Non-zero rows of the reduced row echelon form."""
    m = [list(r) for r in rows]
    out_rank = 0
    width = len(m[0]) if m else 0
    for col in range(width):
        pivot = next((i for i in range(out_rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[out_rank], m[pivot] = m[pivot], m[out_rank]
        inv = m[out_rank][col].inverse()
        m[out_rank] = [x * inv for x in m[out_rank]]
        for i in range(len(m)):
            if i != out_rank and m[i][col]:
                factor = m[i][col]
                m[i] = [x - factor * y for x, y in zip(m[i], m[out_rank])]
        out_rank += 1
    return [tuple(r) for r in m[:out_rank]]


def nullspace(a: Sequence[Vector], width: int) -> List[Vector]:
    """Basis of {v : a v = 0} for a matrix with `width` columns."""
    reduced = rref(a)
    pivots = []
    for row in reduced:
        pivots.append(next(j for j, x in enumerate(row) if x))
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * width
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q(sqrt 2)^n held by its reduced row echelon basis"""
    basis: Tuple[Vector, ...]
    ambient: int

    @classmethod
    def span(cls, vectors: Sequence[Vector], ambient: int) -> Subspace:
        return cls(tuple(rref(vectors)) if vectors else (), ambient)

    @classmethod
    def kernel(cls, a: Matrix) -> Subspace:
        return cls.span(nullspace(a, len(a[0])), len(a[0]))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def equations(self) -> List[Vector]:
        """Rows of a matrix whose kernel is this subspace."""
        return nullspace(self.basis, self.ambient) if self.basis else \
            [tuple(ONE if i == j else ZERO for j in range(self.ambient)) for i in range(self.ambient)]

    def contains(self, v: Vector) -> bool:
        return all(not sum((x * y for x, y in zip(eq, v)), ZERO) for eq in self.equations())

    def issubspace(self, other: Subspace) -> bool:
        eqs = other.equations()
        return all(not sum((x * y for x, y in zip(eq, v)), ZERO) for v in self.basis for eq in eqs)

    def intersection(self, other: Subspace) -> Subspace:
        eqs = self.equations() + other.equations()
        if not eqs:
            return self
        return Subspace.span(nullspace(eqs, self.ambient), self.ambient)

    def __str__(self) -> str:
        return "span{" + ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.basis) + "}"


# ========================= Groups =========================

_WORD_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _compress(word: Sequence[str]) -> str:
    if not word:
        return "e"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(word[i] if j - i == 1 else f"{word[i]}^{j - i}")
        i = j
    return " ".join(parts)


@dataclass(frozen=True)
class RepMatrixGroup:
    """A finite matrix group with shortest-word labels, identity first"""
    generators: Tuple[Tuple[str, Matrix], ...]
    labels: Tuple[str, ...]
    matrices: Tuple[Matrix, ...]

    @property
    def order(self) -> int:
        return len(self.matrices)

    @property
    def dimension(self) -> int:
        return len(self.matrices[0])

    def index_of(self, m: Matrix) -> int:
        try:
            return self.matrices.index(m)
        except ValueError:
            raise NotASubgroup(f"Matrix {format_matrix(m)} is not an element of the group") from None

    def label_of(self, m: Matrix) -> str:
        return self.labels[self.index_of(m)]

    def element(self, word: str) -> Matrix:
        """
        Evaluate a word such as 'f r^4' or 's r s^-1' left to right; 'e' and
        '1' denote the identity.
        """
        gens = dict(self.generators)
        result = identity_matrix(self.dimension)
        for factor in word.replace("*", " ").split():
            if factor in ("e", "1"):
                continue
            match = _WORD_FACTOR.match(factor)
            if not match or match.group(1) not in gens:
                raise ValueError(f"Cannot read factor {factor!r} of word {word!r}")
            power = int(match.group(2) or 1)
            g = gens[match.group(1)]
            if power < 0:
                g, power = transpose(g), -power
            for _ in range(power):
                result = mat_mul(result, g)
        return result

    def subgroup(self, words: Iterable[str]) -> FrozenSet[int]:
        """Element indices of the given words."""
        return frozenset(self.index_of(self.element(w)) for w in words)

    def generated(self, words: Iterable[str]) -> FrozenSet[int]:
        """Element indices of the subgroup generated by the given words."""
        members = {0}
        frontier = [self.element(w) for w in words]
        gens = list(frontier)
        seen = {self.matrices[0]}
        while frontier:
            m = frontier.pop()
            if m in seen:
                continue
            seen.add(m)
            members.add(self.index_of(m))
            frontier.extend(mat_mul(m, g) for g in gens)
        return frozenset(members)

    def format_set(self, members: Iterable[int]) -> List[str]:
        return [self.labels[i] for i in sorted(members)]


def group_closure(generators: Sequence[Tuple[str, Matrix]], expected_order: int,
                  max_order: Optional[int] = None) -> RepMatrixGroup:
    """
    Breadth-first closure of the generators; each element is labelled by a
    shortest word (generators appended on the right).

    Raises:
        NotOrthogonal: if a generator is not orthogonal
        OrderMismatch: if the closure does not have expected_order elements
    """
    if not generators:
        raise ValueError("group_closure needs at least one generator")
    n = len(generators[0][1])
    for name, m in generators:
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError(f"Generator {name} is not {n}x{n}")
        if not is_orthogonal(m):
            raise NotOrthogonal(f"Generator {name} is not orthogonal: {format_matrix(m)}")
    cap = max(expected_order, max_order or expected_order)
    ident = identity_matrix(n)
    words: Dict[Matrix, Tuple[str, ...]] = {ident: ()}
    queue = deque([ident])
    while queue:
        m = queue.popleft()
        for name, g in generators:
            product = mat_mul(m, g)
            if product not in words:
                words[product] = words[m] + (name,)
                queue.append(product)
                if len(words) > cap:
                    raise OrderMismatch(f"Closure exceeds {cap} elements, expected {expected_order}")
    if len(words) != expected_order:
        raise OrderMismatch(f"Closure has {len(words)} elements, expected {expected_order}")
    matrices = tuple(words)
    logger.debug(f"Closed {len(generators)} generators to a group of order {len(matrices)}")
    return RepMatrixGroup(tuple(generators), tuple(_compress(words[m]) for m in matrices), matrices)


# ========================= Fixed lines =========================

def fixed_line_components(g: Matrix) -> List[Subspace]:
    """Non-zero eigenspaces ker(g - I) and ker(g + I), in that order."""
    components = []
    for eigenvalue in (1, -1):
        space = Subspace.kernel(scaled_identity_minus(g, eigenvalue))
        if space.dim:
            components.append(space)
    return components


def _fixes_lines_of(g: Matrix, s: Subspace) -> bool:
    return any(s.issubspace(c) for c in fixed_line_components(g))


@dataclass(frozen=True)
class IsotropyPair:
    """A subspace together with the stabilizer of a generic line in it"""
    subspace: Subspace
    stabilizer: FrozenSet[int]


def isotropy_subgroups(rep: RepMatrixGroup) -> List[IsotropyPair]:
    """
    Eigenspace components of all non-identity elements, closed under
    intersection, each paired with the stabilizer of a generic line; pairs
    dominated by a larger subspace with at least the same stabilizer are
    dropped.
    """
    components = {}
    spaces: List[Subspace] = []
    for m in rep.matrices[1:]:
        for c in fixed_line_components(m):
            if c.basis not in components:
                components[c.basis] = c
                spaces.append(c)
    changed = True
    while changed:
        changed = False
        for i in range(len(spaces)):
            for j in range(i + 1, len(spaces)):
                meet = spaces[i].intersection(spaces[j])
                if meet.dim and meet.basis not in components:
                    components[meet.basis] = meet
                    spaces.append(meet)
                    changed = True
    eigen = [fixed_line_components(m) for m in rep.matrices]
    pairs = []
    for s in spaces:
        stab = frozenset([0] + [k for k in range(1, rep.order) if any(s.issubspace(c) for c in eigen[k])])
        pairs.append(IsotropyPair(s, stab))
    kept = []
    for p in pairs:
        dominated = any(q is not p and p.subspace.issubspace(q.subspace) and p.stabilizer <= q.stabilizer
                        and (q.subspace.dim > p.subspace.dim or q.stabilizer > p.stabilizer)
                        for q in pairs)
        if not dominated:
            kept.append(p)
    logger.debug(f"{len(spaces)} candidate subspaces, {len(kept)} isotropy pairs kept")
    return kept


def distinct_stabilizers(pairs: Sequence[IsotropyPair]) -> List[FrozenSet[int]]:
    out: List[FrozenSet[int]] = []
    for p in pairs:
        if p.stabilizer not in out:
            out.append(p.stabilizer)
    return sorted(out, key=lambda st: (len(st), sorted(st)))


def maximal_isotropy_groups(pairs: Sequence[IsotropyPair]) -> List[FrozenSet[int]]:
    """Stabilizers not strictly contained in another stabilizer."""
    stabs = distinct_stabilizers(pairs)
    return [st for st in stabs if not any(st < other for other in stabs)]


def elementary_abelian_check(rep: RepMatrixGroup, subgroup: Iterable[Union[int, str]]) -> bool:
    """
    True iff every element squares to the identity and all pairs commute.

    Raises:
        NotASubgroup: if the set is not closed under multiplication
    """
    members = {rep.index_of(rep.element(x)) if isinstance(x, str) else x for x in subgroup}
    mats = [rep.matrices[i] for i in sorted(members)]
    for a in mats:
        for b in mats:
            if rep.index_of(mat_mul(a, b)) not in members:
                raise NotASubgroup(f"{rep.format_set(members)} is not closed under multiplication")
    ident = rep.matrices[0]
    return all(mat_mul(a, a) == ident for a in mats) and \
        all(mat_mul(a, b) == mat_mul(b, a) for a in mats for b in mats)


def projective_exponent_bound(rep: RepMatrixGroup, field_type: Literal["real", "complex"] = "real",
                              pairs: Optional[Sequence[IsotropyPair]] = None) -> int:
    """
    cn - c + 1 for V of real dimension cn (c = 1 real, c = 2 complex, n the
    matrix size), valid when all isotropy is elementary abelian.

    Raises:
        IsotropyNotInFamily: if some stabilizer is not elementary abelian
    """
    pairs = isotropy_subgroups(rep) if pairs is None else pairs
    for stab in distinct_stabilizers(pairs):
        if not elementary_abelian_check(rep, stab):
            raise IsotropyNotInFamily(f"Isotropy group {rep.format_set(stab)} is not elementary abelian")
    c = 1 if field_type == "real" else 2
    n = rep.dimension
    return c * n - c + 1


# ========================= Reports =========================

class IsotropyEntry(BaseModel):
    """One subspace and its stabilizer, by element labels"""
    dim: int
    basis: List[str]
    stabilizer: List[str]


class IsotropyReport(BaseModel):
    """Isotropy analysis of one representation"""
    name: str = Field(..., description="Fixture name")
    order: int = Field(..., description="Group order")
    pairs: List[IsotropyEntry] = Field(default=[], description="Subspaces with their stabilizers")
    stabilizers: List[List[str]] = Field(default=[], description="Distinct stabilizers")
    maximal: List[List[str]] = Field(default=[], description="Maximal stabilizers")
    elementary_abelian: bool = Field(default=False, description="All stabilizers elementary abelian")
    bound: Optional[int] = Field(default=None, description="Projective exponent bound, if defined")


def isotropy_report(name: str, rep: RepMatrixGroup) -> IsotropyReport:
    pairs = isotropy_subgroups(rep)
    stabs = distinct_stabilizers(pairs)
    ok = all(elementary_abelian_check(rep, st) for st in stabs)
    return IsotropyReport(
        name=name,
        order=rep.order,
        pairs=[IsotropyEntry(dim=p.subspace.dim,
                             basis=["(" + ", ".join(str(x) for x in v) + ")" for v in p.subspace.basis],
                             stabilizer=rep.format_set(p.stabilizer)) for p in pairs],
        stabilizers=[rep.format_set(st) for st in stabs],
        maximal=[rep.format_set(st) for st in maximal_isotropy_groups(pairs)],
        elementary_abelian=ok,
        bound=projective_exponent_bound(rep, pairs=pairs) if ok else None,
    )
