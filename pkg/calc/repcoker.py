"""
Edge-map cokernels for representation rings of elementary abelian p-groups.

The pipeline pairs every cyclic-subgroup generator g with every non-zero
element v of C_p^n (value g.v mod p), expands each residue k != 0 into a
0/1 indicator row, and reads the cokernel off the Smith normal form of the
resulting square matrix of size p^n - 1.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from ConfigService import ConfigService
from elemabelian import (
    FpVector,
    GroupSpec,
    Normalization,
    cyclic_subgroup_generators,
    dot,
    nonzero_elements,
)
from exactlinalg import IntegerMatrix, smith_normal_form
from series import qnomial

logger = logging.getLogger(__name__)


class ZeroDivisorError(ArithmeticError):
    """Raised when the edge matrix is rank-deficient, i.e. the cokernel has a free summand"""


class InfeasibleInstanceError(ValueError):
    """Raised when p^n - 1 exceeds the configured size ceiling"""


# ========================= Types =========================

@dataclass(frozen=True)
class PairingMatrix:
    """Residues g.v mod p; rows are cyclic-subgroup generators, columns non-zero elements"""
    spec: GroupSpec
    generators: Tuple[FpVector, ...]
    elements: Tuple[FpVector, ...]
    values: Tuple[Tuple[int, ...], ...]

    def __getitem__(self, index: Tuple[int, int]) -> int:
        row, col = index
        return self.values[row][col]


@dataclass(frozen=True)
class AbelianGroupType:
    """Finite abelian p-group as {order: multiplicity}; order 1 entries are kept"""
    p: int
    counts: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for order, mult in self.counts.items():
            if mult < 1:
                raise ValueError(f"Multiplicity of Z/{order} must be positive, got {mult}")
            if _p_log(order, self.p) is None:
                raise ValueError(f"Order {order} is not a power of {self.p}")
        object.__setattr__(self, "counts", dict(sorted(self.counts.items())))

    @property
    def summand_count(self) -> int:
        return sum(self.counts.values())

    def by_exponent(self) -> Dict[int, int]:
        """Multiplicities keyed by k for summands Z/p^k."""
        return {_p_log(order, self.p): mult for order, mult in self.counts.items()}

    def to_json(self) -> Dict[str, int]:
        return {str(order): mult for order, mult in self.counts.items()}

    def __str__(self) -> str:
        if not self.counts:
            return "0"
        parts = []
        for order, mult in sorted(self.counts.items(), reverse=True):
            parts.append(f"(Z/{order})^{mult}" if mult > 1 else f"Z/{order}")
        return " + ".join(parts)


@dataclass(frozen=True, order=True)
class SubsetIndex:
    """A non-empty subset J of {1..n}, ordered by size and then lexicographically"""
    size: int
    members: Tuple[int, ...]

    @classmethod
    def of(cls, members: Sequence[int], n: int) -> "SubsetIndex":
        ms = tuple(sorted(set(members)))
        if not ms:
            raise ValueError("Subset index must be non-empty")
        if ms[0] < 1 or ms[-1] > n:
            raise ValueError(f"Subset members must lie in 1..{n}, got {ms}")
        return cls(len(ms), ms)

    def issubset(self, other: "SubsetIndex") -> bool:
        return set(self.members) <= set(other.members)


def _p_log(value: int, p: int) -> Optional[int]:
    k = 0
    while value > 1 and value % p == 0:
        value //= p
        k += 1
    return k if value == 1 else None


# ========================= Pipeline =========================

def pairing_matrix(spec: GroupSpec, normalization: Normalization = Normalization.LEFTMOST) -> PairingMatrix:
    """Generator-by-element matrix of dot products mod p (A^T B mod p)."""
    if spec.n < 1:
        raise ValueError("pairing_matrix needs n >= 1")
    gens = tuple(cyclic_subgroup_generators(spec, normalization))
    elems = tuple(nonzero_elements(spec))
    values = tuple(tuple(dot(g, v, spec.p) for v in elems) for g in gens)
    return PairingMatrix(spec, gens, elems, values)


def expand_character_matrix(c: PairingMatrix) -> IntegerMatrix:
    """
    Square 0/1 matrix of size p^n - 1: residue k != 0 at (row, col) becomes a 1
    at row (k - 1) + (p - 1) * row of the same column.
    """
    p = c.spec.p
    size = len(c.elements)
    if len(c.generators) * (p - 1) != size:
        raise ValueError(f"Pairing matrix has {len(c.generators)} rows, expected {size // (p - 1)}")
    d = [[0] * size for _ in range(size)]
    for row, values in enumerate(c.values):
        for col, k in enumerate(values):
            if k:
                d[(k - 1) + (p - 1) * row][col] = 1
    return IntegerMatrix.from_rows(d, cols=size)


def check_feasible(spec: GroupSpec, size_ceiling: Optional[int] = None) -> None:
    ceiling = ConfigService().get_size_ceiling() if size_ceiling is None else size_ceiling
    if spec.order - 1 > ceiling:
        raise InfeasibleInstanceError(
            f"(p={spec.p}, n={spec.n}) needs a {spec.order - 1}x{spec.order - 1} matrix, "
            f"above the ceiling {ceiling}"
        )


def cokernel_structure(spec: GroupSpec,
                       normalization: Normalization = Normalization.LEFTMOST,
                       size_ceiling: Optional[int] = None) -> AbelianGroupType:
    """
    The cokernel Q_{p,n} as counts of elementary divisors (Z/1 included).

    Raises:
        InfeasibleInstanceError: if p^n - 1 exceeds the size ceiling
        ZeroDivisorError: if a divisor is 0
    """
    if spec.n < 1:
        raise ValueError("cokernel_structure needs n >= 1")
    check_feasible(spec, size_ceiling)
    started = time.perf_counter()
    d = expand_character_matrix(pairing_matrix(spec, normalization))
    logger.debug(f"Built {d.rows}x{d.cols} edge matrix for (p={spec.p}, n={spec.n})")
    snf = smith_normal_form(d)
    if snf.rank < len(snf.divisors):
        raise ZeroDivisorError(
            f"Edge matrix for (p={spec.p}, n={spec.n}) has rank {snf.rank} < {len(snf.divisors)}"
        )
    structure = AbelianGroupType(spec.p, snf.counts())
    logger.info(f"Q_{{{spec.p},{spec.n}}} = {structure} ({time.perf_counter() - started:.2f}s)")
    return structure


def cokernel_table(p: int, n_values: Sequence[int], threads: Optional[int] = None,
                   size_ceiling: Optional[int] = None) -> Dict[int, AbelianGroupType]:
    """Cokernels for several ranks, computed concurrently and returned in input order."""
    workers = threads or ConfigService().get_threads()
    specs = [GroupSpec(p, n) for n in n_values]
    for spec in specs:
        check_feasible(spec, size_ceiling)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda s: cokernel_structure(s, size_ceiling=size_ceiling), specs))
    return {spec.n: result for spec, result in zip(specs, results)}


def structure_exponent(g: AbelianGroupType) -> int:
    """Largest order occurring; 1 for the trivial group."""
    return max(g.counts, default=1)


# ========================= Prediction =========================

def predicted_exponents(spec: GroupSpec, literal_paper_range: bool = False) -> Dict[int, int]:
    """
    Predicted multiplicity of Z/p^k for k = 0..n-1 from the q-nomial row of
    (1 + t + ... + t^(p-1))^n, summing p - 1 consecutive coefficients per k.

    Args:
        literal_paper_range: sum p terms (j = 0..p-1) instead of p - 1.
    """
    p, n = spec.p, spec.n
    last_j = p - 1 if literal_paper_range else p - 2
    return {k: sum(qnomial(n, p, (p - 1) * (k + 1) - j) for j in range(last_j + 1)) for k in range(n)}


class ConjectureRow(BaseModel):
    """Computed vs predicted multiplicity of Z/p^k"""
    k: int
    order: int
    computed: int
    predicted: int
    passed: bool


class ConjectureReport(BaseModel):
    """Comparison of Q_{p,n} with the q-nomial prediction"""
    p: int
    n: int
    literal_paper_range: bool = Field(default=False, description="Whether the p-term range was used")
    rows: List[ConjectureRow] = Field(default=[], description="One row per k")
    passed: bool = Field(default=False, description="All rows agree")


def verify_conjecture(spec: GroupSpec, literal_paper_range: bool = False,
                      structure: Optional[AbelianGroupType] = None) -> ConjectureReport:
    """Compare the computed cokernel with predicted_exponents, key by key."""
    computed = (structure or cokernel_structure(spec)).by_exponent()
    predicted = predicted_exponents(spec, literal_paper_range)
    rows = []
    for k in sorted(set(computed) | set(predicted)):
        c, q = computed.get(k, 0), predicted.get(k, 0)
        rows.append(ConjectureRow(k=k, order=spec.p ** k, computed=c, predicted=q, passed=c == q))
    report = ConjectureReport(p=spec.p, n=spec.n, literal_paper_range=literal_paper_range,
                              rows=rows, passed=all(r.passed for r in rows))
    if not report.passed:
        bad = [r.k for r in rows if not r.passed]
        logger.warning(f"Prediction for (p={spec.p}, n={spec.n}) differs at k={bad}")
    return report


# ========================= Subset bases for p = 2 =========================

def subset_indices(n: int) -> List[SubsetIndex]:
    return [SubsetIndex.of(c, n) for size in range(1, n + 1) for c in combinations(range(1, n + 1), size)]


def subset_edge_matrix(n: int) -> IntegerMatrix:
    """
    Edge map for p = 2 in the subset bases: column a_J, row b'_K, entry
    2^(#J - 1) when J is contained in K and 0 otherwise.
    """
    idx = subset_indices(n)
    rows = [[2 ** (j.size - 1) if j.issubset(k) else 0 for j in idx] for k in idx]
    return IntegerMatrix.from_rows(rows, cols=len(idx))


def subset_cokernel(n: int) -> AbelianGroupType:
    return AbelianGroupType(2, smith_normal_form(subset_edge_matrix(n)).counts())


def binomial_structure(n: int) -> AbelianGroupType:
    """{2^k: C(n, k+1)}, the closed form of Q_{2,n}."""
    return AbelianGroupType(2, {2 ** k: comb(n, k + 1) for k in range(n)})


# ========================= Exponent bounds =========================

_REAL_OFFSETS = (2, 1, 1, 0, 1, 0, 3, 2)


def k_theory_lower_bounds(n: int) -> Tuple[int, int]:
    """(complex, real) lower bounds on the exponent for C_2^n."""
    if n < 1:
        raise ValueError(f"k_theory_lower_bounds needs n >= 1, got {n}")
    complex_bound = n + 1 if n % 2 == 0 else n
    return complex_bound, n + _REAL_OFFSETS[n % 8]


def k_theory_ceiling_bounds(n: int) -> Tuple[int, int]:
    """The same bounds written through c = ceil((n - 1)/2)."""
    if n < 1:
        raise ValueError(f"k_theory_ceiling_bounds needs n >= 1, got {n}")
    c = -(-(n - 1) // 2)
    shift, extra = {0: (0, 0), 1: (0, 0), 2: (1, 1), 3: (1, 1),
                    4: (2, 3), 5: (2, 3), 6: (3, 7), 7: (3, 7)}[n % 8]
    return 2 * c + 1, 2 + 2 * (c - shift) + extra


def abelian_two_group_exponent(orders: Sequence[int]) -> int:
    """
    Exponent bound #J + 1 for the abelian 2-group with the given cyclic factor
    orders, J being the factors of order at least 4.
    """
    for order in orders:
        if order < 2 or _p_log(order, 2) is None:
            raise ValueError(f"Cyclic factor order {order} is not a power of two >= 2")
    return sum(1 for order in orders if order >= 4) + 1


# ========================= Output =========================

def structure_json(spec: GroupSpec, g: AbelianGroupType) -> Dict:
    return {"p": spec.p, "n": spec.n, "structure": g.to_json()}


def table_tsv(p: int, table: Dict[int, AbelianGroupType]) -> str:
    """Rows Z/p^k (k from 0), columns n; zero entries left blank."""
    ns = sorted(table)
    top = max((max(g.by_exponent(), default=0) for g in table.values()), default=0)
    lines = ["order\t" + "\t".join(f"n={n}" for n in ns)]
    for k in range(top + 1):
        cells = []
        for n in ns:
            mult = table[n].by_exponent().get(k, 0)
            cells.append(str(mult) if mult else "")
        lines.append(f"Z/{p ** k}\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"
