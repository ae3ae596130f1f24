"""
Cohomology of a cyclic 2-group C_q acting on a graded F_2 algebra.

H^s(C_q; M_t) is read off the 2-periodic resolution whose maps alternate
between 1 - g and the norm N = 1 + g + ... + g^(q-1), all reduced mod 2:

    s = 0        ker(1 - g)
    s odd        ker N / im(1 - g)
    s even >= 2  ker(1 - g) / im N

Linear algebra is Gaussian elimination on bitset vectors (Python ints).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from ConfigService import ConfigService
from f2poly import (
    F2Poly,
    Monomial,
    Presentation,
    RingMap,
    action_matrix,
    bigraded_dimension,
    enumerate_basis,
    format_poly,
    is_homogeneous,
    map_order,
    multiply,
)
from series import RationalSeries, expand

logger = logging.getLogger(__name__)


class GroupOrderError(ValueError):
    """Raised when the acting group order is not a power of 2 or the action does not fit it"""


# ========================= F_2 linear algebra =========================

def f2_rank(vectors: Iterable[int]) -> int:
    """Rank of a family of bitset vectors."""
    pivots: Dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                break
    return len(pivots)


def f2_kernel(columns: Sequence[int]) -> List[int]:
    """
    Basis of the kernel of the matrix with the given bitset columns; each
    kernel vector is a bitset over column indices.
    """
    pivots: Dict[int, Tuple[int, int]] = {}
    kernel = []
    for i, col in enumerate(columns):
        v, combo = col, 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, combo)
                break
            pv, pc = pivots[top]
            v ^= pv
            combo ^= pc
        if not v:
            kernel.append(combo)
    return kernel


def _apply(columns: Sequence[int], v: int) -> int:
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= columns[i]
        v >>= 1
        i += 1
    return out


# ========================= Types =========================

@dataclass(frozen=True)
class GradedAction:
    """A generator g of C_q acting on a presented graded F_2 algebra"""
    presentation: Presentation
    action: RingMap
    group_order: int

    def __post_init__(self):
        q = self.group_order
        if q < 2 or q & (q - 1):
            raise GroupOrderError(f"Group order {q} is not a power of 2")
        if self.action.domain != self.presentation:
            raise GroupOrderError("Action is defined on a different presentation")
        order = map_order(self.action, q)
        if order is None or q % order:
            raise GroupOrderError(f"Action order does not divide {q}")

    def matrices(self, t: int) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
        """Bitset columns of (1 + g) and N on the degree-t basis, and its size."""
        return _degree_matrices(self, t)


@lru_cache(maxsize=1024)
def _degree_matrices(ga: GradedAction, t: int) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
    g = action_matrix(ga.action, t)
    dim = len(g)
    one_plus_g = tuple(col ^ (1 << i) for i, col in enumerate(g))
    norm = []
    for i in range(dim):
        v = 1 << i
        total = 0
        for _ in range(ga.group_order):
            total ^= v
            v = _apply(g, v)
        norm.append(total)
    return one_plus_g, tuple(norm), dim


@dataclass
class RowTable:
    """E_2^{s,t} dimensions for s in s_range and 0 <= t <= t_max"""
    dims: Dict[Tuple[int, int], int] = field(default_factory=dict)
    s_range: Tuple[int, ...] = ()
    t_max: int = 0

    def row(self, s: int) -> List[int]:
        return [self.dims[(s, t)] for t in range(self.t_max + 1)]

    def to_tsv(self) -> str:
        lines = ["s\tt\tdim"]
        lines.extend(f"{s}\t{t}\t{self.dims[(s, t)]}" for s in self.s_range for t in range(self.t_max + 1))
        return "\n".join(lines) + "\n"

    def to_json(self) -> Dict:
        return {"t_max": self.t_max, "rows": {str(s): self.row(s) for s in self.s_range}}


# ========================= Degreewise dimensions =========================

def rank_profile(ga: GradedAction, t: int) -> Tuple[int, int, int]:
    """(rank of 1 + g, rank of N, dimension) in degree t."""
    one_plus_g, norm, dim = ga.matrices(t)
    return f2_rank(one_plus_g), f2_rank(norm), dim


def invariants_dim(ga: GradedAction, t: int) -> int:
    """Dimension of ker(1 + g) in degree t."""
    one_plus_g, _, dim = ga.matrices(t)
    return dim - f2_rank(one_plus_g)


def coinvariants_dim(ga: GradedAction, t: int) -> int:
    """Dimension of coker(1 + g) in degree t."""
    one_plus_g, _, dim = ga.matrices(t)
    return dim - f2_rank(one_plus_g)


def _cohomology_dim(s: int, rank_a: int, rank_n: int, dim: int) -> int:
    if s == 0:
        return dim - rank_a
    if s % 2:
        # ker N / im(1 - g)
        return (dim - rank_n) - rank_a
    # ker(1 - g) / im N
    return (dim - rank_a) - rank_n


def row_dims(ga: GradedAction, s_max: int, t_max: int, s_min: int = 0,
             threads: Optional[int] = None) -> RowTable:
    """E_2^{s,t} = H^s(C_q; M_t) for s_min <= s <= s_max, t <= t_max."""
    workers = threads or ConfigService().get_threads()
    degrees = range(t_max + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            profiles = list(pool.map(partial(rank_profile, ga), degrees))
    else:
        profiles = [rank_profile(ga, t) for t in degrees]
    table = RowTable(s_range=tuple(range(s_min, s_max + 1)), t_max=t_max)
    for t, (rank_a, rank_n, dim) in zip(degrees, profiles):
        for s in table.s_range:
            table.dims[(s, t)] = _cohomology_dim(s, rank_a, rank_n, dim)
    logger.debug(f"Row dimensions for s={s_min}..{s_max}, t<={t_max} over {ga.presentation}")
    return table


def verify_row_series(ga: GradedAction, s: int, expected: RationalSeries, bound: Optional[int] = None) -> bool:
    """Row s through degree `bound` equals the expansion of `expected`."""
    bound = ConfigService().get_row_degree_bound() if bound is None else bound
    got = row_dims(ga, s, bound, s_min=s).row(s)
    want = expand(expected, bound)
    if got != want:
        logger.info(f"Row {s} is {got}, expected {want}")
    return got == want


def matches_presentation(ga: GradedAction, e2: Presentation, s_max: int, t_max: int) -> List[Tuple[int, int]]:
    """Bidegrees (s, t) where row_dims and the bigraded presentation disagree."""
    table = row_dims(ga, s_max, t_max)
    return [(s, t) for s in table.s_range for t in range(t_max + 1)
            if table.dims[(s, t)] != bigraded_dimension(e2, s, t)]


# ========================= Module generation =========================

class DegreeGeneration(BaseModel):
    """Image of (invariants x generators) in the coinvariants of one degree"""
    degree: int
    domain_dim: int
    coinvariants_dim: int
    image_dim: int
    surjective: bool
    kernel_dim: int


class GenerationReport(BaseModel):
    """Per-degree surjectivity and kernel of the generator map"""
    generators: List[str] = Field(default=[], description="Module generators as printed")
    degrees: List[DegreeGeneration] = Field(default=[], description="One entry per degree")
    surjective: bool = Field(default=False, description="Surjective in every degree checked")
    first_failure: Optional[int] = Field(default=None, description="Lowest degree where surjectivity fails")

    def kernel_dims(self) -> List[int]:
        return [d.kernel_dim for d in self.degrees]


def _invariant_basis(ga: GradedAction, t: int) -> List[F2Poly]:
    basis = enumerate_basis(ga.presentation, t)
    one_plus_g, _, _ = ga.matrices(t)
    return [F2Poly.of(*(basis[i] for i in range(len(basis)) if combo >> i & 1))
            for combo in f2_kernel(one_plus_g)]


def _to_bits(p: F2Poly, position: Dict[Monomial, int]) -> int:
    bits = 0
    for m in p.monomials:
        bits ^= 1 << position[m]
    return bits


def module_generation_check(ga: GradedAction, gens: Sequence[F2Poly], bound: Optional[int] = None) -> GenerationReport:
    """
    For each degree d <= bound, map (invariants of degree d - |x|) . x, x in gens,
    into the coinvariants of degree d and report surjectivity and kernel size.
    """
    pres = ga.presentation
    bound = ConfigService().get_row_degree_bound() if bound is None else bound
    gen_degrees = []
    for x in gens:
        if not x or not is_homogeneous(pres, x):
            raise ValueError(f"Module generator {format_poly(pres, x)} must be non-zero and homogeneous")
        gen_degrees.append(pres.degree(next(iter(x.monomials))))
    invariants = {}
    rows = []
    for d in range(bound + 1):
        basis = enumerate_basis(pres, d)
        position = {m: j for j, m in enumerate(basis)}
        one_plus_g, _, dim = ga.matrices(d)
        rank_a = f2_rank(one_plus_g)
        products = []
        for x, deg in zip(gens, gen_degrees):
            if deg > d:
                continue
            if d - deg not in invariants:
                invariants[d - deg] = _invariant_basis(ga, d - deg)
            products.extend(_to_bits(multiply(pres, inv, x), position) for inv in invariants[d - deg])
        image = f2_rank(list(one_plus_g) + products) - rank_a
        coinv = dim - rank_a
        rows.append(DegreeGeneration(degree=d, domain_dim=len(products), coinvariants_dim=coinv,
                                     image_dim=image, surjective=image == coinv,
                                     kernel_dim=len(products) - image))
    failures = [r.degree for r in rows if not r.surjective]
    return GenerationReport(generators=[format_poly(pres, x) for x in gens], degrees=rows,
                            surjective=not failures, first_failure=failures[0] if failures else None)


def rank_nullity_holds(ga: GradedAction, t: int) -> bool:
    """dim ker + rank = dim for both 1 + g and N in degree t."""
    one_plus_g, norm, dim = ga.matrices(t)
    return all(len(f2_kernel(cols)) + f2_rank(cols) == dim for cols in (one_plus_g, norm))
