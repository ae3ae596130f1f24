"""
Enumeration of the elementary abelian group C_p^n: its non-identity elements
and one canonical generator for each cyclic subgroup of order p.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator, List, Tuple

from sympy import isprime

logger = logging.getLogger(__name__)

FpVector = Tuple[int, ...]


class NotPrimeError(ValueError):
    """Raised when a group is requested for a non-prime p"""


class Normalization(str, Enum):
    """Which coordinate of a generator is scaled to 1"""
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


@dataclass(frozen=True)
class GroupSpec:
    """The group C_p^n, given by a prime p and a rank n >= 0"""
    p: int
    n: int

    def __post_init__(self):
        if not isprime(self.p):
            raise NotPrimeError(f"p={self.p} is not prime")
        if self.n < 0:
            raise ValueError(f"Rank n={self.n} must be non-negative")

    @property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def subgroup_count(self) -> int:
        """Number of cyclic subgroups of order p."""
        return (self.order - 1) // (self.p - 1)


def _nonzero_vectors(spec: GroupSpec) -> Iterator[FpVector]:
    if spec.n == 0:
        return
    for v in product(range(spec.p), repeat=spec.n):
        if any(v):
            yield v


def is_canonical(v: FpVector, normalization: Normalization = Normalization.LEFTMOST) -> bool:
    """True when the first (or last, for RIGHTMOST) non-zero coordinate of v is 1."""
    coords = v if normalization is Normalization.LEFTMOST else reversed(v)
    for x in coords:
        if x:
            return x == 1
    return False


def nonzero_elements(spec: GroupSpec) -> List[FpVector]:
    """All p^n - 1 non-zero vectors in lexicographic order (empty for n = 0)."""
    return list(_nonzero_vectors(spec))


def cyclic_subgroup_generators(spec: GroupSpec,
                               normalization: Normalization = Normalization.LEFTMOST) -> List[FpVector]:
    """
    One generator per cyclic subgroup of order p, in lexicographic order.

    Args:
        spec: the group C_p^n
        normalization: LEFTMOST keeps vectors whose first non-zero coordinate
            is 1; RIGHTMOST keeps those whose last non-zero coordinate is 1.

    Returns:
        (p^n - 1)/(p - 1) vectors; empty for n = 0.
    """
    gens = [v for v in _nonzero_vectors(spec) if is_canonical(v, normalization)]
    logger.debug(f"C_{spec.p}^{spec.n}: {len(gens)} cyclic subgroup generators ({normalization.value})")
    return gens


def scalar_multiple(v: FpVector, c: int, p: int) -> FpVector:
    return tuple((c * x) % p for x in v)


def dot(u: FpVector, v: FpVector, p: int) -> int:
    return sum(a * b for a, b in zip(u, v)) % p
