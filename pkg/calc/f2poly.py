"""
Graded F_2 algebras presented by weighted generators modulo monomial relations.

Monomials are exponent vectors over the generator list. Because every relation
is a monomial, a monomial is zero in the quotient exactly when some relation
divides it, so the surviving monomials of degree d form a basis.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


class PresentationError(ValueError):
    """Raised when generators or relations violate the presentation rules"""


class IllFormed(ValueError):
    """Raised when a polynomial is not reduced modulo the relations"""


class NotWellDefined(ValueError):
    """Raised when a ring map does not respect the relations or the grading"""


@dataclass(frozen=True)
class Generator:
    """
    A named generator of total degree `degree`.

    `s` is the cohomological part of a bidegree (s, t) with t = degree - s; it
    stays 0 for ordinary singly graded rings.
    """
    name: str
    degree: int
    s: int = 0

    @property
    def t(self) -> int:
        return self.degree - self.s


@dataclass(frozen=True)
class Presentation:
    """F_2[generators]/(monomial relations)"""
    generators: Tuple[Generator, ...]
    relations: Tuple[Monomial, ...] = ()

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"Generator names must be unique: {names}")
        for g in self.generators:
            if g.degree < 1:
                raise PresentationError(f"Generator {g.name} needs a positive degree, got {g.degree}")
            if not 0 <= g.s <= g.degree:
                raise PresentationError(f"Generator {g.name} has s={g.s} outside 0..{g.degree}")
        for rel in self.relations:
            if len(rel) != len(self.generators):
                raise PresentationError(f"Relation {rel} has {len(rel)} exponents for {len(names)} generators")
            if any(e < 0 for e in rel) or not any(rel):
                raise PresentationError(f"Relation {rel} must be a non-constant monomial")

    @classmethod
    def build(cls, generators: Sequence[Tuple], relations: Iterable[str] = ()) -> "Presentation":
        """
        Convenience constructor: generators as (name, degree) or (name, degree, s)
        tuples, relations as monomial strings such as "z*y^2".
        """
        gens = tuple(Generator(*g) for g in generators)
        bare = cls(gens)
        return cls(gens, tuple(bare.parse_monomial(r) for r in relations))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PresentationError(f"Unknown generator {name!r}; known: {', '.join(self.names)}") from None

    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    def variable(self, name: str) -> Monomial:
        i = self.index(name)
        return tuple(int(j == i) for j in range(len(self.generators)))

    def degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    def s_degree(self, m: Monomial) -> int:
        return sum(e * g.s for e, g in zip(m, self.generators))

    def is_reduced(self, m: Monomial) -> bool:
        return not any(all(a >= b for a, b in zip(m, rel)) for rel in self.relations)

    def parse_monomial(self, text: str) -> Monomial:
        text = text.strip()
        exps = [0] * len(self.generators)
        if text == "1":
            return tuple(exps)
        for factor in re.split(r"\s*\*\s*|\s+", text):
            match = _FACTOR.match(factor)
            if not match:
                raise PresentationError(f"Cannot read monomial factor {factor!r} in {text!r}")
            exps[self.index(match.group(1))] += int(match.group(2) or 1)
        return tuple(exps)

    def format_monomial(self, m: Monomial) -> str:
        parts = [name if e == 1 else f"{name}^{e}" for name, e in zip(self.names, m) if e]
        return "*".join(parts) or "1"

    def __str__(self) -> str:
        gens = ", ".join(self.names)
        if not self.relations:
            return f"F2[{gens}]"
        return f"F2[{gens}]/({', '.join(self.format_monomial(r) for r in self.relations)})"


# ========================= Polynomials =========================

@dataclass(frozen=True)
class F2Poly:
    """Sum of distinct monomials with coefficients in F_2"""
    monomials: FrozenSet[Monomial] = frozenset()

    @classmethod
    def of(cls, *monomials: Monomial) -> "F2Poly":
        acc = set()
        for m in monomials:
            acc ^= {m}
        return cls(frozenset(acc))

    def __add__(self, other: "F2Poly") -> "F2Poly":
        return F2Poly(self.monomials ^ other.monomials)

    def __mul__(self, other: "F2Poly") -> "F2Poly":
        acc = set()
        for a in self.monomials:
            for b in other.monomials:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        return F2Poly(frozenset(acc))

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def sorted_monomials(self) -> List[Monomial]:
        return sorted(self.monomials, reverse=True)


def parse_poly(pres: Presentation, text: str) -> F2Poly:
    """Parse a sum of monomials such as 'b + z^2'; '0' is the zero polynomial."""
    text = text.strip()
    if text == "0" or not text:
        return F2Poly()
    return F2Poly.of(*(pres.parse_monomial(term) for term in text.split("+")))


def format_poly(pres: Presentation, p: F2Poly) -> str:
    if not p:
        return "0"
    ordered = sorted(p.monomials, key=lambda m: (-pres.degree(m), tuple(-e for e in m)))
    return " + ".join(pres.format_monomial(m) for m in ordered)


def reduce(pres: Presentation, p: F2Poly) -> F2Poly:
    """Drop every monomial divisible by a relation."""
    return F2Poly(frozenset(m for m in p.monomials if pres.is_reduced(m)))


def multiply(pres: Presentation, a: F2Poly, b: F2Poly) -> F2Poly:
    return reduce(pres, a * b)


def is_homogeneous(pres: Presentation, p: F2Poly, degree: Optional[int] = None) -> bool:
    degrees = {pres.degree(m) for m in p.monomials}
    if degree is None:
        return len(degrees) <= 1
    return degrees <= {degree}


# ========================= Bases =========================

@lru_cache(maxsize=4096)
def enumerate_basis(pres: Presentation, d: int) -> Tuple[Monomial, ...]:
    """
    Reduced monomials of total degree d, in graded-lexicographic order
    (higher exponent of an earlier generator first).
    """
    if d < 0:
        return ()
    degrees = [g.degree for g in pres.generators]
    out: List[Monomial] = []

    def walk(i: int, remaining: int, prefix: List[int]) -> None:
        if i == len(degrees):
            if remaining == 0:
                m = tuple(prefix)
                if pres.is_reduced(m):
                    out.append(m)
            return
        for e in range(remaining // degrees[i], -1, -1):
            prefix.append(e)
            walk(i + 1, remaining - e * degrees[i], prefix)
            prefix.pop()

    walk(0, d, [])
    return tuple(out)


def graded_dimension(pres: Presentation, d: int) -> int:
    """Dimension of the degree-d part of the quotient."""
    return len(enumerate_basis(pres, d))


def bigraded_dimension(pres: Presentation, s: int, t: int) -> int:
    """Number of basis monomials of bidegree (s, t)."""
    return sum(1 for m in enumerate_basis(pres, s + t) if pres.s_degree(m) == s)


# ========================= Ring maps =========================

@dataclass(frozen=True)
class RingMap:
    """Endomorphism of a presented algebra given by the image of each generator"""
    domain: Presentation
    images: Tuple[F2Poly, ...]

    def __post_init__(self):
        pres = self.domain
        if len(self.images) != len(pres.generators):
            raise NotWellDefined(f"Expected {len(pres.generators)} generator images, got {len(self.images)}")
        object.__setattr__(self, "images", tuple(reduce(pres, img) for img in self.images))
        for g, img in zip(pres.generators, self.images):
            if not is_homogeneous(pres, img, g.degree):
                raise NotWellDefined(f"Image of {g.name} is not homogeneous of degree {g.degree}: "
                                     f"{format_poly(pres, img)}")
        for rel in pres.relations:
            image = _substitute(self, rel)
            if image:
                raise NotWellDefined(f"Relation {pres.format_monomial(rel)} maps to "
                                     f"{format_poly(pres, image)}, not 0")

    @classmethod
    def from_strings(cls, pres: Presentation, images: Mapping[str, str]) -> "RingMap":
        """Generators missing from `images` are fixed."""
        unknown = set(images) - set(pres.names)
        if unknown:
            raise PresentationError(f"Images given for unknown generators {sorted(unknown)}")
        return cls(pres, tuple(parse_poly(pres, images[name]) if name in images
                               else F2Poly.of(pres.variable(name)) for name in pres.names))

    @classmethod
    def identity(cls, pres: Presentation) -> "RingMap":
        return cls(pres, tuple(F2Poly.of(pres.variable(name)) for name in pres.names))

    @classmethod
    def permutation(cls, pres: Presentation, swaps: Mapping[str, str]) -> "RingMap":
        """Generator permutation; swaps lists each moved generator and its image."""
        return cls.from_strings(pres, dict(swaps))


def _substitute(f: RingMap, m: Monomial) -> F2Poly:
    pres = f.domain
    result = F2Poly.of(pres.unit())
    for img, e in zip(f.images, m):
        for _ in range(e):
            result = multiply(pres, result, img)
            if not result:
                return result
    return result


def apply_map(f: RingMap, p: F2Poly) -> F2Poly:
    """
    Image of p under f, reduced modulo the relations.

    Raises:
        IllFormed: if p contains a monomial divisible by a relation
    """
    pres = f.domain
    acc = F2Poly()
    for m in p.monomials:
        if not pres.is_reduced(m):
            raise IllFormed(f"Monomial {pres.format_monomial(m)} is zero in {pres}; reduce inputs first")
        acc = acc + _substitute(f, m)
    return acc


def compose(f: RingMap, g: RingMap) -> RingMap:
    """f after g."""
    return RingMap(f.domain, tuple(apply_map(f, img) for img in g.images))


def map_order(f: RingMap, bound: int) -> Optional[int]:
    """Smallest m <= bound with f^m the identity on generators; None when there is none."""
    if bound < 1:
        raise ValueError(f"map_order needs bound >= 1, got {bound}")
    identity = RingMap.identity(f.domain).images
    current = f.images
    for m in range(1, bound + 1):
        if current == identity:
            return m
        current = tuple(apply_map(f, img) for img in current)
    return None


def action_matrix(f: RingMap, d: int) -> List[int]:
    """
    Matrix of f on the degree-d basis as bitset columns: entry i of the result
    has bit j set when basis monomial j occurs in f(basis monomial i).
    """
    basis = enumerate_basis(f.domain, d)
    position: Dict[Monomial, int] = {m: j for j, m in enumerate(basis)}
    cols = []
    for m in basis:
        bits = 0
        for term in apply_map(f, F2Poly.of(m)).monomials:
            bits |= 1 << position[term]
        cols.append(bits)
    return cols
