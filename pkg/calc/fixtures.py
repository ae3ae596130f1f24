"""
Declarative fixtures: ring presentations, cyclic actions, representation
matrices and Poincare identities, stored as JSON and validated with pydantic.

A fixture is addressed either by a file path or by the name of a bundled file
in the fixtures directory (without the .json suffix).
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from ConfigService import ConfigService
from cyccohom import GradedAction
from f2poly import Presentation, RingMap
from isotropy import RepMatrixGroup, group_closure, parse_matrix
from repcoker import AbelianGroupType
from series import PoincareIdentity

logger = logging.getLogger(__name__)


class FixtureError(ValueError):
    """Raised when a fixture cannot be found, parsed or validated"""


# ========================= Schemas =========================

class GeneratorSpec(BaseModel):
    """A named generator with its total degree and cohomological part"""
    name: str = Field(..., description="Generator name", min_length=1)
    degree: int = Field(..., description="Total degree", ge=1)
    s: int = Field(default=0, description="Cohomological degree of a bidegree (s, t)", ge=0)


class PresentationSpec(BaseModel):
    """Generators and monomial relations"""
    generators: List[GeneratorSpec] = Field(..., description="Generators in monomial-order priority")
    relations: List[str] = Field(default=[], description="Relation monomials such as 'z*y^2'")


class RingFixture(PresentationSpec):
    """A presented ring, optionally with its closed-form Poincare series"""
    kind: Literal["ring"]
    name: str
    source: str = ""
    series: Optional[str] = Field(default=None, description="Closed-form Poincare series")


class RowExpectation(BaseModel):
    """Rows that should expand a given series"""
    s: List[int] = Field(..., description="Row indices")
    series: str = Field(..., description="Expected row series")


class GenerationExpectation(BaseModel):
    """Coinvariant generators and the expected kernel series"""
    generators: List[str] = Field(..., description="Module generators as polynomials")
    kernel_series: Optional[str] = Field(default=None, description="Series of the kernel dimensions")


class E2Expectation(BaseModel):
    """A bundled bigraded presentation whose bidegree counts should equal the rows"""
    ring: str = Field(..., description="Name of a ring fixture whose generators carry s")
    s_max: int = Field(default=6, ge=0, description="Highest row compared")


class ActionFixture(BaseModel):
    """A cyclic 2-group acting on a presented ring"""
    kind: Literal["action"]
    name: str
    source: str = ""
    ring: PresentationSpec
    images: Dict[str, str] = Field(default={}, description="Generator images; others are fixed")
    group_order: int = Field(..., description="Order q of the acting cyclic group", ge=2)
    rows: List[RowExpectation] = Field(default=[], description="Expected row series")
    generation: Optional[GenerationExpectation] = None
    e2: Optional[E2Expectation] = None


class RepGenerator(BaseModel):
    """A generator label with its matrix, entries as [a, b] meaning a + b*sqrt(2)"""
    name: str
    matrix: List[List[List[Union[int, str]]]]


class IsotropyExpectation(BaseModel):
    """What the isotropy analysis should return, by generating words"""
    contained_in: Optional[List[str]] = Field(default=None, description="All stabilizers lie in this set")
    stabilizers: Optional[List[List[str]]] = Field(default=None, description="Exact distinct stabilizers")
    maximal: Optional[List[List[str]]] = Field(default=None, description="Exact maximal stabilizers")
    bound: Optional[int] = Field(default=None, description="Projective exponent bound")


class RepFixture(BaseModel):
    """A real representation of a finite 2-group"""
    kind: Literal["rep"]
    name: str
    source: str = ""
    generators: List[RepGenerator]
    order: int = Field(..., ge=1)
    relations: List[List[str]] = Field(default=[], description="Word pairs that must agree")
    expected: Optional[IsotropyExpectation] = None


class IdentitySuiteFixture(BaseModel):
    """A list of Poincare identities"""
    kind: Literal["identities"]
    name: str
    source: str = ""
    identities: List[PoincareIdentity]


class CokernelTableFixture(BaseModel):
    """Tabulated cokernels Q_{p,n}: for each n, order -> multiplicity (Z/1 included)"""
    kind: Literal["cokernel_table"]
    name: str
    source: str = ""
    p: int = Field(..., description="The prime p", ge=2)
    columns: Dict[int, Dict[int, int]] = Field(..., description="Column n of the table")


class FixtureFile(BaseModel):
    fixture: Union[RingFixture, ActionFixture, RepFixture, IdentitySuiteFixture, CokernelTableFixture] = Field(..., discriminator="kind")


# ========================= Reading =========================

def bundled_fixtures() -> List[str]:
    return sorted(p.stem for p in ConfigService().get_fixtures_dir().glob("*.json"))


def resolve(path_or_name: Union[str, Path]) -> Path:
    path = Path(path_or_name)
    if path.is_file():
        return path
    bundled = ConfigService().get_fixtures_dir() / f"{path_or_name}.json"
    if bundled.is_file():
        return bundled
    raise FixtureError(f"No fixture file or bundled fixture named {str(path_or_name)!r}")


def read_fixture(path_or_name: Union[str, Path]):
    """Parse and schema-validate a fixture file, returning its pydantic model."""
    path = resolve(path_or_name)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path.name}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        return FixtureFile(fixture=raw).fixture
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors())
        raise FixtureError(f"{path.name}: {problems}") from e


def build_presentation(spec: PresentationSpec) -> Presentation:
    return Presentation.build([(g.name, g.degree, g.s) for g in spec.generators], spec.relations)


def build_action(fx: ActionFixture) -> GradedAction:
    pres = build_presentation(fx.ring)
    return GradedAction(pres, RingMap.from_strings(pres, fx.images), fx.group_order)


def build_rep(fx: RepFixture) -> RepMatrixGroup:
    gens = [(g.name, parse_matrix(g.matrix)) for g in fx.generators]
    rep = group_closure(gens, fx.order, ConfigService().get_max_group_order())
    for left, right in fx.relations:
        if rep.element(left) != rep.element(right):
            raise FixtureError(f"{fx.name}: relation {left} = {right} does not hold")
    return rep


def build_table(fx: CokernelTableFixture) -> Dict[int, AbelianGroupType]:
    table = {}
    for n, counts in sorted(fx.columns.items()):
        group = AbelianGroupType(fx.p, counts)
        if sum(counts.values()) != fx.p ** n - 1:
            raise FixtureError(f"{fx.name}: column n={n} has {sum(counts.values())} summands, "
                               f"expected {fx.p ** n - 1}")
        table[n] = group
    return table


def build_fixture(fx):
    """
    Turn a parsed fixture into its domain object: GradedAction, RepMatrixGroup,
    Presentation, a list of PoincareIdentity or a table n -> AbelianGroupType.

    Raises:
        FixtureError: naming the violated invariant (NotWellDefined, OrderMismatch, ...)
    """
    try:
        if fx.kind == "ring":
            obj = build_presentation(fx)
        elif fx.kind == "action":
            obj = build_action(fx)
        elif fx.kind == "rep":
            obj = build_rep(fx)
        elif fx.kind == "cokernel_table":
            obj = build_table(fx)
        else:
            obj = list(fx.identities)
    except ValueError as e:
        if isinstance(e, FixtureError):
            raise
        raise FixtureError(f"{fx.name}: {type(e).__name__}: {e}") from e
    logger.info(f"Loaded {fx.kind} fixture {fx.name}")
    return obj


def load_fixture(path_or_name: Union[str, Path]):
    """
    Read and build a fixture by bundled name or path.

    Raises:
        FixtureError: on parse errors (with line numbers) and on violated invariants
    """
    return build_fixture(read_fixture(path_or_name))


def load_ring(name: str) -> Presentation:
    fx = read_fixture(name)
    if fx.kind != "ring":
        raise FixtureError(f"{name} is a {fx.kind} fixture, not a ring")
    return load_fixture(name)


def load_identity_suite(name: str = "identities") -> List[PoincareIdentity]:
    fx = read_fixture(name)
    if fx.kind != "identities":
        raise FixtureError(f"{name} is a {fx.kind} fixture, not an identity list")
    return list(fx.identities)


def fixtures_of_kind(kind: str) -> List[str]:
    return [name for name in bundled_fixtures() if read_fixture(name).kind == kind]


def load_cokernel_tables() -> Dict[Tuple[int, int], AbelianGroupType]:
    """Every bundled tabulated cokernel, keyed by (p, n)."""
    tables = {}
    for name in fixtures_of_kind("cokernel_table"):
        fx = read_fixture(name)
        for n, group in load_fixture(name).items():
            tables[(fx.p, n)] = group
    return tables
