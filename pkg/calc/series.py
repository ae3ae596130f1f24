"""
Integer polynomials, truncated power series and rational Poincare series.

A Poincare series is kept as an unreduced fraction numerator/denominator of
integer polynomials in t. Equality is decided by cross-multiplication, so no
polynomial gcd is ever needed.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from tokenize import TokenError
from typing import Iterable, List, Literal, Optional, Sequence, Tuple, Union

import sympy
from pydantic import BaseModel, Field
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from ConfigService import ConfigService

logger = logging.getLogger(__name__)

_T = sympy.Symbol("t")
_TRANSFORMS = standard_transformations + (implicit_multiplication_application, convert_xor)


class NonUnitDenominator(ArithmeticError):
    """Raised when a denominator has constant term other than +1 or -1"""


# ========================= Polynomials =========================

def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial in t; coefficient i belongs to t^i, trailing zeros trimmed"""
    coefficients: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(int(c) for c in self.coefficients))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (c,))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coefficient(self, i: int) -> int:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else 0

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        other = _as_poly(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other: int) -> "IntPolynomial":
        return _as_poly(other) - self

    def __mul__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "IntPolynomial":
        result = IntPolynomial.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                power = "t" if i == 1 else f"t^{i}"
                body = power if mag == 1 else f"{mag}{power}"
            sign = "-" if c < 0 else "+"
            parts.append(body if not parts and sign == "+" else (f"-{body}" if not parts else f" {sign} {body}"))
        return "".join(parts)


def _as_poly(value: Union[IntPolynomial, int]) -> IntPolynomial:
    return value if isinstance(value, IntPolynomial) else IntPolynomial.constant(value)


T = IntPolynomial.monomial(1)
ONE = IntPolynomial.constant(1)


def one_minus_t(power: int = 1) -> IntPolynomial:
    """The factor 1 - t^power."""
    return ONE - IntPolynomial.monomial(power)


# ========================= Rational series =========================

@dataclass(frozen=True)
class RationalSeries:
    """numerator/denominator with denominator constant term normalised to +1"""
    numerator: IntPolynomial
    denominator: IntPolynomial = ONE

    def __post_init__(self):
        lead = self.denominator.coefficient(0)
        if lead not in (1, -1):
            raise NonUnitDenominator(f"Denominator {self.denominator} has constant term {lead}")
        if lead == -1:
            object.__setattr__(self, "numerator", -self.numerator)
            object.__setattr__(self, "denominator", -self.denominator)

    @classmethod
    def polynomial(cls, p: Union[IntPolynomial, int]) -> "RationalSeries":
        return cls(_as_poly(p), ONE)

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        return RationalSeries(self.numerator * other.denominator + other.numerator * self.denominator,
                              self.denominator * other.denominator)

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        return self + (-other)

    def __mul__(self, other: Union["RationalSeries", IntPolynomial, int]) -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            other = RationalSeries.polynomial(other)
        return RationalSeries(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.denominator == ONE:
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"


def expand(r: RationalSeries, bound: int) -> List[int]:
    """
    Power-series coefficients c_0..c_bound of r.

    Raises:
        NonUnitDenominator: if the denominator cannot be inverted over Z[[t]]
    """
    den = r.denominator.coefficients
    if not den or den[0] not in (1, -1):
        raise NonUnitDenominator(f"Cannot expand over a denominator with constant term {r.denominator.coefficient(0)}")
    out: List[int] = []
    for i in range(bound + 1):
        acc = r.numerator.coefficient(i)
        for j in range(1, min(i, len(den) - 1) + 1):
            acc -= den[j] * out[i - j]
        out.append(acc * den[0])
    return out


def rational_equal(a: RationalSeries, b: RationalSeries) -> bool:
    """True iff num(a)*den(b) == num(b)*den(a)."""
    return a.numerator * b.denominator == b.numerator * a.denominator


def linear_combination(terms: Sequence[Tuple[int, RationalSeries]]) -> RationalSeries:
    """Signed sum of series over the product of their denominators."""
    total = RationalSeries.polynomial(0)
    for sign, term in terms:
        total = total + (term * sign)
    return total


def convolve(a: Sequence[int], b: Sequence[int], bound: int) -> List[int]:
    """Coefficients of the product of two truncated series, truncated at bound."""
    return [sum(a[j] * b[i - j] for j in range(i + 1) if j < len(a) and i - j < len(b))
            for i in range(bound + 1)]


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse an integer polynomial in t, e.g. '1 + (1-t)t^2 + t^3'."""
    series = parse_series(text)
    if series.denominator != ONE:
        raise ValueError(f"{text!r} is not a polynomial")
    return series.numerator


def parse_series(text: str) -> RationalSeries:
    """
    Parse a rational function in t such as '(1+t)/((1-t)(1-t^4))'.

    Products may be implicit and '^' means power. The fraction is not reduced.

    Raises:
        ValueError: on syntax errors, other symbols or non-integer coefficients
        NonUnitDenominator: if the denominator does not start with +-1
    """
    try:
        expr = parse_expr(text, local_dict={"t": _T}, transformations=_TRANSFORMS)
    except (SyntaxError, TypeError, TokenError, sympy.SympifyError) as e:
        raise ValueError(f"Cannot parse series {text!r}: {e}") from e
    except Exception as e:
        raise ValueError(f"Cannot parse series {text!r}: {type(e).__name__}: {e}") from e
    if not isinstance(expr, sympy.Expr) or expr.has(sympy.zoo, sympy.oo, -sympy.oo, sympy.nan):
        raise ValueError(f"Series {text!r} is not a finite rational function")
    try:
        num, den = sympy.fraction(sympy.together(expr))
        numerator, denominator = _to_int_poly(num, text), _to_int_poly(den, text)
    except ValueError:
        raise
    except Exception as e:
        raise ValueError(f"Cannot read series {text!r}: {type(e).__name__}: {e}") from e
    return RationalSeries(numerator, denominator)


def _to_int_poly(expr, text: str) -> IntPolynomial:
    if expr.free_symbols - {_T}:
        raise ValueError(f"Series {text!r} mentions symbols other than t")
    poly = sympy.Poly(sympy.expand(expr), _T)
    coeffs = list(reversed(poly.all_coeffs()))
    if not all(c.is_integer for c in coeffs):
        raise ValueError(f"Series {text!r} has non-integer coefficients")
    return IntPolynomial(tuple(int(c) for c in coeffs))


# ========================= q-nomial coefficients =========================

@lru_cache(maxsize=None)
def qnomial_row(x: int, q: int) -> Tuple[int, ...]:
    """Coefficients of (1 + t + ... + t^(q-1))^x."""
    if x < 0 or q < 2:
        raise ValueError(f"qnomial_row needs x >= 0 and q >= 2, got x={x}, q={q}")
    row = [1]
    for _ in range(x):
        prev = row
        row = [0] * (len(prev) + q - 1)
        # sliding window sum over q consecutive entries of the previous row
        window = 0
        for k in range(len(row)):
            if k < len(prev):
                window += prev[k]
            if k - q >= 0:
                window -= prev[k - q]
            row[k] = window
    return tuple(row)


def qnomial(x: int, q: int, k: int) -> int:
    """Coefficient of t^k in (1 + t + ... + t^(q-1))^x; 0 outside 0..x(q-1)."""
    row = qnomial_row(x, q)
    return row[k] if 0 <= k < len(row) else 0


# ========================= Identity suite =========================

class SignedTerm(BaseModel):
    """One signed summand of a linear combination"""
    sign: Literal[1, -1] = Field(default=1, description="+1 or -1")
    series: str = Field(..., description="Rational function in t")


class PoincareIdentity(BaseModel):
    """A Poincare-series statement that can be checked exactly"""
    name: str = Field(..., description="Identifier of the identity")
    source: str = Field(default="", description="Where the statement comes from")
    kind: Literal["rational", "polynomial", "expansion", "ring"] = Field(..., description="How to check it")
    terms: List[SignedTerm] = Field(default=[], description="Left side as a signed sum (rational)")
    lhs: Optional[str] = Field(default=None, description="Left polynomial (polynomial)")
    rhs: Optional[str] = Field(default=None, description="Right side series or polynomial")
    coefficients: List[int] = Field(default=[], description="Expected leading coefficients (expansion)")
    ring: Optional[str] = Field(default=None, description="Bundled ring fixture name (ring)")
    bound: Optional[int] = Field(default=None, ge=0,
                                 description="Degree bound for ring checks, the configured series bound if unset")


class IdentityResult(BaseModel):
    """Outcome of one identity check"""
    name: str
    passed: bool
    detail: str = ""


def check_identity(identity: PoincareIdentity) -> IdentityResult:
    if identity.kind == "rational":
        left = linear_combination([(term.sign, parse_series(term.series)) for term in identity.terms])
        right = parse_series(identity.rhs)
        ok = rational_equal(left, right)
        detail = "" if ok else f"{left} != {right}"
    elif identity.kind == "polynomial":
        left, right = parse_polynomial(identity.lhs), parse_polynomial(identity.rhs)
        ok = left == right
        detail = "" if ok else f"{left} != {right}"
    elif identity.kind == "expansion":
        got = expand(parse_series(identity.rhs), len(identity.coefficients) - 1)
        ok = got == list(identity.coefficients)
        detail = "" if ok else f"expansion {got} != {identity.coefficients}"
    else:
        from fixtures import load_ring
        from f2poly import graded_dimension
        bound = identity.bound if identity.bound is not None else ConfigService().get_series_degree_bound()
        pres = load_ring(identity.ring)
        dims = [graded_dimension(pres, d) for d in range(bound + 1)]
        want = expand(parse_series(identity.rhs), bound)
        ok = dims == want
        detail = "" if ok else f"graded dimensions {dims} != {want}"
    if not ok:
        logger.error(f"Identity {identity.name} failed: {detail}")
    return IdentityResult(name=identity.name, passed=ok, detail=detail)


def paper_identity_suite(identities: Optional[Sequence[PoincareIdentity]] = None) -> List[IdentityResult]:
    """Check every bundled Poincare identity (or the given list), in order."""
    if identities is None:
        from fixtures import load_identity_suite
        identities = load_identity_suite()
    results = [check_identity(identity) for identity in identities]
    logger.info(f"Poincare suite: {sum(r.passed for r in results)}/{len(results)} identities hold")
    return results
