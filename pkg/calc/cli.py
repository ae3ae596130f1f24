"""
Command-line front end for equivcalc.

Each subcommand runs one pipeline and writes its report to stdout as pretty
text, JSON or TSV; logs go to stderr. Exit codes: 0 when every requested
check passes, 1 when a check fails, 2 on usage errors.
"""

import argparse
import json
import logging
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Callable, Dict, List, Literal, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from sympy import isprime

from ConfigService import ConfigService
from cyccohom import (
    GradedAction,
    matches_presentation,
    module_generation_check,
    rank_nullity_holds,
    row_dims,
)
from elemabelian import GroupSpec, Normalization, NotPrimeError
from exactlinalg import IntegerMatrix, agrees_with_minors
from f2poly import parse_poly
from fixtures import (
    FixtureError,
    build_fixture,
    fixtures_of_kind,
    load_cokernel_tables,
    load_fixture,
    load_ring,
    read_fixture,
)
from isotropy import (
    IsotropyReport,
    distinct_stabilizers,
    isotropy_report,
    isotropy_subgroups,
    maximal_isotropy_groups,
)
from repcoker import (
    AbelianGroupType,
    InfeasibleInstanceError,
    abelian_two_group_exponent,
    binomial_structure,
    cokernel_structure,
    cokernel_table,
    k_theory_ceiling_bounds,
    k_theory_lower_bounds,
    predicted_exponents,
    structure_exponent,
    structure_json,
    subset_cokernel,
    table_tsv,
    verify_conjecture,
)
from series import expand, paper_identity_suite, parse_series, qnomial_row

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

Subcommand = Literal["coker", "coker-table", "predict", "conjecture", "qnomial", "poincare-suite",
                     "e2rows", "e2verify", "isotropy", "kbounds", "verify-all"]

# Instances of the cokernel tables checked by verify-all; the extended set is opt-in.
BASE_INSTANCES: Tuple[Tuple[int, int], ...] = (
    tuple((2, n) for n in range(1, 7))
    + tuple((3, n) for n in range(1, 5))
    + tuple((5, n) for n in range(1, 4))
    + tuple((7, n) for n in range(1, 3))
    + tuple((11, n) for n in range(1, 3))
)
EXTENDED_INSTANCES: Tuple[Tuple[int, int], ...] = ((2, 7), (2, 8), (3, 5), (7, 3))

# ========================= Models =========================


class CommandConfig(BaseModel):
    """One validated command-line invocation"""
    subcommand: Subcommand = Field(..., description="The subcommand to run")
    p: Optional[int] = Field(default=None, description="Prime p", ge=2)
    n_values: List[int] = Field(default=[], description="Ranks n, in order")
    n_max: Optional[int] = Field(default=None, description="Largest rank for table commands", ge=1)
    x: Optional[int] = Field(default=None, description="Exponent x of the q-nomial", ge=0)
    q: Optional[int] = Field(default=None, description="Number of terms q of the q-nomial", ge=2)
    fixture: Optional[str] = Field(default=None, description="Fixture path or bundled name")
    s_max: int = Field(default=6, description="Highest row for e2rows", ge=0)
    t_max: Optional[int] = Field(default=None, description="Highest internal degree", ge=0)
    output_format: Literal["json", "tsv", "pretty"] = Field(default="pretty", description="Report format")
    literal_paper_range: bool = Field(default=False, description="Sum p terms per block in the prediction")
    alternate_normalization: bool = Field(default=False, description="Rightmost-1 subgroup generators")
    size_ceiling: Optional[int] = Field(default=None, description="Override of the p^n - 1 ceiling", ge=1)
    threads: Optional[int] = Field(default=None, description="Worker threads", ge=1)
    extended: bool = Field(default=False, description="Include the long-running cokernel instances")

    @field_validator("p")
    @classmethod
    def p_is_prime(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and not isprime(v):
            raise ValueError(f"p={v} is not prime")
        return v

    @field_validator("n_values")
    @classmethod
    def ranks_positive(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError(f"ranks must be >= 1, got {v}")
        return v

    @model_validator(mode="after")
    def arguments_present(self) -> "CommandConfig":
        needed = {
            "coker": ("p", "n_values"),
            "predict": ("p", "n_values"),
            "conjecture": ("p", "n_values"),
            "coker-table": ("p", "n_max"),
            "qnomial": ("x", "q"),
            "e2rows": ("fixture",),
            "e2verify": ("fixture",),
            "isotropy": ("fixture",),
            "kbounds": ("n_max",),
        }.get(self.subcommand, ())
        missing = [name for name in needed if getattr(self, name) in (None, [])]
        if missing:
            raise ValueError(f"{self.subcommand} needs {', '.join(missing)}")
        return self

    @property
    def normalization(self) -> Normalization:
        return Normalization.RIGHTMOST if self.alternate_normalization else Normalization.LEFTMOST


class CheckResult(BaseModel):
    """Outcome of one verification item"""
    criterion: str = Field(..., description="Group the check belongs to")
    name: str = Field(..., description="What was checked")
    passed: bool
    detail: str = Field(default="", description="Mismatch description when the check fails")


class Outcome(BaseModel):
    """A rendered report and whether all of its checks passed"""
    passed: bool = True
    payload: Dict = Field(default={}, description="JSON form")
    pretty: str = ""
    tsv: Optional[str] = None


# ========================= Fixture checks =========================

def _check(criterion: str, name: str, passed: bool, detail: str = "") -> CheckResult:
    if not passed:
        logger.error(f"[{criterion}] {name} failed: {detail}")
    return CheckResult(criterion=criterion, name=name, passed=passed, detail="" if passed else detail)


def check_action_fixture(name: str, bound: Optional[int] = None, criterion: str = "rows") -> List[CheckResult]:
    """
    Compare an action fixture's rows, module generators, bigraded presentation
    and rank-nullity counts with what cyccohom computes through `bound`.
    """
    fx = read_fixture(name)
    if fx.kind != "action":
        raise FixtureError(f"{name} is a {fx.kind} fixture, not an action")
    ga = build_fixture(fx)
    bound = ConfigService().get_row_degree_bound() if bound is None else bound
    s_top = max([s for exp in fx.rows for s in exp.s] + [fx.e2.s_max if fx.e2 else 0])
    table = row_dims(ga, s_top, bound)
    results = []
    for exp in fx.rows:
        want = expand(parse_series(exp.series), bound)
        for s in exp.s:
            got = table.row(s)
            results.append(_check(criterion, f"{fx.name} row s={s} = {exp.series}", got == want,
                                  f"got {got}, expected {want}"))
    if fx.generation:
        pres = ga.presentation
        gens = [parse_poly(pres, g) for g in fx.generation.generators]
        report = module_generation_check(ga, gens, bound)
        label = ", ".join(fx.generation.generators)
        results.append(_check(criterion, f"{fx.name} coinvariants generated by {label}", report.surjective,
                              f"not surjective in degree {report.first_failure}"))
        if fx.generation.kernel_series:
            want = expand(parse_series(fx.generation.kernel_series), bound)
            results.append(_check(criterion, f"{fx.name} generator kernel = {fx.generation.kernel_series}",
                                  report.kernel_dims() == want, f"got {report.kernel_dims()}, expected {want}"))
    if fx.e2:
        bad = matches_presentation(ga, load_ring(fx.e2.ring), fx.e2.s_max, bound)
        results.append(_check(criterion, f"{fx.name} rows match {fx.e2.ring} for s <= {fx.e2.s_max}", not bad,
                              f"bidegrees differ at {bad[:5]}"))
    bad_t = [t for t in range(bound + 1) if not rank_nullity_holds(ga, t)]
    results.append(_check(criterion, f"{fx.name} rank-nullity through degree {bound}", not bad_t,
                          f"fails in degrees {bad_t}"))
    return results


def check_rep_fixture(name: str, criterion: str = "isotropy") -> Tuple[IsotropyReport, List[CheckResult]]:
    """Isotropy analysis of a representation fixture against its recorded expectations."""
    fx = read_fixture(name)
    if fx.kind != "rep":
        raise FixtureError(f"{name} is a {fx.kind} fixture, not a representation")
    started = time.perf_counter()
    rep = build_fixture(fx)
    report = isotropy_report(fx.name, rep)
    pairs = isotropy_subgroups(rep)
    stabs = distinct_stabilizers(pairs)
    results = [_check(criterion, f"{fx.name} isotropy is elementary abelian", report.elementary_abelian,
                      f"stabilizers {report.stabilizers}")]
    exp = fx.expected
    if exp and exp.contained_in is not None:
        allowed = rep.subgroup(exp.contained_in)
        results.append(_check(criterion, f"{fx.name} stabilizers lie in {{{', '.join(exp.contained_in)}}}",
                              all(st <= allowed for st in stabs), f"stabilizers {report.stabilizers}"))
    if exp and exp.stabilizers is not None:
        want = {rep.generated(words) for words in exp.stabilizers}
        results.append(_check(criterion, f"{fx.name} distinct stabilizers", set(stabs) == want,
                              f"got {report.stabilizers}"))
    if exp and exp.maximal is not None:
        want = {rep.generated(words) for words in exp.maximal}
        results.append(_check(criterion, f"{fx.name} maximal isotropy groups",
                              set(maximal_isotropy_groups(pairs)) == want, f"got {report.maximal}"))
    if exp and exp.bound is not None:
        results.append(_check(criterion, f"{fx.name} projective exponent bound = {exp.bound}",
                              report.bound == exp.bound, f"got {report.bound}"))
    logger.info(f"Isotropy of {fx.name} checked in {time.perf_counter() - started:.2f}s")
    return report, results


# ========================= verify-all =========================

def _cokernels(instances: Sequence[Tuple[int, int]], threads: int) -> Dict[Tuple[int, int], AbelianGroupType]:
    def compute(pn: Tuple[int, int]) -> AbelianGroupType:
        return cokernel_structure(GroupSpec(*pn))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(compute, instances))
    return dict(zip(instances, results))


def _random_matrix(rng: random.Random) -> IntegerMatrix:
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    spread = rng.choice((1, 3, 10))
    return IntegerMatrix.from_rows([[rng.randint(-spread, spread) for _ in range(cols)] for _ in range(rows)],
                                   cols=cols)


def verify_all(extended: bool = False, threads: Optional[int] = None) -> List[CheckResult]:
    """Run every acceptance check, grouped by criterion, in a fixed order."""
    threads = threads or ConfigService().get_threads()
    instances = BASE_INSTANCES + (EXTENDED_INSTANCES if extended else ())
    started = time.perf_counter()
    computed = _cokernels(instances, threads)
    logger.info(f"Computed {len(computed)} cokernels in {time.perf_counter() - started:.1f}s")
    tables = load_cokernel_tables()
    results: List[CheckResult] = []

    for (p, n), g in computed.items():
        criterion = "1" if p == 2 else "2"
        want = tables.get((p, n))
        results.append(_check(criterion, f"Q_{{{p},{n}}} matches the tabulated column",
                              want is not None and g == want, f"got {g}, expected {want}"))
        if p == 2:
            results.append(_check("1", f"Q_{{2,{n}}} is the binomial structure", g == binomial_structure(n),
                                  f"got {g}"))

    for (p, n), g in computed.items():
        spec = GroupSpec(p, n)
        report = verify_conjecture(spec, structure=g)
        results.append(_check("3", f"prediction for (p={p}, n={n})", report.passed,
                              f"rows {[r.model_dump() for r in report.rows if not r.passed]}"))
        if p == 2:
            binomials = {k: comb(n, k + 1) for k in range(n)}
            results.append(_check("3", f"prediction for (p=2, n={n}) is binomial",
                                  predicted_exponents(spec) == binomials, f"got {predicted_exponents(spec)}"))
    literal = verify_conjecture(GroupSpec(3, 2), literal_paper_range=True, structure=computed[(3, 2)])
    results.append(_check("3", "literal p-term range mismatches on (p=3, n=2)", not literal.passed,
                          "literal range unexpectedly agrees"))

    for (p, n), g in computed.items():
        if p == 2:
            results.append(_check("4", f"exponent of Q_{{2,{n}}} = 2^{n - 1}", structure_exponent(g) == 2 ** (n - 1),
                                  f"got {structure_exponent(g)}"))

    complex_formula = all(k_theory_lower_bounds(n)[0] == (n if n % 2 else n + 1) for n in range(1, 17))
    real_offsets = (2, 1, 1, 0, 1, 0, 3, 2)
    real_formula = all(k_theory_lower_bounds(n)[1] == n + real_offsets[n % 8] for n in range(1, 17))
    results.append(_check("5", "complex K-theory bound, n = 1..16", complex_formula))
    results.append(_check("5", "real K-theory bound, n = 1..16", real_formula))
    results.append(_check("5", "real bound >= complex bound, n = 1..16",
                          all(k_theory_lower_bounds(n)[1] >= k_theory_lower_bounds(n)[0] for n in range(1, 17))))

    results.extend(check_action_fixture("m16_swap", criterion="6"))
    results.extend(check_action_fixture("sd16_swap", criterion="7"))

    for r in paper_identity_suite():
        results.append(_check("8", f"identity {r.name}", r.passed, r.detail))

    for name in ("m16_rep", "sd16_rep", "d8c4_rep"):
        results.extend(check_rep_fixture(name, criterion="9")[1])

    rng = random.Random(20240229)
    bad_snf = [m.to_rows() for m in (_random_matrix(rng) for _ in range(500)) if not agrees_with_minors(m)]
    results.append(_check("10", "Smith form agrees with minor gcds on 500 random matrices", not bad_snf,
                          f"first failure {bad_snf[:1]}"))
    for p, n in ((2, 3), (3, 2), (5, 2)):
        left = computed.get((p, n)) or cokernel_structure(GroupSpec(p, n))
        right = cokernel_structure(GroupSpec(p, n), Normalization.RIGHTMOST)
        results.append(_check("10", f"Q_{{{p},{n}}} independent of generator normalization", left == right,
                              f"{left} vs {right}"))
    qnomial_ok = all(
        list(row) == list(reversed(row)) and sum(row) == q ** x
        for x in range(9) for q in range(2, 8) for row in [qnomial_row(x, q)]
    )
    results.append(_check("10", "q-nomial rows symmetric with sum q^x, x <= 8, q <= 7", qnomial_ok))

    for name in fixtures_of_kind("action"):
        if name not in ("m16_swap", "sd16_swap"):
            results.extend(check_action_fixture(name, criterion="supplement"))
    results.extend(check_rep_fixture("q8_rep", criterion="supplement")[1])
    for n in range(1, 7):
        results.append(_check("supplement", f"subset-basis edge map gives Q_{{2,{n}}}",
                              subset_cokernel(n) == computed[(2, n)], f"got {subset_cokernel(n)}"))
    results.append(_check("supplement", "ceiling form of the K-theory bounds, n = 1..64",
                          all(k_theory_lower_bounds(n) == k_theory_ceiling_bounds(n) for n in range(1, 65))))
    results.append(_check("supplement", "exponent bound of C4 x C4 x C2 is 3",
                          abelian_two_group_exponent([4, 4, 2]) == 3))

    failed = [r for r in results if not r.passed]
    logger.info(f"verify-all: {len(results) - len(failed)}/{len(results)} checks passed "
                f"in {time.perf_counter() - started:.1f}s")
    return results


# ========================= Subcommands =========================

def _checks_outcome(results: List[CheckResult], **extra) -> Outcome:
    passed = all(r.passed for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  [{r.criterion}] {r.name}"
             + (f": {r.detail}" if r.detail else "") for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    tsv = "criterion\tname\tpassed\n" + "".join(f"{r.criterion}\t{r.name}\t{int(r.passed)}\n" for r in results)
    payload = dict(extra, passed=passed, checks=[r.model_dump() for r in results])
    return Outcome(passed=passed, payload=payload, pretty="\n".join(lines), tsv=tsv)


def _coker(config: CommandConfig) -> Outcome:
    spec = GroupSpec(config.p, config.n_values[0])
    g = cokernel_structure(spec, config.normalization, config.size_ceiling)
    return Outcome(payload=structure_json(spec, g), pretty=f"Q_{{{spec.p},{spec.n}}} = {g}",
                   tsv=table_tsv(spec.p, {spec.n: g}))


def _coker_table(config: CommandConfig) -> Outcome:
    table = cokernel_table(config.p, range(1, config.n_max + 1), config.threads, config.size_ceiling)
    rendered = table_tsv(config.p, table)
    payload = {"p": config.p, "table": {str(n): g.to_json() for n, g in table.items()}}
    return Outcome(payload=payload, pretty=rendered, tsv=rendered)


def _predict(config: CommandConfig) -> Outcome:
    spec = GroupSpec(config.p, config.n_values[0])
    prediction = predicted_exponents(spec, config.literal_paper_range)
    orders = {spec.p ** k: mult for k, mult in prediction.items()}
    pretty = "\n".join(f"Z/{order}\t{mult}" for order, mult in orders.items())
    payload = {"p": spec.p, "n": spec.n, "literal_paper_range": config.literal_paper_range,
               "prediction": {str(order): mult for order, mult in orders.items()}}
    return Outcome(payload=payload, pretty=pretty, tsv="order\tmultiplicity\n" + pretty)


def _conjecture(config: CommandConfig) -> Outcome:
    reports = []
    for n in config.n_values:
        spec = GroupSpec(config.p, n)
        g = cokernel_structure(spec, config.normalization, config.size_ceiling)
        reports.append(verify_conjecture(spec, config.literal_paper_range, structure=g))
    lines, tsv = [], ["n\tk\torder\tcomputed\tpredicted\tpassed"]
    for report in reports:
        lines.append(f"(p={report.p}, n={report.n}): {'PASS' if report.passed else 'FAIL'}")
        for row in report.rows:
            lines.append(f"  Z/{row.order}: computed {row.computed}, predicted {row.predicted}"
                         + ("" if row.passed else "  <- differs"))
            tsv.append(f"{report.n}\t{row.k}\t{row.order}\t{row.computed}\t{row.predicted}\t{int(row.passed)}")
    return Outcome(passed=all(r.passed for r in reports),
                   payload={"reports": [r.model_dump() for r in reports]},
                   pretty="\n".join(lines), tsv="\n".join(tsv))


def _qnomial(config: CommandConfig) -> Outcome:
    row = list(qnomial_row(config.x, config.q))
    return Outcome(payload={"x": config.x, "q": config.q, "coefficients": row},
                   pretty=" ".join(str(c) for c in row),
                   tsv="k\tcoefficient\n" + "\n".join(f"{k}\t{c}" for k, c in enumerate(row)))


def _poincare_suite(config: CommandConfig) -> Outcome:
    return _checks_outcome([_check("8", f"identity {r.name}", r.passed, r.detail) for r in paper_identity_suite()])


def _e2rows(config: CommandConfig) -> Outcome:
    ga = load_fixture(config.fixture)
    if not isinstance(ga, GradedAction):
        raise FixtureError(f"{config.fixture} is not an action fixture")
    t_max = ConfigService().get_row_degree_bound() if config.t_max is None else config.t_max
    table = row_dims(ga, config.s_max, t_max, threads=config.threads)
    pretty = "\n".join(f"s={s}: " + " ".join(str(d) for d in table.row(s)) for s in table.s_range)
    return Outcome(payload=table.to_json(), pretty=pretty, tsv=table.to_tsv())


def _e2verify(config: CommandConfig) -> Outcome:
    return _checks_outcome(check_action_fixture(config.fixture, config.t_max), fixture=config.fixture)


def _isotropy(config: CommandConfig) -> Outcome:
    report, results = check_rep_fixture(config.fixture)
    outcome = _checks_outcome(results)
    lines = [f"{report.name}: group of order {report.order}"]
    lines.extend(f"  dim {e.dim}  stabilizer {{{', '.join(e.stabilizer)}}}" for e in report.pairs)
    lines.append(f"  maximal: {'; '.join('{' + ', '.join(m) + '}' for m in report.maximal)}")
    lines.append(f"  bound: {report.bound}")
    outcome.payload = dict(report.model_dump(), passed=outcome.passed, checks=outcome.payload["checks"])
    outcome.pretty = "\n".join(lines) + "\n" + outcome.pretty
    return outcome


def _kbounds(config: CommandConfig) -> Outcome:
    rows = []
    for n in range(1, config.n_max + 1):
        complex_bound, real_bound = k_theory_lower_bounds(n)
        rows.append({"n": n, "complex": complex_bound, "real": real_bound,
                     "ceiling_form_agrees": k_theory_ceiling_bounds(n) == (complex_bound, real_bound)})
    passed = all(r["ceiling_form_agrees"] and r["real"] >= r["complex"] for r in rows)
    rendered = "n\tcomplex\treal\n" + "\n".join(f"{r['n']}\t{r['complex']}\t{r['real']}" for r in rows)
    return Outcome(passed=passed, payload={"bounds": rows, "passed": passed}, pretty=rendered, tsv=rendered)


def _verify_all(config: CommandConfig) -> Outcome:
    return _checks_outcome(verify_all(config.extended, config.threads))


HANDLERS: Dict[str, Callable[[CommandConfig], Outcome]] = {
    "coker": _coker,
    "coker-table": _coker_table,
    "predict": _predict,
    "conjecture": _conjecture,
    "qnomial": _qnomial,
    "poincare-suite": _poincare_suite,
    "e2rows": _e2rows,
    "e2verify": _e2verify,
    "isotropy": _isotropy,
    "kbounds": _kbounds,
    "verify-all": _verify_all,
}


def render(outcome: Outcome, output_format: str) -> str:
    if output_format == "json":
        text = json.dumps(outcome.payload, separators=(",", ":"))
    elif output_format == "tsv" and outcome.tsv is not None:
        text = outcome.tsv
    else:
        text = outcome.pretty
    return text if text.endswith("\n") else text + "\n"


def run(config: CommandConfig, stream: Optional[TextIO] = None) -> int:
    """
    Dispatch one validated command and write its report.

    Returns:
        0 if every check passed, 1 on a failed check, 2 on a usage error
    """
    stream = stream or sys.stdout
    ConfigService().update_config(threads=config.threads, size_ceiling=config.size_ceiling)
    try:
        outcome = HANDLERS[config.subcommand](config)
    except (FixtureError, InfeasibleInstanceError, NotPrimeError) as e:
        logger.error(f"{config.subcommand}: {e}")
        return EXIT_USAGE
    stream.write(render(outcome, config.output_format))
    if not outcome.passed:
        logger.error(f"{config.subcommand}: verification failed")
        return EXIT_FAILED
    return EXIT_OK


# ========================= Argument parsing =========================

def _rank_range(text: str) -> List[int]:
    """A rank n or an inclusive range such as 1..4."""
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a rank or a range like 1..4, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=["json", "tsv", "pretty"], default="pretty",
                        help="Report format (default: pretty)")
    common.add_argument("--threads", type=int, default=None, help="Worker threads (default: EQUIVCALC_THREADS or 1)")
    common.add_argument("--size-ceiling", type=int, default=None, help="Largest accepted p^n - 1 (default: 1024)")
    common.add_argument("--literal-paper-range", action="store_true",
                        help="Sum p terms per block in the q-nomial prediction")
    common.add_argument("--alternate-normalization", action="store_true",
                        help="Use rightmost-1 generators of the cyclic subgroups")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="Warnings and errors only")

    parser = argparse.ArgumentParser(prog="equivcalc",
                                     description="Exact computations for equivariant cohomology and K-theory bounds.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("coker", parents=[common], help="Cokernel Q_{p,n} of the edge map")
    p.add_argument("p", type=int)
    p.add_argument("n", type=int)
    p = sub.add_parser("coker-table", parents=[common], help="Table of Q_{p,n} for n = 1..nmax")
    p.add_argument("p", type=int)
    p.add_argument("nmax", type=int)
    p = sub.add_parser("predict", parents=[common], help="q-nomial prediction of Q_{p,n}")
    p.add_argument("p", type=int)
    p.add_argument("n", type=int)
    p = sub.add_parser("conjecture", parents=[common], help="Compare Q_{p,n} with its prediction")
    p.add_argument("p", type=int)
    p.add_argument("n", type=_rank_range, help="A rank or a range such as 1..4")
    p = sub.add_parser("qnomial", parents=[common], help="Coefficients of (1 + t + ... + t^(q-1))^x")
    p.add_argument("x", type=int)
    p.add_argument("q", type=int)
    sub.add_parser("poincare-suite", parents=[common], help="Check the bundled Poincare identities")
    p = sub.add_parser("e2rows", parents=[common], help="Rows E_2^{s,t} of a cyclic action fixture")
    p.add_argument("fixture")
    p.add_argument("--smax", type=int, default=6)
    p.add_argument("--tmax", type=int, default=None)
    p = sub.add_parser("e2verify", parents=[common], help="Check an action fixture against its expectations")
    p.add_argument("fixture")
    p.add_argument("--tmax", type=int, default=None)
    p = sub.add_parser("isotropy", parents=[common], help="Isotropy analysis of a representation fixture")
    p.add_argument("fixture")
    p = sub.add_parser("kbounds", parents=[common], help="K-theory exponent lower bounds for n = 1..nmax")
    p.add_argument("nmax", type=int)
    p = sub.add_parser("verify-all", parents=[common], help="Run the whole acceptance suite")
    p.add_argument("--extended", action="store_true", help="Include (2,7), (2,8), (3,5) and (7,3)")
    return parser


def config_from_args(args: argparse.Namespace) -> CommandConfig:
    n = getattr(args, "n", None)
    return CommandConfig(
        subcommand=args.subcommand,
        p=getattr(args, "p", None),
        n_values=n if isinstance(n, list) else ([] if n is None else [n]),
        n_max=getattr(args, "nmax", None),
        x=getattr(args, "x", None),
        q=getattr(args, "q", None),
        fixture=getattr(args, "fixture", None),
        s_max=getattr(args, "smax", 6),
        t_max=getattr(args, "tmax", None),
        output_format=args.output_format,
        literal_paper_range=args.literal_paper_range,
        alternate_normalization=args.alternate_normalization,
        size_ceiling=args.size_ceiling,
        threads=args.threads,
        extended=getattr(args, "extended", False),
    )


def main(argv: Optional[Sequence[str]] = None, stream: Optional[TextIO] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.getLogger().setLevel(level)
    try:
        config = config_from_args(args)
    except ValidationError as e:
        for err in e.errors():
            field = ".".join(str(x) for x in err["loc"]) or args.subcommand
            logger.error(f"Invalid argument {field}: {err['msg']}")
        return EXIT_USAGE
    return run(config, stream)


if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    sys.exit(main())
