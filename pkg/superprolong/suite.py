"""Acceptance checks run by ``superprolong verify``.

Every check is a pure function of a :class:`Workbench` and returns a
:class:`CheckResult`. The expected values are the known tables for
D(2,1;a): the six parabolic classes, the prolongation results of the
finite cases and the Spencer cohomology of their negative parts.
"""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field as dc_field
import logging
import time
from typing import Any

from .const import MODE_G_LE_K, MODE_M, MODE_M_G0, REALIZE_MODELS, REDUCTION_CASES
from .exceptions import SuperProlongError, UsageError
from .liesuper import cauchy_characteristics, check_jacobi, invariant_form, invariant_form_space, killing_form
from .prolong import ProlongationReport, independence_check, mirrors_grading, verify_witness, witness_search
from .realizations import realize
from .reductions import check_reductions
from .roots import ParabolicSpec, SimpleSystem, cartan_matrix, odd_reflection, root_decomposition
from .scalars import ExceptionalLocus, random_points
from .spencer import h1_prolongation_consistency
from .workbench import Workbench

_LOGGER = logging.getLogger(__name__)

Levels = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ParabolicClass:
    """One row of the classification table."""

    members: tuple[str, ...]
    levels: Levels  # g_0, g_-1, ..., g_-depth
    g0: str
    g0_center: int

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


PARABOLIC_CLASSES = (
    ParabolicClass(("p1I", "p2II", "p3III"), ((7, 0), (0, 4), (1, 0)), "co(4)", 1),
    ParabolicClass(
        ("p2I", "p3I", "p1II", "p3II", "p1III", "p2III", "p1IV", "p2IV", "p3IV"),
        ((5, 4), (2, 2)),
        "gl(2|1)",
        1,
    ),
    ParabolicClass(
        ("p12I", "p13I", "p12II", "p23II", "p13III", "p23III"),
        ((5, 0), (1, 2), (0, 2), (1, 0)),
        "gl(2)+C",
        2,
    ),
    ParabolicClass(
        ("p23I", "p13II", "p12III", "p12IV", "p13IV", "p23IV"),
        ((3, 2), (2, 2), (1, 1)),
        "gl(1|1)+C",
        2,
    ),
    ParabolicClass(("p123I", "p123II", "p123III"), ((3, 0), (2, 1), (0, 2), (0, 1), (1, 0)), "C^3", 3),
    ParabolicClass(("p123IV",), ((3, 0), (0, 3), (3, 0), (0, 1)), "C^3", 3),
)


# Cartan matrices with a = s3 / s2; entries are (constant, coefficient of a)
CARTAN_MATRICES = {
    "I": (((0, 0), (1, 0), (0, 1)), ((-1, 0), (2, 0), (0, 0)), ((-1, 0), (0, 0), (2, 0))),
    "II": (((2, 0), (-1, 0), (0, 0)), ((-1, 0), (0, 0), (1, 1)), ((0, 0), (-1, 0), (2, 0))),
    "III": (((2, 0), (0, 0), (-1, 0)), ((0, 0), (2, 0), (-1, 0)), ((0, -1), (1, 1), (0, 0))),
    "IV": (((0, 0), (1, 0), (0, 1)), ((1, 0), (0, 0), (-1, -1)), ((0, 1), (-1, -1), (0, 0))),
}

# Odd reflections between diagrams: (source, node) -> target
ODD_REFLECTIONS = {
    ("I", 1): "IV",
    ("II", 2): "IV",
    ("III", 3): "IV",
    ("IV", 1): "I",
    ("IV", 2): "II",
    ("IV", 3): "III",
}


@dataclass(frozen=True)
class ProlongationCase:
    """A finite prolongation with its expected positive levels."""

    spec: str
    mode: str
    k: int | None
    levels: dict[int, tuple[int, int]]
    terminated_at: int | None
    cutoff: int = 6
    mirrors: bool = True


PROLONGATION_CASES = (
    ProlongationCase("p123IV", MODE_M, None, {1: (0, 3), 2: (3, 0), 3: (0, 1)}, 4),
    ProlongationCase("p2I", MODE_M_G0, None, {1: (2, 2)}, 2),
    ProlongationCase("p23I", MODE_M_G0, None, {1: (2, 2), 2: (1, 1)}, 3),
    ProlongationCase("p1I", MODE_G_LE_K, 1, {2: (1, 0)}, 3),
    ProlongationCase("p12I", MODE_G_LE_K, 1, {2: (0, 2), 3: (1, 0)}, 4),
    ProlongationCase("p123I", MODE_G_LE_K, 1, {2: (0, 2), 3: (0, 1), 4: (1, 0)}, 5),
)

# pr(m, g_0) of p1I grows toward the contact algebra
GROWTH_CASE = ProlongationCase("p1I", MODE_M_G0, None, {1: (0, 8), 2: (8, 0)}, None, cutoff=2, mirrors=False)

# Witnesses of infinite type, in the grading where the X_i are negative
WITNESSES = (
    ("p23I", "X2", ("X1", "X2", "X3", "xxy", "xxx")),
    ("p23I", "X3", ("X1", "X2", "X3", "xyx", "xxx")),
)
NO_WITNESS = ("p12I", "p123I")

# H^{i,j}: spec -> j -> {weight i: sdim}
SPENCER_TABLE: dict[str, dict[int, dict[int, tuple[int, int]]]] = {
    "p1I": {0: {-2: (1, 0)}, 1: {1: (0, 4)}, 2: {2: (9, 0)}},
    "p2I": {0: {-1: (2, 2)}, 1: {0: (3, 4)}, 2: {2: (4, 4)}},
    "p12I": {0: {-3: (1, 0)}, 1: {-2: (1, 0), 1: (0, 2)}, 2: {2: (3, 0), 3: (0, 2)}},
    "p23I": {0: {-2: (1, 1)}, 1: {-1: (2, 2), 0: (0, 1)}, 2: {0: (1, 1), 2: (2, 2)}},
    "p123I": {0: {-4: (1, 0)}, 1: {-3: (2, 0), 1: (0, 1)}, 2: {-2: (1, 0), 2: (1, 0), 3: (0, 2)}},
    "p123IV": {0: {-3: (0, 1)}, 1: {-1: (0, 3)}, 2: {0: (1, 0), 2: (3, 0)}},
}

# Symbol-level Cauchy characteristics: (spec, level, sdim, spanning basis vectors)
CAUCHY_CASES = (
    ("p12I", 2, (1, 0), ("Y2",)),
    ("p123I", 3, (2, 0), ("Y2", "Y3")),
    ("p123I", 2, (0, 1), ("yxx",)),
)


@dataclass
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    detail: str = ""
    witness: Any = None
    locus: list[str] = dc_field(default_factory=list)
    duration: float = 0.0

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "witness": None if self.witness is None else str(self.witness),
            "locus": list(self.locus),
            "duration": round(self.duration, 3),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}"
        if self.detail:
            text += f": {self.detail}"
        if not self.passed and self.witness is not None:
            text += f" (witness: {self.witness})"
        return text


Check = Callable[[Workbench], CheckResult]
CHECKS: dict[str, Check] = {}


def check(name: str) -> Callable[[Check], Check]:
    def register(func: Check) -> Check:
        CHECKS[name] = func
        return func

    return register


def _failed_locus(wb: Workbench, locus: ExceptionalLocus) -> list[str]:
    """Locus factors outside {a, a+1}."""
    extra = locus.outside(wb.field.default_locus())
    if extra:
        _LOGGER.warning("Exceptional locus %s is larger than {a, a+1}", extra)
    return extra.describe()


@check("construction")
def check_construction(wb: Workbench) -> CheckResult:
    gamma = wb.gamma
    violations = check_jacobi(gamma)
    passed = not violations and gamma.sdim == (9, 8)
    return CheckResult(
        "construction",
        passed,
        f"sdim {gamma.sdim}, {len(violations)} Jacobi violations",
        violations[0] if violations else None,
    )


@check("forms")
def check_forms(wb: Workbench) -> CheckResult:
    gamma = wb.gamma
    field = wb.field
    killing = killing_form(gamma)
    forms, locus = invariant_form_space(gamma)
    if len(forms) != 1:
        return CheckResult("forms", False, f"invariant form space has dimension {len(forms)}")
    form = invariant_form(gamma)
    wrong = [
        (i, j)
        for i in (1, 2, 3)
        for j in (1, 2, 3)
        if form.by_name(f"H{i}", f"H{j}") != (field.div(field.one, wb.s[i - 1]) if i == j else field.zero)
    ]
    defects = form.invariance_defects()
    passed = killing.is_zero and not wrong and not defects
    witness = wrong[0] if wrong else (defects[0] if defects else None)
    detail = "Killing form vanishes" if killing.is_zero else "Killing form is nonzero"
    return CheckResult("forms", passed, detail, witness, _failed_locus(wb, locus))


@check("roots")
def check_roots(wb: Workbench) -> CheckResult:
    field = wb.field
    roots = root_decomposition(wb.gamma)
    even = sum(1 for root, _ in roots if root.parity == 0)
    odd = len(roots) - even
    if (even, odd) != (6, 8):
        return CheckResult("roots", False, f"{even} even and {odd} odd roots")
    a = wb.s[2] * field.div(field.one, wb.s[1])
    for label, rows in CARTAN_MATRICES.items():
        expected = [[field.convert(c) + field.convert(d) * a for c, d in row] for row in rows]
        computed = cartan_matrix(SimpleSystem.standard(label), wb.s, field)
        if computed != expected:
            return CheckResult("roots", False, f"Cartan matrix of DD-{label} differs", label)
    for (source, node), target in ODD_REFLECTIONS.items():
        image = odd_reflection(SimpleSystem.standard(source), node, wb.s)
        if image.label != target:
            return CheckResult("roots", False, "odd reflection lands elsewhere", (source, node, image.label))
    return CheckResult("roots", True, "6 even / 8 odd roots, four Cartan matrices, six odd reflections")


@check("classification")
def check_classification(wb: Workbench) -> CheckResult:
    classification = wb.classification()
    found = sorted(sorted(s.label for s in members) for members in classification.classes)
    expected = sorted(sorted(row.members) for row in PARABOLIC_CLASSES)
    if found != expected:
        return CheckResult("classification", False, f"{len(found)} classes", found)
    for row in PARABOLIC_CLASSES:
        for label in row.members:
            report = wb.grading(ParabolicSpec.parse(label))
            if report.depth != row.depth or tuple(report.level_sdims()) != row.levels:
                return CheckResult("classification", False, f"{label} has levels {report.level_sdims()}", label)
            if report.g0_center != row.g0_center:
                return CheckResult("classification", False, f"{label}: g_0 center {report.g0_center}", label)
    return CheckResult("classification", True, f"{len(found)} classes, signatures and reflection orbits agree")


def _prolongation_result(wb: Workbench, name: str, case: ProlongationCase) -> CheckResult:
    spec = ParabolicSpec.parse(case.spec)
    report: ProlongationReport = wb.prolongation(spec, mode=case.mode, k=case.k, cutoff=case.cutoff)
    levels = {j: report.sdim_of(j) for j in case.levels}
    extra = _failed_locus(wb, report.locus)
    failed_checks = [c for c, ok in report.checks.items() if not ok]
    passed = (
        levels == case.levels
        and report.terminated_at == case.terminated_at
        and not extra
        and not failed_checks
        and (not case.mirrors or mirrors_grading(report, wb.graded(spec)))
    )
    end = f"pr_{report.terminated_at} = 0" if report.finite else f"cutoff {report.cutoff}"
    detail = ", ".join(f"pr_{j}={sdim}" for j, sdim in sorted(levels.items())) + f", {end}"
    witness = failed_checks[0] if failed_checks else (None if levels == case.levels else levels)
    return CheckResult(name, passed, detail, witness, extra)


def _register_prolongations() -> None:
    for case in (*PROLONGATION_CASES, GROWTH_CASE):
        suffix = "" if case.k is None else f"({case.k})"
        name = f"prolong {case.spec} {case.mode}{suffix}"
        if case.cutoff != 6:
            name += f" cutoff {case.cutoff}"
        CHECKS[name] = lambda wb, name=name, case=case: _prolongation_result(wb, name, case)


_register_prolongations()


@check("prolong independence")
def check_independence(wb: Workbench) -> CheckResult:
    if not getattr(wb.field, "is_symbolic", False):
        return CheckResult("prolong independence", True, "skipped at a rational point")
    case = next(c for c in PROLONGATION_CASES if c.spec == "p23I")
    spec = ParabolicSpec.parse(case.spec)
    report = wb.prolongation(spec, mode=case.mode, k=case.k, cutoff=case.cutoff)
    points = random_points(wb.field, avoid=report.locus)
    passed = independence_check(spec, report, points)
    return CheckResult("prolong independence", passed, f"{case.spec} at {len(points)} random points")


@check("witnesses")
def check_witnesses(wb: Workbench) -> CheckResult:
    for label, v, names in WITNESSES:
        graded = wb.graded(ParabolicSpec.parse(label), opposite=True)
        if not verify_witness(graded, graded.element(v), [graded.element(n) for n in names]):
            return CheckResult("witnesses", False, f"[{v}, V] != 0 for {label}", (label, v))
    for label in NO_WITNESS:
        result = witness_search(wb.graded(ParabolicSpec.parse(label)))
        if result.found:
            return CheckResult("witnesses", False, f"unexpected witness for {label}", result.reason)
    return CheckResult("witnesses", True, f"{len(WITNESSES)} witnesses verified, none found for {', '.join(NO_WITNESS)}")


def _spencer_result(wb: Workbench, label: str) -> CheckResult:
    name = f"spencer {label}"
    spec = ParabolicSpec.parse(label)
    table = wb.cohomology(spec)
    for j, expected in SPENCER_TABLE[label].items():
        if table.weights(j) != expected:
            return CheckResult(name, False, f"H^{j} = {table.render(j)}", (j, table.weights(j)))
    failed_checks = [c for c, ok in table.checks.items() if not ok]
    consistency = h1_prolongation_consistency(wb.graded(spec), table)
    extra = _failed_locus(wb, table.locus)
    passed = not failed_checks and consistency.ok and not extra
    witness = failed_checks[0] if failed_checks else (None if consistency.ok else consistency.findings)
    return CheckResult(name, passed, f"H^1 = {table.render(1)}, H^2 = {table.render(2)}", witness, extra)


for _label in SPENCER_TABLE:
    CHECKS[f"spencer {_label}"] = lambda wb, label=_label: _spencer_result(wb, label)


@check("cauchy")
def check_cauchy(wb: Workbench) -> CheckResult:
    for label, level, sdim, names in CAUCHY_CASES:
        graded = wb.graded(ParabolicSpec.parse(label))
        space = cauchy_characteristics(graded, level)
        if space.sdim != sdim or not all(space.contains(graded.element(n)) for n in names):
            return CheckResult("cauchy", False, f"{label}, D^{level}: {space.describe()}", (label, level))
    return CheckResult("cauchy", True, f"{len(CAUCHY_CASES)} symbol-level computations")


def _realization_result(wb: Workbench, model: str) -> CheckResult:
    report = realize(model)
    failed = report.failed()
    detail = f"sdim {report.sdim}" if report.sdim else ""
    return CheckResult(f"realize {model}", report.ok, detail, failed[0] if failed else None)


for _model in REALIZE_MODELS:
    CHECKS[f"realize {_model}"] = lambda wb, model=_model: _realization_result(wb, model)


def _reduction_result(wb: Workbench, case: str) -> CheckResult:
    report = check_reductions(case, wb.field)
    failed = report.failed()
    return CheckResult(f"reductions {case}", report.ok, f"{len(report.checks)} checks", failed[0] if failed else None)


for _case in REDUCTION_CASES:
    CHECKS[f"reductions {_case}"] = lambda wb, case=_case: _reduction_result(wb, case)


def select_checks(names: Iterable[str] | None = None) -> list[str]:
    """All check names, or those starting with one of ``names``."""
    if not names:
        return list(CHECKS)
    wanted = list(names)
    selected = [c for c in CHECKS if any(c == n or c.startswith(f"{n} ") for n in wanted)]
    unknown = [n for n in wanted if not any(c == n or c.startswith(f"{n} ") for c in CHECKS)]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    return selected


def run_check(wb: Workbench, name: str) -> CheckResult:
    start = time.perf_counter()
    try:
        result = CHECKS[name](wb)
    except SuperProlongError as err:
        _LOGGER.error("Check %s raised: %s", name, err)
        result = CheckResult(name, False, str(err), getattr(err, "witness", None))
    result.duration = time.perf_counter() - start
    log = _LOGGER.info if result.passed else _LOGGER.error
    log("%s (%.2fs)", result.line(), result.duration)
    return result


async def async_run_checks(wb: Workbench, names: Sequence[str]) -> list[CheckResult]:
    """Run checks concurrently in worker threads; results keep the order of ``names``."""
    await asyncio.to_thread(lambda: wb.gamma)
    return list(await asyncio.gather(*(asyncio.to_thread(run_check, wb, name) for name in names)))
