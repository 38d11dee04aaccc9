"""Shared state for commands: scalar field, Gamma and the computation cache."""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
import logging
from typing import Any

from .cache import ComputationCache, ScopedCache
from .const import DEFAULT_CUTOFF, MODE_M, PARAM_A, SPENCER_MAX_J
from .exceptions import UsageError
from .liesuper import BasisSuperalgebra, build_gamma
from .prolong import ProlongationReport, prolong
from .roots import Classification, GradingReport, ParabolicSpec, classify_parabolics, graded_algebra, grading
from .scalars import RationalField, Scalar, ScalarField, default_field, s_parameters
from .spencer import CohomologyTable, cohomology

_LOGGER = logging.getLogger(__name__)


def parse_point(text: str | None) -> dict[str, Fraction]:
    """Parse ``a=p/q[,b=r/s]`` into a parameter point."""
    if not text:
        return {}
    point: dict[str, Fraction] = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise UsageError(f"cannot parse parameter assignment {part!r}")
        try:
            point[name] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(f"invalid value for {name}: {err!s}") from err
    return point


def field_for(point: Mapping[str, Any] | None) -> ScalarField:
    """Q(a) without a point, otherwise Q at the point."""
    if not point:
        return default_field()
    if PARAM_A not in point:
        raise UsageError(f"the evaluation point must assign {PARAM_A}")
    field = RationalField(point)
    a = field.parameter(PARAM_A)
    if a in (0, -1):
        raise UsageError(f"{PARAM_A}={a} lies on the exceptional locus {{a, a+1}}")
    return field


class Workbench:
    """Gamma(-1-a, 1, a) over one field with memoized derived objects."""

    def __init__(self, field: ScalarField | None = None, cache: ComputationCache | None = None):
        self.field = field or default_field()
        self.cache = cache if cache is not None else ScopedCache()
        self._gamma: BasisSuperalgebra | None = None

    @property
    def key(self) -> str:
        return repr(self.field)

    @property
    def s(self) -> tuple[Scalar, Scalar, Scalar]:
        return s_parameters(self.field)

    @property
    def gamma(self) -> BasisSuperalgebra:
        if self._gamma is None:
            self._gamma = build_gamma(self.field)
            _LOGGER.debug("Built Gamma over %s", self.field)
        return self._gamma

    def graded(self, spec: ParabolicSpec, opposite: bool = False) -> BasisSuperalgebra:
        return self.cache.get_or_compute(
            "graded",
            lambda: graded_algebra(self.gamma, spec, opposite=opposite),
            field=self.key,
            spec=spec.label,
            opposite=opposite,
        )

    def grading(self, spec: ParabolicSpec) -> GradingReport:
        return self.cache.get_or_compute(
            "grading", lambda: grading(self.gamma, spec), field=self.key, spec=spec.label
        )

    def classification(self) -> Classification:
        return self.cache.get_or_compute(
            "classify", lambda: classify_parabolics(self.gamma, self.s), field=self.key
        )

    def prolongation(
        self, spec: ParabolicSpec, mode: str = MODE_M, k: int | None = None, cutoff: int = DEFAULT_CUTOFF
    ) -> ProlongationReport:
        def compute() -> ProlongationReport:
            report, _ = prolong(self.graded(spec), mode=mode, k=k, cutoff=cutoff)
            return report

        return self.cache.get_or_compute(
            "prolong", compute, field=self.key, spec=spec.label, mode=mode, k=k, cutoff=cutoff
        )

    def cohomology(self, spec: ParabolicSpec, j_max: int = SPENCER_MAX_J) -> CohomologyTable:
        return self.cache.get_or_compute(
            "cohomology",
            lambda: cohomology(self.graded(spec), j_max=j_max),
            field=self.key,
            spec=spec.label,
            j_max=j_max,
        )
