"""Exact-arithmetic workbench for the Lie superalgebra D(2,1;a).

Builds Gamma(s1, s2, s3), its parabolic gradings and their Tanaka
prolongations, Spencer cohomology, contact and distribution realizations,
and the representation-theoretic reductions of two gradings.
"""

from __future__ import annotations

from .const import DOMAIN
from .exceptions import SuperProlongError
from .liesuper import BasisSuperalgebra, build_gamma
from .prolong import prolong, prolong_spec
from .roots import ParabolicSpec, classify_parabolics, graded_algebra, grading
from .scalars import ParameterField, RationalField, default_field, generic_field
from .spencer import cohomology
from .workbench import Workbench

__all__ = [
    "DOMAIN",
    "BasisSuperalgebra",
    "ParabolicSpec",
    "ParameterField",
    "RationalField",
    "SuperProlongError",
    "Workbench",
    "build_gamma",
    "classify_parabolics",
    "cohomology",
    "default_field",
    "generic_field",
    "graded_algebra",
    "grading",
    "prolong",
    "prolong_spec",
]
