"""Tanaka-Weisfeiler prolongation of graded nilpotent Lie superalgebras.

Nonnegative elements are stored as homogeneous maps on m. A level-j map A
sends e_b to the part of the accumulated algebra of degree deg(e_b) + j and
must satisfy A[x,y] = [Ax,y] + (-1)^{|x||A|}[x,Ay] for all x, y in m. With
[f, y] = f(y) for f of nonnegative degree the condition is linear in A.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import logging
from typing import Any

from .const import DEFAULT_CUTOFF, MODE_G_LE_K, MODE_M, MODE_M_G0, MODES
from .exceptions import NotFundamentalError, ProlongationError, WitnessError
from .liesuper import (
    EVEN,
    ODD,
    BasisSuperalgebra,
    add_into,
    build_gamma,
    is_fundamental,
    negative_part,
    sign,
)
from .roots import ParabolicSpec, graded_algebra
from .scalars import (
    EMPTY_LOCUS,
    ExceptionalLocus,
    RationalField,
    Row,
    Scalar,
    ScalarField,
    SpanReducer,
    SparseMatrix,
    default_field,
    nullspace,
)

_LOGGER = logging.getLogger(__name__)


@dataclass
class LevelMap:
    """Homogeneous map m -> accumulated algebra."""

    degree: int
    parity: int
    values: dict[int, Row]
    label: str = ""

    def as_vector(self) -> dict[tuple[int, int], Scalar]:
        return {(b, t): c for b, row in self.values.items() for t, c in row.items()}


@dataclass
class GradedMapSpace:
    """Basis of one prolongation level."""

    degree: int
    maps: list[LevelMap]
    seeded: bool = False
    locus: ExceptionalLocus = EMPTY_LOCUS

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(m.parity for m in self.maps)
        return len(self.maps) - odd, odd

    @property
    def is_zero(self) -> bool:
        return not self.maps


class AccumulatedAlgebra:
    """m together with the nonnegative levels found so far.

    Global ids 0..|m|-1 are the elements of m; later ids are level maps.
    """

    def __init__(self, graded: BasisSuperalgebra) -> None:
        if not graded.is_graded:
            raise ProlongationError("prolongation needs a graded algebra")
        self.graded = graded
        self.field = graded.field
        self.m = sorted(negative_part(graded), key=lambda i: (-graded.degree(i), i))
        self._m_pos = {g: p for p, g in enumerate(self.m)}
        self.degrees: list[int] = [graded.degree(g) for g in self.m]
        self.parities: list[int] = [graded.parity(g) for g in self.m]
        self.maps: dict[int, LevelMap] = {}
        self.seed_ids: dict[int, int] = {}
        self.levels: list[GradedMapSpace] = []

    @property
    def m_size(self) -> int:
        return len(self.m)

    def m_sdim(self) -> tuple[int, int]:
        odd = sum(self.parities[: self.m_size])
        return self.m_size - odd, odd

    def ids_of_degree(self, degree: int) -> list[int]:
        return [t for t, d in enumerate(self.degrees) if d == degree]

    def position(self, g: int) -> int:
        return self._m_pos[g]

    def name(self, t: int) -> str:
        if t < self.m_size:
            return self.graded.basis[self.m[t]].name
        return self.maps[t].label

    def m_vector(self, row: Mapping[int, Scalar]) -> Row:
        """Algebra vector to global ids (m part and seeded part)."""
        out: Row = {}
        for g, c in row.items():
            if g in self._m_pos:
                out[self._m_pos[g]] = c
            elif g in self.seed_ids:
                out[self.seed_ids[g]] = c
            else:
                raise ProlongationError(f"{self.graded.basis[g].name} is outside the accumulated algebra")
        return out

    def bracket_with_m(self, t: int, y: int) -> Row:
        """[e_t, e_y] for a global id t and an m position y."""
        if t < self.m_size:
            return self.m_vector(self.graded.bracket_basis(self.m[t], self.m[y]))
        return self.maps[t].values.get(y, {})

    def m_with_bracket(self, x: int, t: int) -> Row:
        """[e_x, e_t] for an m position x and a global id t."""
        if t < self.m_size:
            return self.m_vector(self.graded.bracket_basis(self.m[x], self.m[t]))
        factor = -sign(self.parities[x] * self.parities[t])
        return {g: factor * c for g, c in self.maps[t].values.get(x, {}).items()}

    def add_level(self, level: GradedMapSpace) -> None:
        for f in level.maps:
            t = len(self.degrees)
            self.degrees.append(f.degree)
            self.parities.append(f.parity)
            self.maps[t] = f
        self.levels.append(level)

    def seed(self, degree: int) -> GradedMapSpace:
        """Embed g_degree via the adjoint action."""
        graded = self.graded
        maps = []
        pending: list[tuple[int, LevelMap]] = []
        for z in graded.indices_of_degree(degree):
            pending.append((z, LevelMap(degree, graded.parity(z), {}, graded.basis[z].name)))
        start = len(self.degrees)
        for offset, (z, _) in enumerate(pending):
            self.seed_ids[z] = start + offset
        for z, f in pending:
            for p, g in enumerate(self.m):
                image = graded.bracket_basis(z, g)
                if image:
                    f.values[p] = self.m_vector(image)
            maps.append(f)
        reducer = SpanReducer(self.field)
        for f in maps:
            if not reducer.add(f.as_vector()):
                raise ProlongationError(f"adjoint action of g_{degree} is not injective")
        level = GradedMapSpace(degree, maps, seeded=True)
        self.add_level(level)
        return level


def _unknowns(acc: AccumulatedAlgebra, j: int, parity: int) -> dict[tuple[int, int], int]:
    unknowns: dict[tuple[int, int], int] = {}
    for b in range(acc.m_size):
        target_parity = (acc.parities[b] + parity) % 2
        for t in acc.ids_of_degree(acc.degrees[b] + j):
            if acc.parities[t] == target_parity:
                unknowns[(b, t)] = len(unknowns)
    return unknowns


def constraint_rows(
    acc: AccumulatedAlgebra, j: int, parity: int, unknowns: Mapping[tuple[int, int], int]
) -> list[Row]:
    """Rows of A[x,y] - [Ax,y] - (-1)^{|x||A|}[x,Ay] = 0 over all basis pairs of m."""
    by_target: dict[tuple[int, int], dict[int, Scalar]] = {}
    targets: dict[int, list[int]] = {}
    for (b, t) in unknowns:
        targets.setdefault(b, []).append(t)
    graded = acc.graded
    for x in range(acc.m_size):
        for y in range(x, acc.m_size):
            expr: dict[int, Row] = {}
            for g, c in graded.bracket_basis(acc.m[x], acc.m[y]).items():
                k = acc.position(g)
                for t in targets.get(k, ()):
                    add_into(expr.setdefault(t, {}), {unknowns[(k, t)]: c})
            for t in targets.get(x, ()):
                for g, c in acc.bracket_with_m(t, y).items():
                    add_into(expr.setdefault(g, {}), {unknowns[(x, t)]: -c})
            factor = sign(acc.parities[x] * parity)
            for t in targets.get(y, ()):
                for g, c in acc.m_with_bracket(x, t).items():
                    add_into(expr.setdefault(g, {}), {unknowns[(y, t)]: -factor * c})
            for g, row in expr.items():
                if row:
                    by_target[(x * acc.m_size + y, g)] = row
    return list(by_target.values())


def solve_level(acc: AccumulatedAlgebra, j: int) -> GradedMapSpace:
    """All degree-j maps satisfying the derivation condition."""
    maps: list[LevelMap] = []
    locus = EMPTY_LOCUS
    for parity in (EVEN, ODD):
        unknowns = _unknowns(acc, j, parity)
        if not unknowns:
            continue
        rows = constraint_rows(acc, j, parity, unknowns)
        basis, part = nullspace(SparseMatrix(acc.field, len(unknowns), rows))
        locus = locus.union(part)
        inverse = {u: key for key, u in unknowns.items()}
        for n, vector in enumerate(basis):
            values: dict[int, Row] = {}
            for u, c in vector.items():
                b, t = inverse[u]
                values.setdefault(b, {})[t] = c
            maps.append(LevelMap(j, parity, values, f"pr{j}_{'odd' if parity else 'even'}_{n}"))
    _LOGGER.debug("level %d: %d maps", j, len(maps))
    return GradedMapSpace(j, maps, locus=locus)


def der0(graded: BasisSuperalgebra) -> GradedMapSpace:
    """Grade-preserving derivations of m."""
    if not is_fundamental(graded):
        raise NotFundamentalError(f"{graded.name}: m is not generated by g_-1")
    return solve_level(AccumulatedAlgebra(graded), 0)


def level_defects(acc: AccumulatedAlgebra, level: GradedMapSpace) -> list[tuple[str, str, str]]:
    """Re-check the derivation condition for every map of a level."""
    defects = []
    graded = acc.graded
    for f in level.maps:
        for x in range(acc.m_size):
            for y in range(x, acc.m_size):
                lhs: Row = {}
                for g, c in graded.bracket_basis(acc.m[x], acc.m[y]).items():
                    add_into(lhs, f.values.get(acc.position(g), {}), c)
                for t, c in f.values.get(x, {}).items():
                    add_into(lhs, acc.bracket_with_m(t, y), -c)
                factor = sign(acc.parities[x] * f.parity)
                for t, c in f.values.get(y, {}).items():
                    add_into(lhs, acc.m_with_bracket(x, t), -factor * c)
                if lhs:
                    defects.append((f.label, acc.name(x), acc.name(y)))
    return defects


def is_effective(acc: AccumulatedAlgebra, level: GradedMapSpace) -> bool:
    """Restriction to g_-1 is injective on the level."""
    first = {b for b in range(acc.m_size) if acc.degrees[b] == -1}
    reducer = SpanReducer(acc.field)
    for f in level.maps:
        restricted = {(b, t): c for (b, t), c in f.as_vector().items() if b in first}
        if not reducer.add(restricted):
            return False
    return True


@dataclass
class ProlongationReport:
    """Per-level dimensions and how the computation ended."""

    name: str
    mode: str
    k: int | None
    m_sdim: tuple[int, int]
    levels: list[tuple[int, tuple[int, int], bool]]
    terminated_at: int | None
    cutoff: int
    locus: ExceptionalLocus = EMPTY_LOCUS
    checks: dict[str, bool] = dc_field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.terminated_at is not None

    def sdim_of(self, j: int) -> tuple[int, int]:
        for degree, sdim, _ in self.levels:
            if degree == j:
                return sdim
        if self.terminated_at is not None and j >= self.terminated_at:
            return (0, 0)
        raise ProlongationError(f"level {j} was not computed")

    def computed(self) -> list[tuple[int, tuple[int, int]]]:
        return [(j, sdim) for j, sdim, seeded in self.levels if not seeded]

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "mode": self.mode,
            "k": self.k,
            "m": list(self.m_sdim),
            "levels": [{"j": j, "sdim": list(sdim), "seeded": seeded} for j, sdim, seeded in self.levels],
            "terminated_at": self.terminated_at,
            "cutoff": self.cutoff,
            "locus": self.locus.describe(),
            "checks": dict(self.checks),
        }


def prolong(
    graded: BasisSuperalgebra,
    mode: str = MODE_M,
    k: int | None = None,
    cutoff: int = DEFAULT_CUTOFF,
    verify: bool = True,
) -> tuple[ProlongationReport, AccumulatedAlgebra]:
    """pr(m), pr(m, g_0) or pr(g_{<=k}) level by level up to ``cutoff``."""
    if mode not in MODES:
        raise ProlongationError(f"unknown mode {mode}")
    if not is_fundamental(graded):
        raise NotFundamentalError(f"{graded.name}: m is not generated by g_-1")
    acc = AccumulatedAlgebra(graded)
    if mode == MODE_M:
        start = 0
    elif mode == MODE_M_G0:
        acc.seed(0)
        start = 1
    else:
        if k is None or k < 0:
            raise ProlongationError("mode gk needs k >= 0")
        for degree in range(k + 1):
            acc.seed(degree)
        start = k + 1
    terminated_at = None
    locus = EMPTY_LOCUS
    effective = True
    satisfied = True
    for j in range(start, cutoff + 1):
        level = solve_level(acc, j)
        locus = locus.union(level.locus)
        if verify:
            satisfied = satisfied and not level_defects(acc, level)
            effective = effective and is_effective(acc, level)
        acc.add_level(level)
        if level.is_zero:
            terminated_at = j
            break
    report = ProlongationReport(
        name=graded.name,
        mode=mode,
        k=k if mode == MODE_G_LE_K else None,
        m_sdim=acc.m_sdim(),
        levels=[(lv.degree, lv.sdim, lv.seeded) for lv in acc.levels],
        terminated_at=terminated_at,
        cutoff=cutoff,
        locus=locus,
    )
    if verify:
        report.checks["derivation_identity"] = satisfied
        report.checks["effective"] = effective
    _LOGGER.info(
        "%s mode %s: levels %s, %s",
        graded.name,
        mode,
        [sdim for _, sdim, _ in report.levels],
        f"terminated at {terminated_at}" if terminated_at is not None else "cutoff reached",
    )
    return report, acc


def mirrors_grading(report: ProlongationReport, graded: BasisSuperalgebra) -> bool:
    """sdim pr_j = sdim g_j for 1 <= j <= depth and pr_{depth+1} = 0."""
    depth = graded.depth
    if report.terminated_at != depth + 1:
        return False
    return all(report.sdim_of(j) == graded.level_sdim(j) for j in range(1, depth + 1))


def verify_witness(
    graded: BasisSuperalgebra, v: Mapping[int, Scalar], subspace: Sequence[Mapping[int, Scalar]]
) -> bool:
    """True iff v in g_-1 and [v, V] = 0 for a codimension-1 subspace V of m."""
    m = negative_part(graded)
    reducer = SpanReducer(graded.field)
    for w in subspace:
        if set(w) - set(m):
            raise WitnessError("the subspace must lie in m")
        reducer.add(w)
    if len(reducer) != len(m) - 1:
        raise WitnessError(f"subspace has codimension {len(m) - len(reducer)}, expected 1")
    if not v or any(graded.degree(i) != -1 for i in v):
        raise WitnessError("v must be a nonzero element of g_-1")
    return all(not graded.bracket(v, w) for w in subspace)


@dataclass
class WitnessResult:
    """Outcome of a witness search."""

    found: bool
    v: Row | None = None
    subspace: list[Row] | None = None
    reason: str = ""


def witness_search(
    graded: BasisSuperalgebra, pool: Sequence[Mapping[int, Scalar]] = ()
) -> WitnessResult:
    """Look for v in g_-1 whose centralizer in m has codimension <= 1.

    A miss does not certify finite type.
    """
    field = graded.field
    m = negative_part(graded)
    if graded.depth == 1:
        return WitnessResult(True, reason="m is abelian, pr(m) = m + m (x) S(m*) is infinite")
    candidates = [{i: field.one} for i in graded.indices_of_degree(-1)] + [dict(p) for p in pool]
    for v in candidates:
        rows: dict[int, Row] = {}
        for c, i in enumerate(m):
            for k, value in graded.bracket(v, {i: field.one}).items():
                rows.setdefault(k, {})[c] = value
        matrix = SparseMatrix(field, len(m), list(rows.values()))
        kernel, _ = nullspace(matrix)
        if len(kernel) >= len(m) - 1:
            vectors = [{m[c]: value for c, value in vec.items()} for vec in kernel]
            reducer = SpanReducer(field)
            subspace = [w for w in vectors if reducer.add(w)][: len(m) - 1]
            if len(subspace) < len(m) - 1:
                for i in m:
                    if len(subspace) == len(m) - 1:
                        break
                    if reducer.add({i: field.one}):
                        subspace.append({i: field.one})
            return WitnessResult(True, v, subspace, reason=f"[{graded.format_vector(v)}, V] = 0")
    return WitnessResult(False, reason="no candidate has a centralizer of codimension 1")


def prolong_spec(
    spec: ParabolicSpec,
    mode: str = MODE_M,
    k: int | None = None,
    cutoff: int = DEFAULT_CUTOFF,
    field: ScalarField | None = None,
) -> ProlongationReport:
    """Prolongation for a parabolic of Gamma(-1-a, 1, a) over ``field``."""
    field = field or default_field()
    graded = graded_algebra(build_gamma(field), spec)
    report, _ = prolong(graded, mode=mode, k=k, cutoff=cutoff)
    return report


def independence_check(
    spec: ParabolicSpec,
    report: ProlongationReport,
    points: Sequence[Mapping[str, Fraction]],
) -> bool:
    """Level dimensions at rational points agree with the generic report."""
    for point in points:
        if report.locus.vanishes_at(point):
            continue
        graded = graded_algebra(build_gamma(RationalField(point)), spec)
        sampled, _ = prolong(graded, mode=report.mode, k=report.k, cutoff=report.cutoff, verify=False)
        if sampled.levels != report.levels:
            _LOGGER.warning("%s disagrees at %s: %s", spec, dict(point), sampled.levels)
            return False
    return True
