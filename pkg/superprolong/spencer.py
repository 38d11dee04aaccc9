"""Spencer cohomology H^{i,j}(m, g) by weight-sliced Chevalley-Eilenberg ranks.

Cochains are g (x) Lambda(m*), where Lambda is the super-exterior algebra:
the dual w^a of a basis vector e_a has exterior parity t_a = p_a + 1, so
duals of even vectors anticommute and duals of odd vectors commute. The
differential is

    d(f (x) v) = Q(f) (x) v + sum_a (-1)^{p_a t(f)} (w^a f) (x) [e_a, v],
    Q(w^k) = -1/2 sum_{a,b} (-1)^{p_a + p_a p_b} c_ab^k w^a w^b,

with Q extended as an odd derivation for t.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import itertools
import logging
from typing import Any

from .const import MODE_G_LE_K, MODE_M, MODE_M_G0, SPENCER_MAX_J
from .exceptions import CohomologyError
from .liesuper import BasisSuperalgebra, add_into, negative_part, sign
from .prolong import ProlongationReport, mirrors_grading, prolong
from .scalars import (
    EMPTY_LOCUS,
    ExceptionalLocus,
    Row,
    Scalar,
    SparseMatrix,
    echelon,
    kernel_from_echelon,
    rank_with_locus,
)

_LOGGER = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Cochain = tuple[int, Monomial]


class SpencerComplex:
    """The complex g (x) Lambda^n(m*) of a graded algebra."""

    def __init__(self, graded: BasisSuperalgebra) -> None:
        self.graded = graded
        self.field = graded.field
        self.m = sorted(negative_part(graded), key=lambda i: (-graded.degree(i), i))
        self.p = [graded.parity(g) for g in self.m]
        self.t = [(p + 1) % 2 for p in self.p]
        self.weights = [-graded.degree(g) for g in self.m]
        self._q: dict[int, dict[Monomial, Scalar]] = {k: self._q_generator(k) for k in range(len(self.m))}
        self._q_cache: dict[Monomial, dict[Monomial, Scalar]] = {}

    # Super-exterior algebra.

    def monomials(self, n: int) -> list[Monomial]:
        """Sorted index tuples; repeats only for commuting duals."""
        result = []
        for combo in itertools.combinations_with_replacement(range(len(self.m)), n):
            if any(combo[i] == combo[i + 1] and self.t[combo[i]] for i in range(n - 1)):
                continue
            result.append(combo)
        return result

    def exterior_parity(self, mono: Monomial) -> int:
        return sum(self.t[i] for i in mono) % 2

    def left_multiply(self, a: int, mono: Monomial) -> tuple[int, Monomial] | None:
        """w^a * mono as (sign, sorted monomial), or None if it vanishes."""
        if self.t[a] and a in mono:
            return None
        passed = sum(self.t[i] for i in mono if i < a)
        position = sum(1 for i in mono if i <= a)
        new = mono[:position] + (a,) + mono[position:]
        return sign(self.t[a] * passed), new

    def multiply(self, left: Monomial, right: Monomial) -> tuple[int, Monomial] | None:
        current = right
        total = 1
        for a in reversed(left):
            step = self.left_multiply(a, current)
            if step is None:
                return None
            total *= step[0]
            current = step[1]
        return total, current

    def _q_generator(self, k: int) -> dict[Monomial, Scalar]:
        out: dict[Monomial, Scalar] = {}
        half = self.field.frac(-1, 2)
        graded = self.graded
        target = self.m[k]
        for a in range(len(self.m)):
            for b in range(len(self.m)):
                c = graded.bracket_basis(self.m[a], self.m[b]).get(target)
                if not c:
                    continue
                product = self.left_multiply(a, (b,))
                if product is None:
                    continue
                factor = half * sign(self.p[a] + self.p[a] * self.p[b]) * product[0] * c
                add_into(out, {product[1]: factor})
        return out

    def q(self, mono: Monomial) -> dict[Monomial, Scalar]:
        """Q as an odd derivation."""
        if not mono:
            return {}
        cached = self._q_cache.get(mono)
        if cached is not None:
            return cached
        head, rest = mono[0], mono[1:]
        out: dict[Monomial, Scalar] = {}
        for term, c in self._q[head].items():
            product = self.multiply(term, rest)
            if product is not None:
                add_into(out, {product[1]: c * product[0]})
        if rest:
            factor = sign(self.t[head])
            for term, c in self.q(rest).items():
                product = self.left_multiply(head, term)
                if product is not None:
                    add_into(out, {product[1]: factor * c * product[0]})
        self._q_cache[mono] = out
        return out

    # Cochains.

    def weight(self, cochain: Cochain) -> int:
        v, mono = cochain
        return self.graded.degree(v) + sum(self.weights[i] for i in mono)

    def parity(self, cochain: Cochain) -> int:
        v, mono = cochain
        return (self.graded.parity(v) + sum(self.p[i] for i in mono)) % 2

    def basis(self, n: int) -> list[Cochain]:
        return [(v, mono) for mono in self.monomials(n) for v in range(self.graded.dim)]

    def slices(self, n: int) -> dict[tuple[int, int], list[Cochain]]:
        out: dict[tuple[int, int], list[Cochain]] = {}
        for cochain in self.basis(n):
            out.setdefault((self.weight(cochain), self.parity(cochain)), []).append(cochain)
        return out

    def differential(self, cochain: Cochain) -> dict[Cochain, Scalar]:
        v, mono = cochain
        out: dict[Cochain, Scalar] = {}
        for term, c in self.q(mono).items():
            add_into(out, {(v, term): c})
        tf = self.exterior_parity(mono)
        for a in range(len(self.m)):
            image = self.graded.bracket_basis(self.m[a], v)
            if not image:
                continue
            product = self.left_multiply(a, mono)
            if product is None:
                continue
            factor = sign(self.p[a] * tf) * product[0]
            for w, c in image.items():
                add_into(out, {(w, product[1]): factor * c})
        return out

    def apply(self, cochains: Mapping[Cochain, Scalar]) -> dict[Cochain, Scalar]:
        out: dict[Cochain, Scalar] = {}
        for cochain, c in cochains.items():
            add_into(out, self.differential(cochain), c)
        return out


def ce_differential(complex_: SpencerComplex, n: int, weight: int, parity: int | None = None) -> tuple[SparseMatrix, list[Cochain], list[Cochain]]:
    """Matrix of d on the weight slice of C^n; rows are images of source cochains."""
    sources = [
        c for (w, p), cochains in complex_.slices(n).items() if w == weight and (parity is None or p == parity) for c in cochains
    ]
    images = [complex_.differential(c) for c in sources]
    targets: dict[Cochain, int] = {}
    rows: list[Row] = []
    for image in images:
        row: Row = {}
        for key, value in image.items():
            col = targets.setdefault(key, len(targets))
            row[col] = value
        rows.append(row)
    return SparseMatrix(complex_.field, len(targets), rows), sources, list(targets)


@dataclass
class CohomologyTable:
    """Nonzero H^{i,j} with their super-dimensions."""

    name: str
    entries: list[tuple[int, int, tuple[int, int]]]
    locus: ExceptionalLocus = EMPTY_LOCUS
    checks: dict[str, bool] = dc_field(default_factory=dict)

    def degree(self, j: int) -> list[tuple[int, tuple[int, int]]]:
        return sorted((i, sdim) for i, jj, sdim in self.entries if jj == j)

    def weights(self, j: int) -> dict[int, tuple[int, int]]:
        return dict(self.degree(j))

    def render(self, j: int) -> str:
        parts = [f"C^{{{e}|{o}}}_{{{i}}}" for i, (e, o) in self.degree(j)]
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "entries": [{"i": i, "j": j, "sdim": list(sdim)} for i, j, sdim in sorted(self.entries, key=lambda e: (e[1], e[0]))],
            "locus": self.locus.describe(),
            "checks": dict(self.checks),
        }


def _slice_matrix(complex_: SpencerComplex, cochains: list[Cochain]) -> SparseMatrix:
    targets: dict[Cochain, int] = {}
    rows: list[Row] = []
    for c in cochains:
        row: Row = {}
        for key, value in complex_.differential(c).items():
            row[targets.setdefault(key, len(targets))] = value
        rows.append(row)
    return SparseMatrix(complex_.field, len(targets), rows)


def _cocycle_dim(matrix: SparseMatrix) -> int:
    """Dimension of the kernel of d, by elimination on the transposed matrix."""
    columns: dict[int, Row] = {}
    for i, row in enumerate(matrix.rows):
        for j, value in row.items():
            columns.setdefault(j, {})[i] = value
    form = echelon(matrix.field, columns.values())
    return len(kernel_from_echelon(form, len(matrix.rows)))


def cohomology(graded: BasisSuperalgebra, j_max: int = SPENCER_MAX_J, check_square: bool = True) -> CohomologyTable:
    """H^{i,j}(m, g) for j <= j_max.

    Ranks and cocycle spaces are computed one degree further, for the Euler
    check and for d^2 = 0 up to C^{j_max}.
    """
    complex_ = SpencerComplex(graded)
    top = j_max + 1
    slices = {n: complex_.slices(n) for n in range(top + 1)}
    dims: dict[tuple[int, int, int], int] = {}
    ranks: dict[tuple[int, int, int], int] = {}
    cocycles: dict[tuple[int, int, int], int] = {}
    locus = EMPTY_LOCUS
    for n in range(top + 1):
        for key, cochains in slices[n].items():
            matrix = _slice_matrix(complex_, cochains)
            rank, part = rank_with_locus(matrix)
            dims[(n, *key)] = len(cochains)
            ranks[(n, *key)] = rank
            cocycles[(n, *key)] = _cocycle_dim(matrix)
            if n <= j_max:
                locus = locus.union(part)
    entries = []
    for n in range(j_max + 1):
        per_weight: dict[int, list[int]] = {}
        for (w, p), cochains in slices[n].items():
            h = cocycles[(n, w, p)] - ranks.get((n - 1, w, p), 0)
            if h < 0:
                raise CohomologyError(f"negative cohomology dimension at n={n}, weight {w}")
            per_weight.setdefault(w, [0, 0])[p] += h
        for w, (even, odd) in sorted(per_weight.items()):
            if even or odd:
                entries.append((w, n, (even, odd)))
    table = CohomologyTable(graded.name, entries, locus)
    if check_square:
        table.checks["d_squared_zero"] = all(square_vanishes(complex_, n) for n in range(j_max + 1))
    table.checks["h0_is_bottom_level"] = h0_is_bottom(table, graded)
    table.checks["euler"] = euler_identity(dims, cocycles, ranks, top)
    _LOGGER.info("%s: H1 = %s, H2 = %s", graded.name, table.render(1), table.render(2))
    return table


def square_vanishes(complex_: SpencerComplex, n: int) -> bool:
    """d_{n+1} d_n = 0 on every basis cochain of C^n."""
    for cochain in complex_.basis(n):
        if complex_.apply(complex_.differential(cochain)):
            _LOGGER.warning("d^2 != 0 on %s", cochain)
            return False
    return True


def h0_is_bottom(table: CohomologyTable, graded: BasisSuperalgebra) -> bool:
    depth = graded.depth
    return table.degree(0) == [(-depth, graded.level_sdim(-depth))]


def euler_identity(
    dims: Mapping[tuple[int, int, int], int],
    cocycles: Mapping[tuple[int, int, int], int],
    ranks: Mapping[tuple[int, int, int], int],
    top: int,
) -> bool:
    """Euler identity per slice of the complex truncated at C^top.

    Keys are ``(n, weight, parity)``. With dim H^n = dim Z^n - rank d_{n-1},
    sum (-1)^n dim C^n = sum (-1)^n dim H^n + (-1)^top rank d_top.
    """
    keys = {(w, p) for n, w, p in dims}
    for w, p in keys:
        chain = 0
        homology = 0
        for n in range(top + 1):
            chain += sign(n) * dims.get((n, w, p), 0)
            homology += sign(n) * (cocycles.get((n, w, p), 0) - ranks.get((n - 1, w, p), 0))
        if chain != homology + sign(top) * ranks.get((top, w, p), 0):
            _LOGGER.warning("Euler identity fails at weight %s, parity %s", w, p)
            return False
    return True


def sampled_cohomology(
    build: Any, points: Iterable[Mapping[str, Fraction]], j_max: int = SPENCER_MAX_J
) -> list[CohomologyTable]:
    """Cohomology at rational points; ``build(point)`` returns a graded algebra."""
    return [cohomology(build(point), j_max, check_square=False) for point in points]


@dataclass
class ConsistencyReport:
    """Prolongation statements predicted by H^1 compared with computed ones."""

    name: str
    predicted_mode: str
    predicted_k: int | None
    findings: list[str]
    ok: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "predicted_mode": self.predicted_mode,
            "predicted_k": self.predicted_k,
            "findings": list(self.findings),
            "ok": self.ok,
        }


def predicted_mode(table: CohomologyTable) -> tuple[str, int | None]:
    """Smallest data determining g: m, (m, g_0) or g_{<=k}."""
    h1 = table.weights(1)
    positive = [i for i in h1 if i >= 0]
    if not positive:
        return MODE_M, None
    if max(positive) == 0:
        return MODE_M_G0, None
    return MODE_G_LE_K, max(positive)


def h1_prolongation_consistency(graded: BasisSuperalgebra, table: CohomologyTable) -> ConsistencyReport:
    """Check that H^1 weights predict the computed prolongations."""
    mode, k = predicted_mode(table)
    findings = []
    ok = True
    report: ProlongationReport
    report, _ = prolong(graded, mode=mode, k=k, cutoff=graded.depth + 2, verify=False)
    if mirrors_grading(report, graded):
        findings.append(f"pr in mode {mode}{'' if k is None else f' (k={k})'} equals g")
    else:
        ok = False
        findings.append(f"mode {mode} does not reproduce g: {report.levels}")
    if mode != MODE_M:
        plain, _ = prolong(graded, mode=MODE_M, cutoff=graded.depth + 1, verify=False)
        zero_level = plain.sdim_of(0) if plain.levels else (0, 0)
        if mirrors_grading(plain, graded) and zero_level == graded.level_sdim(0):
            ok = False
            findings.append("H^1 has nonnegative weights but pr(m) = g")
        else:
            findings.append("pr(m) differs from g, as H^1_{>=0} != 0 predicts")
    return ConsistencyReport(graded.name, mode, k, findings, ok)
