"""Structure-group reductions for the gradings p2 and p23 of diagram I.

Matrices act on columns of right coordinates: the j-th column holds the
image of the j-th basis vector, so ``E(i, j)`` sends e_j to e_i. All data
lives over a field carrying the parameter ``a`` with s = (-1-a, 1, a).
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field as dc_field
import itertools
import logging
from typing import Any

from .const import PARAM_A, REDUCTION_CASES
from .exceptions import LinearAlgebraError, ReductionError, UsageError
from .liesuper import BasisElement, BasisSuperalgebra, ad_matrix, build_gamma, sign
from .scalars import Row, Scalar, ScalarField, SpanReducer, default_field, dense_mul, s_parameters
from .superfields import CoordinateSystem, SuperPolynomial

_LOGGER = logging.getLogger(__name__)

Matrix = list[list[Scalar]]
Homogeneous = tuple[Matrix, int]

# Offsets used to sweep a weight space whose quotient multiplicity exceeds one
PENCIL_STEPS = (1, -1, 2)
MAX_CYCLIC_MODULES = 12


# Matrix helpers.


def zero_matrix(field: ScalarField, size: int) -> Matrix:
    return [[field.zero] * size for _ in range(size)]


def matrix_from(field: ScalarField, size: int, terms: Mapping[tuple[int, int], Any]) -> Matrix:
    """Sum of coeff * E(i, j) with 1-based indices."""
    out = zero_matrix(field, size)
    for (i, j), coeff in terms.items():
        out[i - 1][j - 1] = out[i - 1][j - 1] + field.convert(coeff)
    return out


def unit(field: ScalarField, size: int, i: int, j: int) -> Matrix:
    return matrix_from(field, size, {(i, j): 1})


def mat_add(a: Matrix, b: Matrix, factor: Scalar = 1) -> Matrix:
    return [[x + factor * y for x, y in zip(ra, rb, strict=True)] for ra, rb in zip(a, b, strict=True)]


def is_zero(a: Matrix) -> bool:
    return not any(v for row in a for v in row)


def is_diagonal(a: Matrix) -> bool:
    return not any(v for i, row in enumerate(a) for j, v in enumerate(row) if i != j)


def flatten(a: Matrix) -> dict[tuple[int, int], Scalar]:
    return {(i, j): v for i, row in enumerate(a) for j, v in enumerate(row) if v}


def matrix_parity(a: Matrix, parities: Sequence[int]) -> int | None:
    """Parity of a homogeneous matrix, None for zero."""
    found = {(parities[i] + parities[j]) % 2 for (i, j) in flatten(a)}
    if len(found) > 1:
        raise ReductionError("matrix is not parity-homogeneous")
    return found.pop() if found else None


def supercommutator(field: ScalarField, a: Matrix, pa: int, b: Matrix, pb: int) -> Matrix:
    return mat_add(dense_mul(field, a, b), dense_mul(field, b, a), -sign(pa * pb))


def apply(a: Matrix, vector: Sequence[Scalar]) -> list[Scalar]:
    return [sum((x * y for x, y in zip(row, vector, strict=True)), 0 * vector[0]) for row in a]


def submatrix(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[a[i][j] for j in cols] for i in rows]


def column_rank(field: ScalarField, a: Matrix) -> int:
    reducer = SpanReducer(field)
    cols = len(a[0]) if a else 0
    return sum(1 for j in range(cols) if reducer.add({i: row[j] for i, row in enumerate(a)}))


def _span(field: ScalarField, matrices: Sequence[Matrix]) -> SpanReducer:
    reducer = SpanReducer(field)
    for m in matrices:
        reducer.add(flatten(m))
    return reducer


def same_span(field: ScalarField, left: Sequence[Matrix], right: Sequence[Matrix]) -> bool:
    span = _span(field, left)
    return len(span) == len(_span(field, right)) and all(span.contains(flatten(m)) for m in right)


# Representations.


@dataclass
class MatrixRep:
    """Representation of a named-basis superalgebra by matrices."""

    algebra: BasisSuperalgebra
    parities: tuple[int, ...]
    matrices: dict[str, Matrix]
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        missing = [n for n in self.algebra.names if n not in self.matrices]
        if missing:
            raise ReductionError(f"{self.name or 'representation'}: no matrix for {', '.join(missing)}", missing)
        for element in self.algebra.basis:
            m = self.matrices[element.name]
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise ReductionError(f"{element.name}: matrix is not {self.dim}x{self.dim}", element.name)
            parity = matrix_parity(m, self.parities)
            if parity is not None and parity != element.parity:
                raise ReductionError(f"{element.name}: matrix parity does not match", element.name)

    @property
    def field(self) -> ScalarField:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return len(self.parities)

    def matrix(self, name: str) -> Matrix:
        return self.matrices[name]

    def of(self, v: Mapping[int, Scalar]) -> Matrix:
        out = zero_matrix(self.field, self.dim)
        for i, coeff in v.items():
            out = mat_add(out, self.matrices[self.algebra.basis[i].name], coeff)
        return out

    def act(self, name: str, target: Homogeneous) -> Homogeneous:
        """Adjoint action of a basis element on a homogeneous matrix."""
        parity = self.algebra.basis[self.algebra.index(name)].parity
        m, p = target
        return supercommutator(self.field, self.matrices[name], parity, m, p), (parity + p) % 2

    def generators(self) -> list[Homogeneous]:
        return [(self.matrices[e.name], e.parity) for e in self.algebra.basis]

    def defects(self) -> list[tuple[str, str]]:
        """Pairs whose bracket is not sent to the supercommutator."""
        alg = self.algebra
        out = []
        for i, j in itertools.combinations_with_replacement(range(alg.dim), 2):
            left = self.of(alg.bracket_basis(i, j))
            ei, ej = alg.basis[i], alg.basis[j]
            right = supercommutator(self.field, self.matrices[ei.name], ei.parity, self.matrices[ej.name], ej.parity)
            if flatten(mat_add(left, right, -1)):
                out.append((ei.name, ej.name))
        return out

    def restrict(self, positions: Sequence[int], name: str = "") -> MatrixRep:
        """Subrepresentation on the basis vectors at 1-based ``positions``."""
        idx = [p - 1 for p in positions]
        rest = [i for i in range(self.dim) if i not in idx]
        for element in self.algebra.basis:
            if flatten(submatrix(self.matrices[element.name], rest, idx)):
                raise ReductionError(f"{element.name} does not preserve the subspace", element.name)
        return MatrixRep(
            self.algebra,
            tuple(self.parities[i] for i in idx),
            {n: submatrix(m, idx, idx) for n, m in self.matrices.items()},
            tuple(self.labels[i] for i in idx) if self.labels else (),
            name,
        )


def subalgebra(alg: BasisSuperalgebra, elements: Mapping[str, Row], name: str = "") -> BasisSuperalgebra:
    """Structure constants of a bracket-closed span of elements of ``alg``."""
    names = list(elements)
    reducer = SpanReducer(alg.field)
    for n in names:
        if not reducer.add(elements[n]):
            raise ReductionError(f"{n} is linearly dependent on the earlier elements", n)
    brackets: dict[tuple[int, int], Row] = {}
    for i, j in itertools.combinations_with_replacement(range(len(names)), 2):
        value = alg.bracket(elements[names[i]], elements[names[j]])
        try:
            coords = reducer.coordinates(value)
        except LinearAlgebraError as err:
            raise ReductionError(f"[{names[i]}, {names[j]}] leaves the span", (names[i], names[j])) from err
        if coords:
            brackets[(i, j)] = coords
    basis = [BasisElement(n, alg.vector_parity(elements[n])) for n in names]
    return BasisSuperalgebra(alg.field, basis, brackets, name)


def adjoint_rep(
    alg: BasisSuperalgebra, sub: BasisSuperalgebra, elements: Mapping[str, Row], space: Sequence[str], name: str = ""
) -> MatrixRep:
    """Action of ``sub`` on the span of the ``space`` basis vectors of ``alg``."""
    indices = [alg.index(s) for s in space]
    matrices = {n: ad_matrix(alg, elements[n], indices) for n in sub.names}
    parities = tuple(alg.parity(i) for i in indices)
    return MatrixRep(sub, parities, matrices, tuple(space), name)


# gl(1|1) and its modules.


@dataclass(frozen=True)
class KacModuleLabel:
    """Indecomposable gl(1|1)-module: a typical <c, n> or a projective P(n)."""

    kind: str  # "typical" or "projective"
    c: Scalar
    n: Scalar

    def describe(self, field: ScalarField) -> str:
        if self.kind == "projective":
            return f"P({field.format(self.n)})"
        return f"<{field.format(self.c)}, {field.format(self.n)}>"


def typical(field: ScalarField, c: Any, n: Any) -> KacModuleLabel:
    return KacModuleLabel("typical", field.convert(c), field.convert(n))


def projective(field: ScalarField, n: Any) -> KacModuleLabel:
    return KacModuleLabel("projective", field.zero, field.convert(n))


GL11_NAMES = ("E", "N", "psi+", "psi-")


def gl11_algebra(field: ScalarField) -> BasisSuperalgebra:
    """gl(1|1) with E central, [N, psi±] = ±psi± and [psi+, psi-] = E."""
    basis = [BasisElement("E", 0), BasisElement("N", 0), BasisElement("psi+", 1), BasisElement("psi-", 1)]
    one = field.one
    brackets = {(1, 2): {2: one}, (1, 3): {3: -one}, (2, 3): {0: one}}
    return BasisSuperalgebra(field, basis, brackets, "gl(1|1)")


def kac_module(field: ScalarField, c: Any, n: Any, parity: int = 0) -> MatrixRep:
    """<c, n>: top vector of N-weight n, psi+ sends the bottom to c times the top."""
    c, n = field.convert(c), field.convert(n)
    matrices = {
        "E": matrix_from(field, 2, {(1, 1): c, (2, 2): c}),
        "N": matrix_from(field, 2, {(1, 1): n, (2, 2): n - 1}),
        "psi+": matrix_from(field, 2, {(1, 2): c}),
        "psi-": matrix_from(field, 2, {(2, 1): 1}),
    }
    return MatrixRep(gl11_algebra(field), (parity, (parity + 1) % 2), matrices, ("top", "bottom"), "kac")


def projective_cover(field: ScalarField, n: Any) -> MatrixRep:
    """P(n): the 4-dimensional indecomposable with E = 0 and head of weight n."""
    n = field.convert(n)
    matrices = {
        "E": zero_matrix(field, 4),
        "N": matrix_from(field, 4, {(1, 1): n, (2, 2): n + 1, (3, 3): n - 1, (4, 4): n}),
        "psi+": matrix_from(field, 4, {(2, 1): 1, (4, 3): 1}),
        "psi-": matrix_from(field, 4, {(3, 1): 1, (4, 2): -1}),
    }
    return MatrixRep(gl11_algebra(field), (0, 1, 1, 0), matrices, ("head", "up", "down", "socle"), "projective")


def dual(rep: MatrixRep) -> MatrixRep:
    """Dual module via the negative supertranspose."""
    size = rep.dim
    matrices = {}
    for element in rep.algebra.basis:
        a = rep.matrices[element.name]
        matrices[element.name] = [
            [-sign(element.parity * rep.parities[j]) * a[j][i] for j in range(size)] for i in range(size)
        ]
    labels = tuple(f"{label}*" for label in rep.labels)
    return MatrixRep(rep.algebra, rep.parities, matrices, labels, f"{rep.name}*" if rep.name else "")


def tensor(left: MatrixRep, right: MatrixRep) -> MatrixRep:
    """x(v (x) w) = xv (x) w + (-1)^{|x||v|} v (x) xw; index i * dim(right) + j."""
    if left.algebra.names != right.algebra.names:
        raise ReductionError("tensor factors are modules over different algebras")
    field = left.field
    d1, d2 = left.dim, right.dim
    parities = tuple((p + q) % 2 for p in left.parities for q in right.parities)
    matrices = {}
    for element in left.algebra.basis:
        a, b = left.matrices[element.name], right.matrices[element.name]
        out = zero_matrix(field, d1 * d2)
        for i, j in itertools.product(range(d1), range(d2)):
            col = i * d2 + j
            for k in range(d1):
                if a[k][i]:
                    out[k * d2 + j][col] = out[k * d2 + j][col] + a[k][i]
            factor = sign(element.parity * left.parities[i])
            for k in range(d2):
                if b[k][j]:
                    out[i * d2 + k][col] = out[i * d2 + k][col] + factor * b[k][j]
        matrices[element.name] = out
    return MatrixRep(left.algebra, parities, matrices, name=f"{left.name}(x){right.name}")


def gl11_decompose(rep: MatrixRep) -> list[KacModuleLabel]:
    """Indecomposable summands of a gl(1|1)-module with diagonal E and N.

    Blocks with E = c != 0 split into typicals counted by the kernel of psi+
    on each N-eigenspace; blocks with E = 0 must be sums of projectives,
    counted by the rank of psi+ psi- on the head eigenspaces.
    """
    field = rep.field
    e, n, plus, minus = (rep.matrix(name) for name in GL11_NAMES)
    if not (is_diagonal(e) and is_diagonal(n)):
        raise ReductionError("E and N must act diagonally")
    blocks: dict[Scalar, list[int]] = {}
    for i in range(rep.dim):
        blocks.setdefault(e[i][i], []).append(i)
    labels: list[KacModuleLabel] = []
    for c, idx in blocks.items():
        eigen: dict[Scalar, list[int]] = {}
        for i in idx:
            eigen.setdefault(n[i][i], []).append(i)
        count = 0
        if c:
            for weight, cols in eigen.items():
                kernel = len(cols) - column_rank(field, submatrix(plus, idx, cols))
                labels.extend([typical(field, c, weight)] * kernel)
                count += kernel
            expected = 2 * count
        else:
            square = dense_mul(field, plus, minus)
            for weight, cols in eigen.items():
                rank = column_rank(field, submatrix(square, idx, cols))
                labels.extend([projective(field, weight)] * rank)
                count += rank
            expected = 4 * count
        if expected != len(idx):
            raise ReductionError(
                f"block E = {field.format(c)} of dimension {len(idx)} is not a sum of recognized indecomposables",
                field.format(c),
            )
    return sorted(labels, key=lambda label: (label.kind, str(label.c), str(label.n)))


def tensor_rule(field: ScalarField, c1: Any, n1: Any, c2: Any, n2: Any) -> list[KacModuleLabel]:
    """Expected decomposition of <c1, n1> (x) <c2, n2>."""
    c1, n1, c2, n2 = (field.convert(v) for v in (c1, n1, c2, n2))
    if c1 + c2:
        labels = [typical(field, c1 + c2, n1 + n2), typical(field, c1 + c2, n1 + n2 - 1)]
    else:
        labels = [projective(field, n1 + n2 - 1)]
    return sorted(labels, key=lambda label: (label.kind, str(label.c), str(label.n)))


def tensor_rule_check(field: ScalarField, c1: Any, n1: Any, c2: Any, n2: Any) -> bool:
    computed = gl11_decompose(tensor(kac_module(field, c1, n1), kac_module(field, c2, n2)))
    return computed == tensor_rule(field, c1, n1, c2, n2)


# Reduction cases.


@dataclass
class ReductionCase:
    """g0 of one grading acting on g_{-1}, written in the e-basis."""

    label: str
    field: ScalarField
    s: tuple[Scalar, Scalar, Scalar]
    gamma: BasisSuperalgebra
    g0: BasisSuperalgebra
    elements: dict[str, Row]
    rep: MatrixRep
    torus: tuple[str, ...]

    @property
    def a(self) -> Scalar:
        return self.field.div(self.s[2], self.s[1])

    def weights(self) -> list[tuple[Scalar, ...]]:
        matrices = [self.rep.matrix(n) for n in self.torus]
        if not all(is_diagonal(m) for m in matrices):
            raise ReductionError(f"{self.label}: torus is not diagonal in the e-basis")
        return [tuple(m[i][i] for m in matrices) for i in range(self.rep.dim)]

    def act(self, name: str, target: Homogeneous) -> Homogeneous:
        return self.rep.act(name, target)

    def homogeneous(self, m: Matrix) -> Homogeneous:
        parity = matrix_parity(m, self.rep.parities)
        return m, 0 if parity is None else parity


def _case_elements(label: str, field: ScalarField, s: tuple[Scalar, Scalar, Scalar]) -> tuple[dict, tuple, tuple]:
    s1, s2, s3 = s
    half = field.frac(1, 2)
    if label == "p2I":
        ratio = field.div(s1, s3)
        elements = {
            "Z": {"H1": half, "H2": half},
            "X": {"X3": 1},
            "H": {"H3": 1},
            "Y": {"Y3": 1},
            "I": {"H1": ratio, "H2": ratio + 1},
            "F+": {"yxx": -1},
            "F-": {"yxy": 1},
            "Fb+": {"xyx": field.div(field.one, s3)},
            "Fb-": {"xyy": field.div(field.one, s3)},
        }
        return elements, ("Y2", "Y1", "yyx", "yyy"), ("I", "H")
    elements = {
        "Z": {"H1": 1, "H2": half, "H3": half},
        "E": {"H1": -s1 * half, "H2": s2 * half, "H3": s3 * half},
        "N": {"H2": half, "H3": half},
        "psi+": {"yxx": 1},
        "psi-": {"xyy": 1},
    }
    return elements, ("Y2", "Y3", "yxy", "yyx"), ("E", "N")


def reduction_field(field: ScalarField | None = None) -> ScalarField:
    field = default_field() if field is None else field
    if PARAM_A not in field.names and PARAM_A not in getattr(field, "point", {}):
        raise UsageError("reductions need a field carrying the parameter a")
    return field


def reduction_case(label: str, field: ScalarField | None = None) -> ReductionCase:
    if label not in REDUCTION_CASES:
        raise UsageError(f"unknown reduction case {label}; expected one of {', '.join(REDUCTION_CASES)}")
    field = reduction_field(field)
    s = s_parameters(field, field.parameter(PARAM_A))
    gamma = build_gamma(field, *s)
    data, space, torus = _case_elements(label, field, s)
    elements = {name: gamma.vector(terms) for name, terms in data.items()}
    g0 = subalgebra(gamma, elements, f"g0[{label}]")
    rep = adjoint_rep(gamma, g0, elements, space, f"g-1[{label}]")
    _LOGGER.debug("Built reduction case %s: g0 of sdim %s on g-1 of dim %d", label, g0.sdim, rep.dim)
    return ReductionCase(label, field, s, gamma, g0, elements, rep, torus)


def expected_weights(case: ReductionCase) -> list[tuple[Scalar, Scalar]]:
    field = case.field
    s1, s2, s3 = case.s
    if case.label == "p2I":
        b = field.div(s2 - s1, s3)
        return [(b - 1, field.zero), (b + 1, field.zero), (b, field.one), (b, -field.one)]
    return [(-s2, -field.one), (-s3, -field.one), (-s3, field.zero), (-s2, field.zero)]


# Operator, source, target of each arrow in the weight diagram of g-1.
WEIGHT_ARROWS = {
    "p2I": (
        ("F+", 1, 3),
        ("F-", 1, 4),
        ("F-", 3, 2),
        ("F+", 4, 2),
        ("Y", 3, 4),
        ("X", 4, 3),
        ("Fb+", 2, 3),
        ("Fb-", 2, 4),
        ("Fb-", 3, 1),
        ("Fb+", 4, 1),
    ),
    "p23I": (("psi+", 1, 4), ("psi+", 2, 3), ("psi-", 4, 1), ("psi-", 3, 2)),
}


def missing_arrows(case: ReductionCase) -> list[tuple[str, int, int]]:
    return [
        (op, src, dst) for op, src, dst in WEIGHT_ARROWS[case.label] if not case.rep.matrix(op)[dst - 1][src - 1]
    ]


def printed_matrices(case: ReductionCase) -> dict[str, Matrix]:
    """Odd generators of g0 for p2I as matrices in the e-basis."""
    field = case.field
    s1, s2, s3 = case.s
    inv = field.div(field.one, s3)
    return {
        "F+": matrix_from(field, 4, {(3, 1): 1, (2, 4): s1}),
        "F-": matrix_from(field, 4, {(4, 1): -1, (2, 3): s1}),
        "Fb+": matrix_from(field, 4, {(1, 4): -s2 * inv, (3, 2): -inv}),
        "Fb-": matrix_from(field, 4, {(1, 3): s2 * inv, (4, 2): -inv}),
    }


# Embedding families: free parameters of the matrices of g0 in gl(g-1).


def embedding_family(case: ReductionCase) -> dict[str, Homogeneous]:
    field = case.field
    s1, s2, s3 = case.s

    def slot(terms: Mapping[tuple[int, int], Any], parity: int) -> Homogeneous:
        return matrix_from(field, 4, terms), parity

    if case.label == "p2I":
        return {
            "a1": slot({(1, 1): 1, (3, 3): 1}, 0),
            "a2": slot({(2, 2): 1, (4, 4): 1}, 0),
            "a3": slot({(3, 3): 1, (4, 4): -1}, 0),
            "a4": slot({(3, 4): 1}, 0),
            "a5": slot({(4, 3): 1}, 0),
            "b1": slot({(3, 1): 1, (2, 4): s1}, 1),
            "b2": slot({(4, 1): 1, (2, 3): -s1}, 1),
            "b3": slot({(3, 2): 1, (1, 4): s2}, 1),
            "b4": slot({(4, 2): 1, (1, 3): -s2}, 1),
        }
    return {
        "a1": slot({(1, 1): 1, (3, 3): 1}, 0),
        "a2": slot({(2, 2): 1, (4, 4): 1}, 0),
        "a3": slot({(3, 3): 1, (4, 4): -1}, 0),
        "b1": slot({(1, 4): s2, (2, 3): s3}, 1),
        "b2": slot({(3, 2): -1, (4, 1): -1}, 1),
    }


def family_slots(case: ReductionCase) -> dict[str, dict[str, Scalar]]:
    field = case.field
    minus_one = -field.one
    if case.label == "p2I":
        slot = -field.div(field.one, case.s[2])
        return {
            "F+": {"b1": field.one},
            "F-": {"b2": minus_one},
            "Fb+": {"b3": slot},
            "Fb-": {"b4": slot},
            "Z": {"a1": minus_one, "a2": minus_one},
        }
    return {"psi-": {"b1": field.one}, "psi+": {"b2": field.one}, "Z": {"a1": minus_one, "a2": minus_one}}


def family_matrix(case: ReductionCase, values: Mapping[str, Any]) -> Matrix:
    family = embedding_family(case)
    out = zero_matrix(case.field, 4)
    for name, value in values.items():
        out = mat_add(out, family[name][0], case.field.convert(value))
    return out


def embedding_matrix_check(case: ReductionCase) -> dict[str, bool]:
    field = case.field
    family = embedding_family(case)
    g0 = [case.rep.matrix(n) for n in case.g0.names]
    members = list(family.values())
    span = _span(field, [m for m, _ in members])
    closed = all(
        span.contains(flatten(supercommutator(field, a, pa, b, pb)))
        for (a, pa), (b, pb) in itertools.combinations_with_replacement(members, 2)
    )
    slots = all(
        not flatten(mat_add(family_matrix(case, values), case.rep.matrix(name), -1))
        for name, values in family_slots(case).items()
    )
    return {
        "family_spans_g0": same_span(field, [m for m, _ in members], g0),
        "family_closed": closed,
        "slots": slots,
        "zero_parameters": is_zero(family_matrix(case, {})),
    }


# sl(2|1) inside g0 for p2I.

SL21_NAMES = ("X", "H", "Y", "I", "F+", "F-", "Fb+", "Fb-")
SL21_RELATIONS: tuple[tuple[str, str, dict[str, tuple[int, int]]], ...] = (
    ("H", "X", {"X": (2, 1)}),
    ("H", "Y", {"Y": (-2, 1)}),
    ("X", "Y", {"H": (1, 1)}),
    ("H", "F+", {"F+": (1, 1)}),
    ("H", "F-", {"F-": (-1, 1)}),
    ("H", "Fb+", {"Fb+": (1, 1)}),
    ("H", "Fb-", {"Fb-": (-1, 1)}),
    ("I", "F+", {"F+": (1, 1)}),
    ("I", "F-", {"F-": (1, 1)}),
    ("I", "Fb+", {"Fb+": (-1, 1)}),
    ("I", "Fb-", {"Fb-": (-1, 1)}),
    ("X", "F-", {"F+": (-1, 1)}),
    ("X", "Fb-", {"Fb+": (1, 1)}),
    ("Y", "F+", {"F-": (-1, 1)}),
    ("Y", "Fb+", {"Fb-": (1, 1)}),
    ("F+", "Fb-", {"I": (1, 2), "H": (-1, 2)}),
    ("F-", "Fb+", {"I": (1, 2), "H": (1, 2)}),
    ("F+", "Fb+", {"X": (1, 1)}),
    ("F-", "Fb-", {"Y": (1, 1)}),
)


def sl21_algebra(case: ReductionCase) -> BasisSuperalgebra:
    return subalgebra(case.gamma, {n: case.elements[n] for n in SL21_NAMES}, "sl(2|1)")


def sl21_relations_check(case: ReductionCase) -> list[tuple[str, str]]:
    """Pairs whose bracket differs from the relation table; unlisted pairs must commute."""
    field = case.field
    alg = sl21_algebra(case)
    table: dict[tuple[str, str], Row] = {}
    for left, right, terms in SL21_RELATIONS:
        row = alg.vector({n: field.frac(*q) for n, q in terms.items()})
        table[(left, right)] = row
        twist = -sign(alg.parity(alg.index(left)) * alg.parity(alg.index(right)))
        table[(right, left)] = {k: twist * v for k, v in row.items()}
    failed = []
    for i, j in itertools.product(range(alg.dim), repeat=2):
        key = (alg.names[i], alg.names[j])
        expected = table.get(key, {})
        got = alg.bracket_basis(i, j)
        if {k: v for k, v in got.items() if v} != {k: v for k, v in expected.items() if v}:
            failed.append(key)
    return failed


# The modules V1, V2 of p2I and B1..B4, A of p23I in gl(g-1).


def p2_phis(case: ReductionCase) -> dict[str, Matrix]:
    field = case.field
    s1, s2, s3 = case.s
    inv = field.div(field.one, s3)
    return {
        "phi1": matrix_from(field, 4, {(1, 2): 1}),
        "phi2": matrix_from(field, 4, {(1, 4): -s1, (3, 2): 1}),
        "phi3": matrix_from(field, 4, {(1, 3): -s1, (4, 2): -1}),
        "phi4": matrix_from(field, 4, {(2, 1): 1}),
        "phi5": matrix_from(field, 4, {(2, 4): s2 * inv, (3, 1): -inv}),
        "phi6": matrix_from(field, 4, {(2, 3): -s2 * inv, (4, 1): -inv}),
    }


P2_MODULES = {"k1": ("phi1", "phi2", "phi3"), "k2": ("phi4", "phi5", "phi6")}
# Odd operator, source, image (None for zero).
P2_GENERATION = (
    ("F+", "phi1", "phi2"),
    ("F-", "phi1", "phi3"),
    ("Fb+", "phi1", None),
    ("Fb-", "phi1", None),
    ("Fb+", "phi4", "phi5"),
    ("Fb-", "phi4", "phi6"),
)


def p23_matrices(case: ReductionCase) -> dict[str, Matrix]:
    field = case.field
    _, s2, s3 = case.s
    return {
        "phi1": matrix_from(field, 4, {(4, 2): 1}),
        "phi2": matrix_from(field, 4, {(1, 2): s2, (4, 3): s3}),
        "phi3": matrix_from(field, 4, {(1, 3): 1}),
        "phi4": matrix_from(field, 4, {(1, 2): -1, (4, 3): -1}),
        "phi5": matrix_from(field, 4, {(3, 1): 1}),
        "phi6": matrix_from(field, 4, {(2, 1): s3, (3, 4): s2}),
        "phi7": matrix_from(field, 4, {(2, 4): 1}),
        "phi8": matrix_from(field, 4, {(2, 1): -1, (3, 4): -1}),
        "xi": matrix_from(field, 4, {(1, 1): 1}),
        "xi+": matrix_from(field, 4, {(1, 4): 1}),
        "xi-": matrix_from(field, 4, {(4, 1): 1}),
    }


# Module, generator, odd operator, image; the image is killed by the operator.
P23_B_MODULES = (
    ("B1", "phi1", "psi-", "phi2"),
    ("B2", "phi3", "psi+", "phi4"),
    ("B3", "phi5", "psi-", "phi6"),
    ("B4", "phi7", "psi+", "phi8"),
)
P23_INTERMEDIATE = {"k+": ("xi+",), "k-": ("xi-",), "sl": ("xi+", "xi-")}
P2_INTERMEDIATE = {**P2_MODULES, "sl": P2_MODULES["k1"] + P2_MODULES["k2"]}

# Block-diagonal positions of gl(V1) + gl(V2) with V1 = <e1, e4>, V2 = <e2, e3>.
P23_BLOCKS = ((1, 4), (2, 3))
P23_POSITIONS = tuple((i, j) for block in P23_BLOCKS for i in block for j in block)
FULL_POSITIONS = tuple(itertools.product(range(1, 5), repeat=2))


def torus_weight(case: ReductionCase, m: Matrix) -> tuple[Scalar, ...] | None:
    """Weight of ``m`` under the torus of g0, None if not a weight vector."""
    field = case.field
    out = []
    for name in case.torus:
        image = case.act(name, (m, 0))[0]
        entries = flatten(m)
        if not entries:
            return None
        key = next(iter(entries))
        value = field.div(image[key[0]][key[1]], entries[key])
        if flatten(mat_add(image, m, -value)):
            return None
        out.append(value)
    return tuple(out)


def in_span_mod(case: ReductionCase, m: Matrix, extra: Sequence[Matrix]) -> bool:
    """True if ``m`` lies in rho(g0) + span(extra)."""
    span = _span(case.field, [case.rep.matrix(n) for n in case.g0.names] + list(extra))
    return span.contains(flatten(m))


def closed_under_g0(case: ReductionCase, extra: Sequence[Matrix]) -> bool:
    for m in extra:
        target = case.homogeneous(m)
        for name in case.g0.names:
            if not in_span_mod(case, case.act(name, target)[0], extra):
                return False
    return True


def is_subalgebra(case: ReductionCase, extra: Sequence[Matrix]) -> bool:
    members = [case.homogeneous(m) for m in extra] + case.rep.generators()
    span = _span(case.field, [m for m, _ in members])
    return all(
        span.contains(flatten(supercommutator(case.field, a, pa, b, pb)))
        for (a, pa), (b, pb) in itertools.combinations_with_replacement(members, 2)
    )


def is_abelian(case: ReductionCase, extra: Sequence[Matrix]) -> bool:
    members = [case.homogeneous(m) for m in extra]
    return all(
        is_zero(supercommutator(case.field, a, pa, b, pb))
        for (a, pa), (b, pb) in itertools.combinations_with_replacement(members, 2)
    )


# Enumeration of intermediate subalgebras.


@dataclass
class Intermediate:
    """A subalgebra strictly between rho(g0) and the ambient algebra."""

    extra: list[Homogeneous]
    sdim: tuple[int, int]

    def matches(self, case: ReductionCase, expected: Sequence[Matrix]) -> bool:
        base = [case.rep.matrix(n) for n in case.g0.names]
        return same_span(case.field, base + [m for m, _ in self.extra], base + list(expected))


def _cyclic(case: ReductionCase, seed: Homogeneous) -> list[Homogeneous]:
    """Complement of rho(g0) in the g0-module generated by rho(g0) and ``seed``."""
    reducer = _span(case.field, [case.rep.matrix(n) for n in case.g0.names])
    if not reducer.add(flatten(seed[0])):
        return []
    extra, queue = [seed], [seed]
    while queue:
        current = queue.pop()
        for name in case.g0.names:
            image = case.act(name, current)
            if reducer.add(flatten(image[0])):
                extra.append(image)
                queue.append(image)
    return extra


def _seeds(case: ReductionCase, positions: Sequence[tuple[int, int]]) -> list[Homogeneous]:
    """Representatives of the torus weight spaces of ambient / rho(g0)."""
    field, parities = case.field, case.rep.parities
    diagonals = case.weights()
    by_weight: dict[tuple[Scalar, ...], list[Homogeneous]] = {}
    for i, j in positions:
        weight = tuple(x - y for x, y in zip(diagonals[i - 1], diagonals[j - 1], strict=True))
        by_weight.setdefault(weight, []).append((unit(field, 4, i, j), (parities[i - 1] + parities[j - 1]) % 2))
    seeds: list[Homogeneous] = []
    for weight, units in by_weight.items():
        reducer = _span(field, [case.rep.matrix(n) for n in case.g0.names])
        reps = [u for u in units if reducer.add(flatten(u[0]))]
        seeds.extend(reps)
        if len(reps) > 1:
            _LOGGER.debug("Weight %s has quotient multiplicity %d; sweeping a pencil", weight, len(reps))
            for (m1, p1), (m2, p2) in itertools.combinations(reps, 2):
                if p1 == p2:
                    seeds.extend((mat_add(m1, m2, step), p1) for step in PENCIL_STEPS)
    return seeds


def intermediate_subalgebras(case: ReductionCase, positions: Sequence[tuple[int, int]]) -> list[Intermediate]:
    """Subalgebras K with rho(g0) < K < ambient that are g0-submodules.

    The ambient algebra is spanned by the unit matrices at ``positions``.
    Candidates are sums of cyclic submodules generated by weight vectors.
    """
    field = case.field
    base = [case.rep.matrix(n) for n in case.g0.names]
    ambient = _span(field, [unit(field, 4, i, j) for i, j in positions])
    if not all(ambient.contains(flatten(m)) for m in base):
        raise ReductionError(f"{case.label}: rho(g0) is not inside the ambient algebra")
    modules: list[list[Homogeneous]] = []
    for seed in _seeds(case, positions):
        module = _cyclic(case, seed)
        span = base + [m for m, _ in module]
        if module and not any(same_span(field, span, base + [m for m, _ in other]) for other in modules):
            modules.append(module)
    if len(modules) > MAX_CYCLIC_MODULES:
        raise ReductionError(f"{case.label}: {len(modules)} cyclic submodules exceed the enumeration limit")
    found: list[Intermediate] = []
    for size in range(1, len(modules) + 1):
        for subset in itertools.combinations(modules, size):
            reducer = _span(field, base)
            extra = [h for module in subset for h in module if reducer.add(flatten(h[0]))]
            if len(reducer) == len(positions):
                continue
            candidate = Intermediate(extra, _sdim(case, extra))
            if any(candidate.matches(case, [m for m, _ in other.extra]) for other in found):
                continue
            if is_subalgebra(case, [m for m, _ in extra]):
                found.append(candidate)
    _LOGGER.debug("%s: %d cyclic submodules, %d intermediate subalgebras", case.label, len(modules), len(found))
    return sorted(found, key=lambda k: (sum(k.sdim), k.sdim))


def _sdim(case: ReductionCase, extra: Sequence[Homogeneous]) -> tuple[int, int]:
    even, odd = case.g0.sdim
    for _, parity in extra:
        if parity:
            odd += 1
        else:
            even += 1
    return even, odd


def intermediate_subalgebras_check(
    case: ReductionCase,
) -> tuple[bool, list[Intermediate], dict[str, Intermediate | None]]:
    """Compare the enumerated subalgebras with the expected list for the case."""
    if case.label == "p2I":
        positions, matrices, expected = FULL_POSITIONS, p2_phis(case), P2_INTERMEDIATE
    else:
        positions, matrices, expected = P23_POSITIONS, p23_matrices(case), P23_INTERMEDIATE
    found = intermediate_subalgebras(case, positions)
    matched = {
        name: next((k for k in found if k.matches(case, [matrices[n] for n in names])), None)
        for name, names in expected.items()
    }
    ok = len(found) == len(expected) and all(k is not None for k in matched.values())
    return ok, found, matched


# Orbits through a highest-weight line.


@dataclass
class GrassmannVector:
    """Vector whose coordinates are polynomials in odd orbit parameters."""

    coords: CoordinateSystem
    parities: tuple[int, ...]
    entries: list[SuperPolynomial]

    @classmethod
    def from_scalars(
        cls, coords: CoordinateSystem, field: ScalarField, parities: Sequence[int], values: Sequence[Any]
    ) -> GrassmannVector:
        return cls(coords, tuple(parities), [SuperPolynomial.constant(coords, field, v) for v in values])

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def field(self) -> ScalarField:
        return self.entries[0].field

    def exponential(self, param: str, matrix: Matrix) -> GrassmannVector:
        """exp(param * A) for an odd matrix A and an odd parameter."""
        if not self.coords.is_odd(param):
            raise ReductionError(f"{param} is not an odd parameter", param)
        if matrix_parity(matrix, self.parities) == 0:
            raise ReductionError("only odd matrices are exponentiated against odd parameters", param)
        theta = SuperPolynomial.variable(self.coords, self.field, param)
        out = []
        for j in range(self.dim):
            acc = SuperPolynomial.zero(self.coords, self.field)
            for i in range(self.dim):
                if matrix[j][i]:
                    acc = acc + self.entries[i].scale(matrix[j][i])
            out.append(self.entries[j] + (theta * acc).scale(sign(self.parities[j])))
        return GrassmannVector(self.coords, self.parities, out)

    def parity_consistent(self) -> bool:
        return all(
            not poly or all(SuperPolynomial.term_parity(key) == p for key in poly.terms)
            for poly, p in zip(self.entries, self.parities, strict=True)
        )

    def coefficient_vectors(self, order: int) -> list[list[Scalar]]:
        """Coefficients of each monomial of degree at most ``order``."""
        keys = sorted({key for poly in self.entries for key in poly.terms if sum(key[0]) + len(key[1]) <= order})
        return [[poly.terms.get(key, self.field.zero) for poly in self.entries] for key in keys]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrassmannVector):
            return NotImplemented
        return self.parities == other.parities and all(
            a == b for a, b in zip(self.entries, other.entries, strict=True)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass
class TangentFiltration:
    """Spans of the coefficient vectors of an orbit point up to each order."""

    point: GrassmannVector
    spans: list[SpanReducer] = dc_field(default_factory=list)

    @classmethod
    def of(cls, point: GrassmannVector, order: int) -> TangentFiltration:
        spans = []
        for k in range(order + 1):
            reducer = SpanReducer(point.field)
            for vector in point.coefficient_vectors(k):
                reducer.add(dict(enumerate(vector)))
            spans.append(reducer)
        return cls(point, spans)

    def dims(self) -> list[int]:
        return [len(span) for span in self.spans]

    def contains(self, vector: Sequence[Scalar], order: int) -> bool:
        return self.spans[order].contains(dict(enumerate(vector)))


def orbit_point(
    field: ScalarField,
    parities: Sequence[int],
    base: Sequence[Any],
    generators: Sequence[tuple[str, Matrix]],
) -> GrassmannVector:
    """Apply exp(t_1 A_1), then exp(t_2 A_2), ... to ``base``."""
    coords = CoordinateSystem((), tuple(name for name, _ in generators))
    point = GrassmannVector.from_scalars(coords, field, parities, base)
    for name, matrix in generators:
        point = point.exponential(name, matrix)
    return point


def orbit_tangent_check(
    field: ScalarField,
    parities: Sequence[int],
    base: Sequence[Any],
    generators: Sequence[tuple[str, Matrix]],
    order: int,
) -> TangentFiltration:
    """Tangent filtration up to ``order`` of the orbit through ``base``."""
    return TangentFiltration.of(orbit_point(field, parities, base, generators), order)


def _vector(field: ScalarField, coords: CoordinateSystem, values: Sequence[Any]) -> list[SuperPolynomial]:
    return [v if isinstance(v, SuperPolynomial) else SuperPolynomial.constant(coords, field, v) for v in values]


@dataclass
class OrbitReport:
    """Orbit of g0 through a line and the algebras preserving its tangent spaces."""

    name: str
    point: bool
    dims: list[int]
    preserved: dict[str, bool]


def _preserves(
    filtration: TangentFiltration, base: Sequence[Scalar], matrices: Mapping[str, Matrix], order: int
) -> dict[str, bool]:
    return {name: filtration.contains(apply(m, list(base)), order) for name, m in matrices.items()}


def p2_orbits(case: ReductionCase) -> list[OrbitReport]:
    field = case.field
    s1, s2, s3 = case.s
    rep, phis = case.rep, p2_phis(case)
    g0 = {n: rep.matrix(n) for n in case.g0.names}
    reports = []
    specs = (
        ("V1", 1, (("theta", "F+"), ("phi", "F-")), ("phi1", "phi2", "phi3"), "phi4"),
        ("V2", 2, (("tau", "Fb+"), ("nu", "Fb-")), ("phi4", "phi5", "phi6"), "phi1"),
    )
    for name, position, gens, module, outside in specs:
        base = [field.one if i == position - 1 else field.zero for i in range(4)]
        filtration = orbit_tangent_check(field, rep.parities, base, [(p, rep.matrix(op)) for p, op in gens], 2)
        point = filtration.point
        coords = point.coords
        p1, p2 = (SuperPolynomial.variable(coords, field, p) for p, _ in gens)
        if name == "V1":
            expected = _vector(field, coords, [1, (p1 * p2).scale(s1), -p1, p2])
        else:
            inv = field.div(field.one, s3)
            expected = _vector(field, coords, [(p1 * p2).scale(-s2 * inv * inv), 1, p1.scale(inv), p2.scale(inv)])
        k = {**g0, **{n: phis[n] for n in module}}
        preserved = _preserves(filtration, base, k, 1)
        preserved[f"not {outside}"] = not filtration.contains(apply(phis[outside], base), 1)
        reports.append(
            OrbitReport(name, point.entries == expected and point.parity_consistent(), filtration.dims(), preserved)
        )
    return reports


W_BASIS = ((1, 1), (4, 4), (2, 2), (3, 3), (1, 4), (4, 1), (2, 3), (3, 2))


def w_parities(case: ReductionCase) -> tuple[int, ...]:
    p = case.rep.parities
    return tuple((p[i - 1] + p[j - 1]) % 2 for i, j in W_BASIS)


def w_coordinates(m: Matrix) -> list[Scalar]:
    return [m[i - 1][j - 1] for i, j in W_BASIS]


def w_matrix(case: ReductionCase, name: str) -> Matrix:
    """Action of a g0 element on W by commutators, in the W basis."""
    field = case.field
    positions = set(W_BASIS)
    parities = case.rep.parities
    columns = []
    for i, j in W_BASIS:
        image, _ = case.act(name, (unit(field, 4, i, j), (parities[i - 1] + parities[j - 1]) % 2))
        if any(key not in positions for key in ((r + 1, c + 1) for r, c in flatten(image))):
            raise ReductionError(f"{name} does not preserve W", name)
        columns.append(w_coordinates(image))
    return [[columns[c][r] for c in range(len(W_BASIS))] for r in range(len(W_BASIS))]


def p23_orbit(case: ReductionCase) -> OrbitReport:
    """Orbit of G0 through the line of E11 + E22 inside W."""
    field = case.field
    _, s2, s3 = case.s
    parities = w_parities(case)
    base = [field.one, field.zero, field.one] + [field.zero] * 5
    filtration = orbit_tangent_check(
        field, parities, base, [("theta", w_matrix(case, "psi+")), ("tau", w_matrix(case, "psi-"))], 1
    )
    point = filtration.point
    coords = point.coords
    theta, tau = (SuperPolynomial.variable(coords, field, p) for p in ("theta", "tau"))
    product = tau * theta
    expected = _vector(
        field,
        coords,
        [1 + product.scale(s2), product.scale(s2), 1 + product.scale(s3), product.scale(s3), tau.scale(s2), theta, tau.scale(s3), theta],
    )
    tangent = [base, [0, 0, 0, 0, 0, 1, 0, 1], [0, 0, 0, 0, s2, 0, s3, 0]]
    span = SpanReducer(field)
    for v in tangent:
        span.add({i: field.convert(x) for i, x in enumerate(v)})
    same = len(span) == filtration.dims()[1] and all(
        filtration.contains([field.convert(x) for x in v], 1) for v in tangent
    )
    preserved = _preserves(filtration, base, {n: w_matrix(case, n) for n in case.g0.names}, 1)
    base_matrix = matrix_from(field, 4, {(1, 1): 1, (2, 2): 1})
    extra = p23_matrices(case)
    for name in ("xi+", "xi-"):
        image = supercommutator(field, extra[name], 1, base_matrix, 0)
        preserved[f"not {name}"] = not filtration.contains(w_coordinates(image), 1)
    preserved["tangent_span"] = same
    return OrbitReport("W", point.entries == expected and point.parity_consistent(), filtration.dims(), preserved)


# Supervariety relations.


@dataclass
class RelationReport:
    """Vanishing of each defining relation at a parametrized point."""

    name: str
    relations: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.relations.values())


def _variety_relations(name: str, a: Scalar, x: Sequence[SuperPolynomial]) -> dict[str, SuperPolynomial]:
    if name == "V1":
        x1, x2, xi1, xi2 = x
        return {
            "x1x2-(1+a)xi1xi2": x1 * x2 - (xi1 * xi2).scale(1 + a),
            "x2xi1": x2 * xi1,
            "x2xi2": x2 * xi2,
            "x2^2": x2 * x2,
        }
    if name == "V2":
        x1, x2, xi1, xi2 = x
        return {"x1x2+xi1xi2": x1 * x2 + xi1 * xi2, "x1xi1": x1 * xi1, "x1xi2": x1 * xi2, "x1^2": x1 * x1}
    if name == "V":
        x1, x2, xi1, xi2 = x
        return {"product": (x1 * x2 - (xi1 * xi2).scale(1 + a)) * (x1 * x2 + xi1 * xi2)}
    x1, x2, x3, x4, xi1, xi2, xi3, xi4 = x
    return {
        "x3-x4=x1-x2": x3 - x4 - x1 + x2,
        "x4=a*x2": x4 - x2.scale(a),
        "xi3=a*xi1": xi3 - xi1.scale(a),
        "xi4=xi2": xi4 - xi2,
        "x1x2=xi1xi2": x1 * x2 - xi1 * xi2,
    }


def supervariety_points(case: ReductionCase) -> dict[str, tuple[str, list[SuperPolynomial]]]:
    """Parametrized points keyed by label; each names the variety it should lie on."""
    field, a = case.field, case.a
    s1, s2, s3 = case.s
    coords = CoordinateSystem(("z",), ("theta", "phi", "tau", "nu"))
    z, theta, phi, tau, nu = (SuperPolynomial.variable(coords, field, n) for n in coords.names)
    one = SuperPolynomial.constant(coords, field)
    inv = field.div(field.one, s3)
    if case.label == "p2I":
        v1 = [one, (theta * phi).scale(1 + a), theta, phi]
        v2 = [(tau * nu).scale(-1), one.scale(a * a), tau.scale(a), nu.scale(a)]
        return {
            "V1 parametrization": ("V1", v1),
            "V2 parametrization": ("V2", v2),
            "V1 orbit": ("V1", [one, (theta * phi).scale(s1), -theta, phi]),
            "V2 orbit": ("V2", [(tau * nu).scale(-s2 * inv * inv), one, tau.scale(inv), nu.scale(inv)]),
            "V1 on the union": ("V", v1),
            "V2 on the union": ("V", v2),
        }
    zz, nt = z * z, nu * theta
    corrected = [zz, nt, zz - nt.scale(1 - a), nt.scale(a), z * nu, z * theta, (z * nu).scale(a), z * theta]
    printed = [zz, -nt, zz + nt.scale(1 - a), nt.scale(-a), z * nu, z * theta, (z * nu).scale(a), z * theta]
    product = tau * theta
    orbit = [
        one + product.scale(s2),
        product.scale(s2),
        one + product.scale(s3),
        product.scale(s3),
        tau.scale(s2),
        theta,
        tau.scale(s3),
        theta,
    ]
    return {"W parametrization": ("W", corrected), "W printed parametrization": ("W", printed), "W orbit": ("W", orbit)}


def supervariety_relations_check(case: ReductionCase) -> list[RelationReport]:
    return [
        RelationReport(label, {name: not value for name, value in _variety_relations(variety, case.a, x).items()})
        for label, (variety, x) in supervariety_points(case).items()
    ]


# Per-case checks.


def _phi_generation(case: ReductionCase) -> bool:
    phis = p2_phis(case)
    for op, source, target in P2_GENERATION:
        image = case.act(op, case.homogeneous(phis[source]))[0]
        expected = phis[target] if target else zero_matrix(case.field, 4)
        if flatten(mat_add(image, expected, -1)):
            return False
    return True


def _b_modules(case: ReductionCase) -> dict[str, bool]:
    field = case.field
    m = p23_matrices(case)
    out = {}
    for name, top, op, bottom in P23_B_MODULES:
        image = case.act(op, case.homogeneous(m[top]))[0]
        killed = is_zero(case.act(op, case.homogeneous(m[bottom]))[0])
        closed = all(
            _span(field, [m[top], m[bottom]]).contains(flatten(case.act(n, case.homogeneous(v))[0]))
            for n in case.g0.names
            for v in (m[top], m[bottom])
        )
        weights = [torus_weight(case, m[top]), torus_weight(case, m[bottom])]
        step = 1 if op == "psi+" else -1
        graded = None not in weights and weights[0][0] == weights[1][0] and weights[1][1] - weights[0][1] == step
        out[name] = not flatten(mat_add(image, m[bottom], -1)) and killed and closed and graded
    return out


def _a_module(case: ReductionCase) -> dict[str, bool]:
    field = case.field
    m = p23_matrices(case)
    xi, plus, minus = case.homogeneous(m["xi"]), m["xi+"], m["xi-"]
    bracket = {
        name: supercommutator(field, m["xi"], 0, m[name], 1) for name in ("xi+", "xi-")
    }
    return {
        "xi generates A": closed_under_g0(case, [m["xi"], plus, minus])
        and not closed_under_g0(case, [m["xi"]])
        and in_span_mod(case, case.act("psi+", xi)[0], [minus])
        and in_span_mod(case, case.act("psi-", xi)[0], [plus]),
        "xi+ submodule": closed_under_g0(case, [plus]),
        "xi- submodule": closed_under_g0(case, [minus]),
        "[xi, xi±] = ±xi±": not flatten(mat_add(bracket["xi+"], plus, -1))
        and not flatten(mat_add(bracket["xi-"], minus, 1)),
    }


def _gl11_checks(case: ReductionCase) -> dict[str, bool]:
    field = case.field
    sub = subalgebra(case.gamma, {n: case.elements[n] for n in GL11_NAMES}, "gl(1|1)")
    model = gl11_algebra(field)
    same = all(sub.bracket_basis(i, j) == model.bracket_basis(i, j) for i in range(4) for j in range(4))
    rep = adjoint_rep(case.gamma, sub, case.elements, case.rep.labels, "g-1")
    halves = {}
    for label, positions in zip(("V1", "V2"), P23_BLOCKS, strict=True):
        part = rep.restrict(positions, label)
        halves[f"{label}(x){label}* = P(0)"] = gl11_decompose(tensor(part, dual(part))) == [projective(field, 0)]
    _, s2, s3 = case.s
    halves["V1 = <-s2, 0>"] = gl11_decompose(rep.restrict(P23_BLOCKS[0])) == [typical(field, -s2, 0)]
    halves["V2 = <-s3, 0>"] = gl11_decompose(rep.restrict(P23_BLOCKS[1])) == [typical(field, -s3, 0)]
    halves["<-s2,0>(x)<s2,1> = P(0)"] = tensor_rule_check(field, -s2, 0, s2, 1)
    halves["<s2,0>(x)<s3,0>"] = tensor_rule_check(field, s2, 0, s3, 0)
    return {"gl(1|1) brackets": same, **halves}


@dataclass
class ReductionReport:
    """Outcome of the reduction checks for one grading."""

    case: str
    checks: dict[str, bool] = dc_field(default_factory=dict)
    data: dict[str, Any] = dc_field(default_factory=dict)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def as_dict(self) -> dict[str, Any]:
        return {"case": self.case, "checks": self.checks, "data": self.data, "notes": self.notes}


def _common_checks(case: ReductionCase, report: ReductionReport) -> None:
    field = case.field
    report.checks["representation"] = not case.rep.defects()
    report.checks["weights"] = case.weights() == expected_weights(case)
    report.checks["weight_diagram"] = not missing_arrows(case)
    for name, passed in embedding_matrix_check(case).items():
        report.checks[f"embedding {name}"] = passed
    report.data["g0_sdim"] = list(case.g0.sdim)
    report.data["weights"] = [[field.format(w) for w in weight] for weight in case.weights()]


def _record_intermediates(case: ReductionCase, report: ReductionReport) -> None:
    ok, found, matched = intermediate_subalgebras_check(case)
    report.checks["intermediate_subalgebras"] = ok
    report.data["intermediate"] = {name: list(k.sdim) if k is not None else None for name, k in matched.items()}
    report.notes.append(f"{len(found)} intermediate subalgebras; the supertrace-zero one is listed as 'sl'")


def _record_relations(case: ReductionCase, report: ReductionReport) -> None:
    for relation in supervariety_relations_check(case):
        if relation.name == "W printed parametrization":
            report.data["printed_w_relations"] = relation.relations
            continue
        report.checks[f"relations {relation.name}"] = relation.ok


def check_reductions(label: str, field: ScalarField | None = None) -> ReductionReport:
    case = reduction_case(label, field)
    report = ReductionReport(label)
    _common_checks(case, report)
    if label == "p2I":
        report.checks["printed_matrices"] = all(
            not flatten(mat_add(case.rep.matrix(n), m, -1)) for n, m in printed_matrices(case).items()
        )
        report.checks["sl(2|1) relations"] = not sl21_relations_check(case)
        report.checks["phi_generation"] = _phi_generation(case)
        phis = p2_phis(case)
        for name, names in P2_MODULES.items():
            members = [phis[n] for n in names]
            report.checks[f"{name} closed"] = closed_under_g0(case, members) and is_subalgebra(case, members)
            report.checks[f"{name} abelian"] = is_abelian(case, members)
        for orbit in p2_orbits(case):
            report.checks[f"orbit {orbit.name}"] = orbit.point and orbit.dims[1] == 3 and orbit.dims[2] == 4
            for name, passed in orbit.preserved.items():
                report.checks[f"orbit {orbit.name} {name}"] = passed
    else:
        for name, passed in _b_modules(case).items():
            report.checks[f"module {name}"] = passed
        for name, passed in _a_module(case).items():
            report.checks[name] = passed
        for name, passed in _gl11_checks(case).items():
            report.checks[name] = passed
        orbit = p23_orbit(case)
        report.checks["orbit W"] = orbit.point
        for name, passed in orbit.preserved.items():
            report.checks[f"orbit W {name}"] = passed
        report.data["orbit_dims"] = orbit.dims
    _record_intermediates(case, report)
    _record_relations(case, report)
    _LOGGER.info("Reductions %s: %d checks, %d failed", label, len(report.checks), len(report.failed()))
    return report
