"""Finite-dimensional Lie superalgebras given by structure constants."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
import itertools
import logging
from typing import Any

from .exceptions import AlgebraError, FormError, GradingError
from .scalars import (
    ExceptionalLocus,
    Row,
    Scalar,
    ScalarField,
    SpanReducer,
    SparseMatrix,
    dense_inverse,
    dense_mul,
    nullspace,
    s_parameters,
)

_LOGGER = logging.getLogger(__name__)

EVEN = 0
ODD = 1

SL2_NAMES = ("X", "H", "Y")
ODD_LETTERS = ("x", "y")


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def add_into(target: dict[Any, Scalar], source: Mapping[Any, Scalar], factor: Scalar = 1) -> None:
    """target += factor * source, dropping zeros."""
    for key, value in source.items():
        new = target.get(key, 0) + factor * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)


def combine(*pairs: tuple[Scalar, Mapping[Any, Scalar]]) -> dict[Any, Scalar]:
    result: dict[Any, Scalar] = {}
    for factor, vector in pairs:
        add_into(result, vector, factor)
    return result


@dataclass(frozen=True)
class BasisElement:
    """Named basis vector with parity and optional degree."""

    name: str
    parity: int
    degree: int | None = None


class BasisSuperalgebra:
    """Lie superalgebra on a named basis with sparse structure constants.

    ``brackets`` may list each unordered pair once; the opposite order is
    filled in by super-antisymmetry.
    """

    def __init__(
        self,
        field: ScalarField,
        basis: Sequence[BasisElement],
        brackets: Mapping[tuple[int, int], Mapping[int, Scalar]],
        name: str = "",
    ) -> None:
        self.field = field
        self.basis = tuple(basis)
        self.name = name
        self._index = {element.name: i for i, element in enumerate(self.basis)}
        if len(self._index) != len(self.basis):
            raise AlgebraError("basis names must be unique")
        self._table: dict[tuple[int, int], Row] = {}
        for (i, j), terms in brackets.items():
            row = {k: field.convert(v) for k, v in terms.items()}
            row = {k: v for k, v in row.items() if v}
            if not row:
                continue
            self._check_parity(i, j, row)
            self._table[(i, j)] = row
            mirror = {k: -sign(self.parity(i) * self.parity(j)) * v for k, v in row.items()}
            if i == j:
                if mirror != row:
                    raise AlgebraError(f"[{self.basis[i].name},{self.basis[i].name}] must vanish")
                continue
            existing = self._table.get((j, i))
            if existing is not None and (j, i) in brackets and existing != mirror:
                raise AlgebraError(
                    f"brackets of {self.basis[i].name} and {self.basis[j].name} are not super-antisymmetric"
                )
            self._table[(j, i)] = mirror

    def _check_parity(self, i: int, j: int, row: Row) -> None:
        expected = (self.parity(i) + self.parity(j)) % 2
        for k in row:
            if self.parity(k) != expected:
                raise AlgebraError(
                    f"[{self.basis[i].name},{self.basis[j].name}] has a term of the wrong parity"
                )

    def __repr__(self) -> str:
        even, odd = self.sdim
        return f"BasisSuperalgebra({self.name or 'unnamed'}, ({even}|{odd}))"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(e.parity for e in self.basis)
        return self.dim - odd, odd

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.basis]

    @property
    def table(self) -> dict[tuple[int, int], Row]:
        return self._table

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as err:
            raise AlgebraError(f"unknown basis element {name}") from err

    def parity(self, i: int) -> int:
        return self.basis[i].parity

    def degree(self, i: int) -> int:
        degree = self.basis[i].degree
        if degree is None:
            raise GradingError(f"{self.name or 'algebra'} carries no grading")
        return degree

    @property
    def is_graded(self) -> bool:
        return all(e.degree is not None for e in self.basis)

    def element(self, name: str, coeff: Scalar = 1) -> Row:
        return {self.index(name): self.field.convert(coeff)}

    def vector(self, terms: Mapping[str, Any]) -> Row:
        out: Row = {}
        for name, coeff in terms.items():
            add_into(out, {self.index(name): self.field.convert(coeff)})
        return out

    def bracket_basis(self, i: int, j: int) -> Row:
        return self._table.get((i, j), {})

    def bracket(self, u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Row:
        result: Row = {}
        for i, ci in u.items():
            for j, cj in v.items():
                terms = self._table.get((i, j))
                if terms:
                    add_into(result, terms, ci * cj)
        return result

    def vector_parity(self, v: Mapping[int, Scalar]) -> int:
        parities = {self.parity(i) for i in v}
        if len(parities) > 1:
            raise AlgebraError("vector is not parity-homogeneous")
        return parities.pop() if parities else EVEN

    def format_vector(self, v: Mapping[int, Scalar]) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            coeff = v[i]
            text = self.field.format(coeff)
            name = self.basis[i].name
            if text == "1":
                parts.append(name)
            elif text == "-1":
                parts.append(f"-{name}")
            else:
                parts.append(f"({text})*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def with_degrees(self, degrees: Sequence[int], name: str | None = None) -> BasisSuperalgebra:
        """Return a copy carrying degrees; brackets must be degree-additive."""
        if len(degrees) != self.dim:
            raise GradingError("one degree per basis element is required")
        for (i, j), row in self._table.items():
            for k in row:
                if degrees[k] != degrees[i] + degrees[j]:
                    raise GradingError(
                        f"[{self.basis[i].name},{self.basis[j].name}] breaks the grading"
                    )
        clone = object.__new__(BasisSuperalgebra)
        clone.field = self.field
        clone.basis = tuple(replace(e, degree=d) for e, d in zip(self.basis, degrees, strict=True))
        clone.name = self.name if name is None else name
        clone._index = dict(self._index)
        clone._table = self._table
        return clone

    def indices_of_degree(self, degree: int) -> list[int]:
        return [i for i, e in enumerate(self.basis) if e.degree == degree]

    def indices_of_parity(self, parity: int) -> list[int]:
        return [i for i, e in enumerate(self.basis) if e.parity == parity]

    def degrees(self) -> list[int]:
        return sorted({self.degree(i) for i in range(self.dim)})

    def level_sdim(self, degree: int) -> tuple[int, int]:
        indices = self.indices_of_degree(degree)
        odd = sum(self.parity(i) for i in indices)
        return len(indices) - odd, odd

    @property
    def depth(self) -> int:
        return -min(self.degrees())

    def to_json(self) -> dict[str, Any]:
        brackets = []
        for (i, j), row in sorted(self._table.items()):
            if i > j:
                continue
            brackets.append(
                {
                    "i": i,
                    "j": j,
                    "terms": [{"k": k, "coeff": self.field.format(v)} for k, v in sorted(row.items())],
                }
            )
        basis: list[dict[str, Any]] = []
        for e in self.basis:
            entry: dict[str, Any] = {"name": e.name, "parity": "odd" if e.parity else "even"}
            if e.degree is not None:
                entry["degree"] = e.degree
            basis.append(entry)
        return {"parameters": list(self.field.names), "basis": basis, "brackets": brackets}

    @classmethod
    def from_json(cls, field: ScalarField, data: Mapping[str, Any], name: str = "") -> BasisSuperalgebra:
        if list(data.get("parameters", [])) != list(field.names):
            raise AlgebraError("parameter names do not match the scalar field")
        basis = [
            BasisElement(e["name"], ODD if e["parity"] == "odd" else EVEN, e.get("degree"))
            for e in data["basis"]
        ]
        brackets = {
            (entry["i"], entry["j"]): {t["k"]: field.parse(t["coeff"]) for t in entry["terms"]}
            for entry in data["brackets"]
        }
        return cls(field, basis, brackets, name=name)


# Construction of Gamma(s1, s2, s3).


def _sl2_on_letter(op: str, letter: str) -> tuple[int, str] | None:
    """Action of X, H, Y on the basis x, y of C^2."""
    if op == "H":
        return (1, letter) if letter == "x" else (-1, letter)
    if op == "X":
        return (1, "x") if letter == "y" else None
    return (1, "y") if letter == "x" else None


def _eta(u: str, v: str) -> int:
    if u == v:
        return 0
    return 1 if u == "x" else -1


def _phi(u: str, v: str) -> tuple[Any, str]:
    """Symmetric map S^2 C^2 -> sl2: xx -> X, xy -> -H/2, yy -> -Y."""
    if u == v == "x":
        return Fraction(1), "X"
    if u == v == "y":
        return Fraction(-1), "Y"
    return Fraction(-1, 2), "H"


def gamma_basis() -> list[BasisElement]:
    even = [BasisElement(f"{op}{i}", EVEN) for i in (1, 2, 3) for op in SL2_NAMES]
    odd = [
        BasisElement("".join(word), ODD)
        for word in itertools.product(ODD_LETTERS, repeat=3)
    ]
    return even + odd


def build_gamma(
    field: ScalarField, s1: Scalar | None = None, s2: Scalar | None = None, s3: Scalar | None = None
) -> BasisSuperalgebra:
    """Gamma(s1, s2, s3) on the basis X_i, H_i, Y_i and the odd words."""
    if s1 is None or s2 is None or s3 is None:
        s1, s2, s3 = s_parameters(field)
    svals = tuple(field.convert(s) for s in (s1, s2, s3))
    basis = gamma_basis()
    index = {e.name: i for i, e in enumerate(basis)}
    brackets: dict[tuple[int, int], dict[int, Scalar]] = {}

    def put(i: int, j: int, k: int, value: Scalar) -> None:
        row = brackets.setdefault((i, j), {})
        row[k] = row.get(k, 0) + value

    for f in (1, 2, 3):
        x, h, y = (index[f"{op}{f}"] for op in SL2_NAMES)
        put(h, x, x, 2)
        put(h, y, y, -2)
        put(x, y, h, 1)
    for f in (1, 2, 3):
        for op in SL2_NAMES:
            i = index[f"{op}{f}"]
            for word in itertools.product(ODD_LETTERS, repeat=3):
                image = _sl2_on_letter(op, word[f - 1])
                if image is None:
                    continue
                coeff, letter = image
                target = list(word)
                target[f - 1] = letter
                put(i, index["".join(word)], index["".join(target)], coeff)
    words = list(itertools.product(ODD_LETTERS, repeat=3))
    for p, u in enumerate(words):
        for v in words[p:]:
            for f in range(3):
                others = [g for g in range(3) if g != f]
                eta = _eta(u[others[0]], v[others[0]]) * _eta(u[others[1]], v[others[1]])
                if not eta:
                    continue
                coeff, op = _phi(u[f], v[f])
                put(index["".join(u)], index["".join(v)], index[f"{op}{f + 1}"], svals[f] * eta * field.convert(coeff))
    clean = {key: {k: c for k, c in row.items() if c} for key, row in brackets.items()}
    _LOGGER.debug("Built Gamma with s = %s", [field.format(s) for s in svals])
    return BasisSuperalgebra(field, basis, clean, name="Gamma")


def sl2(field: ScalarField) -> BasisSuperalgebra:
    basis = [BasisElement(n, EVEN) for n in SL2_NAMES]
    return BasisSuperalgebra(field, basis, {(1, 0): {0: 2}, (1, 2): {2: -2}, (0, 2): {1: 1}}, name="sl2")


# Identities and forms.


def jacobiator(alg: BasisSuperalgebra, i: int, j: int, k: int) -> Row:
    x, y, z = {i: alg.field.one}, {j: alg.field.one}, {k: alg.field.one}
    lhs = alg.bracket(x, alg.bracket(y, z))
    rhs = combine(
        (1, alg.bracket(alg.bracket(x, y), z)),
        (sign(alg.parity(i) * alg.parity(j)), alg.bracket(y, alg.bracket(x, z))),
    )
    return combine((1, lhs), (-1, rhs))


def check_jacobi(alg: BasisSuperalgebra) -> list[tuple[str, str, str, str]]:
    """Basis triples violating super-Jacobi, with the formatted defect."""
    violations = []
    n = alg.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        defect = jacobiator(alg, i, j, k)
        if defect:
            violations.append(
                (alg.basis[i].name, alg.basis[j].name, alg.basis[k].name, alg.format_vector(defect))
            )
    if violations:
        _LOGGER.debug("%s: %d Jacobi violations", alg.name, len(violations))
    return violations


def ad_matrix(alg: BasisSuperalgebra, v: Mapping[int, Scalar], indices: Sequence[int] | None = None) -> list[list[Scalar]]:
    """Matrix of ad_v on the span of ``indices`` (columns are images)."""
    idx = list(range(alg.dim)) if indices is None else list(indices)
    pos = {k: p for p, k in enumerate(idx)}
    matrix = [[alg.field.zero] * len(idx) for _ in idx]
    for col, k in enumerate(idx):
        for target, coeff in alg.bracket(v, {k: alg.field.one}).items():
            if target not in pos:
                raise AlgebraError("ad does not preserve the requested subspace")
            matrix[pos[target]][col] = coeff
    return matrix


@dataclass
class BilinearForm:
    """Bilinear form on an algebra, stored by basis pairs."""

    algebra: BasisSuperalgebra
    matrix: dict[tuple[int, int], Scalar] = dc_field(default_factory=dict)

    def entry(self, i: int, j: int) -> Scalar:
        return self.matrix.get((i, j), self.algebra.field.zero)

    def value(self, u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Scalar:
        total = self.algebra.field.zero
        for i, ci in u.items():
            for j, cj in v.items():
                entry = self.matrix.get((i, j))
                if entry:
                    total += ci * cj * entry
        return total

    def by_name(self, a: str, b: str) -> Scalar:
        return self.entry(self.algebra.index(a), self.algebra.index(b))

    @property
    def is_zero(self) -> bool:
        return not any(self.matrix.values())

    def is_consistent(self) -> bool:
        alg = self.algebra
        return all(alg.parity(i) == alg.parity(j) for (i, j), v in self.matrix.items() if v)

    def is_supersymmetric(self) -> bool:
        alg = self.algebra
        for (i, j), v in self.matrix.items():
            if v != sign(alg.parity(i) * alg.parity(j)) * self.entry(j, i):
                return False
        return True

    def invariance_defects(self) -> list[tuple[int, int, int]]:
        """Triples where B([u,v],w) != B(u,[v,w])."""
        alg = self.algebra
        defects = []
        for i, j, k in itertools.product(range(alg.dim), repeat=3):
            left = self.value(alg.bracket_basis(i, j), {k: alg.field.one})
            right = self.value({i: alg.field.one}, alg.bracket_basis(j, k))
            if left != right:
                defects.append((i, j, k))
        return defects


def killing_form(alg: BasisSuperalgebra, indices: Sequence[int] | None = None) -> BilinearForm:
    """str(ad_x ad_y), optionally of the subalgebra spanned by ``indices``."""
    idx = list(range(alg.dim)) if indices is None else list(indices)
    members = set(idx)
    form = BilinearForm(alg)
    for i in idx:
        for j in idx:
            value = alg.field.zero
            for k in idx:
                for m, c1 in alg.bracket_basis(j, k).items():
                    if m not in members:
                        continue
                    c2 = alg.bracket_basis(i, m).get(k)
                    if c2:
                        value += sign(alg.parity(k)) * c1 * c2
            if value:
                form.matrix[(i, j)] = value
    return form


def invariant_form_space(alg: BasisSuperalgebra) -> tuple[list[BilinearForm], ExceptionalLocus]:
    """All consistent, supersymmetric, invariant bilinear forms."""
    field = alg.field
    unknowns: dict[tuple[int, int], int] = {}
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            if alg.parity(i) != alg.parity(j):
                continue
            if i == j and alg.parity(i) == ODD:
                continue
            unknowns[(i, j)] = len(unknowns)

    def coeff(i: int, j: int) -> tuple[int, int] | None:
        if (i, j) in unknowns:
            return unknowns[(i, j)], 1
        if (j, i) in unknowns:
            return unknowns[(j, i)], sign(alg.parity(i) * alg.parity(j))
        return None

    rows: list[Row] = []
    for i, j, k in itertools.product(range(alg.dim), repeat=3):
        row: Row = {}
        for target, c in alg.bracket_basis(i, j).items():
            slot = coeff(target, k)
            if slot is not None:
                add_into(row, {slot[0]: c * slot[1]})
        for target, c in alg.bracket_basis(j, k).items():
            slot = coeff(i, target)
            if slot is not None:
                add_into(row, {slot[0]: -c * slot[1]})
        if row:
            rows.append(row)
    basis, locus = nullspace(SparseMatrix(field, len(unknowns), rows))
    forms = []
    for vector in basis:
        form = BilinearForm(alg)
        for (i, j), u in unknowns.items():
            value = vector.get(u)
            if value:
                form.matrix[(i, j)] = value
                if i != j:
                    form.matrix[(j, i)] = sign(alg.parity(i) * alg.parity(j)) * value
        forms.append(form)
    return forms, locus


def invariant_form(alg: BasisSuperalgebra) -> BilinearForm:
    """The invariant form of Gamma, normalized so that B(H_i, H_j) = delta_ij / s_i."""
    forms, _ = invariant_form_space(alg)
    if len(forms) != 1:
        raise FormError(f"invariant form space has dimension {len(forms)}, expected 1")
    form = forms[0]
    h1 = alg.index("H1")
    s1 = s_of(alg, 1)
    current = form.entry(h1, h1)
    if not current:
        raise FormError("B(H1, H1) vanishes")
    scale = (alg.field.one / s1) / current
    form.matrix = {key: value * scale for key, value in form.matrix.items()}
    return form


def s_of(alg: BasisSuperalgebra, i: int) -> Scalar:
    """Read s_i off Gamma through [xxx, yyy] = -(s1 H1 + s2 H2 + s3 H3)/2."""
    row = alg.bracket(alg.element("xxx"), alg.element("yyy"))
    return -2 * row.get(alg.index(f"H{i}"), alg.field.zero)


def j_invariant(field: ScalarField, s1: Scalar, s2: Scalar, s3: Scalar) -> Scalar:
    """(s1 s2 + s2 s3 + s3 s1)^3 / (s1 s2 s3)^2, invariant under S3 and scaling."""
    e2 = s1 * s2 + s2 * s3 + s3 * s1
    e3 = s1 * s2 * s3
    return field.div(e2**3, e3**2)


def identify_parameter(alg: BasisSuperalgebra) -> Scalar:
    """j-invariant of a realization of D(2,1;a), from its forms alone.

    On the even part T = kappa^{-1} B has three eigenvalues, proportional to
    1/s_i, each of multiplicity three.
    """
    field = alg.field
    even = alg.indices_of_parity(EVEN)
    if len(even) != 9:
        raise AlgebraError("identification needs an even part of dimension 9")
    forms, _ = invariant_form_space(alg)
    if len(forms) != 1:
        raise FormError(f"invariant form space has dimension {len(forms)}")
    form = forms[0]
    kappa = killing_form(alg, even)
    kmat = [[kappa.entry(i, j) for j in even] for i in even]
    bmat = [[form.entry(i, j) for j in even] for i in even]
    t = dense_mul(field, dense_inverse(field, kmat), bmat)
    t2 = dense_mul(field, t, t)
    t3 = dense_mul(field, t2, t)
    p1, p2, p3 = (sum((m[i][i] for i in range(9)), field.zero) / 3 for m in (t, t2, t3))
    e1 = p1
    e3 = (p1**3 - 3 * p1 * p2 + 2 * p3) / 6
    # reciprocals s_i/c have e2 = e1/e3 and e3 = 1/e3
    return field.div(e1**3, e3)


# Subspaces, gradings and Cauchy characteristics.


@dataclass
class Subspace:
    """Span of vectors inside an algebra."""

    algebra: BasisSuperalgebra
    vectors: list[Row]

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(self.algebra.vector_parity(v) for v in self.vectors)
        return len(self.vectors) - odd, odd

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def describe(self) -> list[str]:
        return [self.algebra.format_vector(v) for v in self.vectors]

    def contains(self, v: Mapping[int, Scalar]) -> bool:
        reducer = SpanReducer(self.algebra.field)
        for w in self.vectors:
            reducer.add(w)
        return reducer.contains(v)


def span_basis(field: ScalarField, vectors: Iterable[Mapping[int, Scalar]]) -> list[Row]:
    reducer = SpanReducer(field)
    kept = []
    for v in vectors:
        if reducer.add(v):
            kept.append(dict(v))
    return kept


def closure(alg: BasisSuperalgebra, vectors: Iterable[Mapping[int, Scalar]]) -> Subspace:
    """Smallest subalgebra containing the vectors."""
    reducer = SpanReducer(alg.field)
    kept: list[Row] = []
    queue = [dict(v) for v in vectors]
    while queue:
        v = queue.pop()
        if not reducer.add(v):
            continue
        for w in list(kept):
            queue.append(alg.bracket(v, w))
        kept.append(v)
        queue.append(alg.bracket(v, v))
    return Subspace(alg, kept)


def center(alg: BasisSuperalgebra, indices: Sequence[int]) -> Subspace:
    """Center of the subalgebra spanned by basis ``indices``."""
    parts = []
    for parity in (EVEN, ODD):
        cols = [i for i in indices if alg.parity(i) == parity]
        rows: dict[tuple[int, int], Row] = {}
        for c, i in enumerate(cols):
            for j in indices:
                for k, v in alg.bracket_basis(i, j).items():
                    rows.setdefault((j, k), {})[c] = v
        basis, _ = nullspace(SparseMatrix(alg.field, len(cols), list(rows.values())))
        parts.extend({cols[c]: v for c, v in vec.items()} for vec in basis)
    return Subspace(alg, parts)


def derived(alg: BasisSuperalgebra, indices: Sequence[int]) -> Subspace:
    """[h, h] for the subalgebra spanned by basis ``indices``, split by parity."""
    by_parity: dict[int, list[Row]] = {EVEN: [], ODD: []}
    for i in indices:
        for j in indices:
            row = alg.bracket_basis(i, j)
            if row:
                by_parity[(alg.parity(i) + alg.parity(j)) % 2].append(row)
    vectors = span_basis(alg.field, by_parity[EVEN]) + span_basis(alg.field, by_parity[ODD])
    return Subspace(alg, vectors)


def is_fundamental(alg: BasisSuperalgebra) -> bool:
    """Whether the negative part is generated by degree -1."""
    negative = [i for i in range(alg.dim) if alg.degree(i) < 0]
    generated = closure(alg, [{i: alg.field.one} for i in alg.indices_of_degree(-1)])
    return generated.dim == len(negative)


def negative_part(alg: BasisSuperalgebra) -> list[int]:
    return [i for i in range(alg.dim) if alg.degree(i) < 0]


def cauchy_characteristics(alg: BasisSuperalgebra, level: int) -> Subspace:
    """{v in D^k : [v, D^k] in D^k} with D^k = g_-1 + ... + g_-k inside m."""
    if not alg.is_graded:
        raise GradingError("Cauchy characteristics need a graded algebra")
    if level < 1 or level > alg.depth:
        raise GradingError(f"level {level} exceeds the depth {alg.depth}")
    span = [i for i in range(alg.dim) if -level <= alg.degree(i) <= -1]
    outside = {i for i in negative_part(alg) if alg.degree(i) < -level}
    vectors: list[Row] = []
    for parity in (EVEN, ODD):
        cols = [i for i in span if alg.parity(i) == parity]
        rows: dict[tuple[int, int], Row] = {}
        for c, i in enumerate(cols):
            for j in span:
                for k, v in alg.bracket_basis(i, j).items():
                    if k in outside:
                        rows.setdefault((j, k), {})[c] = v
        basis, _ = nullspace(SparseMatrix(alg.field, len(cols), list(rows.values())))
        vectors.extend({cols[c]: v for c, v in vec.items()} for vec in basis)
    return Subspace(alg, vectors)


def bracket_mismatch(
    source: BasisSuperalgebra, target: BasisSuperalgebra, images: Sequence[Mapping[int, Scalar]]
) -> tuple[str, str] | None:
    """First pair (e_i, e_j) with phi([e_i, e_j]) != [phi e_i, phi e_j], if any."""
    for i in range(source.dim):
        for j in range(i, source.dim):
            left: Row = {}
            for k, c in source.bracket_basis(i, j).items():
                add_into(left, images[k], c)
            right = target.bracket(images[i], images[j])
            if left != right:
                return source.basis[i].name, source.basis[j].name
    return None
