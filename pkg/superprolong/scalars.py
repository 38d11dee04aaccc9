"""Exact scalars and sparse linear algebra.

Two scalar fields share one interface:

* ``ParameterField`` is the rational-function field Q(p1, ..., pm) built on
  sympy's sparse ``FracField``; elements are canonical reduced fractions.
* ``RationalField`` is Q itself with a remembered parameter point, used for
  the fast mode where every parameter has been specialized.

Linear algebra works on sparse rows (``dict[column, scalar]``). Over a
parameter field elimination is fraction-free. Every pivot, cleared denominator
and divided-out row content contributes its irreducible factors to an
``ExceptionalLocus``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
import logging
import math
import random
from typing import Any

from sympy import QQ, Rational, Symbol, sympify
from sympy.core.sympify import SympifyError
from sympy.polys.fields import field as frac_field

from .const import (
    DEFAULT_SAMPLE_POINTS,
    DEFAULT_SEED,
    PARAM_A,
    PARAM_S1,
    PARAM_S2,
    SAMPLE_HEIGHT,
)
from .exceptions import LinearAlgebraError, PoleError, ScalarError

_LOGGER = logging.getLogger(__name__)

Scalar = Any
Row = dict[int, Scalar]


def _qq_to_fraction(coeff: Any) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def poly_names(poly: Any) -> tuple[str, ...]:
    """Return the variable names of a sympy ``PolyElement``."""
    return tuple(str(sym) for sym in poly.ring.symbols)


def evaluate_poly(poly: Any, point: Mapping[str, Fraction]) -> Fraction:
    """Evaluate a ``PolyElement`` at a rational point."""
    names = poly_names(poly)
    try:
        values = [Fraction(point[name]) for name in names]
    except KeyError as err:
        raise ScalarError(f"point does not assign parameter {err!s}") from err
    total = Fraction(0)
    for monom, coeff in poly.terms():
        term = _qq_to_fraction(coeff)
        for value, exp in zip(values, monom, strict=True):
            if exp:
                term *= value**exp
        total += term
    return total


def format_poly(poly: Any) -> str:
    """Format an integer-coefficient ``PolyElement`` in the ``^`` grammar."""
    if not poly:
        return "0"
    names = poly_names(poly)
    parts: list[str] = []
    for monom, coeff in poly.terms():
        value = _qq_to_fraction(coeff)
        factors = [
            name if exp == 1 else f"{name}^{exp}"
            for name, exp in zip(names, monom, strict=True)
            if exp
        ]
        body = "*".join(factors)
        magnitude = abs(value)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        if not parts:
            parts.append(text if value > 0 else f"-{text}")
        else:
            parts.append(f"+ {text}" if value > 0 else f"- {text}")
    return " ".join(parts)


@dataclass(frozen=True)
class ExceptionalLocus:
    """Irreducible polynomial factors where a generic statement may fail."""

    factors: tuple[Any, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def union(self, other: ExceptionalLocus) -> ExceptionalLocus:
        merged = list(self.factors)
        for factor in other.factors:
            if factor not in merged:
                merged.append(factor)
        return ExceptionalLocus(tuple(merged))

    def outside(self, allowed: ExceptionalLocus) -> ExceptionalLocus:
        """Factors not present in ``allowed``."""
        return ExceptionalLocus(
            tuple(f for f in self.factors if f not in allowed.factors)
        )

    def vanishes_at(self, point: Mapping[str, Fraction]) -> bool:
        return any(evaluate_poly(f, point) == 0 for f in self.factors)

    def describe(self) -> list[str]:
        return [format_poly(f.clear_denoms()[1]) for f in self.factors]

    def __str__(self) -> str:
        return "{" + ", ".join(self.describe()) + "}"


EMPTY_LOCUS = ExceptionalLocus()


class ScalarField:
    """Common interface of the two scalar fields."""

    names: tuple[str, ...] = ()
    is_symbolic = False

    @property
    def zero(self) -> Scalar:
        raise NotImplementedError

    @property
    def one(self) -> Scalar:
        raise NotImplementedError

    def convert(self, value: Any) -> Scalar:
        raise NotImplementedError

    def parameter(self, name: str) -> Scalar:
        raise NotImplementedError

    def parse(self, text: str) -> Scalar:
        raise NotImplementedError

    def format(self, value: Scalar) -> str:
        raise NotImplementedError

    def evaluate(self, value: Scalar, point: Mapping[str, Fraction]) -> Fraction:
        raise NotImplementedError

    def specialize(self, point: Mapping[str, Fraction]) -> RationalField:
        return RationalField(point)

    def default_locus(self) -> ExceptionalLocus:
        return EMPTY_LOCUS

    def is_zero(self, value: Scalar) -> bool:
        return not value

    def div(self, x: Scalar, y: Scalar) -> Scalar:
        if not y:
            raise PoleError("division by zero")
        return x / y

    def frac(self, numer: int, denom: int = 1) -> Scalar:
        return self.convert(Fraction(numer, denom))

    def to_rational(self, value: Scalar) -> Fraction:
        """Value of a constant element; raise if it depends on a parameter."""
        raise NotImplementedError

    # Hooks for the fraction-free echelon engine. Both return the new row and
    # the ring elements it was multiplied or divided by.

    def to_ring_row(self, row: Row) -> tuple[Row, list[Any]]:
        raise NotImplementedError

    def ring_combine(self, target: Row, pivot_row: Row, lead: int) -> tuple[Row, list[Any]]:
        raise NotImplementedError

    def pivot_factors(self, pivot: Scalar) -> list[Any]:
        return []

    def ring_to_field(self, value: Scalar) -> Scalar:
        return value


class RationalField(ScalarField):
    """The rationals, remembering the parameter point they came from."""

    def __init__(self, point: Mapping[str, Any] | None = None) -> None:
        self.point: dict[str, Fraction] = {
            name: Fraction(value) for name, value in (point or {}).items()
        }
        self.names = tuple(self.point)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.point.items())
        return f"RationalField({inner})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField) and other.point == self.point

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.point.items())))

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def convert(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        try:
            return Fraction(value)
        except (TypeError, ValueError) as err:
            raise ScalarError(f"cannot convert {value!r} to a rational") from err

    def parameter(self, name: str) -> Fraction:
        if name not in self.point:
            raise ScalarError(f"parameter {name} is not specialized")
        return self.point[name]

    def parse(self, text: str) -> Fraction:
        try:
            expr = sympify(text.replace("^", "**"))
        except (SympifyError, SyntaxError, TypeError) as err:
            raise ScalarError(f"cannot parse {text!r}: {err!s}") from err
        expr = expr.subs({Symbol(k): Rational(v.numerator, v.denominator) for k, v in self.point.items()})
        if not expr.is_Rational:
            raise ScalarError(f"{text!r} does not evaluate to a rational")
        return Fraction(int(expr.p), int(expr.q))

    def to_rational(self, value: Fraction) -> Fraction:
        return Fraction(value)

    def format(self, value: Fraction) -> str:
        return str(value)

    def evaluate(self, value: Fraction, point: Mapping[str, Fraction]) -> Fraction:
        return Fraction(value)

    def to_ring_row(self, row: Row) -> tuple[Row, list[Any]]:
        return dict(row), []

    def ring_combine(self, target: Row, pivot_row: Row, lead: int) -> tuple[Row, list[Any]]:
        factor = target[lead] / pivot_row[lead]
        return _axpy(target, pivot_row, -factor), []


class ParameterField(ScalarField):
    """Rational functions in named parameters with rational coefficients."""

    is_symbolic = True

    def __init__(self, names: Sequence[str] = (PARAM_A,)) -> None:
        self.names = tuple(names)
        if not self.names:
            raise ScalarError("a parameter field needs at least one parameter")
        created = frac_field(",".join(self.names), QQ)
        self._field = created[0]
        self._gens = dict(zip(self.names, created[1:], strict=True))
        self._ring = self._field.ring

    def __repr__(self) -> str:
        return f"ParameterField({', '.join(self.names)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParameterField) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)

    @property
    def zero(self) -> Any:
        return self._field.zero

    @property
    def one(self) -> Any:
        return self._field.one

    def convert(self, value: Any) -> Any:
        if isinstance(value, Fraction):
            return self._field.ground_new(QQ(value.numerator, value.denominator))
        if isinstance(value, int):
            return self._field.ground_new(QQ(value))
        if isinstance(value, str):
            return self.parse(value)
        if getattr(value, "field", None) == self._field:
            return value
        try:
            return self._field(value)
        except (NotImplementedError, TypeError, ValueError) as err:
            raise ScalarError(f"cannot convert {value!r} into {self!r}") from err

    def parameter(self, name: str) -> Any:
        if name not in self._gens:
            raise ScalarError(f"unknown parameter {name}")
        return self._gens[name]

    def parse(self, text: str) -> Any:
        try:
            expr = sympify(text.replace("^", "**"))
            return self._field.from_expr(expr)
        except (SympifyError, SyntaxError, TypeError, ValueError) as err:
            raise ScalarError(f"cannot parse {text!r}: {err!s}") from err

    def format(self, value: Any) -> str:
        if not value:
            return "0"
        numer, denom = value.numer, value.denom
        coeffs = [_qq_to_fraction(c) for _, c in numer.terms() + denom.terms()]
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        content = 0
        for c in coeffs:
            content = math.gcd(content, int(c * lcm))
        scale = Fraction(lcm, content)
        if _qq_to_fraction(denom.LC) < 0:
            scale = -scale
        factor = self._ring.ground_new(QQ(scale.numerator, scale.denominator))
        numer, denom = numer * factor, denom * factor
        top, bottom = format_poly(numer), format_poly(denom)
        if bottom == "1":
            return top
        if len(numer.terms()) > 1:
            top = f"({top})"
        if len(denom.terms()) > 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def to_rational(self, value: Any) -> Fraction:
        if not (value.numer.is_ground and value.denom.is_ground):
            raise ScalarError(f"{self.format(value)} is not constant")
        return _qq_to_fraction(value.numer.LC) / _qq_to_fraction(value.denom.LC)

    def evaluate(self, value: Any, point: Mapping[str, Fraction]) -> Fraction:
        denom = evaluate_poly(value.denom, point)
        if denom == 0:
            raise PoleError(f"{self.format(value)} has a pole at {dict(point)}")
        return evaluate_poly(value.numer, point) / denom

    def default_locus(self) -> ExceptionalLocus:
        if self.names == (PARAM_A,):
            a = self._ring.gens[0]
            return ExceptionalLocus((a, a + 1))
        if self.names == (PARAM_S1, PARAM_S2):
            s1, s2 = self._ring.gens
            return ExceptionalLocus((s1, s2, s1 + s2))
        return EMPTY_LOCUS

    def to_ring_row(self, row: Row) -> tuple[Row, list[Any]]:
        denom = self._ring.one
        for value in row.values():
            denom = denom.lcm(value.denom)
        cleared = {
            col: value.numer * denom.exquo(value.denom) for col, value in row.items()
        }
        primitive, content = _primitive_row(cleared)
        return primitive, [denom, content]

    def ring_combine(self, target: Row, pivot_row: Row, lead: int) -> tuple[Row, list[Any]]:
        piv = pivot_row[lead]
        fac = target[lead]
        gcd = piv.gcd(fac)
        piv, fac = piv.exquo(gcd), fac.exquo(gcd)
        combined: Row = {}
        for col in set(target) | set(pivot_row):
            value = piv * target.get(col, self._ring.zero) - fac * pivot_row.get(
                col, self._ring.zero
            )
            if value:
                combined[col] = value
        primitive, content = _primitive_row(combined)
        return primitive, [piv, content]

    def pivot_factors(self, pivot: Any) -> list[Any]:
        if pivot.is_ground:
            return []
        _, factors = pivot.factor_list()
        return [f.monic() for f, _ in factors if not f.is_ground]

    def ring_to_field(self, value: Any) -> Any:
        return self._field.new(value)


def _primitive_row(row: Row) -> tuple[Row, Any]:
    """Divide out the polynomial content; return the row and the content."""
    if not row:
        return row, None
    values = iter(row.values())
    gcd = next(values)
    for value in values:
        if gcd.is_ground:
            break
        gcd = gcd.gcd(value)
    if gcd.is_ground:
        return row, None
    return {col: value.exquo(gcd) for col, value in row.items()}, gcd


def _axpy(target: Row, source: Row, factor: Scalar) -> Row:
    result = dict(target)
    for col, value in source.items():
        new = result.get(col, 0) + factor * value
        if new:
            result[col] = new
        else:
            result.pop(col, None)
    return result


def default_field() -> ParameterField:
    """Q(a): s = (-1-a, 1, a)."""
    return ParameterField((PARAM_A,))


def generic_field() -> ParameterField:
    """Q(s1, s2) with s3 = -s1 - s2."""
    return ParameterField((PARAM_S1, PARAM_S2))


def s_parameters(
    field: ScalarField, a: Scalar | None = None
) -> tuple[Scalar, Scalar, Scalar]:
    """Return (s1, s2, s3) for a field, normalized as (-1-a, 1, a) when a is used."""
    if a is None and PARAM_S1 in field.names and PARAM_S2 in field.names:
        s1, s2 = field.parameter(PARAM_S1), field.parameter(PARAM_S2)
        return s1, s2, -s1 - s2
    if a is None:
        a = field.parameter(PARAM_A)
    a = field.convert(a)
    return -field.one - a, field.one, a


def field_arith(field: ScalarField, x: Scalar, y: Scalar, op: str) -> Scalar:
    """Apply one of add, sub, mul, div."""
    x, y = field.convert(x), field.convert(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return field.div(x, y)
    raise ScalarError(f"unknown operation {op}")


@dataclass
class SparseMatrix:
    """Sparse matrix stored by rows."""

    field: ScalarField
    cols: int
    rows: list[Row]

    @classmethod
    def from_dense(cls, field: ScalarField, dense: Sequence[Sequence[Any]]) -> SparseMatrix:
        cols = len(dense[0]) if dense else 0
        rows = []
        for line in dense:
            converted = {j: field.convert(v) for j, v in enumerate(line)}
            rows.append({j: v for j, v in converted.items() if v})
        return cls(field, cols, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.cols

    def entries(self) -> dict[tuple[int, int], Scalar]:
        return {(i, j): v for i, row in enumerate(self.rows) for j, v in row.items()}

    def apply(self, vector: Mapping[int, Scalar]) -> Row:
        result: Row = {}
        for i, row in enumerate(self.rows):
            total = self.field.zero
            for j, value in row.items():
                if j in vector:
                    total += value * vector[j]
            if total:
                result[i] = total
        return result

    def specialize(self, point: Mapping[str, Fraction]) -> SparseMatrix:
        target = self.field.specialize(point)
        rows = []
        for row in self.rows:
            values = {j: self.field.evaluate(v, point) for j, v in row.items()}
            rows.append({j: v for j, v in values.items() if v})
        return SparseMatrix(target, self.cols, rows)


@dataclass
class Echelon:
    """Echelon form keyed by pivot column, in ring representation."""

    field: ScalarField
    pivots: dict[int, Row]
    locus: ExceptionalLocus

    @property
    def rank(self) -> int:
        return len(self.pivots)


def echelon(field: ScalarField, rows: Iterable[Row]) -> Echelon:
    """Online fraction-free echelon form of a stream of sparse rows."""
    pivots: dict[int, Row] = {}
    factors: list[Any] = []
    seen: set[Any] = set()

    def record(multipliers: Iterable[Any]) -> None:
        for multiplier in multipliers:
            if multiplier is None or multiplier in seen:
                continue
            seen.add(multiplier)
            for factor in field.pivot_factors(multiplier):
                if factor not in factors:
                    factors.append(factor)

    for row in rows:
        if not row:
            continue
        current, removed = field.to_ring_row(row)
        record(removed)
        while current:
            lead = min(current)
            pivot_row = pivots.get(lead)
            if pivot_row is None:
                pivots[lead] = current
                record([current[lead]])
                break
            current, removed = field.ring_combine(current, pivot_row, lead)
            record(removed)
    return Echelon(field, pivots, ExceptionalLocus(tuple(factors)))


def refine_locus(
    matrix: SparseMatrix, locus: ExceptionalLocus, rank: int | None = None
) -> ExceptionalLocus:
    """Shrink a pivot locus using eliminations in other column orders.

    Each order certifies the rank off its own factors, so only common roots
    of all factor products can lower the rank. With ``rank`` given, a
    remaining factor with a rational root is kept only if the rank really
    drops there.
    """
    field = matrix.field
    if not locus.outside(field.default_locus()):
        return locus
    product = _product(locus.factors)
    cols = matrix.cols
    orders: list[Callable[[int], int]] = [
        lambda c: cols - 1 - c,
        lambda c: (c + cols // 2) % max(cols, 1),
    ]
    for relabel in orders:
        rows = [{relabel(c): v for c, v in row.items()} for row in matrix.rows]
        other = echelon(field, reversed(rows)).locus
        if not other.factors:
            return EMPTY_LOCUS
        product = product.gcd(_product(other.factors))
        if product.is_ground:
            return EMPTY_LOCUS
    factors = field.pivot_factors(product)
    if rank is not None:
        allowed = field.default_locus().factors
        factors = [
            f for f in factors if f in allowed or _drops_at_root(matrix, f, rank)
        ]
    return ExceptionalLocus(tuple(factors))


def _drops_at_root(matrix: SparseMatrix, factor: Any, rank: int) -> bool:
    """False only when ``factor`` is linear in one parameter and the rank holds at its root."""
    field = matrix.field
    if len(field.names) != 1 or factor.degree() != 1:
        return True
    name = field.names[0]
    point = {name: -evaluate_poly(factor, {name: Fraction(0)}) / _qq_to_fraction(factor.LC)}
    try:
        specialized = matrix.specialize(point)
    except PoleError:
        return True
    return echelon(specialized.field, specialized.rows).rank < rank


def _product(factors: Iterable[Any]) -> Any:
    items = list(factors)
    result = items[0]
    for item in items[1:]:
        result = result * item
    return result


def rank_with_locus(matrix: SparseMatrix) -> tuple[int, ExceptionalLocus]:
    """Generic rank and the locus certifying it."""
    form = echelon(matrix.field, matrix.rows)
    return form.rank, refine_locus(matrix, form.locus, form.rank)


def nullspace(matrix: SparseMatrix) -> tuple[list[Row], ExceptionalLocus]:
    """Basis of the generic kernel as sparse vectors."""
    form = echelon(matrix.field, matrix.rows)
    return kernel_from_echelon(form, matrix.cols), refine_locus(matrix, form.locus, form.rank)


def kernel_from_echelon(form: Echelon, cols: int) -> list[Row]:
    field = form.field
    order = sorted(form.pivots, reverse=True)
    converted = {
        lead: {c: field.ring_to_field(v) for c, v in form.pivots[lead].items()}
        for lead in order
    }
    basis: list[Row] = []
    for free in range(cols):
        if free in form.pivots:
            continue
        vector: Row = {free: field.one}
        for lead in order:
            if lead > free:
                continue
            row = converted[lead]
            total = field.zero
            for col, value in row.items():
                if col != lead and col in vector:
                    total += value * vector[col]
            if total:
                vector[lead] = -total / row[lead]
        basis.append(vector)
    return basis


def solve_in_span(
    field: ScalarField, columns: Sequence[Row], target: Row
) -> list[Scalar] | None:
    """Coefficients c with sum c_i columns[i] = target, or None."""
    reducer = SpanReducer(field)
    for col in columns:
        reducer.add(col)
    try:
        coords = reducer.coordinates(target)
    except LinearAlgebraError:
        return None
    return [coords.get(i, field.zero) for i in range(len(columns))]


class SpanReducer:
    """Incremental Gauss-Jordan reduction with coordinate tracking.

    Keys of vectors only need to be hashable. Each added vector receives the
    index of its insertion; ``coordinates`` expresses a vector in terms of
    those indices.
    """

    def __init__(self, field: ScalarField) -> None:
        self.field = field
        self._rows: dict[Any, dict[Any, Scalar]] = {}
        self._tags: dict[Any, dict[int, Scalar]] = {}
        self._count = 0
        self.independent: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def added(self) -> int:
        return self._count

    def _reduce(
        self, vector: Mapping[Any, Scalar]
    ) -> tuple[dict[Any, Scalar], dict[int, Scalar]]:
        remainder = {k: v for k, v in vector.items() if v}
        combo: dict[int, Scalar] = {}
        for key in [k for k in remainder if k in self._rows]:
            factor = remainder.get(key)
            if not factor:
                continue
            for k, v in self._rows[key].items():
                new = remainder.get(k, self.field.zero) - factor * v
                if new:
                    remainder[k] = new
                else:
                    remainder.pop(k, None)
            for k, v in self._tags[key].items():
                combo[k] = combo.get(k, self.field.zero) + factor * v
        return remainder, combo

    def add(self, vector: Mapping[Any, Scalar]) -> bool:
        """Add a vector; return True if it enlarged the span."""
        index = self._count
        self._count += 1
        remainder, combo = self._reduce(vector)
        if not remainder:
            return False
        tag = {k: -v for k, v in combo.items() if v}
        tag[index] = self.field.one
        pivot = next(iter(remainder))
        scale = self.field.one / remainder[pivot]
        row = {k: v * scale for k, v in remainder.items()}
        tag = {k: v * scale for k, v in tag.items()}
        for key, other in self._rows.items():
            factor = other.get(pivot)
            if not factor:
                continue
            for k, v in row.items():
                new = other.get(k, self.field.zero) - factor * v
                if new:
                    other[k] = new
                else:
                    other.pop(k, None)
            other_tag = self._tags[key]
            for k, v in tag.items():
                new = other_tag.get(k, self.field.zero) - factor * v
                if new:
                    other_tag[k] = new
                else:
                    other_tag.pop(k, None)
        self._rows[pivot] = row
        self._tags[pivot] = tag
        self.independent.append(index)
        return True

    def remainder(self, vector: Mapping[Any, Scalar]) -> dict[Any, Scalar]:
        return self._reduce(vector)[0]

    def contains(self, vector: Mapping[Any, Scalar]) -> bool:
        return not self._reduce(vector)[0]

    def coordinates(self, vector: Mapping[Any, Scalar]) -> dict[int, Scalar]:
        """Coordinates in terms of insertion indices; raise if outside the span."""
        remainder, combo = self._reduce(vector)
        if remainder:
            raise LinearAlgebraError("vector is not in the span")
        return {k: v for k, v in combo.items() if v}


def dense_inverse(field: ScalarField, matrix: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Inverse of a square dense matrix by Gauss-Jordan."""
    size = len(matrix)
    work = [
        [field.convert(v) for v in row] + [field.one if i == j else field.zero for j in range(size)]
        for i, row in enumerate(matrix)
    ]
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][col]), None)
        if pivot is None:
            raise LinearAlgebraError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        scale = field.one / work[col][col]
        work[col] = [v * scale for v in work[col]]
        for r in range(size):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [v - factor * p for v, p in zip(work[r], work[col], strict=True)]
    return [row[size:] for row in work]


def dense_mul(
    field: ScalarField, a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]
) -> list[list[Scalar]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [
        [sum((a[i][k] * b[k][j] for k in range(inner)), field.zero) for j in range(cols)]
        for i in range(len(a))
    ]


def random_points(
    field: ScalarField,
    count: int = DEFAULT_SAMPLE_POINTS,
    seed: int = DEFAULT_SEED,
    avoid: ExceptionalLocus = EMPTY_LOCUS,
    extra: Callable[[dict[str, Fraction]], bool] | None = None,
) -> list[dict[str, Fraction]]:
    """Random rational points off the field's default locus and ``avoid``."""
    rng = random.Random(seed)
    blocked = field.default_locus().union(avoid)
    points: list[dict[str, Fraction]] = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 1000 * max(count, 1):
            raise ScalarError("could not find enough regular sample points")
        point = {
            name: Fraction(rng.randint(-SAMPLE_HEIGHT, SAMPLE_HEIGHT), rng.randint(1, SAMPLE_HEIGHT))
            for name in field.names
        }
        if blocked.vanishes_at(point):
            continue
        if extra is not None and not extra(point):
            continue
        if point in points:
            continue
        points.append(point)
    _LOGGER.debug("Sampled %d points with seed %d", len(points), seed)
    return points
