"""Supercommutative polynomials, supervector fields and contact models.

Polynomials live on a ``CoordinateSystem`` of named even and odd generators.
A term is keyed by (even exponents, sorted tuple of odd indices); the Koszul
sign of reordering odd generators is folded into the coefficient. Odd
derivatives act from the left.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
import itertools
import logging
import random
import re
from typing import Any

from .exceptions import (
    ClosureError,
    CorrespondenceError,
    FieldModelError,
    LinearAlgebraError,
)
from .liesuper import (
    BasisElement,
    BasisSuperalgebra,
    bracket_mismatch,
    check_jacobi,
    identify_parameter,
    sign,
)
from .scalars import (
    EMPTY_LOCUS,
    ExceptionalLocus,
    Row,
    Scalar,
    ScalarField,
    SpanReducer,
    SparseMatrix,
    nullspace,
)

_LOGGER = logging.getLogger(__name__)

Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class CoordinateSystem:
    """Named even and odd coordinates."""

    even: tuple[str, ...]
    odd: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.even) | set(self.odd)) != len(self.even) + len(self.odd):
            raise FieldModelError("coordinate names must be unique")

    @property
    def names(self) -> tuple[str, ...]:
        return self.even + self.odd

    def __contains__(self, name: object) -> bool:
        return name in self.even or name in self.odd

    def is_odd(self, name: str) -> bool:
        if name in self.odd:
            return True
        if name in self.even:
            return False
        raise FieldModelError(f"unknown coordinate {name}")

    def parity(self, name: str) -> int:
        return 1 if self.is_odd(name) else 0

    def position(self, name: str) -> int:
        return self.odd.index(name) if self.is_odd(name) else self.even.index(name)

    def extended(self, even: Sequence[str] = (), odd: Sequence[str] = ()) -> CoordinateSystem:
        return CoordinateSystem(self.even + tuple(even), self.odd + tuple(odd))


def _mul_keys(left: Key, right: Key) -> tuple[int, Key] | None:
    e1, o1 = left
    e2, o2 = right
    if set(o1) & set(o2):
        return None
    inversions = sum(1 for a in o1 for b in o2 if a > b)
    exps = tuple(x + y for x, y in zip(e1, e2, strict=True))
    return sign(inversions), (exps, tuple(sorted(o1 + o2)))


class SuperPolynomial:
    """Polynomial in even variables and Grassmann variables."""

    __slots__ = ("coords", "field", "terms")

    def __init__(self, coords: CoordinateSystem, field: ScalarField, terms: Mapping[Key, Any] | None = None) -> None:
        self.coords = coords
        self.field = field
        self.terms: dict[Key, Scalar] = {}
        for key, value in (terms or {}).items():
            value = field.convert(value)
            if value:
                self.terms[key] = value

    # Construction.

    @classmethod
    def zero(cls, coords: CoordinateSystem, field: ScalarField) -> SuperPolynomial:
        return cls(coords, field)

    @classmethod
    def constant(cls, coords: CoordinateSystem, field: ScalarField, value: Any = 1) -> SuperPolynomial:
        return cls(coords, field, {((0,) * len(coords.even), ()): value})

    @classmethod
    def variable(cls, coords: CoordinateSystem, field: ScalarField, name: str) -> SuperPolynomial:
        exps = [0] * len(coords.even)
        odd: tuple[int, ...] = ()
        if coords.is_odd(name):
            odd = (coords.position(name),)
        else:
            exps[coords.position(name)] = 1
        return cls(coords, field, {(tuple(exps), odd): 1})

    def _like(self, terms: Mapping[Key, Scalar]) -> SuperPolynomial:
        result = SuperPolynomial(self.coords, self.field)
        result.terms = {k: v for k, v in terms.items() if v}
        return result

    def _coerce(self, other: Any) -> SuperPolynomial:
        if isinstance(other, SuperPolynomial):
            if other.coords != self.coords:
                raise FieldModelError("polynomials live on different coordinates")
            return other
        return SuperPolynomial.constant(self.coords, self.field, other)

    # Arithmetic.

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SuperPolynomial):
            return self.coords == other.coords and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self._coerce(other).terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: Any) -> SuperPolynomial:
        other = self._coerce(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, self.field.zero) + value
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> SuperPolynomial:
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Any) -> SuperPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> SuperPolynomial:
        return self._coerce(other) - self

    def scale(self, factor: Any) -> SuperPolynomial:
        factor = self.field.convert(factor)
        if not factor:
            return SuperPolynomial.zero(self.coords, self.field)
        return self._like({k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other: Any) -> SuperPolynomial:
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        other = self._coerce(other)
        terms: dict[Key, Scalar] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                product = _mul_keys(k1, k2)
                if product is None:
                    continue
                s, key = product
                terms[key] = terms.get(key, self.field.zero) + s * v1 * v2
        return self._like(terms)

    def __rmul__(self, other: Any) -> SuperPolynomial:
        return self.scale(other)

    def __pow__(self, exponent: int) -> SuperPolynomial:
        if exponent < 0:
            raise FieldModelError("negative powers are not polynomials")
        result = SuperPolynomial.constant(self.coords, self.field)
        for _ in range(exponent):
            result = result * self
        return result

    # Structure.

    @staticmethod
    def term_parity(key: Key) -> int:
        return len(key[1]) % 2

    @property
    def parity(self) -> int:
        parities = {self.term_parity(k) for k in self.terms}
        if len(parities) > 1:
            raise FieldModelError(f"{self} is not parity-homogeneous")
        return parities.pop() if parities else 0

    def split_parity(self) -> list[SuperPolynomial]:
        parts = [
            self._like({k: v for k, v in self.terms.items() if self.term_parity(k) == p}) for p in (0, 1)
        ]
        return [part for part in parts if part]

    def term_weight(self, key: Key, weights: Mapping[str, int]) -> int:
        exps, odd = key
        total = sum(e * weights[name] for e, name in zip(exps, self.coords.even, strict=True))
        return total + sum(weights[self.coords.odd[i]] for i in odd)

    def weight(self, weights: Mapping[str, int]) -> int:
        values = {self.term_weight(k, weights) for k in self.terms}
        if len(values) != 1:
            raise FieldModelError(f"{self} is not weight-homogeneous")
        return values.pop()

    def derivative(self, name: str) -> SuperPolynomial:
        """Left derivative along one coordinate."""
        pos = self.coords.position(name)
        terms: dict[Key, Scalar] = {}
        if self.coords.is_odd(name):
            for (exps, odd), value in self.terms.items():
                if pos in odd:
                    p = odd.index(pos)
                    terms[(exps, odd[:p] + odd[p + 1 :])] = sign(p) * value
        else:
            for (exps, odd), value in self.terms.items():
                e = exps[pos]
                if e:
                    new = exps[:pos] + (e - 1,) + exps[pos + 1 :]
                    key = (new, odd)
                    terms[key] = terms.get(key, self.field.zero) + e * value
        return self._like(terms)

    def derivatives(self, *names: str) -> SuperPolynomial:
        """d_{n1} d_{n2} ... d_{nk} f, the rightmost derivative applied first."""
        result = self
        for name in reversed(names):
            result = result.derivative(name)
        return result

    def vector(self) -> dict[Any, Scalar]:
        return dict(self.terms)

    def specialize(self, point: Mapping[str, Fraction]) -> SuperPolynomial:
        target = self.field.specialize(point)
        return SuperPolynomial(self.coords, target, {k: self.field.evaluate(v, point) for k, v in self.terms.items()})

    def coefficient(self, key: Key) -> Scalar:
        return self.terms.get(key, self.field.zero)

    def embed(self, coords: CoordinateSystem) -> SuperPolynomial:
        """The same polynomial on a coordinate system containing this one."""
        odd_map = [coords.odd.index(name) for name in self.coords.odd]
        terms = {}
        for (exps, odd), value in self.terms.items():
            by_name = dict(zip(self.coords.even, exps, strict=True))
            new_exps = tuple(by_name.get(name, 0) for name in coords.even)
            mapped = [odd_map[i] for i in odd]
            inversions = sum(1 for p in range(len(mapped)) for q in range(p + 1, len(mapped)) if mapped[p] > mapped[q])
            terms[(new_exps, tuple(sorted(mapped)))] = sign(inversions) * value
        return SuperPolynomial(coords, self.field, terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"


class SuperVectorField:
    """Derivation sum_c X^c d_c with polynomial coefficients on the left."""

    __slots__ = ("coords", "field", "components")

    def __init__(
        self, coords: CoordinateSystem, field: ScalarField, components: Mapping[str, SuperPolynomial] | None = None
    ) -> None:
        self.coords = coords
        self.field = field
        self.components: dict[str, SuperPolynomial] = {}
        for name, coeff in (components or {}).items():
            if name not in coords:
                raise FieldModelError(f"unknown coordinate {name}")
            if coeff:
                self.components[name] = coeff

    @classmethod
    def partial(cls, coords: CoordinateSystem, field: ScalarField, name: str) -> SuperVectorField:
        return cls(coords, field, {name: SuperPolynomial.constant(coords, field)})

    def coefficient(self, name: str) -> SuperPolynomial:
        return self.components.get(name, SuperPolynomial.zero(self.coords, self.field))

    def __call__(self, f: SuperPolynomial) -> SuperPolynomial:
        result = SuperPolynomial.zero(self.coords, self.field)
        for name, coeff in self.components.items():
            result = result + coeff * f.derivative(name)
        return result

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.coords == other.coords and self.components == other.components

    __hash__ = None  # type: ignore[assignment]

    @property
    def parity(self) -> int:
        parities = set()
        for name, coeff in self.components.items():
            for part in coeff.split_parity():
                parities.add((part.parity + self.coords.parity(name)) % 2)
        if len(parities) > 1:
            raise FieldModelError(f"{self} is not parity-homogeneous")
        return parities.pop() if parities else 0

    def __add__(self, other: SuperVectorField) -> SuperVectorField:
        components = dict(self.components)
        for name, coeff in other.components.items():
            components[name] = components[name] + coeff if name in components else coeff
        return SuperVectorField(self.coords, self.field, components)

    def __neg__(self) -> SuperVectorField:
        return SuperVectorField(self.coords, self.field, {k: -v for k, v in self.components.items()})

    def __sub__(self, other: SuperVectorField) -> SuperVectorField:
        return self + (-other)

    def scale(self, factor: Any) -> SuperVectorField:
        """Left multiplication by a scalar or a polynomial."""
        if isinstance(factor, SuperPolynomial):
            return SuperVectorField(self.coords, self.field, {k: factor * v for k, v in self.components.items()})
        return SuperVectorField(self.coords, self.field, {k: v.scale(factor) for k, v in self.components.items()})

    def __rmul__(self, factor: Any) -> SuperVectorField:
        return self.scale(factor)

    def weight(self, weights: Mapping[str, int]) -> int:
        values = set()
        for name, coeff in self.components.items():
            for key in coeff.terms:
                values.add(coeff.term_weight(key, weights) - weights[name])
        if len(values) != 1:
            raise FieldModelError(f"{self} is not weight-homogeneous")
        return values.pop()

    def vector(self) -> dict[Any, Scalar]:
        return {(name, key): value for name, coeff in self.components.items() for key, value in coeff.terms.items()}

    def specialize(self, point: Mapping[str, Fraction]) -> SuperVectorField:
        target = self.field.specialize(point)
        return SuperVectorField(self.coords, target, {k: v.specialize(point) for k, v in self.components.items()})

    def __str__(self) -> str:
        return format_field(self)

    def __repr__(self) -> str:
        return f"SuperVectorField({self})"


def super_bracket(x: SuperVectorField, y: SuperVectorField) -> SuperVectorField:
    """X Y - (-1)^{|X||Y|} Y X."""
    if x.coords != y.coords:
        raise FieldModelError("fields live on different coordinates")
    if not x or not y:
        return SuperVectorField(x.coords, x.field)
    s = sign(x.parity * y.parity)
    components = {}
    for name in set(x.components) | set(y.components):
        components[name] = x(y.coefficient(name)) - y(x.coefficient(name)).scale(s)
    return SuperVectorField(x.coords, x.field, components)


@dataclass
class DifferentialOperator:
    """sum_i m_i d_{c_i1} ... d_{c_ik}, each multiplier acting on the left."""

    terms: list[tuple[SuperPolynomial, tuple[str, ...]]]

    @classmethod
    def derivative(cls, coords: CoordinateSystem, field: ScalarField, *names: str, coeff: Any = 1) -> DifferentialOperator:
        return cls([(SuperPolynomial.constant(coords, field, coeff), tuple(names))])

    def __add__(self, other: DifferentialOperator) -> DifferentialOperator:
        return DifferentialOperator(self.terms + other.terms)

    def __sub__(self, other: DifferentialOperator) -> DifferentialOperator:
        return DifferentialOperator(self.terms + [(-m, names) for m, names in other.terms])

    def times(self, factor: Any) -> DifferentialOperator:
        return DifferentialOperator([(factor * m if isinstance(factor, SuperPolynomial) else m.scale(factor), names) for m, names in self.terms])

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        result = SuperPolynomial.zero(f.coords, f.field)
        for multiplier, names in self.terms:
            result = result + multiplier * f.derivatives(*names)
        return result


# Text format.

_TOKEN = re.compile(r"\s*(?:(\d+)|d/d([A-Za-z_][A-Za-z_0-9]*)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise FieldModelError(f"cannot parse {text!r} at position {pos}")
        number, deriv, name, op = match.groups()
        if number is not None:
            tokens.append(("num", number))
        elif deriv is not None:
            tokens.append(("d", deriv))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive descent over sums of products; d/dname closes a product."""

    def __init__(self, text: str, coords: CoordinateSystem, field: ScalarField, symbols: Mapping[str, Any]) -> None:
        self.tokens = _tokenize(text)
        self.pos = 0
        self.coords = coords
        self.field = field
        self.symbols = symbols

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            raise FieldModelError("unexpected end of expression")
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def parse(self) -> SuperPolynomial | SuperVectorField:
        value = self.expr()
        if self.peek() is not None:
            raise FieldModelError(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> Any:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            right = self.term()
            value = _combine(value, right, op)
        return value

    def term(self) -> Any:
        negative = False
        if self.peek() == ("op", "-"):
            self.take()
            negative = True
        value = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")) or (self.peek() is not None and self.peek()[0] == "d"):
            if self.peek()[0] == "d":
                right = self.factor()
                value = _multiply(value, right)
                continue
            op = self.take()[1]
            right = self.factor()
            if op == "*":
                value = _multiply(value, right)
            else:
                value = _divide(value, right)
        if negative:
            value = -value
        return value

    def factor(self) -> Any:
        value = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, text = self.take()
            if kind != "num" or not isinstance(value, SuperPolynomial):
                raise FieldModelError("exponents must be integers applied to polynomials")
            value = value ** int(text)
        return value

    def atom(self) -> Any:
        if self.peek() is None:
            raise FieldModelError("unexpected end of expression")
        kind, text = self.take()
        coords, field = self.coords, self.field
        if kind == "num":
            return SuperPolynomial.constant(coords, field, int(text))
        if kind == "d":
            return SuperVectorField.partial(coords, field, text)
        if kind == "name":
            if text in coords:
                return SuperPolynomial.variable(coords, field, text)
            if text in self.symbols:
                return SuperPolynomial.constant(coords, field, self.symbols[text])
            if text in field.names:
                return SuperPolynomial.constant(coords, field, field.parameter(text))
            raise FieldModelError(f"unknown name {text}")
        if text == "(":
            value = self.expr()
            if self.take() != ("op", ")"):
                raise FieldModelError("missing closing parenthesis")
            return value
        raise FieldModelError(f"unexpected token {text!r}")


def _combine(left: Any, right: Any, op: str) -> Any:
    if isinstance(left, SuperVectorField) != isinstance(right, SuperVectorField):
        if isinstance(left, SuperPolynomial) and not left:
            left = SuperVectorField(right.coords, right.field)
        elif isinstance(right, SuperPolynomial) and not right:
            right = SuperVectorField(left.coords, left.field)
        else:
            raise FieldModelError("cannot add a polynomial and a vector field")
    return left + right if op == "+" else left - right


def _multiply(left: Any, right: Any) -> Any:
    if isinstance(left, SuperVectorField):
        raise FieldModelError("a vector field must be the last factor of a product")
    if isinstance(right, SuperVectorField):
        return right.scale(left)
    return left * right


def _divide(left: Any, right: Any) -> Any:
    if not isinstance(right, SuperPolynomial) or any(k[1] or any(k[0]) for k in right.terms):
        raise FieldModelError("only division by scalars is supported")
    value = right.coefficient(((0,) * len(right.coords.even), ()))
    inverse = right.field.div(right.field.one, value)
    return left.scale(inverse)


def parse_expression(
    text: str, coords: CoordinateSystem, field: ScalarField, symbols: Mapping[str, Any] | None = None
) -> SuperPolynomial | SuperVectorField:
    """Parse a polynomial such as ``x*xi1 + eps*xi2*xi3*xi4`` or a field such as ``xi1*d/dx + d/dxi2``."""
    return _Parser(text, coords, field, symbols or {}).parse()


def parse_polynomial(text: str, coords: CoordinateSystem, field: ScalarField, symbols: Mapping[str, Any] | None = None) -> SuperPolynomial:
    value = parse_expression(text, coords, field, symbols)
    if not isinstance(value, SuperPolynomial):
        raise FieldModelError(f"{text!r} is a vector field, not a polynomial")
    return value


def parse_field(text: str, coords: CoordinateSystem, field: ScalarField, symbols: Mapping[str, Any] | None = None) -> SuperVectorField:
    value = parse_expression(text, coords, field, symbols)
    if isinstance(value, SuperPolynomial):
        if value:
            raise FieldModelError(f"{text!r} is a polynomial, not a vector field")
        return SuperVectorField(coords, field)
    return value


def _format_monomial(coords: CoordinateSystem, key: Key) -> str:
    exps, odd = key
    parts = []
    for e, name in zip(exps, coords.even, strict=True):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    parts.extend(coords.odd[i] for i in odd)
    return "*".join(parts)


def format_polynomial(poly: SuperPolynomial) -> str:
    if not poly:
        return "0"
    pieces = []
    for key in sorted(poly.terms, key=lambda k: (sum(k[0]) + len(k[1]), k)):
        coeff = poly.field.format(poly.terms[key])
        monomial = _format_monomial(poly.coords, key)
        if any(ch in coeff[1:] for ch in "+-/"):
            coeff = f"({coeff})"
        if not monomial:
            pieces.append(coeff)
        elif coeff == "1":
            pieces.append(monomial)
        elif coeff == "-1":
            pieces.append(f"-{monomial}")
        else:
            pieces.append(f"{coeff}*{monomial}")
    return " + ".join(pieces).replace("+ -", "- ")


def format_field(field: SuperVectorField) -> str:
    if not field:
        return "0"
    pieces = []
    for name in field.coords.names:
        coeff = field.components.get(name)
        if coeff is None:
            continue
        text = format_polynomial(coeff)
        if text == "1":
            pieces.append(f"d/d{name}")
        elif text == "-1":
            pieces.append(f"-d/d{name}")
        else:
            pieces.append(f"({text})*d/d{name}")
    return " + ".join(pieces).replace("+ -", "- ")


# Weighted monomials.


def monomials_of_weight(
    coords: CoordinateSystem, field: ScalarField, weights: Mapping[str, int], weight: int
) -> list[SuperPolynomial]:
    """All monomials of the given weight; even weights must be positive."""
    if weight < 0:
        return []
    if any(weights[name] <= 0 for name in coords.even):
        raise FieldModelError("even coordinates need positive weights to bound monomials")
    result = []
    odd_count = len(coords.odd)
    for size in range(odd_count + 1):
        for subset in itertools.combinations(range(odd_count), size):
            rest = weight - sum(weights[coords.odd[i]] for i in subset)
            if rest < 0:
                continue
            for exps in _exponents(coords.even, weights, rest):
                result.append(SuperPolynomial(coords, field, {(exps, subset): 1}))
    return result


def _exponents(names: Sequence[str], weights: Mapping[str, int], total: int) -> Iterable[tuple[int, ...]]:
    if not names:
        if total == 0:
            yield ()
        return
    w = weights[names[0]]
    for e in range(total // w + 1):
        for rest in _exponents(names[1:], weights, total - e * w):
            yield (e, *rest)


def random_polynomial(
    coords: CoordinateSystem,
    field: ScalarField,
    rng: random.Random,
    max_degree: int = 2,
    terms: int = 4,
    parity: int | None = None,
    variables: Sequence[str] | None = None,
) -> SuperPolynomial:
    """Sparse random polynomial with small integer coefficients, optionally in a subset of the coordinates."""
    allowed = set(coords.names if variables is None else variables)
    odd_pool = [i for i, name in enumerate(coords.odd) if name in allowed]
    result = SuperPolynomial.zero(coords, field)
    for _ in range(terms):
        odd = tuple(i for i in odd_pool if rng.random() < 0.4)
        if parity is not None and len(odd) % 2 != parity:
            odd = odd[1:] if odd else (rng.choice(odd_pool),) if odd_pool else ()
        exps = tuple(rng.randint(0, max_degree) if name in allowed else 0 for name in coords.even)
        result = result + SuperPolynomial(coords, field, {(exps, odd): rng.randint(-5, 5)})
    if parity is not None:
        parts = [p for p in result.split_parity() if p.parity == parity]
        return parts[0] if parts else SuperPolynomial.zero(coords, field)
    return result


# Contact models.


class ContactModel:
    """Generating functions, contact fields and the Lagrange-Jacobi bracket."""

    name = ""
    parity_shift = 0

    def __init__(self, coords: CoordinateSystem, field: ScalarField, weights: Mapping[str, int], shift: int) -> None:
        self.coords = coords
        self.field = field
        self.weights = dict(weights)
        self.shift = shift

    def poly(self, text: str, symbols: Mapping[str, Any] | None = None) -> SuperPolynomial:
        return parse_polynomial(text, self.coords, self.field, symbols)

    def var(self, name: str) -> SuperPolynomial:
        return SuperPolynomial.variable(self.coords, self.field, name)

    def field_parity(self, f: SuperPolynomial) -> int:
        return (f.parity + self.parity_shift) % 2

    def level(self, f: SuperPolynomial) -> int:
        return f.weight(self.weights) - self.shift

    def contact_field(self, f: SuperPolynomial) -> SuperVectorField:
        result = SuperVectorField(self.coords, self.field)
        for part in f.split_parity():
            result = result + self._contact_field(part)
        return result

    def bracket(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        result = SuperPolynomial.zero(self.coords, self.field)
        for p in f.split_parity():
            for q in g.split_parity():
                result = result + self._bracket(p, q)
        return result

    def _contact_field(self, f: SuperPolynomial) -> SuperVectorField:
        raise NotImplementedError

    def _bracket(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        raise NotImplementedError

    def generators(self, level: int) -> list[SuperPolynomial]:
        """Monomial generating functions of the given level."""
        return monomials_of_weight(self.coords, self.field, self.weights, level + self.shift)

    def graded_dims(self, levels: Iterable[int]) -> dict[int, tuple[int, int]]:
        dims = {}
        for level in levels:
            odd = sum(self.field_parity(f) for f in self.generators(level))
            dims[level] = (len(self.generators(level)) - odd, odd)
        return dims

    def homomorphism_defect(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperVectorField:
        """[X_f, X_g] - X_{f,g}; zero for a correct model."""
        left = super_bracket(self.contact_field(f), self.contact_field(g))
        return left - self.contact_field(self.bracket(f, g))


class DarbouxModel(ContactModel):
    """Even contact form dx + sum xi_i dxi_i on C^{1|4}."""

    name = "M14"

    def __init__(self, field: ScalarField, extra_even: Sequence[str] = ()) -> None:
        coords = CoordinateSystem(("x", *extra_even), ("xi1", "xi2", "xi3", "xi4"))
        weights = {"x": 2, **{f"xi{i}": 1 for i in range(1, 5)}, **{name: 1 for name in extra_even}}
        super().__init__(coords, field, weights, shift=2)

    def d(self, j: int, f: SuperPolynomial) -> SuperPolynomial:
        return f.derivative(f"xi{j}") + self.var(f"xi{j}") * f.derivative("x")

    def _contact_field(self, f: SuperPolynomial) -> SuperVectorField:
        s = sign(f.parity)
        half = self.field.frac(s, 2)
        x_part = f
        components = {}
        for j in range(1, 5):
            dj = self.d(j, f)
            x_part = x_part + (dj * self.var(f"xi{j}")).scale(half)
            components[f"xi{j}"] = dj.scale(half)
        components["x"] = x_part
        return SuperVectorField(self.coords, self.field, components)

    def _bracket(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        s = sign(f.parity)
        result = f * g.derivative("x") - (g * f.derivative("x")).scale(sign(f.parity * g.parity))
        for j in range(1, 5):
            result = result + (self.d(j, f) * self.d(j, g)).scale(self.field.frac(s, 2))
        return result

    def lift(self, f: SuperPolynomial, h: str = "h") -> SuperVectorField:
        """X_f + f_x h d/dh on J^0 M; the model needs ``h`` among its even coordinates."""
        h_var = self.var(h)
        return self.contact_field(f) + SuperVectorField(self.coords, self.field, {h: f.derivative("x") * h_var})


class TwistorModel(ContactModel):
    """Even contact form dy + nu_1 dtheta_1 + nu_2 dtheta_2 on C^{1|4}."""

    name = "M24"

    def __init__(self, field: ScalarField, weights: Mapping[str, int] | None = None, shift: int = 3) -> None:
        coords = CoordinateSystem(("y",), ("theta1", "theta2", "nu1", "nu2"))
        default = {"y": 3, "theta1": 1, "theta2": 1, "nu1": 2, "nu2": 2}
        super().__init__(coords, field, weights or default, shift)

    def d(self, j: int, f: SuperPolynomial) -> SuperPolynomial:
        return f.derivative(f"theta{j}") + self.var(f"nu{j}") * f.derivative("y")

    def _contact_field(self, f: SuperPolynomial) -> SuperVectorField:
        s = sign(f.parity)
        y_part = f
        components = {}
        for j in (1, 2):
            dnu = f.derivative(f"nu{j}")
            components[f"nu{j}"] = self.d(j, f).scale(s)
            components[f"theta{j}"] = dnu.scale(s)
            y_part = y_part + (dnu * self.var(f"nu{j}")).scale(s)
        components["y"] = y_part
        return SuperVectorField(self.coords, self.field, components)

    def _bracket(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        s = sign(f.parity)
        result = f * g.derivative("y") - (g * f.derivative("y")).scale(sign(f.parity * g.parity))
        for j in (1, 2):
            cross = f.derivative(f"nu{j}") * self.d(j, g) + self.d(j, f) * g.derivative(f"nu{j}")
            result = result + cross.scale(s)
        return result


class OddContactModel(ContactModel):
    """Odd contact form dpsi - sum (dxi_i) psi_i on C^{3|4}."""

    name = "M34_diamond"
    parity_shift = 1

    def __init__(self, field: ScalarField) -> None:
        coords = CoordinateSystem(("psi1", "psi2", "psi3"), ("xi1", "xi2", "xi3", "psi"))
        weights = {"xi1": 1, "xi2": 1, "xi3": 1, "psi1": 2, "psi2": 2, "psi3": 2, "psi": 3}
        super().__init__(coords, field, weights, shift=3)

    def d(self, i: int, f: SuperPolynomial) -> SuperPolynomial:
        return f.derivative(f"xi{i}") + self.var(f"psi{i}") * f.derivative("psi")

    def _contact_field(self, f: SuperPolynomial) -> SuperVectorField:
        s = sign(f.parity)
        psi_part = f
        components = {}
        for i in (1, 2, 3):
            dpsi = f.derivative(f"psi{i}")
            components[f"xi{i}"] = -dpsi
            psi_part = psi_part - dpsi * self.var(f"psi{i}")
            components[f"psi{i}"] = self.d(i, f).scale(-s)
        components["psi"] = psi_part
        return SuperVectorField(self.coords, self.field, components)

    def _bracket(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        s = sign(f.parity)
        result = f * g.derivative("psi") + (f.derivative("psi") * g).scale(s)
        for i in (1, 2, 3):
            result = result - f.derivative(f"psi{i}") * self.d(i, g)
            result = result - (self.d(i, f) * g.derivative(f"psi{i}")).scale(s)
        return result

    def jacobi_defect(self, f: SuperPolynomial, g: SuperPolynomial, h: SuperPolynomial) -> SuperPolynomial:
        """{f,{g,h}} - {{f,g},h} - (-1)^{(|f|+1)(|g|+1)} {g,{f,h}} for homogeneous f, g."""
        b = self.bracket
        s = sign((f.parity + 1) * (g.parity + 1))
        return b(f, b(g, h)) - b(b(f, g), h) - b(g, b(f, h)).scale(s)


# Spans, closures and correspondences.


def _combination(elements: Sequence[Any], coeffs: Mapping[int, Scalar]) -> Any:
    result = None
    for i, c in coeffs.items():
        term = elements[i].scale(c)
        result = term if result is None else result + term
    return result


def span_closure(
    elements: Sequence[Any],
    bracket: Callable[[Any, Any], Any],
    parity_of: Callable[[Any], int],
    field: ScalarField,
    names: Sequence[str] | None = None,
    degree_of: Callable[[Any], int] | None = None,
    name: str = "",
) -> BasisSuperalgebra:
    """Structure constants of a bracket-closed span of fields or generating functions."""
    names = list(names) if names is not None else [f"e{i}" for i in range(len(elements))]
    reducer = SpanReducer(field)
    for i, element in enumerate(elements):
        if not reducer.add(element.vector()):
            raise LinearAlgebraError(f"{names[i]} is linearly dependent on the previous elements")
    brackets: dict[tuple[int, int], Row] = {}
    for i in range(len(elements)):
        for j in range(i, len(elements)):
            value = bracket(elements[i], elements[j])
            try:
                coords = reducer.coordinates(value.vector())
            except LinearAlgebraError as err:
                raise ClosureError(f"[{names[i]}, {names[j]}] = {value} escapes the span", (names[i], names[j])) from err
            if coords:
                brackets[(i, j)] = coords
    basis = [
        BasisElement(n, parity_of(e), degree_of(e) if degree_of is not None else None)
        for n, e in zip(names, elements, strict=True)
    ]
    algebra = BasisSuperalgebra(field, basis, brackets, name)
    _LOGGER.info("%s closes with sdim %s", name or "span", algebra.sdim)
    return algebra


def model_closure(model: ContactModel, functions: Sequence[SuperPolynomial], names: Sequence[str] | None = None, name: str = "") -> BasisSuperalgebra:
    return span_closure(functions, model.bracket, model.field_parity, model.field, names, model.level, name or model.name)


def field_closure(
    fields: Sequence[SuperVectorField], weights: Mapping[str, int], names: Sequence[str] | None = None, name: str = ""
) -> BasisSuperalgebra:
    field = fields[0].field
    return span_closure(fields, super_bracket, lambda x: x.parity, field, names, lambda x: x.weight(weights), name)


@dataclass
class CorrespondenceResult:
    """Outcome of comparing a realized algebra with a target."""

    sdim: tuple[int, int]
    jacobi: bool
    j_value: Scalar | None = None
    locus: ExceptionalLocus = EMPTY_LOCUS


def verify_correspondence(
    source: BasisSuperalgebra,
    target: BasisSuperalgebra | None = None,
    images: Sequence[Mapping[int, Scalar]] | None = None,
    expected_j: Scalar | None = None,
) -> CorrespondenceResult:
    """Match structure constants through ``images`` or, without a map, by j-invariant."""
    if check_jacobi(source):
        raise CorrespondenceError(f"{source.name} violates the Jacobi identity")
    if target is not None and source.sdim != target.sdim:
        raise CorrespondenceError(f"sdim {source.sdim} differs from {target.sdim}")
    if target is not None and images is not None:
        mismatch = bracket_mismatch(source, target, images)
        if mismatch is not None:
            raise CorrespondenceError(f"bracket [{mismatch[0]}, {mismatch[1]}] does not match", mismatch)
        return CorrespondenceResult(source.sdim, True)
    j_value = identify_parameter(source)
    if expected_j is not None and j_value != expected_j:
        raise CorrespondenceError(
            f"j-invariant {source.field.format(j_value)} differs from {source.field.format(expected_j)}", j_value
        )
    return CorrespondenceResult(source.sdim, True, j_value)


# Linear solves over polynomial ansatz spaces.


def _kernel(field: ScalarField, columns: Sequence[Mapping[Any, Scalar]]) -> tuple[list[Row], ExceptionalLocus]:
    keys: dict[Any, int] = {}
    rows: dict[int, Row] = {}
    for c, column in enumerate(columns):
        for key, value in column.items():
            r = keys.setdefault(key, len(keys))
            rows.setdefault(r, {})[c] = value
    return nullspace(SparseMatrix(field, len(columns), list(rows.values())))


def pde_solution_space(
    operators: Sequence[DifferentialOperator], ansatz: Sequence[SuperPolynomial]
) -> list[SuperPolynomial]:
    """Basis of the common kernel of the operators on span(ansatz), split by parity."""
    if not ansatz:
        return []
    field = ansatz[0].field
    solutions = []
    for parity in (0, 1):
        part = [f for f in ansatz if f.parity == parity]
        columns = []
        for f in part:
            column: dict[Any, Scalar] = {}
            for n, op in enumerate(operators):
                for key, value in op.apply(f).terms.items():
                    column[(n, key)] = value
            columns.append(column)
        basis, _ = _kernel(field, columns)
        solutions.extend(_combination(part, vector) for vector in basis)
    return solutions


def bound_stability(
    operators: Sequence[DifferentialOperator], ansatz: Sequence[SuperPolynomial], larger: Sequence[SuperPolynomial]
) -> bool:
    """Raising the ansatz does not enlarge the solution space."""
    return len(pde_solution_space(operators, ansatz)) == len(pde_solution_space(operators, larger))


@dataclass
class DistributionFrame:
    """Frame of a distribution whose leading coefficients form the identity."""

    fields: list[SuperVectorField]
    leading: list[str]
    name: str = ""

    def __post_init__(self) -> None:
        if len(self.fields) != len(self.leading):
            raise FieldModelError("one leading coordinate per frame field")
        for i, v in enumerate(self.fields):
            for j, lead in enumerate(self.leading):
                expected = 1 if i == j else 0
                if v.coefficient(lead) != expected:
                    raise FieldModelError(f"{self.name or 'frame'}: field {i} has a non-unit leading entry at {lead}")

    @property
    def coords(self) -> CoordinateSystem:
        return self.fields[0].coords

    def remainder(self, x: SuperVectorField) -> SuperVectorField:
        result = x
        for v, lead in zip(self.fields, self.leading, strict=True):
            c = x.coefficient(lead)
            if c:
                result = result - v.scale(c)
        return result

    def contains(self, x: SuperVectorField) -> bool:
        return not self.remainder(x)


def symmetry_check(s: SuperVectorField, frame: DistributionFrame) -> bool:
    """[S, v_i] lies in the O-span of the frame for every i."""
    return all(frame.contains(super_bracket(s, v)) for v in frame.fields)


def symmetry_defects(s: SuperVectorField, frame: DistributionFrame) -> list[int]:
    return [i for i, v in enumerate(frame.fields) if not frame.contains(super_bracket(s, v))]


def field_ansatz(
    coords: CoordinateSystem, field: ScalarField, weights: Mapping[str, int], level: int
) -> list[SuperVectorField]:
    """Monomial fields m d_c of the given weight."""
    result = []
    for name in coords.names:
        for m in monomials_of_weight(coords, field, weights, level + weights[name]):
            result.append(SuperVectorField(coords, field, {name: m}))
    return result


def symmetry_algebra(frame: DistributionFrame, weights: Mapping[str, int], level: int) -> list[SuperVectorField]:
    """All polynomial symmetries of the frame of one weight."""
    coords = frame.coords
    field = frame.fields[0].field
    result = []
    for parity in (0, 1):
        ansatz = [x for x in field_ansatz(coords, field, weights, level) if x.parity == parity]
        columns = []
        for x in ansatz:
            column: dict[Any, Scalar] = {}
            for i, v in enumerate(frame.fields):
                for key, value in frame.remainder(super_bracket(x, v)).vector().items():
                    column[(i, key)] = value
            columns.append(column)
        basis, _ = _kernel(field, columns)
        result.extend(_combination(ansatz, vector) for vector in basis)
    _LOGGER.debug("%s: %d symmetries at weight %d", frame.name, len(result), level)
    return result


def symmetry_dims(frame: DistributionFrame, weights: Mapping[str, int], levels: Iterable[int]) -> dict[int, tuple[int, int]]:
    dims = {}
    for level in levels:
        fields = symmetry_algebra(frame, weights, level)
        odd = sum(x.parity for x in fields)
        dims[level] = (len(fields) - odd, odd)
    return dims


def generating_function_symmetries(model: ContactModel, frame: DistributionFrame, level: int) -> list[SuperPolynomial]:
    """Generating functions f of the given level whose contact field preserves the frame."""
    result = []
    for parity in (0, 1):
        ansatz = [f for f in model.generators(level) if f.parity == parity]
        columns = []
        for f in ansatz:
            x = model.contact_field(f)
            column: dict[Any, Scalar] = {}
            for i, v in enumerate(frame.fields):
                for key, value in frame.remainder(super_bracket(x, v)).vector().items():
                    column[(i, key)] = value
            columns.append(column)
        basis, _ = _kernel(model.field, columns)
        result.extend(_combination(ansatz, vector) for vector in basis)
    return result


def _remainder_kernel(
    ansatz: Sequence[Any],
    conditions: Sequence[Any],
    bracket: Callable[[Any, Any], Any],
    target: Sequence[Any],
    field: ScalarField,
) -> list[Any]:
    """Combinations x of the ansatz with bracket(x, c) in span(target) for every condition c."""
    reducer = SpanReducer(field)
    for t in target:
        reducer.add(t.vector())
    columns = []
    for x in ansatz:
        column: dict[Any, Scalar] = {}
        for n, c in enumerate(conditions):
            for key, value in reducer.remainder(bracket(x, c).vector()).items():
                column[(n, key)] = value
        columns.append(column)
    basis, _ = _kernel(field, columns)
    return [_combination(ansatz, vector) for vector in basis]


def normalizer(
    model: ContactModel, sub: Sequence[SuperPolynomial], levels: Iterable[int]
) -> dict[int, list[SuperPolynomial]]:
    """Degreewise {w in c_k : {w, sub} in sub}."""
    result = {}
    for level in levels:
        found: list[SuperPolynomial] = []
        for parity in (0, 1):
            ansatz = [f for f in model.generators(level) if f.parity == parity]
            found.extend(_remainder_kernel(ansatz, sub, model.bracket, sub, model.field))
        result[level] = found
    return result


def reduced_prolongation(
    lower: Mapping[int, Sequence[Any]],
    candidates: Sequence[Any],
    bracket: Callable[[Any, Any], Any],
    parity_of: Callable[[Any], int],
    level: int,
    field: ScalarField,
) -> list[Any]:
    """{x in span(candidates) : [x, g_-1] in g_{level-1}}."""
    result = []
    for parity in (0, 1):
        ansatz = [x for x in candidates if parity_of(x) == parity]
        result.extend(_remainder_kernel(ansatz, lower[-1], bracket, lower[level - 1], field))
    return result


def lift_homomorphism_check(model: DarbouxModel, pairs: Iterable[tuple[SuperPolynomial, SuperPolynomial]], h: str = "h") -> bool:
    """[X_f^(0), X_g^(0)] = X_{f,g}^(0) on every pair."""
    for f, g in pairs:
        left = super_bracket(model.lift(f, h), model.lift(g, h))
        if left != model.lift(model.bracket(f, g), h):
            _LOGGER.warning("lift fails on (%s, %s)", f, g)
            return False
    return True
