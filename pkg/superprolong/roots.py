"""Roots, simple systems, Cartan matrices and parabolic gradings of D(2,1;a)."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import itertools
import logging
from typing import Any

from .const import DIAGRAMS, NODES
from .exceptions import ClassificationError, GradingError, RootSystemError
from .liesuper import (
    EVEN,
    ODD,
    BasisSuperalgebra,
    BilinearForm,
    center,
    derived,
)
from .scalars import RationalField, Scalar, ScalarField, dense_inverse

_LOGGER = logging.getLogger(__name__)

CARTAN_NAMES = ("H1", "H2", "H3")

# Simple roots in epsilon coordinates, node order 1, 2, 3.
SIMPLE_ROOTS: dict[str, tuple[tuple[int, int, int], ...]] = {
    "I": ((1, -1, -1), (0, 2, 0), (0, 0, 2)),
    "II": ((0, 2, 0), (-1, -1, 1), (2, 0, 0)),
    "III": ((0, 0, 2), (2, 0, 0), (-1, 1, -1)),
    "IV": ((-1, 1, 1), (1, 1, -1), (1, -1, 1)),
}

# Isotropic rows are rescaled by 1/2 except where listed.
ISOTROPIC_ROW_SCALE = {("I", 1): Fraction(-1, 2)}


@dataclass(frozen=True)
class Root:
    """A root in the epsilon basis."""

    coords: tuple[int, int, int]
    parity: int

    def __post_init__(self) -> None:
        if not any(self.coords):
            raise RootSystemError("roots are nonzero")
        if self.parity == EVEN and sorted(abs(c) for c in self.coords) != [0, 0, 2]:
            raise RootSystemError(f"{self.coords} is not an even root")
        if self.parity == ODD and any(abs(c) != 1 for c in self.coords):
            raise RootSystemError(f"{self.coords} is not an odd root")

    def __neg__(self) -> Root:
        return Root(tuple(-c for c in self.coords), self.parity)  # type: ignore[arg-type]

    def __add__(self, other: Root) -> Root:
        coords = tuple(a + b for a, b in zip(self.coords, other.coords, strict=True))
        return Root(coords, (self.parity + other.parity) % 2)  # type: ignore[arg-type]

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords, start=1):
            if not c:
                continue
            coeff = {1: "", -1: "-"}.get(c, str(c))
            terms.append(f"{coeff}e{i}")
        return "+".join(terms).replace("+-", "-")


def pairing(s: Sequence[Scalar], alpha: Root, beta: Root) -> Scalar:
    """<eps_i, eps_j> = s_i delta_ij."""
    return sum((s[i] * alpha.coords[i] * beta.coords[i] for i in range(3)), 0 * s[0])


def pairing_from_form(form: BilinearForm) -> tuple[Scalar, Scalar, Scalar]:
    """Dual of B on the Cartan subalgebra; gives (s1, s2, s3) for the normalized form."""
    alg = form.algebra
    idx = [alg.index(n) for n in CARTAN_NAMES]
    inverse = dense_inverse(alg.field, [[form.entry(i, j) for j in idx] for i in idx])
    for i in range(3):
        for j in range(3):
            if i != j and inverse[i][j]:
                raise RootSystemError("Cartan basis is not orthogonal for B")
    return inverse[0][0], inverse[1][1], inverse[2][2]


def root_decomposition(
    alg: BasisSuperalgebra, cartan: Sequence[str] = CARTAN_NAMES
) -> list[tuple[Root, int]]:
    """Roots and root-vector indices of the basis (Cartan elements omitted)."""
    hs = [alg.index(n) for n in cartan]
    result = []
    for k in range(alg.dim):
        weights = []
        for h in hs:
            image = alg.bracket_basis(h, k)
            if set(image) - {k}:
                raise RootSystemError(f"{alg.basis[k].name} is not a weight vector")
            value = image.get(k, alg.field.zero)
            weights.append(alg.field.to_rational(value))
        if not any(weights):
            continue
        coords = tuple(int(w) for w in weights)
        if any(Fraction(c) != w for c, w in zip(coords, weights, strict=True)):
            raise RootSystemError(f"{alg.basis[k].name} has a non-integral weight")
        result.append((Root(coords, alg.parity(k)), k))  # type: ignore[arg-type]
    return result


def all_roots() -> list[Root]:
    even = [Root(tuple(2 * sgn if j == i else 0 for j in range(3)), EVEN) for i in range(3) for sgn in (1, -1)]  # type: ignore[arg-type]
    odd = [Root(signs, ODD) for signs in itertools.product((1, -1), repeat=3)]
    return even + odd


@dataclass(frozen=True)
class SimpleSystem:
    """Three simple roots labelled by diagram, with the tracked parameter.

    ``parameter`` is the value of a at which the standard Cartan matrix of
    ``label`` describes these roots; None means the ambient a.
    """

    label: str
    roots: tuple[Root, Root, Root]
    parameter: Scalar | None = None

    @classmethod
    def standard(cls, label: str) -> SimpleSystem:
        if label not in SIMPLE_ROOTS:
            raise RootSystemError(f"unknown diagram {label}")
        roots = tuple(Root(c, ODD if all(abs(x) == 1 for x in c) else EVEN) for c in SIMPLE_ROOTS[label])
        return cls(label, roots)  # type: ignore[arg-type]

    def coefficients(self, root: Root) -> tuple[Fraction, Fraction, Fraction]:
        """Coordinates of a root in the simple roots."""
        matrix = [[Fraction(self.roots[j].coords[i]) for j in range(3)] for i in range(3)]
        inverse = _rational_inverse(matrix)
        return tuple(
            sum((inverse[j][i] * root.coords[i] for i in range(3)), Fraction(0)) for j in range(3)
        )  # type: ignore[return-value]

    def is_positive(self, root: Root) -> bool:
        coeffs = self.coefficients(root)
        if all(c >= 0 for c in coeffs):
            return True
        if all(c <= 0 for c in coeffs):
            return False
        raise RootSystemError(f"{root} is neither positive nor negative for {self.label}")

    def positive_roots(self) -> list[Root]:
        return [r for r in all_roots() if self.is_positive(r)]


def _rational_inverse(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    return dense_inverse(RationalField(), matrix)


def odd_reflection(system: SimpleSystem, node: int, s: Sequence[Scalar]) -> SimpleSystem:
    """r_alpha for an odd isotropic simple root; node labels are kept.

    The images are the standard roots of the target diagram for the same
    pairing, so the tracked parameter is s3 / s2 of ``s``.
    """
    alpha = system.roots[node - 1]
    if alpha.parity != ODD or pairing(s, alpha, alpha):
        raise RootSystemError(f"node {node} of {system.label} is not odd isotropic")
    images = []
    for j, beta in enumerate(system.roots, start=1):
        if j == node:
            images.append(-alpha)
        elif pairing(s, alpha, beta):
            images.append(beta + alpha)
        else:
            images.append(beta)
    label = _identify(tuple(images))
    return SimpleSystem(label, tuple(images), s[2] / s[1])  # type: ignore[arg-type]


def even_reflection(root: Root, i: int) -> Root:
    """Weyl reflection in 2 eps_i: flips the sign of coordinate i."""
    coords = list(root.coords)
    coords[i - 1] = -coords[i - 1]
    return Root(tuple(coords), root.parity)  # type: ignore[arg-type]


def _identify(roots: tuple[Root, ...]) -> str:
    for label, coords in SIMPLE_ROOTS.items():
        if tuple(r.coords for r in roots) == coords:
            return label
    raise RootSystemError("reflected system is not one of the four standard systems")


def cartan_matrix(system: SimpleSystem, s: Sequence[Scalar], field: ScalarField) -> list[list[Scalar]]:
    """A_ij = <alpha_i, alpha_j>, rows rescaled to the standard normalization."""
    matrix = []
    for i, alpha in enumerate(system.roots, start=1):
        row = [field.convert(pairing(s, alpha, beta)) for beta in system.roots]
        diag = row[i - 1]
        if diag:
            scale = field.div(field.convert(2), diag)
        else:
            scale = field.convert(ISOTROPIC_ROW_SCALE.get((system.label, i), Fraction(1, 2)))
        matrix.append([v * scale for v in row])
    return matrix


def render_diagram(system: SimpleSystem, matrix: Sequence[Sequence[Scalar]], field: ScalarField, crosses: Iterable[int] = ()) -> str:
    """Text rendering: nodes (o even, (x) isotropic, crossed with *) and labelled edges."""
    crossed = set(crosses)
    nodes = []
    for j, root in enumerate(system.roots, start=1):
        mark = "(x)" if root.parity == ODD else "o"
        nodes.append(f"{j}:{mark}{'*' if j in crossed else ''}")
    edges = []
    for i, j in itertools.combinations(range(3), 2):
        if matrix[i][j] or matrix[j][i]:
            edges.append(f"{i + 1}-{j + 1}[{field.format(matrix[i][j])},{field.format(matrix[j][i])}]")
    return f"DD-{system.label}: " + " ".join(nodes) + ("  " + " ".join(edges) if edges else "")


@dataclass(frozen=True)
class ParabolicSpec:
    """Diagram label and crossed nodes."""

    diagram: str
    crosses: frozenset[int]

    def __post_init__(self) -> None:
        if self.diagram not in DIAGRAMS:
            raise GradingError(f"unknown diagram {self.diagram}")
        if not self.crosses or not set(self.crosses) <= set(NODES):
            raise GradingError(f"invalid cross set {sorted(self.crosses)}")

    @classmethod
    def of(cls, diagram: str, *crosses: int) -> ParabolicSpec:
        return cls(diagram, frozenset(crosses))

    @classmethod
    def parse(cls, label: str) -> ParabolicSpec:
        """Parse labels like ``p23I`` or ``p123IV``."""
        if not label.startswith("p"):
            raise GradingError(f"cannot parse {label}")
        digits = "".join(ch for ch in label[1:] if ch.isdigit())
        diagram = label[1 + len(digits):]
        return cls(diagram, frozenset(int(d) for d in digits))

    @property
    def label(self) -> str:
        return f"p{''.join(str(c) for c in sorted(self.crosses))}{self.diagram}"

    def __str__(self) -> str:
        return self.label


def all_specs() -> list[ParabolicSpec]:
    specs = []
    for diagram in DIAGRAMS:
        for size in (1, 2, 3):
            for crosses in itertools.combinations(NODES, size):
                specs.append(ParabolicSpec(diagram, frozenset(crosses)))
    return specs


def grading_degrees(alg: BasisSuperalgebra, spec: ParabolicSpec) -> list[int]:
    system = SimpleSystem.standard(spec.diagram)
    degrees = [0] * alg.dim
    for root, k in root_decomposition(alg):
        coeffs = system.coefficients(root)
        z = sum((coeffs[j - 1] for j in spec.crosses), Fraction(0))
        if z.denominator != 1:
            raise GradingError(f"non-integral degree for {alg.basis[k].name}")
        degrees[k] = int(z)
    return degrees


def graded_algebra(
    alg: BasisSuperalgebra, spec: ParabolicSpec, opposite: bool = False
) -> BasisSuperalgebra:
    """Gamma with the grading of the parabolic attached.

    With ``opposite`` the degrees are negated, so the negative part is the
    span of the positive root vectors.
    """
    degrees = grading_degrees(alg, spec)
    if opposite:
        degrees = [-d for d in degrees]
    return alg.with_degrees(degrees, name=spec.label)


@dataclass
class GradingReport:
    """Graded decomposition and the degree-zero descriptor."""

    spec: ParabolicSpec
    depth: int
    levels: list[tuple[int, tuple[int, int], list[str]]]
    g0_sdim: tuple[int, int]
    g0_center: int
    g0_derived: tuple[int, int]
    extra: dict[str, Any] = dc_field(default_factory=dict)

    def level_sdims(self) -> list[tuple[int, int]]:
        """sdim of g_0, g_-1, ..., g_-depth."""
        table = {k: sdim for k, sdim, _ in self.levels}
        return [table[-k] for k in range(self.depth + 1)]

    @property
    def signature(self) -> tuple[Any, ...]:
        return (self.depth, tuple(self.level_sdims()), (self.g0_sdim, self.g0_center, self.g0_derived))

    @property
    def parity_consistent(self) -> bool:
        return all(sdim[(k + 1) % 2] == 0 for k, sdim, _ in self.levels)

    def as_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.label,
            "depth": self.depth,
            "levels": [{"k": k, "sdim": list(sdim), "basis": names} for k, sdim, names in self.levels],
            "g0": {"sdim": list(self.g0_sdim), "center": self.g0_center, "derived": list(self.g0_derived)},
        }


def grading(alg: BasisSuperalgebra, spec: ParabolicSpec) -> GradingReport:
    graded = graded_algebra(alg, spec)
    depth = graded.depth
    levels = []
    for k in range(-depth, depth + 1):
        indices = graded.indices_of_degree(k)
        levels.append((k, graded.level_sdim(k), [graded.basis[i].name for i in indices]))
        if graded.level_sdim(k) != graded.level_sdim(-k):
            raise GradingError(f"{spec}: g_{k} and g_{-k} differ")
    g0 = graded.indices_of_degree(0)
    report = GradingReport(
        spec=spec,
        depth=depth,
        levels=levels,
        g0_sdim=graded.level_sdim(0),
        g0_center=center(graded, g0).dim,
        g0_derived=derived(graded, g0).sdim,
    )
    _LOGGER.debug("%s: depth %d, levels %s", spec, depth, report.level_sdims())
    return report


@dataclass
class Classification:
    """Partition of the 28 parabolics with both certificates."""

    classes: list[list[ParabolicSpec]]
    signatures: dict[ParabolicSpec, tuple[Any, ...]]
    edges: list[tuple[str, str, str]]

    def class_of(self, spec: ParabolicSpec) -> list[ParabolicSpec]:
        for members in self.classes:
            if spec in members:
                return members
        raise ClassificationError(f"{spec} was not classified")


class _UnionFind:
    def __init__(self, items: Iterable[Any]) -> None:
        self.parent = {item: item for item in items}

    def find(self, item: Any) -> Any:
        while self.parent[item] != item:
            self.parent[item] = self.parent[self.parent[item]]
            item = self.parent[item]
        return item

    def union(self, a: Any, b: Any) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self) -> list[list[Any]]:
        out: dict[Any, list[Any]] = {}
        for item in self.parent:
            out.setdefault(self.find(item), []).append(item)
        return list(out.values())


def diagram_symmetries(field: ScalarField, s: Sequence[Scalar]) -> list[tuple[str, str, dict[int, int], str]]:
    """Signed permutations of eps-coordinates mapping one simple system to another.

    A signed permutation is a permutation of the coordinates followed by even
    Weyl reflections. Returns (source, target, node map, new parameter
    a' = s'_3 / s'_2).
    """
    found = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            permuted_s = [None] * 3
            for i in range(3):
                permuted_s[perm[i]] = s[i]
            new_a = field.format(field.div(field.convert(permuted_s[2]), field.convert(permuted_s[1])))
            flips = [i + 1 for i in range(3) if signs[i] < 0]
            for source in DIAGRAMS:
                images = []
                for root in SimpleSystem.standard(source).roots:
                    moved = [0, 0, 0]
                    for i in range(3):
                        moved[perm[i]] = root.coords[i]
                    image = Root(tuple(moved), root.parity)  # type: ignore[arg-type]
                    for i in flips:
                        image = even_reflection(image, i)
                    images.append(image.coords)
                for target in DIAGRAMS:
                    targets = SIMPLE_ROOTS[target]
                    if set(images) != set(targets):
                        continue
                    nodes = {j + 1: targets.index(img) + 1 for j, img in enumerate(images)}
                    found.append((source, target, nodes, new_a))
    return found


def classify_parabolics(alg: BasisSuperalgebra, s: Sequence[Scalar]) -> Classification:
    """Partition by signature and by reflection/symmetry orbits; both must agree."""
    specs = all_specs()
    reports = {spec: grading(alg, spec) for spec in specs}
    by_signature: dict[tuple[Any, ...], list[ParabolicSpec]] = {}
    for spec in specs:
        by_signature.setdefault(reports[spec].signature, []).append(spec)

    orbits = _UnionFind(specs)
    edges: list[tuple[str, str, str]] = []
    for spec in specs:
        system = SimpleSystem.standard(spec.diagram)
        for node in NODES:
            if node in spec.crosses or system.roots[node - 1].parity != ODD:
                continue
            target = ParabolicSpec(odd_reflection(system, node, s).label, spec.crosses)
            orbits.union(spec, target)
            edges.append((spec.label, target.label, f"odd reflection at node {node}"))
    for source, target, nodes, new_a in diagram_symmetries(alg.field, s):
        for spec in specs:
            if spec.diagram != source:
                continue
            image = ParabolicSpec(target, frozenset(nodes[c] for c in spec.crosses))
            orbits.union(spec, image)
            if image != spec:
                edges.append((spec.label, image.label, f"diagram symmetry, a -> {new_a}"))

    signature_classes = sorted((sorted(m, key=_spec_key) for m in by_signature.values()), key=lambda m: _spec_key(m[0]))
    orbit_classes = sorted((sorted(m, key=_spec_key) for m in orbits.groups()), key=lambda m: _spec_key(m[0]))
    if signature_classes != orbit_classes:
        witness = next(
            (m for m in orbit_classes if m not in signature_classes),
            None,
        )
        raise ClassificationError("signature and orbit partitions differ", witness)
    _LOGGER.info("Classified %d parabolics into %d classes", len(specs), len(orbit_classes))
    return Classification(
        classes=orbit_classes,
        signatures={spec: reports[spec].signature for spec in specs},
        edges=edges,
    )


def _spec_key(spec: ParabolicSpec) -> tuple[int, int, tuple[int, ...]]:
    return (len(spec.crosses), DIAGRAMS.index(spec.diagram), tuple(sorted(spec.crosses)))
