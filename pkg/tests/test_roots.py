"""Tests for roots, Dynkin diagrams, parabolic gradings and their classification."""

import pytest

from superprolong.exceptions import GradingError, RootSystemError
from superprolong.liesuper import EVEN, ODD, invariant_form
from superprolong.roots import (
    ParabolicSpec,
    Root,
    SimpleSystem,
    all_specs,
    cartan_matrix,
    diagram_symmetries,
    even_reflection,
    grading,
    graded_algebra,
    odd_reflection,
    pairing_from_form,
    render_diagram,
    root_decomposition,
)
from superprolong.scalars import s_parameters

CARTAN = {
    "I": (("0", "1", "a"), ("-1", "2", "0"), ("-1", "0", "2")),
    "II": (("2", "-1", "0"), ("-1", "0", "1+a"), ("0", "-1", "2")),
    "III": (("2", "0", "-1"), ("0", "2", "-1"), ("-a", "1+a", "0")),
    "IV": (("0", "1", "a"), ("1", "0", "-1-a"), ("a", "-1-a", "0")),
}


@pytest.mark.unit
def test_root_decomposition(gamma):
    """Every non-Cartan basis vector is a root vector: 6 even and 8 odd roots."""
    roots = root_decomposition(gamma)
    assert len(roots) == 14
    assert sum(1 for root, _ in roots if root.parity == EVEN) == 6
    for root, k in roots:
        assert gamma.parity(k) == root.parity
    assert len({root for root, _ in roots}) == 14


@pytest.mark.unit
def test_root_validation():
    with pytest.raises(RootSystemError):
        Root((0, 0, 0), EVEN)
    with pytest.raises(RootSystemError):
        Root((1, 1, 0), EVEN)
    with pytest.raises(RootSystemError):
        Root((2, 0, 0), ODD)
    assert str(Root((1, -1, -1), ODD)) == "e1-e2-e3"


@pytest.mark.unit
def test_pairing_from_invariant_form(gamma, field):
    """The dual of B on the Cartan subalgebra is diag(s1, s2, s3)."""
    assert pairing_from_form(invariant_form(gamma)) == s_parameters(field)


@pytest.mark.gold_standard
@pytest.mark.parametrize("label", sorted(CARTAN))
def test_cartan_matrices(field, label):
    expected = [[field.parse(entry) for entry in row] for row in CARTAN[label]]
    system = SimpleSystem.standard(label)
    assert cartan_matrix(system, s_parameters(field), field) == expected


@pytest.mark.unit
@pytest.mark.parametrize("label", ["I", "II", "III", "IV"])
def test_positive_roots(label):
    system = SimpleSystem.standard(label)
    positive = system.positive_roots()
    assert len(positive) == 7
    assert all(system.is_positive(root) for root in system.roots)


@pytest.mark.gold_standard
@pytest.mark.parametrize(
    ("source", "node", "target"),
    [("I", 1, "IV"), ("II", 2, "IV"), ("III", 3, "IV"), ("IV", 1, "I"), ("IV", 2, "II"), ("IV", 3, "III")],
)
def test_odd_reflections(field, source, node, target):
    image = odd_reflection(SimpleSystem.standard(source), node, s_parameters(field))
    assert image.label == target
    assert image.roots == SimpleSystem.standard(target).roots
    assert image.parameter == field.parameter("a")
    tracked = s_parameters(field, image.parameter)
    assert cartan_matrix(image, s_parameters(field), field) == cartan_matrix(
        SimpleSystem.standard(target), tracked, field
    )


@pytest.mark.unit
def test_odd_reflection_needs_isotropic_node(field):
    with pytest.raises(RootSystemError):
        odd_reflection(SimpleSystem.standard("I"), 2, s_parameters(field))


@pytest.mark.unit
def test_even_reflection():
    assert even_reflection(Root((1, -1, -1), ODD), 2) == Root((1, 1, -1), ODD)


@pytest.mark.unit
def test_diagram_symmetries_contain_identity(field):
    found = diagram_symmetries(field, s_parameters(field))
    for label in ("I", "II", "III", "IV"):
        assert (label, label, {1: 1, 2: 2, 3: 3}, "a") in found


@pytest.mark.unit
def test_diagram_symmetries_change_parameter(field):
    """Swapping eps2 and eps3 maps DD-I to itself with a -> 1/a."""
    found = diagram_symmetries(field, s_parameters(field))
    assert ("I", "I", {1: 1, 2: 3, 3: 2}, "1/a") in found
    for *_, new_a in found:
        assert new_a in {"a", "1/a", "-a - 1", "(-a - 1)/a", "-a/(a + 1)", "-1/(a + 1)"}


@pytest.mark.unit
def test_render_diagram(field):
    system = SimpleSystem.standard("I")
    text = render_diagram(system, cartan_matrix(system, s_parameters(field), field), field, crosses=(1,))
    assert text.startswith("DD-I: 1:(x)* 2:o 3:o")
    assert "1-2[1,-1]" in text
    assert "2-3" not in text


class TestParabolicSpec:
    """Labels of parabolic subalgebras."""

    def test_parse_and_label(self):
        spec = ParabolicSpec.parse("p123IV")
        assert spec.diagram == "IV"
        assert spec.crosses == frozenset({1, 2, 3})
        assert spec.label == "p123IV"
        assert ParabolicSpec.of("I", 3, 2) == ParabolicSpec.parse("p23I")

    @pytest.mark.parametrize("label", ["q1I", "p1V", "pI", "p4I"])
    def test_invalid(self, label):
        with pytest.raises(GradingError):
            ParabolicSpec.parse(label)

    def test_all_specs(self):
        specs = all_specs()
        assert len(specs) == 28
        assert len(set(specs)) == 28


@pytest.mark.unit
@pytest.mark.parametrize(
    ("label", "levels", "g0_center"),
    [
        ("p1I", [(7, 0), (0, 4), (1, 0)], 1),
        ("p2I", [(5, 4), (2, 2)], 1),
        ("p12I", [(5, 0), (1, 2), (0, 2), (1, 0)], 2),
        ("p23I", [(3, 2), (2, 2), (1, 1)], 2),
        ("p123I", [(3, 0), (2, 1), (0, 2), (0, 1), (1, 0)], 3),
        ("p123IV", [(3, 0), (0, 3), (3, 0), (0, 1)], 3),
    ],
)
def test_grading(gamma, label, levels, g0_center):
    report = grading(gamma, ParabolicSpec.parse(label))
    assert report.level_sdims() == levels
    assert report.depth == len(levels) - 1
    assert report.g0_center == g0_center
    assert report.as_dict()["spec"] == label


@pytest.mark.unit
def test_parity_consistency(gamma):
    """p1I is parity-consistent, p2I is not."""
    assert grading(gamma, ParabolicSpec.parse("p1I")).parity_consistent
    assert not grading(gamma, ParabolicSpec.parse("p2I")).parity_consistent


@pytest.mark.unit
def test_opposite_grading(gamma):
    spec = ParabolicSpec.parse("p23I")
    graded = graded_algebra(gamma, spec)
    opposite = graded_algebra(gamma, spec, opposite=True)
    assert all(opposite.degree(i) == -graded.degree(i) for i in range(graded.dim))
    assert graded.degree(graded.index("X2")) == 1
    assert opposite.degree(opposite.index("X2")) == -1


@pytest.mark.gold_standard
@pytest.mark.slow
def test_classification(workbench):
    """Six classes, agreeing with odd reflections and diagram symmetries."""
    classification = workbench.classification()
    found = sorted(sorted(spec.label for spec in members) for members in classification.classes)
    assert found == sorted(
        [
            sorted(["p1I", "p2II", "p3III"]),
            sorted(["p2I", "p3I", "p1II", "p3II", "p1III", "p2III", "p1IV", "p2IV", "p3IV"]),
            sorted(["p12I", "p13I", "p12II", "p23II", "p13III", "p23III"]),
            sorted(["p23I", "p13II", "p12III", "p12IV", "p13IV", "p23IV"]),
            sorted(["p123I", "p123II", "p123III"]),
            ["p123IV"],
        ]
    )
    assert classification.class_of(ParabolicSpec.parse("p13I")) == classification.class_of(
        ParabolicSpec.parse("p12I")
    )
    assert any("odd reflection" in reason for _, _, reason in classification.edges)
