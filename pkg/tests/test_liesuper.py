"""Tests for Gamma(s1, s2, s3), its forms and subspace helpers."""

import pytest

from superprolong.exceptions import AlgebraError, GradingError
from superprolong.liesuper import (
    EVEN,
    ODD,
    BasisElement,
    BasisSuperalgebra,
    build_gamma,
    cauchy_characteristics,
    center,
    check_jacobi,
    closure,
    derived,
    identify_parameter,
    invariant_form,
    invariant_form_space,
    is_fundamental,
    j_invariant,
    killing_form,
    s_of,
    sl2,
)
from superprolong.scalars import s_parameters


@pytest.mark.gold_standard
def test_gamma_dimension_and_jacobi(gamma):
    """Gamma(-1-a, 1, a) is a (9|8)-dimensional Lie superalgebra."""
    assert gamma.sdim == (9, 8)
    assert check_jacobi(gamma) == []


@pytest.mark.unit
def test_jacobi_at_rational_points(rational_field):
    assert check_jacobi(build_gamma(rational_field)) == []


@pytest.mark.unit
def test_jacobi_fails_off_the_plane(field):
    """s1 + s2 + s3 = 0 is needed for the Jacobi identity."""
    one = field.one
    assert check_jacobi(build_gamma(field, one, one, one))


@pytest.mark.unit
def test_odd_bracket_recovers_parameters(gamma, field):
    """[xxx, yyy] = -(s1 H1 + s2 H2 + s3 H3)/2."""
    s = s_parameters(field)
    assert [s_of(gamma, i) for i in (1, 2, 3)] == list(s)


@pytest.mark.gold_standard
def test_killing_form_vanishes(gamma):
    assert killing_form(gamma).is_zero


@pytest.mark.gold_standard
def test_invariant_form(gamma, field):
    """B is unique up to scale with B(H_i, H_j) = delta_ij / s_i."""
    forms, _ = invariant_form_space(gamma)
    assert len(forms) == 1
    form = invariant_form(gamma)
    s = s_parameters(field)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            expected = field.div(field.one, s[i - 1]) if i == j else field.zero
            assert form.by_name(f"H{i}", f"H{j}") == expected
    assert form.by_name("X1", "H2") == field.zero
    assert form.by_name("X1", "xxx") == field.zero
    assert form.is_consistent()
    assert form.is_supersymmetric()
    assert form.invariance_defects() == []


@pytest.mark.unit
def test_j_invariant_symmetries(generic):
    s1, s2 = generic.parameter("s1"), generic.parameter("s2")
    s3 = -s1 - s2
    j = j_invariant(generic, s1, s2, s3)
    assert j == j_invariant(generic, s2, s1, s3)
    assert j == j_invariant(generic, s3, s2, s1)
    two = generic.convert(2)
    assert j == j_invariant(generic, two * s1, two * s2, two * s3)


@pytest.mark.unit
def test_identify_parameter(gamma, field):
    """The j-invariant can be read off the forms alone."""
    assert identify_parameter(gamma) == j_invariant(field, *s_parameters(field))


@pytest.mark.unit
def test_json_round_trip(gamma, field):
    restored = BasisSuperalgebra.from_json(field, gamma.to_json(), name="copy")
    assert restored.names == gamma.names
    assert restored.table == gamma.table


@pytest.mark.unit
def test_from_json_rejects_other_parameters(gamma, generic):
    with pytest.raises(AlgebraError):
        BasisSuperalgebra.from_json(generic, gamma.to_json())


@pytest.mark.unit
def test_wrong_parity_bracket(field):
    basis = [BasisElement("e", EVEN), BasisElement("o", ODD)]
    with pytest.raises(AlgebraError):
        BasisSuperalgebra(field, basis, {(0, 0): {1: 1}})


@pytest.mark.unit
def test_sl2(field):
    alg = sl2(field)
    assert check_jacobi(alg) == []
    assert alg.bracket(alg.element("X"), alg.element("Y")) == alg.element("H")


@pytest.mark.unit
def test_closure_of_root_vectors(gamma):
    """X1 and Y1 generate the first sl(2)."""
    span = closure(gamma, [gamma.element("X1"), gamma.element("Y1")])
    assert span.sdim == (3, 0)
    assert span.contains(gamma.element("H1"))


@pytest.mark.unit
def test_g0_of_p1(graded):
    """g_0 of p1I is co(4): one-dimensional center, derived part so(4)."""
    alg = graded("p1I")
    g0 = alg.indices_of_degree(0)
    assert alg.level_sdim(0) == (7, 0)
    assert center(alg, g0).dim == 1
    assert derived(alg, g0).sdim == (6, 0)
    assert is_fundamental(alg)


@pytest.mark.gold_standard
@pytest.mark.parametrize(
    ("label", "level", "sdim", "names"),
    [
        ("p12I", 2, (1, 0), ("Y2",)),
        ("p123I", 3, (2, 0), ("Y2", "Y3")),
        ("p123I", 2, (0, 1), ("yxx",)),
    ],
)
def test_cauchy_characteristics(graded, label, level, sdim, names):
    alg = graded(label)
    space = cauchy_characteristics(alg, level)
    assert space.sdim == sdim
    for name in names:
        assert space.contains(alg.element(name))


@pytest.mark.unit
def test_cauchy_characteristics_level_too_deep(graded):
    with pytest.raises(GradingError):
        cauchy_characteristics(graded("p2I"), 2)
