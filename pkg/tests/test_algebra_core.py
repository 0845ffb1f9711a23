# test_algebra_core.py

from fractions import Fraction

import pytest

from src.algebra_core import (
    AlgebraError, BilinearForm, DimensionMismatch, FormNotInvariant, IndexOutOfRange, JacobiViolation,
    LinearEndo, NotSkewDerivation, NotSymplectic, Subspace, build_lie_algebra, center, commutator,
    derivation_space, derived_subalgebra, format_scalar, inner_derivations, is_derivation, is_ideal,
    is_invariant_form, is_nilpotent, is_skew, is_solvable, lower_central_series, matches_structure,
    nilpotency_step, parse_scalar, quotient_by_basis, require_quadratic, skew_derivation_space,
    skew_derivation_to_two_form, subalgebra_on_basis, symplectic_ad_derivation, symplectic_check,
    two_form_to_skew_derivation,
)
from src.families import make_f, make_g2n2, make_heisenberg, make_jordan


@pytest.fixture
def g6():
    return make_g2n2(2)


@pytest.mark.parametrize("raw, expected", [
    (3, Fraction(3)),
    ("1/2", Fraction(1, 2)),
    ("-4/6", Fraction(-2, 3)),
    (Fraction(5, 7), Fraction(5, 7)),
])
def test_parse_scalar(raw, expected):
    assert parse_scalar(raw) == expected


@pytest.mark.parametrize("raw", [0.5, True, "abc", "1/0"])
def test_parse_scalar_rejects(raw):
    with pytest.raises(AlgebraError):
        parse_scalar(raw)


def test_format_scalar():
    assert format_scalar(Fraction(3)) == "3"
    assert format_scalar(Fraction(-2, 6)) == "-1/3"


def test_subspace_span_is_canonical():
    a = Subspace.span([(1, 1, 0), (0, 1, 1)], 3)
    b = Subspace.span([(1, 2, 1), (1, 0, -1), (0, 3, 3)], 3)
    assert a == b
    assert a.dim == 2
    assert a.contains((2, 3, 1))
    assert not a.contains((1, 0, 0))
    assert a.coordinates((2, 3, 1)) == (Fraction(2), Fraction(3))
    with pytest.raises(DimensionMismatch):
        Subspace.span([(1, 0)], 3)


def test_build_rejects_jacobi_violation():
    # g_4 with the sign of [Y0, Y1] flipped
    brackets = {(2, 1): {1: 1}, (2, 3): {3: 1}, (1, 3): {0: 1}}
    with pytest.raises(JacobiViolation) as e:
        build_lie_algebra(4, ['X0', 'X1', 'Y0', 'Y1'], brackets)
    assert e.value.triple == (1, 2, 3)
    assert e.value.residual == (2, 0, 0, 0)


def test_build_normalizes_reversed_pairs():
    g = build_lie_algebra(3, ['x', 'y', 'z'], {(1, 0): {2: 1}})
    assert g.structure_vector(0, 1) == {2: Fraction(-1)}
    assert g.structure_vector(1, 0) == {2: Fraction(1)}
    assert g.labelled_brackets() == {('x', 'y'): {'z': Fraction(-1)}}


@pytest.mark.parametrize("dim, labels, brackets, error", [
    (2, ['a'], {}, DimensionMismatch),
    (2, ['a', 'a'], {}, AlgebraError),
    (2, None, {(0, 2): {0: 1}}, IndexOutOfRange),
    (2, None, {(0, 0): {1: 1}}, AlgebraError),
    (2, None, {(0, 1): {0: 0.5}}, AlgebraError),
])
def test_build_rejects_bad_input(dim, labels, brackets, error):
    with pytest.raises(error):
        build_lie_algebra(dim, labels, brackets)


def test_bracket_and_ad(g6):
    g, _ = g6
    y0, x1 = g.basis_vector(g.index('Y0')), g.basis_vector(g.index('X1'))
    assert g.bracket(y0, x1) == g.basis_vector(g.index('X1'))
    ad = g.ad_matrix(y0)
    assert ad.apply(x1) == x1
    assert ad.apply(g.basis_vector(g.index('Y2'))) == tuple(-c for c in g.basis_vector(g.index('Y2')))


def test_vector_by_labels(g6):
    g, _ = g6
    v = g.vector(X0=1, Y2="1/2")
    assert v[g.index('X0')] == 1 and v[g.index('Y2')] == Fraction(1, 2)
    with pytest.raises(IndexOutOfRange):
        g.vector(Z=1)


def test_structure_of_g2n2(g6):
    g, _ = g6
    assert center(g).dim == 1
    assert center(g).contains(g.basis_vector(g.index('X0')))
    assert derived_subalgebra(g).dim == 5
    assert is_solvable(g)
    assert not is_nilpotent(g)
    assert nilpotency_step(g) is None


def test_heisenberg_is_two_step_nilpotent():
    h = make_heisenberg(2)
    assert lower_central_series(h) == [5, 1, 0]
    assert nilpotency_step(h) == 2


def test_ideal_subalgebra_and_quotient():
    g, _ = make_g2n2(1)
    assert is_ideal(g, [0, 1, 3])
    assert not is_ideal(g, [1])
    h = subalgebra_on_basis(g, [0, 1, 3])
    assert matches_structure(h, make_heisenberg(1), {'X0': 'x0', 'X1': 'x1', 'Y1': 'y1'})
    f = quotient_by_basis(g, [0])
    assert matches_structure(f, make_f(1), {'X1': 'x1', 'Y0': 'y', 'Y1': 'y1'})
    assert not matches_structure(f, make_f(1), {'X1': 'y1', 'Y0': 'y', 'Y1': 'x1'})
    with pytest.raises(AlgebraError):
        quotient_by_basis(g, [1])


def test_bilinear_form_validation():
    with pytest.raises(AlgebraError):
        BilinearForm(((1, 2), (3, 1)), symmetric=True)
    with pytest.raises(AlgebraError):
        BilinearForm(((0, 1), (1, 0)), symmetric=False)
    B = BilinearForm.from_pairs(2, {(0, 1): 1})
    assert B.determinant == -1
    assert B.inverse == ((0, 1), (1, 0))
    assert B.value((1, 0), (0, 1)) == 1


def test_invariance(g6):
    g, B = g6
    assert is_invariant_form(g, B)
    assert not is_invariant_form(g, BilinearForm.identity(g.dim))
    with pytest.raises(FormNotInvariant):
        require_quadratic(g, BilinearForm.identity(g.dim))


def test_linear_endo_algebra():
    A = LinearEndo.from_rows([[0, 1], [0, 0]])
    B = LinearEndo.from_rows([[0, 0], [1, 0]])
    assert commutator(A, B) == LinearEndo.from_rows([[1, 0], [0, -1]])
    assert LinearEndo.from_flat(A.flatten(), 2) == A
    assert A.compose(A).is_zero()
    with pytest.raises(DimensionMismatch):
        A.compose(LinearEndo.zero(3))


def test_derivation_spaces(g6):
    g, B = g6
    inner = inner_derivations(g)
    skew = skew_derivation_space(g, B)
    assert inner.dim == 5
    # H^2(g_6) = Der_a / ad has dimension 3
    assert skew.dim == 8
    assert derivation_space(g).contains_subspace(skew)
    for flat in skew.basis:
        D = LinearEndo.from_flat(flat, g.dim)
        assert is_derivation(g, D) and is_skew(B, D)


def test_two_form_correspondence(g6):
    g, B = g6
    D = g.ad_matrix(g.basis_vector(g.index('Y0')))
    omega = skew_derivation_to_two_form(g, B, D)
    assert omega.coefficient([g.index('X1'), g.index('Y1')]) == 1
    assert omega.coefficient([g.index('X2'), g.index('Y2')]) == 1
    assert len(omega.terms) == 2
    assert two_form_to_skew_derivation(g, B, omega) == D
    with pytest.raises(NotSkewDerivation):
        skew_derivation_to_two_form(g, B, LinearEndo.from_flat([1] + [0] * 35, 6))


def test_symplectic_derivation_on_j4():
    g, B, omega = make_jordan(2)
    assert symplectic_check(g, B, omega)
    record = symplectic_ad_derivation(g, B, omega)
    assert record.labels == ('ad(X2)', 'ad(Y0)', 'ad(Y1)')
    assert record.diagonal() == (2, -1, -1)
    assert record.determinant == 2
    assert record.eigenvalue_of('Y0') == -1
    assert record.commutator_agreement == '[D, ad X]'


def test_symplectic_check_rejects_symmetric_flag():
    g, B, _ = make_jordan(2)
    with pytest.raises(NotSymplectic):
        symplectic_check(g, B, B)
