# test_families.py

import pytest

from src.algebra_core import (
    BadParameter, center, inner_derivations, is_invariant_form, is_nilpotent, is_solvable, nilpotency_step,
    symplectic_check,
)
from src.families import (
    FAMILY_IDS, FamilySpec, jordan_operator, make_abelian, make_f, make_g2n2, make_g4n2, make_heisenberg,
    make_jordan, omega_n,
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_g2n2(n):
    g, B = make_g2n2(n)
    assert g.dim == 2 * n + 2
    assert g.name == f"g{2 * n + 2}"
    assert g.labels[:2] == ('X0', 'X1') and g.labels[n + 1] == 'Y0'
    assert is_invariant_form(g, B)
    assert is_solvable(g) and not is_nilpotent(g)
    assert center(g).dim == 1


@pytest.mark.parametrize("p", [2, 3, 4])
def test_jordan(p):
    g, B, omega = make_jordan(p)
    assert g.dim == 2 * p + 2
    assert g.name == f"j{2 * p}"
    assert is_invariant_form(g, B)
    assert symplectic_check(g, B, omega)
    # X0, X1 and Yp are central
    assert center(g).dim == 3
    assert inner_derivations(g).dim == 2 * p - 1


def test_jordan_operator():
    assert jordan_operator(2) == {1: {0: 1}, 2: {3: -1}}
    assert jordan_operator(3) == {1: {0: 1}, 2: {1: 1}, 3: {4: -1}, 4: {5: -1}}


def test_jordan_brackets():
    g, _, _ = make_jordan(2)
    y0, x2, x1 = (g.basis_vector(g.index(label)) for label in ('Y0', 'X2', 'X1'))
    assert g.bracket(y0, x2) == x1
    assert g.bracket(x2, g.basis_vector(g.index('Y1'))) == g.basis_vector(g.index('X0'))


@pytest.mark.parametrize("n", [1, 2])
def test_heisenberg_and_f(n):
    h = make_heisenberg(n)
    assert (h.dim, h.name) == (2 * n + 1, f"h{2 * n + 1}")
    assert nilpotency_step(h) == 2
    f = make_f(n)
    assert (f.dim, f.name) == (2 * n + 1, f"f{2 * n + 1}")
    assert is_solvable(f) and not is_nilpotent(f)


@pytest.mark.parametrize("n", [1, 2])
def test_g4n2(n):
    g, B = make_g4n2(n)
    assert g.dim == 4 * n + 2
    assert g.name == f"g{4 * n + 2}"
    assert is_invariant_form(g, B)
    assert nilpotency_step(g) == 2
    assert center(g).dim == 2 * n + 1


def test_abelian():
    g = make_abelian(4)
    assert g.dim == 4 and not g.brackets
    assert make_abelian(0).dim == 0


@pytest.mark.parametrize("family, parameter", [
    ('g2n2', 0), ('jordan', 1), ('heisenberg', 0), ('f', -1), ('g4n2', 0), ('abelian', -1), ('g2n2', True),
])
def test_bad_parameters(family, parameter):
    with pytest.raises(BadParameter):
        FamilySpec(family, parameter)


def test_family_spec_dispatch():
    assert set(FAMILY_IDS) == {'g2n2', 'jordan', 'heisenberg', 'f', 'g4n2', 'abelian'}
    with pytest.raises(BadParameter):
        FamilySpec('sl2', 1)
    instance = FamilySpec('jordan', 2).build()
    assert instance.algebra.name == 'j4' and instance.omega is not None
    abelian = FamilySpec('abelian', 3).build()
    assert abelian.form.gram == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert FamilySpec('f', 2).build().form is None


def test_omega_n_signs():
    omega = omega_n(4, [2], [0])
    assert omega.terms == {0b101: -1}
