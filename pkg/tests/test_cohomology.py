# test_cohomology.py

from fractions import Fraction

import pytest

from src.algebra_core import AlgebraError, BadParameter, BilinearForm, DimensionMismatch
from src.cohomology import (
    LinalgOptions, SparseMatrix, betti_numbers, build_complex, degree2_spaces, differential_agreement,
    image_subspace, kernel_basis, quadratic_differential, rank_exact, rank_mod_p,
    standard_ce_differential,
)
from src.exterior import DualBasisFrame, ExteriorForm, interior, three_form, wedge
from src.families import make_abelian, make_f, make_g2n2, make_g4n2, make_heisenberg, make_jordan

EXACT_ONLY = LinalgOptions(modular_screen=False)


@pytest.mark.parametrize("dense, rank", [
    ([[1, 2], [2, 4]], 1),
    ([[1, 0, 1], [0, 1, 1], [1, 1, 2]], 2),
    ([["1/2", 0], [0, "1/3"]], 2),
    ([[0, 0], [0, 0]], 0),
    ([[2, 4, 6], [3, 6, 9]], 1),
])
def test_rank_exact(dense, rank):
    M = SparseMatrix.from_dense([[Fraction(x) for x in row] for row in dense])
    assert rank_exact(M) == rank
    assert rank_exact(M, EXACT_ONLY) == rank


def test_rank_mod_p_screen():
    M = SparseMatrix.from_dense([[1, 2], [3, 4]])
    assert rank_mod_p(M) == 2
    assert rank_mod_p(SparseMatrix.from_dense([[Fraction(1, 7)]]), prime=7) is None


@pytest.mark.parametrize("prime", [1 << 31, 4294967291, 1000000, 1, -7, 0])
def test_modular_prime_must_be_a_word_size_prime(prime):
    with pytest.raises(BadParameter):
        LinalgOptions(prime=prime)
    with pytest.raises(BadParameter):
        rank_mod_p(SparseMatrix.from_dense([[1]]), prime=prime)


def test_largest_admissible_prime():
    assert LinalgOptions(prime=2147483647).prime == 2147483647
    assert rank_mod_p(SparseMatrix.from_dense([[2147483646, 1], [1, 2147483646]])) == 1


def test_sparse_matrix_products():
    A = SparseMatrix.from_dense([[1, 2], [0, 1]])
    B = SparseMatrix.from_dense([[1, -2], [0, 1]])
    assert (A @ B).columns == ({0: 1}, {1: 1})
    assert A.negate().columns[1] == {0: -2, 1: -1}
    assert A.select_columns([1]).to_rows() == [{0: 2}, {0: 1}]
    with pytest.raises(DimensionMismatch):
        A.matmul(SparseMatrix.zero(3, 1))


def test_kernel_and_image():
    M = SparseMatrix.from_dense([[1, 1, 0], [0, 0, 1]])
    kernel = kernel_basis(M)
    assert kernel.dim == 1
    assert kernel.contains((1, -1, 0))
    assert image_subspace(M).dim == 2
    assert image_subspace(M, [0, 1]).dim == 1
    assert image_subspace(M, [2]).contains((0, 1))


@pytest.mark.parametrize("build, expected", [
    (lambda: make_g2n2(1)[0], [1, 1, 0, 1, 1]),
    (lambda: make_g2n2(2)[0], [1, 1, 3, 6, 3, 1, 1]),
    (lambda: make_g2n2(3)[0], [1, 1, 8, 8, 0, 8, 8, 1, 1]),
    (lambda: make_f(2), [1, 1, 4, 4, 1, 1]),
    (lambda: make_f(3), [1, 1, 9, 9, 9, 9, 1, 1]),
    (lambda: make_heisenberg(1), [1, 2, 2, 1]),
    (lambda: make_abelian(3), [1, 3, 3, 1]),
])
def test_betti_numbers(build, expected):
    table = betti_numbers(build())
    assert list(table.values) == expected
    assert table.complete
    assert table.euler_characteristic() == 0
    assert table.is_poincare_symmetric()


def test_betti_records_of_g6():
    table = betti_numbers(make_g2n2(2)[0])
    record = table.records[2]
    assert (record.cochain_dim, record.rank, record.kernel_dim, record.betti) == (15, 7, 8, 3)
    assert table.records[3].kernel_dim == 13
    for r in table.records[1:]:
        assert r.betti == r.kernel_dim - table.records[r.k - 1].rank


def test_quadratic_differential_agrees_with_standard():
    g, B = make_g2n2(2)
    standard = standard_ce_differential(g)
    quadratic = quadratic_differential(g, B)
    assert set(differential_agreement(standard, quadratic).values()) == {'equal'}
    table = betti_numbers(g, B=B, differential='quadratic')
    assert list(table.values) == [1, 1, 3, 6, 3, 1, 1]


def test_differential_on_covectors_of_g4():
    g, B = make_g2n2(1)
    cc = build_complex(g, 'quadratic', B)
    frame = DualBasisFrame(g)
    # d alpha = -Omega, d alpha_1 = -beta ^ alpha_1
    assert cc.apply(frame.covector('X0')) == -frame.monomial('X1', 'Y1')
    assert cc.apply(frame.covector('X1')) == -frame.monomial('Y0', 'X1')
    assert cc.apply(frame.covector('Y0')).is_zero()
    assert cc.apply(cc.apply(frame.monomial('X0', 'X1'))).is_zero()


def test_quadratic_differential_is_bracket_with_three_form():
    g, B = make_jordan(2)[:2]
    cc = build_complex(g, 'quadratic', B)
    cubic = three_form(g, B)
    # d of a covector is -B^{-1}-weighted contraction of I
    for j in range(g.dim):
        expected = ExteriorForm.zero(g.dim)
        for i in range(g.dim):
            if B.inverse[i][j]:
                expected = expected - interior(i, cubic).scale(B.inverse[i][j])
        assert cc.apply(ExteriorForm.covector(g.dim, j)) == expected


def test_truncated_table():
    g, _ = make_g2n2(2)
    table = betti_numbers(g, max_degree=2)
    assert list(table.values) == [1, 1, 3]
    assert not table.complete
    with pytest.raises(BadParameter):
        betti_numbers(g, max_degree=-1)


def test_complex_errors():
    g, B = make_g2n2(1)
    cc = build_complex(g, 'standard', degrees=[1, 2])
    with pytest.raises(BadParameter):
        cc.matrix(3)
    with pytest.raises(BadParameter):
        build_complex(g, 'quadratic')
    with pytest.raises(BadParameter):
        build_complex(g, 'spectral', B)
    with pytest.raises(BadParameter):
        build_complex(g, degrees=[7])
    with pytest.raises(BadParameter):
        betti_numbers(g, method='theorem2')


def test_square_zero_is_enforced():
    g, _ = make_g2n2(1)
    cc = build_complex(g)
    cc.differentials[1] = SparseMatrix.from_dense([[1] * 4 for _ in range(6)])
    with pytest.raises(AlgebraError):
        cc.check_square_zero()


@pytest.mark.parametrize("build, z2, b2, h2", [
    (lambda: make_g2n2(2), 8, 5, 3),
    (lambda: make_g2n2(1), 3, 3, 0),
    (lambda: make_g4n2(1), 11, 3, 8),
    (lambda: (make_abelian(4), BilinearForm.identity(4)), 6, 0, 6),
])
def test_degree2_spaces(build, z2, b2, h2):
    g, B = build()
    spaces = degree2_spaces(g, B)
    assert (spaces.cocycles.dim, spaces.coboundaries.dim, spaces.h2) == (z2, b2, h2)
    assert len(spaces.cocycle_forms()) == z2


def test_degree2_spaces_of_g4n2_n2():
    g, B = make_g4n2(2)
    assert degree2_spaces(g, B).h2 == 20


def test_degree2_spaces_without_form():
    spaces = degree2_spaces(make_heisenberg(1))
    assert spaces.h2 == 2


def test_coboundaries_are_interiors_of_three_form():
    g, B = make_g2n2(2)
    frame = DualBasisFrame(g)
    spaces = degree2_spaces(g, B)
    for i in range(g.dim):
        assert spaces.coboundaries.contains(interior(i, three_form(g, B)).coordinates(2))
    omega = wedge(frame.covector('X1'), frame.covector('Y1'))
    assert spaces.cocycles.contains(omega.coordinates(2))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_b2_of_g2n2_by_brute_force(n):
    assert betti_numbers(make_g2n2(n)[0], max_degree=2)[2] == n * n - 1


@pytest.mark.parametrize("build, expected", [
    (lambda: make_g2n2(4)[0], [1, 1, 15, 15, 20, 40, 20, 15, 15, 1, 1]),
    (lambda: make_f(4), [1, 1, 16, 16, 36, 36, 16, 16, 1, 1]),
])
def test_betti_numbers_at_n_4(build, expected):
    assert list(betti_numbers(build()).values) == expected
