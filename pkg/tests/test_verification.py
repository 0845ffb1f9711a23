# test_verification.py

from unittest.mock import patch

import pytest

from src.algebra_core import AlgebraError
from src.status_manager import ConsoleStatus, StatusManager
from src.verification import (
    SUITES, CheckResult, SuiteBounds, SuiteReport, g4n2_bracket_identities, run_suite,
)

SMALL = SuiteBounds(max_n=1, max_m=2, max_p=2)


@pytest.mark.parametrize("suite, bounds", [
    ('differentials', SMALL),
    ('formulas', SuiteBounds(max_n=2, max_m=2, max_p=2)),
    ('kernels', SuiteBounds(max_n=2, max_m=2, max_p=2)),
    ('symplectic', SMALL),
    ('appendix2', SuiteBounds(max_n=2, max_m=2, max_p=2)),
    ('structure', SMALL),
])
def test_suites_pass(suite, bounds):
    report = run_suite(suite, bounds)
    assert report.suite == suite
    assert report.results
    assert report.passed, [(r.name, r.detail) for r in report.failures()]


def test_unknown_suite():
    with pytest.raises(AlgebraError):
        run_suite('everything', SMALL)
    assert set(SUITES) == {'differentials', 'formulas', 'kernels', 'symplectic', 'appendix2', 'structure'}


def test_failed_check_is_reported():
    with patch('src.verification.betti_g2n2_theorem2', return_value=0):
        report = run_suite('formulas', SMALL)
    assert not report.passed
    failed = report.failures()
    assert any('formula tables' in r.name for r in failed)
    assert 'theorem2' in failed[0].detail


def test_report_serialization():
    report = SuiteReport('kernels', [CheckResult('a', True), CheckResult('b', False, 'off by one')], 1.23456)
    data = report.to_dict()
    assert data == {
        'suite': 'kernels',
        'passed': False,
        'checks': 2,
        'failures': [{'name': 'b', 'passed': False, 'detail': 'off by one'}],
        'elapsed_seconds': 1.235,
    }


def test_bracket_identities_of_g6():
    identities = g4n2_bracket_identities(1)
    assert len(identities) == 12
    for name, lhs, rhs in identities:
        assert lhs == rhs, name


def test_status_updates_reach_console():
    status = ConsoleStatus()
    StatusManager.set_instance(status)
    try:
        run_suite('kernels', SuiteBounds(max_n=1, max_m=1, max_p=2))
    finally:
        StatusManager.set_instance(None)
    assert status.messages == ["Running verification suite kernels"]


@pytest.mark.parametrize("suite, bounds", [
    ('formulas', SuiteBounds(max_n=4, max_m=1, max_p=2)),
    ('kernels', SuiteBounds(max_n=4, max_m=3, max_p=2)),
    ('symplectic', SuiteBounds(max_n=1, max_m=1, max_p=5)),
    ('structure', SuiteBounds(max_n=2, max_m=1, max_p=2)),
])
def test_suites_pass_at_full_bounds(suite, bounds):
    report = run_suite(suite, bounds)
    assert report.passed, [(r.name, r.detail) for r in report.failures()]


def test_kernels_suite_reaches_n_6_for_the_closed_form():
    report = run_suite('kernels', SuiteBounds(max_n=4, max_m=3, max_p=2))
    assert any(r.name == "K(1, k, k, n) closed form, n <= 6" for r in report.results)


def test_symplectic_suite_checks_every_jordan_block():
    report = run_suite('symplectic', SuiteBounds(max_n=1, max_m=1, max_p=5))
    names = [r.name for r in report.results]
    for dim in (4, 6, 8, 10):
        assert f"j{dim}: invertible derivation on ad(g) with the expected eigenvalues" in names
    assert any(name.endswith("2-forms give back their derivations") for name in names)


def test_structure_suite_covers_derived_algebra_and_degree_two():
    names = [r.name for r in run_suite('structure', SMALL).results]
    assert "g4: b_1 = dim g - dim [g, g]" in names
    assert "g4: B2 is spanned by the i_X I" in names
    assert "g4: Z2 = span(b^a_i, b^b_i, a_i^b_j)" in names


def test_block_count_disagreement_fails_appendix2():
    with patch('src.verification.h2_g4n2_counted', return_value=0):
        report = run_suite('appendix2', SuiteBounds(max_n=1, max_m=1, max_p=2))
    assert [r.name for r in report.failures()] == ["g6: dim H2 by cocycle count"]
