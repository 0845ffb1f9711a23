# test_cli.py

import copy
import json
from fractions import Fraction
from unittest.mock import patch

import pytest

from src.cli import (
    EXIT_FAILED, EXIT_INPUT, EXIT_OK, AlgebraFile, ParseError, dump_algebra_file, load_algebra_file, main,
    parse_algebra_file, parse_rational, resolve_out_path,
)
from src.config import DEFAULT_CONFIG
from src.families import make_g2n2


@pytest.fixture
def config(tmp_path):
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    cfg['Output']['out_dir'] = str(tmp_path / 'reports')
    return cfg


@pytest.fixture
def abelian4(tmp_path):
    path = tmp_path / 'abelian4.json'
    path.write_text(json.dumps({'dim': 4, 'brackets': []}), encoding='utf-8')
    return str(path)


def test_betti_table_output(config, capsys):
    assert main(['betti', 'g2n2', '--n', '2'], config) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("g6 (dim 6), method bruteforce")
    assert "Betti numbers: [1, 1, 3, 6, 3, 1, 1]" in out


def test_betti_json_output(config, capsys):
    assert main(['betti', 'f', '--n', '2', '--format', 'json'], config) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data['algebra'] == 'f5'
    assert data['betti'] == [1, 1, 4, 4, 1, 1]
    assert data['euler_characteristic'] == 0
    assert data['degrees'][2] == {'k': 2, 'dim': 10, 'rank': 2, 'kernel': 8, 'betti': 4}


def test_betti_by_formula(config, capsys):
    assert main(['betti', 'g2n2', '--n', '3', '--method', 'theorem2'], config) == EXIT_OK
    assert "Betti numbers: [1, 1, 8, 8, 0, 8, 8, 1, 1]" in capsys.readouterr().out


def test_betti_quadratic_differential(config, capsys):
    assert main(['betti', 'jordan', '--p', '2', '--differential', 'quadratic', '--format', 'csv'], config) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "k,dim,rank,kernel,betti"


@pytest.mark.parametrize("argv, message", [
    (['betti', 'f', '--n', '2', '--method', 'theorem2'], "g2n2 family only"),
    (['betti', 'sl2', '--n', '2'], "Unknown family"),
    (['betti', 'g2n2'], "needs --n"),
    (['betti', 'g2n2', '--n', '0'], "g2n2"),
    (['betti', 'f', '--n', '1', '--differential', 'quadratic'], "invariant form"),
    (['betti', 'g2n2', '--n', '2', '--method', 'cor25', '--max-degree', '2'], "bruteforce method only"),
])
def test_input_errors_exit_2(config, capsys, argv, message):
    assert main(argv, config) == EXIT_INPUT
    assert message in capsys.readouterr().err


@pytest.mark.parametrize("argv, line", [
    (['h2', 'g4n2', '--n', '1'], "g6: dim Z2 = 11, dim B2 = 3, dim H2 = 8"),
    (['h2', 'g2n2', '--n', '2'], "g6: dim Z2 = 8, dim B2 = 5, dim H2 = 3"),
    (['h2', 'g2n2', '--n', '1'], "g4: dim Z2 = 3, dim B2 = 3, dim H2 = 0"),
])
def test_h2(config, capsys, argv, line):
    assert main(argv, config) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == line


def test_h2_json(config, capsys):
    assert main(['h2', 'g2n2', '--n', '2', '--format', 'json'], config) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert (data['dim_Z2'], data['dim_B2'], data['dim_H2']) == (8, 5, 3)
    assert len(data['Z2_basis']) == 8 and all('^' in f for f in data['Z2_basis'])


def test_h2_from_file_with_identity_form(config, capsys, abelian4):
    assert main(['h2', '--file', abelian4, '--form', 'identity'], config) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "abelian4: dim Z2 = 6, dim B2 = 0, dim H2 = 6"


def test_h2_needs_a_form(config, capsys, abelian4):
    assert main(['h2', '--file', abelian4], config) == EXIT_INPUT
    assert "no invariant form" in capsys.readouterr().err


def test_betti_from_file(config, capsys, abelian4):
    assert main(['betti', '--file', abelian4], config) == EXIT_OK
    assert "Betti numbers: [1, 4, 6, 4, 1]" in capsys.readouterr().out


def test_missing_file(config, capsys, tmp_path):
    assert main(['betti', '--file', str(tmp_path / 'nope.json')], config) == EXIT_INPUT
    assert "Cannot read algebra file" in capsys.readouterr().err


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as e:
        parse_algebra_file('{"dim": 2,\n "brackets": [}')
    assert e.value.line == 2
    assert e.value.column is not None
    assert "(line 2, column" in str(e.value)


@pytest.mark.parametrize("text, message", [
    ('{"dim": 1, "brackets": [], "extra": 1}', "Unknown field"),
    ('{"brackets": []}', "Missing field 'dim'"),
    ('{"dim": 2, "brackets": [{"i": 1, "j": 0, "coeffs": {}}]}', "i < j"),
    ('{"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": {"0": 0.5}}]}', "rational"),
    ('{"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": {"0": "1/0"}}]}', "zero denominator"),
    ('{"dim": 2, "brackets": [{"i": 0, "j": 2, "coeffs": {}}]}', "basis index"),
    ('{"dim": 2, "brackets": [], "form": [["1", "0"]]}', "2x2 matrix"),
    ('[1, 2]', "single JSON object"),
    ('{"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1", "02": "5"}}]}', "repeats basis index 2"),
])
def test_parse_rejects(text, message):
    with pytest.raises(ParseError) as e:
        parse_algebra_file(text)
    assert message in str(e.value)


@pytest.mark.parametrize("raw", ["0.5", "1/0", "1e3", 0.5, True, "1/-2"])
def test_parse_rational_rejects(raw):
    with pytest.raises(ParseError):
        parse_rational(raw, 'x')


def test_parse_rational():
    assert parse_rational("-3/6", 'x') == Fraction(-1, 2)
    assert parse_rational(4, 'x') == 4


def test_export_round_trip(config, capsys, tmp_path):
    path = tmp_path / 'g4.json'
    assert main(['export', 'g2n2', '--n', '1', '--out', str(path)], config) == EXIT_OK
    loaded = load_algebra_file(str(path))
    g, B = make_g2n2(1)
    assert loaded.to_algebra('g4').brackets == g.brackets
    assert loaded.bilinear_form().gram == B.gram
    assert loaded.labels == list(g.labels)
    assert parse_algebra_file(dump_algebra_file(loaded)) == loaded

    assert main(['betti', '--file', str(path), '--differential', 'quadratic'], config) == EXIT_OK
    assert "Betti numbers: [1, 1, 0, 1, 1]" in capsys.readouterr().out


def test_export_writes_rational_strings():
    data = AlgebraFile.from_algebra(*make_g2n2(1)).to_json()
    for record in data['brackets']:
        assert all(isinstance(c, str) for c in record['coeffs'].values())
    assert data['form'][0][2] == "1"


def test_bare_out_name_goes_to_out_dir(config, tmp_path):
    assert main(['betti', 'heisenberg', '--n', '1', '--out', 'h3.txt'], config) == EXIT_OK
    text = (tmp_path / 'reports' / 'h3.txt').read_text(encoding='utf-8')
    assert "Betti numbers: [1, 2, 2, 1]" in text


def test_verify(config, capsys):
    assert main(['verify', 'kernels', '--max-n', '2', '--max-m', '2'], config) == EXIT_OK
    assert capsys.readouterr().out.startswith("Suite kernels: PASSED")


def test_verify_failure_exits_1(config, capsys):
    with patch('src.verification.K_recursive', return_value=-1):
        code = main(['verify', 'kernels', '--max-n', '1', '--max-m', '1', '--format', 'json'], config)
    assert code == EXIT_FAILED
    data = json.loads(capsys.readouterr().out)
    assert data['passed'] is False and data['failures']


def test_verbose_status_lines(config, capsys):
    assert main(['--verbose', 'verify', 'kernels', '--max-n', '1', '--max-m', '1'], config) == EXIT_OK
    assert "Status: Running verification suite kernels" in capsys.readouterr().err


@pytest.mark.parametrize("text, path", [
    ('{"dim": 2, "brackets": [{"i": 0, "j": 1, "coeffs": {"0": "x"}}]}', "brackets[0].coeffs[0]"),
    ('{"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1", "02": "5"}}]}', "brackets[0].coeffs"),
    ('{"dim": 2, "brackets": [], "omega": [["1"]]}', "omega"),
    ('{"dim": -1, "brackets": []}', "dim"),
])
def test_semantic_errors_carry_the_json_path(text, path):
    with pytest.raises(ParseError) as e:
        parse_algebra_file(text)
    assert e.value.path == path
    assert e.value.line is None
    assert str(e.value).startswith(f"{path}: ")


def test_unwritable_out_exits_2(config, capsys, tmp_path):
    target = tmp_path / 'missing' / 'h3.txt'
    assert main(['betti', 'heisenberg', '--n', '1', '--out', str(target)], config) == EXIT_INPUT
    assert "Cannot write report" in capsys.readouterr().err
    assert not target.exists()


def test_relative_out_dir_resolves_against_project_root(tmp_path, monkeypatch):
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    cfg['Output']['out_dir'] = 'reports'
    monkeypatch.chdir(tmp_path / '..')
    with patch('src.cli.get_project_root', return_value=str(tmp_path)):
        assert resolve_out_path('h3.txt', cfg) == str(tmp_path / 'reports' / 'h3.txt')
        assert main(['betti', 'heisenberg', '--n', '1', '--out', 'h3.txt'], cfg) == EXIT_OK
    assert (tmp_path / 'reports' / 'h3.txt').exists()
    assert resolve_out_path(str(tmp_path / 'x.txt'), cfg) == str(tmp_path / 'x.txt')


def test_oversized_modular_prime_exits_2(config, capsys):
    config['Linalg']['modular_prime'] = str(2 ** 61 - 1)
    assert main(['betti', 'heisenberg', '--n', '1'], config) == EXIT_INPUT
    assert "below 2^31" in capsys.readouterr().err
