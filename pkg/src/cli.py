# src/cli.py

"""
Command-line interface.

    betti   Betti table of a family or an algebra file, brute force or by formula
    h2      dim Z^2, B^2, H^2 with echelon bases, for an algebra with an invariant form
    verify  run one verification suite (exit 1 when any check fails)
    export  write a family as an algebra file

Algebra files are UTF-8 JSON with the fields dim, labels, brackets, form and
omega. Rationals are written as "p/q" strings (or "p"), never as floats.
"""

import argparse
import logging
import os
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
import simplejson

from src.algebra_core import (
    AlgebraError, BadParameter, BilinearForm, LieAlgebra, Matrix, build_lie_algebra, format_scalar,
)
from src.cohomology import DIFFERENTIALS, QUADRATIC, STANDARD, BettiTable, LinalgOptions, betti_numbers, degree2_spaces
from src.config import get_int, load_system_config
from src.exterior import DualBasisFrame
from src.families import FAMILY_IDS, FamilySpec
from src.formulas import FORMULA_METHODS, betti_g2n2_table
from src.status_manager import ConsoleStatus, StatusManager
from src.utils import get_project_root
from src.verification import SUITES, SuiteBounds, run_suite

logger = logging.getLogger(__name__)

METHODS = ('bruteforce',) + FORMULA_METHODS
FORMATS = ('table', 'json', 'csv')
ALGEBRA_FILE_FIELDS = ('dim', 'labels', 'brackets', 'form', 'omega')
BRACKET_FIELDS = {'i', 'j', 'coeffs'}

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

_RATIONAL = re.compile(r'^-?\d+(/\d+)?$')
_INDEX = re.compile(r'^\d+$')


class CliError(AlgebraError):
    pass


class UnknownFamily(CliError):
    pass


class MethodNotApplicable(CliError):
    pass


class MissingForm(CliError):
    pass


class ParseError(CliError):
    """Malformed algebra file. Syntax errors carry a line and column, semantic ones the JSON path."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 path: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        where = f" (line {line}, column {column})" if line is not None else ''
        prefix = f"{path}: " if path else ''
        super().__init__(f"{prefix}{message}{where}")


# ---------------------------------------------------------------- algebra files

@dataclass
class AlgebraFile:
    dim: int
    labels: Optional[List[str]]
    brackets: List[Tuple[int, int, Dict[int, Fraction]]]
    form: Optional[Matrix] = None
    omega: Optional[Matrix] = None

    def to_algebra(self, name: str = '') -> LieAlgebra:
        return build_lie_algebra(self.dim, self.labels, {(i, j): coeffs for i, j, coeffs in self.brackets}, name)

    def bilinear_form(self) -> Optional[BilinearForm]:
        return BilinearForm(self.form, symmetric=True) if self.form is not None else None

    def symplectic_form(self) -> Optional[BilinearForm]:
        return BilinearForm(self.omega, symmetric=False) if self.omega is not None else None

    @classmethod
    def from_algebra(cls, g: LieAlgebra, B: Optional[BilinearForm] = None,
                     omega: Optional[BilinearForm] = None) -> 'AlgebraFile':
        brackets = [(i, j, dict(sorted(vec.items()))) for (i, j), vec in sorted(g.brackets.items())]
        return cls(g.dim, list(g.labels), brackets, B.gram if B else None, omega.gram if omega else None)

    def to_json(self) -> Dict:
        data = {
            'dim': self.dim,
            'labels': self.labels,
            'brackets': [{'i': i, 'j': j, 'coeffs': {str(s): format_scalar(c) for s, c in coeffs.items()}}
                         for i, j, coeffs in self.brackets],
        }
        if self.labels is None:
            del data['labels']
        for key, matrix in (('form', self.form), ('omega', self.omega)):
            if matrix is not None:
                data[key] = [[format_scalar(x) for x in row] for row in matrix]
        return data


def parse_rational(raw, where: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ParseError(f"expected a rational string 'p/q', got {raw!r}", path=where)
    if isinstance(raw, str) and not _RATIONAL.match(raw):
        raise ParseError(f"{raw!r} is not a rational string 'p/q'", path=where)
    try:
        return Fraction(raw)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {raw!r}", path=where)


def _parse_index(raw, dim: int, where: str) -> int:
    if isinstance(raw, str) and _INDEX.match(raw):
        raw = int(raw)
    if isinstance(raw, bool) or not isinstance(raw, int) or not 0 <= raw < dim:
        raise ParseError(f"basis index must be an integer in 0..{dim - 1}, got {raw!r}", path=where)
    return raw


def _parse_coefficients(raw, dim: int, where: str) -> Dict[int, Fraction]:
    if not isinstance(raw, dict):
        raise ParseError("expected a mapping basis-index -> rational string", path=where)
    coeffs: Dict[int, Fraction] = {}
    for key, value in raw.items():
        s = _parse_index(key, dim, where)
        if s in coeffs:
            raise ParseError(f"index {key!r} repeats basis index {s}", path=where)
        coeffs[s] = parse_rational(value, f"{where}[{key}]")
    return coeffs


def _parse_matrix(raw, dim: int, key: str) -> Matrix:
    if not isinstance(raw, list) or len(raw) != dim or any(not isinstance(r, list) or len(r) != dim for r in raw):
        raise ParseError(f"expected a {dim}x{dim} matrix of rational strings", path=key)
    return tuple(tuple(parse_rational(x, f"{key}[{r}][{c}]") for c, x in enumerate(row)) for r, row in enumerate(raw))


def parse_algebra_file(text: str) -> AlgebraFile:
    try:
        data = simplejson.loads(text)
    except simplejson.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno)
    if not isinstance(data, dict):
        raise ParseError("An algebra file holds a single JSON object")
    unknown = sorted(set(data) - set(ALGEBRA_FILE_FIELDS))
    if unknown:
        raise ParseError(f"Unknown field(s): {', '.join(unknown)}", path=unknown[0])
    for key in ('dim', 'brackets'):
        if key not in data:
            raise ParseError(f"Missing field {key!r}")

    dim = data['dim']
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise ParseError(f"dim must be a non-negative integer, got {dim!r}", path='dim')

    labels = data.get('labels')
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim
                               or not all(isinstance(x, str) for x in labels)):
        raise ParseError(f"labels must be a list of {dim} strings", path='labels')

    if not isinstance(data['brackets'], list):
        raise ParseError("brackets must be a list of {i, j, coeffs} records", path='brackets')
    brackets = []
    for n, record in enumerate(data['brackets']):
        where = f"brackets[{n}]"
        if not isinstance(record, dict) or set(record) != BRACKET_FIELDS:
            raise ParseError("expected exactly the fields i, j, coeffs", path=where)
        i, j = _parse_index(record['i'], dim, f"{where}.i"), _parse_index(record['j'], dim, f"{where}.j")
        if i >= j:
            raise ParseError(f"records must have i < j, got ({i}, {j})", path=where)
        brackets.append((i, j, _parse_coefficients(record['coeffs'], dim, f"{where}.coeffs")))

    form = _parse_matrix(data['form'], dim, 'form') if data.get('form') is not None else None
    omega = _parse_matrix(data['omega'], dim, 'omega') if data.get('omega') is not None else None
    return AlgebraFile(dim, labels, brackets, form, omega)


def load_algebra_file(path: str) -> AlgebraFile:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise CliError(f"Cannot read algebra file {path}: {e.strerror}")
    logger.info(f"Loaded algebra file {path}")
    return parse_algebra_file(text)


def dump_algebra_file(algebra_file: AlgebraFile) -> str:
    return simplejson.dumps(algebra_file.to_json(), indent=2)


# ---------------------------------------------------------------- reports

@dataclass
class ResultReport:
    table: BettiTable
    elapsed: float

    def check(self) -> None:
        # the arithmetic invariants hold for every method; a violation is a bug worth surfacing
        for r in self.table.records:
            if r.kernel_dim is not None and r.k > 0 and r.betti != r.kernel_dim - self.table.records[r.k - 1].rank:
                logger.warning(f"{self.table.label}: b_{r.k} disagrees with its kernel and image dimensions")
        if self.table.complete and self.table.euler_characteristic() != 0:
            logger.warning(f"{self.table.label}: Euler characteristic {self.table.euler_characteristic()} != 0")

    def rows(self) -> List[Dict]:
        if self.table.records:
            return [{'k': r.k, 'dim': r.cochain_dim, 'rank': r.rank, 'kernel': r.kernel_dim, 'betti': r.betti}
                    for r in self.table.records]
        return [{'k': k, 'betti': b} for k, b in enumerate(self.table.values)]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows())

    def to_json(self) -> Dict:
        return {
            'algebra': self.table.label,
            'dim': self.table.dim,
            'method': self.table.method,
            'betti': list(self.table.values),
            'degrees': self.rows(),
            'euler_characteristic': self.table.euler_characteristic(),
            'elapsed_seconds': round(self.elapsed, 3),
        }

    def render(self, fmt: str) -> str:
        if fmt == 'json':
            return simplejson.dumps(self.to_json(), indent=2)
        if fmt == 'csv':
            return self.to_frame().to_csv(index=False)
        header = f"{self.table.label} (dim {self.table.dim}), method {self.table.method}"
        return (f"{header}\n{self.to_frame().to_string(index=False)}\n"
                f"Betti numbers: {list(self.table.values)}\n")


@dataclass
class H2Report:
    label: str
    cocycles: List[str]
    coboundaries: List[str]
    h2: int
    extra: Dict = field(default_factory=dict)

    def to_json(self) -> Dict:
        return {
            'algebra': self.label,
            'dim_Z2': len(self.cocycles),
            'dim_B2': len(self.coboundaries),
            'dim_H2': self.h2,
            'Z2_basis': self.cocycles,
            'B2_basis': self.coboundaries,
        }

    def render(self, fmt: str) -> str:
        if fmt == 'json':
            return simplejson.dumps(self.to_json(), indent=2)
        rows = ([{'space': 'Z2', 'index': i, 'form': f} for i, f in enumerate(self.cocycles)]
                + [{'space': 'B2', 'index': i, 'form': f} for i, f in enumerate(self.coboundaries)])
        frame = pd.DataFrame(rows, columns=['space', 'index', 'form'])
        if fmt == 'csv':
            return frame.to_csv(index=False)
        lines = [f"{self.label}: dim Z2 = {len(self.cocycles)}, dim B2 = {len(self.coboundaries)}, dim H2 = {self.h2}"]
        if rows:
            lines.append(frame.to_string(index=False))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- input resolution

@dataclass
class ResolvedInput:
    algebra: LieAlgebra
    form: Optional[BilinearForm]
    omega: Optional[BilinearForm]
    family: Optional[str] = None
    parameter: Optional[int] = None


def resolve_input(args: argparse.Namespace) -> ResolvedInput:
    family, path = getattr(args, 'family', None), getattr(args, 'file', None)
    if family and path:
        raise CliError("Give either a family or --file, not both")
    if path:
        algebra_file = load_algebra_file(path)
        name = os.path.splitext(os.path.basename(path))[0]
        g = algebra_file.to_algebra(name)
        B = algebra_file.bilinear_form()
        if getattr(args, 'form', 'file') == 'identity':
            B = BilinearForm.identity(g.dim)
        return ResolvedInput(g, B, algebra_file.symplectic_form())
    if not family:
        raise CliError("Give a family id or --file")
    if family not in FAMILY_IDS:
        raise UnknownFamily(f"Unknown family {family!r}; expected one of {', '.join(FAMILY_IDS)}")
    parameter = args.p if family == 'jordan' and args.p is not None else args.n
    if parameter is None:
        raise BadParameter(f"Family {family} needs {'--p' if family == 'jordan' else '--n'}")
    instance = FamilySpec(family, parameter).build()
    B = instance.form
    if getattr(args, 'form', 'file') == 'identity':
        B = BilinearForm.identity(instance.algebra.dim)
    return ResolvedInput(instance.algebra, B, instance.omega, family, parameter)


# ---------------------------------------------------------------- commands

def cmd_betti(args: argparse.Namespace, options: LinalgOptions) -> ResultReport:
    source = resolve_input(args)
    started = time.perf_counter()
    if args.method == 'bruteforce':
        if args.differential == QUADRATIC and source.form is None:
            raise MissingForm("The quadratic differential needs an invariant form (add --form identity or a form field)")
        table = betti_numbers(source.algebra, B=source.form, differential=args.differential,
                              max_degree=args.max_degree, options=options)
    else:
        if source.family != 'g2n2':
            raise MethodNotApplicable(f"Method {args.method} applies to the g2n2 family only")
        if args.max_degree is not None:
            raise MethodNotApplicable(f"--max-degree applies to the bruteforce method only, not {args.method}")
        table = betti_g2n2_table(source.parameter, args.method)
    report = ResultReport(table, time.perf_counter() - started)
    report.check()
    return report


def cmd_h2(args: argparse.Namespace, options: LinalgOptions) -> H2Report:
    source = resolve_input(args)
    if source.form is None:
        raise MissingForm(f"{source.algebra.name or 'algebra'} has no invariant form; use --form identity "
                          "or add a form field")
    spaces = degree2_spaces(source.algebra, source.form, options)
    frame = DualBasisFrame(source.algebra)
    return H2Report(source.algebra.name, [frame.render(f) for f in spaces.cocycle_forms()],
                    [frame.render(f) for f in spaces.coboundary_forms()], spaces.h2)


def cmd_verify(args: argparse.Namespace, options: LinalgOptions, config: Dict) -> Tuple[int, str]:
    default_n = get_int(config, 'Verify', 'max_kernel_n' if args.suite == 'kernels' else 'max_n')
    bounds = SuiteBounds(
        max_n=args.max_n if args.max_n is not None else default_n,
        max_m=args.max_m if args.max_m is not None else get_int(config, 'Verify', 'max_m'),
        max_p=args.max_p if args.max_p is not None else get_int(config, 'Verify', 'max_p'),
    )
    report = run_suite(args.suite, bounds, options)
    if args.format == 'json':
        text = simplejson.dumps(report.to_dict(), indent=2)
    else:
        frame = pd.DataFrame([{'check': r.name, 'passed': r.passed, 'detail': r.detail} for r in report.results])
        if args.format == 'csv':
            text = frame.to_csv(index=False)
        else:
            status = 'PASSED' if report.passed else f"FAILED ({len(report.failures())} of {len(report.results)})"
            text = f"Suite {args.suite}: {status}\n{frame.to_string(index=False)}\n"
    return (EXIT_OK if report.passed else EXIT_FAILED), text


def cmd_export(args: argparse.Namespace) -> str:
    source = resolve_input(args)
    return dump_algebra_file(AlgebraFile.from_algebra(source.algebra, source.form, source.omega)) + "\n"


# ---------------------------------------------------------------- plumbing

def _add_source_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('family', nargs='?', help=f"family id: {', '.join(FAMILY_IDS)}")
    parser.add_argument('--file', help='algebra file (JSON)')
    parser.add_argument('--n', type=int, help='size parameter n (abelian: the dimension)')
    parser.add_argument('--p', type=int, help='Jordan block size p')


def build_parser(default_format: str = 'table') -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='lie_betti', description='Exact Lie algebra cohomology and Betti numbers')
    parser.add_argument('--verbose', action='store_true', help='debug logging and status lines on stderr')
    parser.add_argument('--format', choices=FORMATS, default=default_format)
    parser.add_argument('--out', help='write the report here instead of stdout '
                                      '(a bare file name goes to [Output] out_dir)')
    commands = parser.add_subparsers(dest='command', required=True)

    betti = commands.add_parser('betti', help='Betti table')
    _add_source_arguments(betti)
    betti.add_argument('--method', choices=METHODS, default='bruteforce')
    betti.add_argument('--differential', choices=DIFFERENTIALS, default=STANDARD)
    betti.add_argument('--max-degree', type=int, dest='max_degree', help='highest degree (bruteforce only)')
    betti.add_argument('--form', choices=('file', 'identity'), default='file')

    h2 = commands.add_parser('h2', help='degree-2 cocycles, coboundaries and cohomology')
    _add_source_arguments(h2)
    h2.add_argument('--form', choices=('file', 'identity'), default='file',
                    help='invariant form: the one from the family or file, or the identity')

    verify = commands.add_parser('verify', help='run a verification suite')
    verify.add_argument('suite', choices=SUITES)
    verify.add_argument('--max-n', type=int, dest='max_n')
    verify.add_argument('--max-m', type=int, dest='max_m')
    verify.add_argument('--max-p', type=int, dest='max_p')

    export = commands.add_parser('export', help='write a family as an algebra file')
    _add_source_arguments(export)
    for sub in (betti, h2, verify, export):
        sub.add_argument('--format', choices=FORMATS, default=argparse.SUPPRESS)
        sub.add_argument('--out', default=argparse.SUPPRESS)
    return parser


def resolve_out_path(out: str, config: Dict) -> str:
    """A bare file name goes to [Output] out_dir; a relative out_dir is taken from the project root."""
    if os.path.dirname(out):
        return out
    out_dir = config.get('Output', {}).get('out_dir', 'output')
    if not os.path.isabs(out_dir):
        out_dir = os.path.join(get_project_root(), out_dir)
    return os.path.join(out_dir, out)


def _emit(text: str, out: Optional[str], config: Dict) -> None:
    if not out:
        sys.stdout.write(text)
        return
    path = resolve_out_path(out, config)
    try:
        if not os.path.dirname(out):
            os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
    except OSError as e:
        raise CliError(f"Cannot write report {path}: {e.strerror}")
    logger.info(f"Report written to {path}")


def main(argv: Optional[Sequence[str]] = None, config: Optional[Dict] = None) -> int:
    config = config if config is not None else load_system_config()
    default_format = config.get('Output', {}).get('default_format', 'table')
    args = build_parser(default_format if default_format in FORMATS else 'table').parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
        StatusManager.set_instance(ConsoleStatus())
    logger.info(f"Command {args.command} started")
    try:
        options = LinalgOptions.from_config(config)
        code = EXIT_OK
        if args.command == 'betti':
            text = cmd_betti(args, options).render(args.format)
        elif args.command == 'h2':
            text = cmd_h2(args, options).render(args.format)
        elif args.command == 'verify':
            code, text = cmd_verify(args, options, config)
        else:
            text = cmd_export(args)
        _emit(text, args.out, config)
        return code
    except (AlgebraError, ValueError, OSError) as e:
        logger.error(f"Command {args.command} failed: {e}")
        sys.stderr.write(f"Error: {e}\n")
        return EXIT_INPUT
    finally:
        if args.verbose:
            StatusManager.set_instance(None)
        logger.info(f"Command {args.command} finished")
