# src/cohomology.py

"""
Chevalley-Eilenberg cochain complexes with trivial coefficients.

Two constructions of the differential are provided: the textbook one read off
the structure constants, and the quadratic one, minus the super Poisson
bracket with the associated 3-form. Both produce a CochainComplex whose degree-k
matrix maps the colexicographic basis of degree k to that of degree k + 1.
Ranks are exact: a modular screen with numpy answers only when it proves full
rank, everything else goes through fraction-free elimination over the integers.
"""

from __future__ import annotations
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from src.algebra_core import (
    ZERO, AlgebraError, BadParameter, BilinearForm, DimensionMismatch, LieAlgebra, Subspace,
    nullspace_rows, require_quadratic,
)
from src.exterior import (
    ExteriorForm, basis_masks, basis_position, contraction_sign, interior, three_form, wedge_sign,
)
from src.status_manager import StatusManager
from src.utils import exception_handler

logger = logging.getLogger(__name__)

DEFAULT_PRIME = 2147483647
# residues below 2^31 keep every product of two of them inside int64
PRIME_BOUND = 1 << 31

STANDARD = 'standard'
QUADRATIC = 'quadratic'
DIFFERENTIALS = (STANDARD, QUADRATIC)


def check_modular_prime(prime: int) -> int:
    if isinstance(prime, bool) or not isinstance(prime, int) or not 2 <= prime < PRIME_BOUND or not isprime(prime):
        raise BadParameter(f"Modular prime must be a prime below 2^31, got {prime!r}")
    return prime


@dataclass(frozen=True)
class LinalgOptions:
    modular_screen: bool = True
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        check_modular_prime(self.prime)

    @classmethod
    def from_config(cls, config: Mapping[str, Mapping[str, str]]) -> 'LinalgOptions':
        from src.config import get_bool, get_int
        return cls(get_bool(config, 'Linalg', 'modular_screen'), get_int(config, 'Linalg', 'modular_prime'))


DEFAULT_OPTIONS = LinalgOptions()


# ---------------------------------------------------------------- sparse matrices

@dataclass(frozen=True)
class SparseMatrix:
    """Column-major sparse matrix over the rationals."""
    rows: int
    cols: int
    columns: Tuple[Dict[int, Fraction], ...]

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Mapping[int, Fraction]]) -> 'SparseMatrix':
        cleaned = []
        for col in columns:
            entries = {}
            for i, x in col.items():
                if not 0 <= i < rows:
                    raise DimensionMismatch(f"Row index {i} outside a matrix with {rows} rows")
                if x:
                    entries[i] = Fraction(x)
            cleaned.append(entries)
        return cls(rows, len(cleaned), tuple(cleaned))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence]) -> 'SparseMatrix':
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_columns(rows, ({i: Fraction(dense[i][j]) for i in range(rows) if dense[i][j]}
                                       for j in range(cols)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> 'SparseMatrix':
        return cls(rows, cols, tuple({} for _ in range(cols)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def to_rows(self) -> List[Dict[int, Fraction]]:
        rows: List[Dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                rows[i][j] = x
        return rows

    def select_columns(self, columns: Sequence[int]) -> 'SparseMatrix':
        return SparseMatrix(self.rows, len(columns), tuple(self.columns[j] for j in columns))

    def apply(self, vector: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for j, x in vector.items():
            if x:
                for i, y in self.columns[j].items():
                    out[i] = out.get(i, ZERO) + x * y
        return {i: v for i, v in out.items() if v}

    def matmul(self, other: 'SparseMatrix') -> 'SparseMatrix':
        """self @ other."""
        if self.cols != other.rows:
            raise DimensionMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        return SparseMatrix(self.rows, other.cols, tuple(self.apply(col) for col in other.columns))

    def negate(self) -> 'SparseMatrix':
        return SparseMatrix(self.rows, self.cols, tuple({i: -x for i, x in c.items()} for c in self.columns))

    def __matmul__(self, other: 'SparseMatrix') -> 'SparseMatrix':
        return self.matmul(other)


# ---------------------------------------------------------------- exact rank

def rank_mod_p(M: SparseMatrix, prime: int = DEFAULT_PRIME) -> Optional[int]:
    """Rank of M reduced modulo a word-size prime; None when a denominator vanishes mod p."""
    check_modular_prime(prime)
    if M.rows == 0 or M.cols == 0:
        return 0
    A = np.zeros((M.rows, M.cols), dtype=np.int64)
    for j, col in enumerate(M.columns):
        for i, x in col.items():
            den = x.denominator % prime
            if den == 0:
                return None
            A[i, j] = (x.numerator % prime) * pow(den, prime - 2, prime) % prime
    rank = 0
    for c in range(M.cols):
        if rank == M.rows:
            break
        nonzero = np.nonzero(A[rank:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        inv = pow(int(A[rank, c]), prime - 2, prime)
        A[rank] = (A[rank] * inv) % prime
        below = rank + 1 + np.nonzero(A[rank + 1:, c])[0]
        if below.size:
            A[below] = (A[below] - np.outer(A[below, c], A[rank])) % prime
        rank += 1
    return rank


def _integral(col: Mapping[int, Fraction]) -> Dict[int, int]:
    scale = reduce(math.lcm, (x.denominator for x in col.values()), 1)
    return _primitive({i: int(x * scale) for i, x in col.items()})


def _primitive(v: Dict[int, int]) -> Dict[int, int]:
    g = reduce(math.gcd, v.values(), 0)
    if g > 1:
        return {i: x // g for i, x in v.items()}
    return v


def _rank_fraction_free(M: SparseMatrix) -> int:
    columns = [_integral(col) for col in M.columns if col]
    fill = Counter(i for col in columns for i in col)
    pivots: List[Tuple[int, Dict[int, int]]] = []
    for col in columns:
        v = col
        # later pivot vectors vanish on earlier pivot rows, so one ordered pass clears them all
        for row, b in pivots:
            c = v.get(row)
            if not c:
                continue
            lead = b[row]
            merged = {i: lead * v.get(i, 0) - c * b.get(i, 0) for i in v.keys() | b.keys()}
            v = _primitive({i: x for i, x in merged.items() if x})
            if not v:
                break
        if v:
            row = min(v, key=lambda i: (fill[i], i))
            pivots.append((row, v))
    return len(pivots)


def rank_exact(M: SparseMatrix, options: LinalgOptions = DEFAULT_OPTIONS) -> int:
    if M.rows == 0 or M.cols == 0 or M.is_zero():
        return 0
    if options.modular_screen:
        screened = rank_mod_p(M, options.prime)
        if screened is not None and screened == min(M.rows, M.cols):
            logger.debug(f"Modular screen certified full rank {screened} for {M.shape}")
            return screened
    return _rank_fraction_free(M)


def kernel_basis(M: SparseMatrix) -> Subspace:
    return Subspace.span(nullspace_rows(M.to_rows(), M.cols), M.cols)


def image_subspace(M: SparseMatrix, columns: Optional[Sequence[int]] = None) -> Subspace:
    """Span of the chosen columns (all by default) inside the row space coordinates."""
    chosen = (M if columns is None else M.select_columns(columns)).columns
    dense = []
    for col in chosen:
        v = [ZERO] * M.rows
        for i, x in col.items():
            v[i] = x
        dense.append(v)
    return Subspace.span(dense, M.rows)


# ---------------------------------------------------------------- complexes

@dataclass
class CochainComplex:
    dim: int
    differentials: Dict[int, SparseMatrix]
    provenance: str
    label: str = ''
    options: LinalgOptions = DEFAULT_OPTIONS
    _ranks: Dict[int, int] = field(default_factory=dict, repr=False)

    def cochain_dim(self, k: int) -> int:
        return math.comb(self.dim, k) if 0 <= k <= self.dim else 0

    def matrix(self, k: int) -> SparseMatrix:
        if k not in self.differentials:
            raise BadParameter(f"Differential of degree {k} was not built for {self.label or 'this complex'}")
        return self.differentials[k]

    def rank(self, k: int) -> int:
        if k < 0 or k >= self.dim:
            return 0
        if k not in self._ranks:
            self._ranks[k] = rank_exact(self.matrix(k), self.options)
            logger.debug(f"{self.label} {self.provenance} rank d_{k} = {self._ranks[k]}")
        return self._ranks[k]

    def kernel_dim(self, k: int) -> int:
        return self.cochain_dim(k) - self.rank(k)

    def betti(self, k: int) -> int:
        return self.kernel_dim(k) - self.rank(k - 1)

    def apply(self, form: ExteriorForm) -> ExteriorForm:
        """The differential applied to an arbitrary (mixed-degree) form."""
        if form.dim != self.dim:
            raise DimensionMismatch(f"Form on dimension {form.dim} for a complex on dimension {self.dim}")
        result = ExteriorForm.zero(self.dim)
        for k, part in form.degree_parts().items():
            position = basis_position(self.dim, k)
            image = self.matrix(k).apply({position[m]: c for m, c in part.terms.items()})
            targets = basis_masks(self.dim, k + 1)
            result = result + ExteriorForm(self.dim, {targets[i]: c for i, c in image.items()})
        return result

    def check_square_zero(self) -> None:
        for k in sorted(self.differentials):
            if k + 1 in self.differentials:
                if not self.differentials[k + 1].matmul(self.differentials[k]).is_zero():
                    raise AlgebraError(f"{self.provenance} differential of {self.label} does not square to zero at degree {k}")


def _degree_range(dim: int, degrees: Optional[Iterable[int]]) -> List[int]:
    if degrees is None:
        return list(range(dim + 1))
    out = sorted(set(degrees))
    for k in out:
        if not 0 <= k <= dim:
            raise BadParameter(f"Degree {k} outside 0..{dim}")
    return out


def _assemble(dim: int, k: int, column_of) -> SparseMatrix:
    targets = basis_position(dim, k + 1)
    columns = []
    for mask in basis_masks(dim, k):
        col: Dict[int, Fraction] = {}
        for row_mask, value in column_of(mask):
            row = targets[row_mask]
            col[row] = col.get(row, ZERO) + value
        columns.append({i: x for i, x in col.items() if x})
    return SparseMatrix(len(targets), len(columns), tuple(columns))


def _wedge_into(terms: Mapping[int, Fraction], rest: int, factor: int):
    for m, c in terms.items():
        s = wedge_sign(m, rest)
        if s:
            yield m | rest, factor * s * c


def _build(g: LieAlgebra, provenance: str, generators: List[Dict[int, Fraction]], degrees, options) -> CochainComplex:
    # d(w) = sum over factors e^c of w: sign(c) * generators[c] ^ (w without e^c)
    def column_of(mask: int):
        for c in range(g.dim):
            bit = 1 << c
            if mask & bit and generators[c]:
                yield from _wedge_into(generators[c], mask ^ bit, contraction_sign(mask, c))

    started = time.perf_counter()
    differentials = {}
    for k in _degree_range(g.dim, degrees):
        StatusManager.update_status(f"Building {provenance} differential of {g.name or 'algebra'} in degree {k}")
        differentials[k] = _assemble(g.dim, k, column_of)
    cc = CochainComplex(g.dim, differentials, provenance, g.name, options)
    cc.check_square_zero()
    logger.info(f"Built {provenance} complex of {g.name or 'algebra'} (dim {g.dim}, degrees {sorted(differentials)}) "
                f"in {time.perf_counter() - started:.2f}s")
    return cc


@exception_handler
def standard_ce_differential(g: LieAlgebra, degrees: Optional[Iterable[int]] = None,
                             options: LinalgOptions = DEFAULT_OPTIONS) -> CochainComplex:
    """(d xi)(x, y) = -xi([x, y]) on covectors, extended as an antiderivation."""
    generators = [{} for _ in range(g.dim)]
    for (a, b), vec in g.brackets.items():
        for c, coeff in vec.items():
            mask = (1 << a) | (1 << b)
            generators[c][mask] = generators[c].get(mask, ZERO) - coeff
    return _build(g, STANDARD, generators, degrees, options)


@exception_handler
def quadratic_differential(g: LieAlgebra, B: BilinearForm, degrees: Optional[Iterable[int]] = None,
                           options: LinalgOptions = DEFAULT_OPTIONS) -> CochainComplex:
    """The map w -> -{I, w}; I has odd degree so {I, w} = sum_j P_j ^ i_{e_j}(w) with P_j = sum_i B(Y_i, Y_j) i_{e_i}(I)."""
    require_quadratic(g, B)
    I = three_form(g, B)
    contractions = [interior(i, I) for i in range(g.dim)]
    inv = B.inverse
    generators = []
    for j in range(g.dim):
        P: Dict[int, Fraction] = {}
        for i in range(g.dim):
            if inv[i][j]:
                for m, c in contractions[i].terms.items():
                    P[m] = P.get(m, ZERO) - inv[i][j] * c
        generators.append({m: c for m, c in P.items() if c})
    # i_{e_j} removes e^j with the same sign the antiderivation formula uses, and P_j has even degree
    return _build(g, QUADRATIC, generators, degrees, options)


def build_complex(g: LieAlgebra, differential: str = STANDARD, B: Optional[BilinearForm] = None,
                  degrees: Optional[Iterable[int]] = None, options: LinalgOptions = DEFAULT_OPTIONS) -> CochainComplex:
    if differential == STANDARD:
        return standard_ce_differential(g, degrees, options)
    if differential == QUADRATIC:
        if B is None:
            raise BadParameter("The quadratic differential needs an invariant form")
        return quadratic_differential(g, B, degrees, options)
    raise BadParameter(f"Unknown differential {differential!r}; expected one of {DIFFERENTIALS}")


def differential_agreement(first: CochainComplex, second: CochainComplex) -> Dict[int, str]:
    """Per degree: 'equal', 'opposite' or 'neither' (entrywise comparison)."""
    if first.dim != second.dim:
        raise DimensionMismatch("Complexes of different dimensions")
    verdict = {}
    for k in sorted(set(first.differentials) & set(second.differentials)):
        a, b = first.differentials[k], second.differentials[k]
        if a == b:
            verdict[k] = 'equal'
        elif a == b.negate():
            verdict[k] = 'opposite'
        else:
            verdict[k] = 'neither'
    return verdict


# ---------------------------------------------------------------- Betti numbers

@dataclass(frozen=True)
class DegreeRecord:
    k: int
    cochain_dim: int
    rank: Optional[int]
    kernel_dim: Optional[int]
    betti: int


@dataclass(frozen=True)
class BettiTable:
    values: Tuple[int, ...]
    label: str = ''
    method: str = 'bruteforce'
    records: Tuple[DegreeRecord, ...] = ()
    dim: Optional[int] = None

    @property
    def complete(self) -> bool:
        return self.dim is None or len(self.values) == self.dim + 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.values))

    def is_poincare_symmetric(self) -> bool:
        return self.complete and tuple(self.values) == tuple(reversed(self.values))

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


@exception_handler
def betti_numbers(g: LieAlgebra, method: str = 'bruteforce', B: Optional[BilinearForm] = None,
                  differential: str = STANDARD, max_degree: Optional[int] = None,
                  options: LinalgOptions = DEFAULT_OPTIONS) -> BettiTable:
    """Brute-force Betti table b_k = dim ker d_k - rank d_{k-1}, optionally truncated at max_degree."""
    if method != 'bruteforce':
        raise BadParameter(f"betti_numbers computes brute-force tables only, got method {method!r}")
    top = g.dim if max_degree is None else min(max_degree, g.dim)
    if top < 0:
        raise BadParameter(f"max_degree must be non-negative, got {max_degree}")
    if top < g.dim:
        logger.warning(f"Betti table of {g.name or 'algebra'} truncated at degree {top} of {g.dim}")
    started = time.perf_counter()
    cc = build_complex(g, differential, B, range(top + 1), options)
    records = []
    for k in range(top + 1):
        StatusManager.update_status(f"Rank of d_{k} for {g.name or 'algebra'}")
        records.append(DegreeRecord(k, cc.cochain_dim(k), cc.rank(k), cc.kernel_dim(k), cc.betti(k)))
    table = BettiTable(tuple(r.betti for r in records), g.name, 'bruteforce', tuple(records), g.dim)
    logger.info(f"Betti numbers of {g.name or 'algebra'} ({differential}): {list(table.values)} "
                f"in {time.perf_counter() - started:.2f}s")
    return table


@dataclass(frozen=True)
class Degree2Spaces:
    dim: int
    cocycles: Subspace
    coboundaries: Subspace

    @property
    def h2(self) -> int:
        return self.cocycles.dim - self.coboundaries.dim

    def cocycle_forms(self) -> List[ExteriorForm]:
        return [ExteriorForm.from_vector(self.dim, 2, v) for v in self.cocycles.basis]

    def coboundary_forms(self) -> List[ExteriorForm]:
        return [ExteriorForm.from_vector(self.dim, 2, v) for v in self.coboundaries.basis]


@exception_handler
def degree2_spaces(g: LieAlgebra, B: Optional[BilinearForm] = None,
                   options: LinalgOptions = DEFAULT_OPTIONS) -> Degree2Spaces:
    """Z^2, B^2 and dim H^2; uses the quadratic differential when B is given."""
    differential = QUADRATIC if B is not None else STANDARD
    cc = build_complex(g, differential, B, (1, 2) if g.dim >= 2 else range(g.dim + 1), options)
    if g.dim < 2:
        return Degree2Spaces(g.dim, Subspace.zero(0), Subspace.zero(0))
    spaces = Degree2Spaces(g.dim, kernel_basis(cc.matrix(2)), image_subspace(cc.matrix(1)))
    if not spaces.cocycles.contains_subspace(spaces.coboundaries):
        raise AlgebraError("Coboundaries are not cocycles; the differential is inconsistent")
    logger.info(f"{g.name or 'algebra'}: dim Z2 = {spaces.cocycles.dim}, dim B2 = {spaces.coboundaries.dim}, "
                f"dim H2 = {spaces.h2}")
    return spaces
