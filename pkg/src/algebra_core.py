# src/algebra_core.py

"""
Finite-dimensional Lie algebras over the rationals.

An algebra is stored through its structure constants: for every basis pair
i < j the sparse coefficient vector of [e_i, e_j]. Bilinear forms, linear
endomorphisms and subspaces are plain tuples of Fractions so every object here
is immutable and exact. Exact elimination (rref, nullspace, det, inverse) is
delegated to sympy's DomainMatrix over QQ.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from src.utils import exception_handler

logger = logging.getLogger(__name__)

Scalar = Fraction
Vector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]
ScalarLike = Union[int, str, Fraction]
SparseVector = Dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


class AlgebraError(Exception):
    pass


class DimensionMismatch(AlgebraError):
    pass


class IndexOutOfRange(AlgebraError):
    pass


class BadParameter(AlgebraError):
    pass


class FormNotInvariant(AlgebraError):
    pass


class DegenerateForm(AlgebraError):
    pass


class NotSkewDerivation(AlgebraError):
    pass


class NotSymplectic(AlgebraError):
    pass


class WellDefinednessFailure(AlgebraError):
    pass


class JacobiViolation(AlgebraError):
    def __init__(self, i: int, j: int, k: int, residual: Vector):
        self.triple = (i, j, k)
        self.residual = residual
        super().__init__(f"Jacobi identity fails on basis triple ({i}, {j}, {k}): residual {format_vector(residual)}")


# ---------------------------------------------------------------- scalars

def parse_scalar(value: ScalarLike) -> Fraction:
    """Exact rational from an int, a Fraction or a "p/q" string."""
    if isinstance(value, bool) or isinstance(value, float):
        raise AlgebraError(f"Inexact scalar {value!r}; use an integer or a 'p/q' string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise AlgebraError(f"Cannot parse scalar {value!r}: {e}")


def format_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_scalar(x) for x in v) + ")"


def zero_vector(dim: int) -> Vector:
    return (ZERO,) * dim


def unit_vector(dim: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(dim))


def to_qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _domain_matrix(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> DomainMatrix:
    sparse = {}
    for i, row in enumerate(rows):
        entries = {j: to_qq(v) for j, v in row.items() if v}
        if entries:
            sparse[i] = entries
    return DomainMatrix(sparse, (len(rows), ncols), QQ)


def rref_rows(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Reduced row-echelon form of sparse rows: (nonzero rows, pivot columns)."""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = _domain_matrix(rows, ncols).rref()
    dense = reduced.to_list()
    result = [tuple(from_qq(x) for x in dense[i]) for i in range(len(pivots))]
    return result, tuple(pivots)


def nullspace_rows(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> List[Vector]:
    """Basis of {x : row . x = 0 for all rows}, one vector per free column."""
    reduced, pivots = rref_rows(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for row, p in zip(reduced, pivots):
            vec[p] = -row[free]
        basis.append(tuple(vec))
    return basis


def _dense_to_sparse(v: Sequence[Fraction]) -> SparseVector:
    return {i: x for i, x in enumerate(v) if x}


# ---------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: Tuple[Vector, ...]
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Fraction]], ambient: int) -> 'Subspace':
        rows = []
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch(f"Vector of length {len(v)} in an ambient space of dimension {ambient}")
            rows.append(_dense_to_sparse(v))
        basis, pivots = rref_rows(rows, ambient)
        return cls(ambient, tuple(basis), pivots)

    @classmethod
    def zero(cls, ambient: int) -> 'Subspace':
        return cls(ambient, (), ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.ambient:
            raise DimensionMismatch(f"Vector of length {len(v)} in an ambient space of dimension {self.ambient}")
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of v in the echelon basis; v must lie in the subspace."""
        if not self.contains(v):
            raise AlgebraError("Vector does not lie in the subspace")
        return tuple(Fraction(v[p]) for p in self.pivots)

    def contains_subspace(self, other: 'Subspace') -> bool:
        return all(self.contains(v) for v in other.basis)

    def __contains__(self, v) -> bool:
        return self.contains(v)


# ---------------------------------------------------------------- Lie algebras

@dataclass(frozen=True, eq=False)
class LieAlgebra:
    dim: int
    labels: Tuple[str, ...]
    brackets: Mapping[Tuple[int, int], SparseVector]
    name: str = ''

    def structure_vector(self, i: int, j: int) -> SparseVector:
        """Sparse coefficients of [e_i, e_j]."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {s: -c for s, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, v: Sequence[Fraction], w: Sequence[Fraction]) -> Vector:
        return bracket(self, v, w)

    def ad_matrix(self, v: Sequence[Fraction]) -> 'LinearEndo':
        """Matrix of ad(v): column c holds [v, e_c]."""
        if len(v) != self.dim:
            raise DimensionMismatch(f"Vector of length {len(v)} for an algebra of dimension {self.dim}")
        cols = [[ZERO] * self.dim for _ in range(self.dim)]
        for i, vi in enumerate(v):
            if not vi:
                continue
            for c in range(self.dim):
                for s, coeff in self.structure_vector(i, c).items():
                    cols[c][s] += vi * coeff
        return LinearEndo(tuple(tuple(cols[c][r] for c in range(self.dim)) for r in range(self.dim)))

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise IndexOutOfRange(f"No basis element labelled {label!r} in {self.name or 'algebra'}")

    def vector(self, **coefficients: ScalarLike) -> Vector:
        v = [ZERO] * self.dim
        for label, c in coefficients.items():
            v[self.index(label)] = parse_scalar(c)
        return tuple(v)

    def labelled_brackets(self) -> Dict[Tuple[str, str], Dict[str, Fraction]]:
        """Nonzero brackets keyed by label pairs in sorted label order."""
        table = {}
        for (i, j), vec in self.brackets.items():
            a, b = self.labels[i], self.labels[j]
            sign = ONE
            if b < a:
                a, b, sign = b, a, -ONE
            table[(a, b)] = {self.labels[s]: sign * c for s, c in vec.items()}
        return table

    def __repr__(self) -> str:
        return f"LieAlgebra(name={self.name!r}, dim={self.dim}, brackets={len(self.brackets)})"


def _coerce_coefficients(coeffs: Union[Mapping[int, ScalarLike], Sequence[ScalarLike]], dim: int) -> SparseVector:
    items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
    result = {}
    for s, c in items:
        s = int(s)
        if not 0 <= s < dim:
            raise IndexOutOfRange(f"Coefficient index {s} outside 0..{dim - 1}")
        value = parse_scalar(c)
        if value:
            result[s] = result.get(s, ZERO) + value
    return {s: c for s, c in result.items() if c}


def jacobi_residual(g: LieAlgebra, i: int, j: int, k: int) -> Vector:
    ei, ej, ek = g.basis_vector(i), g.basis_vector(j), g.basis_vector(k)
    total = [ZERO] * g.dim
    for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
        for s, x in enumerate(bracket(g, a, bracket(g, b, c))):
            total[s] += x
    return tuple(total)


@exception_handler
def build_lie_algebra(dim: int, labels: Optional[Sequence[str]],
                      brackets: Mapping[Tuple[int, int], Union[Mapping[int, ScalarLike], Sequence[ScalarLike]]],
                      name: str = '') -> LieAlgebra:
    """Validate structure constants and return the algebra; Jacobi is checked on every triple."""
    if dim < 0:
        raise BadParameter(f"Dimension must be non-negative, got {dim}")
    labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
    if len(labels) != dim:
        raise DimensionMismatch(f"{len(labels)} labels for dimension {dim}")
    if len(set(labels)) != dim:
        raise AlgebraError("Basis labels must be distinct")

    table: Dict[Tuple[int, int], SparseVector] = {}
    for (i, j), coeffs in brackets.items():
        i, j = int(i), int(j)
        if not (0 <= i < dim and 0 <= j < dim):
            raise IndexOutOfRange(f"Bracket pair ({i}, {j}) outside 0..{dim - 1}")
        vec = _coerce_coefficients(coeffs, dim)
        if i == j:
            if vec:
                raise AlgebraError(f"[e_{i}, e_{i}] must vanish")
            continue
        if i > j:
            i, j = j, i
            vec = {s: -c for s, c in vec.items()}
        if (i, j) in table and table[(i, j)] != vec:
            raise AlgebraError(f"Conflicting values given for [e_{i}, e_{j}]")
        if vec:
            table[(i, j)] = vec

    g = LieAlgebra(dim, labels, table, name)
    for i, j, k in combinations(range(dim), 3):
        residual = jacobi_residual(g, i, j, k)
        if any(residual):
            raise JacobiViolation(i, j, k, residual)
    logger.debug(f"Built {g!r}")
    return g


def bracket(g: LieAlgebra, v: Sequence[Fraction], w: Sequence[Fraction]) -> Vector:
    if len(v) != g.dim or len(w) != g.dim:
        raise DimensionMismatch(f"Bracket of vectors of lengths {len(v)}, {len(w)} in dimension {g.dim}")
    out = [ZERO] * g.dim
    for (i, j), vec in g.brackets.items():
        coeff = v[i] * w[j] - v[j] * w[i]
        if coeff:
            for s, c in vec.items():
                out[s] += coeff * c
    return tuple(out)


def derived_subalgebra(g: LieAlgebra) -> Subspace:
    vectors = []
    for vec in g.brackets.values():
        row = [ZERO] * g.dim
        for s, c in vec.items():
            row[s] = c
        vectors.append(row)
    return Subspace.span(vectors, g.dim)


def center(g: LieAlgebra) -> Subspace:
    # x is central iff sum_i x_i C^s_{ic} = 0 for every (c, s)
    rows = []
    for c in range(g.dim):
        for s in range(g.dim):
            row = {}
            for i in range(g.dim):
                coeff = g.structure_vector(i, c).get(s)
                if coeff:
                    row[i] = coeff
            if row:
                rows.append(row)
    return Subspace.span(nullspace_rows(rows, g.dim), g.dim)


def bracket_span(g: LieAlgebra, left: Subspace, right: Subspace) -> Subspace:
    return Subspace.span((bracket(g, u, v) for u in left.basis for v in right.basis), g.dim)


def whole_space(g: LieAlgebra) -> Subspace:
    return Subspace.span((g.basis_vector(i) for i in range(g.dim)), g.dim)


def lower_central_series(g: LieAlgebra) -> List[int]:
    """Dimensions of g, [g,g], [g,[g,g]], ... until the series stabilises."""
    full = whole_space(g)
    term = full
    dims = [term.dim]
    while True:
        term = bracket_span(g, full, term)
        if term.dim == dims[-1]:
            return dims
        dims.append(term.dim)


def derived_series(g: LieAlgebra) -> List[int]:
    term = whole_space(g)
    dims = [term.dim]
    while True:
        term = bracket_span(g, term, term)
        if term.dim == dims[-1]:
            return dims
        dims.append(term.dim)


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1] == 0


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g)[-1] == 0


def nilpotency_step(g: LieAlgebra) -> Optional[int]:
    """Smallest s with g^{s+1} = 0 (1 for abelian algebras), None if g is not nilpotent."""
    dims = lower_central_series(g)
    if dims[-1] != 0:
        return None
    return max(len(dims) - 1, 1)


def _span_of_indices(g: LieAlgebra, indices: Sequence[int]) -> set:
    for i in indices:
        if not 0 <= i < g.dim:
            raise IndexOutOfRange(f"Basis index {i} outside 0..{g.dim - 1}")
    return set(indices)


def is_ideal(g: LieAlgebra, indices: Sequence[int]) -> bool:
    span = _span_of_indices(g, indices)
    return all(set(g.structure_vector(a, i)) <= span for a in range(g.dim) for i in span)


def subalgebra_on_basis(g: LieAlgebra, indices: Sequence[int], labels: Optional[Sequence[str]] = None,
                        name: str = '') -> LieAlgebra:
    """Restriction of g to span{e_i : i in indices}, which must be closed under the bracket."""
    span = _span_of_indices(g, indices)
    position = {old: new for new, old in enumerate(indices)}
    table = {}
    for a, b in combinations(indices, 2):
        vec = g.structure_vector(a, b)
        if not set(vec) <= span:
            raise AlgebraError(f"span of {[g.labels[i] for i in indices]} is not a subalgebra")
        if vec:
            table[(position[a], position[b])] = {position[s]: c for s, c in vec.items()}
    new_labels = labels or [g.labels[i] for i in indices]
    return build_lie_algebra(len(indices), new_labels, table, name)


def quotient_by_basis(g: LieAlgebra, indices: Sequence[int], labels: Optional[Sequence[str]] = None,
                      name: str = '') -> LieAlgebra:
    """g / span{e_i : i in indices}; the span must be an ideal. Remaining basis order is kept."""
    if not is_ideal(g, indices):
        raise AlgebraError(f"span of {[g.labels[i] for i in indices]} is not an ideal")
    dropped = set(indices)
    kept = [i for i in range(g.dim) if i not in dropped]
    position = {old: new for new, old in enumerate(kept)}
    table = {}
    for a, b in combinations(kept, 2):
        vec = {position[s]: c for s, c in g.structure_vector(a, b).items() if s in position}
        if vec:
            table[(position[a], position[b])] = vec
    new_labels = labels or [g.labels[i] for i in kept]
    return build_lie_algebra(len(kept), new_labels, table, name)


# ---------------------------------------------------------------- bilinear forms and endomorphisms

def _square(rows: Sequence[Sequence[ScalarLike]]) -> Matrix:
    n = len(rows)
    out = []
    for r in rows:
        if len(r) != n:
            raise DimensionMismatch(f"Matrix row of length {len(r)} in a {n}x{n} matrix")
        out.append(tuple(parse_scalar(x) for x in r))
    return tuple(out)


@dataclass(frozen=True)
class BilinearForm:
    gram: Matrix
    symmetric: bool = True

    def __post_init__(self):
        gram = _square(self.gram)
        object.__setattr__(self, 'gram', gram)
        n = len(gram)
        for i in range(n):
            for j in range(i, n):
                if self.symmetric and gram[i][j] != gram[j][i]:
                    raise AlgebraError(f"Gram matrix flagged symmetric but entry ({i}, {j}) differs from ({j}, {i})")
                if not self.symmetric and gram[i][j] != -gram[j][i]:
                    raise AlgebraError(f"Antisymmetric form has entries ({i}, {j}) and ({j}, {i}) that do not cancel")

    @classmethod
    def from_pairs(cls, dim: int, pairs: Mapping[Tuple[int, int], ScalarLike], symmetric: bool = True) -> 'BilinearForm':
        """Fill the Gram matrix from (i, j) -> value, mirroring (anti)symmetrically."""
        gram = [[ZERO] * dim for _ in range(dim)]
        for (i, j), value in pairs.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise IndexOutOfRange(f"Form entry ({i}, {j}) outside 0..{dim - 1}")
            x = parse_scalar(value)
            gram[i][j] = x
            gram[j][i] = x if symmetric else -x
        return cls(tuple(tuple(r) for r in gram), symmetric)

    @classmethod
    def identity(cls, dim: int) -> 'BilinearForm':
        return cls(tuple(unit_vector(dim, i) for i in range(dim)), True)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def value(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return sum((x[i] * self.gram[i][j] * y[j] for i in range(self.dim) if x[i]
                    for j in range(self.dim) if y[j] and self.gram[i][j]), ZERO)

    @cached_property
    def determinant(self) -> Fraction:
        if self.dim == 0:
            return ONE
        dense = [[to_qq(x) for x in row] for row in self.gram]
        return from_qq(DomainMatrix(dense, (self.dim, self.dim), QQ).det())

    def is_nondegenerate(self) -> bool:
        return self.determinant != 0

    @cached_property
    def inverse(self) -> Matrix:
        """Inverse Gram matrix; its (i, j) entry is B(Y_i, Y_j) for B(Y_i, .) = i-th dual covector."""
        if not self.is_nondegenerate():
            raise DegenerateForm("Bilinear form is degenerate")
        if self.dim == 0:
            return ()
        dense = [[to_qq(x) for x in row] for row in self.gram]
        inv = DomainMatrix(dense, (self.dim, self.dim), QQ).inv().to_list()
        return tuple(tuple(from_qq(x) for x in row) for row in inv)


@dataclass(frozen=True)
class LinearEndo:
    matrix: Matrix

    @classmethod
    def zero(cls, dim: int) -> 'LinearEndo':
        return cls(tuple(zero_vector(dim) for _ in range(dim)))

    @classmethod
    def from_flat(cls, flat: Sequence[Fraction], dim: int) -> 'LinearEndo':
        if len(flat) != dim * dim:
            raise DimensionMismatch(f"Flat endomorphism of length {len(flat)} for dimension {dim}")
        return cls(tuple(tuple(flat[r * dim:(r + 1) * dim]) for r in range(dim)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> 'LinearEndo':
        return cls(_square(rows))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def flatten(self) -> Vector:
        return tuple(x for row in self.matrix for x in row)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.dim:
            raise DimensionMismatch(f"Vector of length {len(v)} for an endomorphism of dimension {self.dim}")
        return tuple(sum((row[c] * v[c] for c in range(self.dim) if v[c]), ZERO) for row in self.matrix)

    def compose(self, other: 'LinearEndo') -> 'LinearEndo':
        """self o other."""
        n = self.dim
        if other.dim != n:
            raise DimensionMismatch(f"Cannot compose endomorphisms of dimensions {n} and {other.dim}")
        out = [[sum((self.matrix[r][k] * other.matrix[k][c] for k in range(n) if self.matrix[r][k]), ZERO)
                for c in range(n)] for r in range(n)]
        return LinearEndo(tuple(tuple(r) for r in out))

    def __add__(self, other: 'LinearEndo') -> 'LinearEndo':
        return LinearEndo(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __sub__(self, other: 'LinearEndo') -> 'LinearEndo':
        return LinearEndo(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def scale(self, c: Fraction) -> 'LinearEndo':
        return LinearEndo(tuple(tuple(c * a for a in r) for r in self.matrix))

    def transpose(self) -> 'LinearEndo':
        return LinearEndo(tuple(zip(*self.matrix)))

    def is_zero(self) -> bool:
        return not any(x for row in self.matrix for x in row)


def commutator(d1: LinearEndo, d2: LinearEndo) -> LinearEndo:
    return d1.compose(d2) - d2.compose(d1)


# ---------------------------------------------------------------- forms on algebras

def _require_dims(g: LieAlgebra, *forms: BilinearForm) -> None:
    for form in forms:
        if form.dim != g.dim:
            raise DimensionMismatch(f"Form of dimension {form.dim} on an algebra of dimension {g.dim}")


def is_invariant_form(g: LieAlgebra, B: BilinearForm) -> bool:
    """B([X,Y],Z) == B(X,[Y,Z]) on every basis triple."""
    _require_dims(g, B)
    n = g.dim
    for a in range(n):
        for b in range(n):
            ab = g.structure_vector(a, b)
            for c in range(n):
                left = sum((coeff * B.gram[s][c] for s, coeff in ab.items()), ZERO)
                right = sum((B.gram[a][s] * coeff for s, coeff in g.structure_vector(b, c).items()), ZERO)
                if left != right:
                    return False
    return True


def require_quadratic(g: LieAlgebra, B: BilinearForm) -> None:
    _require_dims(g, B)
    if not B.symmetric:
        raise FormNotInvariant("A quadratic structure needs a symmetric form")
    if not B.is_nondegenerate():
        raise DegenerateForm(f"Form on {g.name or 'algebra'} is degenerate")
    if not is_invariant_form(g, B):
        raise FormNotInvariant(f"Form on {g.name or 'algebra'} is not invariant")


def _derivation_rows(g: LieAlgebra) -> List[SparseVector]:
    # unknown D_{r,c} (D e_c = sum_r D_{r,c} e_r) sits at flat index r*n + c
    n = g.dim
    rows = []
    for a, b in combinations(range(n), 2):
        ab = g.structure_vector(a, b)
        for s in range(n):
            row: SparseVector = {}
            for t, coeff in ab.items():
                row[s * n + t] = row.get(s * n + t, ZERO) + coeff
            for r in range(n):
                c1 = g.structure_vector(r, b).get(s)
                if c1:
                    row[r * n + a] = row.get(r * n + a, ZERO) - c1
                c2 = g.structure_vector(a, r).get(s)
                if c2:
                    row[r * n + b] = row.get(r * n + b, ZERO) - c2
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return rows


def _skew_rows(B: BilinearForm) -> List[SparseVector]:
    n = B.dim
    rows = []
    for a in range(n):
        for b in range(a, n):
            row: SparseVector = {}
            for r in range(n):
                if B.gram[r][b]:
                    row[r * n + a] = row.get(r * n + a, ZERO) + B.gram[r][b]
                if B.gram[a][r]:
                    row[r * n + b] = row.get(r * n + b, ZERO) + B.gram[a][r]
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return rows


@exception_handler
def derivation_space(g: LieAlgebra) -> Subspace:
    """All D with D[X,Y] = [DX,Y] + [X,DY], as flattened dim x dim matrices in echelon form."""
    n2 = g.dim * g.dim
    basis = nullspace_rows(_derivation_rows(g), n2)
    space = Subspace.span(basis, n2)
    logger.debug(f"Der({g.name or g.dim}) has dimension {space.dim}")
    return space


@exception_handler
def skew_derivation_space(g: LieAlgebra, B: BilinearForm) -> Subspace:
    require_quadratic(g, B)
    n2 = g.dim * g.dim
    basis = nullspace_rows(_derivation_rows(g) + _skew_rows(B), n2)
    space = Subspace.span(basis, n2)
    logger.debug(f"Der_a({g.name or g.dim}) has dimension {space.dim}")
    return space


def inner_derivations(g: LieAlgebra) -> Subspace:
    return Subspace.span((g.ad_matrix(g.basis_vector(i)).flatten() for i in range(g.dim)), g.dim * g.dim)


def is_derivation(g: LieAlgebra, D: LinearEndo) -> bool:
    for a, b in combinations(range(g.dim), 2):
        ea, eb = g.basis_vector(a), g.basis_vector(b)
        left = D.apply(bracket(g, ea, eb))
        right = tuple(x + y for x, y in zip(bracket(g, D.apply(ea), eb), bracket(g, ea, D.apply(eb))))
        if left != right:
            return False
    return True


def is_skew(B: BilinearForm, D: LinearEndo) -> bool:
    n = B.dim
    for a in range(n):
        for b in range(a, n):
            da, db = D.apply(unit_vector(n, a)), D.apply(unit_vector(n, b))
            if B.value(da, unit_vector(n, b)) + B.value(unit_vector(n, a), db) != 0:
                return False
    return True


def skew_derivation_to_two_form(g: LieAlgebra, B: BilinearForm, D: LinearEndo):
    """T(D): the 2-form Omega(X, Y) = B(D X, Y)."""
    from src.exterior import ExteriorForm

    require_quadratic(g, B)
    if D.dim != g.dim:
        raise DimensionMismatch(f"Endomorphism of dimension {D.dim} on an algebra of dimension {g.dim}")
    if not (is_skew(B, D) and is_derivation(g, D)):
        raise NotSkewDerivation("Endomorphism is not a skew-symmetric derivation")
    # (D^T G)_{ab} = B(D e_a, e_b)
    terms = {}
    for a, b in combinations(range(g.dim), 2):
        coeff = sum((D.matrix[r][a] * B.gram[r][b] for r in range(g.dim)), ZERO)
        if coeff:
            terms[(1 << a) | (1 << b)] = coeff
    return ExteriorForm(g.dim, terms)


def two_form_to_skew_derivation(g: LieAlgebra, B: BilinearForm, omega) -> LinearEndo:
    """Inverse of T: D = G^{-1} W^T where W is the Gram matrix of the 2-form."""
    require_quadratic(g, B)
    if omega.dim != g.dim:
        raise DimensionMismatch(f"Form on {omega.dim} covectors for an algebra of dimension {g.dim}")
    if omega.degrees() not in ([], [2]):
        raise NotSkewDerivation("T^{-1} takes a homogeneous 2-form")
    W = omega.gram()
    D = _inverse_times_transpose(B, W)
    if not is_derivation(g, D):
        raise NotSkewDerivation("2-form is not a cocycle, so it is not the image of a derivation")
    return D


def _inverse_times_transpose(B: BilinearForm, W: Matrix) -> LinearEndo:
    n = B.dim
    inv = B.inverse
    return LinearEndo(tuple(
        tuple(sum((inv[r][k] * W[c][k] for k in range(n)), ZERO) for c in range(n))
        for r in range(n)))


# ---------------------------------------------------------------- symplectic structures

def symplectic_cocycle_residual(g: LieAlgebra, omega: BilinearForm) -> Optional[Tuple[int, int, int]]:
    """First basis triple where omega([X,Y],Z) + omega([Y,Z],X) + omega([Z,X],Y) != 0, else None."""
    n = g.dim
    for a, b, c in combinations(range(n), 3):
        total = ZERO
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            total += sum((coeff * omega.gram[s][z] for s, coeff in g.structure_vector(x, y).items()), ZERO)
        if total:
            return (a, b, c)
    return None


def symplectic_check(g: LieAlgebra, B: BilinearForm, omega: BilinearForm) -> bool:
    _require_dims(g, B, omega)
    if omega.symmetric:
        raise NotSymplectic("A symplectic form must be stored with the symmetric flag unset")
    if not omega.is_nondegenerate():
        logger.debug("Symplectic check: omega is degenerate")
        return False
    triple = symplectic_cocycle_residual(g, omega)
    if triple is not None:
        logger.debug(f"Symplectic check: cocycle identity fails on {[g.labels[i] for i in triple]}")
        return False
    return True


@dataclass(frozen=True)
class SymplecticAdDerivation:
    """Matrix of the map ad(X) -> ad(phi^{-1}(i_X omega)) in the basis ad(e_i), i in basis_indices."""
    basis_indices: Tuple[int, ...]
    labels: Tuple[str, ...]
    matrix: Matrix
    determinant: Fraction
    commutator_agreement: str
    derivation: LinearEndo = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis_indices)

    def diagonal(self) -> Optional[Tuple[Fraction, ...]]:
        n = self.dim
        if any(self.matrix[r][c] for r in range(n) for c in range(n) if r != c):
            return None
        return tuple(self.matrix[i][i] for i in range(n))

    def eigenvalue_of(self, label: str) -> Optional[Fraction]:
        diag = self.diagonal()
        key = f"ad({label})"
        if diag is None or key not in self.labels:
            return None
        return diag[self.labels.index(key)]


@exception_handler
def symplectic_ad_derivation(g: LieAlgebra, B: BilinearForm, omega: BilinearForm) -> SymplecticAdDerivation:
    require_quadratic(g, B)
    if not symplectic_check(g, B, omega):
        raise NotSymplectic(f"omega is not a symplectic structure on {g.name or 'algebra'}")
    n = g.dim
    phi_inv_iota = _inverse_times_transpose(B, omega.gram)

    def ad(v: Sequence[Fraction]) -> LinearEndo:
        return g.ad_matrix(v)

    for z in center(g).basis:
        if not ad(phi_inv_iota.apply(z)).is_zero():
            raise WellDefinednessFailure(f"ad(phi^-1(i_z omega)) != 0 for central z = {format_vector(z)}")

    ad_columns = [ad(g.basis_vector(i)).flatten() for i in range(n)]
    columns_as_rows = [{i: ad_columns[i][r] for i in range(n) if ad_columns[i][r]} for r in range(n * n)]
    _, basis_indices = rref_rows(columns_as_rows, n)
    r = len(basis_indices)

    images = [ad(phi_inv_iota.apply(g.basis_vector(p))).flatten() for p in basis_indices]
    augmented = [
        {**{k: ad_columns[p][row] for k, p in enumerate(basis_indices) if ad_columns[p][row]},
         **{r + t: images[t][row] for t in range(r) if images[t][row]}}
        for row in range(n * n)
    ]
    reduced, pivots = rref_rows(augmented, 2 * r)
    if tuple(pivots) != tuple(range(r)):
        raise WellDefinednessFailure("Image of the map leaves ad(g)")
    matrix = tuple(tuple(reduced[i][r + t] for t in range(r)) for i in range(r))

    for p, q in combinations(basis_indices, 2):
        ep, eq = g.basis_vector(p), g.basis_vector(q)
        left = ad(phi_inv_iota.apply(bracket(g, ep, eq)))
        right = commutator(ad(phi_inv_iota.apply(ep)), ad(eq)) + commutator(ad(ep), ad(phi_inv_iota.apply(eq)))
        if left != right:
            raise WellDefinednessFailure(f"Leibniz rule fails on (ad {g.labels[p]}, ad {g.labels[q]})")

    if r:
        det = from_qq(DomainMatrix([[to_qq(x) for x in row] for row in matrix], (r, r), QQ).det())
    else:
        det = ONE
    if det == 0:
        raise WellDefinednessFailure("The induced derivation of ad(g) is not invertible")

    plus = minus = True
    for p in basis_indices:
        ep = g.basis_vector(p)
        image = ad(phi_inv_iota.apply(ep))
        comm = commutator(phi_inv_iota, ad(ep))
        plus = plus and image == comm
        minus = minus and image == comm.scale(-ONE)
    agreement = '[D, ad X]' if plus else ('[ad X, D]' if minus else 'neither')
    if r == 0:
        agreement = 'trivial'
    logger.info(f"Induced derivation on ad({g.name or n}): dim {r}, det {format_scalar(det)}, commutator form {agreement}")

    labels = tuple(f"ad({g.labels[p]})" for p in basis_indices)
    return SymplecticAdDerivation(tuple(basis_indices), labels, matrix, det, agreement, phi_inv_iota)


def matches_structure(g: LieAlgebra, h: LieAlgebra, label_map: Mapping[str, str]) -> bool:
    """True iff sending e_i of g to the basis element of h labelled label_map[label_i] preserves every bracket."""
    if g.dim != h.dim or set(label_map) != set(g.labels) or set(label_map.values()) != set(h.labels):
        return False
    relabelled = {}
    for (a, b), vec in g.labelled_brackets().items():
        x, y, sign = label_map[a], label_map[b], ONE
        if y < x:
            x, y, sign = y, x, -ONE
        relabelled[(x, y)] = {label_map[s]: sign * c for s, c in vec.items()}
    return relabelled == h.labelled_brackets()
