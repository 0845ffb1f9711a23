# src/exterior.py

"""
Exterior algebra of the dual space of a Lie algebra.

A form is a sparse map from bitmasks to Fractions: bit i set means the dual
covector of basis element i is a factor, factors always taken in increasing
index order. Sorting masks numerically gives the colexicographic order used
for every basis of a homogeneous component.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from src.algebra_core import (
    ZERO, BilinearForm, DegenerateForm, DimensionMismatch, IndexOutOfRange, LieAlgebra,
    format_scalar, from_qq, parse_scalar, require_quadratic, to_qq,
)
from src.utils import exception_handler

logger = logging.getLogger(__name__)


def popcount(mask: int) -> int:
    return bin(mask).count('1')


def mask_indices(mask: int) -> Tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


@lru_cache(maxsize=None)
def basis_masks(dim: int, k: int) -> Tuple[int, ...]:
    """Basis monomials of degree k, colexicographic (= numeric mask) order."""
    if k < 0 or k > dim:
        return ()
    return tuple(sorted(indices_mask(c) for c in combinations(range(dim), k)))


@lru_cache(maxsize=None)
def basis_position(dim: int, k: int) -> Dict[int, int]:
    return {mask: pos for pos, mask in enumerate(basis_masks(dim, k))}


def wedge_sign(a: int, b: int) -> int:
    """Sign of reordering (factors of a)(factors of b) into increasing order; 0 if they share a factor."""
    if a & b:
        return 0
    swaps = 0
    rest = b
    while rest:
        low = rest & -rest
        swaps += popcount(a & ~((low << 1) - 1))
        rest ^= low
    return -1 if swaps & 1 else 1


def contraction_sign(mask: int, i: int) -> int:
    """Sign picked up by removing factor i: (-1)^(number of factors before it)."""
    return -1 if popcount(mask & ((1 << i) - 1)) & 1 else 1


@dataclass(frozen=True)
class ExteriorForm:
    dim: int
    terms: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        limit = 1 << self.dim
        clean = {}
        for mask, coeff in self.terms.items():
            if not 0 <= mask < limit:
                raise IndexOutOfRange(f"Monomial {mask:b} uses covectors beyond dimension {self.dim}")
            coeff = Fraction(coeff)
            if coeff:
                clean[mask] = coeff
        object.__setattr__(self, 'terms', clean)

    @classmethod
    def zero(cls, dim: int) -> 'ExteriorForm':
        return cls(dim, {})

    @classmethod
    def scalar(cls, dim: int, value) -> 'ExteriorForm':
        return cls(dim, {0: parse_scalar(value)})

    @classmethod
    def covector(cls, dim: int, i: int) -> 'ExteriorForm':
        if not 0 <= i < dim:
            raise IndexOutOfRange(f"Covector index {i} outside 0..{dim - 1}")
        return cls(dim, {1 << i: Fraction(1)})

    @classmethod
    def from_vector(cls, dim: int, k: int, coordinates: Sequence[Fraction]) -> 'ExteriorForm':
        """Form with the given coordinates in the degree-k monomial basis."""
        masks = basis_masks(dim, k)
        if len(coordinates) != len(masks):
            raise DimensionMismatch(f"{len(coordinates)} coordinates for a degree-{k} space of dimension {len(masks)}")
        return cls(dim, dict(zip(masks, coordinates)))

    @classmethod
    def from_bilinear_form(cls, omega: BilinearForm) -> 'ExteriorForm':
        n = omega.dim
        return cls(n, {(1 << a) | (1 << b): omega.gram[a][b] for a, b in combinations(range(n), 2)})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({popcount(m) for m in self.terms})

    @property
    def degree(self) -> Optional[int]:
        """Degree of a nonzero homogeneous form, else None."""
        degs = self.degrees()
        return degs[0] if len(degs) == 1 else None

    def homogeneous(self, k: int) -> 'ExteriorForm':
        return ExteriorForm(self.dim, {m: c for m, c in self.terms.items() if popcount(m) == k})

    def degree_parts(self) -> Dict[int, 'ExteriorForm']:
        parts: Dict[int, Dict[int, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(popcount(m), {})[m] = c
        return {k: ExteriorForm(self.dim, t) for k, t in sorted(parts.items())}

    def coefficient(self, indices: Sequence[int]) -> Fraction:
        """Coefficient of the wedge of the given covectors, in the given order."""
        mask = 0
        sign = 1
        for i in indices:
            s = wedge_sign(mask, 1 << i)
            if s == 0:
                return ZERO
            sign *= s
            mask |= 1 << i
        return sign * self.terms.get(mask, ZERO)

    def coordinates(self, k: int) -> Tuple[Fraction, ...]:
        return tuple(self.terms.get(m, ZERO) for m in basis_masks(self.dim, k))

    def _check(self, other: 'ExteriorForm') -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"Forms over dual bases of sizes {self.dim} and {other.dim}")

    def __add__(self, other: 'ExteriorForm') -> 'ExteriorForm':
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return ExteriorForm(self.dim, out)

    def __neg__(self) -> 'ExteriorForm':
        return ExteriorForm(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: 'ExteriorForm') -> 'ExteriorForm':
        return self + (-other)

    def scale(self, factor) -> 'ExteriorForm':
        factor = parse_scalar(factor)
        return ExteriorForm(self.dim, {m: factor * c for m, c in self.terms.items()})

    def __rmul__(self, factor) -> 'ExteriorForm':
        return self.scale(factor)

    def __xor__(self, other: 'ExteriorForm') -> 'ExteriorForm':
        return wedge(self, other)

    def evaluate(self, vectors: Sequence[Sequence[Fraction]]) -> Fraction:
        """Value of the degree-k part on k vectors; a monomial evaluates to the determinant of its minors."""
        k = len(vectors)
        for v in vectors:
            if len(v) != self.dim:
                raise DimensionMismatch(f"Vector of length {len(v)} for forms on dimension {self.dim}")
        total = ZERO
        for mask, coeff in self.terms.items():
            if popcount(mask) != k:
                continue
            if k == 0:
                total += coeff
                continue
            idx = mask_indices(mask)
            minor = [[to_qq(Fraction(vectors[col][row])) for col in range(k)] for row in idx]
            total += coeff * from_qq(DomainMatrix(minor, (k, k), QQ).det())
        return total

    def gram(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Antisymmetric Gram matrix of the degree-2 part."""
        n = self.dim
        rows = [[ZERO] * n for _ in range(n)]
        for mask, coeff in self.terms.items():
            if popcount(mask) == 2:
                a, b = mask_indices(mask)
                rows[a][b] = coeff
                rows[b][a] = -coeff
        return tuple(tuple(r) for r in rows)

    def to_string(self, labels: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return '0'
        names = list(labels) if labels is not None else [f"e{i}*" for i in range(self.dim)]
        pieces = []
        for mask in sorted(self.terms, key=lambda m: (popcount(m), m)):
            coeff = self.terms[mask]
            body = '^'.join(names[i] for i in mask_indices(mask)) or '1'
            if coeff == 1 and mask:
                pieces.append(f"+ {body}")
            elif coeff == -1 and mask:
                pieces.append(f"- {body}")
            else:
                sign = '-' if coeff < 0 else '+'
                pieces.append(f"{sign} {format_scalar(abs(coeff))}" + (f"*{body}" if mask else ''))
        text = ' '.join(pieces)
        return text[2:] if text.startswith('+ ') else '-' + text[2:]

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class DualBasisFrame:
    algebra: LieAlgebra

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(f"{label}*" for label in self.algebra.labels)

    def covector(self, label: str) -> ExteriorForm:
        """The dual covector of a basis element, by the element's label (with or without '*')."""
        return ExteriorForm.covector(self.dim, self.algebra.index(label.rstrip('*')))

    def monomial(self, *labels: str) -> ExteriorForm:
        form = ExteriorForm.scalar(self.dim, 1)
        for label in labels:
            form = wedge(form, self.covector(label))
        return form

    def render(self, form: ExteriorForm) -> str:
        return form.to_string(self.labels)


def monomial(frame: DualBasisFrame, *labels: str) -> ExteriorForm:
    return frame.monomial(*labels)


def wedge(a: ExteriorForm, b: ExteriorForm) -> ExteriorForm:
    a._check(b)
    out: Dict[int, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign = wedge_sign(ma, mb)
            if sign:
                m = ma | mb
                out[m] = out.get(m, ZERO) + sign * ca * cb
    return ExteriorForm(a.dim, out)


def wedge_power(a: ExteriorForm, m: int) -> ExteriorForm:
    result = ExteriorForm.scalar(a.dim, 1)
    for _ in range(m):
        result = wedge(result, a)
    return result


def interior(i: int, a: ExteriorForm) -> ExteriorForm:
    """Contraction with the basis vector e_i."""
    out = {}
    bit = 1 << i
    for mask, coeff in a.terms.items():
        if mask & bit:
            out[mask ^ bit] = contraction_sign(mask, i) * coeff
    return ExteriorForm(a.dim, out)


def contraction(x: Sequence[Fraction], a: ExteriorForm) -> ExteriorForm:
    if len(x) != a.dim:
        raise DimensionMismatch(f"Vector of length {len(x)} for forms on dimension {a.dim}")
    result = ExteriorForm.zero(a.dim)
    for i, xi in enumerate(x):
        if xi:
            result = result + interior(i, a).scale(xi)
    return result


def _bracket_rows(B: BilinearForm) -> List[List[Tuple[int, Fraction]]]:
    inv = B.inverse
    return [[(j, inv[i][j]) for j in range(B.dim) if inv[i][j]] for i in range(B.dim)]


def super_poisson(B: BilinearForm, a: ExteriorForm, b: ExteriorForm) -> ExteriorForm:
    """{a, b} = (-1)^(k+1) sum_ij B(Y_i, Y_j) i_{e_i}(a) ^ i_{e_j}(b), slice by slice in the degree k of a."""
    a._check(b)
    if B.dim != a.dim:
        raise DimensionMismatch(f"Form of dimension {B.dim} against forms on dimension {a.dim}")
    if not B.is_nondegenerate():
        raise DegenerateForm("The super Poisson bracket needs a nondegenerate form")
    rows = _bracket_rows(B)
    contracted_b = [interior(j, b) for j in range(b.dim)]
    result = ExteriorForm.zero(a.dim)
    for k, part in a.degree_parts().items():
        if k == 0:
            continue
        sign = 1 if k % 2 else -1
        for i, row in enumerate(rows):
            left = interior(i, part)
            if left.is_zero():
                continue
            for j, g_ij in row:
                if not contracted_b[j].is_zero():
                    result = result + wedge(left, contracted_b[j]).scale(sign * g_ij)
    return result


@exception_handler
def three_form(g: LieAlgebra, B: BilinearForm) -> ExteriorForm:
    """I(X, Y, Z) = B([X, Y], Z) as a degree-3 form."""
    require_quadratic(g, B)
    terms = {}
    for a, b, c in combinations(range(g.dim), 3):
        value = sum((coeff * B.gram[s][c] for s, coeff in g.structure_vector(a, b).items()), ZERO)
        if value:
            terms[(1 << a) | (1 << b) | (1 << c)] = value
    return ExteriorForm(g.dim, terms)


def interior_of_three_form(g: LieAlgebra, B: BilinearForm) -> List[ExteriorForm]:
    """i_{e_i}(I) for every basis element; these span the coboundaries of degree 2."""
    I = three_form(g, B)
    return [interior(i, I) for i in range(g.dim)]
