# src/families.py

"""
Constructors for the concrete algebra families.

Basis orders are fixed (signs in every bracket table and form depend on them):

    g2n2        X0..Xn, Y0..Yn
    jordan      X0, X1..Xp, Y0, Y1..Yp
    heisenberg  x0, x1..xn, y1..yn
    f           y, x1..xn, y1..yn
    g4n2        X, X1..X2n, Y, Y1..Y2n
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from src.algebra_core import BadParameter, BilinearForm, LieAlgebra, build_lie_algebra
from src.exterior import ExteriorForm
from src.utils import exception_handler

logger = logging.getLogger(__name__)

FAMILY_IDS = ('g2n2', 'jordan', 'heisenberg', 'f', 'g4n2', 'abelian')

# smallest admissible size parameter per family
MIN_PARAMETER = {'g2n2': 1, 'jordan': 2, 'heisenberg': 1, 'f': 1, 'g4n2': 1, 'abelian': 0}


def _require(family: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < MIN_PARAMETER[family]:
        raise BadParameter(f"{family} needs an integer parameter >= {MIN_PARAMETER[family]}, got {value!r}")


def _pairing(dim: int, pairs) -> BilinearForm:
    return BilinearForm.from_pairs(dim, {pair: 1 for pair in pairs}, symmetric=True)


@exception_handler
def make_abelian(m: int) -> LieAlgebra:
    _require('abelian', m)
    return build_lie_algebra(m, [f"e{i}" for i in range(m)], {}, name=f"abelian{m}")


@exception_handler
def make_g2n2(n: int) -> Tuple[LieAlgebra, BilinearForm]:
    _require('g2n2', n)
    X = list(range(n + 1))
    Y = [n + 1 + i for i in range(n + 1)]
    labels = [f"X{i}" for i in range(n + 1)] + [f"Y{i}" for i in range(n + 1)]
    brackets: Dict[Tuple[int, int], Dict[int, int]] = {}
    for i in range(1, n + 1):
        brackets[(Y[0], X[i])] = {X[i]: 1}
        brackets[(Y[0], Y[i])] = {Y[i]: -1}
        brackets[(X[i], Y[i])] = {X[0]: 1}
    g = build_lie_algebra(2 * n + 2, labels, brackets, name=f"g{2 * n + 2}")
    return g, _pairing(g.dim, ((X[i], Y[i]) for i in range(n + 1)))


def jordan_operator(p: int) -> Dict[int, Dict[int, int]]:
    """C = diag(J_p, -J_p^T) on X1..Xp, Y1..Yp, as sparse images of basis positions 0..2p-1."""
    image: Dict[int, Dict[int, int]] = {}
    for j in range(2, p + 1):
        image[j - 1] = {j - 2: 1}           # C(X_j) = X_{j-1}
    for j in range(1, p):
        image[p + j - 1] = {p + j: -1}      # C(Y_j) = -Y_{j+1}
    return image


@exception_handler
def make_jordan(p: int) -> Tuple[LieAlgebra, BilinearForm, BilinearForm]:
    """Double extension of span{X_i, Y_i} by C; returns (g, B, omega)."""
    _require('jordan', p)
    X = list(range(p + 1))
    Y = [p + 1 + i for i in range(p + 1)]
    labels = [f"X{i}" for i in range(p + 1)] + [f"Y{i}" for i in range(p + 1)]
    V = X[1:] + Y[1:]
    C = jordan_operator(p)

    def inner(u: int, v: int) -> int:
        # B restricted to V pairs X_i with Y_i
        return 1 if (u < p and v == u + p) or (v < p and u == v + p) else 0

    brackets: Dict[Tuple[int, int], Dict[int, int]] = {}
    for u, image in C.items():
        brackets[(Y[0], V[u])] = {V[t]: c for t, c in image.items()}
    for u in range(2 * p):
        for v in range(u + 1, 2 * p):
            value = sum(c * inner(t, v) for t, c in C.get(u, {}).items())
            if value:
                brackets[(V[u], V[v])] = {X[0]: value}
    g = build_lie_algebra(2 * p + 2, labels, brackets, name=f"j{2 * p}")
    B = _pairing(g.dim, ((X[i], Y[i]) for i in range(p + 1)))
    omega = BilinearForm.from_pairs(g.dim, {(X[i], Y[i]): (i if i else 1) for i in range(p + 1)}, symmetric=False)
    return g, B, omega


@exception_handler
def make_heisenberg(n: int) -> LieAlgebra:
    _require('heisenberg', n)
    labels = ['x0'] + [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    brackets = {(i, n + i): {0: 1} for i in range(1, n + 1)}
    return build_lie_algebra(2 * n + 1, labels, brackets, name=f"h{2 * n + 1}")


@exception_handler
def make_f(n: int) -> LieAlgebra:
    _require('f', n)
    labels = ['y'] + [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    brackets = {}
    for i in range(1, n + 1):
        brackets[(0, i)] = {i: 1}
        brackets[(0, n + i)] = {n + i: -1}
    return build_lie_algebra(2 * n + 1, labels, brackets, name=f"f{2 * n + 1}")


@exception_handler
def make_g4n2(n: int) -> Tuple[LieAlgebra, BilinearForm]:
    _require('g4n2', n)
    X, Xs = 0, [None] + list(range(1, 2 * n + 1))
    Y, Ys = 2 * n + 1, [None] + [2 * n + 1 + i for i in range(1, 2 * n + 1)]
    labels = ['X'] + [f"X{i}" for i in range(1, 2 * n + 1)] + ['Y'] + [f"Y{i}" for i in range(1, 2 * n + 1)]
    brackets = {}
    for i in range(1, n + 1):
        brackets[(Y, Ys[2 * i - 1])] = {Xs[2 * i]: 1}
        brackets[(Y, Ys[2 * i])] = {Xs[2 * i - 1]: -1}
        brackets[(Ys[2 * i - 1], Ys[2 * i])] = {X: 1}
    g = build_lie_algebra(4 * n + 2, labels, brackets, name=f"g{4 * n + 2}")
    return g, _pairing(g.dim, [(X, Y)] + [(Xs[i], Ys[i]) for i in range(1, 2 * n + 1)])


@dataclass(frozen=True)
class FamilyInstance:
    algebra: LieAlgebra
    form: Optional[BilinearForm] = None
    omega: Optional[BilinearForm] = None


@dataclass(frozen=True)
class FamilySpec:
    family: str
    parameter: int

    def __post_init__(self):
        if self.family not in FAMILY_IDS:
            raise BadParameter(f"Unknown family {self.family!r}; expected one of {', '.join(FAMILY_IDS)}")
        _require(self.family, self.parameter)

    def build(self) -> FamilyInstance:
        logger.debug(f"Building family {self.family} with parameter {self.parameter}")
        if self.family == 'g2n2':
            return FamilyInstance(*make_g2n2(self.parameter))
        if self.family == 'jordan':
            return FamilyInstance(*make_jordan(self.parameter))
        if self.family == 'heisenberg':
            return FamilyInstance(make_heisenberg(self.parameter))
        if self.family == 'f':
            return FamilyInstance(make_f(self.parameter))
        if self.family == 'g4n2':
            return FamilyInstance(*make_g4n2(self.parameter))
        g = make_abelian(self.parameter)
        return FamilyInstance(g, BilinearForm.identity(g.dim))


def omega_n(dim: int, alphas, betas) -> ExteriorForm:
    """sum_i alpha_i ^ beta_i over paired covector indices."""
    return ExteriorForm(dim, {(1 << a) | (1 << b): (Fraction(1) if a < b else Fraction(-1))
                              for a, b in zip(alphas, betas)})
