# src/formulas.py

"""
Closed-form and recursive Betti counts.

Binomials are total: C(n, k) = 0 whenever k < 0 or k > n. The kernel counts
K(m, k1, k2, n) = dim ker (w -> Omega_n^m ^ w) on
Lambda^k1(alpha_1..alpha_n) (x) Lambda^k2(beta_1..beta_n) come in three flavours:
the exact oracle (a rank computation), the memoized recursion with its boundary
conditions, and the m = 1 closed form.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import List, Sequence, Union

from src.algebra_core import BadParameter
from src.cohomology import DEFAULT_OPTIONS, BettiTable, LinalgOptions, SparseMatrix, rank_exact
from src.exterior import ExteriorForm, basis_masks, basis_position, wedge, wedge_power, wedge_sign
from src.families import make_g4n2, omega_n

logger = logging.getLogger(__name__)

FORMULA_METHODS = ('theorem2', 'cor25', 'pouseele')


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _square(n: int, k: int) -> int:
    return binomial(n, k) ** 2


def pascal_holds(n: int, k: int) -> bool:
    return binomial(n, k - 1) + binomial(n, k) == binomial(n + 1, k)


def vandermonde_holds(n: int, k: int) -> bool:
    return sum(binomial(n, i) * binomial(n, k - i) for i in range(k + 1)) == binomial(2 * n, k)


def _check_degree(k: int, top: int, what: str) -> None:
    if not 0 <= k <= top:
        raise BadParameter(f"{what}: degree {k} outside 0..{top}")


def _check_size(n: int, least: int = 1) -> None:
    if n < least:
        raise BadParameter(f"Size parameter must be >= {least}, got {n}")


# ---------------------------------------------------------------- f and the extension lift

def betti_f_closed(n: int, k: int) -> int:
    _check_size(n)
    _check_degree(k, 2 * n + 1, 'betti_f_closed')
    return _square(n, k // 2)


def betti_f_table(n: int) -> BettiTable:
    return BettiTable(tuple(betti_f_closed(n, k) for k in range(2 * n + 2)), f"f{2 * n + 1}", 'closed', (), 2 * n + 1)


def pouseele_lift(betti_f: Union[BettiTable, Sequence[int]], n: int, k: int) -> int:
    """b_k of a one-dimensional extension of h_{2n+1} acting trivially on its center, from b(f)."""
    b = tuple(betti_f.values if isinstance(betti_f, BettiTable) else betti_f)
    if len(b) != 2 * n + 2:
        raise BadParameter(f"Betti table of f must have {2 * n + 2} entries, got {len(b)}")
    _check_degree(k, 2 * n + 2, 'pouseele_lift')
    if k <= 1:
        return b[k]
    if k <= n:
        return b[k] - b[k - 2]
    if k == n + 1:
        return 2 * (b[n + 1] - b[n - 1])
    if k <= 2 * n:
        return b[k - 1] - b[k + 1]
    return b[k - 1]


def betti_g2n2_pouseele_closed(n: int, k: int) -> int:
    """The lift written out with b_k(f) = C(n, [k/2])^2."""
    _check_size(n)
    _check_degree(k, 2 * n + 2, 'betti_g2n2_pouseele_closed')
    if k <= 1 or k >= 2 * n + 1:
        return 1
    if k <= n:
        return _square(n, k // 2) - _square(n, (k - 2) // 2)
    if k == n + 1:
        return 2 * _square(n, (n + 1) // 2) - 2 * _square(n, (n - 1) // 2)
    return _square(n, (k - 1) // 2) - _square(n, (k + 1) // 2)


# ---------------------------------------------------------------- g_{2n+2}

def betti_g2n2_theorem2(n: int, k: int) -> int:
    _check_size(n)
    _check_degree(k, 2 * n + 2, 'betti_g2n2_theorem2')
    if k % 2 == 0:
        return abs(_square(n, k // 2) - _square(n, (k - 2) // 2))
    if k < n + 1:
        return _square(n, (k - 1) // 2) - _square(n, (k - 3) // 2)
    if k == n + 1:
        return 2 * _square(n, n // 2) - 2 * _square(n, (n + 2) // 2)
    return _square(n, (k - 1) // 2) - _square(n, (k + 1) // 2)


def K_closed_m1(k: int, n: int) -> int:
    """dim ker(w -> Omega_n ^ w) on Lambda^k (x) Lambda^k."""
    if n < 0:
        raise BadParameter(f"n must be non-negative, got {n}")
    _check_degree(k, n, 'K_closed_m1')
    if 2 * k < n:
        return 0
    return _square(n, k) - _square(n, k + 1)


def _kernel_m1(j: int, n: int) -> int:
    # subscripts outside 0..n name the zero space
    return K_closed_m1(j, n) if 0 <= j <= n else 0


def kerdim_partial(n: int, k: int) -> int:
    """dim ker of the degree-k differential of g_{2n+2}."""
    _check_size(n)
    _check_degree(k, 2 * n + 2, 'kerdim_partial')
    mixed = sum(binomial(n, i) * binomial(n + 1, k - 1 - i) for i in range(k))
    if k % 2 == 0:
        j = (k - 2) // 2
        return _square(n, k // 2) + mixed + _kernel_m1(j, n) - _square(n, j)
    return _kernel_m1((k - 1) // 2, n) + mixed


def betti_g2n2_cor25(n: int, k: int) -> int:
    _check_size(n)
    _check_degree(k, 2 * n + 2, 'betti_g2n2_cor25')
    if k % 2 == 0:
        j = (k - 2) // 2
        return _square(n, k // 2) + 2 * _kernel_m1(j, n) - _square(n, j)
    j = (k - 1) // 2
    return _square(n, j) + _kernel_m1(j, n) + _kernel_m1(j - 1, n) - _square(n, j - 1)


def betti_g2n2_table(n: int, method: str) -> BettiTable:
    formula = {
        'theorem2': betti_g2n2_theorem2,
        'cor25': betti_g2n2_cor25,
        'pouseele': lambda n_, k: pouseele_lift(betti_f_table(n_), n_, k),
    }.get(method)
    if formula is None:
        raise BadParameter(f"Unknown formula method {method!r}; expected one of {', '.join(FORMULA_METHODS)}")
    return BettiTable(tuple(formula(n, k) for k in range(2 * n + 3)), f"g{2 * n + 2}", method, (), 2 * n + 2)


# ---------------------------------------------------------------- the kernel counts K

@dataclass(frozen=True)
class KernelQuery:
    m: int
    k1: int
    k2: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise BadParameter(f"n must be non-negative, got {self.n}")


def phi_kernel_oracle(m: int, k1: int, k2: int, n: int, options: LinalgOptions = DEFAULT_OPTIONS) -> int:
    """Exact kernel dimension of w -> Omega_n^m ^ w, from a rank computation."""
    if m < 0 or n < 0 or not (0 <= k1 <= n and 0 <= k2 <= n):
        raise BadParameter(f"Oracle needs m >= 0 and 0 <= k1, k2 <= n, got ({m}, {k1}, {k2}, {n})")
    domain = [a | (b << n) for a in basis_masks(n, k1) for b in basis_masks(n, k2)]
    if m == 0:
        return 0
    targets = [a | (b << n) for a in basis_masks(n, k1 + m) for b in basis_masks(n, k2 + m)]
    if not targets:
        return len(domain)
    position = {mask: i for i, mask in enumerate(targets)}
    power = wedge_power(omega_n(2 * n, range(n), range(n, 2 * n)), m)
    columns = []
    for mask in domain:
        col = {}
        for term, coeff in power.terms.items():
            sign = wedge_sign(term, mask)
            if sign:
                row = position[term | mask]
                col[row] = col.get(row, 0) + sign * coeff
        columns.append(col)
    matrix = SparseMatrix.from_columns(len(targets), columns)
    return len(domain) - rank_exact(matrix, options)


@lru_cache(maxsize=None)
def _k(m: int, k1: int, k2: int, n: int) -> int:
    if m == 0:
        return 0
    if m < 0:
        return -_k(-m, k1 + m, k2 + m, n)
    if k1 < 0 or k2 < 0:
        return 0
    if k1 == 0 and k2 == 0:
        return 1 if m > n else 0
    if (k1, k2) in ((0, 1), (1, 0)):
        return 0 if n > m else n
    if n == 0:
        return 0
    if k1 > n or k2 > n:
        return 0
    return (_k(m + 1, k1 - 1, k2 - 1, n - 1) + _k(m, k1 - 1, k2, n - 1)
            + _k(m, k1, k2 - 1, n - 1) + _k(m - 1, k1, k2, n - 1))


def K_recursive(q: KernelQuery) -> int:
    """Memoized recursion; boundary conditions apply in the order zero power, negative power,
    negative degrees, (0, 0), (0, 1)/(1, 0), n = 0, then the four-term split."""
    return _k(q.m, q.k1, q.k2, q.n)


def lemma27_sum(m: int, k: int, n: int) -> int:
    """K(m, k, k, n) expanded down to n = 0 values."""
    if n < 0:
        raise BadParameter(f"n must be non-negative, got {n}")
    return sum(binomial(n, p) * binomial(n, q) * _k(m + n - p - q, k - n + p, k - n + q, 0)
               for p in range(n + 1) for q in range(n + 1))


# ---------------------------------------------------------------- g_{4n+2}

def h2_g4n2_closed(n: int) -> int:
    """Published count: 8 for n = 1, 5n^2 + n beyond."""
    _check_size(n)
    return 8 if n == 1 else 5 * n * n + n


def _structure_differentials(g, indices) -> List[ExteriorForm]:
    """dz^c = -sum_{a<b} C^c_ab e^a ^ e^b for each c in indices."""
    return [ExteriorForm(g.dim, {(1 << a) | (1 << b): -vec[c] for (a, b), vec in g.brackets.items() if c in vec})
            for c in indices]


def _block_rank(forms: Sequence[ExteriorForm], dim: int, k: int, options: LinalgOptions) -> int:
    position = basis_position(dim, k)
    columns = [{position[mask]: coeff for mask, coeff in form.terms.items()} for form in forms]
    return rank_exact(SparseMatrix.from_columns(len(position), columns), options)


def h2_g4n2_counted(n: int, options: LinalgOptions = DEFAULT_OPTIONS) -> int:
    """dim H^2 of g_{4n+2}, counted block by block.

    With Z = span(X, X_i) the center and V = span(Y, Y_i), Lambda^2 splits into
    Lambda^2 V*, V* (x) Z* and Lambda^2 Z*. Covectors on V are closed, so d vanishes on
    the first block and sends the other two into Lambda^3 V* and V* ^ V* ^ Z*. The
    coboundaries are spanned by the dz.
    """
    _check_size(n)
    g, _ = make_g4n2(n)
    centre, rest = range(2 * n + 1), range(2 * n + 1, g.dim)
    dz = dict(zip(centre, _structure_differentials(g, centre)))

    def covector(i: int) -> ExteriorForm:
        return ExteriorForm.covector(g.dim, i)

    mixed = [wedge(covector(v), dz[c]) for v in rest for c in centre]
    pure = [wedge(dz[a], covector(b)) - wedge(covector(a), dz[b]) for a, b in combinations(centre, 2)]
    closed = binomial(len(rest), 2)
    mixed_kernel = len(mixed) - _block_rank(mixed, g.dim, 3, options)
    pure_kernel = len(pure) - _block_rank(pure, g.dim, 3, options)
    coboundaries = _block_rank(list(dz.values()), g.dim, 2, options)
    logger.debug(f"g{g.dim}: Z2 = {closed} + {mixed_kernel} + {pure_kernel}, B2 = {coboundaries}")
    return closed + mixed_kernel + pure_kernel - coboundaries
