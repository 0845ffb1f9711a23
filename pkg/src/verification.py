# src/verification.py

"""
Verification suites: every closed formula against the brute-force oracle,
plus the structural identities the formulas rest on. Each suite returns a
SuiteReport of CheckResult records; nothing here raises on a failed check.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from typing import Callable, Dict, Iterable, List, Tuple

from tqdm import tqdm

from src.algebra_core import (
    AlgebraError, LinearEndo, Subspace, bracket, center, commutator, derived_subalgebra, inner_derivations, is_ideal,
    is_nilpotent, is_solvable, matches_structure, nilpotency_step, quotient_by_basis, skew_derivation_space,
    skew_derivation_to_two_form, subalgebra_on_basis, symplectic_ad_derivation, symplectic_check,
    two_form_to_skew_derivation,
)
from src.cohomology import (
    DEFAULT_OPTIONS, LinalgOptions, betti_numbers, build_complex, degree2_spaces, differential_agreement,
)
from src.exterior import (
    DualBasisFrame, ExteriorForm, basis_masks, contraction, interior, interior_of_three_form, super_poisson, three_form,
    wedge,
)
from src.families import make_f, make_g2n2, make_g4n2, make_heisenberg, make_jordan, omega_n
from src.formulas import (
    K_closed_m1, K_recursive, KernelQuery, betti_f_closed, betti_f_table, betti_g2n2_cor25,
    betti_g2n2_pouseele_closed, betti_g2n2_theorem2, h2_g4n2_closed, h2_g4n2_counted, kerdim_partial,
    lemma27_sum, pascal_holds, phi_kernel_oracle, pouseele_lift, vandermonde_holds,
)
from src.status_manager import StatusManager

logger = logging.getLogger(__name__)

SUITES = ('differentials', 'formulas', 'kernels', 'symplectic', 'appendix2', 'structure')


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class SuiteBounds:
    max_n: int = 3
    max_m: int = 3
    max_p: int = 4


@dataclass
class SuiteReport:
    suite: str
    results: List[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict:
        return {
            'suite': self.suite,
            'passed': self.passed,
            'checks': len(self.results),
            'failures': [asdict(r) for r in self.failures()],
            'elapsed_seconds': round(self.elapsed, 3),
        }


def _check(name: str, body: Callable[[], Tuple[bool, str]]) -> CheckResult:
    try:
        passed, detail = body()
    except AlgebraError as e:
        return CheckResult(name, False, f"{type(e).__name__}: {e}")
    if not passed:
        logger.warning(f"Check failed: {name}: {detail}")
    return CheckResult(name, passed, detail)


def _progress(cases: Iterable, suite: str) -> Iterable:
    return tqdm(list(cases), desc=suite, disable=None, leave=False)


# ---------------------------------------------------------------- differentials

def _quadratic_instances(bounds: SuiteBounds):
    for n in range(1, bounds.max_n + 1):
        g, B = make_g2n2(n)
        yield g, B
    for p in range(2, bounds.max_p + 1):
        g, B, _ = make_jordan(p)
        yield g, B
    for n in range(1, min(bounds.max_n, 2) + 1):
        yield make_g4n2(n)


def suite_differentials(bounds: SuiteBounds, options: LinalgOptions = DEFAULT_OPTIONS) -> List[CheckResult]:
    results = []
    for g, B in _progress(_quadratic_instances(bounds), 'differentials'):
        def compare(g=g, B=B):
            standard = build_complex(g, 'standard', options=options)
            quadratic = build_complex(g, 'quadratic', B, options=options)
            ranks_s = [standard.rank(k) for k in range(g.dim + 1)]
            ranks_q = [quadratic.rank(k) for k in range(g.dim + 1)]
            agreement = differential_agreement(standard, quadratic)
            kinds = sorted(set(agreement.values()))
            return ranks_s == ranks_q, f"ranks {ranks_s} vs {ranks_q}; entrywise {'/'.join(kinds)}"
        results.append(_check(f"{g.name}: standard and quadratic ranks agree, both square to zero", compare))
    for n in range(1, bounds.max_n + 1):
        for g in (make_heisenberg(n), make_f(n)):
            def euler(g=g):
                table = betti_numbers(g, options=options)
                return table.euler_characteristic() == 0, f"betti {list(table.values)}"
            results.append(_check(f"{g.name}: Euler characteristic vanishes", euler))
    return results


# ---------------------------------------------------------------- formulas

def suite_formulas(bounds: SuiteBounds, options: LinalgOptions = DEFAULT_OPTIONS) -> List[CheckResult]:
    results = []
    for n in _progress(range(1, bounds.max_n + 1), 'formulas'):
        g, B = make_g2n2(n)

        def concordance(g=g, n=n):
            brute = list(betti_numbers(g, options=options).values)
            tables = {
                'theorem2': [betti_g2n2_theorem2(n, k) for k in range(2 * n + 3)],
                'cor25': [betti_g2n2_cor25(n, k) for k in range(2 * n + 3)],
                'pouseele': [pouseele_lift(betti_f_table(n), n, k) for k in range(2 * n + 3)],
                'pouseele_closed': [betti_g2n2_pouseele_closed(n, k) for k in range(2 * n + 3)],
            }
            bad = [name for name, values in tables.items() if values != brute]
            return not bad, f"bruteforce {brute}" + (f"; disagreeing: {', '.join(bad)}" if bad else '')
        results.append(_check(f"{g.name}: formula tables equal brute force", concordance))

        def b2(g=g, n=n):
            b = betti_numbers(g, options=options, max_degree=2)[2]
            return b == n * n - 1, f"b_2 = {b}, n^2 - 1 = {n * n - 1}"
        results.append(_check(f"{g.name}: b_2 = n^2 - 1", b2))

        def kernels(g=g, B=B, n=n):
            cc = build_complex(g, 'quadratic', B, options=options)
            brute = [cc.kernel_dim(k) for k in range(2 * n + 3)]
            closed = [kerdim_partial(n, k) for k in range(2 * n + 3)]
            return brute == closed, f"dim ker {brute} vs {closed}"
        results.append(_check(f"{g.name}: kernel dimensions of the quadratic differential", kernels))

        f = make_f(n)

        def f_table(f=f, n=n):
            brute = list(betti_numbers(f, options=options).values)
            closed = [betti_f_closed(n, k) for k in range(2 * n + 2)]
            return brute == closed, f"bruteforce {brute} vs closed {closed}"
        results.append(_check(f"{f.name}: b_k = C(n, [k/2])^2", f_table))

    def identities():
        bad = [(n, k) for n in range(0, 9) for k in range(0, 2 * n + 2)
               if not (pascal_holds(n, k) and vandermonde_holds(n, k))]
        return not bad, f"failing (n, k): {bad}" if bad else 'n <= 8'
    results.append(_check("Pascal and Vandermonde identities", identities))
    return results


# ---------------------------------------------------------------- kernels

def suite_kernels(bounds: SuiteBounds, options: LinalgOptions = DEFAULT_OPTIONS) -> List[CheckResult]:
    results = []
    queries = [KernelQuery(m, k1, k2, n) for n in range(1, bounds.max_n + 1) for m in range(1, bounds.max_m + 1)
               for k1 in range(n + 1) for k2 in range(n + 1)]
    mismatches, asymmetric = [], []
    for q in _progress(queries, 'kernels'):
        oracle = phi_kernel_oracle(q.m, q.k1, q.k2, q.n, options)
        if K_recursive(q) != oracle:
            mismatches.append((q.m, q.k1, q.k2, q.n, K_recursive(q), oracle))
        if q.k1 < q.k2 and oracle != phi_kernel_oracle(q.m, q.k2, q.k1, q.n, options):
            asymmetric.append((q.m, q.k1, q.k2, q.n))
    results.append(CheckResult("K recursion equals the oracle", not mismatches,
                               f"{len(queries)} queries" + (f"; (m, k1, k2, n, K, oracle): {mismatches}" if mismatches else '')))
    results.append(CheckResult("K symmetric in k1, k2", not asymmetric, str(asymmetric) if asymmetric else ''))

    closed_top = bounds.max_n + 2
    bad = [(k, n) for n in range(0, closed_top + 1) for k in range(n + 1)
           if K_closed_m1(k, n) != phi_kernel_oracle(1, k, k, n, options)]
    results.append(CheckResult(f"K(1, k, k, n) closed form, n <= {closed_top}", not bad, str(bad) if bad else ''))

    bad = [(m, k, n) for m in (1, 2) for n in range(0, bounds.max_n + 1) for k in range(n + 1)
           if lemma27_sum(m, k, n) != K_recursive(KernelQuery(m, k, k, n))]
    results.append(CheckResult("Double-sum expansion equals the recursion", not bad, str(bad) if bad else ''))
    for r in results:
        if not r.passed:
            logger.warning(f"Check failed: {r.name}: {r.detail}")
    return results


# ---------------------------------------------------------------- symplectic

def _expected_eigenvalue(label: str) -> int:
    # ad(X_i) -> i, ad(Y_0) -> -1, ad(Y_i) -> -i
    name = label[3:-1]
    index = int(name[1:])
    if name[0] == 'X':
        return index
    return -1 if index == 0 else -index


def suite_symplectic(bounds: SuiteBounds, options: LinalgOptions = DEFAULT_OPTIONS) -> List[CheckResult]:
    results = []
    for p in _progress(range(2, bounds.max_p + 1), 'symplectic'):
        g, B, omega = make_jordan(p)

        def derivation(g=g, B=B, omega=omega):
            if not symplectic_check(g, B, omega):
                return False, "omega fails the symplectic check"
            record = symplectic_ad_derivation(g, B, omega)
            diagonal = record.diagonal()
            expected = tuple(_expected_eigenvalue(label) for label in record.labels)
            eigen = ', '.join(f"{label} -> {value}" for label, value in zip(record.labels, diagonal or ()))
            as_form = ExteriorForm.from_bilinear_form(omega)
            closed = build_complex(g, 'standard', degrees=(2,), options=options).apply(as_form).is_zero()
            recovered = skew_derivation_to_two_form(g, B, record.derivation) == as_form
            return (diagonal == expected and record.determinant != 0 and closed and recovered,
                    f"{eigen}; det {record.determinant}; commutator form {record.commutator_agreement}; "
                    f"omega closed {closed}, T(D) = omega {recovered}")
        results.append(_check(f"{g.name}: invertible derivation on ad(g) with the expected eigenvalues", derivation))

    for g, B in _progress(_quadratic_instances(bounds), 'h2-vs-derivations'):
        def quotient(g=g, B=B):
            der_a = skew_derivation_space(g, B).dim
            inner = inner_derivations(g).dim
            h2 = degree2_spaces(g, B, options).h2
            return der_a - inner == h2, f"dim Der_a {der_a} - dim ad {inner} vs dim H2 {h2}"
        results.append(_check(f"{g.name}: H2 = skew derivations / inner derivations", quotient))

    for g, B in [make_g2n2(1), make_g2n2(2), make_jordan(2)[:2]]:
        def morphism(g=g, B=B):
            space = skew_derivation_space(g, B)
            basis = [LinearEndo.from_flat(v, g.dim) for v in space.basis]
            for D1, D2 in combinations(basis, 2):
                lhs = skew_derivation_to_two_form(g, B, commutator(D1, D2))
                rhs = super_poisson(B, skew_derivation_to_two_form(g, B, D2), skew_derivation_to_two_form(g, B, D1))
                if lhs != rhs:
                    return False, "T([D, D']) != {T(D'), T(D)}"
            return True, f"{len(basis)} basis derivations"
        results.append(_check(f"{g.name}: derivations to 2-forms respect brackets", morphism))

        def inverse(g=g, B=B):
            space = skew_derivation_space(g, B)
            basis = [LinearEndo.from_flat(v, g.dim) for v in space.basis]
            bad = [i for i, D in enumerate(basis)
                   if two_form_to_skew_derivation(g, B, skew_derivation_to_two_form(g, B, D)) != D]
            return not bad, f"{len(basis)} basis derivations" + (f"; not recovered: {bad}" if bad else '')
        results.append(_check(f"{g.name}: 2-forms give back their derivations", inverse))
    return results


# ---------------------------------------------------------------- g_{4n+2} bracket table

def g4n2_bracket_identities(n: int) -> List[Tuple[str, ExteriorForm, ExteriorForm]]:
    """The super Poisson brackets of I with the degree-2 monomials of g_{4n+2}."""
    g, B = make_g4n2(n)
    frame = DualBasisFrame(g)
    cubic = three_form(g, B)
    a, b = frame.covector('X'), frame.covector('Y')
    Om = omega_n(g.dim, [g.index(f"Y{2 * i - 1}") for i in range(1, n + 1)],
                 [g.index(f"Y{2 * i}") for i in range(1, n + 1)])

    def al(i):
        return frame.covector(f"X{i}")

    def be(i):
        return frame.covector(f"Y{i}")

    def br(x, y):
        return super_poisson(B, cubic, wedge(x, y))

    def w(*forms):
        return _wedge_all(forms)

    out = [("{I, a^b} = I", br(a, b), cubic)]
    for i in range(1, n + 1):
        odd, even = 2 * i - 1, 2 * i
        out += [
            (f"{{I, b^a{odd}}} = 0", br(b, al(odd)), ExteriorForm.zero(g.dim)),
            (f"{{I, b^a{even}}} = 0", br(b, al(even)), ExteriorForm.zero(g.dim)),
            (f"{{I, a{odd}^b{even}}} = 0", br(al(odd), be(even)), ExteriorForm.zero(g.dim)),
            (f"{{I, a{even}^b{odd}}} = 0", br(al(even), be(odd)), ExteriorForm.zero(g.dim)),
            (f"{{I, a^b{odd}}} = b{odd}^Om", br(a, be(odd)), w(be(odd), Om)),
            (f"{{I, a^b{even}}} = b{even}^Om", br(a, be(even)), w(be(even), Om)),
            (f"{{I, a^a{odd}}}", br(a, al(odd)), w(al(odd), Om) + w(b, be(even), a)),
            (f"{{I, a^a{even}}}", br(a, al(even)), w(al(even), Om) - w(b, be(odd), a)),
        ]
        for j in range(1, n + 1):
            jo, je = 2 * j - 1, 2 * j
            out += [
                (f"{{I, a{odd}^a{je}}}", br(al(odd), al(je)), -w(b, be(even), al(je)) - w(b, be(jo), al(odd))),
                (f"{{I, a{odd}^b{jo}}}", br(al(odd), be(jo)), -w(b, be(even), be(jo))),
                (f"{{I, a{je}^b{even}}}", br(al(je), be(even)), -w(b, be(even), be(jo))),
            ]
            if i != j:
                out += [
                    (f"{{I, a{even}^a{je}}}", br(al(even), al(je)), w(b, be(odd), al(je)) - w(b, be(jo), al(even))),
                    (f"{{I, a{odd}^b{je}}}", br(al(odd), be(je)), -w(b, be(even), be(je))),
                    (f"{{I, a{jo}^b{even}}}", br(al(jo), be(even)), w(b, be(even), be(je))),
                    (f"{{I, a{even}^b{jo}}}", br(al(even), be(jo)), w(b, be(odd), be(jo))),
                    (f"{{I, a{je}^b{odd}}}", br(al(je), be(odd)), -w(b, be(odd), be(jo))),
                ]
    return out


def _wedge_all(forms) -> ExteriorForm:
    result = forms[0]
    for form in forms[1:]:
        result = wedge(result, form)
    return result


def suite_appendix2(bounds: SuiteBounds, options: LinalgOptions = DEFAULT_OPTIONS) -> List[CheckResult]:
    results = []
    for n in _progress(range(1, min(bounds.max_n, 3) + 1), 'appendix2'):
        g, B = make_g4n2(n)

        def h2(g=g, B=B, n=n):
            value = degree2_spaces(g, B, options).h2
            counted = h2_g4n2_counted(n, options)
            published = h2_g4n2_closed(n)
            note = '' if value == published else f"; published count {published} differs"
            return value == counted, f"dim H2 = {value}, block count {counted}{note}"
        results.append(_check(f"{g.name}: dim H2 by cocycle count", h2))

        def form(g=g, B=B, n=n):
            frame = DualBasisFrame(g)
            Om = omega_n(g.dim, [g.index(f"Y{2 * i - 1}") for i in range(1, n + 1)],
                         [g.index(f"Y{2 * i}") for i in range(1, n + 1)])
            cubic = three_form(g, B)
            return cubic == wedge(frame.covector('Y'), Om), frame.render(cubic)
        results.append(_check(f"{g.name}: I = b^Omega", form))

        if n <= 2:
            def table(n=n):
                bad = [name for name, lhs, rhs in g4n2_bracket_identities(n) if lhs != rhs]
                return not bad, f"failing: {bad}" if bad else ''
            results.append(_check(f"{g.name}: bracket table of I", table))
    return results


# ---------------------------------------------------------------- structure

def _g2n2_frame(n: int):
    g, B = make_g2n2(n)
    alphas = [g.index(f"X{i}") for i in range(1, n + 1)]
    betas = [g.index(f"Y{i}") for i in range(1, n + 1)]
    return g, B, alphas, betas


def _monomials(indices: List[int], k: int) -> List[int]:
    return [sum(1 << indices[t] for t in range(len(indices)) if mask >> t & 1) for mask in basis_masks(len(indices), k)]


def _span(forms: List[ExteriorForm], dim: int, k: int) -> Subspace:
    return Subspace.span((f.coordinates(k) for f in forms), len(basis_masks(dim, k)))


def suite_structure(bounds: SuiteBounds, options: LinalgOptions = DEFAULT_OPTIONS) -> List[CheckResult]:
    results = []
    for g, B in _progress(list(_quadratic_instances(bounds)), 'structure'):
        def duality(g=g):
            table = betti_numbers(g, options=options)
            return (table.euler_characteristic() == 0 and table.is_poincare_symmetric(), f"betti {list(table.values)}")
        results.append(_check(f"{g.name}: Euler characteristic and Poincare symmetry", duality))

        def first_betti(g=g):
            b1 = betti_numbers(g, max_degree=1, options=options)[1]
            expected = g.dim - derived_subalgebra(g).dim
            return b1 == expected, f"b_1 = {b1}, dim g - dim [g, g] = {expected}"
        results.append(_check(f"{g.name}: b_1 = dim g - dim [g, g]", first_betti))

        def coboundaries(g=g, B=B):
            spaces = degree2_spaces(g, B, options)
            return (spaces.coboundaries == _span(interior_of_three_form(g, B), g.dim, 2),
                    f"dim B2 = {spaces.coboundaries.dim}")
        results.append(_check(f"{g.name}: B2 is spanned by the i_X I", coboundaries))

    for g, B in _quadratic_instances(SuiteBounds(min(bounds.max_n, 3), bounds.max_m, min(bounds.max_p, 3))):
        def iota(g=g, B=B):
            cubic = three_form(g, B)
            for x, y in combinations(range(g.dim), 2):
                lhs = super_poisson(B, interior(x, cubic), interior(y, cubic))
                rhs = contraction(bracket(g, g.basis_vector(y), g.basis_vector(x)), cubic)
                if lhs != rhs:
                    return False, f"fails on ({g.labels[x]}, {g.labels[y]})"
            return True, ''
        results.append(_check(f"{g.name}: {{i_X I, i_Y I}} = i_[Y,X] I", iota))

    for n in range(1, min(bounds.max_n, 3) + 1):
        g, B, alphas, betas = _g2n2_frame(n)
        Om = omega_n(g.dim, alphas, betas)
        x0, y0 = g.index('X0'), g.index('Y0')

        def scalar_action(g=g, B=B, Om=Om, alphas=alphas, betas=betas, n=n):
            for k, m in product(range(n + 1), repeat=2):
                for ma, mb in product(_monomials(alphas, k), _monomials(betas, m)):
                    mono = ExteriorForm(g.dim, {ma | mb: 1})
                    if super_poisson(B, Om, mono) != mono.scale(k - m):
                        return False, f"fails on degree ({k}, {m})"
            return True, ''
        results.append(_check(f"{g.name}: {{Omega_n, .}} acts by k - m", scalar_action))

        def balanced_spans(g=g, B=B, Om=Om, alphas=alphas, betas=betas, n=n, x0=x0, y0=y0):
            cc = build_complex(g, 'quadratic', B, options=options)
            alpha, beta = ExteriorForm.covector(g.dim, x0), ExteriorForm.covector(g.dim, y0)
            for i in range(n + 1):
                balanced = [ExteriorForm(g.dim, {a | b: 1}) for a in _monomials(alphas, i) for b in _monomials(betas, i)]
                if any(not cc.apply(w).is_zero() for w in balanced):
                    return False, f"d is nonzero on Lambda^{i} (x) Lambda^{i}"
                for j in range(n + 1):
                    if any(not cc.apply(wedge(beta, ExteriorForm(g.dim, {a | b: 1}))).is_zero()
                           for a in _monomials(alphas, i) for b in _monomials(betas, j)):
                        return False, f"d is nonzero on beta ^ Lambda^{i} (x) Lambda^{j}"
                deg = 2 * i
                if _span([cc.apply(wedge(wedge(alpha, beta), w)) for w in balanced], g.dim, deg + 3) != \
                        _span([wedge(wedge(beta, Om), w) for w in balanced], g.dim, deg + 3):
                    return False, f"d(alpha ^ beta ^ Lambda^{i} (x) Lambda^{i}) != beta ^ Omega_n ^ ..."
                if _span([cc.apply(wedge(alpha, w)) for w in balanced], g.dim, deg + 2) != \
                        _span([wedge(Om, w) for w in balanced], g.dim, deg + 2):
                    return False, f"d(alpha ^ Lambda^{i} (x) Lambda^{i}) != Omega_n ^ ..."
            return True, ''
        results.append(_check(f"{g.name}: images of d on the balanced subspaces", balanced_spans))

        def cocycles(g=g, B=B, alphas=alphas, betas=betas, y0=y0):
            beta = ExteriorForm.covector(g.dim, y0)
            named = ([wedge(beta, ExteriorForm.covector(g.dim, i)) for i in alphas + betas]
                     + [ExteriorForm(g.dim, {(1 << a) | (1 << b): 1}) for a in alphas for b in betas])
            spaces = degree2_spaces(g, B, options)
            return spaces.cocycles == _span(named, g.dim, 2), f"dim Z2 = {spaces.cocycles.dim}"
        results.append(_check(f"{g.name}: Z2 = span(b^a_i, b^b_i, a_i^b_j)", cocycles))

        def extension(g=g, n=n):
            ideal = [g.index('X0')] + [g.index(f"X{i}") for i in range(1, n + 1)] + [g.index(f"Y{i}") for i in range(1, n + 1)]
            h = make_heisenberg(n)
            sub = subalgebra_on_basis(g, ideal)
            to_h = {'X0': 'x0', **{f"X{i}": f"x{i}" for i in range(1, n + 1)}, **{f"Y{i}": f"y{i}" for i in range(1, n + 1)}}
            quotient = quotient_by_basis(g, [g.index('X0')])
            to_f = {'Y0': 'y', **{f"X{i}": f"x{i}" for i in range(1, n + 1)}, **{f"Y{i}": f"y{i}" for i in range(1, n + 1)}}
            central = center(g).contains(g.basis_vector(g.index('X0')))
            ok = (is_ideal(g, ideal) and matches_structure(sub, h, to_h) and central
                  and matches_structure(quotient, make_f(n), to_f) and is_solvable(g) and not is_nilpotent(g)
                  and nilpotency_step(h) == 2)
            return ok, 'h_{2n+1} ideal of step 2, X0 central, quotient by X0 is f'
        results.append(_check(f"{g.name}: extension of <Y0> by the Heisenberg algebra", extension))

    for n in range(1, min(bounds.max_n, 3) + 1):
        f = make_f(n)

        def f_blocks(f=f, n=n):
            cc = build_complex(f, 'standard', options=options)
            y = ExteriorForm.covector(f.dim, 0)
            xs = list(range(1, n + 1))
            ys = list(range(n + 1, 2 * n + 1))
            for k in range(1, f.dim):
                for mask in basis_masks(f.dim - 1, k - 1):
                    rest = ExteriorForm(f.dim, {mask << 1: 1})
                    if not cc.apply(wedge(y, rest)).is_zero():
                        return False, f"d(y* ^ .) != 0 in degree {k}"
            for j, l in product(range(n + 1), repeat=2):
                block = [ExteriorForm(f.dim, {a | b: 1}) for a in _monomials(xs, j) for b in _monomials(ys, l)]
                images = [cc.apply(w) for w in block]
                if j == l:
                    if any(not im.is_zero() for im in images):
                        return False, f"d nonzero on the ({j}, {l}) block"
                elif _span(images, f.dim, j + l + 1) != _span([wedge(y, w) for w in block], f.dim, j + l + 1):
                    return False, f"d does not map the ({j}, {l}) block onto y* ^ block"
            return True, ''
        results.append(_check(f"{f.name}: differential on the x*/y* blocks", f_blocks))
    return results


_RUNNERS = {
    'differentials': suite_differentials,
    'formulas': suite_formulas,
    'kernels': suite_kernels,
    'symplectic': suite_symplectic,
    'appendix2': suite_appendix2,
    'structure': suite_structure,
}


def run_suite(suite: str, bounds: SuiteBounds = SuiteBounds(), options: LinalgOptions = DEFAULT_OPTIONS) -> SuiteReport:
    if suite not in _RUNNERS:
        raise AlgebraError(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    StatusManager.update_status(f"Running verification suite {suite}")
    started = time.perf_counter()
    report = SuiteReport(suite, _RUNNERS[suite](bounds, options))
    report.elapsed = time.perf_counter() - started
    logger.info(f"Suite {suite}: {len(report.results)} checks, {len(report.failures())} failures, {report.elapsed:.2f}s")
    return report
