"""Spectral parameters, kernel coefficient series, and the Meijer-G layer.

Case discrimination and root bookkeeping are exact (Fractions throughout):
eta0 comes from the admissibility condition, the remaining roots of the
degree-4 Bernstein polynomial B give (alpha2, alpha3) or the primed triple,
and the shifted polynomial Btilde supplies the four b-roots feeding the
Meijer parameters alpha = (eta0-1, eta0), beta_j = eta0 + b_j - 1.

The G-function G^{4,0}_{2,4} (always reducible to G^{3,0}_{1,3}: one beta
equals one alpha in every catalog row) is evaluated by direct Mellin-Barnes
quadrature along a vertical contour strictly right of all numerator-Gamma
poles.  The Gamma products on the contour are precomputed once with mpmath at
elevated working precision, so each G(u) evaluation is a vectorized dot with
oscillatory phases; repeated beta parameters cost nothing because the
integrand stays smooth on the contour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from focklab.bernstein import (
    UniPoly,
    a_ratio,
    big_b_poly,
    btilde_roots,
    case_b_poly,
    case_b_roots,
    pochhammer,
)
from focklab.jordan import CaseDescriptor, build_case
from focklab.report import CheckReport, Stopwatch, q_strings
from focklab.sl2 import eta0_of


class DegenerateSeriesError(ArithmeticError):
    """A Pochhammer denominator parameter is a non-positive integer."""


# -- spectral parameters -------------------------------------------------------


@dataclass(frozen=True)
class SpectralParams:
    case_id: str
    q: tuple[Fraction, ...]
    eta0: Fraction
    kind: str  # "case1" (B(1-eta0) = 0) or "case2"
    roots: tuple[Fraction, ...]  # (alpha2, alpha3) or (a1', a2', a3')
    b_roots: tuple[Fraction, ...]  # roots of Btilde, descending
    lead_constant: int  # A

    @property
    def alphas_prime(self) -> tuple[Fraction, Fraction, Fraction]:
        """Primed triple; in case 1 it is (1 - eta0, alpha2, alpha3)."""
        if self.kind == "case2":
            return self.roots  # type: ignore[return-value]
        return (1 - self.eta0,) + self.roots  # type: ignore[return-value]


def _remove_once(roots: list[Fraction], value: Fraction) -> bool:
    if value in roots:
        roots.remove(value)
        return True
    return False


def spectral_params(case: CaseDescriptor, q) -> SpectralParams:
    q = tuple(Fraction(x) for x in q)
    eta0 = eta0_of(case, q)
    roots = sorted(case_b_roots(case), reverse=True)
    if not _remove_once(roots, Fraction(0)):
        raise AssertionError("B(0) = 0 must hold")
    if _remove_once(roots, 1 - eta0):
        kind = "case1"
    else:
        kind = "case2"
    b = tuple(sorted(btilde_roots(case), reverse=True))
    return SpectralParams(case.label, q, eta0, kind, tuple(roots), b, case.bernstein_lead)


def eta0_from_pin(case: CaseDescriptor, q1) -> Fraction:
    """eta0 as the affine function of the first component (table rows pin q1)."""
    f = case.factors[0]
    return Fraction(q1) / f.mult + Fraction(f.dim, f.mult * f.rank)


def table_row_params(case: CaseDescriptor, q1) -> tuple[Fraction, str, tuple[Fraction, ...]]:
    """(eta0, kind, remaining roots) for a table row pinned by q1.

    Root extraction only needs eta0, so the half-integer q bookkeeping of
    case (4) never enters here.
    """
    eta0 = eta0_from_pin(case, q1)
    roots = sorted(case_b_roots(case), reverse=True)
    _remove_once(roots, Fraction(0))
    if _remove_once(roots, 1 - eta0):
        return eta0, "case1", tuple(roots)
    return eta0, "case2", tuple(roots)


# -- kernel coefficient series ---------------------------------------------------


@dataclass
class KernelSeries:
    case_id: str
    q: tuple[Fraction, ...]
    kind: str  # "OneF2" or "TwoF3"
    numerators: tuple[Fraction, ...]
    denominators: tuple[Fraction, ...]
    coeffs: list[Fraction] = field(default_factory=list)


def c_closed(sp: SpectralParams, m: int) -> Fraction:
    """Closed-form c_m = (eta0+1)_m (1)_m / (prod (eta0+a_j')_m m!)."""
    num = pochhammer(sp.eta0 + 1, m) * pochhammer(Fraction(1), m)
    den = Fraction(math.factorial(m))
    for a in sp.alphas_prime:
        den *= pochhammer(sp.eta0 + a, m)
    if den == 0:
        raise DegenerateSeriesError(f"degenerate Pochhammer at m={m}")
    return num / den


def c_ratio(sp: SpectralParams, m: int) -> Fraction:
    num = m + sp.eta0 + 1
    den = Fraction(1)
    for a in sp.alphas_prime:
        den *= m + sp.eta0 + a
    if den == 0:
        raise DegenerateSeriesError(f"recurrence pole at m={m}")
    return Fraction(num) / den


def c_sequence(case: CaseDescriptor, q, m_max: int = 50) -> KernelSeries:
    """Kernel coefficients, closed form asserted equal to the recurrence."""
    sp = spectral_params(case, q)
    coeffs = [Fraction(1)]
    for m in range(m_max):
        coeffs.append(coeffs[-1] * c_ratio(sp, m))
    for m in range(m_max + 1):
        if c_closed(sp, m) != coeffs[m]:
            raise AssertionError(f"closed form disagrees with recurrence at m={m}")
    if sp.kind == "case1":
        kind = "OneF2"
        nums = (sp.eta0 + 1,)
        dens = tuple(sp.eta0 + a for a in sp.roots)
    else:
        kind = "TwoF3"
        nums = (sp.eta0 + 1, Fraction(1))
        dens = tuple(sp.eta0 + a for a in sp.alphas_prime)
    ks = KernelSeries(case.label, sp.q, kind, nums, dens, coeffs)
    return ks


def kernel_eval(case: CaseDescriptor, q, u, terms: int | None = None, tol: float = 1e-15):
    """Sum of c_m u^m with a rigorous ratio-majorant tail bound; complex u ok.

    The step ratio |c_{m+1} u / c_m| = |u| (m + eta0 + 1) / prod |m + eta0 + a_j'|
    is majorized, for m past every pole, by rho(m) = |u| (m + a) / (m - c)^3
    with a = eta0 + 1 and c the largest parameter offset; rho is decreasing in
    m, so once rho(m) < 1/2 the tail is geometrically bounded by
    |term_m| rho / (1 - rho).
    """
    sp = spectral_params(case, q)
    a = float(sp.eta0 + 1)
    c_off = max(
        [0.0]
        + [float(-(sp.eta0 + aj)) for aj in sp.alphas_prime]
        + [float(-(sp.eta0 + 1))]
    )
    total = 0.0 + 0.0j if isinstance(u, complex) else 0.0
    term = 1.0 + 0.0j if isinstance(u, complex) else 1.0
    abs_u = abs(u)
    m = 0
    budget = terms if terms is not None else 500
    while True:
        total += term
        nxt = term * (complex(c_ratio(sp, m)) * u if isinstance(u, complex)
                      else float(c_ratio(sp, m)) * u)
        if m > c_off + 1:
            rho = abs_u * (m + abs(a)) / (m - c_off) ** 3
            if rho < 0.5 and abs(term) * rho / (1 - rho) <= tol * max(abs(total), 1.0):
                break
        term = nxt
        m += 1
        if m > budget:
            raise ArithmeticError("series term budget exhausted before tail bound met")
    return total


def full_kernel(case: CaseDescriptor, q, xi, xi_prime):
    """K(xi, xi') for rank-1-product cases: series(u) * K_q(xi, xi').

    xi = list of (w_i, z_i) complex pairs; u = prod H_i^{k_i} (w_i conj(w_i'))^{k_i}
    and K_q = prod H_i^{q_i} (w_i conj(w_i'))^{q_i}, H_i = 1 + z_i conj(z_i').
    """
    u = 1.0 + 0.0j
    kq = 1.0 + 0.0j
    for f, qi, (w, z), (wp, zp) in zip(case.factors, q, xi, xi_prime):
        h = 1.0 + z * complex(zp).conjugate()
        base = h * w * complex(wp).conjugate()
        u *= base ** f.mult
        kq *= base ** int(qi)
    return kernel_eval(case, q, u) * kq


# -- root tables ----------------------------------------------------------------


def _f(a, b=1) -> Fraction:
    return Fraction(a, b)


def _case1_rows():
    """(case builder, q1 pin, expected (eta0, 1-eta0, {alpha2, alpha3})).

    Row (10)'s alpha2 is -d1/2 (the printed -2 d1/2 contradicts B's exact
    factorization and the final Meijer table's beta2 = q1 + 3 d1/2 + 1).
    """
    rows = []
    rows.append((build_case(1), 0, lambda c: (_f(1, 4), _f(3, 4), {_f(1, 2), _f(1, 4)})))
    for p in (2, 3, 4, 5):
        rows.append(
            (build_case(2, p=p), 0,
             lambda c, p=p: (_f(p, 4), 1 - _f(p, 4), {_f(1, 2), _f(1, 2) - _f(p, 4)}))
        )
    rows.append((build_case(3), 0, lambda c: (_f(1, 2), _f(1, 2), {_f(0), _f(1, 2)})))
    rows.append((build_case(4), 0, lambda c: (_f(1, 2), _f(1, 2), {_f(0)})))
    rows.append((build_case(5), 0, lambda c: (_f(1), _f(0), {_f(0)})))
    for p in (3, 5):
        rows.append(
            (build_case(6, p=p), 0,
             lambda c, p=p: (_f(p, 2), 1 - _f(p, 2), {_f(1, 2), _f(0)}))
        )
    for p in (2, 4):
        rows.append(
            (build_case(7, p=p), 0,
             lambda c, p=p: (_f(p, 2), 1 - _f(p, 2), {_f(0)}))
        )
    for p1, p2 in ((2, 2), (4, 2), (3, 3)):
        rows.append(
            (build_case(8, p1=p1, p2=p2), 0,
             lambda c, p1=p1, p2=p2: (_f(p1, 2), 1 - _f(p1, 2), {_f(0), 1 - _f(p2, 2)}))
        )
    for variant, d in (("a", 1), ("b", 2), ("c", 4)):
        rows.append(
            (build_case(9, variant=variant), 0,
             lambda c, d=d: (1 + _f(3 * d, 2), -_f(3 * d, 2), {-_f(d), -_f(d, 2)}))
        )
    for variant, d in (("a", 1), ("b", 2), ("c", 4), ("d", 8)):
        rows.append(
            (build_case(10, variant=variant), 0,
             lambda c, d=d: (1 + _f(d), -_f(d), {-_f(d, 2), _f(0)}))
        )
    return rows


def _case2_rows():
    """(case builder, q1 samples, expected (eta0(q1), {a1', a2', a3'})).

    Row (10) carries two corrections: the printed eta0/alpha1' columns are
    transposed, and alpha2' is -d1/2 (same factorization argument as case 1).
    """
    rows = []
    rows.append(
        (build_case(1), (4, 8),
         lambda c, q1: (_f(q1, 4) + _f(1, 4), [_f(3, 4), _f(1, 2), _f(1, 4)]))
    )
    for p in (2, 3, 4):
        rows.append(
            (build_case(2, p=p), (2, 4),
             lambda c, q1, p=p: (_f(q1, 2) + _f(p, 4),
                                 [_f(1, 2) - _f(p, 4), _f(1, 2), 1 - _f(p, 4)]))
        )
    rows.append(
        (build_case(3), (2, 4),
         lambda c, q1: (_f(q1, 2) + _f(1, 2), [_f(1, 2), _f(0), _f(1, 2)]))
    )
    rows.append(
        (build_case(4), (2, 4),
         lambda c, q1: (_f(q1, 2) + _f(1, 2), [_f(0), _f(1, 2), _f(0)]))
    )
    rows.append((build_case(5), (1, 2), lambda c, q1: (_f(q1) + 1, [_f(0)] * 3)))
    for p in (3, 5):
        rows.append(
            (build_case(6, p=p), (1, 2),
             lambda c, q1, p=p: (_f(q1) + _f(p, 2), [_f(0), _f(1, 2), 1 - _f(p, 2)]))
        )
    for p in (2, 4):
        rows.append(
            (build_case(7, p=p), (1, 2),
             lambda c, q1, p=p: (_f(q1) + _f(p, 2), [1 - _f(p, 2), _f(0), _f(0)]))
        )
    for p1, p2 in ((2, 2), (4, 2)):
        rows.append(
            (build_case(8, p1=p1, p2=p2), (1, 2),
             lambda c, q1, p1=p1, p2=p2: (_f(q1) + _f(p1, 2),
                                          [1 - _f(p1, 2), _f(0), 1 - _f(p2, 2)]))
        )
    for variant, d in (("a", 1), ("b", 2), ("c", 4)):
        rows.append(
            (build_case(9, variant=variant), (1, 2),
             lambda c, q1, d=d: (_f(q1) + 1 + _f(3 * d, 2),
                                 [-_f(3 * d, 2), -_f(d), -_f(d, 2)]))
        )
    for variant, d in (("a", 1), ("b", 2), ("c", 4), ("d", 8)):
        rows.append(
            (build_case(10, variant=variant), (1, 2),
             lambda c, q1, d=d: (_f(q1) + 1 + _f(d), [-_f(d), -_f(d, 2), _f(0)]))
        )
    return rows


def roots_table_suite() -> list[CheckReport]:
    """Both root tables, every row, exact comparison."""
    out = []
    for case, q1, expected in _case1_rows():
        sw = Stopwatch()
        eta0, kind, rest = table_row_params(case, q1)
        exp_eta0, exp_one_minus, exp_set = expected(case)
        ok = (
            kind == "case1"
            and eta0 == exp_eta0
            and 1 - eta0 == exp_one_minus
            and set(rest) == exp_set
        )
        out.append(
            CheckReport(
                id=f"kernel.table1.{case.label}"
                + (f".p{case.params}" if case.params else ""),
                case_id=case.label, q=[str(q1)],
                status="pass" if ok else "fail",
                residual="0" if ok else f"got eta0={eta0} roots={rest} kind={kind}",
                details=f"expected eta0={exp_eta0} roots={sorted(exp_set)}",
                elapsed_ms=sw.ms(),
            )
        )
    for case, q1_samples, expected in _case2_rows():
        for q1 in q1_samples:
            sw = Stopwatch()
            eta0, kind, rest = table_row_params(case, q1)
            exp_eta0, exp_list = expected(case, q1)
            ok = (
                kind == "case2"
                and eta0 == exp_eta0
                and sorted(rest) == sorted(exp_list)
            )
            out.append(
                CheckReport(
                    id=f"kernel.table2.{case.label}.q{q1}"
                    + (f".p{case.params}" if case.params else ""),
                    case_id=case.label, q=[str(q1)],
                    status="pass" if ok else "fail",
                    residual="0" if ok else f"got eta0={eta0} roots={rest} kind={kind}",
                    details=f"expected eta0={exp_eta0} roots={sorted(exp_list)}",
                    elapsed_ms=sw.ms(),
                )
            )
    return out


# -- Meijer parameters -----------------------------------------------------------


@dataclass(frozen=True)
class MeijerParams:
    alpha: tuple[Fraction, Fraction]
    beta: tuple[Fraction, Fraction, Fraction, Fraction]

    @property
    def reduced(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Cancel one beta against alpha2 = eta0: G^{4,0}_{2,4} -> G^{3,0}_{1,3}."""
        betas = list(self.beta)
        if self.alpha[1] not in betas:
            raise AssertionError("expected alpha/beta cancellation is missing")
        betas.remove(self.alpha[1])
        return (self.alpha[0],), tuple(betas)


def meijer_params_from_pin(case: CaseDescriptor, q1) -> MeijerParams:
    eta0 = eta0_from_pin(case, q1)
    b = btilde_roots(case)
    beta = tuple(sorted((eta0 + bj - 1 for bj in b), reverse=True))
    return MeijerParams((eta0 - 1, eta0), beta)  # type: ignore[arg-type]


def meijer_params(case: CaseDescriptor, q) -> MeijerParams:
    sp = spectral_params(case, q)
    beta = tuple(sorted((sp.eta0 + bj - 1 for bj in sp.b_roots), reverse=True))
    return MeijerParams((sp.eta0 - 1, sp.eta0), beta)  # type: ignore[arg-type]


def _meijer_rows():
    """Final-table rows: (case, q1 samples, expected (alpha1, alpha2, betas))."""
    rows = []
    rows.append(
        (build_case(1), (0, 4),
         lambda q: (_f(q, 4) - _f(3, 4), _f(q, 4) + _f(1, 4),
                    [_f(q, 4) - _f(1, 2), _f(q, 4) - _f(1, 4), _f(q, 4), _f(q, 4) + _f(1, 4)]))
    )
    for p in (2, 3, 4):
        rows.append(
            (build_case(2, p=p), (0, 2),
             lambda q, p=p: (_f(q, 2) + _f(p, 4) - 1, _f(q, 2) + _f(p, 4),
                             [_f(q, 2) + _f(p, 2) - 1, _f(q, 2) + _f(p, 4) - _f(1, 2),
                              _f(q, 2) + _f(p, 2) - _f(1, 2), _f(q, 2) + _f(p, 4)]))
        )
    rows.append(
        (build_case(3), (0, 2),
         lambda q: (_f(q, 2) - _f(1, 2), _f(q, 2) + _f(1, 2),
                    [_f(q, 2), _f(q, 2), _f(q, 2) + _f(1, 2), _f(q, 2) + _f(1, 2)]))
    )
    rows.append(
        (build_case(4), (0, 2),
         lambda q: (_f(q, 2) - _f(1, 2), _f(q, 2) + _f(1, 2),
                    [_f(q, 2), _f(q, 2) + _f(1, 2), _f(q, 2) + _f(1, 2), _f(q, 2) + _f(1, 2)]))
    )
    rows.append(
        (build_case(5), (0, 3),
         lambda q: (_f(q), _f(q) + 1, [_f(q) + 1] * 4))
    )
    for p in (3, 5):
        rows.append(
            (build_case(6, p=p), (0, 1),
             lambda q, p=p: (_f(q) + _f(p, 2) - 1, _f(q) + _f(p, 2),
                             [_f(q) + p - 1, _f(q) + _f(p, 2),
                              _f(q) + _f(p, 2) - _f(1, 2), _f(q) + _f(p, 2)]))
        )
    for p in (2, 4):
        rows.append(
            (build_case(7, p=p), (0, 1),
             lambda q, p=p: (_f(q) + _f(p, 2) - 1, _f(q) + _f(p, 2),
                             [_f(q) + p - 1] + [_f(q) + _f(p, 2)] * 3))
        )
    for p1, p2 in ((2, 2), (4, 2)):
        rows.append(
            (build_case(8, p1=p1, p2=p2), (0, 1),
             lambda q, p1=p1, p2=p2: (_f(q) + _f(p1, 2) - 1, _f(q) + _f(p1, 2),
                                      [_f(q) + p1 - 1, _f(q) + _f(p1, 2),
                                       _f(q) + _f(p1 + p2, 2) - 1, _f(q) + _f(p1, 2)]))
        )
    for variant, d in (("a", 1), ("b", 2), ("c", 4)):
        rows.append(
            (build_case(9, variant=variant), (0, 1),
             lambda q, d=d: (_f(q) + _f(3 * d, 2), _f(q) + _f(3 * d, 2) + 1,
                             [_f(q) + 3 * d + 1, _f(q) + _f(5 * d, 2) + 1,
                              _f(q) + 2 * d + 1, _f(q) + _f(3 * d, 2) + 1]))
        )
    for variant, d in (("a", 1), ("b", 2), ("c", 4), ("d", 8)):
        rows.append(
            (build_case(10, variant=variant), (0, 1),
             lambda q, d=d: (_f(q) + d, _f(q) + d + 1,
                             [_f(q) + 2 * d + 1, _f(q) + _f(3 * d, 2) + 1,
                              _f(q) + d + 1, _f(q) + d + 1]))
        )
    return rows


def meijer_param_table_suite() -> list[CheckReport]:
    out = []
    for case, q1_samples, expected in _meijer_rows():
        for q1 in q1_samples:
            sw = Stopwatch()
            mp = meijer_params_from_pin(case, q1)
            a1, a2, betas = expected(q1)
            ok = (
                mp.alpha == (a1, a2)
                and sorted(mp.beta) == sorted(betas)
            )
            try:
                mp.reduced
                cancel = True
            except AssertionError:
                cancel = False
            out.append(
                CheckReport(
                    id=f"meijer.params.{case.label}.q{q1}",
                    case_id=case.label, q=[str(q1)],
                    status="pass" if (ok and cancel) else "fail",
                    residual="0" if ok else f"got {mp.alpha} {mp.beta}",
                    details=f"expected alpha=({a1},{a2}) beta={sorted(betas)}; "
                    f"cancellation={'yes' if cancel else 'NO'}",
                    elapsed_ms=sw.ms(),
                )
            )
    return out


def q0_reduction_check(case: CaseDescriptor) -> CheckReport:
    """For all-zero q: Btilde(a) = B(a - eta0) as an exact polynomial identity."""
    sw = Stopwatch()
    q = tuple(Fraction(0) for _ in case.factors)
    eta0 = eta0_of(case, q)  # raises if q=0 is inadmissible for this case
    btilde = UniPoly.const(1)
    for f in case.factors:
        shift = Fraction(f.dim, f.mult * f.rank)
        btilde = btilde * big_b_poly(f).compose_affine(1, -shift)
    shifted = case_b_poly(case).compose_affine(1, -eta0)
    ok = btilde == shifted
    return CheckReport(
        id=f"kernel.q0reduction.{case.label}", case_id=case.label,
        q=q_strings(q), status="pass" if ok else "fail",
        elapsed_ms=sw.ms(),
    )


# -- Meijer-G evaluation -----------------------------------------------------------


class MeijerEvaluator:
    """G^{m,0}-type evaluator via a fixed vertical Mellin-Barnes contour.

    G(u) = (1/2pi) * integral over t of F(c + i t) u^{-c - i t} dt, where
    F(s) = prod Gamma(beta_j + s) / prod Gamma(alpha_j + s) and the contour
    Re s = c sits strictly right of every pole of the numerator Gammas.
    F is precomputed on Gauss-Legendre panels with mpmath at working
    precision, making each evaluation a vectorized sum; super-exponential
    Gamma decay (|F| ~ |t|^w e^{-pi |t|} after the 3-vs-1 cancellation)
    bounds the truncation error.
    """

    def __init__(self, b_params, a_params, precision: int = 12,
                 log_u_budget: float = 26.0):
        self.b = [Fraction(x) for x in b_params]
        self.a = [Fraction(x) for x in a_params]
        self.precision = precision
        min_b = min(self.b)
        self.decay = len(self.b) - len(self.a)
        if self.decay < 1:
            raise ValueError("need more numerator than denominator parameters")
        c_base = float(Fraction(5, 4) - min_b)
        # a second contour well to the right keeps u^{-c} from amplifying
        # roundoff where G is exponentially small (large u); both lines are
        # right of every numerator pole, so they integrate to the same G
        shift = min(8.0 + precision / 2.0, 24.0)
        self.contours = [
            self._build_contour(c_base, log_u_budget),
            self._build_contour(c_base + shift, log_u_budget),
        ]

    def _build_contour(self, c: float, log_u_budget: float):
        import mpmath as mp
        import numpy as np

        omega = float(sum(self.b) - sum(self.a)) + (len(self.b) - len(self.a)) * (
            c - 0.5
        )
        target = (
            (self.precision + 4) * math.log(10)
            + log_u_budget
            + max(omega, 0.0) * 4.0
            + 8.0
        )
        T = max(10.0, 2.0 * target / (self.decay * math.pi))
        panel, deg = 0.5, 12
        xs, ws = np.polynomial.legendre.leggauss(deg)
        nodes, weights = [], []
        t0 = -T
        while t0 < T - 1e-9:
            t1 = min(t0 + panel, T)
            mid, half = (t0 + t1) / 2.0, (t1 - t0) / 2.0
            nodes.extend(mid + half * xs)
            weights.extend(half * ws)
            t0 = t1
        old = mp.mp.dps
        mp.mp.dps = max(20, self.precision + 8)
        try:
            fvals = []
            b_exact = [mp.mpf(x.numerator) / x.denominator for x in self.b]
            a_exact = [mp.mpf(x.numerator) / x.denominator for x in self.a]
            for t in nodes:
                s = mp.mpc(c, t)
                f = mp.mpf(1)
                for bj in b_exact:
                    f *= mp.gamma(bj + s)
                for aj in a_exact:
                    f *= mp.rgamma(aj + s)
                fvals.append(complex(f))
        finally:
            mp.mp.dps = old
        fw = np.array(fvals) * np.array(weights) / (2.0 * math.pi)
        return {
            "c": c,
            "nodes": np.array(nodes),
            "fw": fw,
            "w_abs": float(np.abs(fw).sum()),
            "T": T,
        }

    def _pick(self, u: float):
        return min(self.contours, key=lambda ct: ct["w_abs"] * u ** (-ct["c"]))

    def eval(self, u: float) -> float:
        import numpy as np

        if u <= 0:
            raise ValueError("u must be positive")
        ct = self._pick(u)
        phases = np.exp(-1j * ct["nodes"] * math.log(u))
        return float((ct["fw"] * phases).sum().real) * u ** (-ct["c"])

    def noise_estimate(self, u: float) -> float:
        """Roundoff floor of eval(u) (absolute)."""
        ct = self._pick(u)
        return 1e-15 * ct["w_abs"] * u ** (-ct["c"])

    def eval_many(self, us) -> list[float]:
        return [self.eval(u) for u in us]

    def moment(self, m: int, rel_tol: float = 1e-9) -> float:
        """integral of G(u) u^m du, via s = sqrt(u) and adaptive quadrature."""
        from scipy.integrate import quad

        def f(s):
            if s <= 0:
                return 0.0
            return 2.0 * s ** (2 * m + 1) * self.eval(s * s)

        # in s = sqrt(u): integrand ~ s^power exp(-decay_s * s) with
        # power = 2m + 1 + 2*theta; truncate well past the peak
        theta = (float(sum(self.b) - sum(self.a))) / 2.0
        power = max(2 * m + 1 + 2 * theta, 1.0)
        s_peak = power / 2.0
        s_max = s_peak + 30.0 + 0.9 * power
        val, err = quad(
            f, 0.0, s_max, epsabs=0.0, epsrel=rel_tol, limit=400,
            points=[1.0, max(2.0, s_peak / 2), max(4.0, s_peak), max(8.0, 2 * s_peak)],
        )
        return val

    def moment_closed(self, m: int) -> float:
        """prod Gamma(beta_j + m + 1) / prod Gamma(alpha_j + m + 1), exact route."""
        import mpmath as mp

        old = mp.mp.dps
        mp.mp.dps = max(20, self.precision + 8)
        try:
            out = mp.mpf(1)
            for bj in self.b:
                out *= mp.gamma(mp.mpf(bj.numerator) / bj.denominator + m + 1)
            for aj in self.a:
                out /= mp.gamma(mp.mpf(aj.numerator) / aj.denominator + m + 1)
            return float(out)
        finally:
            mp.mp.dps = old


@lru_cache(maxsize=64)
def _evaluator_cached(b_params: tuple, a_params: tuple, precision: int) -> MeijerEvaluator:
    return MeijerEvaluator(b_params, a_params, precision)


def meijer_eval(params: MeijerParams, u: float, precision: int = 12) -> float:
    """G at u > 0 with the (always present) alpha/beta pair cancelled first."""
    a_red, b_red = params.reduced
    ev = _evaluator_cached(tuple(b_red), tuple(a_red), precision)
    return ev.eval(u)


def moment_check(
    case: CaseDescriptor, q, m_max: int = 5, precision: int = 12,
    rel_tol: float = 1e-6,
) -> list[CheckReport]:
    """Quadrature moments of G vs Gamma-ratio closed forms and (c a)_m.

    Checks, for m = 0..m_max: (i) integral G(u) u^m du equals
    prod Gamma(beta_j+m+1)/prod Gamma(alpha_j+m+1) to rel_tol; (ii) the exact
    Pochhammer identity c_m a_m / a_0 = (eta0)_m (eta0+1)_m / prod (eta0+b_j)_m;
    (iii) the quadrature moments match 1/(C (c a)_m) with C fitted at m = 0.
    """
    sw = Stopwatch()
    sp = spectral_params(case, q)
    params = meijer_params(case, q)
    a_red, b_red = params.reduced
    ev = _evaluator_cached(tuple(b_red), tuple(a_red), precision)
    out = []
    qs = q_strings(q)

    # (ii) exact identity first
    exact_ok = True
    a_rel = Fraction(1)
    for m in range(m_max + 1):
        lhs = c_closed(sp, m) * a_rel  # c_m * a_m / a_0
        rhs_num = pochhammer(sp.eta0, m) * pochhammer(sp.eta0 + 1, m)
        rhs_den = Fraction(1)
        for bj in sp.b_roots:
            rhs_den *= pochhammer(sp.eta0 + bj, m)
        if lhs != rhs_num / rhs_den:
            exact_ok = False
            break
        a_rel *= a_ratio(case, q, m)
    out.append(
        CheckReport(
            id=f"meijer.camoment.{case.label}.{'_'.join(qs)}",
            case_id=case.label, q=qs,
            status="pass" if exact_ok else "fail",
            details="exact (c a)_m Pochhammer identity",
            elapsed_ms=sw.ms(),
        )
    )

    mu0 = None
    for m in range(m_max + 1):
        sw_m = Stopwatch()
        mu = ev.moment(m)
        g = ev.moment_closed(m)
        rel = abs(mu - g) / abs(g)
        if m == 0:
            mu0 = mu
        # (iii): mu_m / mu_0 must equal 1/R_m with R_m the exact ratio above
        r_m = c_closed(sp, m)
        a_rel = Fraction(1)
        for t in range(m):
            a_rel *= a_ratio(case, q, t)
        r_m = r_m * a_rel
        rel_ca = abs(mu / mu0 - 1.0 / float(r_m)) / (1.0 / float(r_m))
        ok = rel <= rel_tol and rel_ca <= rel_tol
        out.append(
            CheckReport(
                id=f"meijer.moment.{case.label}.{'_'.join(qs)}.{m}",
                case_id=case.label, q=qs,
                status="pass" if ok else "fail",
                residual=f"{max(rel, rel_ca):.3e}", tolerance=f"{rel_tol:.0e}",
                details=f"quad={mu:.12e} gamma={g:.12e} C={1.0 / mu0:.6e}",
                elapsed_ms=sw_m.ms(),
            )
        )
    return out


# -- weight and sign scan -----------------------------------------------------------


def weight_eval(case: CaseDescriptor, q, w, z, precision: int = 12, c_const: float = 1.0):
    """p(w, z) = C G(prod |w_i|^2 H_i(z_i)^{k_i}) prod H_i(z_i)^{k_i} (rank-1 H path)."""
    params = meijer_params(case, q)
    u = 1.0
    hprod = 1.0
    for f, wi, zi in zip(case.factors, w, z):
        h = 1.0 + abs(complex(zi)) ** 2
        u *= abs(complex(wi)) ** 2 * h ** f.mult
        hprod *= h ** f.mult
    return c_const * meijer_eval(params, u, precision) * hprod


def sign_scan(
    case: CaseDescriptor, q, u_min: float = 1e-3, u_max: float = 60.0,
    grid: int = 240, precision: int = 12,
) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    """Evaluate G on a log grid; return (samples, sign-change brackets)."""
    params = meijer_params(case, q)
    a_red, b_red = params.reduced
    ev = _evaluator_cached(tuple(b_red), tuple(a_red), precision)
    us = [u_min * (u_max / u_min) ** (i / (grid - 1)) for i in range(grid)]
    vals = [(u, ev.eval(u)) for u in us]
    brackets = []
    for (u0, g0), (u1, g1) in zip(vals, vals[1:]):
        if g0 == 0.0 or g1 == 0.0:
            continue
        if (g0 > 0) != (g1 > 0):
            brackets.append((u0, u1))
    return vals, brackets


def sign_scan_report(case: CaseDescriptor, q, **kw) -> CheckReport:
    sw = Stopwatch()
    vals, brackets = sign_scan(case, q, **kw)
    qs = q_strings(q)
    return CheckReport(
        id=f"weight.sign.{case.label}.{'_'.join(qs)}",
        case_id=case.label, q=qs,
        status="pass" if brackets else "fail",
        residual=f"{len(brackets)} sign changes",
        details=f"first bracket={brackets[0] if brackets else None}",
        elapsed_ms=sw.ms(),
    )


# -- case-(1) Bergman cross-check ------------------------------------------------------


def bergman_norm_case1(
    q: int, components: list[tuple[int, dict[int, complex]]],
    precision: int = 12, rel_tol: float = 1e-4,
) -> CheckReport:
    """Thm-2.5 graded sum vs radial 2D quadrature with the G-weight, case (1).

    components: list of (m, {j: coefficient}) graded pieces (at most 3).
    The quadrature runs on the fiber chart u = |w~|^2 H(z)^4 (w~ = w^4): the
    norm is pi * C * int int S(u, t) P(u) (1+t)^(-4m-2-4q~) ... assembled below
    with P(u) = u^{-q/4} G(u); for q = 0 this is exactly the stated weight.
    Both sides are normalized by the phi = 1 value, which also fits C.
    """
    from scipy.integrate import quad

    sw = Stopwatch()
    if len(components) > 3:
        raise ValueError("at most 3 graded components")
    case = build_case(1)
    qvec = (Fraction(q),)
    sp = spectral_params(case, qvec)
    params = meijer_params(case, qvec)
    a_red, b_red = params.reduced
    ev = _evaluator_cached(tuple(b_red), tuple(a_red), precision)
    q_tilde = Fraction(q, 4)

    def graded_value(comps) -> float:
        total = 0.0
        for m, coeffs in comps:
            n = 4 * m + q
            norm = sum(abs(c) ** 2 / math.comb(n, j) for j, c in coeffs.items())
            total += norm / float(c_closed(sp, m))
        return total

    def quad_value(comps) -> float:
        def inner(u: float) -> float:
            def f_t(t: float) -> float:
                s = 0.0
                for m, coeffs in comps:
                    poly_t = sum(abs(c) ** 2 * t**j for j, c in coeffs.items())
                    expo = -4.0 * (m + float(q_tilde) + 1.0) + 2.0
                    s += u ** (m + float(q_tilde)) * poly_t * (1.0 + t) ** expo
                return s

            val, _ = quad(f_t, 0.0, math.inf, epsabs=1e-13, epsrel=1e-10, limit=200)
            return val

        def f_u(s: float) -> float:
            if s <= 0:
                return 0.0
            u = s * s
            profile = ev.eval(u) * u ** (-float(q_tilde))
            return 2.0 * s * profile * inner(u)

        s_max = max(40.0, (precision + 4) * math.log(10) / 2.0 + 16.0)
        val, _ = quad(f_u, 0.0, s_max, epsabs=0.0, epsrel=1e-9, limit=300,
                      points=[1.0, 4.0, 9.0])
        return math.pi * val

    base = [(0, {0: 1.0})]  # phi = 1
    r_base = quad_value(base)
    g_base = graded_value(base)  # = 1
    c_fit = g_base / r_base
    r_phi = quad_value(components) * c_fit
    g_phi = graded_value(components)
    rel = abs(r_phi - g_phi) / abs(g_phi)
    return CheckReport(
        id="bergman.case1",
        case_id="1", q=[str(q)],
        status="pass" if rel <= rel_tol else "fail",
        residual=f"{rel:.3e}", tolerance=f"{rel_tol:.0e}",
        details=f"graded={g_phi:.10e} quadrature={r_phi:.10e} C={c_fit / math.pi:.6e}",
        elapsed_ms=sw.ms(),
    )
