"""Exact evaluation of the submultiplicative norm families on finitely supported elements."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BadParams, NegativeExponentInPolydiskMode, NonpositiveRho
from .free_series import FreeSeries
from .projection import section_kappa
from .qcalculus import QSeries, weight_wq
from .qmatrix import QMatrix
from .words import DEFAULT_CAP, s_count

INEQ_RTOL = 1e-9


def _positive_vector(v, n: int, name: str) -> tuple[float, ...]:
    if isinstance(v, (int, float)):
        v = [v] * n
    v = tuple(float(x) for x in v)
    if len(v) != n:
        raise BadParams(f"{name} must have {n} entries, got {len(v)}")
    if any(not x > 0 or math.isnan(x) for x in v):
        raise NonpositiveRho(f"{name} entries must be positive: {v}")
    return v


def _word_radius(rho: Sequence[float], w) -> float:
    out = 1.0
    for a in w:
        out *= rho[a - 1]
    return out


def norm_free_entire(f: FreeSeries, rho: float) -> float:
    """``sum |c_w| rho^|w|``."""
    if not rho > 0:
        raise NonpositiveRho(f"rho must be positive, got {rho}")
    return math.fsum(abs(c) * rho ** len(w) for w, c in f.terms.items())


def norm_free_taylor(f: FreeSeries, rho) -> float:
    """``sum |c_w| rho_w`` with ``rho_w`` the product of the radii along the word."""
    rho = _positive_vector(rho, f.n, "rho")
    return math.fsum(abs(c) * _word_radius(rho, w) for w, c in f.terms.items())


def norm_free_polydisk(f: FreeSeries, rho, tau: float, R=None) -> float:
    """``sum |c_w| rho_w tau^(s(w)+1)``; ``R`` optionally bounds the radii from above."""
    rho = _positive_vector(rho, f.n, "rho")
    if not tau >= 1:
        raise BadParams(f"tau must be >= 1, got {tau}")
    if R is not None:
        if any(not r < big for r, big in zip(rho, R)):
            raise BadParams(f"rho {rho} must lie below the polyradius {tuple(R)}")
    return math.fsum(abs(c) * _word_radius(rho, w) * tau ** (s_count(w) + 1) for w, c in f.terms.items())


def norm_q_polydisk(a: QSeries, rho, cap: int = DEFAULT_CAP) -> float:
    """``sum |c_k| w_q(k) rho^k``."""
    if a.laurent:
        raise NegativeExponentInPolydiskMode("polydisk norms need nonnegative support")
    rho = _positive_vector(rho, a.n, "rho")
    total = []
    for k, c in a.terms.items():
        r = 1.0
        for x, e in zip(rho, k):
            r *= x ** e
        total.append(abs(c) * weight_wq(a.q, k, cap) * r)
    return math.fsum(total)


def annulus_monomial(k, rho, tau) -> float:
    """``rho^{k^-} tau^{k^+}``: the largest modulus of ``z^k`` on the closed polyannulus."""
    out = 1.0
    for e, lo, hi in zip(k, rho, tau):
        out *= hi ** e if e > 0 else lo ** e
    return out


def norm_q_polyannulus(a: QSeries, rho, tau) -> float:
    rho = _positive_vector(rho, a.n, "rho")
    tau = _positive_vector(tau, a.n, "tau")
    if any(not lo < hi for lo, hi in zip(rho, tau)):
        raise BadParams(f"need rho < tau componentwise, got {rho} and {tau}")
    if not a.q.is_unimodular():
        raise BadParams("polyannulus norms are defined for |q_ij| = 1 only")
    return math.fsum(abs(c) * annulus_monomial(k, rho, tau) for k, c in a.terms.items())


def norm_ug(a, n_cutoff: int, t: float) -> float:
    """``sum |c_ij| t^i`` over ``x^i y^j`` terms with ``j <= n_cutoff``.

    ``a`` is a ``{(i, j): c}`` mapping in the ``x^i y^j`` basis, or anything
    with an ``xy_terms()`` method returning one.
    """
    if not t > 0:
        raise BadParams(f"t must be positive, got {t}")
    terms = a.xy_terms() if hasattr(a, "xy_terms") else a
    return math.fsum(abs(c) * t ** i for (i, j), c in terms.items() if j <= n_cutoff)


VARIANTS = ("free_entire", "free_polydisk", "q_polydisk", "q_polyannulus", "free_product", "ug_envelope")


@dataclass
class NormParams:
    """Parameters of one norm in one family; unused fields stay ``None``."""

    variant: str
    rho: object = None
    tau: object = None
    n_cutoff: int | None = None
    t: float | None = None
    cap: int = DEFAULT_CAP
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise BadParams(f"unknown norm variant {self.variant!r}; expected one of {VARIANTS}")


def evaluate_norm(params: NormParams, x) -> float:
    v = params.variant
    if v == "free_entire":
        return norm_free_entire(x, params.rho)
    if v == "free_polydisk":
        return norm_free_polydisk(x, params.rho, params.tau)
    if v == "q_polydisk":
        return norm_q_polydisk(x, params.rho, params.cap)
    if v == "q_polyannulus":
        return norm_q_polyannulus(x, params.rho, params.tau)
    if v == "free_product":
        from .constructions.freeprod import freeprod_norm

        return freeprod_norm(x, params.rho, params.tau)
    if params.n_cutoff is None or params.t is None:
        raise BadParams("ug_envelope needs n_cutoff and t")
    return norm_ug(x, params.n_cutoff, params.t)


def _product(variant: str, f, g):
    if variant == "free_product":
        from .constructions.freeprod import freeprod_mul

        return freeprod_mul(f, g)
    if variant == "ug_envelope":
        from .constructions.ore import ore_mul

        return ore_mul(f, g)
    return f * g


def check_submultiplicative(variant, params: NormParams, f, g, rtol: float = INEQ_RTOL) -> tuple[bool, float]:
    """Return ``(holds, ||fg|| / (||f|| ||g||))``; a zero denominator counts as ratio 0."""
    if isinstance(variant, NormParams):
        variant, params = variant.variant, variant
    if params.variant != variant:
        raise BadParams(f"params are for {params.variant!r}, not {variant!r}")
    nf, ng = evaluate_norm(params, f), evaluate_norm(params, g)
    nfg = evaluate_norm(params, _product(variant, f, g))
    denom = nf * ng
    if denom == 0:
        return nfg == 0, 0.0
    ratio = nfg / denom
    return ratio <= 1 + rtol, ratio


def kappa_bound_sides(a: QSeries, q: QMatrix, rho, tau: float, cap: int = DEFAULT_CAP) -> tuple[float, float]:
    lhs = norm_free_polydisk(section_kappa(a, q, cap), rho, tau)
    rhs = tau ** q.n * norm_q_polydisk(a, rho, cap)
    return lhs, rhs


def check_kappa_bound(a: QSeries, q: QMatrix, rho, tau: float, cap: int = DEFAULT_CAP, atol: float = 1e-9) -> bool:
    """``||kappa(a)||_{rho,tau} <= tau^n ||a||_rho`` up to ``atol``."""
    lhs, rhs = kappa_bound_sides(a, q, rho, tau, cap)
    return lhs <= rhs + atol


def taylor_sides(alpha, rho, tau: float) -> tuple[float, float]:
    """Both sides of the free-polydisk versus Taylor-norm comparison for the word ``alpha``.

    The Taylor side is evaluated at ``(rho_1, tau^2 rho_2, ..., tau^2 rho_n)``.
    """
    rho = tuple(float(x) for x in rho)
    if any(not x > 0 for x in rho):
        raise NonpositiveRho(f"rho entries must be positive: {rho}")
    if not tau >= 1:
        raise BadParams(f"tau must be >= 1, got {tau}")
    stretched = (rho[0],) + tuple(tau * tau * x for x in rho[1:])
    lhs = _word_radius(rho, alpha) * tau ** (s_count(alpha) + 1)
    rhs = tau * _word_radius(stretched, alpha)
    return lhs, rhs


def check_taylor_comparison(alpha, rho, tau: float, R=None, rtol: float = INEQ_RTOL) -> bool:
    """Check the comparison when only the first polyradius ``R_1`` is finite.

    ``R`` (optional) is validated to have that shape and to dominate ``rho``.
    """
    if R is not None:
        R = tuple(float(x) for x in R)
        if any(math.isfinite(x) for x in R[1:]):
            raise BadParams("only the first polyradius may be finite")
        if not rho[0] < R[0]:
            raise BadParams(f"rho_1 = {rho[0]} must be below R_1 = {R[0]}")
    lhs, rhs = taylor_sides(alpha, rho, tau)
    return lhs <= rhs * (1 + rtol)


@dataclass
class EquicontinuityReport:
    mode: str
    holds: bool
    isometric: bool
    max_ratio: float
    ratios: dict = field(default_factory=dict)
    growth: list = field(default_factory=list)
    growth_index: int | None = None

    def first_exceeding(self, bound: float) -> int | None:
        """Smallest ``k`` (1-based) at which the growth sequence exceeds ``bound``."""
        for k, v in enumerate(self.growth, start=1):
            if v > bound:
                return k
        return None


def check_equicontinuity(
    q_scale: Sequence[complex],
    degree_bound: int,
    mode: str = "semigroup",
    rho: float = 0.99,
    r: float = 0.995,
    rtol: float = INEQ_RTOL,
) -> EquicontinuityReport:
    """Test the diagonal maps ``sigma_i(z_i) = z_i / q_i`` against the polydisk norms.

    On monomials ``||sigma(z^k)|| / ||z^k|| = prod |q_i|^{-k_i}`` for every
    polyradius, so the contraction condition holds iff every ``|q_i| >= 1``,
    and the isometric (group) condition iff every ``|q_i| = 1``. When some
    ``|q_i| < 1`` the report carries ``(|q_i|^{-1} rho / r)^k`` for
    ``k = 1..degree_bound``: the ratio ``||sigma(x^k)||_rho / ||x^k||_r`` that
    a continuity constant would have to dominate.
    """
    if mode not in ("semigroup", "group"):
        raise BadParams(f"mode must be 'semigroup' or 'group', got {mode!r}")
    mods = [abs(complex(x)) for x in q_scale]
    if any(m == 0 for m in mods):
        raise BadParams("scalings must be nonzero")
    if not 0 < rho < r:
        raise BadParams(f"need 0 < rho < r, got rho={rho}, r={r}")
    from itertools import product

    ratios = {}
    for k in product(range(degree_bound + 1), repeat=len(mods)):
        if sum(k) > degree_bound:
            continue
        ratio = 1.0
        for m, e in zip(mods, k):
            ratio *= m ** (-e)
        ratios[k] = ratio
    max_ratio = max(ratios.values())
    isometric = all(abs(v - 1) <= rtol for v in ratios.values())
    holds = isometric if mode == "group" else max_ratio <= 1 + rtol
    report = EquicontinuityReport(mode, holds, isometric, max_ratio, ratios)
    worst = min(range(len(mods)), key=lambda i: mods[i])
    if mods[worst] < 1 - rtol:
        base = rho / (mods[worst] * r)
        report.growth = [base ** k for k in range(1, degree_bound + 1)]
        report.growth_index = worst + 1
    return report
