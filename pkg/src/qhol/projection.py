"""The quotient map from free polynomials onto q-polynomials and its compact-word section."""
from __future__ import annotations

from .errors import NegativeExponentInPolydiskMode
from .free_series import FreeSeries
from .qcalculus import QSeries, normal_form_word
from .qmatrix import QMatrix
from .words import DEFAULT_CAP, compact_word, rewrite_coefficient


def project_pi(f: FreeSeries, q: QMatrix) -> QSeries:
    """Send ``zeta_i`` to ``x_i``: each word is rewritten into ordered normal form."""
    if q.n != f.n:
        raise ValueError(f"q matrix has size {q.n}, series has {f.n} generators")
    out: dict[tuple[int, ...], complex] = {}
    for w, c in f.terms.items():
        coef, k = normal_form_word(q, w)
        out[k] = out.get(k, 0) + c * coef
    return QSeries(q, out)


def kappa_term(q: QMatrix, k, cap: int = DEFAULT_CAP) -> tuple[complex, tuple[int, ...]]:
    """``(lam, alpha)`` with ``alpha`` the chosen compact minimizing word and ``x^k = lam * x_alpha``."""
    alpha = compact_word(q, k, cap)
    return rewrite_coefficient(q, alpha), alpha


def section_kappa(a: QSeries, q: QMatrix | None = None, cap: int = DEFAULT_CAP) -> FreeSeries:
    """Linear lift with ``project_pi(section_kappa(a)) == a``, supported on compact words."""
    q = a.q if q is None else q
    if a.laurent:
        raise NegativeExponentInPolydiskMode("the section is defined on polynomial support only")
    out: dict[tuple[int, ...], complex] = {}
    for k, c in a.terms.items():
        lam, alpha = kappa_term(q, k, cap)
        out[alpha] = out.get(alpha, 0) + c * lam
    return FreeSeries(q.n, out)
