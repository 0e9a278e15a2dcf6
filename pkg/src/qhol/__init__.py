"""Finitely supported elements of free and q-deformed holomorphic function algebras.

Words, q-commutation rewriting and minimising words live in :mod:`qhol.words`;
q-polynomials in :mod:`qhol.qcalculus`; free polynomials and their matrix
functional calculus in :mod:`qhol.free_series`; norms in :mod:`qhol.seminorms`;
free products, Ore extensions and smash products in :mod:`qhol.constructions`.
"""
__version__ = "0.1.0"

from .config import SessionConfig, config_from_dict, load_config
from .errors import *  # noqa: F401,F403
from .expr import lower_ast, parse_expr
from .free_series import FreeSeries, abelianize, eval_commutative, eval_matrices, fmul, superpose
from .projection import project_pi, section_kappa
from .qcalculus import QSeries, bicharacter, normal_form_word, qmul, weight_wq, weight_wq_method
from .qmatrix import QMatrix, QValidation, validate_qmatrix
from .serialize import deserialize, serialize
from .words import (
    Permutation,
    apply_permutation,
    bc,
    bnc,
    cocycle_lambda,
    compact_word,
    compactify,
    compactify_step,
    cycle_sigma,
    delta,
    is_compact,
    minimizing_words,
    rewrite_coefficient,
    s_count,
)
