"""Command-line driver: ``qhol SUBCOMMAND [options] ARGS``.

Exit status is 0 on success, 1 when a property suite fails and 2 for usage,
parse or configuration errors. Errors go to stderr as one line.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .config import SessionConfig, config_from_dict
from .constructions import OreExtension, SmashAlgebra, freeprod_flatten, ug_extension
from .errors import ConfigError, QholError
from .expr import (
    AlgebraContext,
    algebra_for,
    evaluate,
    freeprod_algebra,
    ore_algebra,
    smash_algebra,
)
from .free_series import abelianize, eval_matrices, superpose
from .projection import project_pi, section_kappa
from .qcalculus import weight_wq_method
from .qmatrix import QMatrix
from .seminorms import VARIANTS, NormParams, evaluate_norm
from .serialize import format_coefficient, serialize, to_jsonable
from .suites import SUITES, run_suite
from .words import compact_word, minimizing_words, rewrite_coefficient


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- argument helpers ----------------------------------------------------------------


def _complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _load_config(args, required: bool = True) -> SessionConfig | None:
    if args.config is None:
        if required:
            raise UsageError("this command needs -c/--config")
        return None
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config} is not valid JSON: {exc}") from None
    return config_from_dict(data)


def _free_context(cfg: SessionConfig, n: int | None = None) -> AlgebraContext:
    n = cfg.n if n is None else n
    return algebra_for(SessionConfig(n, "free", max_power=cfg.max_power, max_terms=cfg.max_terms))


def _q_context(cfg: SessionConfig) -> AlgebraContext:
    if cfg.is_free:
        cfg = SessionConfig(cfg.n, "q_polydisk", cfg.q, max_power=cfg.max_power, max_terms=cfg.max_terms)
    return algebra_for(cfg)


def _read(text: str, ctx: AlgebraContext, laurent: bool = False):
    return evaluate(text, algebra=ctx, allow_negative_powers=laurent)


# --- subcommands ---------------------------------------------------------------------
# each returns (text lines, json payload, exit code)


def cmd_mul(args):
    cfg = _load_config(args)
    ctx = algebra_for(cfg)
    if not args.exprs:
        raise UsageError("mul needs at least one expression")
    acc = None
    for e in args.exprs:
        x = _read(e, ctx, cfg.laurent)
        acc = x if acc is None else acc * x
    return _element(acc)


def cmd_normalize(args):
    cfg = _load_config(args)
    x = _read(args.expr, _q_context(cfg), cfg.laurent)
    return _element(x)


def _k(args, cfg):
    if args.k is None:
        raise UsageError("-k k1,k2,... is required")
    k = _int_list(args.k)
    if len(k) != cfg.n:
        raise UsageError(f"-k needs {cfg.n} entries, got {len(k)}")
    if any(x < 0 for x in k):
        raise UsageError("-k entries must be nonnegative")
    return k


def cmd_weight(args):
    cfg = _load_config(args)
    k = _k(args, cfg)
    value, method = weight_wq_method(cfg.q, k, cfg.cap)
    return [repr(value), f"method: {method}"], {"k": list(k), "weight": value, "method": method}, 0


def cmd_minwords(args):
    cfg = _load_config(args)
    k = _k(args, cfg)
    mw = minimizing_words(cfg.q, k, cfg.cap)
    words = sorted(mw.words)
    lines = [f"weight: {mw.weight!r}", f"count: {len(words)}"] + [",".join(map(str, w)) for w in words]
    return lines, {"k": list(k), "weight": mw.weight, "words": [list(w) for w in words]}, 0


def cmd_compact_word(args):
    cfg = _load_config(args)
    k = _k(args, cfg)
    w = compact_word(cfg.q, k, cfg.cap, method=args.method)
    c = rewrite_coefficient(cfg.q, w)
    lines = [",".join(map(str, w)), f"coefficient: {format_coefficient(c)}"]
    return lines, {"k": list(k), "word": list(w), "coefficient": [c.real, c.imag]}, 0


def cmd_pi(args):
    cfg = _load_config(args)
    f = _read(args.expr, _free_context(cfg))
    return _element(project_pi(f, cfg.q))


def cmd_kappa(args):
    cfg = _load_config(args)
    a = _read(args.expr, _q_context(cfg))
    return _element(section_kappa(a, cfg.q, cfg.cap))


def cmd_abelianize(args):
    cfg = _load_config(args)
    return _element(abelianize(_read(args.expr, _free_context(cfg))))


def _ug_context(cfg) -> AlgebraContext:
    ext = ug_extension()
    base = ore_algebra(ext, cfg.max_power, cfg.max_terms)
    return AlgebraContext(
        {"x": None, "y": None},
        base.constant,
        lambda name, i: base.generator("z" if name == "x" else "t", 1),
        cfg.max_power,
        cfg.max_terms,
    )


def cmd_norm(args):
    cfg = _load_config(args)
    v = args.variant
    if v in ("free_entire", "free_polydisk"):
        x = _read(args.expr, _free_context(cfg))
    elif v in ("q_polydisk", "q_polyannulus"):
        laurent = v == "q_polyannulus"
        ccfg = SessionConfig(cfg.n, "q_laurent" if laurent else "q_polydisk", cfg.q,
                             max_power=cfg.max_power, max_terms=cfg.max_terms)
        x = _read(args.expr, algebra_for(ccfg), laurent)
    elif v == "free_product":
        dims = _dims(args, cfg)
        x = _read(args.expr, freeprod_algebra(dims, cfg.max_power, cfg.max_terms))
    else:
        x = _read(args.expr, _ug_context(cfg))
    if v == "free_entire":
        params = NormParams(v, rho=_scalar(args.rho, "rho"))
    elif v == "free_polydisk":
        params = NormParams(v, rho=_vector(args.rho, cfg.n, "rho"), tau=_scalar(args.tau, "tau"))
    elif v == "q_polydisk":
        params = NormParams(v, rho=_vector(args.rho, cfg.n, "rho"), cap=cfg.cap)
    elif v == "q_polyannulus":
        params = NormParams(v, rho=_vector(args.rho, cfg.n, "rho"), tau=_vector(args.tau, cfg.n, "tau"))
    elif v == "free_product":
        params = NormParams(v, rho=_vector(args.rho, len(_dims(args, cfg)), "rho"), tau=_scalar(args.tau, "tau"))
    else:
        if args.n_cutoff is None or args.t is None:
            raise UsageError("ug_envelope needs --n-cutoff and --t")
        params = NormParams(v, n_cutoff=args.n_cutoff, t=args.t)
    value = evaluate_norm(params, x)
    return [repr(value)], {"variant": v, "norm": value}, 0


def _scalar(text, name) -> float:
    if text is None:
        raise UsageError(f"--{name} is required")
    v = _float_list(text)
    if len(v) != 1:
        raise UsageError(f"--{name} takes a single number here")
    return v[0]


def _vector(text, n, name) -> tuple[float, ...]:
    if text is None:
        raise UsageError(f"--{name} is required")
    v = _float_list(text)
    if len(v) == 1:
        v = v * n
    if len(v) != n:
        raise UsageError(f"--{name} needs 1 or {n} entries, got {len(v)}")
    return v


def _dims(args, cfg) -> tuple[int, ...]:
    if args.dims is None:
        return (1,) * cfg.n
    dims = _int_list(args.dims)
    if not dims or any(d < 1 for d in dims):
        raise UsageError("--dims entries must be positive")
    return dims


def _load_matrices(path: str, n: int) -> list[np.ndarray]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, list) or len(data) != n:
        raise ConfigError(f"{path} must hold a list of {n} square matrices")

    def entry(x):
        if isinstance(x, (int, float)) and not isinstance(x, bool):
            return complex(x)
        if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
            return complex(x[0], x[1])
        raise ConfigError(f"bad matrix entry {x!r}")

    out = []
    for m in data:
        if not isinstance(m, list) or not m or any(not isinstance(row, list) for row in m):
            raise ConfigError("each matrix must be a list of rows")
        out.append(np.array([[entry(x) for x in row] for row in m], dtype=complex))
    return out


def _matrix_payload(m: np.ndarray):
    return [[[complex(x).real, complex(x).imag] for x in row] for row in m]


def cmd_eval(args):
    cfg = _load_config(args)
    f = _read(args.expr, _free_context(cfg))
    if args.matrices is None:
        raise UsageError("--matrices FILE is required")
    value = eval_matrices(f, _load_matrices(args.matrices, cfg.n))
    lines = ["  ".join(format_coefficient(x) for x in row) for row in value]
    return lines, {"matrix": _matrix_payload(value)}, 0


def cmd_superpose(args):
    cfg = _load_config(args)
    if not args.inner:
        raise UsageError("superpose needs an outer expression and one inner expression per outer generator")
    g = _read(args.outer, _free_context(cfg, len(args.inner)))
    fs = [_read(e, _free_context(cfg)) for e in args.inner]
    return _element(superpose(g, fs))


def _ore_extension(args, cfg) -> tuple[OreExtension, AlgebraContext]:
    if args.ug:
        return ug_extension(), _ug_context(cfg)
    if args.sigma is None:
        raise UsageError("ore-mul needs --sigma s1,...,sn (diagonal scalings) or --ug")
    scal = [_complex(s) for s in args.sigma.split(",")]
    if len(scal) != cfg.n:
        raise UsageError(f"--sigma needs {cfg.n} scalings")
    ext = OreExtension.diagonal(cfg.q, scal)
    return ext, ore_algebra(ext, cfg.max_power, cfg.max_terms)


def cmd_ore_mul(args):
    cfg = _load_config(args)
    ext, ctx = _ore_extension(args, cfg)
    p, r = _read(args.left, ctx), _read(args.right, ctx)
    prod = p * r
    if args.ug:
        terms = prod.xy_terms()
        items = sorted(terms.items(), key=lambda t: (sum(t[0]), t[0]))
        parts = ["*".join([format_coefficient(c)] + (["x" if i == 1 else f"x^{i}"] if i else [])
                          + (["y" if j == 1 else f"y^{j}"] if j else [])) for (i, j), c in items]
        text = " + ".join(parts) if parts else "0"
        return [text], {"text": text, "terms": [[[i, j], [c.real, c.imag]] for (i, j), c in items]}, 0
    return _element(prod)


def cmd_smash_mul(args):
    cfg = _load_config(args)
    if args.action is None:
        raise UsageError("smash-mul needs --action '[[...], ...]' (one row of scalings per acting generator)")
    try:
        rows = json.loads(args.action)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--action is not JSON: {exc}") from None
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) for r in rows):
        raise UsageError("--action must be a list of rows")
    action = [[complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row] for row in rows]
    b_n = len(action) if args.grading == "multidegree" else (args.b_n or 1)
    alg = SmashAlgebra(cfg.q, QMatrix.ones(b_n), tuple(tuple(r) for r in action), args.grading,
                       cfg.laurent, args.group)
    ctx = smash_algebra(alg, cfg.max_power, cfg.max_terms)
    laurent = cfg.laurent or args.group
    return _element(_read(args.left, ctx, laurent) * _read(args.right, ctx, laurent))


def cmd_freeprod_mul(args):
    cfg = _load_config(args)
    ctx = freeprod_algebra(_dims(args, cfg), cfg.max_power, cfg.max_terms)
    return _element(_read(args.left, ctx) * _read(args.right, ctx))


def cmd_flatten(args):
    cfg = _load_config(args)
    dims = _dims(args, cfg)
    u = _read(args.expr, freeprod_algebra(dims, cfg.max_power, cfg.max_terms))
    return _element(freeprod_flatten(u))


def cmd_check(args):
    cfg = _load_config(args, required=False)
    q = cfg.q if cfg is not None and not cfg.is_free else None
    if args.max_degree is not None and args.max_degree < 0:
        raise UsageError("--max-degree must be nonnegative")
    result = run_suite(args.suite, seed=args.seed, max_degree=args.max_degree, q=q)
    lines = [result.summary()]
    if not result.passed and result.worst is not None:
        lines.append(f"worst instance: {json.dumps(result.to_json()['worst'])}")
    lines += result.notes
    return lines, result.to_json(), 0 if result.passed else 1


def _element(x):
    text = serialize(x)
    return [text], to_jsonable(x), 0


COMMANDS = {
    "mul": cmd_mul,
    "normalize": cmd_normalize,
    "weight": cmd_weight,
    "minwords": cmd_minwords,
    "compact-word": cmd_compact_word,
    "pi": cmd_pi,
    "kappa": cmd_kappa,
    "abelianize": cmd_abelianize,
    "norm": cmd_norm,
    "eval": cmd_eval,
    "superpose": cmd_superpose,
    "ore-mul": cmd_ore_mul,
    "smash-mul": cmd_smash_mul,
    "freeprod-mul": cmd_freeprod_mul,
    "flatten": cmd_flatten,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-c", "--config", metavar="PATH", help="session configuration (JSON)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-degree", type=int, dest="max_degree")
    common.add_argument("-k", help="exponent vector k1,k2,...")
    common.add_argument("--rho", help="radius or comma-separated radii")
    common.add_argument("--tau", help="second radius parameter")

    parser = _Parser(prog="qhol", description="q-deformed holomorphic function algebras on finite support")
    parser.add_argument("--version", action="version", version=f"qhol {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("mul", "multiply expressions left to right in the configured algebra")
    p.add_argument("exprs", nargs="+")
    add("normalize", "ordered normal form of a z-expression").add_argument("expr")
    add("weight", "w_q(k), with the method used")
    add("minwords", "all minimising words W(k)")
    p = add("compact-word", "the chosen compact minimising word for k")
    p.add_argument("--method", choices=("scan", "compactify"), default="scan")
    add("pi", "quotient map from free words (f-generators) to q-normal forms").add_argument("expr")
    add("kappa", "section from q-polynomials back to compact free words").add_argument("expr")
    add("abelianize", "commutative image of a free polynomial").add_argument("expr")
    p = add("norm", "evaluate a norm")
    p.add_argument("variant", choices=VARIANTS)
    p.add_argument("expr")
    p.add_argument("--dims", help="factor dimensions for free_product")
    p.add_argument("--n-cutoff", type=int, dest="n_cutoff")
    p.add_argument("--t", type=float)
    p = add("eval", "evaluate a free polynomial at a tuple of matrices")
    p.add_argument("expr")
    p.add_argument("--matrices", metavar="FILE", help="JSON list of n square matrices")
    p = add("superpose", "substitute inner series into an outer series")
    p.add_argument("outer")
    p.add_argument("inner", nargs="*")
    p = add("ore-mul", "multiply in an Ore extension (z-generators plus t)")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--sigma", help="diagonal scalings s1,...,sn of sigma")
    p.add_argument("--ug", action="store_true", help="use the enveloping algebra with generators x, y")
    p = add("smash-mul", "multiply in a smash product (z acted on, w acting)")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--action", help="JSON rows of scalings, one per generator of the grading monoid")
    p.add_argument("--grading", choices=("multidegree", "total"), default="multidegree")
    p.add_argument("--b-n", type=int, dest="b_n", help="number of w-generators for total grading")
    p.add_argument("--group", action="store_true", help="allow negative powers of w")
    p = add("freeprod-mul", "multiply in a free product of polynomial algebras")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--dims", help="factor dimensions (default: n univariate factors)")
    p = add("flatten", "map a univariate free product onto free words")
    p.add_argument("expr")
    p.add_argument("--dims", help="factor dimensions (default: n univariate factors)")
    p = add("check", "run a named property suite")
    p.add_argument("suite", choices=list(SUITES))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        lines, payload, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (QholError, ValueError, KeyError, OverflowError, ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2
    except RecursionError:
        print("error: input nested too deeply", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(payload, default=_json_default))
    else:
        for line in lines:
            print(line)
    return code


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


if __name__ == "__main__":
    sys.exit(main())
