"""Session configuration: one JSON document per invocation."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

from .errors import ConfigError
from .qmatrix import QMatrix, validate_qmatrix
from .words import DEFAULT_CAP

MODES = ("free", "free_polydisk", "q_polydisk", "q_laurent")


@dataclass(frozen=True)
class SessionConfig:
    n: int
    mode: str = "free"
    q: QMatrix | None = None
    R: tuple[float, ...] | None = None
    r: tuple[float, ...] | None = None
    cap: int = DEFAULT_CAP
    max_power: int = 64
    max_terms: int = 200_000
    tol: float = 1e-9
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.q is None:
            object.__setattr__(self, "q", QMatrix.ones(self.n))

    @property
    def laurent(self) -> bool:
        return self.mode == "q_laurent"

    @property
    def is_free(self) -> bool:
        return self.mode in ("free", "free_polydisk")


def _complex(x, where: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(x[0], x[1])
    raise ConfigError(f"{where}: expected a number or [re, im], got {x!r}")


def _radii(v, n: int, name: str, allow_zero: bool) -> tuple[float, ...]:
    if not isinstance(v, list) or len(v) != n:
        raise ConfigError(f"{name} must be a list of {n} entries")
    out = []
    for x in v:
        if x == "+inf":
            out.append(math.inf)
        elif isinstance(x, (int, float)) and not isinstance(x, bool) and (x > 0 or (allow_zero and x == 0)):
            out.append(float(x))
        else:
            raise ConfigError(f"{name}: bad radius {x!r}")
    return tuple(out)


def config_from_dict(d: dict[str, Any]) -> SessionConfig:
    if not isinstance(d, dict):
        raise ConfigError("configuration must be a JSON object")
    n = d.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"n must be a positive integer, got {n!r}")
    mode = d.get("mode", "free")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    q = None
    if "q" in d:
        rows = d["q"]
        if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise ConfigError(f"q must be an {n}x{n} array")
        q = QMatrix(tuple(tuple(_complex(x, f"q[{i + 1}][{j + 1}]") for j, x in enumerate(r)) for i, r in enumerate(rows)))
        check = validate_qmatrix(q, "unimodular" if mode == "q_laurent" else "general")
        if not check:
            raise ConfigError("invalid q matrix: " + "; ".join(check.problems))
    R = _radii(d["R"], n, "R", False) if "R" in d else None
    r = _radii(d["r"], n, "r", True) if "r" in d else None
    if R is not None and r is not None and any(not a < b for a, b in zip(r, R)):
        raise ConfigError("need r < R componentwise")
    caps = d.get("caps", {})
    if not isinstance(caps, dict):
        raise ConfigError("caps must be an object")
    kwargs = {}
    for key, attr in (("permutations", "cap"), ("power", "max_power"), ("terms", "max_terms")):
        if key in caps:
            v = caps[key]
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"caps.{key} must be a positive integer")
            kwargs[attr] = v
    if "tol" in d:
        tol = d["tol"]
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
            raise ConfigError("tol must be a positive number")
        kwargs["tol"] = float(tol)
    known = {"n", "mode", "q", "R", "r", "caps", "tol"}
    extra = {k: v for k, v in d.items() if k not in known}
    return SessionConfig(n=n, mode=mode, q=q, R=R, r=r, extra=extra, **kwargs)


def load_config(source) -> SessionConfig:
    """Read a config from a path, a JSON string, or an already-decoded dict."""
    if isinstance(source, dict):
        return config_from_dict(source)
    text = source
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from None
    return config_from_dict(data)


def config_to_dict(cfg: SessionConfig) -> dict:
    def radii(v):
        return None if v is None else ["+inf" if math.isinf(x) else x for x in v]

    out = {"n": cfg.n, "mode": cfg.mode, "q": cfg.q.to_json(),
           "caps": {"permutations": cfg.cap, "power": cfg.max_power, "terms": cfg.max_terms}, "tol": cfg.tol}
    if cfg.R is not None:
        out["R"] = radii(cfg.R)
    if cfg.r is not None:
        out["r"] = radii(cfg.r)
    return out
