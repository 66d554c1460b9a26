"""Flat key/value sweep configuration.

Grammar, one entry per line::

    document := (blank | comment | entry)*
    comment  := '#' any-text
    entry    := key '=' value [comment]
    value    := number | 'true' | 'false' | string | list | range
    string   := '"' chars '"' | bare-word
    list     := '[' [scalar (',' scalar)*] ']'
    range    := ('linspace' | 'geomspace') '(' start ',' stop ',' count ')'

Keys are the :class:`SweepConfig` fields plus ``blp``, ``blp_t_max``,
``blp_dt`` and ``blp_seed``; anything else is rejected.
"""
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..exceptions import ParseError, ValidationError

STATE_FAMILIES = ("werner-psi0", "werner-psi1", "werner-psi1-swapped", "horodecki")

_KEYS = {
    "state_family", "state_params", "gamma_grid", "lambda", "theta", "tau",
    "quadrature_steps", "output_path", "emit_svg",
    "blp", "blp_t_max", "blp_dt", "blp_seed",
}
_REQUIRED = ("state_family", "state_params", "gamma_grid", "lambda", "theta")
_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RANGE_RE = re.compile(r"^(linspace|geomspace)\s*\((.*)\)$")


@dataclass(frozen=True)
class BlpConfig:
    t_max: float = None
    dt: float = 5e-3
    seed: int = 1234


@dataclass(frozen=True)
class SweepConfig:
    state_family: str
    state_params: tuple
    gamma_grid: tuple
    lam: float
    theta: float
    tau: float = 1.0
    quadrature_steps: int = 256
    blp: BlpConfig = None
    output_path: str = "sweep.csv"
    emit_svg: bool = False


def _scalar(token, line):
    token = token.strip()
    if not token:
        raise ParseError("empty value", line)
    if token in ("true", "false"):
        return token == "true"
    if len(token) >= 2 and token[0] == token[-1] == '"':
        return token[1:-1]
    try:
        if re.fullmatch(r"[+-]?\d+", token):
            return int(token)
        return float(token)
    except ValueError:
        pass
    if re.fullmatch(r"[A-Za-z0-9_./\\:-]+", token):
        return token
    raise ParseError(f"cannot read value {token!r}", line)


def _value(text, line):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError("unterminated list", line)
        inner = text[1:-1].strip()
        return [] if not inner else [_scalar(tok, line) for tok in inner.split(",")]
    m = _RANGE_RE.match(text)
    if m:
        args = [_scalar(tok, line) for tok in m.group(2).split(",")]
        if len(args) != 3 or not isinstance(args[2], int) or isinstance(args[2], bool):
            raise ParseError(f"{m.group(1)} takes (start, stop, integer count)", line)
        fn = np.linspace if m.group(1) == "linspace" else np.geomspace
        try:
            return [float(x) for x in fn(float(args[0]), float(args[1]), args[2])]
        except (ValueError, TypeError) as exc:
            raise ParseError(str(exc), line) from exc
    return _scalar(text, line)


def _strip_comment(raw):
    out, quoted = [], False
    for ch in raw:
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def parse_document(text):
    """Raw ``{key: value}`` mapping with per-line syntax diagnostics."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno)
        key, _, value = body.partition("=")
        key = key.strip()
        if not _KEY_RE.match(key):
            raise ParseError(f"invalid key {key!r}", lineno, key)
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, key)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno, key)
        entries[key] = _value(value, lineno)
    return entries


def _number(entries, key, default=None):
    value = entries.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(key, "must be finite")
    return float(value)


def _number_list(entries, key):
    value = entries[key]
    if not isinstance(value, list):
        value = [value]
    if not value:
        raise ValidationError(key, "must not be empty")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValidationError(key, f"expected finite numbers, got {v!r}")
        out.append(float(v))
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValidationError(key, "values must be strictly ascending")
    return tuple(out)


def validate(entries):
    """Build a :class:`SweepConfig` from parsed entries, applying defaults."""
    for key in _REQUIRED:
        if key not in entries:
            raise ValidationError(key, "missing required key")

    family = entries["state_family"]
    if family not in STATE_FAMILIES:
        raise ValidationError("state_family", f"must be one of {', '.join(STATE_FAMILIES)}")
    params = _number_list(entries, "state_params")
    if family == "horodecki":
        if any(not 0.0 <= a <= 5.0 for a in params):
            raise ValidationError("state_params", "alpha out of [0,5]")
    elif any(not 0.0 <= p <= 1.0 for p in params):
        raise ValidationError("state_params", "p out of [0,1]")

    gammas = _number_list(entries, "gamma_grid")
    if gammas[0] <= 0:
        raise ValidationError("gamma_grid", "rates must be positive")
    lam = _number(entries, "lambda")
    if lam <= 0:
        raise ValidationError("lambda", "must be positive")
    theta = _number(entries, "theta")
    if abs(theta) > 1.0:
        raise ValidationError("theta", "|theta| must not exceed 1")
    tau = _number(entries, "tau", 1.0)
    if tau <= 0:
        raise ValidationError("tau", "must be positive")

    steps = entries.get("quadrature_steps", 256)
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 32 or steps % 2:
        raise ValidationError("quadrature_steps", "must be an even integer >= 32")

    output_path = entries.get("output_path", "sweep.csv")
    if not isinstance(output_path, str) or not output_path:
        raise ValidationError("output_path", "must be a non-empty path")
    emit_svg = entries.get("emit_svg", False)
    if not isinstance(emit_svg, bool):
        raise ValidationError("emit_svg", "must be true or false")

    blp_keys = [k for k in entries if k.startswith("blp_")]
    blp_flag = entries.get("blp", bool(blp_keys))
    if not isinstance(blp_flag, bool):
        raise ValidationError("blp", "must be true or false")
    if blp_keys and not blp_flag:
        raise ValidationError("blp", f"{blp_keys[0]} given while blp = false")
    blp = None
    if blp_flag:
        t_max = None
        if "blp_t_max" in entries:
            t_max = _number(entries, "blp_t_max")
            if t_max <= 0:
                raise ValidationError("blp_t_max", "must be positive")
        dt = _number(entries, "blp_dt", 5e-3)
        if not 0 < dt <= 1e-2:
            raise ValidationError("blp_dt", "must lie in (0, 0.01]")
        seed = entries.get("blp_seed", 1234)
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise ValidationError("blp_seed", "must be a nonnegative integer")
        blp = BlpConfig(t_max, dt, seed)

    return SweepConfig(family, params, gammas, lam, theta, tau, steps, blp, output_path, emit_svg)


def parse_config(text):
    return validate(parse_document(text))


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError("config", f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_config(text)
