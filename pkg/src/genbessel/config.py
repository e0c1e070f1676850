"""Scan grids and their flat ``key = value`` configuration files.

Example::

    # kappa rectangle and |c| range
    kappa_re.min = 0.4
    kappa_re.max = 0.8
    kappa_re.steps = 3
    kappa_im.min = 0
    kappa_im.max = 0
    c_mod.min = 1
    c_mod.max = 1
    pair.A = 1
    pair.B = 0
    theorem = t21
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .conditions import Mode, Theorem
from .errors import InvalidParams
from .janowski import JanowskiPair

MAX_CELLS = 10**7

AXES = ("kappa_re", "kappa_im", "c_mod")
RANGE_KEYS = tuple(f"{a}.{k}" for a in AXES for k in ("min", "max", "steps"))
KNOWN_KEYS = RANGE_KEYS + ("pair.A", "pair.B", "theorem", "mode", "tol", "gamma", "c_arg")


class ConfigError(InvalidParams):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class AxisRange:
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class ScanGrid:
    kappa_re: AxisRange
    kappa_im: AxisRange
    c_mod: AxisRange
    pair: JanowskiPair
    theorem: Theorem = Theorem.T21
    mode: Mode = Mode.PROOF_FAITHFUL
    tol: float = 1e-8
    gamma: float | None = None
    c_arg: float = 0.0

    @property
    def size(self) -> int:
        return self.kappa_re.steps * self.kappa_im.steps * self.c_mod.steps

    def cells(self):
        """(kappa, |c|) in row-major order over (kappa_re, kappa_im, c_mod)."""
        for re, im, cm in itertools.product(self.kappa_re.values(), self.kappa_im.values(),
                                            self.c_mod.values()):
            yield complex(float(re), float(im)), float(cm)


def parse_config(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
        out[key] = value
    return out


def load_config(path) -> dict[str, str]:
    """Read a config file into raw string values (validated by :func:`build_grid`)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    return parse_config(text)


def _float(values, key, default=None):
    if key not in values or values[key] is None:
        if default is None:
            raise ConfigError(key, "missing required value")
        return default
    try:
        x = float(values[key])
    except (TypeError, ValueError):
        raise ConfigError(key, f"not a number: {values[key]!r}") from None
    if not math.isfinite(x):
        raise ConfigError(key, "must be finite")
    return x


def _axis(values, name):
    lo = _float(values, f"{name}.min")
    hi = _float(values, f"{name}.max")
    steps_raw = values.get(f"{name}.steps", 1)
    try:
        steps = int(steps_raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}.steps", f"not an integer: {steps_raw!r}") from None
    if steps < 1:
        raise ConfigError(f"{name}.steps", "must be >= 1")
    if lo > hi:
        raise ConfigError(f"{name}.min", "min must not exceed max")
    return AxisRange(lo, hi, steps)


def build_grid(values: dict) -> ScanGrid:
    """Validate merged file/flag values into a :class:`ScanGrid`."""
    axes = {name: _axis(values, name) for name in AXES}
    size = axes["kappa_re"].steps * axes["kappa_im"].steps * axes["c_mod"].steps
    if size > MAX_CELLS:
        raise ConfigError("steps", f"grid has {size} cells, limit is {MAX_CELLS}")
    if axes["c_mod"].min < 0:
        raise ConfigError("c_mod.min", "modulus must be nonnegative")

    try:
        theorem = Theorem(str(values.get("theorem", "t21")).lower())
    except ValueError:
        raise ConfigError("theorem", f"unknown theorem {values.get('theorem')!r}") from None
    try:
        mode = Mode(str(values.get("mode", "proof")).lower())
    except ValueError:
        raise ConfigError("mode", f"unknown mode {values.get('mode')!r}") from None

    gamma = None
    if theorem is Theorem.COR:
        gamma = _float(values, "gamma")
        if not 0.0 <= gamma < 1.0:
            raise ConfigError("gamma", "must lie in [0, 1)")
        pair = JanowskiPair(1.0 - 2.0 * gamma, -1.0)
    else:
        A = _float(values, "pair.A")
        B = _float(values, "pair.B")
        try:
            pair = JanowskiPair(A, B)
        except InvalidParams as exc:
            raise ConfigError("pair", str(exc)) from None

    tol = _float(values, "tol", 1e-8)
    if tol < 1e-12:
        raise ConfigError("tol", "must be >= 1e-12")
    return ScanGrid(axes["kappa_re"], axes["kappa_im"], axes["c_mod"], pair, theorem, mode,
                    tol, gamma, _float(values, "c_arg", 0.0))
