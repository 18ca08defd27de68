"""Scenario configuration: parsing, defaults and validation.

Accepted text is either ``key=value`` tokens (whitespace or newline
separated, ``#`` starts a comment) or a JSON object with the same keys.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Any

from .errors import ConfigError
from .hilbert import STATE_LABELS, BasisSpec, DensityMatrix, enumerate_basis
from .liouvillian import SystemParams
from .reservoir import SqueezingParams, max_correlation, validate_physical

JUMP_MODES = ("full", "paper-b26", "strict-no-jump")

KEYS = (
    "N",
    "M",
    "eta",
    "kappa1",
    "kappa2",
    "kappa12",
    "initial_state",
    "t_max",
    "dt",
    "sample_interval",
    "K",
    "jump_mode",
    "onset_threshold",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario.

    ``M`` may be the string ``"max"`` and ``kappa12`` the string ``"geom"``;
    ``dt=None`` means ``1e-3 / max(kappa1, kappa2)``, shortened if needed to
    divide ``sample_interval``.  ``initial_state`` is a
    label ``"1"``..``"6"`` or a tuple of diagonal weights in basis order.
    Times are in units of ``1/kappa1``.
    """

    N: float
    M: float | complex | str = "max"
    eta: float = 1.0
    kappa1: float = 1.0
    kappa2: float = 1.0
    kappa12: float | str = "geom"
    initial_state: str | tuple[float, ...] = "1"
    t_max: float = 10.0
    dt: float | None = None
    sample_interval: float = 0.01
    K: int = 2
    jump_mode: str = "full"
    onset_threshold: float = 0.02

    def __post_init__(self):
        for key in ("N", "eta", "kappa1", "kappa2", "t_max", "sample_interval", "onset_threshold"):
            v = getattr(self, key)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{key} must be a finite number, got {v!r}", key)
        if self.N < 0:
            raise ConfigError("N must be non-negative", "N")
        if not 0 <= self.eta <= 1:
            raise ConfigError("eta must lie in [0, 1]", "eta")
        for key in ("kappa1", "kappa2", "t_max", "sample_interval", "onset_threshold"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive", key)
        if isinstance(self.kappa12, str):
            if self.kappa12 != "geom":
                raise ConfigError("kappa12 must be a number or 'geom'", "kappa12")
        elif not self.kappa12 >= 0:
            raise ConfigError("kappa12 must be non-negative", "kappa12")
        if isinstance(self.M, str) and self.M != "max":
            raise ConfigError("M must be a number or 'max'", "M")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive", "dt")
        if self.jump_mode not in JUMP_MODES:
            raise ConfigError(f"jump_mode must be one of {JUMP_MODES}", "jump_mode")
        if int(self.K) != self.K or self.K < 1:
            raise ConfigError("K must be an integer >= 1", "K")
        report = validate_physical(SqueezingParams(self.N, self.m_value))
        if not report.ok:
            raise ConfigError(
                f"|M|={abs(self.m_value):g} exceeds sqrt(N(N+1))={report.bound:g} "
                f"by {report.excess:g}",
                "M",
            )
        self._check_initial_state()
        steps = self.time_step_ratio
        if steps < 1 or abs(steps * self.dt_value - self.sample_interval / self.kappa1) > 1e-9 * self.sample_interval:
            raise ConfigError("sample_interval must be an integer multiple of dt", "dt")

    def _check_initial_state(self):
        s = self.initial_state
        if isinstance(s, str):
            if s not in {str(k) for k in STATE_LABELS}:
                raise ConfigError(f"initial_state label must be one of 1..6, got {s!r}", "initial_state")
            if self.K < 2 and int(s) > 3:
                raise ConfigError(f"state {s} not in basis with K={self.K}", "initial_state")
            return
        w = tuple(s)
        if any(x < 0 for x in w):
            raise ConfigError("initial weights must be non-negative", "initial_state")
        if abs(sum(w) - 1.0) > 1e-9:
            raise ConfigError(f"initial weights sum to {sum(w):.12g}, not 1", "initial_state")
        if len(w) > self.basis.dim:
            raise ConfigError("more initial weights than basis states", "initial_state")

    # resolved quantities

    @property
    def m_value(self) -> complex:
        return max_correlation(self.N) if self.M == "max" else self.M

    @property
    def kappa12_value(self) -> float:
        return math.sqrt(self.kappa1 * self.kappa2) if self.kappa12 == "geom" else float(self.kappa12)

    @property
    def dt_value(self) -> float:
        """Integration step in physical time units."""
        if self.dt is None:
            # largest step <= 1e-3/max(kappa) that divides the sample interval
            sample = self.sample_interval / self.kappa1
            return sample / math.ceil(sample * max(self.kappa1, self.kappa2) / 1e-3 - 1e-9)
        return self.dt / self.kappa1

    @property
    def time_step_ratio(self) -> int:
        return round(self.sample_interval / self.kappa1 / self.dt_value)

    @property
    def basis(self) -> BasisSpec:
        return enumerate_basis(int(self.K))

    def system_params(self) -> SystemParams:
        return SystemParams(
            self.kappa1,
            self.kappa2,
            SqueezingParams(self.N, self.m_value),
            kappa12=self.kappa12_value,
            eta=self.eta,
        )

    def initial_density_matrix(self) -> DensityMatrix:
        if isinstance(self.initial_state, str):
            return DensityMatrix.basis_projector(self.basis, int(self.initial_state))
        return DensityMatrix.from_diagonal(self.basis, self.initial_state)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_lines(self) -> list[str]:
        """Canonical ``key=value`` lines plus one line of resolved values."""
        out = []
        for key in KEYS:
            v = getattr(self, key)
            if key == "initial_state" and not isinstance(v, str):
                v = ",".join(_fmt(x) for x in v)
            elif v is None:
                v = "auto"
            else:
                v = _fmt(v)
            out.append(f"{key}={v}")
        out.append(f"resolved: M={_fmt(self.m_value)} kappa12={_fmt(self.kappa12_value)} dt={_fmt(self.dt_value * self.kappa1)}")
        return out


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, complex):
        return _fmt(v.real) if v.imag == 0 else repr(v).strip("()")
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _number(key, text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number", key) from None
    if not math.isfinite(v):
        raise ConfigError(f"{key}: value must be finite", key)
    return v


def _convert(key: str, value: Any):
    if key not in KEYS:
        raise ConfigError(f"unknown key {key!r}", key)
    if isinstance(value, str):
        value = value.strip()
    if key == "M":
        if value == "max":
            return value
        if isinstance(value, str) and "j" in value:
            try:
                return complex(value)
            except ValueError:
                raise ConfigError(f"M: cannot parse {value!r}", key) from None
        return _number(key, value)
    if key == "kappa12":
        return value if value == "geom" else _number(key, value)
    if key == "dt":
        return None if value in ("auto", None) else _number(key, value)
    if key == "K":
        v = _number(key, value)
        if v != int(v):
            raise ConfigError("K must be an integer", key)
        return int(v)
    if key == "jump_mode":
        return str(value)
    if key == "initial_state":
        if isinstance(value, (list, tuple)):
            return tuple(_number(key, x) for x in value)
        value = str(value)
        if "," in value:
            return tuple(_number(key, x) for x in value.split(",") if x.strip())
        return value
    return _number(key, value)


def parse_mapping(raw: dict) -> ScenarioConfig:
    values = {k: _convert(k, v) for k, v in raw.items()}
    if "N" not in values:
        raise ConfigError("N is required", "N")
    return ScenarioConfig(**values)


def tokenize(text: str) -> dict:
    text = text.strip()
    if text.startswith("{"):
        try:
            return dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from None
    raw = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for token in line.split():
            if "=" not in token:
                raise ConfigError(f"expected key=value, got {token!r}")
            key, value = token.split("=", 1)
            raw[key.strip()] = value
    return raw


def parse_config(text: str, overrides: dict | None = None) -> ScenarioConfig:
    """Parse config text; ``overrides`` (key -> string) win over the text."""
    raw = tokenize(text)
    raw.update(overrides or {})
    return parse_mapping(raw)
