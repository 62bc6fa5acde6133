"""Run configuration: flags, a flat key=value file and the QDEFORM_TOL variable."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from decimal import Decimal, InvalidOperation

from ..dsl import DEFAULT_TOLERANCE

__all__ = ["RunConfig", "ConfigError", "parse_grid", "parse_alphas", "load_config_file", "merge_sources",
           "GRID_TOL", "ENV_TOL"]

ENV_TOL = "QDEFORM_TOL"
GRID_TOL = Decimal("1e-12")
FORMATS = ("json", "csv", "text")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def _decimal(text: str, what: str) -> Decimal:
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise ConfigError(f"{what}: {text!r} is not a decimal number") from None
    if not d.is_finite():
        raise ConfigError(f"{what}: {text!r} is not finite")
    return d


def parse_grid(text: str) -> list[float]:
    """A single value or start:stop:step; stop is included when it lies on the grid within 1e-12."""
    parts = str(text).split(":")
    if len(parts) == 1:
        return [float(_decimal(parts[0], "nu"))]
    if len(parts) != 3:
        raise ConfigError(f"nu grid must be a value or start:stop:step, got {text!r}")
    start, stop, step = (_decimal(p, "nu grid") for p in parts)
    if step <= 0:
        raise ConfigError(f"nu grid step must be positive, got {step}")
    if start > stop:
        raise ConfigError(f"nu grid start {start} exceeds stop {stop}")
    ratio = (stop - start) / step
    count = int(ratio.to_integral_value(rounding="ROUND_FLOOR"))
    nearest = ratio.to_integral_value()
    if abs(ratio - nearest) * step <= GRID_TOL:
        count = int(nearest)
    return [float(start + k * step) for k in range(count + 1)]


def parse_alphas(text: str) -> tuple[float, ...]:
    items = [s for s in str(text).split(",") if s.strip()]
    if not items:
        raise ConfigError("alphas: empty list")
    return tuple(float(_decimal(s, "alphas")) for s in items)


@dataclass(frozen=True)
class RunConfig:
    preset: str | None = None
    dsl: str | None = None
    dim: int = 16
    lam: int | None = None          # None: the preset's own lambda, else 2
    nu: str = "0"                   # value or start:stop:step
    sign: int = 1
    mu_omega: float = 1.0
    alphas: tuple[float, ...] | None = None
    f_choice: str = "default"
    tolerance: float = DEFAULT_TOLERANCE
    mask: str = "auto"
    out: str | None = None
    fmt: str = "json"
    measure: tuple[str, ...] = ()
    measure_cross: bool = False
    measure_only: bool = False
    phase_space: str = "inversion"
    anchor: str | None = None       # general preset for limit families
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.preset is None) == (self.dsl is None):
            raise ConfigError("give exactly one of --preset or --dsl")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")
        if self.lam is not None and self.lam < 1:
            raise ConfigError(f"lambda must be >= 1, got {self.lam}")
        if self.sign not in (1, -1):
            raise ConfigError(f"sign must be +1 or -1, got {self.sign}")
        if not self.mu_omega > 0:
            raise ConfigError(f"mu-omega must be positive, got {self.mu_omega}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if self.mask != "auto" and not (self.mask.isdigit()):
            raise ConfigError(f"mask must be 'auto' or a nonnegative integer, got {self.mask!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.grid()  # validate early

    def grid(self) -> list[float]:
        return parse_grid(self.nu)

    @property
    def mask_policy(self):
        return "auto" if self.mask == "auto" else int(self.mask)

    def measure_patterns(self) -> tuple[str, ...]:
        pats = tuple(self.measure)
        return pats + ("*_12", "*_21") if self.measure_cross else pats


_CONVERTERS = {
    "dim": int, "lam": int, "sign": int, "workers": int, "mu_omega": lambda s: float(_decimal(s, "mu-omega")),
    "tolerance": lambda s: float(_decimal(s, "tol")), "alphas": parse_alphas,
    "measure": lambda s: tuple(p.strip() for p in str(s).split(",") if p.strip()),
    "measure_cross": lambda s: str(s).lower() in ("1", "true", "yes", "on"),
    "measure_only": lambda s: str(s).lower() in ("1", "true", "yes", "on"),
}

# config-file keys mirror the long flags
_ALIASES = {"lambda": "lam", "tol": "tolerance", "format": "fmt", "mu-omega": "mu_omega", "f-choice": "f_choice",
            "measure-cross": "measure_cross", "measure-only": "measure_only", "phase-space": "phase_space"}
_FIELDS = {f.name for f in fields(RunConfig)} - {"extra"}


def _key(k: str) -> str:
    k = k.strip()
    k = _ALIASES.get(k, k).replace("-", "_")
    if k not in _FIELDS:
        raise ConfigError(f"unknown configuration key {k!r}")
    return k


def convert(key: str, value):
    if isinstance(value, str) and key in _CONVERTERS:
        try:
            return _CONVERTERS[key](value)
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {value!r}") from None
    return value


def load_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        k, v = line.split("=", 1)
        key = _key(k)
        out[key] = convert(key, v.strip())
    return out


def merge_sources(flags: dict, config_path: str | None = None, environ=None) -> RunConfig:
    """Environment < config file < flags; ``None`` flag values are unset."""
    environ = os.environ if environ is None else environ
    values: dict = {}
    if environ.get(ENV_TOL):
        values["tolerance"] = convert("tolerance", environ[ENV_TOL])
    if config_path:
        values.update(load_config_file(config_path))
    for k, v in flags.items():
        if v is not None:
            values[_key(k)] = convert(_key(k), v)
    return RunConfig(**values)
