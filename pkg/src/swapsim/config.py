"""Run configuration: the key-value config format, validation, defaults.

The config is a plain-text document of ``key = value`` lines.  ``#``
starts a comment.  Sweep keys accept either an explicit comma-separated
list or ``{start A, stop B, step C}`` (endpoint-inclusive within half a
step).  Unknown and duplicate keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .bsm import BsmPolicy
from .chsh import ChshSettings


class ParseError(ValueError):
    """Malformed config text (bad syntax, unknown or duplicate key)."""


class ValidationError(ValueError):
    """Well-formed config with a missing or out-of-range value."""


MODES = ("tomography", "chsh", "both")
THRESHOLD_UNITS = ("amplitude", "intensity")

DEFAULT_CHSH_ANGLES_DEG = (0.0, 45.0, 22.5, 67.5)


@dataclass(frozen=True)
class RunConfig:
    r: float
    gamma_bsm: float = 1.0
    gamma_qst: float = 1.0
    sigma_sq: float = 1.0
    bsm_policy: BsmPolicy = BsmPolicy.ORTHOGONAL_PATTERN
    threshold_units: str = "amplitude"
    mode: str = "both"
    target_bsm_events: int = 10_000
    trials: int = 10
    max_raw_realizations: int = 1_000_000_000
    master_seed: int = 1
    chsh_angles_deg: tuple = DEFAULT_CHSH_ANGLES_DEG
    sweep_r: tuple | None = None
    sweep_gamma_bsm: tuple | None = None
    sweep_gamma_qst: tuple | None = None
    out_dir: str | None = None

    def chsh_settings(self) -> ChshSettings:
        return ChshSettings.from_degrees(self.chsh_angles_deg)

    def grid(self) -> list:
        """(r, gamma_bsm, gamma_qst) points, r outermost."""
        rs = self.sweep_r or (self.r,)
        gbs = self.sweep_gamma_bsm or (self.gamma_bsm,)
        gqs = self.sweep_gamma_qst or (self.gamma_qst,)
        return [(r, gb, gq) for r in rs for gb in gbs for gq in gqs]

    def at_point(self, r, gamma_bsm, gamma_qst) -> "RunConfig":
        return replace(self, r=float(r), gamma_bsm=float(gamma_bsm),
                       gamma_qst=float(gamma_qst), sweep_r=None,
                       sweep_gamma_bsm=None, sweep_gamma_qst=None)

    def validated(self) -> "RunConfig":
        _check(self.r >= 0, "squeezing_r must be >= 0")
        _check(self.gamma_bsm >= 0, "gamma_bsm must be >= 0")
        _check(self.gamma_qst >= 0, "gamma_qst must be >= 0")
        _check(self.sigma_sq > 0, "vacuum_variance must be > 0")
        _check(self.threshold_units in THRESHOLD_UNITS,
               f"threshold_units must be one of {THRESHOLD_UNITS}")
        _check(self.mode in MODES, f"mode must be one of {MODES}")
        _check(self.target_bsm_events >= 1, "target_bsm_events must be >= 1")
        _check(self.trials >= 1, "trials must be >= 1")
        _check(self.max_raw_realizations >= 1, "max_raw_realizations must be >= 1")
        _check(0 <= self.master_seed < 2 ** 64,
               "master_seed must be a non-negative 64-bit integer")
        _check(len(self.chsh_angles_deg) == 4,
               "chsh_angles_deg needs exactly four angles (a, a', b, b')")
        for name, values in (("sweep.r", self.sweep_r),
                             ("sweep.gamma_bsm", self.sweep_gamma_bsm),
                             ("sweep.gamma_qst", self.sweep_gamma_qst)):
            if values is not None:
                _check(len(values) > 0, f"{name} expanded to an empty list")
                _check(all(v >= 0 for v in values), f"{name} values must be >= 0")
        return self


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise ValidationError(message)


def expand_range(start: float, stop: float, step: float) -> tuple:
    """start, start+step, ... up to stop (endpoint within half a step)."""
    if step <= 0:
        raise ValidationError("sweep step must be > 0")
    if stop < start:
        raise ValidationError("sweep stop must be >= start")
    out = []
    k = 0
    limit = stop + 0.5 * step * (1.0 - 1e-9)
    while start + k * step < limit:
        out.append(start + k * step)
        k += 1
        if k > 1_000_000:
            raise ValidationError("sweep expands to more than 1e6 points")
    return tuple(out)


_SCALAR_KEYS = {
    "squeezing_r": "r",
    "gamma_bsm": "gamma_bsm",
    "gamma_qst": "gamma_qst",
    "vacuum_variance": "sigma_sq",
}
_INT_KEYS = {
    "target_bsm_events": "target_bsm_events",
    "trials": "trials",
    "max_raw_realizations": "max_raw_realizations",
    "master_seed": "master_seed",
}
_SWEEP_KEYS = {
    "sweep.r": "sweep_r",
    "sweep.gamma_bsm": "sweep_gamma_bsm",
    "sweep.gamma_qst": "sweep_gamma_qst",
}
KNOWN_KEYS = (set(_SCALAR_KEYS) | set(_INT_KEYS) | set(_SWEEP_KEYS)
              | {"bsm_policy", "threshold_units", "mode", "chsh_angles_deg", "out_dir"})


def _to_float(key: str, text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{key} (line {lineno}): {text!r} is not a number") from None


def _to_int(key: str, text: str, lineno: int) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ValidationError(f"{key} (line {lineno}): {text!r} is not an integer") from None


def _parse_sweep(key: str, text: str, lineno: int) -> tuple:
    if text.startswith("{") and text.endswith("}"):
        spec = {}
        for part in text[1:-1].split(","):
            part = part.strip()
            if not part:
                continue
            bits = part.split()
            if len(bits) != 2 or bits[0] not in ("start", "stop", "step"):
                raise ParseError(
                    f"line {lineno}: {key} range entries look like 'start 0.2'; got {part!r}")
            if bits[0] in spec:
                raise ParseError(f"line {lineno}: duplicate {bits[0]!r} in {key}")
            spec[bits[0]] = _to_float(key, bits[1], lineno)
        missing = {"start", "stop", "step"} - set(spec)
        if missing:
            raise ParseError(f"line {lineno}: {key} range is missing {sorted(missing)}")
        try:
            return expand_range(spec["start"], spec["stop"], spec["step"])
        except ValidationError as exc:
            raise ValidationError(f"{key} (line {lineno}): {exc}") from None
    values = tuple(_to_float(key, part.strip(), lineno)
                   for part in text.split(",") if part.strip())
    if not values:
        raise ParseError(f"line {lineno}: {key} needs a list or a {{start, stop, step}} range")
    return values


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config document; defaults fill absent keys."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, _, value = body.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ParseError(f"line {lineno}: empty value for {key!r}")
        raw[key] = (value, lineno)

    if "squeezing_r" not in raw:
        raise ValidationError("squeezing_r is required")

    kwargs = {}
    for key, attr in _SCALAR_KEYS.items():
        if key in raw:
            kwargs[attr] = _to_float(key, *raw[key])
    for key, attr in _INT_KEYS.items():
        if key in raw:
            kwargs[attr] = _to_int(key, *raw[key])
    for key, attr in _SWEEP_KEYS.items():
        if key in raw:
            kwargs[attr] = _parse_sweep(key, *raw[key])
    if "bsm_policy" in raw:
        value, lineno = raw["bsm_policy"]
        try:
            kwargs["bsm_policy"] = BsmPolicy.from_name(value)
        except ValueError as exc:
            raise ValidationError(f"bsm_policy (line {lineno}): {exc}") from None
    if "threshold_units" in raw:
        kwargs["threshold_units"] = raw["threshold_units"][0]
    if "mode" in raw:
        kwargs["mode"] = raw["mode"][0]
    if "chsh_angles_deg" in raw:
        value, lineno = raw["chsh_angles_deg"]
        angles = tuple(_to_float("chsh_angles_deg", part.strip(), lineno)
                       for part in value.split(",") if part.strip())
        if len(angles) != 4:
            raise ValidationError(
                f"chsh_angles_deg (line {lineno}): needs exactly four angles (a, a', b, b')")
        kwargs["chsh_angles_deg"] = angles
    if "out_dir" in raw:
        kwargs["out_dir"] = raw["out_dir"][0]

    return RunConfig(**kwargs).validated()


def write_config(cfg: RunConfig) -> str:
    """Canonical text echo; parse(write_config(cfg)) == cfg."""
    lines = [
        f"squeezing_r = {cfg.r!r}",
        f"gamma_bsm = {cfg.gamma_bsm!r}",
        f"gamma_qst = {cfg.gamma_qst!r}",
        f"vacuum_variance = {cfg.sigma_sq!r}",
        f"bsm_policy = {cfg.bsm_policy.value}",
        f"threshold_units = {cfg.threshold_units}",
        f"mode = {cfg.mode}",
        f"target_bsm_events = {cfg.target_bsm_events}",
        f"trials = {cfg.trials}",
        f"max_raw_realizations = {cfg.max_raw_realizations}",
        f"master_seed = {cfg.master_seed}",
        "chsh_angles_deg = " + ", ".join(repr(float(v)) for v in cfg.chsh_angles_deg),
    ]
    for key, values in (("sweep.r", cfg.sweep_r),
                        ("sweep.gamma_bsm", cfg.sweep_gamma_bsm),
                        ("sweep.gamma_qst", cfg.sweep_gamma_qst)):
        if values is not None:
            lines.append(f"{key} = " + ", ".join(repr(float(v)) for v in values))
    if cfg.out_dir is not None:
        lines.append(f"out_dir = {cfg.out_dir}")
    return "\n".join(lines) + "\n"
