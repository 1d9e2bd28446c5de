"""Model constants, scenario defaults and the flat ``section.field = value`` config format."""

from __future__ import annotations

import dataclasses
import hashlib
import math
import re
from dataclasses import dataclass, field, fields, replace
from typing import Any


class ConfigError(ValueError):
    """Raised for malformed config documents, unknown keys and invalid values."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class SocialParams:
    kappa: float = 0.05  # social learning rate (1/yr)
    beta: float = 1.0  # net cost of mitigation
    delta: float = 1.0  # strength of social norms
    f_max: float = 5.0  # maximum warming cost
    omega: float = 3.0  # cost-function nonlinearity (1/K)
    T_lim: float = 1.5  # cost midpoint temperature (K anomaly)
    x0: float = 0.05  # mitigator fraction when social dynamics switch on


@dataclass(frozen=True)
class TippingParams:
    enabled: bool = True
    R_max: float = 5.0  # GtC/yr
    R0: float = 5.0  # 1/K
    T_c: float = 2.0  # K anomaly


@dataclass(frozen=True)
class ClimateParams:
    C_at0: float = 596.0  # GtC
    C_oc0: float = 1.5e5
    C_veg0: float = 550.0
    C_so0: float = 1500.0
    k_p: float = 0.184  # 1/yr
    k_r: float = 0.092
    k_sr: float = 0.034
    k_t: float = 0.092
    k_MM: float = 1.478
    k_c: float = 29e-6
    k_M: float = 120e-6
    k_a: float = 1.773e20  # moles in the atmosphere
    k_A: float = 8.7039e9
    k_B: float = 157.072
    E_a: float = 54830.0  # J/mol
    c_heat: float = 4.69e23  # J/K
    a_E: float = 5.101e14  # m^2
    L_latent: float = 43655.0  # J/mol
    R_gas: float = 8.314  # J/mol/K
    H: float = 0.5915
    A_albedo: float = 0.225
    chi: float = 0.3
    zeta: float = 50.0
    S_flux: float = 1368.0  # W/m^2
    tau_CH4: float = 0.0231
    P0: float = 1.4e11  # Pa
    F0: float = 2.5e-2  # 1/yr
    sigma_SB: float = 5.67e-8
    T_R: float = 273.15  # freezing point; tabulated but unused by the dynamics
    T0_abs: float = 288.15  # pre-industrial absolute surface temperature (K)
    f_gtm: float = 8.3259e13  # mol C per GtC
    seconds_per_year: float = 3.1536e7


@dataclass(frozen=True)
class EmissionProjectionParams:
    eps_max: float = 7.0  # GtC/yr
    s_half: float = 50.0  # yr
    t_pivot: float = 2017.0


@dataclass(frozen=True)
class RunSchedule:
    t_start: float = 1800.0
    t_social_on: float = 2017.0
    t_end: float = 2200.0
    dt: float = 0.05
    output_stride: float = 1.0

    def steps(self, span: float) -> int:
        return int(round(span / self.dt))


@dataclass(frozen=True)
class ModelParams:
    social: SocialParams = field(default_factory=SocialParams)
    tipping: TippingParams = field(default_factory=TippingParams)
    climate: ClimateParams = field(default_factory=ClimateParams)
    emission: EmissionProjectionParams = field(default_factory=EmissionProjectionParams)
    schedule: RunSchedule = field(default_factory=RunSchedule)

    def get(self, path: str) -> Any:
        section, name = _split_path(path)
        return getattr(getattr(self, section), name)

    def with_values(self, overrides: dict[str, Any]) -> "ModelParams":
        """Return a copy with dotted-path overrides applied (no validation)."""
        grouped: dict[str, dict[str, Any]] = {}
        for path, value in overrides.items():
            section, name = _split_path(path)
            grouped.setdefault(section, {})[name] = _coerce(section, name, value)
        return replace(
            self,
            **{s: replace(getattr(self, s), **vals) for s, vals in grouped.items()},
        )

    def fingerprint(self) -> str:
        return hashlib.sha256(dump_config(self).encode()).hexdigest()[:16]


SECTIONS: dict[str, type] = {
    "social": SocialParams,
    "tipping": TippingParams,
    "climate": ClimateParams,
    "emission": EmissionProjectionParams,
    "schedule": RunSchedule,
}


def _split_path(path: str) -> tuple[str, str]:
    section, _, name = path.partition(".")
    if section not in SECTIONS or name not in {f.name for f in fields(SECTIONS[section])}:
        raise ConfigError(f"unknown parameter {path!r}", field=path)
    return section, name


def _is_bool_field(section: str, name: str) -> bool:
    return section == "tipping" and name == "enabled"


def _coerce(section: str, name: str, value: Any) -> Any:
    if _is_bool_field(section, name):
        if isinstance(value, bool):
            return value
        raise ConfigError(f"{section}.{name} must be a boolean", field=f"{section}.{name}")
    if isinstance(value, bool):
        raise ConfigError(f"{section}.{name} must be numeric", field=f"{section}.{name}")
    return float(value)


def numeric_paths() -> list[str]:
    """All dotted paths naming numeric scalar fields."""
    return [
        f"{s}.{f.name}"
        for s, cls in SECTIONS.items()
        for f in fields(cls)
        if not _is_bool_field(s, f.name)
    ]


def default_params() -> ModelParams:
    return ModelParams()


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


def _aligned(span: float, dt: float) -> bool:
    n = span / dt
    return abs(n - round(n)) <= 1e-9 * max(1.0, abs(n))


def validate(params: ModelParams) -> list[Violation]:
    out: list[Violation] = []

    def check(ok: bool, path: str, msg: str) -> None:
        if not ok:
            out.append(Violation(path, msg))

    for path in numeric_paths():
        if not math.isfinite(params.get(path)):
            out.append(Violation(path, "must be finite"))
    if out:
        return out

    s, tp, c, e, sch = params.social, params.tipping, params.climate, params.emission, params.schedule
    check(s.kappa >= 0, "social.kappa", "must be >= 0")
    check(s.delta >= 0, "social.delta", "must be >= 0")
    check(s.f_max >= 0, "social.f_max", "must be >= 0")
    check(s.omega > 0, "social.omega", "must be > 0")
    check(0 <= s.x0 <= 1, "social.x0", "must lie in [0, 1]")
    check(tp.R_max >= 0, "tipping.R_max", "must be >= 0")
    check(tp.R0 > 0, "tipping.R0", "must be > 0")
    for f in fields(ClimateParams):
        check(getattr(c, f.name) > 0, f"climate.{f.name}", "must be > 0")
    check(250.0 <= c.T0_abs <= 320.0, "climate.T0_abs", "must lie in [250, 320] K")
    check(e.eps_max >= 0, "emission.eps_max", "must be >= 0")
    check(e.s_half > 0, "emission.s_half", "must be > 0")
    check(sch.t_start < sch.t_social_on < sch.t_end, "schedule.t_social_on",
          "need t_start < t_social_on < t_end")
    check(sch.dt > 0, "schedule.dt", "must be > 0")
    if sch.dt > 0:
        check(sch.output_stride >= sch.dt, "schedule.output_stride", "must be >= dt")
        check(_aligned(sch.output_stride, sch.dt), "schedule.output_stride",
              "must be a whole number of steps")
        check(_aligned(sch.t_social_on - sch.t_start, sch.dt), "schedule.t_social_on",
              "must fall on the integration grid")
        check(_aligned(sch.t_end - sch.t_start, sch.output_stride), "schedule.t_end",
              "run length must be a whole number of output strides")
    check(sch.t_start <= e.t_pivot <= sch.t_end, "emission.t_pivot", "must lie inside the run")
    return out


def ensure_valid(params: ModelParams) -> ModelParams:
    problems = validate(params)
    if problems:
        first = problems[0]
        raise ConfigError("; ".join(map(str, problems)), field=first.field)
    return params


_LINE = re.compile(r"^\s*([A-Za-z_][\w]*\.[A-Za-z_][\w]*)\s*=\s*(\S+)\s*$")
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def load_config(text: str, base: ModelParams | None = None) -> ModelParams:
    """Parse a flat config document on top of ``base`` (defaults if omitted)."""
    overrides: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise ConfigError(f"expected 'section.field = value', got {raw.strip()!r}", line=lineno)
        key, token = m.groups()
        try:
            section, name = _split_path(key)
        except ConfigError as exc:
            raise ConfigError(str(exc), line=lineno, field=key) from None
        if token in ("true", "false"):
            value: Any = token == "true"
        elif _NUMBER.match(token):
            value = float(token)
        else:
            raise ConfigError(f"cannot parse value {token!r} for {key}", line=lineno, field=key)
        try:
            value = _coerce(section, name, value)
        except ConfigError as exc:
            raise ConfigError(str(exc), line=lineno, field=key) from None
        overrides[key] = value
    params = (base or default_params()).with_values(overrides)
    return ensure_valid(params)


def dump_config(params: ModelParams) -> str:
    """Serialize every field; ``load_config(dump_config(p)) == p``."""
    lines = []
    for section in SECTIONS:
        obj = getattr(params, section)
        for f in fields(obj):
            v = getattr(obj, f.name)
            text = ("true" if v else "false") if isinstance(v, bool) else repr(float(v))
            lines.append(f"{section}.{f.name} = {text}")
    return "\n".join(lines) + "\n"


def as_dict(params: ModelParams) -> dict[str, dict[str, Any]]:
    return dataclasses.asdict(params)
