"""Device description: material, transducer, transmon and geometry parameters.

All frequencies and rates are ordinary frequencies in Hz (cycles per second),
lengths in meters, powers in watts. Modules that need angular quantities
handle the conversion internally; configuration files stay in the units
experimentalists quote.

A ``DeviceConfig`` is immutable after loading and can be shared freely
between concurrent sweep workers.
"""

from __future__ import annotations

import json
from dataclasses import MISSING, asdict, dataclass
from importlib import resources
from pathlib import Path

from .errors import ConfigError

# Transducer center frequencies are co-designed; allow small file-level slack.
FREQ_MATCH_RTOL = 1e-3


@dataclass(frozen=True)
class MaterialParams:
    """Substrate constants (GaAs for the reference device)."""

    dielectric_constant: float  # relative permittivity, dimensionless
    sound_velocity: float  # m/s
    electromech_coupling: float  # K^2, dimensionless fraction


@dataclass(frozen=True)
class TransmonParams:
    """Transmon energies and decoherence rates, all as Hz."""

    ej0: float  # EJ,0/h at zero flux
    ec: float  # EC/h
    squid_area: float  # m^2; stored for completeness, enters no formula
    dephasing_rate: float  # pure dephasing of the 0-1 transition
    acoustic_coupling: float  # relaxation rate into the SAW channel (= Gamma_01)


@dataclass(frozen=True)
class IdtParams:
    """Interdigital transducer in the delta-function model."""

    center_frequency: float  # Hz
    periods: int  # number of unit cells
    finger_overlap: float  # m
    insertion_loss: float = 1.0  # lumped amplitude factor in [0, 1]


@dataclass(frozen=True)
class Geometry:
    dist_idtA_qubit: float  # m
    dist_idtB_qubit: float  # m


@dataclass(frozen=True)
class DeviceConfig:
    material: MaterialParams
    transmon: TransmonParams
    idt_a: IdtParams
    idt_b: IdtParams
    qdt: IdtParams
    geometry: Geometry
    rabi_per_sqrt_watt: float  # Hz per sqrt(W); probe Rabi rate is k*sqrt(P)


_SECTION_TYPES = {
    "material": MaterialParams,
    "transmon": TransmonParams,
    "idt_a": IdtParams,
    "idt_b": IdtParams,
    "qdt": IdtParams,
    "geometry": Geometry,
}

_INT_FIELDS = {"periods"}


def _build_section(name: str, cls, raw: dict):
    if not isinstance(raw, dict):
        raise ConfigError("expected an object", field=name)
    fields = cls.__dataclass_fields__
    unknown = set(raw) - set(fields)
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r}", field=name)
    kwargs = {}
    for key, fdef in fields.items():
        if key in raw:
            value = raw[key]
        elif fdef.default is not MISSING:
            value = fdef.default
        else:
            raise ConfigError("missing required key", field=f"{name}.{key}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError("must be a number", field=f"{name}.{key}")
        if key in _INT_FIELDS:
            if value != int(value):
                raise ConfigError("must be an integer", field=f"{name}.{key}")
            kwargs[key] = int(value)
        else:
            kwargs[key] = float(value)
    return cls(**kwargs)


def _require_positive(value: float, name: str):
    if not value > 0:
        raise ConfigError("must be > 0", field=name)


def _validate_idt(idt: IdtParams, name: str):
    if idt.periods < 1:
        raise ConfigError("periods must be >= 1", field=f"{name}.periods")
    _require_positive(idt.center_frequency, f"{name}.center_frequency")
    _require_positive(idt.finger_overlap, f"{name}.finger_overlap")
    if not 0.0 <= idt.insertion_loss <= 1.0:
        raise ConfigError("insertion_loss must lie in [0, 1]",
                          field=f"{name}.insertion_loss")


def validate(cfg: DeviceConfig) -> DeviceConfig:
    """Check every declared invariant; returns ``cfg`` on success.

    Raises ``ConfigError`` naming the first violated invariant.
    """
    m = cfg.material
    if not m.dielectric_constant > 1:
        raise ConfigError("must be > 1", field="material.dielectric_constant")
    _require_positive(m.sound_velocity, "material.sound_velocity")
    if not 0.0 < m.electromech_coupling < 1.0:
        raise ConfigError("must lie in (0, 1)",
                          field="material.electromech_coupling")

    t = cfg.transmon
    _require_positive(t.ej0, "transmon.ej0")
    _require_positive(t.ec, "transmon.ec")
    if not t.ej0 / t.ec > 1:
        raise ConfigError("ej0/ec must exceed 1 (transmon regime)",
                          field="transmon.ej0")
    for key in ("squid_area", "dephasing_rate", "acoustic_coupling"):
        if getattr(t, key) < 0:
            raise ConfigError("must be >= 0", field=f"transmon.{key}")

    for name in ("idt_a", "idt_b", "qdt"):
        _validate_idt(getattr(cfg, name), name)

    g = cfg.geometry
    _require_positive(g.dist_idtA_qubit, "geometry.dist_idtA_qubit")
    _require_positive(g.dist_idtB_qubit, "geometry.dist_idtB_qubit")

    f_ref = cfg.qdt.center_frequency
    for name in ("idt_a", "idt_b"):
        f = getattr(cfg, name).center_frequency
        if abs(f - f_ref) > FREQ_MATCH_RTOL * f_ref:
            raise ConfigError(
                "center_frequency must match the QDT (co-designed device)",
                field=f"{name}.center_frequency")

    _require_positive(cfg.rabi_per_sqrt_watt, "rabi_per_sqrt_watt")
    return cfg


def from_dict(raw: dict) -> DeviceConfig:
    """Build and validate a ``DeviceConfig`` from parsed JSON data."""
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    allowed = set(_SECTION_TYPES) | {"rabi_per_sqrt_watt"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r}")
    missing = allowed - set(raw)
    if missing:
        raise ConfigError("missing required key", field=sorted(missing)[0])
    sections = {name: _build_section(name, cls, raw[name])
                for name, cls in _SECTION_TYPES.items()}
    k = raw["rabi_per_sqrt_watt"]
    if not isinstance(k, (int, float)) or isinstance(k, bool):
        raise ConfigError("must be a number", field="rabi_per_sqrt_watt")
    return validate(DeviceConfig(rabi_per_sqrt_watt=float(k), **sections))


def load_config(path: str | Path) -> DeviceConfig:
    """Load, parse and validate a device configuration file (UTF-8 JSON)."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    return from_dict(raw)


def to_dict(cfg: DeviceConfig) -> dict:
    return asdict(cfg)


def serialize(cfg: DeviceConfig) -> str:
    """JSON text that parses back to an equal ``DeviceConfig``."""
    return json.dumps(to_dict(cfg), indent=2, sort_keys=True)


def paper_device() -> DeviceConfig:
    """The bundled reference device (GaAs, 2.2641 GHz, Np=150/25)."""
    data = resources.files("sawqed").joinpath("data/paper_device.json")
    return from_dict(json.loads(data.read_text(encoding="utf-8")))


def derived_summary(cfg: DeviceConfig) -> list[tuple[str, float, str]]:
    """Derived design constants as ``(name, value, unit)`` rows.

    Covers the acoustic wavelength, transducer bandwidths, designed acoustic
    coupling, maximum 0-1 frequency, anharmonicity and the two propagation
    delays.
    """
    from . import channel, idt, transmon

    fq = cfg.qdt.center_frequency
    lam0 = idt.wavelength(cfg.material.sound_velocity, fq)
    bw_i = idt.bandwidth(cfg.idt_a.center_frequency, cfg.idt_a.periods)
    bw_q = idt.bandwidth(fq, cfg.qdt.periods)
    gamma_ac = idt.acoustic_coupling(fq, cfg.material.electromech_coupling,
                                     cfg.qdt.periods)
    f01_max = transmon.transition_f01(transmon.FluxBias(0.0), cfg.transmon)
    levels = transmon.level_structure(transmon.FluxBias(0.0), cfg.transmon)
    tau_a = channel.transit_delay(cfg.geometry.dist_idtA_qubit,
                                  cfg.material.sound_velocity)
    tau_b = channel.transit_delay(cfg.geometry.dist_idtB_qubit,
                                  cfg.material.sound_velocity)
    return [
        ("wavelength", lam0, "m"),
        ("bandwidth_idt", bw_i, "Hz"),
        ("bandwidth_qdt", bw_q, "Hz"),
        ("acoustic_coupling_design", gamma_ac, "Hz"),
        ("f01_max", f01_max, "Hz"),
        ("anharmonicity", levels.anharmonicity, "Hz"),
        ("transit_idtA_qubit", tau_a, "s"),
        ("transit_idtB_qubit", tau_b, "s"),
    ]
