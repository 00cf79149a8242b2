"""Experimental parameters and their reduction to dimensionless numbers.

Two numbers drive everything downstream: the azimuthal coupling parameter
``tau = (k_i d sin(theta_i))**2 / 2`` and the parametric gain ``gainLG``.
"""

import json
import math
import re
from dataclasses import asdict, dataclass, fields

C_LIGHT = 299_792_458.0

#: model validity limit of the azimuthal approximation, Hz
MAX_FREQUENCY = 2e12

GAIN_MODELS = ("fixed", "pump_scaled")

_UNITS = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "frequency": {"Hz": 1.0, "GHz": 1e9, "THz": 1e12},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "number": {"": 1.0},
}

_QUANTITY = {
    "pump_wavelength": "length",
    "crystal_length": "length",
    "beam_diameter": "length",
    "idler_polar_angle": "angle",
    "thz_refractive_index": "number",
    "gain_ref": "number",
    "gain_ref_frequency": "frequency",
}

# canonical unit for serialisation; SI keeps the round trip exact
_SI = {"length": "m", "frequency": "Hz", "angle": "rad", "number": ""}


class ValidityError(ValueError):
    """Raised for idler frequencies outside the model's validity range."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Physical setup, stored in SI units (m, Hz, rad)."""

    pump_wavelength: float = 523.3e-9
    crystal_length: float = 1e-3
    beam_diameter: float = 300e-6
    idler_polar_angle: float = math.radians(60.0)
    thz_refractive_index: float = 5.20
    gain_ref: float = 0.01
    gain_model: str = "fixed"
    gain_ref_frequency: float = 1e12

    def __post_init__(self):
        for name in ("pump_wavelength", "crystal_length", "beam_diameter"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        if not 0 < self.idler_polar_angle < math.pi / 2:
            raise ValueError("idler_polar_angle must lie strictly between 0 and 90 deg")
        if not self.thz_refractive_index >= 1:
            raise ValueError("thz_refractive_index must be >= 1")
        if not (math.isfinite(self.gain_ref) and self.gain_ref >= 0):
            raise ValueError(f"gain_ref must be nonnegative, got {self.gain_ref!r}")
        if self.gain_model not in GAIN_MODELS:
            raise ValueError(f"gain_model must be one of {GAIN_MODELS}, got {self.gain_model!r}")
        if not (math.isfinite(self.gain_ref_frequency) and self.gain_ref_frequency > 0):
            raise ValueError("gain_ref_frequency must be positive")

    def to_dict(self):
        """Unit-suffixed representation that parses back to an identical config."""
        out = {}
        for key, value in asdict(self).items():
            if key in _QUANTITY:
                unit = _SI[_QUANTITY[key]]
                out[key] = f"{value!r} {unit}".rstrip()
            else:
                out[key] = value
        return out

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
        kwargs = {}
        for key, raw in data.items():
            if key in _QUANTITY:
                kwargs[key] = parse_quantity(raw, _QUANTITY[key], key)
            elif key == "gain_model":
                kwargs[key] = str(raw).replace("-", "_")
        return cls(**kwargs)


_NUMBER_UNIT = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")


def parse_quantity(raw, quantity, name="value"):
    """Convert ``"300 um"``-style input to SI.

    Bare numbers are taken to be SI already.
    """
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    match = _NUMBER_UNIT.match(str(raw))
    if not match:
        raise ValueError(f"cannot parse {name}={raw!r}")
    number, unit = match.groups()
    table = _UNITS[quantity]
    if unit not in table:
        if not unit:
            return float(number)
        allowed = ", ".join(u for u in table if u)
        raise ValueError(f"{name}: unit {unit!r} not allowed (use {allowed})")
    return float(number) * table[unit]


def load_config(path):
    """Read an :class:`ExperimentConfig` from a JSON or ``key = value`` file.

    Missing fields take their defaults. Lines starting with ``#`` are
    ignored in the key/value form.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
    else:
        data = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            data[key] = value
    return ExperimentConfig.from_dict(data)


def check_frequency(f_i):
    """Reject idler frequencies outside (0, 2] THz."""
    if not (math.isfinite(f_i) and f_i > 0):
        raise ValueError(f"idler frequency must be positive, got {f_i!r}")
    if f_i > MAX_FREQUENCY * (1 + 1e-12):
        raise ValidityError(
            f"idler frequency {f_i / 1e12:g} THz exceeds the 2 THz validity limit "
            "of the azimuthal approximation"
        )


def idler_wavenumber(f_i, cfg):
    return 2.0 * math.pi * f_i * cfg.thz_refractive_index / C_LIGHT


def tau_of_frequency(f_i, cfg=None):
    """Azimuthal coupling parameter at idler frequency ``f_i`` (Hz)."""
    cfg = cfg or ExperimentConfig()
    if not (math.isfinite(f_i) and f_i > 0):
        raise ValueError(f"idler frequency must be positive, got {f_i!r}")
    kd = idler_wavenumber(f_i, cfg) * cfg.beam_diameter * math.sin(cfg.idler_polar_angle)
    return 0.5 * kd * kd


def gain_of_frequency(f_i, cfg=None):
    """Dimensionless gain ``gainLG`` at idler frequency ``f_i`` (Hz).

    Under ``pump_scaled`` the gain grows linearly with ``f_i`` from
    ``gain_ref`` at ``gain_ref_frequency``, i.e. constant pump intensity.
    """
    cfg = cfg or ExperimentConfig()
    if not (math.isfinite(f_i) and f_i > 0):
        raise ValueError(f"idler frequency must be positive, got {f_i!r}")
    if cfg.gain_model == "fixed":
        return cfg.gain_ref
    return cfg.gain_ref * f_i / cfg.gain_ref_frequency


@dataclass(frozen=True)
class DimensionlessPoint:
    f_i: float
    tau: float
    gainLG: float


def dimensionless_point(f_i, cfg=None):
    cfg = cfg or ExperimentConfig()
    return DimensionlessPoint(f_i, tau_of_frequency(f_i, cfg), gain_of_frequency(f_i, cfg))
