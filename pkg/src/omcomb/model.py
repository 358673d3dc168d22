"""Parameters, unit conventions, and physical helper conversions.

Unit conventions used throughout the package:

* Every rate and (de)tuning carried by :class:`SystemParams` -- ``omega_b``,
  ``kappa``, ``gamma``, ``g``, ``delta_a``, ``delta_p`` -- is an *angular*
  frequency in rad/s.  Config files quote them in ordinary Hz and they are
  multiplied by 2*pi on ingestion (:func:`params_from_config`).
* Drive amplitudes ``eps_c``, ``eps_p``, ``eps_f`` are plain rates in
  s^-1 * sqrt(photon), with **no** 2*pi factor.  Config files quote them in
  units of 1e9 s^-1 (the value ``3e3`` means ``3e12 s^-1``).
* The second probe detuning is a fraction of the mechanical frequency,
  ``omega_b / n``.  Only the pair ``(omega_b, n)`` is stored; the detuning is
  always re-derived so it cannot drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

HBAR = 1.054571817e-34     # J s
C_LIGHT = 2.99792458e8     # m/s
TWO_PI = 2.0 * math.pi
GHZ = 1e9                  # drive-amplitude unit used in config files, s^-1


class OmcombError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(OmcombError, ValueError):
    """A parameter violates its invariant; the message names the field."""


class ConfigError(OmcombError, ValueError):
    """A config document is malformed or has out-of-range entries."""


@dataclass(frozen=True)
class SystemParams:
    """All rates, detunings and drive amplitudes of the three-tone model.

    Immutable value type; instances are freely shareable across threads.
    """

    omega_b: float          # mechanical angular frequency, rad/s
    kappa: float            # cavity amplitude damping rate, rad/s
    gamma: float            # mechanical amplitude damping rate, rad/s
    g: float                # single-photon optomechanical coupling, rad/s
    delta_a: float          # control-cavity detuning omega_a - omega_c, rad/s
    eps_c: float            # control drive amplitude, s^-1 sqrt(photon)
    eps_p: float = 0.0      # probe-1 amplitude
    eps_f: float = 0.0      # probe-2 amplitude
    n: int = 1              # probe-2 detuning is omega_b / n
    delta_p: float | None = None   # probe-1 detuning; defaults to omega_b
    phi_c: float = 0.0      # drive phases at t = 0, rad
    phi_p: float = 0.0
    phi_f: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name == "n" or f.name == "delta_p":
                continue
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        if self.delta_p is None:
            object.__setattr__(self, "delta_p", self.omega_b)
        else:
            object.__setattr__(self, "delta_p", float(self.delta_p))

    @property
    def delta_f(self) -> float:
        """Probe-2 detuning, derived from the stored pair (omega_b, n)."""
        return self.omega_b / self.n

    @property
    def omega_fund(self) -> float:
        """Comb fundamental omega_b / n; all spectral lines sit at integer
        multiples of this frequency (relative to the control)."""
        return self.omega_b / self.n

    @property
    def mechanical_period(self) -> float:
        return TWO_PI / self.omega_b

    @property
    def drive_period(self) -> float:
        """Common period of the three drive tones, 2*pi*n / omega_b."""
        return TWO_PI * self.n / self.omega_b

    def to_dict(self) -> dict:
        """Native-unit serialization; round-trips bit-exactly."""
        return {
            "omega_b": self.omega_b, "kappa": self.kappa, "gamma": self.gamma,
            "g": self.g, "delta_a": self.delta_a,
            "eps_c": self.eps_c, "eps_p": self.eps_p, "eps_f": self.eps_f,
            "n": self.n, "delta_p": self.delta_p,
            "phi_c": self.phi_c, "phi_p": self.phi_p, "phi_f": self.phi_f,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        return cls(**d)


def validate(params: SystemParams) -> SystemParams:
    """Check every SystemParams invariant; return the instance unchanged.

    Raises ParameterError naming the first violated invariant.
    """
    p = params
    if not isinstance(p.n, int) or isinstance(p.n, bool):
        raise ParameterError(f"n must be an integer, got {p.n!r}")
    if p.n < 1:
        raise ParameterError(f"n must be >= 1, got {p.n}")
    for name in ("omega_b", "kappa", "gamma"):
        v = getattr(p, name)
        if not (math.isfinite(v) and v > 0.0):
            raise ParameterError(f"non-positive {name}: {v!r}")
    if not (math.isfinite(p.g) and p.g >= 0.0):
        raise ParameterError(f"negative or non-finite g: {p.g!r}")
    for name in ("eps_c", "eps_p", "eps_f"):
        v = getattr(p, name)
        if not (math.isfinite(v) and v >= 0.0):
            raise ParameterError(f"negative or non-finite {name}: {v!r}")
    for name in ("delta_a", "delta_p", "phi_c", "phi_p", "phi_f"):
        if not math.isfinite(getattr(p, name)):
            raise ParameterError(f"non-finite {name}")
    return p


@dataclass(frozen=True)
class PhysicalCavity:
    """Mechanical-oscillator mass, cavity length and control wavelength."""

    mass: float        # kg
    length: float      # m
    lambda_c: float    # m

    def __post_init__(self) -> None:
        for name in ("mass", "length", "lambda_c"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not (math.isfinite(v) and v > 0.0):
                raise ParameterError(f"non-positive {name}: {v!r}")

    def x_zpf(self, omega_b: float) -> float:
        """Zero-point fluctuation sqrt(hbar / (2 M omega_b)), m."""
        return math.sqrt(HBAR / (2.0 * self.mass * omega_b))


def derive_coupling(cav: PhysicalCavity, omega_b: float) -> float:
    """Single-photon coupling g = x_zpf * omega_a / L with omega_a = 2 pi c / lambda_c."""
    if omega_b <= 0.0:
        raise ParameterError(f"non-positive omega_b: {omega_b!r}")
    omega_a = TWO_PI * C_LIGHT / cav.lambda_c
    return cav.x_zpf(omega_b) * omega_a / cav.length


def power_to_amplitude(power: float, omega_y: float, kappa: float) -> float:
    """Drive amplitude sqrt(2 kappa P / (hbar omega_y)) for input power P (W)."""
    if power < 0.0:
        raise ParameterError(f"negative power: {power!r}")
    if omega_y <= 0.0 or kappa <= 0.0:
        raise ParameterError("omega_y and kappa must be positive")
    return math.sqrt(2.0 * kappa * power / (HBAR * omega_y))


# Config documents are flat JSON-compatible key/value maps.  Frequencies in
# ordinary Hz, drive amplitudes in units of 1e9 s^-1.
_CONFIG_HZ_KEYS = {
    "omega_b_hz": "omega_b",
    "kappa_hz": "kappa",
    "gamma_hz": "gamma",
    "g_hz": "g",
    "delta_a_hz": "delta_a",
}
_CONFIG_EPS_KEYS = ("eps_c", "eps_p", "eps_f")
_CONFIG_PHASE_KEYS = ("phi_c", "phi_p", "phi_f")


def params_from_config(doc: dict) -> SystemParams:
    """Build SystemParams from a flat config mapping (see module docstring).

    Unknown keys are ignored so that solver settings can live in the same
    document.
    """
    kwargs: dict = {}
    for key, attr in _CONFIG_HZ_KEYS.items():
        if key not in doc:
            raise ConfigError(f"missing config key: {key}")
        kwargs[attr] = TWO_PI * float(doc[key])
    if "eps_c" not in doc:
        raise ConfigError("missing config key: eps_c")
    for key in _CONFIG_EPS_KEYS:
        if key in doc:
            kwargs[key] = GHZ * float(doc[key])
    n = doc.get("n", 1)
    if not (isinstance(n, int) and not isinstance(n, bool)):
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        else:
            raise ConfigError(f"config key n must be an integer, got {n!r}")
    kwargs["n"] = n
    if "delta_p_hz" in doc:
        kwargs["delta_p"] = TWO_PI * float(doc["delta_p_hz"])
    for key in _CONFIG_PHASE_KEYS:
        if key in doc:
            kwargs[key] = float(doc[key])
    return validate(SystemParams(**kwargs))


def params_to_config(p: SystemParams) -> dict:
    """Inverse of params_from_config (up to float division by 2*pi)."""
    doc = {key: getattr(p, attr) / TWO_PI for key, attr in _CONFIG_HZ_KEYS.items()}
    for key in _CONFIG_EPS_KEYS:
        doc[key] = getattr(p, key) / GHZ
    doc["n"] = p.n
    doc["delta_p_hz"] = p.delta_p / TWO_PI
    for key in _CONFIG_PHASE_KEYS:
        doc[key] = getattr(p, key)
    return doc


def with_updates(p: SystemParams, **changes) -> SystemParams:
    """Copy with some fields replaced (convenience for sweeps)."""
    return replace(p, **changes)
