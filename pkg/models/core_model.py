"""
Physical constants, unit-bearing scalars and the parameter records shared by every model.
All records are frozen dataclasses and validate their invariants at construction.
"""
import logging
import math
import os
import re
import sys
from dataclasses import dataclass, field, replace

import pint

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    ACTIVITY_ALPHA, ACTIVITY_RANGE, BETA_MAX, BOLTZMANN_K, CELSIUS_OFFSET, FANOUT_F0,
    FANOUT_RANGE, K_BP, LAMBDA_COUPLING, LANDAUER_TEMPERATURE_K, N_TRX, P_LNA_W, P_TD_W,
    PAE_ETA, PLATE_AREA_M2, PLATE_DENSITY, PLATE_LEAKAGE_W_PER_K, PLATE_SPECIFIC_HEAT,
    PLATE_THICKNESS_M, T_ENVIR_C, T_SAFE_C,
)
from utils.exceptions import UnitError

logger = logging.getLogger(__name__)

_QUANTITY_PATTERN = re.compile(r'^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/]*)\s*$')

RATE_UNIT = "bit / second"
FREQUENCY_UNIT = "hertz"

ureg = pint.UnitRegistry()


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _require(condition, message):
    if not condition:
        raise UnitError(message)


def _split_quantity(text, target_unit, kind):
    """Magnitude of a quantity in target_unit; bare numbers are taken as already in it."""
    if _is_number(text):
        return float(text)
    match = _QUANTITY_PATTERN.match(str(text))
    if not match:
        raise UnitError(f"cannot parse {kind} '{text}'")
    number, unit = match.groups()
    if not unit:
        return float(number)
    try:
        return float(ureg.Quantity(float(number), unit).to(target_unit).magnitude)
    except Exception:
        raise UnitError(f"unknown {kind} unit '{unit}' in '{text}' (expected {target_unit} with an SI prefix)") from None


def parse_hertz(text):
    """
    Parse a frequency such as '500MHz' or '3.7 GHz' into hertz.

    Args:
        text (str | float): Frequency with optional unit suffix (bare numbers are Hz)

    Returns:
        float: Frequency in Hz
    """
    return _split_quantity(text, FREQUENCY_UNIT, 'frequency')


def parse_node(text):
    """Parse '5nm', '5 nm' or 5 into an integer feature size in nanometers."""
    if _is_number(text):
        return int(text)
    cleaned = str(text).strip().lower()
    if cleaned.endswith('nm'):
        cleaned = cleaned[:-2].strip()
    try:
        return int(float(cleaned))
    except ValueError:
        raise UnitError(f"cannot parse semiconductor node '{text}'") from None


@dataclass(frozen=True)
class PhysicalConstants:
    """Boltzmann constant (J/K) and ln 2, fixed at construction."""
    boltzmann_k: float = BOLTZMANN_K
    ln2: float = math.log(2.0)

    def __post_init__(self):
        _require(_is_number(self.boltzmann_k) and self.boltzmann_k > 0, f"boltzmann_k must be > 0, got {self.boltzmann_k}")
        _require(_is_number(self.ln2) and self.ln2 > 0, f"ln2 must be > 0, got {self.ln2}")


@dataclass(frozen=True, order=True)
class Rate:
    """Data rate in bits per second, the only internal rate unit."""
    bps: float

    def __post_init__(self):
        _require(_is_number(self.bps) and math.isfinite(self.bps) and self.bps >= 0,
                 f"rate must be a finite number >= 0 bit/s, got {self.bps}")
        object.__setattr__(self, 'bps', float(self.bps))

    @classmethod
    def from_gbps(cls, gbps):
        return cls(gbps * 1e9)

    @classmethod
    def from_mbps(cls, mbps):
        return cls(mbps * 1e6)

    @classmethod
    def parse(cls, text):
        """
        Parse a rate with unit suffix ('4Gbps', '2.17 Gbps', '800 Mbps', '1e9').

        Args:
            text (str | float | Rate): Rate text; bare numbers are bits/s

        Returns:
            Rate: Canonical rate in bits/s
        """
        if isinstance(text, Rate):
            return text
        return cls(_split_quantity(text, RATE_UNIT, 'rate'))

    @property
    def gbps(self):
        return self.bps / 1e9

    def scaled(self, factor):
        return Rate(self.bps * factor)

    def __add__(self, other):
        if not isinstance(other, Rate):
            return NotImplemented
        return Rate(self.bps + other.bps)

    def __sub__(self, other):
        if not isinstance(other, Rate):
            return NotImplemented
        return Rate(self.bps - other.bps)

    def __str__(self):
        return format_rate(self)


@dataclass(frozen=True, order=True)
class Power:
    """Power in watts."""
    watts: float

    def __post_init__(self):
        _require(_is_number(self.watts) and math.isfinite(self.watts) and self.watts >= 0,
                 f"power must be a finite number >= 0 W, got {self.watts}")
        object.__setattr__(self, 'watts', float(self.watts))

    @classmethod
    def from_mw(cls, milliwatts):
        return cls(milliwatts / 1e3)

    @property
    def milliwatts(self):
        return self.watts * 1e3

    def __add__(self, other):
        if not isinstance(other, Power):
            return NotImplemented
        return Power(self.watts + other.watts)

    def __str__(self):
        return f"{self.watts:.4g} W"


@dataclass(frozen=True, order=True)
class Temperature:
    """Absolute temperature in kelvin."""
    kelvin: float

    def __post_init__(self):
        _require(_is_number(self.kelvin) and math.isfinite(self.kelvin) and self.kelvin > 0,
                 f"temperature must be > 0 K, got {self.kelvin}")
        object.__setattr__(self, 'kelvin', float(self.kelvin))

    @classmethod
    def from_celsius(cls, celsius):
        return cls(celsius + CELSIUS_OFFSET)

    @property
    def celsius(self):
        return self.kelvin - CELSIUS_OFFSET

    def __str__(self):
        return f"{self.kelvin:.2f} K ({self.celsius:.2f} °C)"


@dataclass(frozen=True)
class SemiconductorNode:
    """Feature size and the gap G_S between switching energy and the Landauer limit."""
    feature_size_nm: float
    gap_factor: float

    def __post_init__(self):
        _require(_is_number(self.feature_size_nm) and self.feature_size_nm > 0,
                 f"feature size must be > 0 nm, got {self.feature_size_nm}")
        # switching energy cannot undercut the Landauer limit
        _require(_is_number(self.gap_factor) and math.isfinite(self.gap_factor) and self.gap_factor >= 1,
                 f"gap factor must be >= 1, got {self.gap_factor}")


@dataclass(frozen=True)
class ChipProfile:
    """
    Baseband parameters of a handset chip.

    The default constructor enforces the typical F0 (3-4) and alpha (0.1-0.2) ranges;
    ChipProfile.unchecked() accepts any positive value for them.
    """
    node: SemiconductorNode
    k_bp: float = K_BP
    fanout_f0: float = FANOUT_F0
    activity_alpha: float = ACTIVITY_ALPHA
    beta: float = BETA_MAX
    p_td: Power = Power(P_TD_W)
    checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        _require(isinstance(self.node, SemiconductorNode), "node must be a SemiconductorNode")
        _require(isinstance(self.p_td, Power) and self.p_td.watts > 0, f"p_td must be a positive Power, got {self.p_td}")
        for name in ('k_bp', 'fanout_f0', 'activity_alpha'):
            value = getattr(self, name)
            _require(_is_number(value) and math.isfinite(value) and value > 0, f"{name} must be > 0, got {value}")
        _require(_is_number(self.beta) and 0 < self.beta <= BETA_MAX,
                 f"beta must lie in (0, {BETA_MAX}], got {self.beta}")
        if self.checked:
            low, high = FANOUT_RANGE
            _require(low <= self.fanout_f0 <= high, f"fanout_f0 must lie in [{low}, {high}], got {self.fanout_f0}")
            low, high = ACTIVITY_RANGE
            _require(low <= self.activity_alpha <= high,
                     f"activity_alpha must lie in [{low}, {high}], got {self.activity_alpha}")

    @classmethod
    def unchecked(cls, node, **kwargs):
        return cls(node, checked=False, **kwargs)

    def with_beta(self, beta):
        return replace(self, beta=beta)

    def with_gap(self, gap_factor):
        return replace(self, node=replace(self.node, gap_factor=gap_factor))


@dataclass(frozen=True)
class RfChainConfig:
    """Receive RF chains: antenna count, LNA power, power-added efficiency and heat coupling."""
    n_trx: int = N_TRX
    p_lna: Power = Power(P_LNA_W)
    pae_eta: float = PAE_ETA
    lambda_coupling: float = LAMBDA_COUPLING
    checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        _require(isinstance(self.n_trx, int) and not isinstance(self.n_trx, bool) and self.n_trx >= 1,
                 f"n_trx must be an integer >= 1, got {self.n_trx}")
        _require(isinstance(self.p_lna, Power), "p_lna must be a Power")
        eta_ok = _is_number(self.pae_eta) and (0 <= self.pae_eta < 1 if self.checked else 0 <= self.pae_eta <= 1)
        _require(eta_ok, f"pae_eta must lie in [0, 1), got {self.pae_eta}")
        _require(_is_number(self.lambda_coupling) and 0 <= self.lambda_coupling <= 1,
                 f"lambda_coupling must lie in [0, 1], got {self.lambda_coupling}")

    @classmethod
    def unchecked(cls, **kwargs):
        return cls(checked=False, **kwargs)


@dataclass(frozen=True)
class SurfacePlate:
    """Lumped thermal mass of the surface hotspot above the chip."""
    specific_heat: float = PLATE_SPECIFIC_HEAT
    density: float = PLATE_DENSITY
    area: float = PLATE_AREA_M2
    thickness: float = PLATE_THICKNESS_M
    t_envir: Temperature = Temperature.from_celsius(T_ENVIR_C)
    t_safe: Temperature = Temperature.from_celsius(T_SAFE_C)
    leakage_w_per_k: float = PLATE_LEAKAGE_W_PER_K

    def __post_init__(self):
        for name in ('specific_heat', 'density', 'area', 'thickness'):
            value = getattr(self, name)
            _require(_is_number(value) and math.isfinite(value) and value > 0, f"{name} must be > 0, got {value}")
        _require(isinstance(self.t_envir, Temperature) and isinstance(self.t_safe, Temperature),
                 "plate temperatures must be Temperature values")
        _require(self.t_safe.kelvin > self.t_envir.kelvin,
                 f"t_safe ({self.t_safe.kelvin} K) must exceed t_envir ({self.t_envir.kelvin} K)")
        _require(_is_number(self.leakage_w_per_k) and self.leakage_w_per_k >= 0,
                 f"leakage_w_per_k must be >= 0, got {self.leakage_w_per_k}")

    @property
    def mass(self):
        """Mass of the plate in kg (density x area x thickness)."""
        return self.density * self.area * self.thickness

    @property
    def heat_capacity(self):
        """Heat capacity C*M in J/K."""
        return self.specific_heat * self.mass

    @property
    def headroom_k(self):
        return self.t_safe.kelvin - self.t_envir.kelvin


DEFAULT_CONSTANTS = PhysicalConstants()
LANDAUER_TEMPERATURE = Temperature(LANDAUER_TEMPERATURE_K)


def landauer_bit_energy(constants=DEFAULT_CONSTANTS, temp=LANDAUER_TEMPERATURE):
    """
    Minimum energy to erase one bit, k*T*ln2.

    Args:
        constants (PhysicalConstants): Boltzmann constant and ln2
        temp (Temperature): Temperature at which bits are erased

    Returns:
        float: Energy in joules
    """
    return constants.boltzmann_k * temp.kelvin * constants.ln2


def format_rate(rate, digits=2):
    """Human readable rate with the largest unit that keeps the value >= 1."""
    bps = rate.bps if isinstance(rate, Rate) else float(rate)
    for unit, scale in (('Tbps', 1e12), ('Gbps', 1e9), ('Mbps', 1e6), ('kbps', 1e3)):
        if bps >= scale:
            return f"{bps / scale:.{digits}f} {unit}"
    return f"{bps:.{digits}f} bps"
