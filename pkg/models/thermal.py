"""
Heat generation on the chip and the LNAs, and the lumped energy balance of the
surface hotspot plate that bounds how long an excessive rate can be sustained.
"""
import logging
import math
import os
import sys
from dataclasses import dataclass

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.core_model import DEFAULT_CONSTANTS, LANDAUER_TEMPERATURE, Power, Temperature
from utils.exceptions import UnitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeatReport:
    """
    Heat balance at the chip hotspot.

    h_total = h_chip + lambda * h_lna; excess = max(0, h_total - p_td).
    """
    h_lna: Power
    h_chip: Power
    h_total: Power
    excess: Power
    p_td: Power

    @property
    def net_watts(self):
        """Signed h_total - p_td (negative when the handset has spare dissipation)."""
        return self.h_total.watts - self.p_td.watts


@dataclass(frozen=True)
class ThermalState:
    """Surface temperature after some elapsed time."""
    t_sur: Temperature
    elapsed: float


def lna_heat(rf):
    """
    Heat generated by the LNAs, H_LNA = N_TRX * P_LNA * (1 - eta).

    Args:
        rf (RfChainConfig): RF chain parameters

    Returns:
        Power: LNA heat
    """
    return Power(rf.n_trx * rf.p_lna.watts * (1.0 - rf.pae_eta))


def heat_report(chip, rf, rate, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Heat generated at the chip hotspot while receiving at a given rate.
    The chip's heat generation equals its computation power.

    Args:
        chip (ChipProfile): Chip parameters
        rf (RfChainConfig): RF chain parameters
        rate (Rate): Receiving rate
        temp (Temperature): Landauer temperature
        constants (PhysicalConstants): Physical constants

    Returns:
        HeatReport: LNA heat, chip heat, total and excess over P_TD
    """
    from models.landauer_compute import bp_power

    h_lna = lna_heat(rf)
    h_chip = bp_power(chip, rate, temp, constants).p_chip
    h_total = h_chip.watts + rf.lambda_coupling * h_lna.watts
    excess = max(0.0, h_total - chip.p_td.watts)
    return HeatReport(h_lna=h_lna, h_chip=h_chip, h_total=Power(h_total), excess=Power(excess), p_td=chip.p_td)


def stable_duration(report, plate):
    """
    Time until the hotspot plate climbs from T_envir to T_safe.

    Without leakage this is C*M*(T_safe - T_envir) / excess. With a leakage
    coefficient g the plate follows T(t) = T_envir + (excess/g)(1 - exp(-g t / CM)),
    and the duration is unbounded if the asymptote stays below T_safe.

    Args:
        report (HeatReport): Heat balance
        plate (SurfacePlate): Hotspot plate

    Returns:
        float: Seconds, math.inf when the rate can be held indefinitely
    """
    excess = report.excess.watts
    if excess <= 0:
        return math.inf
    headroom = plate.headroom_k
    leakage = plate.leakage_w_per_k
    if leakage == 0:
        return plate.heat_capacity * headroom / excess
    if excess / leakage <= headroom:
        return math.inf
    return -(plate.heat_capacity / leakage) * math.log1p(-leakage * headroom / excess)


def surface_temperature(report, plate, elapsed):
    """
    Hotspot surface temperature after holding a heat balance for some time, clamped at T_safe.

    Args:
        report (HeatReport): Heat balance
        plate (SurfacePlate): Hotspot plate
        elapsed (float): Seconds since the rate was applied, >= 0

    Returns:
        Temperature: Surface temperature
    """
    if elapsed < 0:
        raise UnitError(f"elapsed time must be >= 0 s, got {elapsed}")
    excess = report.excess.watts
    if excess <= 0:
        return plate.t_envir
    leakage = plate.leakage_w_per_k
    if leakage == 0:
        rise = excess * elapsed / plate.heat_capacity
    else:
        rise = -(excess / leakage) * math.expm1(-leakage * elapsed / plate.heat_capacity)
    return Temperature(min(plate.t_safe.kelvin, plate.t_envir.kelvin + rise))


def thermal_state(report, plate, elapsed):
    """Surface temperature paired with its elapsed time."""
    return ThermalState(t_sur=surface_temperature(report, plate, elapsed), elapsed=float(elapsed))
