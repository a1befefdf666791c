"""
Base-station downlink rate, link-budget SNR and the min-rule link adaptation
against the handset's maximum receiving rate.

The downlink rate is modelled as streams x bandwidth x log2(1 + SNR) with one
stream per handset antenna and equal SNR on every stream. SNR crosses this
module's boundary in dB and is held linear internally.
"""
import logging
import math
import os
import sys
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
import pandas as pd

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    BS_ANTENNAS, BS_TX_POWER_W, CARRIER_FREQUENCIES_HZ, CELL_RADIUS_M, CROSSOVER_MAX_EXPONENT,
    DEFAULT_SNR_DB, N_TRX, NOISE_PSD_DBM_HZ, SPEED_OF_LIGHT, TIE_RELATIVE_TOLERANCE,
)
from models.core_model import Power, Rate
from utils.exceptions import CrossoverOverflow, UnitError

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(linear):
    return 10.0 * math.log10(linear)


def dbm_per_hz_to_w_per_hz(dbm_per_hz):
    """Convert a noise density in dBm/Hz to W/Hz."""
    return db_to_linear(dbm_per_hz) / 1e3


class BindingConstraint(Enum):
    TERMINAL_LIMITED = 'TerminalLimited'
    CHANNEL_LIMITED = 'ChannelLimited'
    TIE = 'Tie'


@dataclass(frozen=True)
class LinkConfig:
    """Downlink bandwidth (Hz), spatial streams and linear per-stream SNR."""
    bandwidth_hz: float
    streams: int = N_TRX
    snr_linear: float = db_to_linear(DEFAULT_SNR_DB)

    def __post_init__(self):
        if not (isinstance(self.bandwidth_hz, (int, float)) and self.bandwidth_hz > 0):
            raise UnitError(f"bandwidth must be > 0 Hz, got {self.bandwidth_hz}")
        if not (isinstance(self.streams, int) and not isinstance(self.streams, bool) and self.streams >= 1):
            raise UnitError(f"streams must be an integer >= 1, got {self.streams}")
        if not (isinstance(self.snr_linear, (int, float)) and math.isfinite(self.snr_linear) and self.snr_linear > 0):
            raise UnitError(f"snr must be a finite linear ratio > 0, got {self.snr_linear}")

    @classmethod
    def from_db(cls, bandwidth_hz, snr_db, streams=N_TRX):
        return cls(bandwidth_hz=bandwidth_hz, streams=streams, snr_linear=db_to_linear(snr_db))

    @property
    def snr_db(self):
        return linear_to_db(self.snr_linear)

    def with_snr_db(self, snr_db):
        return replace(self, snr_linear=db_to_linear(snr_db))


@dataclass(frozen=True)
class LinkBudget:
    """Base-station side parameters used to derive an SNR from geometry."""
    tx_power: Power = Power(BS_TX_POWER_W)
    bs_antennas: int = BS_ANTENNAS
    carrier_hz: float = CARRIER_FREQUENCIES_HZ[0]
    distance_m: float = CELL_RADIUS_M
    noise_psd_w_hz: float = dbm_per_hz_to_w_per_hz(NOISE_PSD_DBM_HZ)
    cell_radius_m: float = field(default=CELL_RADIUS_M, compare=False)

    def __post_init__(self):
        if not (isinstance(self.tx_power, Power) and self.tx_power.watts > 0):
            raise UnitError(f"tx_power must be a positive Power, got {self.tx_power}")
        if not (isinstance(self.bs_antennas, int) and self.bs_antennas >= 1):
            raise UnitError(f"bs_antennas must be an integer >= 1, got {self.bs_antennas}")
        for name in ('carrier_hz', 'distance_m', 'noise_psd_w_hz', 'cell_radius_m'):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise UnitError(f"{name} must be > 0, got {value}")
        if self.distance_m > self.cell_radius_m:
            logger.warning(f"Link distance {self.distance_m:g} m is beyond the {self.cell_radius_m:g} m cell radius")


@dataclass(frozen=True)
class AdaptationDecision:
    """Outcome of the min-rule: r_phone = min(r_downlink, r_max), redundancy = |r_downlink - r_max|."""
    r_downlink: Rate
    r_max: Rate
    r_phone: Rate
    binding_constraint: BindingConstraint
    redundancy: Rate


def downlink_rate(link):
    """
    Maximum downlink rate the base station can deliver, streams x BW x log2(1 + SNR).

    Args:
        link (LinkConfig): Bandwidth, streams and SNR

    Returns:
        Rate: Downlink rate
    """
    return Rate(link.streams * link.bandwidth_hz * math.log1p(link.snr_linear) / LN2)


def snr_from_budget(budget, link):
    """
    Per-stream SNR from free-space path loss, with transmit power and array gain
    split evenly across the streams.

    Args:
        budget (LinkBudget): Base-station parameters and distance
        link (LinkConfig): Supplies streams and bandwidth (its SNR is ignored)

    Returns:
        float: Linear SNR
    """
    power_per_stream = budget.tx_power.watts / link.streams
    array_gain = budget.bs_antennas / link.streams
    path_gain = (SPEED_OF_LIGHT / (4.0 * math.pi * budget.carrier_hz * budget.distance_m)) ** 2
    noise = budget.noise_psd_w_hz * link.bandwidth_hz
    snr = power_per_stream * array_gain * path_gain / noise
    logger.debug(f"Link budget SNR at {budget.distance_m:g} m, {budget.carrier_hz / 1e9:g} GHz: {linear_to_db(snr):.2f} dB")
    return snr


def _classify(r_downlink_bps, r_max_bps):
    scale = max(r_downlink_bps, r_max_bps)
    if scale == 0 or abs(r_downlink_bps - r_max_bps) < TIE_RELATIVE_TOLERANCE * scale:
        return BindingConstraint.TIE
    if r_downlink_bps > r_max_bps:
        return BindingConstraint.TERMINAL_LIMITED
    return BindingConstraint.CHANNEL_LIMITED


def adapt(r_max, link):
    """
    Apply the link-adaptation min-rule between channel and terminal.

    Args:
        r_max (Rate): Maximum receiving rate of the handset
        link (LinkConfig): Downlink configuration

    Returns:
        AdaptationDecision: Chosen rate, binding constraint and rate redundancy
    """
    r_downlink = downlink_rate(link)
    binding = _classify(r_downlink.bps, r_max.bps)
    return AdaptationDecision(
        r_downlink=r_downlink,
        r_max=r_max,
        r_phone=min(r_downlink, r_max),
        binding_constraint=binding,
        redundancy=max(r_downlink, r_max) - min(r_downlink, r_max),
    )


def crossover_snr(r_max, bandwidth_hz, streams):
    """
    SNR (dB) at which the downlink rate equals r_max: 10 log10(2**(r_max / (streams*BW)) - 1).

    Args:
        r_max (Rate): Maximum receiving rate, > 0
        bandwidth_hz (float): Bandwidth in Hz
        streams (int): Spatial streams

    Returns:
        float: Crossover SNR in dB

    Raises:
        CrossoverOverflow: If the required spectral efficiency exceeds the safe exponent bound
    """
    if r_max.bps <= 0:
        raise UnitError("r_max must be > 0 for a crossover SNR")
    if bandwidth_hz <= 0 or streams < 1:
        raise UnitError("bandwidth must be > 0 and streams >= 1")
    efficiency = r_max.bps / (streams * bandwidth_hz)
    if efficiency > CROSSOVER_MAX_EXPONENT:
        raise CrossoverOverflow(
            f"{efficiency:.6g} bit/s/Hz per stream exceeds the bound of {CROSSOVER_MAX_EXPONENT:g}"
        )
    return linear_to_db(math.expm1(efficiency * LN2))


def adaptation_sweep(r_max, bandwidth_hz, streams, snr_db_grid):
    """
    Evaluate the min-rule across an SNR grid.

    Args:
        r_max (Rate): Maximum receiving rate
        bandwidth_hz (float): Bandwidth in Hz
        streams (int): Spatial streams
        snr_db_grid (array-like): SNR values in dB

    Returns:
        pd.DataFrame: One row per SNR with downlink rate, R_phone, binding constraint and redundancy
    """
    snr_db = np.asarray(snr_db_grid, dtype=float)
    r_downlink = streams * bandwidth_hz * np.log1p(10.0 ** (snr_db / 10.0)) / LN2
    bindings = [_classify(float(r_dl), r_max.bps) for r_dl in r_downlink]
    redundancy_kind = {
        BindingConstraint.TERMINAL_LIMITED: 'unused_channel_capacity',
        BindingConstraint.CHANNEL_LIMITED: 'spare_compute',
        BindingConstraint.TIE: 'none',
    }
    return pd.DataFrame({
        'snr_db': snr_db,
        'r_downlink_bps': r_downlink,
        'r_max_bps': np.full_like(snr_db, r_max.bps),
        'r_phone_bps': np.minimum(r_downlink, r_max.bps),
        'binding': [b.value for b in bindings],
        'redundancy_bps': np.abs(r_downlink - r_max.bps),
        'redundancy_kind': [redundancy_kind[b] for b in bindings],
    })
