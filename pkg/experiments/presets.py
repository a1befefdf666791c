"""
Scenario presets: semiconductor node presets, the simulation parameter set shared
by every figure scenario, and the sweep layout of each scenario.

The 5 nm gap factor is a stated value. The 10 nm and 14 nm gap factors are
derived at import by inverting R_max at the reference endpoints (beta = 0.34,
default RF chain), and the derivation is recorded in NODE_PROVENANCE.
"""
import logging
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import (
    BANDWIDTHS_HZ, BETA_MAX, BS_ANTENNAS, BS_TX_POWER_W, CARRIER_FREQUENCIES_HZ, CELL_RADIUS_M,
    GAP_FACTOR_5NM, LAMBDA_COUPLING, N_TRX, NOISE_PSD_DBM_HZ, P_LNA_W, PAE_ETA, P_TD_W, RMAX_ENDPOINTS_BPS,
)
from models.core_model import ChipProfile, Rate, RfChainConfig, SemiconductorNode
from models.landauer_compute import gap_from_rmax
from utils.exceptions import ConfigError, UnitError

logger = logging.getLogger(__name__)


class Scenario(Enum):
    FIG3A = 'fig3a'
    FIG3B = 'fig3b'
    FIG4A = 'fig4a'
    FIG4B = 'fig4b'
    FIG4C = 'fig4c'
    CUSTOM = 'custom'

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        for member in cls:
            if member.value == str(text).strip().lower():
                return member
        raise ConfigError(f"unknown scenario '{text}' (expected one of {[m.value for m in cls]})", 'scenario')


# Parameter set every figure scenario is built from
SIMULATION_PARAMETERS = {
    'bs_tx_power_w': BS_TX_POWER_W,
    'bs_antennas': BS_ANTENNAS,
    'phone_antennas': N_TRX,
    'noise_psd_dbm_hz': NOISE_PSD_DBM_HZ,
    'carrier_frequencies_hz': list(CARRIER_FREQUENCIES_HZ),
    'cell_radius_m': CELL_RADIUS_M,
    'bandwidths_hz': list(BANDWIDTHS_HZ),
    'pae_eta': PAE_ETA,
    'p_lna_w': P_LNA_W,
    'lambda_coupling': LAMBDA_COUPLING,
    'p_td_w': P_TD_W,
}

DEFAULT_RF = RfChainConfig(
    n_trx=SIMULATION_PARAMETERS['phone_antennas'],
    lambda_coupling=SIMULATION_PARAMETERS['lambda_coupling'],
    pae_eta=SIMULATION_PARAMETERS['pae_eta'],
)


def _derive_gap(node_nm):
    placeholder = ChipProfile(node=SemiconductorNode(feature_size_nm=node_nm, gap_factor=1.0), beta=BETA_MAX)
    return gap_from_rmax(Rate(RMAX_ENDPOINTS_BPS[node_nm]), placeholder, DEFAULT_RF)


NODE_PROVENANCE = {
    5: {'gap_factor': GAP_FACTOR_5NM, 'source': 'stated'},
}
for _nm in (10, 14):
    NODE_PROVENANCE[_nm] = {
        'gap_factor': _derive_gap(_nm),
        'source': f"derived from R_max = {RMAX_ENDPOINTS_BPS[_nm] / 1e9:g} Gbps at beta = {BETA_MAX:g}",
    }

NODE_PRESETS = {
    nm: SemiconductorNode(feature_size_nm=nm, gap_factor=entry['gap_factor'])
    for nm, entry in NODE_PROVENANCE.items()
}


def node_preset(node_nm):
    """
    Semiconductor node preset for 5, 10 or 14 nm.

    Raises:
        UnitError: If no preset exists for the feature size
    """
    try:
        return NODE_PRESETS[int(node_nm)]
    except (KeyError, ValueError, TypeError):
        raise UnitError(f"no preset for node '{node_nm}' (available: {sorted(NODE_PRESETS)} nm)") from None


def chip_preset(node_nm, beta=BETA_MAX):
    return ChipProfile(node=node_preset(node_nm), beta=beta)


@dataclass(frozen=True)
class SweepAxis:
    """Linear sweep of one parameter, endpoints included."""
    name: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if not isinstance(self.points, int) or isinstance(self.points, bool) or self.points < 2:
            raise ConfigError(f"sweep needs at least 2 points, got {self.points}", f"sweep.{self.name}.points")

    def values(self):
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScenarioPreset:
    scenario: Scenario
    description: str
    nodes: Tuple[int, ...]
    axis: SweepAxis
    betas: Tuple[float, ...] = (BETA_MAX,)
    bandwidth_hz: Optional[float] = None
    streams: int = N_TRX
    parameters: dict = field(default_factory=lambda: dict(SIMULATION_PARAMETERS), compare=False)


SNR_AXIS = SweepAxis(name='link.snr_db', start=-10.0, stop=40.0, points=51)

PRESETS = {
    Scenario.FIG3A: ScenarioPreset(
        scenario=Scenario.FIG3A,
        description='R_max versus beta for the 5, 10 and 14 nm nodes',
        nodes=(5, 10, 14),
        axis=SweepAxis(name='chip.beta', start=0.01, stop=BETA_MAX, points=34),
    ),
    Scenario.FIG3B: ScenarioPreset(
        scenario=Scenario.FIG3B,
        description='Stable communication duration versus offered rate, 5 nm',
        nodes=(5,),
        axis=SweepAxis(name='offered_rate', start=1e9, stop=20e9, points=39),
        betas=(0.10, 0.20, BETA_MAX),
    ),
    Scenario.FIG4A: ScenarioPreset(
        scenario=Scenario.FIG4A,
        description='R_max versus R_downlink over SNR, 14 nm, 20 MHz',
        nodes=(14,),
        axis=SNR_AXIS,
        bandwidth_hz=BANDWIDTHS_HZ[0],
    ),
    Scenario.FIG4B: ScenarioPreset(
        scenario=Scenario.FIG4B,
        description='R_max versus R_downlink over SNR, 10 nm, 500 MHz',
        nodes=(10,),
        axis=SNR_AXIS,
        bandwidth_hz=BANDWIDTHS_HZ[1],
    ),
    Scenario.FIG4C: ScenarioPreset(
        scenario=Scenario.FIG4C,
        description='R_max versus R_downlink over SNR, 5 nm, 500 MHz',
        nodes=(5,),
        axis=SNR_AXIS,
        bandwidth_hz=BANDWIDTHS_HZ[1],
    ),
}

logger.debug(f"Derived gap factors: 10 nm {NODE_PROVENANCE[10]['gap_factor']:.1f}, "
             f"14 nm {NODE_PROVENANCE[14]['gap_factor']:.1f}")
