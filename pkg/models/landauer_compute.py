"""
Baseband computation load, chip computation power and the maximum receiving rate.
Bit erasures in the baseband processor are priced at the Landauer limit scaled by
fanout, activity factor and the semiconductor gap factor.
"""
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np
import pandas as pd

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.core_model import (
    DEFAULT_CONSTANTS, LANDAUER_TEMPERATURE, Power, Rate, landauer_bit_energy,
)
from models.thermal import lna_heat
from utils.exceptions import BudgetExhausted, UnitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComputePowerBreakdown:
    """Baseband power, whole-chip computation power (p_bp / beta) and energy per received bit."""
    p_bp: Power
    p_chip: Power
    per_bit_energy_bp: float


def baseband_ops(chip, rate):
    """
    Logic operations per second the baseband processor performs, C_BP = K_BP * R.

    Args:
        chip (ChipProfile): Chip parameters
        rate (Rate): Receiving rate

    Returns:
        float: Operations per second
    """
    return chip.k_bp * rate.bps


def per_bit_energy(chip, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """Baseband energy per received bit: K_BP * F0 * alpha * G_S * kT ln2 (J/bit)."""
    return (chip.k_bp * chip.fanout_f0 * chip.activity_alpha * chip.node.gap_factor
            * landauer_bit_energy(constants, temp))


def bp_power(chip, rate, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Computation power of the baseband processor and of the whole chip at a receiving rate.

    Args:
        chip (ChipProfile): Chip parameters
        rate (Rate): Receiving rate
        temp (Temperature): Landauer temperature
        constants (PhysicalConstants): Physical constants

    Returns:
        ComputePowerBreakdown: p_bp, p_chip = p_bp / beta, and per-bit BP energy
    """
    energy = per_bit_energy(chip, temp, constants)
    p_bp = energy * rate.bps
    logger.debug(f"P_BP at {rate.bps:.6g} bit/s: {p_bp:.6g} W")
    return ComputePowerBreakdown(p_bp=Power(p_bp), p_chip=Power(p_bp / chip.beta), per_bit_energy_bp=energy)


def compute_budget(chip, rf):
    """
    Power left for computation once the coupled LNA heat is dissipated, P_TD - lambda*H_LNA.

    Raises:
        BudgetExhausted: If the coupled LNA heat reaches P_TD
    """
    coupled = rf.lambda_coupling * lna_heat(rf).watts
    budget = chip.p_td.watts - coupled
    if budget <= 0:
        raise BudgetExhausted(coupled, chip.p_td.watts)
    return budget


def max_receiving_rate(chip, rf, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Closed-form maximum sustainable receiving rate,
    R_max = beta * (P_TD - lambda*H_LNA) / (K_BP * F0 * alpha * G_S * kT ln2).

    Args:
        chip (ChipProfile): Chip parameters
        rf (RfChainConfig): RF chain parameters
        temp (Temperature): Landauer temperature
        constants (PhysicalConstants): Physical constants

    Returns:
        Rate: Maximum receiving rate

    Raises:
        BudgetExhausted: If lambda*H_LNA >= P_TD
    """
    r_max = chip.beta * compute_budget(chip, rf) / per_bit_energy(chip, temp, constants)
    logger.debug(f"R_max for {chip.node.feature_size_nm:g} nm, beta={chip.beta:g}: {r_max / 1e9:.4f} Gbps")
    return Rate(r_max)


def gap_from_rmax(target_rmax, chip, rf, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Gap factor G_S for which max_receiving_rate reproduces a target rate.
    The gap factor carried by chip.node is ignored.

    Args:
        target_rmax (Rate): Rate to reproduce, must be > 0
        chip (ChipProfile): Chip parameters (node gap unused)
        rf (RfChainConfig): RF chain parameters
        temp (Temperature): Landauer temperature
        constants (PhysicalConstants): Physical constants

    Returns:
        float: Gap factor

    Raises:
        UnitError: If target_rmax is zero
        BudgetExhausted: If lambda*H_LNA >= P_TD
    """
    if target_rmax.bps <= 0:
        raise UnitError("target R_max must be > 0")
    energy_without_gap = chip.k_bp * chip.fanout_f0 * chip.activity_alpha * landauer_bit_energy(constants, temp)
    return chip.beta * compute_budget(chip, rf) / (energy_without_gap * target_rmax.bps)


def rmax_vs_beta(chips, rf, betas, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Tabulate R_max over a beta grid for several chips.

    Args:
        chips (dict): Label -> ChipProfile
        rf (RfChainConfig): RF chain parameters
        betas (array-like): Beta values in (0, 0.34]

    Returns:
        pd.DataFrame: Columns node, node_nm, beta, r_max_bps
    """
    rows = []
    for label, chip in chips.items():
        for beta in np.asarray(betas, dtype=float):
            r_max = max_receiving_rate(chip.with_beta(float(beta)), rf, temp, constants)
            rows.append({
                'node': label,
                'node_nm': chip.node.feature_size_nm,
                'beta': float(beta),
                'r_max_bps': r_max.bps,
            })
    return pd.DataFrame(rows, columns=['node', 'node_nm', 'beta', 'r_max_bps'])
