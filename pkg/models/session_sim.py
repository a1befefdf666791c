"""
Time-stepped simulation of a receive session.
Each step applies the channel cap, accumulates excess heat into the surface plate
(forward Euler) and enforces a throttle policy before the plate can pass T_safe.
"""
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import CSV_FLOAT_FORMAT, SIM_MAX_STEPDOWNS_PER_STEP, SIM_STEP_FRACTION, SIM_STEP_S
from models.core_model import DEFAULT_CONSTANTS, LANDAUER_TEMPERATURE, Power, Rate
from models.landauer_compute import max_receiving_rate
from models.link_adaptation import downlink_rate
from models.thermal import heat_report, stable_duration
from utils.exceptions import InvalidStep, UnitError

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ['elapsed_s', 'rate_bps', 't_sur_k', 'h_total_w', 'throttled']
FIG3B_COLUMNS = ['node', 'node_nm', 'beta', 'rate_bps', 'r_max_bps', 'duration_s', 'unbounded']


class ThrottleMode(Enum):
    HARD_SHUTOFF = 'HardShutoff'
    STEP_DOWN = 'StepDown'


class RecoveryMode(Enum):
    NONE = 'None'
    LINEAR_COOLDOWN = 'LinearCooldown'


@dataclass(frozen=True)
class ThrottlePolicy:
    """
    What the handset does when the plate would pass T_safe.

    HardShutoff stops reception; StepDown multiplies the rate by step_fraction per
    violation. With LinearCooldown the plate sheds heat while the chip runs below
    P_TD (at cooldown_power, default the spare P_TD - h_total) and the throttle is
    lifted once the plate is back at T_envir.
    """
    mode: ThrottleMode = ThrottleMode.HARD_SHUTOFF
    step_fraction: float = SIM_STEP_FRACTION
    recovery: RecoveryMode = RecoveryMode.NONE
    cooldown_power: Optional[Power] = None

    def __post_init__(self):
        if not (0 < self.step_fraction <= 1):
            raise UnitError(f"step_fraction must lie in (0, 1], got {self.step_fraction}")


@dataclass
class SessionTrace:
    """Per-step samples of a simulated session; timestamps are step, 2*step, ..."""
    step_s: float
    elapsed_s: np.ndarray
    rate_bps: np.ndarray
    t_sur_k: np.ndarray
    h_total_w: np.ndarray
    throttled: np.ndarray

    def __len__(self):
        return len(self.elapsed_s)

    @property
    def first_throttle_time(self):
        """Elapsed time of the first throttled step, None if the policy never fired."""
        hits = np.flatnonzero(self.throttled)
        return float(self.elapsed_s[hits[0]]) if hits.size else None

    @property
    def throttle_count(self):
        return int(np.count_nonzero(self.throttled))

    def to_dataframe(self):
        return pd.DataFrame({
            'elapsed_s': self.elapsed_s,
            'rate_bps': self.rate_bps,
            't_sur_k': self.t_sur_k,
            'h_total_w': self.h_total_w,
            'throttled': self.throttled.astype(int),
        }, columns=TRACE_COLUMNS)

    def to_csv(self, path=None):
        """Write the trace as CSV (6 significant digits); returns the text when no path is given."""
        return self.to_dataframe().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')

    def to_json(self, path=None):
        """Write the trace as JSON records at full precision; returns the text when no path is given."""
        records = [
            {'elapsed_s': float(e), 'rate_bps': float(r), 't_sur_k': float(t), 'h_total_w': float(h), 'throttled': bool(x)}
            for e, r, t, h, x in zip(self.elapsed_s, self.rate_bps, self.t_sur_k, self.h_total_w, self.throttled)
        ]
        text = json.dumps(records)
        if path is None:
            return text
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return None


def _offered_schedule(offered_rate, link):
    if offered_rate is None:
        if link is None:
            raise UnitError("a session needs an offered rate or a link to take the full-buffer rate from")
        full_buffer = downlink_rate(link).bps
        return lambda elapsed: full_buffer
    if callable(offered_rate):
        return lambda elapsed: Rate.parse(offered_rate(elapsed)).bps
    constant = Rate.parse(offered_rate).bps
    return lambda elapsed: constant


def simulate_session(chip, rf, plate, link=None, policy=None, duration=60.0, step=SIM_STEP_S,
                     offered_rate=None, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Simulate a receive session with forward-Euler heat accumulation.

    Args:
        chip (ChipProfile): Chip parameters
        rf (RfChainConfig): RF chain parameters
        plate (SurfacePlate): Hotspot plate
        link (LinkConfig): Optional downlink; caps the offered rate at the downlink rate
        policy (ThrottlePolicy): Throttle policy (default HardShutoff, no recovery)
        duration (float): Session length in seconds
        step (float): Integration step in seconds
        offered_rate (Rate | str | callable): Constant rate or function of elapsed seconds;
            defaults to the full downlink rate
        temp (Temperature): Landauer temperature
        constants (PhysicalConstants): Physical constants

    Returns:
        SessionTrace: Per-step samples

    Raises:
        InvalidStep: If step <= 0 or step > duration
    """
    if not step > 0 or not duration >= step:
        raise InvalidStep(f"step must satisfy 0 < step <= duration, got step={step}, duration={duration}")
    policy = policy or ThrottlePolicy()
    offered_at = _offered_schedule(offered_rate, link)
    channel_cap = downlink_rate(link).bps if link is not None else math.inf

    n_steps = int(math.floor(duration / step + 1e-9))
    heat_capacity = plate.heat_capacity
    t_envir = plate.t_envir.kelvin
    t_safe = plate.t_safe.kelvin
    leakage = plate.leakage_w_per_k
    p_td = chip.p_td.watts
    cooling = policy.recovery is RecoveryMode.LINEAR_COOLDOWN
    step_down = policy.mode is ThrottleMode.STEP_DOWN

    h_total_cache = {}

    def h_total_at(rate_bps):
        if rate_bps not in h_total_cache:
            h_total_cache[rate_bps] = heat_report(chip, rf, Rate(rate_bps), temp, constants).h_total.watts
        return h_total_cache[rate_bps]

    def net_heat_flow(h_total, t_sur):
        net = h_total - p_td
        leak = leakage * (t_sur - t_envir)
        if net > 0:
            return net - leak
        if cooling:
            removal = policy.cooldown_power.watts if policy.cooldown_power is not None else -net
            return -removal - leak
        return -leak

    elapsed = np.empty(n_steps)
    rates = np.empty(n_steps)
    temps = np.empty(n_steps)
    heats = np.empty(n_steps)
    flags = np.zeros(n_steps, dtype=bool)

    t_sur = t_envir
    scale = 1.0
    for i in range(n_steps):
        demand = min(offered_at(i * step), channel_cap)
        stepdowns = 0
        while True:
            applied = demand * scale
            h_total = h_total_at(applied)
            candidate = t_sur + net_heat_flow(h_total, t_sur) * step / heat_capacity
            if candidate <= t_safe:
                break
            flags[i] = True
            if scale == 0.0:
                candidate = t_safe
                break
            can_step_down = step_down and policy.step_fraction < 1 and stepdowns < SIM_MAX_STEPDOWNS_PER_STEP
            # Out of step-downs: stop reception, same as HardShutoff
            scale = scale * policy.step_fraction if can_step_down else 0.0
            stepdowns += 1
        t_sur = max(t_envir, candidate)
        if flags[i]:
            logger.debug(f"Throttle at {(i + 1) * step:.4f} s: rate scaled to {scale:g}")
        if cooling and scale < 1.0 and t_sur <= t_envir:
            scale = 1.0
        elapsed[i] = (i + 1) * step
        rates[i] = applied
        temps[i] = t_sur
        heats[i] = h_total

    trace = SessionTrace(step_s=step, elapsed_s=elapsed, rate_bps=rates, t_sur_k=temps, h_total_w=heats, throttled=flags)
    logger.info(f"Simulated {n_steps} steps of {step:g} s: {trace.throttle_count} throttled steps, "
                f"final surface {temps[-1]:.2f} K")
    return trace


def reproduce_fig3b(chips, betas, rates, rf, plate, temp=LANDAUER_TEMPERATURE, constants=DEFAULT_CONSTANTS):
    """
    Closed-form stable communication duration over beta and offered-rate grids.

    Args:
        chips (dict): Label -> ChipProfile (the chip family)
        betas (array-like): Beta values
        rates (array-like): Offered rates in bits/s
        rf (RfChainConfig): RF chain parameters
        plate (SurfacePlate): Hotspot plate

    Returns:
        pd.DataFrame: One row per (chip, beta, rate); durations at or below R_max are inf with unbounded=True
    """
    betas = np.asarray(betas, dtype=float)
    rates = np.asarray(rates, dtype=float)
    if betas.size == 0 or rates.size == 0:
        raise UnitError("beta and rate grids must be non-empty")
    rows = []
    for label, chip in chips.items():
        for beta in betas:
            profile = chip.with_beta(float(beta))
            r_max = max_receiving_rate(profile, rf, temp, constants)
            for rate_bps in rates:
                duration = stable_duration(heat_report(profile, rf, Rate(float(rate_bps)), temp, constants), plate)
                rows.append({
                    'node': label,
                    'node_nm': chip.node.feature_size_nm,
                    'beta': float(beta),
                    'rate_bps': float(rate_bps),
                    'r_max_bps': r_max.bps,
                    'duration_s': duration,
                    'unbounded': math.isinf(duration),
                })
    return pd.DataFrame(rows, columns=FIG3B_COLUMNS)
