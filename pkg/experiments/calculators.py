"""
Single-line calculators behind `cli.py calc`.
Each returns the formatted result with its unit.
"""
import logging
import math
import os
import sys

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import BETA_MAX, DEFAULT_SNR_DB, N_TRX
from experiments.presets import DEFAULT_RF, chip_preset
from experiments.scenario_runner import REFERENCE_BETA, REFERENCE_GRAPHICAL_DURATION_S, REFERENCE_RATE
from models.core_model import Power, Rate, SurfacePlate, format_rate, parse_hertz, parse_node
from models.landauer_compute import max_receiving_rate
from models.link_adaptation import LinkConfig, crossover_snr, downlink_rate
from models.thermal import heat_report, stable_duration
from utils.exceptions import UnitError

logger = logging.getLogger(__name__)


def calc_rmax(node='5nm', beta=BETA_MAX, rf=DEFAULT_RF):
    """'9.74 Gbps' for the 5 nm preset at beta = 0.34."""
    chip = chip_preset(parse_node(node), float(beta))
    return format_rate(max_receiving_rate(chip, rf))


def calc_duration(node='5nm', beta=REFERENCE_BETA, rate='4Gbps', rf=DEFAULT_RF, plate=None):
    """
    Stable communication duration at an offered rate.

    Returns:
        str: e.g. '3.97 s', or 'unbounded' when the rate is at or below R_max
    """
    chip = chip_preset(parse_node(node), float(beta))
    offered = Rate.parse(rate)
    duration = stable_duration(heat_report(chip, rf, offered), plate or SurfacePlate())
    if math.isinf(duration):
        return "unbounded (rate at or below R_max)"
    text = f"{duration:.2f} s"
    if math.isclose(chip.beta, REFERENCE_BETA) and math.isclose(offered.bps, REFERENCE_RATE.bps) \
            and parse_node(node) == 5:
        text += f" (closed form; a graphical reading gives about {REFERENCE_GRAPHICAL_DURATION_S:g} s)"
    return text


def calc_crossover(rmax, bw, streams=N_TRX):
    """'0.50 dB' for 2.17 Gbps over 4 x 500 MHz."""
    return f"{crossover_snr(Rate.parse(rmax), parse_hertz(bw), int(streams)):.2f} dB"


def calc_downlink(bw, snr_db=DEFAULT_SNR_DB, streams=N_TRX):
    link = LinkConfig.from_db(parse_hertz(bw), float(snr_db), int(streams))
    return format_rate(downlink_rate(link))


def calc_heat_density(power_w=None, package_cm2=None, product=None, catalog=None):
    """
    Heat density from power and package area, or of a catalog product.

    Returns:
        str: e.g. '5.00 W/cm²'
    """
    from data.chipdb import ChipSpec, DeviceClass, find_spec, heat_density, load_catalog

    if product is not None:
        spec = find_spec(catalog if catalog is not None else load_catalog(), product)
    elif power_w is not None and package_cm2 is not None:
        spec = ChipSpec(DeviceClass.SMARTPHONE, '', 'ad hoc', 0, Power(float(power_w)), float(package_cm2))
    else:
        raise UnitError("heat density needs --power and --area, or --product")
    return f"{heat_density(spec):.2f} W/cm²"


CALCULATORS = {
    'rmax': calc_rmax,
    'duration': calc_duration,
    'crossover': calc_crossover,
    'downlink': calc_downlink,
    'heatdensity': calc_heat_density,
}
