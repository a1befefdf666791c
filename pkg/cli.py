"""
Command-line front end for the receiving-rate analysis.

Verbs:
    calc      single-line calculators (rmax, duration, crossover, downlink, heatdensity)
    scenario  run a figure preset or a custom sweep and emit its dataset
    chipdb    list, validate, summarise or store the chip catalog
    simulate  time-stepped receive session with a throttle policy
"""
import argparse
import logging
import os
import sys

# Add project root to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import DEFAULT_OUTPUT_FORMAT, LOG_FORMAT, LOG_LEVEL, SIM_STEP_FRACTION, SIM_STEP_S
from data.chipdb import CHIP_CATALOG_PATH, DeviceClass, catalog_summary, catalog_to_dataframe, load_catalog, save_catalog
from experiments.calculators import CALCULATORS
from experiments.presets import Scenario, chip_preset
from experiments.scenario_runner import (
    ExperimentConfig, OutputFormat, dataset_to_csv, load_experiment_config, run_scenario,
    summary_to_json, write_result,
)
from models.core_model import Rate, RfChainConfig, SurfacePlate, parse_hertz, parse_node
from models.link_adaptation import LinkConfig
from models.session_sim import RecoveryMode, ThrottleMode, ThrottlePolicy, simulate_session
from utils.exceptions import LandauerRateError

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(description='Smartphone maximum receiving rate under Landauer and thermal limits')
    parser.add_argument('--config', type=str, default=None,
                       help='YAML experiment config')
    parser.add_argument('--output', type=str, default=None,
                       help='Write data to this file instead of stdout')
    parser.add_argument('--format', type=str, choices=['csv', 'json'], default=None,
                       help=f'Output format (default: {DEFAULT_OUTPUT_FORMAT})')
    parser.add_argument('--seed', type=int, default=None,
                       help='Reserved; every model is deterministic')
    parser.add_argument('--log-level', type=str, default=None,
                       help='Logging level (default: LOG_LEVEL from the environment)')
    verbs = parser.add_subparsers(dest='verb', required=True)

    calc = verbs.add_parser('calc', help='Single-line calculators')
    calcs = calc.add_subparsers(dest='calculator', required=True)
    rmax = calcs.add_parser('rmax', help='Maximum receiving rate')
    rmax.add_argument('--node', default='5nm')
    rmax.add_argument('--beta', type=float, default=0.34)
    duration = calcs.add_parser('duration', help='Stable communication duration')
    duration.add_argument('--node', default='5nm')
    duration.add_argument('--beta', type=float, default=0.10)
    duration.add_argument('--rate', default='4Gbps')
    crossover = calcs.add_parser('crossover', help='SNR where R_downlink equals R_max')
    crossover.add_argument('--rmax', required=True)
    crossover.add_argument('--bw', required=True)
    crossover.add_argument('--streams', type=int, default=4)
    downlink = calcs.add_parser('downlink', help='Downlink rate')
    downlink.add_argument('--bw', required=True)
    downlink.add_argument('--snr-db', type=float, default=10.0)
    downlink.add_argument('--streams', type=int, default=4)
    density = calcs.add_parser('heatdensity', help='Chip heat density')
    density.add_argument('--power', type=float, default=None, help='Power in W')
    density.add_argument('--area', type=float, default=None, help='Package area in cm^2')
    density.add_argument('--product', default=None, help='Catalog product name')
    density.add_argument('--catalog', default=CHIP_CATALOG_PATH)

    scenario = verbs.add_parser('scenario', help='Run a figure preset or custom sweep')
    scenario.add_argument('name', nargs='?', default=None, choices=[s.value for s in Scenario])
    scenario.add_argument('--store', action='store_true', help='Record the run in DATABASE_URL')

    chipdb = verbs.add_parser('chipdb', help='Chip catalog queries')
    chipdb.add_argument('action', choices=['list', 'validate', 'summary', 'store'])
    chipdb.add_argument('--catalog', default=CHIP_CATALOG_PATH)
    chipdb.add_argument('--device', default=None, help='Server, Laptop, Tablet or Smartphone')

    simulate = verbs.add_parser('simulate', help='Time-stepped receive session')
    simulate.add_argument('--node', default='5nm')
    simulate.add_argument('--beta', type=float, default=0.10)
    simulate.add_argument('--rate', default=None, help='Offered rate (default: full downlink rate)')
    simulate.add_argument('--policy', choices=['hard', 'stepdown'], default='hard')
    simulate.add_argument('--step-fraction', type=float, default=SIM_STEP_FRACTION)
    simulate.add_argument('--recovery', choices=['none', 'cooldown'], default='none')
    simulate.add_argument('--duration', type=float, default=10.0)
    simulate.add_argument('--step', type=float, default=SIM_STEP_S)
    simulate.add_argument('--bw', default=None, help='Downlink bandwidth; caps the offered rate')
    simulate.add_argument('--streams', type=int, default=4)
    simulate.add_argument('--snr-db', type=float, default=10.0)
    return parser


def _emit(text, output):
    if output:
        with open(output, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text if text.endswith('\n') else text + '\n')


def run_calc(args):
    if args.calculator == 'rmax':
        return CALCULATORS['rmax'](node=args.node, beta=args.beta)
    if args.calculator == 'duration':
        return CALCULATORS['duration'](node=args.node, beta=args.beta, rate=args.rate)
    if args.calculator == 'crossover':
        return CALCULATORS['crossover'](rmax=args.rmax, bw=args.bw, streams=args.streams)
    if args.calculator == 'downlink':
        return CALCULATORS['downlink'](bw=args.bw, snr_db=args.snr_db, streams=args.streams)
    catalog = load_catalog(args.catalog) if args.product else None
    return CALCULATORS['heatdensity'](power_w=args.power, package_cm2=args.area, product=args.product, catalog=catalog)


def run_scenario_verb(args):
    config = load_experiment_config(args.config) if args.config else ExperimentConfig()
    if args.name:
        config = ExperimentConfig(scenario=Scenario.parse(args.name), overrides=config.overrides,
                                  sweep=config.sweep, output_format=config.output_format,
                                  unchecked=config.unchecked)
    output_format = OutputFormat.parse(args.format) if args.format else config.output_format
    result = run_scenario(config)
    if args.store:
        from utils.database import save_scenario_run
        save_scenario_run(result.scenario.value, result.parameters, result.summary, result.dataset)
    text = write_result(result, output_format)
    if output_format is OutputFormat.CSV:
        sys.stderr.write(summary_to_json(result.summary) + '\n')
    _emit(text, args.output)


def run_chipdb(args):
    specs = load_catalog(args.catalog)
    if args.device:
        device = DeviceClass.parse(args.device)
        specs = [spec for spec in specs if spec.device_class is device]
    if args.action == 'validate':
        _emit(f"{len(specs)} rows valid", None)
    elif args.action == 'store':
        save_catalog(specs)
        _emit(f"stored {len(specs)} rows", None)
    else:
        frame = catalog_summary(specs) if args.action == 'summary' else catalog_to_dataframe(specs)
        if args.format == 'json':
            _emit(frame.to_json(orient='records', indent=2), args.output)
        else:
            _emit(dataset_to_csv(frame), args.output)


def run_simulate(args):
    chip = chip_preset(parse_node(args.node), args.beta)
    link = LinkConfig.from_db(parse_hertz(args.bw), args.snr_db, args.streams) if args.bw else None
    policy = ThrottlePolicy(
        mode=ThrottleMode.STEP_DOWN if args.policy == 'stepdown' else ThrottleMode.HARD_SHUTOFF,
        step_fraction=args.step_fraction,
        recovery=RecoveryMode.LINEAR_COOLDOWN if args.recovery == 'cooldown' else RecoveryMode.NONE,
    )
    offered = Rate.parse(args.rate) if args.rate else None
    trace = simulate_session(chip, RfChainConfig(), SurfacePlate(), link=link, policy=policy,
                             duration=args.duration, step=args.step, offered_rate=offered)
    first = trace.first_throttle_time
    sys.stderr.write(f"first throttle: {'never' if first is None else f'{first:.2f} s'}, "
                     f"throttled steps: {trace.throttle_count}\n")
    _emit(trace.to_json() if args.format == 'json' else trace.to_csv(), args.output)


def main(argv=None):
    """Main entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    if args.seed is not None:
        logger.info(f"Seed {args.seed} has no effect; all models are deterministic")
    try:
        if args.verb == 'calc':
            _emit(run_calc(args), args.output)
        elif args.verb == 'scenario':
            run_scenario_verb(args)
        elif args.verb == 'chipdb':
            run_chipdb(args)
        else:
            run_simulate(args)
    except (LandauerRateError, ValueError) as e:
        logger.error(f"Error in main function: {e}")
        sys.stderr.write(f"error: {e}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
