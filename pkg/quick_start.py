"""
Quick start script to reproduce every figure scenario in one go.
Writes <scenario>.csv per preset and a combined summary.json into the results directory.
"""
import argparse
import json
import logging
import os
import sys

from config import LOG_FORMAT, LOG_LEVEL, RESULTS_DIR
from experiments.presets import Scenario
from experiments.scenario_runner import ExperimentConfig, dataset_to_csv, run_scenario, summary_to_json
from utils.exceptions import LandauerRateError

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger(__name__)

FIGURE_SCENARIOS = [s for s in Scenario if s is not Scenario.CUSTOM]


def run_all(results_dir=RESULTS_DIR, store=False):
    """
    Run every figure preset and write its dataset.

    Args:
        results_dir (str): Output directory, created if missing
        store (bool): Also record each run in the results database

    Returns:
        dict: Scenario name -> summary
    """
    os.makedirs(results_dir, exist_ok=True)
    summaries = {}
    for scenario in FIGURE_SCENARIOS:
        logger.info("=" * 50)
        logger.info(f"Scenario {scenario.value}")
        logger.info("=" * 50)
        result = run_scenario(ExperimentConfig(scenario=scenario))
        path = os.path.join(results_dir, f"{scenario.value}.csv")
        dataset_to_csv(result.dataset, path)
        logger.info(f"Wrote {len(result.dataset)} rows to {path}")
        if store:
            from utils.database import save_scenario_run
            save_scenario_run(scenario.value, result.parameters, result.summary, result.dataset)
        summaries[scenario.value] = result.summary

    summary_path = os.path.join(results_dir, 'summary.json')
    with open(summary_path, 'w', encoding='utf-8') as handle:
        handle.write(summary_to_json(summaries))
    logger.info(f"Summary written to {summary_path}")
    return json.loads(summary_to_json(summaries))


def main(argv=None):
    """Main quick start function."""
    parser = argparse.ArgumentParser(description='Reproduce every figure scenario')
    parser.add_argument('--results_dir', type=str, default=RESULTS_DIR,
                       help=f'Output directory (default: {RESULTS_DIR})')
    parser.add_argument('--store', action='store_true',
                       help='Record every run in the results database')
    args = parser.parse_args(argv)

    try:
        summaries = run_all(args.results_dir, args.store)
    except LandauerRateError as e:
        logger.error(f"Quick start failed: {e}")
        return 1

    for name, endpoint in summaries['fig3a']['r_max_at_beta_max_gbps'].items():
        logger.info(f"R_max at beta=0.34, {name}: {endpoint:.2f} Gbps")
    logger.info(f"Crossover SNR (10 nm, 500 MHz): {summaries['fig4b']['crossover_snr_db']:.2f} dB")
    logger.info("Done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
