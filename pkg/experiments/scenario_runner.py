"""
Experiment runner: configuration loading, parameter overrides, sweeps and the
figure scenarios, producing a deterministic dataset plus a summary block.
"""
import itertools
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import pandas as pd
import yaml

# Add parent directory to path to import config and utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import BANDWIDTHS_HZ, BETA_MAX, CSV_FLOAT_FORMAT, DEFAULT_SNR_DB, N_TRX, SWEEP_WORKERS
from experiments.presets import DEFAULT_RF, PRESETS, Scenario, SweepAxis, chip_preset, node_preset
from models.core_model import (
    LANDAUER_TEMPERATURE, ChipProfile, Power, Rate, RfChainConfig, SurfacePlate, Temperature, parse_hertz, parse_node,
)
from models.landauer_compute import max_receiving_rate, rmax_vs_beta
from models.link_adaptation import LinkConfig, adapt, adaptation_sweep, crossover_snr, db_to_linear
from models.session_sim import reproduce_fig3b
from models.thermal import heat_report, stable_duration
from utils.exceptions import ConfigError, LandauerRateError, ScenarioError, UnitError

logger = logging.getLogger(__name__)

# Closed-form check point for the duration scenario and its graphical reading
REFERENCE_BETA = 0.10
REFERENCE_RATE = Rate.from_gbps(4.0)
REFERENCE_GRAPHICAL_DURATION_S = 3.0


class OutputFormat(Enum):
    CSV = 'csv'
    JSON = 'json'

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        for member in cls:
            if member.value == str(text).strip().lower():
                return member
        raise ConfigError(f"unknown output format '{text}' (expected csv or json)", 'format')


@dataclass(frozen=True)
class ModelInputs:
    """Everything one model evaluation needs."""
    chip: ChipProfile
    rf: RfChainConfig
    plate: SurfacePlate
    link: Optional[LinkConfig] = None
    offered_rate: Optional[Rate] = None
    temperature: Temperature = LANDAUER_TEMPERATURE


def default_inputs(node_nm=5):
    return ModelInputs(chip=chip_preset(node_nm), rf=DEFAULT_RF, plate=SurfacePlate())


def _as_float(value):
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    return float(value)


def _as_int(value):
    number = _as_float(value)
    if not number.is_integer():
        raise ValueError(f"expected an integer, got {value!r}")
    return int(number)


OVERRIDE_KEYS = {
    'chip.beta': _as_float,
    'chip.k_bp': _as_float,
    'chip.fanout_f0': _as_float,
    'chip.activity_alpha': _as_float,
    'chip.p_td': lambda v: Power(_as_float(v)),
    'chip.node': lambda v: node_preset(parse_node(v)),
    'node.feature_size_nm': _as_float,
    'node.gap_factor': _as_float,
    'rf.n_trx': _as_int,
    'rf.p_lna': lambda v: Power(_as_float(v)),
    'rf.pae_eta': _as_float,
    'rf.lambda_coupling': _as_float,
    'plate.specific_heat': _as_float,
    'plate.density': _as_float,
    'plate.area': _as_float,
    'plate.thickness': _as_float,
    'plate.leakage_w_per_k': _as_float,
    'plate.t_envir_c': lambda v: Temperature.from_celsius(_as_float(v)),
    'plate.t_safe_c': lambda v: Temperature.from_celsius(_as_float(v)),
    'link.bandwidth': parse_hertz,
    'link.streams': _as_int,
    'link.snr_db': _as_float,
    'offered_rate': Rate.parse,
    'temperature_k': lambda v: Temperature(_as_float(v)),
}

FIELD_NAMES = {
    'plate.t_envir_c': 't_envir',
    'plate.t_safe_c': 't_safe',
    'link.bandwidth': 'bandwidth_hz',
}


def _axis_number(name, value):
    """Numeric value of a sweep endpoint, honouring unit suffixes on rate and bandwidth axes."""
    if name == 'offered_rate':
        return Rate.parse(value).bps
    if name == 'link.bandwidth':
        return parse_hertz(value)
    return _as_float(value)


def _build(section_keys, factory):
    try:
        return factory()
    except (UnitError, ValueError, TypeError) as e:
        raise ConfigError(str(e), ', '.join(section_keys)) from None


def apply_overrides(inputs, overrides, unchecked=False):
    """
    Apply "section.field" overrides, validating every touched record.

    Args:
        inputs (ModelInputs): Base inputs
        overrides (dict): Override key -> value
        unchecked (bool): Allow F0/alpha outside their typical ranges and eta = 1

    Returns:
        ModelInputs: New inputs

    Raises:
        ConfigError: Unknown key or a value the target record rejects (carries the field path)
    """
    sections = {}
    keys = {}
    for key, value in (overrides or {}).items():
        if key not in OVERRIDE_KEYS:
            raise ConfigError(f"unknown override (expected one of {sorted(OVERRIDE_KEYS)})", key)
        try:
            converted = OVERRIDE_KEYS[key](value)
        except (UnitError, ValueError, TypeError) as e:
            raise ConfigError(str(e), key) from None
        section = key.split('.')[0] if '.' in key else ''
        name = FIELD_NAMES.get(key, key.split('.')[-1])
        sections.setdefault(section, {})[name] = converted
        keys.setdefault(section, []).append(key)

    chip_fields = dict(sections.get('chip', {}))
    node = chip_fields.pop('node', inputs.chip.node)
    if 'node' in sections:
        node = _build(keys['node'], lambda: replace(node, **sections['node']))
    checked = inputs.chip.checked and not unchecked
    chip = _build(keys.get('chip', []) + keys.get('node', []),
                  lambda: replace(inputs.chip, node=node, checked=checked, **chip_fields))
    rf = _build(keys.get('rf', []),
                lambda: replace(inputs.rf, checked=inputs.rf.checked and not unchecked, **sections.get('rf', {})))
    plate = _build(keys.get('plate', []), lambda: replace(inputs.plate, **sections.get('plate', {})))

    link = inputs.link
    if 'link' in sections:
        link_fields = dict(sections['link'])
        if 'snr_db' in link_fields:
            link_fields['snr_linear'] = db_to_linear(link_fields.pop('snr_db'))
        base = link or LinkConfig.from_db(BANDWIDTHS_HZ[1], DEFAULT_SNR_DB, N_TRX)
        link = _build(keys['link'], lambda: replace(base, **link_fields))

    top = sections.get('', {})
    return ModelInputs(
        chip=chip,
        rf=rf,
        plate=plate,
        link=link,
        offered_rate=top.get('offered_rate', inputs.offered_rate),
        temperature=top.get('temperature_k', inputs.temperature),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """A scenario with optional overrides and sweep axes."""
    scenario: Scenario = Scenario.CUSTOM
    overrides: dict = field(default_factory=dict)
    sweep: Tuple[SweepAxis, ...] = ()
    output_format: OutputFormat = OutputFormat.CSV
    unchecked: bool = False

    @classmethod
    def from_dict(cls, data):
        """
        Build a config from a parsed document.

        Raises:
            ConfigError: Malformed document
        """
        if not isinstance(data, dict):
            raise ConfigError("config document must be a mapping")
        allowed = {'scenario', 'format', 'unchecked', 'overrides', 'sweep'}
        for key in data:
            if key not in allowed:
                raise ConfigError(f"unknown key (expected one of {sorted(allowed)})", str(key))
        overrides = data.get('overrides') or {}
        if not isinstance(overrides, dict):
            raise ConfigError("overrides must be a mapping", 'overrides')
        axes = []
        for index, entry in enumerate(data.get('sweep') or []):
            path = f"sweep[{index}]"
            if not isinstance(entry, dict) or set(entry) != {'name', 'start', 'stop', 'points'}:
                raise ConfigError("each sweep axis needs exactly name, start, stop, points", path)
            name = str(entry['name'])
            try:
                start = _axis_number(name, entry['start'])
                stop = _axis_number(name, entry['stop'])
            except (UnitError, ValueError, TypeError) as e:
                raise ConfigError(str(e), path) from None
            axes.append(SweepAxis(name=name, start=start, stop=stop, points=entry['points']))
        unchecked = data.get('unchecked', False)
        if not isinstance(unchecked, bool):
            raise ConfigError("unchecked must be true or false", 'unchecked')
        return cls(
            scenario=Scenario.parse(data.get('scenario', Scenario.CUSTOM.value)),
            overrides={str(k): v for k, v in overrides.items()},
            sweep=tuple(axes),
            output_format=OutputFormat.parse(data.get('format', OutputFormat.CSV.value)),
            unchecked=unchecked,
        )

    def validate(self):
        """
        Type-check overrides and sweep axes before anything is computed.

        Raises:
            ConfigError: With the offending field path
        """
        names = [axis.name for axis in self.sweep]
        for axis in self.sweep:
            if axis.name not in OVERRIDE_KEYS:
                raise ConfigError(f"cannot sweep '{axis.name}'", f"sweep.{axis.name}")
            if axis.name in self.overrides:
                raise ConfigError("parameter is both overridden and swept", f"sweep.{axis.name}")
        if len(set(names)) != len(names):
            raise ConfigError("duplicate sweep axis", 'sweep')
        if self.scenario is not Scenario.CUSTOM:
            preset = PRESETS[self.scenario]
            if any(name != preset.axis.name for name in names):
                raise ConfigError(f"{self.scenario.value} only sweeps '{preset.axis.name}'", 'sweep')
        base = apply_overrides(default_inputs(), self.overrides, self.unchecked)
        # Axes are linear, so both endpoints bound every swept value
        for axis in self.sweep:
            for value in (axis.start, axis.stop):
                try:
                    apply_overrides(base, {axis.name: float(value)}, self.unchecked)
                except (ConfigError, ValueError, TypeError) as e:
                    raise ConfigError(f"endpoint {value} rejected ({e})", f"sweep.{axis.name}") from None
        return self


def load_experiment_config(path):
    """
    Read an experiment config from a YAML file.

    Args:
        path (str): Config file path

    Returns:
        ExperimentConfig: Parsed config

    Raises:
        ConfigError: Unreadable file, invalid YAML or schema violation
    """
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            data = yaml.safe_load(handle)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML: {e}") from None
    logger.info(f"Loaded experiment config from {path}")
    return ExperimentConfig.from_dict(data or {})


@dataclass
class ScenarioResult:
    scenario: Scenario
    dataset: pd.DataFrame
    summary: dict
    parameters: dict = field(default_factory=dict)


def _parallel_map(function, items):
    """Map over worker threads; results keep the input order."""
    items = list(items)
    if SWEEP_WORKERS <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=SWEEP_WORKERS) as pool:
        return list(pool.map(function, items))


def evaluate_point(inputs):
    """
    Evaluate R_max and, when present, the heat balance at the offered rate and the link adaptation.

    Args:
        inputs (ModelInputs): Model inputs

    Returns:
        dict: Flat row of results
    """
    chip = inputs.chip
    r_max = max_receiving_rate(chip, inputs.rf, inputs.temperature)
    row = {
        'node_nm': chip.node.feature_size_nm,
        'gap_factor': chip.node.gap_factor,
        'beta': chip.beta,
        'r_max_bps': r_max.bps,
    }
    if inputs.offered_rate is not None:
        report = heat_report(chip, inputs.rf, inputs.offered_rate, inputs.temperature)
        duration = stable_duration(report, inputs.plate)
        row.update({
            'offered_rate_bps': inputs.offered_rate.bps,
            'h_total_w': report.h_total.watts,
            'excess_w': report.excess.watts,
            'duration_s': duration,
            'unbounded': math.isinf(duration),
        })
    if inputs.link is not None:
        decision = adapt(r_max, inputs.link)
        row.update({
            'bandwidth_hz': inputs.link.bandwidth_hz,
            'streams': inputs.link.streams,
            'snr_db': inputs.link.snr_db,
            'r_downlink_bps': decision.r_downlink.bps,
            'r_phone_bps': decision.r_phone.bps,
            'binding': decision.binding_constraint.value,
            'redundancy_bps': decision.redundancy.bps,
        })
    return row


def _preset_grid(preset, config):
    for axis in config.sweep:
        if axis.name == preset.axis.name:
            return axis.values()
    return preset.axis.values()


def _inputs_for(node_nm, config, link=None):
    base = replace(default_inputs(node_nm), link=link)
    return apply_overrides(base, config.overrides, config.unchecked)


def _run_fig3a(preset, config):
    chips = {}
    inputs = None
    for nm in preset.nodes:
        inputs = _inputs_for(nm, config)
        chips[f"{nm}nm"] = inputs.chip
    dataset = rmax_vs_beta(chips, inputs.rf, _preset_grid(preset, config), inputs.temperature)
    endpoints = {
        label: max_receiving_rate(chip.with_beta(BETA_MAX), inputs.rf, inputs.temperature).gbps
        for label, chip in chips.items()
    }
    summary = {
        'beta_max': BETA_MAX,
        'r_max_at_beta_max_gbps': endpoints,
        'gap_factors': {label: chip.node.gap_factor for label, chip in chips.items()},
    }
    return dataset, summary


def _run_fig3b(preset, config):
    inputs = _inputs_for(preset.nodes[0], config)
    label = f"{preset.nodes[0]}nm"
    dataset = reproduce_fig3b({label: inputs.chip}, preset.betas, _preset_grid(preset, config),
                              inputs.rf, inputs.plate, inputs.temperature)
    reference_chip = inputs.chip.with_beta(REFERENCE_BETA)
    reference = heat_report(reference_chip, inputs.rf, REFERENCE_RATE, inputs.temperature)
    summary = {
        'node': label,
        'r_max_gbps': {
            f"{beta:g}": max_receiving_rate(inputs.chip.with_beta(beta), inputs.rf, inputs.temperature).gbps
            for beta in preset.betas
        },
        'reference_point': {
            'beta': REFERENCE_BETA,
            'rate_gbps': REFERENCE_RATE.gbps,
            'duration_s': stable_duration(reference, inputs.plate),
            'graphical_reading_s': REFERENCE_GRAPHICAL_DURATION_S,
        },
    }
    return dataset, summary


def _run_fig4(preset, config):
    link = LinkConfig.from_db(preset.bandwidth_hz, DEFAULT_SNR_DB, preset.streams)
    inputs = _inputs_for(preset.nodes[0], config, link)
    bandwidth = inputs.link.bandwidth_hz
    streams = inputs.link.streams
    r_max = max_receiving_rate(inputs.chip, inputs.rf, inputs.temperature)
    dataset = adaptation_sweep(r_max, bandwidth, streams, _preset_grid(preset, config))
    crossover = crossover_snr(r_max, bandwidth, streams)
    summary = {
        'node': f"{preset.nodes[0]}nm",
        'bandwidth_hz': bandwidth,
        'streams': streams,
        'r_max_gbps': r_max.gbps,
        'crossover_snr_db': crossover,
        'regimes': {
            'ChannelLimited': f"SNR <= {crossover:.2f} dB: R_phone takes the value of R_downlink",
            'TerminalLimited': f"SNR > {crossover:.2f} dB: R_phone takes the value of R_max",
        },
        'binding_counts': {name: int(count) for name, count in dataset['binding'].value_counts().sort_index().items()},
    }
    return dataset, summary


def _run_custom(config):
    axes = config.sweep
    grids = [axis.values() for axis in axes]
    combos = list(itertools.product(*grids)) if axes else [()]
    base = default_inputs()

    def run_one(values):
        point = dict(config.overrides)
        point.update({axis.name: float(value) for axis, value in zip(axes, values)})
        row = {axis.name: float(value) for axis, value in zip(axes, values)}
        row.update(evaluate_point(apply_overrides(base, point, config.unchecked)))
        return row

    rows = _parallel_map(run_one, combos)
    dataset = pd.DataFrame(rows, columns=list(rows[0].keys()))
    summary = {
        'points': len(dataset),
        'axes': [axis.name for axis in axes],
        'r_max_gbps': {'min': dataset['r_max_bps'].min() / 1e9, 'max': dataset['r_max_bps'].max() / 1e9},
    }
    if 'duration_s' in dataset:
        finite = dataset.loc[~dataset['unbounded'], 'duration_s']
        summary['min_duration_s'] = float(finite.min()) if not finite.empty else None
        summary['unbounded_points'] = int(dataset['unbounded'].sum())
    if 'binding' in dataset:
        summary['binding_counts'] = {k: int(v) for k, v in dataset['binding'].value_counts().sort_index().items()}
    return dataset, summary


RUNNERS = {
    Scenario.FIG3A: _run_fig3a,
    Scenario.FIG3B: _run_fig3b,
    Scenario.FIG4A: _run_fig4,
    Scenario.FIG4B: _run_fig4,
    Scenario.FIG4C: _run_fig4,
}


def run_scenario(config):
    """
    Run a scenario and return its dataset and summary.

    Args:
        config (ExperimentConfig): Scenario, overrides and sweep

    Returns:
        ScenarioResult: Deterministic dataset plus headline numbers

    Raises:
        ConfigError: Invalid config (raised before any computation)
        ScenarioError: A model error raised while the scenario was running
    """
    config.validate()
    name = config.scenario.value
    logger.info(f"Running scenario {name}")
    try:
        if config.scenario is Scenario.CUSTOM:
            dataset, summary = _run_custom(config)
        else:
            dataset, summary = RUNNERS[config.scenario](PRESETS[config.scenario], config)
    except ConfigError:
        raise
    except LandauerRateError as e:
        logger.error(f"Scenario {name} failed: {e}")
        raise ScenarioError(name, e) from e
    logger.info(f"Scenario {name} produced {len(dataset)} rows")
    parameters = {
        'overrides': dict(config.overrides),
        'sweep': [vars(axis) for axis in config.sweep],
        'unchecked': config.unchecked,
    }
    return ScenarioResult(scenario=config.scenario, dataset=dataset, summary=summary, parameters=parameters)


def _json_safe(value):
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dataset_to_csv(dataset, path=None):
    """CSV with 6 significant digits and '\\n' line endings; returns the text when no path is given."""
    return dataset.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')


def summary_to_json(summary):
    return json.dumps(_json_safe(summary), indent=2)


def result_to_json(result):
    """Full-precision JSON document; non-finite values become null."""
    document = {
        'scenario': result.scenario.value,
        'summary': result.summary,
        'rows': result.dataset.to_dict(orient='records'),
    }
    return json.dumps(_json_safe(document), indent=2)


def write_result(result, output_format=OutputFormat.CSV, path=None):
    """
    Render a scenario result and optionally write it to a file.

    Returns:
        str: Rendered text
    """
    text = result_to_json(result) if output_format is OutputFormat.JSON else dataset_to_csv(result.dataset)
    if path is not None:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info(f"Wrote {len(result.dataset)} rows to {path}")
    return text
