"""
Unit tests for the time-stepped session simulator and the duration table.
"""
import json
import math
import sys
import os

import numpy as np
import pytest

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.core_model import ChipProfile, Rate, RfChainConfig, SemiconductorNode, SurfacePlate
from models.landauer_compute import max_receiving_rate
from models.link_adaptation import LinkConfig, downlink_rate
from models.session_sim import (
    TRACE_COLUMNS, RecoveryMode, ThrottleMode, ThrottlePolicy, reproduce_fig3b, simulate_session,
)
from models.thermal import heat_report, stable_duration
from utils.exceptions import InvalidStep, UnitError

NODE_5NM = SemiconductorNode(feature_size_nm=5, gap_factor=454.2)
CHIP = ChipProfile(NODE_5NM, beta=0.10)
RF = RfChainConfig()
PLATE = SurfacePlate()
STEP = 0.01


class TestSimulateSession:
    """Test cases for simulate_session."""

    def test_first_throttle_matches_closed_form(self):
        trace = simulate_session(CHIP, RF, PLATE, duration=6.0, step=STEP, offered_rate=Rate.from_gbps(4))
        closed_form = stable_duration(heat_report(CHIP, RF, Rate.from_gbps(4)), PLATE)
        assert trace.first_throttle_time == pytest.approx(3.97, abs=STEP + 0.02)
        assert abs(trace.first_throttle_time - closed_form) <= STEP + 1e-9

    def test_hard_shutoff_stops_reception(self):
        trace = simulate_session(CHIP, RF, PLATE, duration=6.0, step=STEP, offered_rate=Rate.from_gbps(4))
        frame = trace.to_dataframe()
        after = frame[frame['elapsed_s'] >= trace.first_throttle_time]
        assert (after['rate_bps'] == 0).all()
        assert trace.throttle_count == 1

    def test_oracle_equivalence(self):
        """First throttle time agrees with stable_duration within one step over random sessions."""
        rng = np.random.default_rng(61)
        for _ in range(1000):
            chip = CHIP.with_beta(float(rng.uniform(0.01, 0.34)))
            r_max = max_receiving_rate(chip, RF)
            offered = r_max.scaled(float(rng.uniform(1.1, 4.0)))
            tau = stable_duration(heat_report(chip, RF, offered), PLATE)
            trace = simulate_session(chip, RF, PLATE, duration=tau + 3 * STEP, step=STEP, offered_rate=offered)
            assert trace.first_throttle_time is not None
            assert abs(trace.first_throttle_time - tau) <= STEP + 1e-9

    def test_rate_below_rmax_is_steady(self):
        for policy in (ThrottlePolicy(), ThrottlePolicy(mode=ThrottleMode.STEP_DOWN)):
            trace = simulate_session(CHIP, RF, PLATE, policy=policy, duration=5.0, offered_rate=Rate.from_gbps(2))
            assert (trace.rate_bps == 2e9).all()
            assert (trace.t_sur_k == PLATE.t_envir.kelvin).all()
            assert trace.first_throttle_time is None

    def test_step_down_settles_below_rmax(self):
        policy = ThrottlePolicy(mode=ThrottleMode.STEP_DOWN, step_fraction=0.5)
        trace = simulate_session(CHIP, RF, PLATE, policy=policy, duration=10.0, offered_rate=Rate.from_gbps(4))
        assert trace.throttle_count == 1
        assert trace.rate_bps[-1] == pytest.approx(2e9)
        assert trace.rate_bps[-1] < max_receiving_rate(CHIP, RF).bps

    def test_exhausted_step_down_stops_reception(self):
        cases = [(1.0, Rate.from_gbps(4)), (0.99, Rate.from_gbps(20))]
        for step_fraction, offered in cases:
            policy = ThrottlePolicy(mode=ThrottleMode.STEP_DOWN, step_fraction=step_fraction)
            trace = simulate_session(CHIP, RF, PLATE, policy=policy, duration=8.0, step=STEP, offered_rate=offered)
            first = trace.first_throttle_time
            assert first is not None
            assert (trace.rate_bps[trace.elapsed_s >= first] == 0).all()
            assert trace.rate_bps[-1] <= max_receiving_rate(CHIP, RF).bps
            assert (trace.t_sur_k <= PLATE.t_safe.kelvin).all()
            absorbed = np.sum(np.maximum(trace.h_total_w - CHIP.p_td.watts, 0.0)) * STEP
            stored = PLATE.heat_capacity * (trace.t_sur_k[-1] - PLATE.t_envir.kelvin)
            assert absorbed == pytest.approx(stored, rel=1e-6)

    def test_leaky_plate_matches_exponential_duration(self):
        leaky = SurfacePlate(leakage_w_per_k=0.05)
        offered = Rate.from_gbps(4)
        tau = stable_duration(heat_report(CHIP, RF, offered), leaky)
        assert tau == pytest.approx(7.469, abs=0.01)
        trace = simulate_session(CHIP, RF, leaky, duration=10.0, step=STEP, offered_rate=offered)
        assert abs(trace.first_throttle_time - tau) <= 2 * STEP
        # Shut off, the plate sheds heat through the leak
        assert trace.t_sur_k[-1] < leaky.t_safe.kelvin

    def test_leaky_plate_oracle(self):
        rng = np.random.default_rng(71)
        for _ in range(100):
            leaky = SurfacePlate(leakage_w_per_k=float(rng.uniform(0.001, 0.05)))
            chip = CHIP.with_beta(float(rng.uniform(0.05, 0.34)))
            offered = max_receiving_rate(chip, RF).scaled(float(rng.uniform(1.5, 4.0)))
            tau = stable_duration(heat_report(chip, RF, offered), leaky)
            if math.isinf(tau):
                continue
            trace = simulate_session(chip, RF, leaky, duration=tau + 3 * STEP, step=STEP, offered_rate=offered)
            assert trace.first_throttle_time is not None
            assert abs(trace.first_throttle_time - tau) <= 2 * STEP

    def test_safety_bound(self):
        rng = np.random.default_rng(67)
        for _ in range(50):
            policy = ThrottlePolicy(
                mode=ThrottleMode.STEP_DOWN if rng.random() < 0.5 else ThrottleMode.HARD_SHUTOFF,
                step_fraction=float(rng.uniform(0.05, 1.0)),
                recovery=RecoveryMode.LINEAR_COOLDOWN if rng.random() < 0.5 else RecoveryMode.NONE,
            )
            offered = Rate(float(rng.uniform(1e9, 2e10)))
            trace = simulate_session(CHIP, RF, PLATE, policy=policy, duration=8.0, step=0.02, offered_rate=offered)
            assert (trace.t_sur_k <= PLATE.t_safe.kelvin).all()
            assert (trace.t_sur_k >= PLATE.t_envir.kelvin).all()

    def test_energy_bookkeeping(self):
        offered = Rate.from_gbps(5)
        trace = simulate_session(CHIP, RF, PLATE, duration=2.0, step=STEP, offered_rate=offered)
        assert trace.first_throttle_time is None
        absorbed = np.sum(np.maximum(trace.h_total_w - CHIP.p_td.watts, 0.0)) * STEP
        stored = PLATE.heat_capacity * (trace.t_sur_k[-1] - PLATE.t_envir.kelvin)
        assert absorbed == pytest.approx(stored, rel=1e-6)

    def test_timestamps(self):
        trace = simulate_session(CHIP, RF, PLATE, duration=1.0, step=0.1, offered_rate=Rate.from_gbps(1))
        assert len(trace) == 10
        assert trace.elapsed_s[0] == pytest.approx(0.1)
        assert np.allclose(np.diff(trace.elapsed_s), 0.1)

    def test_invalid_step(self):
        with pytest.raises(InvalidStep):
            simulate_session(CHIP, RF, PLATE, duration=1.0, step=0.0, offered_rate=Rate.from_gbps(1))
        with pytest.raises(InvalidStep):
            simulate_session(CHIP, RF, PLATE, duration=1.0, step=2.0, offered_rate=Rate.from_gbps(1))
        with pytest.raises(ValueError):
            simulate_session(CHIP, RF, PLATE, duration=1.0, step=-0.1, offered_rate=Rate.from_gbps(1))

    def test_invalid_policy(self):
        with pytest.raises(UnitError):
            ThrottlePolicy(step_fraction=0.0)
        with pytest.raises(UnitError):
            ThrottlePolicy(step_fraction=1.5)

    def test_needs_rate_or_link(self):
        with pytest.raises(UnitError):
            simulate_session(CHIP, RF, PLATE, duration=1.0)

    def test_linear_cooldown_restores_rate(self):
        policy = ThrottlePolicy(recovery=RecoveryMode.LINEAR_COOLDOWN)
        trace = simulate_session(CHIP, RF, PLATE, policy=policy, duration=12.0, offered_rate=Rate.from_gbps(4))
        assert trace.throttle_count >= 2
        first = trace.first_throttle_time
        later = trace.elapsed_s > first
        assert (trace.rate_bps[later] == 4e9).any()
        assert trace.t_sur_k[later].min() == pytest.approx(PLATE.t_envir.kelvin)

    def test_link_caps_offered_rate(self):
        link = LinkConfig.from_db(20e6, 10.0, streams=4)
        trace = simulate_session(CHIP, RF, PLATE, link=link, duration=2.0, offered_rate=Rate.from_gbps(4))
        assert trace.rate_bps[0] == pytest.approx(downlink_rate(link).bps)
        assert trace.first_throttle_time is None

    def test_full_buffer_from_link(self):
        link = LinkConfig.from_db(500e6, 10.0, streams=4)
        trace = simulate_session(CHIP, RF, PLATE, link=link, duration=5.0)
        assert trace.rate_bps[0] == pytest.approx(downlink_rate(link).bps)
        assert trace.first_throttle_time is not None

    def test_step_function_offered_rate(self):
        schedule = lambda elapsed: Rate.from_gbps(1) if elapsed < 1.0 else Rate.from_gbps(4)
        trace = simulate_session(CHIP, RF, PLATE, duration=7.0, offered_rate=schedule)
        tau = stable_duration(heat_report(CHIP, RF, Rate.from_gbps(4)), PLATE)
        assert trace.first_throttle_time == pytest.approx(1.0 + tau, abs=2 * STEP)


class TestTraceExport:
    """Test cases for CSV and JSON trace export."""

    def test_csv_header_and_determinism(self):
        trace = simulate_session(CHIP, RF, PLATE, duration=5.0, offered_rate=Rate.from_gbps(4))
        text = trace.to_csv()
        assert text.splitlines()[0] == 'elapsed_s,rate_bps,t_sur_k,h_total_w,throttled'
        assert list(trace.to_dataframe().columns) == TRACE_COLUMNS
        again = simulate_session(CHIP, RF, PLATE, duration=5.0, offered_rate=Rate.from_gbps(4)).to_csv()
        assert text == again

    def test_json_records(self, tmp_path):
        trace = simulate_session(CHIP, RF, PLATE, duration=0.5, step=0.1, offered_rate=Rate.from_gbps(1))
        records = json.loads(trace.to_json())
        assert len(records) == 5
        assert set(records[0]) == set(TRACE_COLUMNS)
        assert records[0]['throttled'] is False
        path = tmp_path / 'trace.json'
        trace.to_json(str(path))
        assert json.loads(path.read_text()) == records


class TestReproduceFig3b:
    """Test cases for the closed-form duration table."""

    def test_reference_rows(self):
        table = reproduce_fig3b({'5nm': CHIP}, [0.10, 0.34], [4e9, 9e9], RF, PLATE)
        below = table[(table['beta'] == 0.34) & (table['rate_bps'] == 9e9)].iloc[0]
        assert below['unbounded']
        assert math.isinf(below['duration_s'])
        reference = table[(table['beta'] == 0.10) & (table['rate_bps'] == 4e9)].iloc[0]
        assert reference['duration_s'] == pytest.approx(3.97, abs=0.02)
        assert reference['r_max_bps'] / 1e9 == pytest.approx(2.87, abs=0.01)

    def test_duration_decreases_with_rate(self):
        rates = np.linspace(1e9, 20e9, 39)
        table = reproduce_fig3b({'5nm': CHIP}, [0.10, 0.20, 0.34], rates, RF, PLATE)
        for _, group in table.groupby('beta'):
            finite = group[~group['unbounded']]
            assert finite['duration_s'].is_monotonic_decreasing

    def test_empty_grid(self):
        with pytest.raises(UnitError):
            reproduce_fig3b({'5nm': CHIP}, [], [4e9], RF, PLATE)


if __name__ == "__main__":
    pytest.main([__file__])
