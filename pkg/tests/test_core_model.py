"""
Unit tests for constants, unit-bearing scalars and parameter records.
"""
import math
import sys
import os

import numpy as np
import pytest

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.core_model import (
    ChipProfile, PhysicalConstants, Power, Rate, RfChainConfig, SemiconductorNode, SurfacePlate,
    Temperature, format_rate, landauer_bit_energy, parse_hertz, parse_node,
)
from utils.exceptions import UnitError


class TestLandauerBitEnergy:
    """Test cases for the Landauer limit."""

    def test_room_temperature(self):
        """kT ln2 at 300 K."""
        energy = landauer_bit_energy(PhysicalConstants(), Temperature(300.0))
        assert energy == pytest.approx(2.8696e-21, rel=1e-4)

    def test_safe_temperature(self):
        energy = landauer_bit_energy(PhysicalConstants(), Temperature(318.15))
        assert energy == pytest.approx(3.0432e-21, rel=1e-4)

    def test_linear_in_temperature(self):
        constants = PhysicalConstants()
        single = landauer_bit_energy(constants, Temperature(250.0))
        double = landauer_bit_energy(constants, Temperature(500.0))
        assert double == pytest.approx(2 * single, rel=1e-15)

    def test_boltzmann_override(self):
        """A CODATA Boltzmann constant can be passed in."""
        codata = PhysicalConstants(boltzmann_k=1.380649e-23)
        assert landauer_bit_energy(codata) > landauer_bit_energy()

    def test_strictly_increasing_in_temperature(self):
        rng = np.random.default_rng(7)
        constants = PhysicalConstants()
        for _ in range(500):
            low, high = np.sort(rng.uniform(1.0, 1000.0, size=2))
            if low == high:
                continue
            assert landauer_bit_energy(constants, Temperature(low)) < landauer_bit_energy(constants, Temperature(high))

    def test_rejects_non_positive_boltzmann(self):
        with pytest.raises(UnitError):
            PhysicalConstants(boltzmann_k=0.0)


class TestScalars:
    """Test cases for Rate, Power and Temperature."""

    def test_celsius_conversion_is_exact(self):
        assert Temperature.from_celsius(27).kelvin == pytest.approx(300.15, abs=1e-12)
        assert Temperature.from_celsius(45).kelvin == pytest.approx(318.15, abs=1e-12)
        assert Temperature(318.15).celsius == pytest.approx(45.0, abs=1e-12)

    def test_rate_parsing(self):
        assert Rate.parse('4Gbps').bps == pytest.approx(4e9, rel=1e-12)
        assert Rate.parse('800 Mbps').bps == pytest.approx(8e8, rel=1e-12)
        assert Rate.parse('250 kbps').bps == pytest.approx(2.5e5, rel=1e-12)
        assert Rate.parse('2.17 Gbps').bps == pytest.approx(2.17e9)
        assert Rate.parse('1e9').bps == 1e9
        assert Rate.parse(5).bps == 5.0

    def test_rate_parsing_rejects_unknown_unit(self):
        with pytest.raises(UnitError):
            Rate.parse('4 GHz')
        with pytest.raises(UnitError):
            Rate.parse('fast')

    def test_frequency_suffix_is_dimension_checked(self):
        assert parse_hertz('20 kHz') == pytest.approx(2e4, rel=1e-12)
        assert parse_hertz(20e6) == 20e6
        with pytest.raises(UnitError):
            parse_hertz('4Gbps')
        with pytest.raises(UnitError):
            parse_hertz('500 parsecs')

    def test_rate_arithmetic_keeps_unit(self):
        total = Rate.from_gbps(1.5) + Rate.from_mbps(500)
        assert isinstance(total, Rate)
        assert total.bps == pytest.approx(2e9)
        assert (total - Rate.from_gbps(1)).gbps == pytest.approx(1.0)

    def test_rate_subtraction_cannot_go_negative(self):
        with pytest.raises(UnitError):
            Rate(1.0) - Rate(2.0)

    def test_power_milliwatts(self):
        assert Power.from_mw(24.3).watts == pytest.approx(0.0243)
        assert Power(0.039852).milliwatts == pytest.approx(39.852)

    def test_format_rate(self):
        assert format_rate(Rate(9.74e9)) == '9.74 Gbps'
        assert format_rate(Rate(7.97e8)) == '797.00 Mbps'
        assert str(Rate(0)) == '0.00 bps'

    def test_parse_helpers(self):
        assert parse_node('5nm') == 5
        assert parse_node('14 nm') == 14
        assert parse_hertz('500MHz') == pytest.approx(5e8, rel=1e-12)
        assert parse_hertz('3.7 GHz') == pytest.approx(3.7e9)
        with pytest.raises(UnitError):
            parse_node('tiny')

    def test_random_invalid_values_rejected(self):
        """Negative rates/powers and non-positive temperatures never construct."""
        rng = np.random.default_rng(11)
        for value in -rng.uniform(1e-12, 1e12, size=500):
            with pytest.raises(UnitError):
                Rate(float(value))
            with pytest.raises(UnitError):
                Power(float(value))
            with pytest.raises(UnitError):
                Temperature(float(value))
        with pytest.raises(UnitError):
            Temperature(0.0)

    def test_random_invalid_efficiency_rejected(self):
        rng = np.random.default_rng(13)
        for value in np.concatenate([rng.uniform(1.0, 10.0, 250), -rng.uniform(1e-9, 10.0, 250)]):
            with pytest.raises(UnitError):
                RfChainConfig(pae_eta=float(value))

    def test_non_finite_rejected(self):
        with pytest.raises(UnitError):
            Rate(math.inf)
        with pytest.raises(UnitError):
            Power(math.nan)


class TestParameterRecords:
    """Test cases for nodes, chips, RF chains and the surface plate."""

    def test_gap_factor_at_least_one(self):
        with pytest.raises(UnitError):
            SemiconductorNode(feature_size_nm=5, gap_factor=0.5)
        assert SemiconductorNode(feature_size_nm=5, gap_factor=1.0).gap_factor == 1.0

    def test_beta_cap(self):
        node = SemiconductorNode(5, 454.2)
        assert ChipProfile(node, beta=0.34).beta == 0.34
        with pytest.raises(UnitError):
            ChipProfile(node, beta=0.35)
        with pytest.raises(UnitError):
            ChipProfile(node, beta=0.0)

    def test_typical_ranges_and_unchecked(self):
        node = SemiconductorNode(5, 454.2)
        with pytest.raises(UnitError):
            ChipProfile(node, fanout_f0=5.0)
        with pytest.raises(UnitError):
            ChipProfile(node, activity_alpha=0.05)
        chip = ChipProfile.unchecked(node, fanout_f0=5.0, activity_alpha=0.05)
        assert chip.fanout_f0 == 5.0
        with pytest.raises(UnitError):
            ChipProfile.unchecked(node, fanout_f0=-1.0)

    def test_chip_defaults(self):
        chip = ChipProfile(SemiconductorNode(5, 454.2))
        assert chip.k_bp == 1e8
        assert chip.fanout_f0 == 4.0
        assert chip.activity_alpha == 0.2
        assert chip.p_td == Power(3.0)

    def test_rf_chain(self):
        rf = RfChainConfig()
        assert rf.n_trx == 4
        assert rf.p_lna.watts == pytest.approx(0.0243)
        with pytest.raises(UnitError):
            RfChainConfig(n_trx=0)
        with pytest.raises(UnitError):
            RfChainConfig(lambda_coupling=1.5)
        with pytest.raises(UnitError):
            RfChainConfig(pae_eta=1.0)
        assert RfChainConfig.unchecked(pae_eta=1.0).pae_eta == 1.0

    def test_plate_mass_is_derived(self):
        plate = SurfacePlate()
        assert plate.mass == pytest.approx(3e-4)
        assert plate.heat_capacity == pytest.approx(0.261)
        assert plate.headroom_k == pytest.approx(18.0)
        thicker = SurfacePlate(thickness=2e-3)
        assert thicker.heat_capacity == pytest.approx(0.522)

    def test_plate_rejects_inverted_bounds(self):
        with pytest.raises(UnitError):
            SurfacePlate(t_envir=Temperature.from_celsius(45), t_safe=Temperature.from_celsius(27))
        with pytest.raises(UnitError):
            SurfacePlate(area=0.0)

    def test_records_are_immutable(self):
        plate = SurfacePlate()
        with pytest.raises(Exception):
            plate.area = 2e-4


if __name__ == "__main__":
    pytest.main([__file__])
