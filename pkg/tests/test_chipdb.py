"""
Unit tests for the chip catalog.
"""
import io
import sys
import os

import pytest
from sqlalchemy import create_engine

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import CHIP_CATALOG_PATH
from data.chipdb import (
    ChipSpec, DeviceClass, catalog_summary, catalog_to_dataframe, find_spec, heat_density, load_catalog,
    save_catalog, serialize_catalog, validate_spec,
)
from models.core_model import Power
from utils.database import read_dataframe
from utils.exceptions import CatalogError, CatalogParseError, CatalogValidationError, ZeroArea

HEADER = 'device,company,product,node_nm,power_w,package_cm2,heat_density_w_cm2\n'


@pytest.fixture(scope='module')
def catalog():
    return load_catalog()


class TestHeatDensity:
    """Test cases for heat density."""

    def test_snapdragon_835(self, catalog):
        assert round(heat_density(find_spec(catalog, 'Snapdragon 835')), 2) == 5.00

    def test_exynos_7420(self, catalog):
        assert round(heat_density(find_spec(catalog, 'Exynos 7420')), 2) == 7.05

    def test_core_i7(self, catalog):
        spec = find_spec(catalog, 'Core™ i7-7920HQ')
        assert round(spec.heat_density_w_cm2, 2) == 3.83
        assert spec.stated_heat_density == 3.83

    def test_unit_case(self):
        spec = ChipSpec(DeviceClass.SMARTPHONE, 'Acme', 'Unit', 7, Power(1.0), 1.0)
        assert heat_density(spec) == 1.0

    def test_zero_area(self):
        spec = ChipSpec(DeviceClass.SMARTPHONE, 'Acme', 'Flat', 7, Power(1.0), 0.0)
        with pytest.raises(ZeroArea):
            heat_density(spec)


class TestLoadCatalog:
    """Test cases for catalog ingest and validation."""

    def test_bundled_catalog(self, catalog):
        assert len(catalog) == 12
        assert sum(spec.device_class is DeviceClass.SMARTPHONE for spec in catalog) == 9

    def test_stated_densities_within_tolerance(self, catalog):
        for spec in catalog:
            assert abs(spec.stated_heat_density - heat_density(spec)) <= 0.05

    def test_round_trip_is_byte_identical(self, catalog):
        text = serialize_catalog(catalog)
        assert serialize_catalog(load_catalog(text)) == text
        with open(CHIP_CATALOG_PATH, 'r', encoding='utf-8') as handle:
            bundled = ''.join(line for line in handle if not line.startswith('#'))
        assert text == bundled

    def test_file_like_source(self):
        specs = load_catalog(io.StringIO(HEADER + 'Smartphone,Acme,X1,7,2.0,1.00,2.00\n'))
        assert specs[0].node_nm == 7
        assert specs[0].power_w == Power(2.0)

    def test_zero_area_row(self):
        with pytest.raises(ZeroArea):
            load_catalog(HEADER + 'Smartphone,Acme,X1,7,2.0,0,2.00\n')

    def test_stated_density_mismatch(self):
        with pytest.raises(CatalogValidationError) as excinfo:
            load_catalog(HEADER + 'Smartphone,Acme,X1,7,2.0,1.00,2.10\n')
        assert 'row 1' in str(excinfo.value)

    def test_non_positive_power(self):
        with pytest.raises(CatalogValidationError):
            load_catalog(HEADER + 'Smartphone,Acme,X1,7,0,1.00,0.00\n')

    def test_parse_error_location(self):
        with pytest.raises(CatalogParseError) as excinfo:
            load_catalog(HEADER + 'Smartphone,Acme,X1,7,2.0,1.00,2.00\nLaptop,Acme,X2,seven,2.0,1.00,2.00\n')
        assert excinfo.value.row == 2
        assert excinfo.value.column == 'node_nm'

    def test_unknown_device_class(self):
        with pytest.raises(CatalogParseError) as excinfo:
            load_catalog(HEADER + 'Watch,Acme,X1,7,2.0,1.00,2.00\n')
        assert excinfo.value.column == 'device'

    def test_bad_header(self):
        with pytest.raises(CatalogParseError):
            load_catalog('device,company,product,node,power\nSmartphone,Acme,X1,7,2.0\n')

    def test_comment_lines_ignored(self):
        specs = load_catalog('# user additions\n' + HEADER + 'Tablet,Acme,T1,10,4.0,2.00,2.00\n')
        assert len(specs) == 1
        assert specs[0].device_class is DeviceClass.TABLET

    def test_validate_spec_returns_density(self):
        spec = ChipSpec(DeviceClass.LAPTOP, 'Acme', 'L1', 14, Power(45.0), 11.76, 3.83)
        assert validate_spec(spec) == pytest.approx(3.8265, rel=1e-4)

    def test_missing_product(self, catalog):
        with pytest.raises(CatalogError):
            find_spec(catalog, 'Pentium')


class TestCatalogSummary:
    """Test cases for the device comparison."""

    def test_smartphones_run_hotter_than_laptops(self, catalog):
        summary = catalog_summary(catalog).set_index('device')
        assert summary.loc['Smartphone', 'max_heat_density_w_cm2'] > summary.loc['Laptop', 'max_heat_density_w_cm2']
        assert summary.loc['Smartphone', 'densest_product'] == 'Exynos 7420'
        assert summary.loc['Smartphone', 'chips'] == 9

    def test_dataframe_columns(self, catalog):
        frame = catalog_to_dataframe(catalog)
        assert list(frame.columns) == [
            'device', 'company', 'product', 'node_nm', 'power_w', 'package_cm2', 'heat_density_w_cm2',
        ]
        assert len(frame) == 12

    def test_save_catalog(self, catalog):
        engine = create_engine('sqlite://')
        save_catalog(catalog, bind=engine)
        stored = read_dataframe('SELECT product, heat_density_w_cm2 FROM chip_specs', bind=engine)
        assert len(stored) == 12
        assert 'Snapdragon 835' in set(stored['product'])


if __name__ == "__main__":
    pytest.main([__file__])
