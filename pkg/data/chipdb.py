"""
Chip specification catalog.
Loads the bundled chip table (or a user-supplied one), validates stated heat
densities against power / package area and produces comparison summaries.
"""
import argparse
import io
import logging
import os
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import pandas as pd

# Add parent directory to path to import utils
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import CHIP_CATALOG_PATH, HEAT_DENSITY_TOLERANCE, LOG_FORMAT, LOG_LEVEL
from models.core_model import Power
from utils.exceptions import CatalogError, CatalogParseError, CatalogValidationError, UnitError, ZeroArea

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger(__name__)

CATALOG_COLUMNS = ['device', 'company', 'product', 'node_nm', 'power_w', 'package_cm2', 'heat_density_w_cm2']


class DeviceClass(Enum):
    SERVER = 'Server'
    LAPTOP = 'Laptop'
    TABLET = 'Tablet'
    SMARTPHONE = 'Smartphone'

    @classmethod
    def parse(cls, text):
        for member in cls:
            if member.value.lower() == str(text).strip().lower():
                return member
        raise ValueError(f"unknown device class '{text}' (expected one of {[m.value for m in cls]})")


@dataclass(frozen=True)
class ChipSpec:
    """One catalog row; the stated heat density is kept verbatim for validation."""
    device_class: DeviceClass
    company: str
    product: str
    node_nm: int
    power_w: Power
    package_cm2: float
    stated_heat_density: Optional[float] = None

    @property
    def heat_density_w_cm2(self):
        return heat_density(self)


def heat_density(spec):
    """
    Heat density of a chip, power / package area.

    Args:
        spec (ChipSpec): Catalog row

    Returns:
        float: Heat density in W/cm^2

    Raises:
        ZeroArea: If the package area is not positive
    """
    if not spec.package_cm2 > 0:
        raise ZeroArea(f"{spec.product}: package area must be > 0 cm^2, got {spec.package_cm2}")
    return spec.power_w.watts / spec.package_cm2


def validate_spec(spec, tolerance=HEAT_DENSITY_TOLERANCE):
    """
    Check positivity and the stated heat density of a catalog row.

    Raises:
        CatalogValidationError: If power is not positive or the stated density is off by more than tolerance
        ZeroArea: If the package area is not positive
    """
    if not spec.power_w.watts > 0:
        raise CatalogValidationError(f"{spec.product}: power must be > 0 W, got {spec.power_w.watts}")
    computed = heat_density(spec)
    if spec.stated_heat_density is not None and abs(spec.stated_heat_density - computed) > tolerance:
        raise CatalogValidationError(
            f"{spec.product}: stated heat density {spec.stated_heat_density:.2f} W/cm^2 disagrees with "
            f"power/area = {computed:.2f} W/cm^2"
        )
    return computed


def _open_source(source):
    if hasattr(source, 'read'):
        return source
    if isinstance(source, str) and '\n' in source:
        return io.StringIO(source)
    return open(source, 'r', encoding='utf-8')


def _non_empty(value):
    if not value:
        raise ValueError("value is empty")
    return value


def _parse_row(number, record):
    def field(column, convert):
        value = record[column].strip()
        try:
            return convert(value)
        except (ValueError, UnitError) as e:
            raise CatalogParseError(f"invalid value '{value}': {e}", row=number, column=column) from None

    stated = record['heat_density_w_cm2'].strip()
    return ChipSpec(
        device_class=field('device', DeviceClass.parse),
        company=record['company'].strip(),
        product=field('product', _non_empty),
        node_nm=field('node_nm', int),
        power_w=field('power_w', lambda v: Power(float(v))),
        package_cm2=field('package_cm2', float),
        stated_heat_density=field('heat_density_w_cm2', float) if stated else None,
    )


def load_catalog(source=CHIP_CATALOG_PATH, tolerance=HEAT_DENSITY_TOLERANCE):
    """
    Load and validate a chip catalog.

    Args:
        source: Path, catalog text, or open file; '#' lines are comments
        tolerance (float): Allowed |stated - computed| heat density in W/cm^2

    Returns:
        list: ChipSpec rows in file order

    Raises:
        CatalogParseError: Malformed header or row (with row/column)
        CatalogValidationError: Row fails validation (ZeroArea for non-positive area)
    """
    handle = _open_source(source)
    try:
        frame = pd.read_csv(handle, dtype=str, comment='#', keep_default_na=False, skip_blank_lines=True)
    except pd.errors.ParserError as e:
        raise CatalogParseError(str(e)) from None
    except pd.errors.EmptyDataError:
        raise CatalogParseError("catalog is empty") from None
    finally:
        if handle is not source:
            handle.close()

    columns = [str(c).strip() for c in frame.columns]
    if columns != CATALOG_COLUMNS:
        missing = [c for c in CATALOG_COLUMNS if c not in columns]
        raise CatalogParseError(f"header must be {','.join(CATALOG_COLUMNS)}",
                                row=0, column=missing[0] if missing else None)
    frame.columns = columns

    specs = []
    for number, record in enumerate(frame.to_dict(orient='records'), start=1):
        spec = _parse_row(number, record)
        try:
            validate_spec(spec, tolerance)
        except CatalogValidationError as e:
            raise type(e)(f"row {number}: {e}") from None
        specs.append(spec)
    logger.info(f"Loaded {len(specs)} chip specs")
    return specs


def catalog_to_dataframe(specs):
    """Catalog rows as a DataFrame with the computed heat density."""
    return pd.DataFrame([{
        'device': spec.device_class.value,
        'company': spec.company,
        'product': spec.product,
        'node_nm': spec.node_nm,
        'power_w': spec.power_w.watts,
        'package_cm2': spec.package_cm2,
        'heat_density_w_cm2': heat_density(spec),
    } for spec in specs], columns=CATALOG_COLUMNS)


def serialize_catalog(specs):
    """
    Render catalog rows in the bundled file format (header plus one line per chip).

    Args:
        specs (list): ChipSpec rows

    Returns:
        str: Catalog text
    """
    frame = pd.DataFrame([{
        'device': spec.device_class.value,
        'company': spec.company,
        'product': spec.product,
        'node_nm': f"{spec.node_nm:d}",
        'power_w': f"{spec.power_w.watts:g}",
        'package_cm2': f"{spec.package_cm2:.2f}",
        'heat_density_w_cm2': f"{spec.stated_heat_density if spec.stated_heat_density is not None else heat_density(spec):.2f}",
    } for spec in specs], columns=CATALOG_COLUMNS)
    return frame.to_csv(index=False, lineterminator='\n')


def find_spec(specs, product):
    """Look up a chip by product name (case-insensitive)."""
    wanted = product.strip().lower()
    for spec in specs:
        if spec.product.lower() == wanted:
            return spec
    raise CatalogError(f"no chip named '{product}' in the catalog")


def catalog_summary(specs):
    """
    Compare heat density across device classes.

    Returns:
        pd.DataFrame: device, chips, mean/max heat density and the densest product
    """
    frame = catalog_to_dataframe(specs)
    rows = []
    for device in [d.value for d in DeviceClass]:
        group = frame[frame['device'] == device]
        if group.empty:
            continue
        densest = group.loc[group['heat_density_w_cm2'].idxmax()]
        rows.append({
            'device': device,
            'chips': len(group),
            'mean_heat_density_w_cm2': group['heat_density_w_cm2'].mean(),
            'max_heat_density_w_cm2': densest['heat_density_w_cm2'],
            'densest_product': densest['product'],
        })
    return pd.DataFrame(rows)


def save_catalog(specs, bind=None):
    """Store catalog rows in the chip_specs table."""
    from utils.database import create_tables, insert_dataframe

    create_tables(bind)
    insert_dataframe(catalog_to_dataframe(specs), 'chip_specs', bind)


def main():
    """Main function to validate and list the chip catalog."""
    parser = argparse.ArgumentParser(description='Validate and list the chip catalog')
    parser.add_argument('--catalog', type=str, default=CHIP_CATALOG_PATH,
                       help='Catalog file (default: bundled table)')
    parser.add_argument('--device', type=str, default=None,
                       help='Only list one device class (Server, Laptop, Tablet, Smartphone)')
    parser.add_argument('--summary', action='store_true',
                       help='Print the per-device comparison instead of the rows')
    args = parser.parse_args()
    try:
        specs = load_catalog(args.catalog)
        if args.device:
            device = DeviceClass.parse(args.device)
            specs = [spec for spec in specs if spec.device_class is device]
        frame = catalog_summary(specs) if args.summary else catalog_to_dataframe(specs)
        print(frame.to_string(index=False, float_format=lambda v: f"{v:.2f}"))
    except (CatalogError, ValueError) as e:
        logger.error(f"Error in main function: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
