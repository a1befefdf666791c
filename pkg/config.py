"""
Configuration settings for the smartphone receiving-rate analysis project.
"""
import os
from dotenv import load_dotenv
# Load environment variables
load_dotenv()
# Results database (optional persistence of scenario runs)
DATABASE_URL = os.getenv('DATABASE_URL', 'sqlite:///landauer_rate.db')
RESULTS_DIR = os.getenv('RESULTS_DIR', 'results')
SWEEP_WORKERS = int(os.getenv('SWEEP_WORKERS', '4'))
# Physical constants (3 significant figures, matching the reference numbers)
BOLTZMANN_K = 1.38e-23  # J/K
CELSIUS_OFFSET = 273.15
SPEED_OF_LIGHT = 299792458.0  # m/s
LANDAUER_TEMPERATURE_K = 300.0  # ambient, not junction temperature
# Baseband processor
K_BP = 1e8  # logic operations per received bit
FANOUT_F0 = 4.0  # typical 3-4, upper end calibrated
ACTIVITY_ALPHA = 0.2  # typical 0.1-0.2, upper end calibrated
FANOUT_RANGE = (3.0, 4.0)
ACTIVITY_RANGE = (0.1, 0.2)
BETA_MAX = 0.34  # AP + storage take at least 64 % of chip power
P_TD_W = 3.0  # thermal design power of the handset
GAP_FACTOR_5NM = 454.2
# Reference R_max endpoints at BETA_MAX, used to derive the 10 nm / 14 nm gaps
RMAX_ENDPOINTS_BPS = {5: 9.74e9, 10: 2.17e9, 14: 1.55e9}
# RF chain
N_TRX = 4
P_LNA_W = 24.3e-3
PAE_ETA = 0.59
LAMBDA_COUPLING = 0.30
# Surface hotspot plate, 7075-T6 aluminium
PLATE_SPECIFIC_HEAT = 870.0  # J/(kg K)
PLATE_DENSITY = 3000.0  # kg/m^3
PLATE_AREA_M2 = 1e-4  # 1 cm^2
PLATE_THICKNESS_M = 1e-3  # 1 mm
PLATE_LEAKAGE_W_PER_K = 0.0
T_ENVIR_C = 27.0
T_SAFE_C = 45.0
# Base station / link budget
BS_TX_POWER_W = 5.0
BS_ANTENNAS = 256
CARRIER_FREQUENCIES_HZ = [3.7e9, 28e9]
CELL_RADIUS_M = 100.0
NOISE_PSD_DBM_HZ = -174.0
BANDWIDTHS_HZ = [20e6, 500e6]
DEFAULT_SNR_DB = 10.0
TIE_RELATIVE_TOLERANCE = 1e-9
CROSSOVER_MAX_EXPONENT = 1000.0  # bits/s/Hz per stream before 2**x overflows
# Session simulator
SIM_STEP_S = 0.01
SIM_STEP_FRACTION = 0.5
SIM_MAX_STEPDOWNS_PER_STEP = 64
# Chip catalog
CHIP_CATALOG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'chip_catalog.csv')
HEAT_DENSITY_TOLERANCE = 0.05  # W/cm^2
# Output
CSV_FLOAT_FORMAT = '%.6g'
DEFAULT_OUTPUT_FORMAT = 'csv'
# Logging configuration
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
