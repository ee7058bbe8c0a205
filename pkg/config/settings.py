"""
Configuration settings for the ACMRR cavity-QED toolkit.
Loads environment variables and defines process-wide defaults.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Get project root directory (parent of config directory)
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
env_path = BASE_DIR / '.env'
load_dotenv(dotenv_path=env_path)


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings:
    """Application settings and configuration"""

    # Directories
    CONFIG_DIR = Path(os.getenv("ACMRR_CONFIG_DIR", str(BASE_DIR / "config" / "presets")))
    OUTPUT_DIR = Path(os.getenv("ACMRR_OUTPUT_DIR", str(BASE_DIR / "results")))
    DATA_DIR = BASE_DIR / "data"
    LINE_DATA_FILE = DATA_DIR / "rb87_d2_hyperfine.csv"

    # Console output
    VERBOSE = _env_flag("ACMRR_VERBOSE", "1")

    # Monte-Carlo configuration
    WORKERS = int(os.getenv("ACMRR_WORKERS", "1"))
    DEFAULT_N_CONFIGS = 100  # configurations averaged per spectrum
    DEFAULT_SEED = 1

    # Physics defaults
    TRANSIT_BROADENING_HZ = 200e6  # atomic dephasing from transit time
    RING_RADIUS_M = 20e-6
    WAVEGUIDE_WIDTH_M = 1e-6
    WAVEGUIDE_THICKNESS_M = 250e-9
    INTERACTION_VOLUME_M3 = 11.2e-18
    G0_HZ = 330e6
    REGION_DEPTH_DECAY_LENGTHS = 4.0

    # Fitting
    FIT_MAX_ITERATIONS = 2000
    FIT_DIFF_STEP = 1e-6  # relative finite-difference step
    SPLITTING_PROMINENCE = 0.02  # fraction of full transmission scale

    # Q/kappa consistency tolerance
    KAPPA_Q_TOLERANCE = 0.01

    @classmethod
    def validate(cls):
        """Validate environment-derived settings"""
        errors = []

        if cls.WORKERS < 1:
            errors.append("ACMRR_WORKERS must be a positive integer")

        if not cls.LINE_DATA_FILE.exists():
            errors.append(f"Line data table not found: {cls.LINE_DATA_FILE}")

        if errors:
            raise ValueError("\n".join(errors))

        return True

    @classmethod
    def create_output_directory(cls, directory: Path = None) -> Path:
        """Create the output directory if it doesn't exist"""
        directory = Path(directory or cls.OUTPUT_DIR)
        directory.mkdir(parents=True, exist_ok=True)
        return directory


# Create a global settings instance
settings = Settings()

# Validate settings on import
try:
    settings.validate()
except ValueError as e:
    print(f"⚠️  Configuration Error: {e}")
    print("Please check your .env file and the shipped data directory.")
