"""
Main script for the atomically-clad ring toolkit

Usage:
    python run.py vapor-info --config paper_100C
    python run.py simulate-spectrum --config paper_100C --output-dir results/demo
    python run.py saturation-scan --config paper_heater_device --set saturation.noise_level=0.005
    python run.py report --config paper_100C --quiet
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

from app.cli import main


if __name__ == "__main__":
    sys.exit(main())
