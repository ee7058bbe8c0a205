"""
Test script to verify the setup is working correctly.
Checks imports, settings, the shipped line table and the presets.
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

import pytest

from config.settings import settings


def test_imports():
    import app.cli  # noqa: F401
    import src.cavity  # noqa: F401
    import src.cqed  # noqa: F401
    import src.fitting  # noqa: F401
    import src.pipeline  # noqa: F401
    import src.saturation  # noqa: F401
    import src.stability  # noqa: F401
    import src.vapor  # noqa: F401


def test_settings():
    assert settings.validate()
    assert settings.WORKERS >= 1
    assert settings.LINE_DATA_FILE.exists()
    assert settings.CONFIG_DIR.is_dir()


def test_line_table():
    from src.vapor.rubidium_line import load_line_data

    line = load_line_data()
    assert len(line.hyperfine_components) == 6
    assert line.strengths.sum() == pytest.approx(1.0, abs=1e-12)
    assert line.version == "1"


def test_presets_parse():
    from config.run_config import parse_config

    presets = sorted(settings.CONFIG_DIR.glob("*.yaml"))
    assert {path.stem for path in presets} >= {"paper_100C", "paper_heater_device"}
    for path in presets:
        config = parse_config(path)
        assert config.scenario == path.stem


def main():
    print(f"Current directory: {Path.cwd()}")

    print("\n" + "="*60)
    print("=== Testing Basic Setup ===")
    print("="*60)

    checks = [
        ("Imports", test_imports),
        ("Settings", test_settings),
        ("Line table", test_line_table),
        ("Presets", test_presets_parse),
    ]
    failed = False
    for label, check in checks:
        try:
            check()
            print(f"✅ {label} OK")
        except Exception as e:
            print(f"❌ {label} failed: {e}")
            failed = True

    if failed:
        print("\n⚠️  Setup incomplete. Check the errors above and your .env file.")
        return False

    print("\n" + "="*60)
    print("✅ ALL SETUP CHECKS PASSED!")
    print("="*60)
    print("\n💡 Next step: python run.py vapor-info --config paper_100C\n")
    return True


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
