"""Configuration package for the ACMRR cavity-QED toolkit"""
from .settings import settings, Settings
from .run_config import RunConfig, parse_config, apply_overrides, resolve_config_path

__all__ = ['settings', 'Settings', 'RunConfig', 'parse_config', 'apply_overrides', 'resolve_config_path']
