"""Command-line application package"""
from .cli import main, build_parser, Diagnostic

__all__ = ['main', 'build_parser', 'Diagnostic']
