"""Command pipelines and the acceptance report"""
from .acceptance import AcceptanceCheck, run_acceptance, render_markdown
from .runner import COMMANDS, PipelineRunner

__all__ = ['AcceptanceCheck', 'run_acceptance', 'render_markdown', 'COMMANDS', 'PipelineRunner']
