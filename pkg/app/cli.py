"""
CLI - Command-line front-end for the atomically-clad ring toolkit
Parses arguments and config, runs one pipeline command and maps errors to exit codes
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

import argparse
from typing import List, Optional

from pydantic import BaseModel

from config.run_config import parse_config
from src.pipeline.runner import COMMANDS, PipelineRunner
from src.utils.errors import EXIT_CODES, ACMRRError, UsageError


class Diagnostic(BaseModel):
    """One structured error line on stderr"""

    level: str = "error"
    category: str
    exit_code: int
    message: str
    key: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="acmrr",
        description="Warm-atom cavity QED in atomically-clad microring resonators",
    )
    parser.add_argument("command", choices=COMMANDS, help="Pipeline to run")
    parser.add_argument("--config", "-c", required=True,
                        help="Scenario YAML file, or a preset name from ACMRR_CONFIG_DIR")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="BLOCK.KEY=VALUE",
                        help="Override one config value (repeatable)")
    parser.add_argument("--output-dir", "-o", default=None, help="Directory for output files")
    parser.add_argument("--quiet", "-q", action="store_true", help="Suppress progress and status output")
    return parser


def emit_diagnostic(error: Exception) -> int:
    """Print a JSON diagnostic for an error and return its exit code"""
    if isinstance(error, ACMRRError):
        diagnostic = Diagnostic(
            category=error.category,
            exit_code=error.exit_code,
            message=str(error),
            key=getattr(error, "key", None),
        )
    else:
        diagnostic = Diagnostic(
            category="unexpected",
            exit_code=EXIT_CODES["unexpected"],
            message=f"{type(error).__name__}: {error}",
        )
    print(diagnostic.model_dump_json(), file=sys.stderr)
    return diagnostic.exit_code


def main(argv: List[str] = None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code (0 on success)
    """
    try:
        args = build_parser().parse_args(argv)
        config = parse_config(args.config, args.overrides)
        runner = PipelineRunner(config, args.output_dir, verbose=False if args.quiet else None)
        written = runner.run(args.command)
    except Exception as e:
        return emit_diagnostic(e)

    if not args.quiet:
        for path in written:
            print(f"✅ {path}")
    return EXIT_CODES["success"]


if __name__ == "__main__":
    sys.exit(main())
