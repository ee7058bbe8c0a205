"""
Run configuration - YAML scenario files validated into a RunConfig
Unknown keys are rejected; every error names its dotted key
"""

import copy
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from config.settings import settings
from src.utils.errors import DomainError, UsageError, ValidationError
from src.utils.spectrum_trace import uniform_grid
from src.vapor.rubidium_line import D2_CENTER_FREQUENCY

D2_WAVELENGTH_M = 299792458.0 / D2_CENTER_FREQUENCY


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VaporBlock(_Block):
    temperature_K: float = Field(..., ge=250.0, le=500.0)
    transit_broadening_Hz: float = Field(settings.TRANSIT_BROADENING_HZ, ge=0.0)
    density_override_m3: Optional[float] = Field(None, ge=0.0)
    vapor_pressure_model: Literal["nesmeyanov", "alcock"] = "nesmeyanov"
    path_length_m: float = Field(2e-3, gt=0.0)


class RingBlock(_Block):
    radius_m: float = Field(settings.RING_RADIUS_M, gt=0.0)
    n_eff: float = Field(1.6, gt=1.0)
    wavelength_m: float = Field(D2_WAVELENGTH_M, gt=0.0)
    r: Optional[float] = Field(None, gt=0.0, lt=1.0)
    tau: Optional[float] = Field(None, gt=0.0, le=1.0)
    loaded_Q: Optional[float] = Field(None, gt=0.0)
    contrast: Optional[float] = Field(None, gt=0.0, le=1.0)
    coupling_regime: Literal["under", "over"] = "under"
    kappa_Hz: Optional[float] = Field(None, gt=0.0)
    waveguide_width_m: float = Field(settings.WAVEGUIDE_WIDTH_M, gt=0.0)
    waveguide_thickness_m: float = Field(settings.WAVEGUIDE_THICKNESS_M, gt=0.0)


class ModeBlock(_Block):
    g0_Hz: float = Field(settings.G0_HZ, gt=0.0)
    decay_length_m: Optional[float] = Field(None, gt=0.0)
    interaction_volume_m3: float = Field(settings.INTERACTION_VOLUME_M3, gt=0.0)


class SimulationBlock(_Block):
    n_configs: int = Field(settings.DEFAULT_N_CONFIGS, ge=1)
    seed: int = Field(settings.DEFAULT_SEED, ge=0)
    detuning_start_Hz: float = -5e9
    detuning_stop_Hz: float = 5e9
    detuning_points: int = Field(1001, ge=2)
    atom_count_mode: Literal["fixed", "poisson"] = "fixed"
    atom_count: Optional[float] = Field(None, ge=0.0)
    region_depth_decay_lengths: float = Field(settings.REGION_DEPTH_DECAY_LENGTHS, gt=0.0)
    gamma_Hz: Optional[float] = Field(None, gt=0.0)
    cavity_detuning_Hz: Optional[float] = None
    anticrossing_detunings_Hz: List[float] = Field(default_factory=lambda: [-2e9, -1e9, 0.0, 1e9, 2e9])
    workers: int = Field(settings.WORKERS, ge=1)


class FitBlock(_Block):
    model: Literal["interaction_factor", "lorentzian", "vapor_temperature"] = "interaction_factor"
    trace_path: Optional[str] = None
    interaction_factor: float = Field(0.3, ge=0.0)
    noise_level: float = Field(0.01, ge=0.0)
    fit_scale: bool = True
    fit_path_length: bool = False

class SaturationBlock(_Block):
    powers_W: List[float] = Field(default_factory=lambda: [1e-9, 2e-9, 5e-9, 1e-8, 2e-8, 5e-8, 1e-7])
    alpha0: float = Field(0.3, ge=0.0)
    p_sat_W: float = Field(1e-8, gt=0.0)
    noise_level: float = Field(0.01, ge=0.0)
    fit_scale: bool = True
    trace_paths: Optional[List[str]] = None


class AllanBlock(_Block):
    series_path: Optional[str] = None
    sample_period_s: Optional[float] = Field(None, gt=0.0)
    synthetic_kind: Literal["white_fm", "random_walk_fm"] = "white_fm"
    synthetic_level_Hz: float = Field(0.5e6, ge=0.0)
    synthetic_n: int = Field(10000, ge=16)
    synthetic_sample_period_s: float = Field(1.0, gt=0.0)
    seed: int = Field(settings.DEFAULT_SEED, ge=0)
    taus_s: Optional[List[float]] = None


class OutputBlock(_Block):
    directory: Optional[str] = None


class RunConfig(_Block):
    """Validated scenario: one block per physics module plus simulation and output settings"""

    scenario: str
    vapor: VaporBlock
    ring: RingBlock
    mode: ModeBlock = Field(default_factory=ModeBlock)
    simulation: SimulationBlock = Field(default_factory=SimulationBlock)
    fit: FitBlock = Field(default_factory=FitBlock)
    saturation: SaturationBlock = Field(default_factory=SaturationBlock)
    allan: AllanBlock = Field(default_factory=AllanBlock)
    output: OutputBlock = Field(default_factory=OutputBlock)

    # Builders
    def build_vapor(self, line=None):
        from src.vapor.vapor_model import VaporState

        block = self.vapor
        return VaporState.at_temperature(
            block.temperature_K,
            line,
            transit_broadening=block.transit_broadening_Hz,
            density_override=block.density_override_m3,
            model=block.vapor_pressure_model,
        )

    def build_ring(self):
        from src.cavity.ring_resonator import RingParams, ring_from_measurement

        block = self.ring
        geometry = {
            "waveguide_width": block.waveguide_width_m,
            "waveguide_thickness": block.waveguide_thickness_m,
        }
        if block.r is not None:
            return RingParams(
                r=block.r, tau=block.tau, radius=block.radius_m, n_eff=block.n_eff,
                resonance_wavelength=block.wavelength_m, loaded_q=block.loaded_Q,
                kappa=block.kappa_Hz, **geometry,
            )
        ring = ring_from_measurement(
            block.loaded_Q, block.contrast, block.radius_m, block.n_eff,
            block.wavelength_m, block.coupling_regime, **geometry,
        )
        if block.kappa_Hz is None:
            return ring
        return RingParams(
            r=ring.r, tau=ring.tau, radius=ring.radius, n_eff=ring.n_eff,
            resonance_wavelength=ring.resonance_wavelength, loaded_q=ring.loaded_q,
            kappa=block.kappa_Hz, **geometry,
        )

    def build_mode(self, ring=None):
        from src.cavity.mode_field import ModeField

        ring = ring or self.build_ring()
        return ModeField.for_ring(
            ring,
            peak_coupling=self.mode.g0_Hz,
            decay_length=self.mode.decay_length_m,
            interaction_volume=self.mode.interaction_volume_m3,
        )

    def detuning_grid(self) -> np.ndarray:
        sim = self.simulation
        return uniform_grid(sim.detuning_start_Hz, sim.detuning_stop_Hz, sim.detuning_points)

    def build_scenario(self, line=None):
        from src.cavity.ring_resonator import cavity_detuning
        from src.cqed.spectrum import EnsembleScenario

        ring = self.build_ring()
        sim = self.simulation
        # Rounded to 1 Hz; adding 0.0 turns -0.0 into 0.0
        detuning = np.round(cavity_detuning(ring)) + 0.0 if sim.cavity_detuning_Hz is None else sim.cavity_detuning_Hz
        return EnsembleScenario.build(
            vapor=self.build_vapor(line),
            ring=ring,
            mode=self.build_mode(ring),
            detunings=self.detuning_grid(),
            seed=sim.seed,
            depth_decay_lengths=sim.region_depth_decay_lengths,
            count_mode=sim.atom_count_mode,
            atom_count=sim.atom_count,
            gamma=sim.gamma_Hz,
            cavity_detuning=float(detuning),
            line=line,
        )

    def output_directory(self, override: Union[str, Path, None] = None) -> Path:
        if override is not None:
            return Path(override)
        if self.output.directory:
            return Path(self.output.directory)
        return settings.OUTPUT_DIR / self.scenario


REQUIRED_KEYS = ["scenario", "vapor.temperature_K", "ring"]


def resolve_config_path(name: Union[str, Path]) -> Path:
    """
    Locate a config file by path or by preset name

    Args:
        name: File path, or a name searched in settings.CONFIG_DIR (with or without .yaml)

    Returns:
        Existing path
    """
    candidate = Path(name)
    if candidate.is_file():
        return candidate
    for option in (settings.CONFIG_DIR / str(name), settings.CONFIG_DIR / f"{name}.yaml"):
        if option.is_file():
            return option
    raise UsageError(f"Config '{name}' not found (searched the working directory and {settings.CONFIG_DIR})")


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """Apply `block.key=value` overrides; values are parsed as YAML scalars"""
    for item in overrides or []:
        if "=" not in item:
            raise UsageError(f"Override '{item}' must look like block.key=value")
        dotted, raw = item.split("=", 1)
        parts = [part for part in dotted.strip().split(".") if part]
        if not parts:
            raise UsageError(f"Override '{item}' has an empty key")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            value = raw
        target = data
        for part in parts[:-1]:
            node = target.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValidationError(f"'{part}' is not a block", key=dotted)
            target = node
        target[parts[-1]] = value
    return data


def _format_errors(error: PydanticValidationError) -> ValidationError:
    lines, first_key = [], None
    for item in error.errors():
        key = ".".join(str(part) for part in item["loc"]) or "<root>"
        first_key = first_key or key
        lines.append(f"{key}: {item['msg']}")
    message = "Invalid configuration: " + "; ".join(lines)
    missing = [line.split(":")[0] for line in lines if "Field required" in line]
    if missing:
        message += f" (required keys: {', '.join(REQUIRED_KEYS)})"
    return ValidationError(message, key=first_key)


def _cross_check(config: RunConfig) -> None:
    ring = config.ring
    has_rt = ring.r is not None or ring.tau is not None
    has_measurement = ring.loaded_Q is not None and ring.contrast is not None
    if has_rt and (ring.r is None or ring.tau is None):
        raise ValidationError("ring.r and ring.tau must be given together", key="ring.r" if ring.r is None else "ring.tau")
    if not has_rt and not has_measurement:
        raise ValidationError("ring needs either (r, tau) or (loaded_Q, contrast)", key="ring")
    if ring.loaded_Q is not None and ring.kappa_Hz is not None:
        expected = (299792458.0 / ring.wavelength_m) / (2.0 * ring.loaded_Q)
        if abs(ring.kappa_Hz - expected) > settings.KAPPA_Q_TOLERANCE * expected:
            raise ValidationError(
                f"ring.kappa_Hz = {ring.kappa_Hz:.6g} disagrees with loaded_Q (expects {expected:.6g} Hz within "
                f"{settings.KAPPA_Q_TOLERANCE:.0%})",
                key="ring.kappa_Hz",
            )
    sim = config.simulation
    if not sim.detuning_stop_Hz > sim.detuning_start_Hz:
        raise ValidationError("detuning_stop_Hz must exceed detuning_start_Hz", key="simulation.detuning_stop_Hz")
    powers = config.saturation.powers_W
    if any(p <= 0 for p in powers):
        raise ValidationError("Powers must be positive", key="saturation.powers_W")

    for block, build in (("vapor", config.build_vapor), ("ring", config.build_ring), ("mode", config.build_mode)):
        try:
            build()
        except DomainError as e:
            raise ValidationError(f"{block}: {e}", key=block)


def _is_inline_text(source: Union[str, Path]) -> bool:
    """True when source is YAML text rather than a path or preset name"""
    if isinstance(source, Path):
        return False
    if "\n" in source:
        return True
    if ":" not in source:
        return False
    try:
        return not Path(source).is_file()
    except OSError:
        return True


def parse_config(
    source: Union[str, Path, Dict[str, Any]],
    overrides: Sequence[str] = (),
) -> RunConfig:
    """
    Parse and fully validate a run configuration

    Args:
        source: Path or preset name, YAML text, or an already-loaded mapping
        overrides: `block.key=value` strings applied before validation

    Returns:
        RunConfig with defaults filled in
    """
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if not _is_inline_text(source):
            text = resolve_config_path(source).read_text(encoding="utf-8")
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ValidationError(f"Config is not valid YAML: {e}")
    if data is None:
        raise ValidationError(
            f"Config is empty; required keys: {', '.join(REQUIRED_KEYS)}", key=REQUIRED_KEYS[0]
        )
    if not isinstance(data, dict):
        raise ValidationError("Config must be a mapping of blocks")

    data = apply_overrides(copy.deepcopy(data), overrides)
    try:
        config = RunConfig.model_validate(data)
    except PydanticValidationError as e:
        raise _format_errors(e)
    _cross_check(config)
    return config
