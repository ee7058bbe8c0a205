"""
Pipeline Runner - Executes one CLI command against a validated RunConfig
Builds the physics objects, runs the computation and writes the output files
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from typing import Any, Dict, List

from tqdm import tqdm

from config.run_config import RunConfig
from config.settings import settings
from src.cavity.mode_field import atoms_in_mode
from src.cqed.cooperativity import cooperativity_report, g0_bar_from_splitting
from src.cqed.spectrum import anticrossing_map, average_spectra, extract_splitting
from src.fitting.saturation_fit import fit_power_ladder
from src.fitting.spectrum_fits import fit_interaction_factor, fit_lorentzian, synthesize_clad_trace
from src.fitting.vapor_fit import fit_vapor_temperature, synthesize_free_space_trace
from src.pipeline.acceptance import render_markdown, run_acceptance
from src.saturation.oscillator_model import interaction_factor_law
from src.stability.allan import allan_deviation, load_frequency_series, synthesize_noise
from src.utils.errors import UsageError
from src.utils.spectrum_trace import SpectrumTrace
from src.vapor.rubidium_line import default_line
from src.vapor.vapor_model import VaporState, vapor_pressure

COMMANDS = (
    "simulate-spectrum",
    "fit-spectrum",
    "saturation-scan",
    "allan",
    "vapor-info",
    "report",
    "anticrossing",
)


class PipelineRunner:
    """
    Runs CLI commands for one scenario
    Output files are only created once the computation has succeeded
    """

    def __init__(self, config: RunConfig, output_dir: Path = None, verbose: bool = None):
        """
        Initialize the runner

        Args:
            config: Validated run configuration
            output_dir: Output directory override (default: config or settings)
            verbose: Console output and progress bars (default: settings.VERBOSE)
        """
        self.config = config
        self.output_dir = config.output_directory(output_dir)
        self.verbose = settings.VERBOSE if verbose is None else verbose
        self.line = default_line()

    def _say(self, message: str = "") -> None:
        if self.verbose:
            print(message)

    def _banner(self, title: str) -> None:
        self._say("\n" + "=" * 60)
        self._say(f"🚀 {title}")
        self._say("=" * 60 + "\n")

    def _output_path(self, name: str) -> Path:
        settings.create_output_directory(self.output_dir)
        return self.output_dir / name

    def _base_metadata(self) -> Dict[str, Any]:
        return {
            "scenario": self.config.scenario,
            "temperature_K": self.config.vapor.temperature_K,
            "line_data_version": self.line.version,
        }

    def run(self, command: str) -> List[Path]:
        """
        Dispatch one command

        Args:
            command: One of COMMANDS

        Returns:
            Paths of the files written
        """
        handlers = {
            "simulate-spectrum": self.simulate_spectrum,
            "fit-spectrum": self.fit_spectrum,
            "saturation-scan": self.saturation_scan,
            "allan": self.allan,
            "vapor-info": self.vapor_info,
            "report": self.report,
            "anticrossing": self.anticrossing,
        }
        if command not in handlers:
            raise UsageError(f"Unknown command '{command}', expected one of {', '.join(COMMANDS)}")
        return handlers[command]()

    # Spectra
    def averaged_spectrum(self) -> SpectrumTrace:
        sim = self.config.simulation
        scenario = self.config.build_scenario(self.line)
        self._say(f"📊 {sim.n_configs} configurations, mean atom number {scenario.count.mean:.2f}")
        trace = average_spectra(scenario, sim.n_configs, sim.workers, show_progress=self.verbose)
        metadata = self._base_metadata()
        metadata.update(trace.metadata)
        metadata["source"] = "simulate-spectrum"
        return trace.with_metadata(**metadata)

    def simulate_spectrum(self) -> List[Path]:
        self._banner(f"Simulating averaged spectrum: {self.config.scenario}")
        trace = self.averaged_spectrum()
        splitting = extract_splitting(trace)
        trace = trace.with_metadata(splitting_Hz=splitting)
        path = trace.to_csv(self._output_path("spectrum.csv"))

        if splitting is None:
            self._say("⚠️  No normal-mode splitting resolved")
        else:
            self._say(f"✅ Splitting: {splitting / 1e9:.3f} GHz")
        self._say(f"📄 Wrote {path}")
        return [path]

    def anticrossing(self) -> List[Path]:
        self._banner(f"Anti-crossing scan: {self.config.scenario}")
        sim = self.config.simulation
        scenario = self.config.build_scenario(self.line)
        traces = anticrossing_map(scenario, sim.anticrossing_detunings_Hz, sim.n_configs, sim.workers,
                                  show_progress=self.verbose)
        paths = []
        for k, trace in enumerate(traces):
            metadata = self._base_metadata()
            metadata.update(trace.metadata)
            metadata["splitting_Hz"] = extract_splitting(trace)
            paths.append(trace.with_metadata(**metadata).to_csv(self._output_path(f"anticrossing_{k}.csv")))
            self._say(f"📄 Cavity detuning {trace.metadata['cavity_detuning_Hz'] / 1e9:+.2f} GHz -> {paths[-1].name}")
        self._say(f"✅ Wrote {len(paths)} spectra")
        return paths

    # Fits
    def _fit_input(self) -> SpectrumTrace:
        block = self.config.fit
        if block.trace_path:
            self._say(f"📂 Loading trace: {block.trace_path}")
            return SpectrumTrace.from_csv(block.trace_path)
        if block.model == "vapor_temperature":
            vapor = self.config.vapor
            self._say(f"📊 No trace configured; synthesizing a cell spectrum at {vapor.temperature_K:g} K")
            # the cell spectrum follows the vapor-pressure curve, not the clad-region density override
            cell = VaporState.at_temperature(vapor.temperature_K, self.line, vapor.transit_broadening_Hz,
                                             model=vapor.vapor_pressure_model)
            return synthesize_free_space_trace(
                cell,
                vapor.path_length_m,
                self.config.detuning_grid(),
                noise_level=block.noise_level,
                seed=self.config.simulation.seed,
                line=self.line,
            )
        truth = block.interaction_factor if block.model == "interaction_factor" else 0.0
        self._say(f"📊 No trace configured; synthesizing one with IF = {truth:g}")
        return synthesize_clad_trace(
            self.config.build_ring(),
            self.config.build_vapor(self.line),
            truth,
            self.config.detuning_grid(),
            noise_level=block.noise_level,
            seed=self.config.simulation.seed,
            line=self.line,
            metadata={"scenario": self.config.scenario},
        )

    def fit_spectrum(self) -> List[Path]:
        block = self.config.fit
        self._banner(f"Fitting spectrum ({block.model})")
        trace = self._fit_input()
        if block.model == "lorentzian":
            result = fit_lorentzian(trace)
        elif block.model == "vapor_temperature":
            vapor = self.config.vapor
            result = fit_vapor_temperature(
                trace, vapor.path_length_m, block.fit_path_length, block.fit_scale, self.line,
                vapor.transit_broadening_Hz, vapor.vapor_pressure_model,
            )
        else:
            result = fit_interaction_factor(
                trace, self.config.build_ring(), self.config.build_vapor(self.line), block.fit_scale, self.line
            )
        for warning in result.warnings:
            self._say(f"⚠️  {warning}")

        metadata = self._base_metadata()
        metadata.update({key: trace.metadata.get(key) for key in ("source", "seed", "power_W") if key in trace.metadata})
        path = result.to_yaml(self._output_path("fit.yaml"), metadata)
        for name, estimate in result.parameters.items():
            self._say(f"   {name}: {estimate.value:.6g} +/- {estimate.ci95:.2g}")
        self._say(f"📄 Wrote {path}")
        return [path]

    def _ladder_traces(self) -> List[SpectrumTrace]:
        block = self.config.saturation
        if block.trace_paths:
            return [SpectrumTrace.from_csv(path) for path in block.trace_paths]

        ring = self.config.build_ring()
        vapor = self.config.build_vapor(self.line)
        grid = self.config.detuning_grid()
        seed = self.config.simulation.seed
        traces = []
        for i, power in enumerate(tqdm(block.powers_W, desc="Synthesizing ladder", disable=not self.verbose)):
            alpha = interaction_factor_law(power, block.alpha0, block.p_sat_W)
            traces.append(synthesize_clad_trace(
                ring, vapor, alpha, grid, noise_level=block.noise_level, seed=seed + i, line=self.line,
                metadata={"power_W": float(power)},
            ))
        return traces

    def saturation_scan(self) -> List[Path]:
        block = self.config.saturation
        self._banner(f"Saturation scan: {len(block.trace_paths or block.powers_W)} powers")
        traces = self._ladder_traces()
        curve, result = fit_power_ladder(
            traces, self.config.build_ring(), self.config.build_vapor(self.line), block.fit_scale, self.line,
            show_progress=self.verbose,
        )
        for warning in result.warnings:
            self._say(f"⚠️  {warning}")

        metadata = self._base_metadata()
        metadata["source"] = "measured" if block.trace_paths else "synthetic"
        curve.metadata.update(metadata)
        curve_path = curve.to_csv(self._output_path("saturation.csv"))
        fit_path = result.to_yaml(self._output_path("saturation_fit.yaml"), metadata)

        p_sat = result["p_sat"]
        self._say(f"✅ alpha0 = {result.value('alpha0'):.4g}, P_sat = {p_sat.value * 1e9:.3g} "
                  f"+/- {p_sat.ci95 * 1e9:.2g} nW")
        self._say(f"📄 Wrote {curve_path} and {fit_path}")
        return [curve_path, fit_path]

    # Stability
    def allan(self) -> List[Path]:
        block = self.config.allan
        self._banner("Allan deviation")
        if block.series_path:
            self._say(f"📂 Loading series: {block.series_path}")
            series = load_frequency_series(block.series_path, block.sample_period_s)
        else:
            series = synthesize_noise(block.synthetic_kind, block.synthetic_level_Hz, block.synthetic_n,
                                      block.synthetic_sample_period_s, block.seed)
        curve = allan_deviation(series, block.taus_s, verbose=self.verbose)

        metadata = self._base_metadata()
        metadata.update({"sample_period_s": series.sample_period, "n_values": len(series)})
        path = curve.to_csv(self._output_path("allan.csv"), metadata)
        self._say(f"✅ {len(curve)} averaging times, sigma({curve.taus[0]:g} s) = {curve.deviations[0] / 1e6:.4g} MHz")
        self._say(f"📄 Wrote {path}")
        return [path]

    # Summaries
    def vapor_summary(self) -> Dict[str, float]:
        vapor = self.config.build_vapor(self.line)
        ring = self.config.build_ring()
        mode = self.config.build_mode(ring)
        atoms = atoms_in_mode(vapor.density, mode)
        gamma = self.config.simulation.gamma_Hz or vapor.transit_broadening
        report = cooperativity_report(ring.cavity_kappa, gamma, g0=mode.peak_coupling, n_atoms=max(atoms, 1e-12))
        return {
            "temperature_K": vapor.temperature,
            "vapor_pressure_Pa": vapor_pressure(vapor.temperature, self.config.vapor.vapor_pressure_model),
            "density_m3": vapor.density,
            "doppler_fwhm_Hz": vapor.doppler_fwhm,
            "atoms_in_mode": atoms,
            "kappa_Hz": ring.cavity_kappa,
            "free_spectral_range_Hz": ring.free_spectral_range,
            "decay_length_m": mode.decay_length,
            "peak_cooperativity": report.C,
        }

    def vapor_info(self) -> List[Path]:
        self._banner(f"Vapor and device summary: {self.config.scenario}")
        summary = self.vapor_summary()
        print(f"   Temperature:        {summary['temperature_K']:.2f} K")
        print(f"   Vapor pressure:     {summary['vapor_pressure_Pa']:.4g} Pa")
        print(f"   Density:            {summary['density_m3']:.4g} m^-3")
        print(f"   Doppler FWHM:       {summary['doppler_fwhm_Hz'] / 1e6:.1f} MHz")
        print(f"   Atoms in mode N_at: {summary['atoms_in_mode']:.1f}")
        print(f"   Cavity kappa:       {summary['kappa_Hz'] / 1e6:.1f} MHz")
        print(f"   FSR:                {summary['free_spectral_range_Hz'] / 1e9:.1f} GHz")
        print(f"   Decay length:       {summary['decay_length_m'] * 1e9:.1f} nm")
        print(f"   C (peak g0, N_at):  {summary['peak_cooperativity']:.3g}")
        return []

    def report(self) -> List[Path]:
        self._banner(f"Acceptance report: {self.config.scenario}")
        trace = self.averaged_spectrum()
        splitting = extract_splitting(trace)
        checks = run_acceptance(splitting)

        notes = [f"Splitting simulated for scenario '{self.config.scenario}' with "
                 f"{self.config.simulation.n_configs} configurations, seed {self.config.simulation.seed}."]
        if splitting is not None:
            atoms = trace.metadata.get("mean_atoms") or 1.0
            notes.append(f"Position-averaged coupling from the splitting: "
                         f"{g0_bar_from_splitting(splitting, atoms) / 1e6:.1f} MHz.")
        text = render_markdown(checks, f"Acceptance report: {self.config.scenario}", notes)

        path = self._output_path("report.md")
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)

        passed = sum(check.passed for check in checks)
        marker = "✅" if passed == len(checks) else "⚠️ "
        self._say(f"{marker} {passed}/{len(checks)} checks pass")
        self._say(f"📄 Wrote {path}")
        return [path]
