"""
numra - Main Entry Point

Certifies nonuniform multiresolution filter banks: checks perfect
reconstruction, builds scaling functions and wavelets, verifies the
biorthogonality and frame properties numerically, and reports every
condition with its measured deviation.

Pipeline Overview:
1. Spectrum: validate (N, r) and load or construct the bank
2. Filters: perfect reconstruction of the modulation matrices
3. Construction: scaling functions, refinement, translate biorthogonality
4. Wavelets: periodizations, origin behavior, cross-scale checks
5. Transform: one-level identity, expansion, frame estimates
"""

import argparse
import json
import logging
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from storage.bank_store import load_bank, save_sampled
from storage.run_log import RunLog
from utils.plot_data import PlotDataExporter
from utils.report_export import (
    CertificationReport,
    ConditionEntry,
    RunParameters,
    load_report,
    report_schema,
    save_report,
)
from wavelets.cascade import DecayFit, cascade_provenance, fit_decay, wavelet_origin_check
from wavelets.config import Tolerance, config
from wavelets.errors import BankFileError, DegenerateTail, NumraError
from wavelets.filterbank import FilterBank, check_pr, pr_grid, refinement_residual, shannon_bank
from wavelets.freqfield import (
    SampledFunction,
    check_biorthogonal,
    check_orthogonal_cross,
    default_n_max,
    periodize,
    riesz_bounds,
)
from wavelets.spectrum import Spectrum, validate_spectrum
from wavelets.transform import (
    WaveletSystem,
    build_system,
    coefficient_table,
    cross_biorthogonality,
    empirical_frame_bounds,
    expand,
    frame_chain,
    one_level_residual,
    projection_decay,
    aligned_levels,
    alias_free_step,
    covered_band,
    random_signal,
    shannon_system,
    telescoping_residual,
)

logger = logging.getLogger("numra")

# Finite atom set of the cross-scale Gram check.
CROSS_SCALE_LEVELS = (-1, 0, 1, 2)
CROSS_SCALE_WINDOW = 4


def _sampled(fn: Callable[[np.ndarray], np.ndarray], params: RunParameters) -> SampledFunction:
    return SampledFunction.from_callable(fn, params.omega, params.step)


def _flag(ok: bool) -> float:
    return 0.0 if ok else 1.0


class CertificationPipeline:
    """
    Runs the certification stages in order and collects one report.

    A stage that raises NumraError stops the run: the report keeps every
    entry computed so far and is marked incomplete.
    """

    def __init__(
        self,
        params: RunParameters,
        run_log: Optional[RunLog] = None,
        console: Optional[Console] = None,
    ):
        self.params = params
        self.run_log = run_log
        self.console = console or Console(stderr=True)

        self.spectrum: Optional[Spectrum] = None
        self.bank: Optional[FilterBank] = None
        self.system: Optional[WaveletSystem] = None
        self.phi: Optional[SampledFunction] = None
        self.phi_dual: Optional[SampledFunction] = None
        self.signals: List[SampledFunction] = []

        self.report = CertificationReport(
            spectrum={"N": params.N, "r": params.r},
            parameters=params,
            seed=params.seed,
        )

    @property
    def stages(self) -> List[Tuple[str, Callable[[], str]]]:
        return [
            ("Validating spectrum", self._stage_spectrum),
            ("Checking perfect reconstruction", self._stage_pr),
            ("Building scaling functions", self._stage_cascade),
            ("Checking refinement", self._stage_refinement),
            ("Checking translate biorthogonality", self._stage_biorthogonal),
            ("Estimating Riesz bounds", self._stage_riesz),
            ("Fitting decay", self._stage_decay),
            ("Constructing wavelets", self._stage_wavelets),
            ("Checking cross-scale biorthogonality", self._stage_cross_scale),
            ("Checking one-level identity", self._stage_one_level),
            ("Expanding a band-limited signal", self._stage_expansion),
            ("Estimating frame bounds", self._stage_frames),
            ("Measuring projection decay", self._stage_projection_decay),
        ]

    def certify(self) -> CertificationReport:
        start = time.perf_counter()
        session_id = None
        if self.run_log is not None:
            session_id = self.run_log.start_session(self.report.spectrum, self.params.model_dump())

        complete = True
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=self.console,
            transient=True,
        ) as progress:
            for description, stage in self.stages:
                task = progress.add_task(f"[cyan]{description}...", total=None)
                try:
                    summary = stage()
                except NumraError as exc:
                    logger.error("%s failed: %s", description, exc.message)
                    self.report.error = {**exc.to_dict(), "exit_code": exc.exit_code}
                    self._log_stage(description, "failed", exc.to_dict())
                    complete = False
                    break
                progress.update(task, completed=True)
                self.console.print(f"[green]✓[/green] {summary}")
                self._log_stage(description, "completed", {"summary": summary})

        self.report.finalize(complete, time.perf_counter() - start)
        if self.run_log is not None and session_id:
            status = "completed" if complete else "incomplete"
            self.run_log.end_session(session_id, status, self.report.passed)
        return self.report

    def _log_stage(self, stage: str, action: str, data: Dict) -> None:
        if self.run_log is not None:
            self.run_log.log_stage(stage, action, data)

    def _tol(self, kind: Tolerance) -> float:
        return config.tolerance(kind)

    def _stage_spectrum(self) -> str:
        self.spectrum = validate_spectrum(self.params.N, self.params.r)
        if self.params.bank:
            self.bank = load_bank(self.params.bank)
            if self.bank.spectrum != self.spectrum:
                raise BankFileError(
                    "bank spectrum does not match the requested (N, r)",
                    bank=self.bank.spectrum.to_dict(), requested=self.spectrum.to_dict(),
                )
            return f"Loaded {self.bank.channels}-channel bank from {self.params.bank}"
        self.bank, _, _ = shannon_bank(self.spectrum, self.params.omega, self.params.step)
        return f"Built the Shannon bank for N={self.spectrum.N}, r={self.spectrum.r}"

    def _stage_pr(self) -> str:
        entry = self.report.add(check_pr(
            self.bank, pr_grid(self.spectrum, self.params.step), tol=self._tol(Tolerance.ALGEBRAIC)
        ))
        return f"Perfect reconstruction deviation {entry.max_deviation:.2e}"

    def _stage_cascade(self) -> str:
        if self.params.bank:
            self.system = build_system(self.bank, self.params.cascade_depth)
        else:
            self.system = shannon_system(self.spectrum)
        self.phi = _sampled(self.system.phi, self.params)
        self.phi_dual = _sampled(self.system.phi_dual, self.params)
        deviation = max(abs(self.phi.value_at(0.0) - 1.0), abs(self.phi_dual.value_at(0.0) - 1.0))
        self.report.add(ConditionEntry(
            name="scaling_at_origin",
            anchor="phi(0) = phi~(0) = 1",
            parameters={"cascade_depth": self.params.cascade_depth, "system": self.system.label},
            max_deviation=deviation,
            tolerance=self._tol(Tolerance.ALGEBRAIC),
        ))
        return f"Scaling functions sampled on {self.phi.count} points ({self.system.label})"

    def _stage_refinement(self) -> str:
        # Cascade products of depth J satisfy the refinement equation only to O((2N)^-J xi).
        refinement = Tolerance.QUADRATURE if self.system.label == "cascade" else Tolerance.ALGEBRAIC
        primal = refinement_residual(self.phi, self.bank.synthesis[0], self.spectrum)
        dual = refinement_residual(self.phi_dual, self.bank.analysis[0], self.spectrum)
        entry = self.report.add(ConditionEntry(
            name="refinement",
            anchor="phi(xi) = m0(xi/2N) phi(xi/2N)",
            max_deviation=max(primal, dual),
            tolerance=self._tol(refinement),
            details={"primal": primal, "dual": dual},
        ))
        return f"Refinement residual {entry.max_deviation:.2e}"

    def _stage_biorthogonal(self) -> str:
        entry = self.report.add(check_biorthogonal(
            self.spectrum, self.phi, self.phi_dual, self.params.n_max, self._tol(Tolerance.ALGEBRAIC)
        ))
        return f"Translate biorthogonality deviation {entry.max_deviation:.2e}"

    def _stage_riesz(self) -> str:
        primal = riesz_bounds(self.spectrum, self.phi, self.params.n_max)
        dual = riesz_bounds(self.spectrum, self.phi_dual, self.params.n_max)
        lower = min(primal.lower, dual.lower)
        self.report.add(ConditionEntry(
            name="riesz_lower_bound",
            anchor="periodization of |phi|^2 is bounded below",
            max_deviation=_flag(lower > 1e-14),
            tolerance=0.0,
            details={"primal": primal.model_dump(), "dual": dual.model_dump()},
        ))
        return f"Riesz bounds [{primal.lower:.3f}, {primal.upper:.3f}]"

    def _fit(self, f: SampledFunction) -> DecayFit:
        try:
            return fit_decay(f)
        except DegenerateTail:
            # Support inside |xi| < 1: every decay rate holds.
            return DecayFit(C=f.max_abs(), epsilon=config.epsilon_cap, passed=True, compact=True)

    def _stage_decay(self) -> str:
        primal, dual = self._fit(self.phi), self._fit(self.phi_dual)
        self.report.add(ConditionEntry(
            name="decay_fit",
            anchor="|phi(xi)| <= C (1 + |xi|)^(-1/2 - epsilon) with epsilon > 0",
            max_deviation=_flag(primal.passed and dual.passed),
            tolerance=0.0,
            details={"primal": primal.model_dump(), "dual": dual.model_dump()},
        ))
        return f"Decay exponents {primal.epsilon:.3f} / {dual.epsilon:.3f}"

    def _stage_wavelets(self) -> str:
        algebraic = self._tol(Tolerance.ALGEBRAIC)
        origin_values: List[float] = []
        ratios: Dict[str, float] = {}
        for channel in range(1, self.system.channels):
            psi = _sampled(self.system.generator(channel), self.params)
            psi_dual = _sampled(self.system.generator(channel, dual=True), self.params)
            self.report.add(check_biorthogonal(
                self.spectrum, psi, psi_dual, self.params.n_max, algebraic,
                name=f"wavelet_biorthogonal_{channel}",
            ))
            self.report.add(check_orthogonal_cross(
                self.spectrum, psi, self.phi_dual, self.params.n_max, algebraic,
                name=f"mixed_periodization_{channel}",
            ))
            self.report.add(check_orthogonal_cross(
                self.spectrum, self.phi, psi_dual, self.params.n_max, algebraic,
                name=f"mixed_periodization_dual_{channel}",
            ))
            for side, f in (("primal", psi), ("dual", psi_dual)):
                check = wavelet_origin_check(f, algebraic)
                origin_values.append(check.value_at_zero)
                ratios[f"{side}_{channel}"] = check.ratio

        self.report.add(ConditionEntry(
            name="wavelet_origin",
            anchor="psi(0) = 0 and |psi(xi)| <= C |xi| near 0",
            max_deviation=max(origin_values),
            tolerance=algebraic,
            details={"ratios": ratios},
        ))
        return f"Checked {self.system.channels - 1} wavelet pairs"

    def _stage_cross_scale(self) -> str:
        closed = self.system.support is not None or self.system.time_pieces is not None
        if closed:
            levels = list(CROSS_SCALE_LEVELS)
            result = cross_biorthogonality(self.system, levels, CROSS_SCALE_WINDOW)
            tolerance = self._tol(Tolerance.QUADRATURE)
        else:
            # Generators with tails: only the levels whose atoms fit the run grid.
            levels = [j for j in CROSS_SCALE_LEVELS if j <= 0]
            result = cross_biorthogonality(
                self.system, levels, CROSS_SCALE_WINDOW, self.params.omega, self.params.step
            )
            tolerance = self._tol(Tolerance.TRUNCATION)
        self.report.add(ConditionEntry(
            name="cross_scale_biorthogonality",
            anchor="<psi_{l,j,lambda}, psi~_{l',j',sigma}> = delta",
            parameters={"levels": levels, "window": CROSS_SCALE_WINDOW, "method": result.method},
            max_deviation=result.max_deviation,
            tolerance=tolerance,
            details={
                "diagonal_deviation": result.diagonal_deviation,
                "atom_count": result.atom_count,
                "omega": result.omega,
                "step": result.step,
            },
        ))
        return f"Cross-scale Gram deviation {result.max_deviation:.2e} over {result.atom_count} atoms"

    def _signals(self, band: Tuple[float, float], first_seed: int) -> List[SampledFunction]:
        return [
            random_signal(band, first_seed + i, self.params.omega, self.params.step)
            for i in range(self.params.signal_count)
        ]

    def _stage_one_level(self) -> str:
        signals = self._signals((0.25, self.params.omega / 2), self.params.seed)
        residuals = []
        for dual, name in ((False, "one_level_identity"), (True, "one_level_identity_dual")):
            values = [one_level_residual(f, self.system, dual=dual) for f in signals]
            residuals.append(max(values))
            self.report.add(ConditionEntry(
                name=name,
                anchor="P_1 f = P_0 f + level-0 details",
                parameters={"signals": len(signals), "seed": self.params.seed},
                max_deviation=max(values),
                tolerance=self._tol(Tolerance.QUADRATURE),
            ))
        return f"One-level residuals {residuals[0]:.2e} / {residuals[1]:.2e}"

    def _stage_expansion(self) -> str:
        band = covered_band(self.spectrum, self.params.j_lo, self.params.j_hi, self.params.omega)
        f = random_signal(band, self.params.seed + 1, self.params.omega, self.params.step)
        telescoped = telescoping_residual(f, self.system, self.params.j_lo, self.params.j_hi)
        _, residual = expand(f, self.system, self.params.j_lo, self.params.j_hi)
        self.report.add(ConditionEntry(
            name="expansion_residual",
            anchor="sum of level j_lo..j_hi details = P_{j_hi+1} f - P_{j_lo} f",
            parameters={"band": list(band), "j_lo": self.params.j_lo, "j_hi": self.params.j_hi},
            max_deviation=telescoped,
            tolerance=self._tol(Tolerance.QUADRATURE),
            details={"expansion_residual": residual},
        ))
        return f"Expansion residual {residual:.2e} (telescoping {telescoped:.2e})"

    def _stage_frames(self) -> str:
        band = covered_band(self.spectrum, self.params.j_lo, self.params.j_hi, self.params.omega)
        self.signals = self._signals(band, self.params.seed)
        levels = range(self.params.j_lo, self.params.j_hi + 1)
        primal = empirical_frame_bounds(self.system, self.signals, levels)
        dual = empirical_frame_bounds(self.system, self.signals, levels, dual=True)
        if self.system.support is not None:
            # Tight on the covered band.
            deviation = max(max(1.0 - e.lower, e.upper - 1.0) for e in (primal, dual))
            tolerance = self._tol(Tolerance.FRAME)
        else:
            bessel = max(primal.upper - 1.0, 0.0) if self.system.is_self_dual() else 0.0
            deviation = max(_flag(primal.lower > 0 and dual.lower > 0), bessel)
            tolerance = self._tol(Tolerance.QUADRATURE)
        self.report.add(ConditionEntry(
            name="frame_bounds",
            anchor="0 < A <= sum |<f, psi>|^2 / ||f||^2 <= B",
            parameters={"signals": len(self.signals), "band": list(band), "levels": list(levels)},
            max_deviation=deviation,
            tolerance=tolerance,
            details={"primal": primal.model_dump(), "dual": dual.model_dump()},
        ))
        chain = frame_chain(self.system, self.signals, levels)
        self.report.add(ConditionEntry(
            name="frame_chain",
            anchor="||f||^2 / B~ <= sum |<f, psi>|^2",
            parameters={"signals": len(self.signals)},
            max_deviation=max(chain.max_violation, 0.0),
            tolerance=self._tol(Tolerance.QUADRATURE),
            details={"dual_upper": chain.dual_upper, "signed_violation": chain.max_violation},
        ))
        return f"Frame bounds [{primal.lower:.3f}, {primal.upper:.3f}]"

    def _stage_projection_decay(self) -> str:
        f = self.signals[0] if self.signals else random_signal(
            (0.25, self.params.omega / 2), self.params.seed, self.params.omega, self.params.step
        )
        levels = aligned_levels(self.system, self.params.step, range(-6, 1))
        norms = projection_decay(f, self.system, levels)
        values = [norm for _, norm in norms]
        growth = max([0.0] + [coarse - fine for coarse, fine in zip(values, values[1:])])
        self.report.add(ConditionEntry(
            name="projection_decay",
            anchor="||P_j f|| decreases toward coarse scales",
            parameters={"levels": [j for j, _ in norms]},
            max_deviation=growth / f.norm(),
            tolerance=self._tol(Tolerance.TRUNCATION),
            details={"norms": {str(j): norm for j, norm in norms}},
        ))
        return f"Projection norms from {values[0]:.2e} to {values[-1]:.2e}"


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _parse_real(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, help="spectrum parameter N >= 1")
    parser.add_argument("--r", type=int, help="odd offset numerator, 1 <= r <= 2N-1")
    parser.add_argument("--bank", help="filter-bank JSON file (default: the Shannon bank)")
    parser.add_argument("--omega", type=_parse_real, help="half-width of the frequency grid")
    parser.add_argument("--step", type=_parse_real, help="grid step, e.g. 1/512")
    parser.add_argument("--nmax", type=int, help="periodization window |n| <= nmax")
    parser.add_argument("--jlo", type=int, help="coarsest level")
    parser.add_argument("--jhi", type=int, help="finest level")
    parser.add_argument("--lwindow", type=int, help="translation window |n| <= lwindow")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--depth", type=int, help="cascade depth J")
    parser.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="numra", description="Certify nonuniform wavelet filter banks")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--no-log", action="store_true", help="do not write the run log")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="validate a spectrum (N, r)")
    validate.add_argument("--N", type=int, required=True)
    validate.add_argument("--r", type=int, required=True)

    certify = commands.add_parser("certify", help="run the full certification")
    _add_run_flags(certify)
    certify.add_argument("--params", help="rerun with the parameters recorded in a report")

    export = commands.add_parser("export", help="export curves or coefficients as CSV")
    export.add_argument("what", choices=["periodization", "scaling", "wavelets", "coefficients"])
    _add_run_flags(export)

    schema = commands.add_parser("schema", help="write the report JSON schema")
    schema.add_argument("--out")

    commands.add_parser("history", help="show run-log statistics")
    return parser


def resolve_parameters(args: argparse.Namespace) -> RunParameters:
    """Fill unset flags from the bank file and the configured defaults."""
    N, r = args.N, args.r
    if args.bank and (N is None or r is None):
        spectrum = load_bank(args.bank).spectrum
        N = spectrum.N if N is None else N
        r = spectrum.r if r is None else r
    if N is None or r is None:
        raise BankFileError("either --bank or both --N and --r are required")
    validate_spectrum(N, r)

    omega = float(config.omega) if args.omega is None else args.omega
    return RunParameters(
        N=N,
        r=r,
        bank=args.bank,
        omega=omega,
        step=float(config.default_step(N)) if args.step is None else args.step,
        n_max=default_n_max(omega) if args.nmax is None else args.nmax,
        j_lo=config.j_lo if args.jlo is None else args.jlo,
        j_hi=config.j_hi if args.jhi is None else args.jhi,
        lambda_window=config.lambda_window if args.lwindow is None else args.lwindow,
        seed=config.seed if args.seed is None else args.seed,
        cascade_depth=config.cascade_depth if args.depth is None else args.depth,
        signal_count=config.signal_count,
    )


def _emit(payload: dict, out: Optional[str] = None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def cmd_validate(args: argparse.Namespace) -> int:
    spectrum = validate_spectrum(args.N, args.r)
    _emit({"valid": True, "spectrum": spectrum.to_dict()})
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    if args.params:
        try:
            params = load_report(args.params).parameters
        except (OSError, ValueError) as exc:
            raise BankFileError(f"cannot read parameters from {args.params}: {exc}", path=args.params) from exc
    else:
        params = resolve_parameters(args)
    console = Console(stderr=True)
    console.print(Panel.fit(
        f"[bold cyan]numra certification[/bold cyan]\nN={params.N}, r={params.r}, "
        f"bank={params.bank or 'shannon'}",
        border_style="cyan",
    ))
    run_log = None if args.no_log else RunLog(config.run_log_path, config.run_log_max_runs)
    report = CertificationPipeline(params, run_log, console).certify()

    if args.out:
        path = save_report(report, args.out)
        console.print(f"[green]✓[/green] Report saved to: {path}")
    else:
        print(report.model_dump_json(indent=2))

    if report.error:
        return int(report.error.get("exit_code", 1))
    return 0


def _system_for(params: RunParameters) -> Tuple[Spectrum, FilterBank, WaveletSystem]:
    spectrum = validate_spectrum(params.N, params.r)
    if params.bank:
        bank = load_bank(params.bank)
        return spectrum, bank, build_system(bank, params.cascade_depth)
    system = shannon_system(spectrum)
    return spectrum, system.bank, system


def cmd_export(args: argparse.Namespace) -> int:
    params = resolve_parameters(args)
    spectrum, bank, system = _system_for(params)
    exporter = PlotDataExporter()
    grid = SampledFunction.grid_points(params.omega, params.step)

    if args.what == "periodization":
        phi = _sampled(system.phi, params)
        phi_dual = _sampled(system.phi_dual, params)
        profile = periodize(spectrum, phi, phi_dual, params.n_max)
        path = exporter.write_curve(profile.base_grid, profile.values, args.out, name="periodization")
    elif args.what == "scaling":
        phi = _sampled(system.phi, params)
        if args.out and args.out.endswith(".json"):
            path = save_sampled(phi, args.out, cascade_provenance(bank.synthesis[0], params.cascade_depth, phi))
        else:
            path = exporter.write_curve(grid, phi.samples, args.out, name="scaling")
    elif args.what == "wavelets":
        curves = [system.generator(channel)(grid) for channel in range(1, system.channels)]
        path = exporter.write_channels(grid, curves, args.out)
    else:
        levels = range(params.j_lo, params.j_hi + 1)
        step = alias_free_step(system, levels, params.lambda_window, params.step)
        f = random_signal((0.25, params.omega / 2), params.seed, params.omega, step)
        table = coefficient_table(f, system, levels, params.lambda_window)
        path = exporter.write_coefficients(table, args.out)

    Console(stderr=True).print(f"[green]✓[/green] Exported {args.what} to: {path}")
    return 0


def cmd_schema(args: argparse.Namespace) -> int:
    _emit(report_schema(), args.out)
    return 0


def cmd_history(args: argparse.Namespace) -> int:
    status = config.get_status()
    run_log = RunLog(status["run_log_path"], status["run_log_max_runs"])
    stats = run_log.get_stats()
    console = Console()
    console.print(Panel(
        f"Sessions: {stats['total_sessions']}  Passed: {stats['passed_sessions']}  "
        f"Incomplete: {stats['incomplete_sessions']}  Actions: {stats['total_actions']}\n"
        f"Log: {status['run_log_path']}  Threads: {status['threads']}\n"
        "Tolerances: " + ", ".join(f"{kind}={value:g}" for kind, value in status["tolerances"].items()),
        title="[bold cyan]Run log[/bold cyan]",
        border_style="cyan",
    ))
    runs = Table("run", "spectrum", "status", "passed", "stages")
    for run in run_log.runs()[-10:]:
        spectrum = run.get("spectrum", {})
        runs.add_row(
            run.get("id", ""), f"N={spectrum.get('N')}, r={spectrum.get('r')}", run.get("status", ""),
            str(run.get("passed", "")), str(len(run.get("stages", []))),
        )
    console.print(runs)
    table = Table("stage", "actions", "last seen")
    for stage, info in sorted(stats["stages"].items()):
        table.add_row(stage, str(info["action_count"]), info.get("last_seen", ""))
    console.print(table)
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "certify": cmd_certify,
    "export": cmd_export,
    "schema": cmd_schema,
    "history": cmd_history,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except NumraError as exc:
        logger.debug("command failed", exc_info=True)
        body = exc.to_dict()
        if "constraint" not in body:
            body.setdefault("constraint", exc.message)
        _emit(body)
        return exc.exit_code
    except OSError as exc:
        _emit({"error": "BankFileError", "message": str(exc)})
        return BankFileError.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
