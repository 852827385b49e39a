"""Implementations of the command-line subcommands.

Every command returns a process exit status: 0 ok, 1 invariant failure,
2 input error, 3 no extremal through the initial covector.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.antinorms.analysis import describe_dual
from app.antinorms.schemas import DualResponse
from app.cli.plot import UnknownCoordinateError, write_svg
from app.cli.schemas import RunConfig, RunOutcome, load_document
from app.config import Settings
from app.exceptions import (
    ConfigError,
    ConstructionError,
    DimensionMismatchError,
    NoMaximumError,
    NonConvergenceError,
    TrajectoryFormatError,
    UnknownScenarioError,
)
from app.extremal.export import read_trajectory, write_csv, write_record
from app.extremal.schemas import TrajectorySummary
from app.scenarios.checks import check_scenario
from app.scenarios.registry import Scenario, assemble, available, builtin, from_config, validation_diagnostics
from app.scenarios.schemas import ScenarioConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_NO_EXTREMAL = 3


def report_error(exc: Exception) -> None:
    if isinstance(exc, ConfigError):
        print("error: invalid configuration")
        for path, msg in exc.diagnostics:
            print(f"  {path}: {msg}")
    else:
        print(f"error: {exc}")


def resolve_scenario(ref: str | ScenarioConfig, n: int | None, settings: Settings) -> Scenario:
    """Registry name or inline scenario config to a scenario.

    Raises:
        UnknownScenarioError: If the name is not registered
        ConfigError: If an inline scenario fails validation
        ConstructionError: If an inline scenario breaks an invariant
    """
    if isinstance(ref, str):
        return builtin(ref, n=n, settings=settings)
    return from_config(ref, settings)


# =============================================================================
# run
# =============================================================================


def run_one(scenario: Scenario, run: RunConfig, out_dir: Path) -> RunOutcome:
    """Integrate one run and write its artifacts."""
    name = run.output_path or scenario.name
    h0 = run.initial_covector if run.initial_covector is not None else scenario.default_covector
    if h0 is None:
        return RunOutcome(name=name, exit_code=EXIT_INPUT, error="initial_covector: required for this scenario")
    if len(h0) != scenario.dim:
        return RunOutcome(
            name=name,
            exit_code=EXIT_INPUT,
            error=f"initial_covector: expected {scenario.dim} entries, got {len(h0)}",
        )
    try:
        cfg = run.control_settings().to_config()
        traj = scenario.integrate(h0, cfg, run.t1, run.dt)
    except ConfigError as exc:
        detail = "; ".join(f"{p}: {m}" for p, m in exc.diagnostics)
        return RunOutcome(name=name, exit_code=EXIT_INPUT, error=detail)
    except (ValidationError, DimensionMismatchError) as exc:
        return RunOutcome(name=name, exit_code=EXIT_INPUT, error=str(exc))
    except NoMaximumError as exc:
        return RunOutcome(
            name=name,
            exit_code=EXIT_NO_EXTREMAL,
            error=(
                f"{exc}. The initial covector lies neither on the unit dual antisphere "
                "nor on the zero dual antisphere, so no extremal passes through it."
            ),
        )

    files = []
    stem = out_dir / name
    if "csv" in run.formats:
        files.append(str(write_csv(traj, stem.with_suffix(".csv"))))
    if "record" in run.formats:
        files.append(str(write_record(traj, stem.with_suffix(".json"), scenario.name)))
    if "svg" in run.formats:
        projection = run.projection or tuple(traj.chart_labels[:2])
        try:
            files.append(str(write_svg(traj, projection, stem.with_suffix(".svg"), title=scenario.name)))
        except UnknownCoordinateError as exc:
            return RunOutcome(name=name, exit_code=EXIT_INPUT, error=str(exc), files=files)

    summary = TrajectorySummary.of(traj, scenario.name)
    code = EXIT_INVARIANT if traj.truncated else EXIT_OK
    error = "; ".join(traj.diagnostics) if traj.truncated else None
    return RunOutcome(name=name, exit_code=code, summary=summary, files=files, error=error)


def print_outcome(outcome: RunOutcome) -> None:
    print(f"== {outcome.name}")
    if outcome.summary is not None:
        s = outcome.summary
        print(f"causal arcs: {' -> '.join(a.value for a in s.arcs)}")
        if s.switches:
            for sw in s.switches:
                print(f"switch at t={sw.time:.6g}: {sw.from_causal.value} -> {sw.to_causal.value}")
        else:
            print("switches: none")
        print(f"max |H| drift: {s.max_hamiltonian:.3e}")
        print(f"max dual-value drift: {s.max_dual_drift:.3e}")
        print(f"samples: {s.samples}, t_end: {s.t_end:.6g}{' (truncated)' if s.truncated else ''}")
    for f in outcome.files:
        print(f"wrote {f}")
    if outcome.error:
        print(f"error: {outcome.error}")


def cmd_run(cfg: RunConfig, out_dir: str | Path, settings: Settings) -> int:
    """Run a config (and its sweep), write artifacts and print summaries."""
    try:
        scenario = resolve_scenario(cfg.scenario, cfg.n, settings)
    except (UnknownScenarioError, ConfigError) as exc:
        report_error(exc)
        return EXIT_INPUT
    except ConstructionError as exc:
        report_error(exc)
        return EXIT_INVARIANT

    runs = cfg.expand()
    out = Path(out_dir)
    if len(runs) == 1:
        outcomes = [run_one(scenario, runs[0], out)]
    else:
        workers = min(settings.sweep_workers, len(runs))
        logger.info("Sweeping %d runs of %s on %d workers", len(runs), scenario.name, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda r: run_one(scenario, r, out), runs))

    for outcome in outcomes:
        print_outcome(outcome)
    return max(o.exit_code for o in outcomes)


# =============================================================================
# check / scenarios / dual / plot
# =============================================================================


def scenario_from_document(doc: dict) -> tuple[str | ScenarioConfig, int | None]:
    """Scenario reference of a run config, or of a bare scenario document."""
    ref = doc.get("scenario", doc)
    if isinstance(ref, str):
        return ref, doc.get("n")
    try:
        return ScenarioConfig.model_validate(ref), None
    except ValidationError as exc:
        prefix = "scenario" if "scenario" in doc else ""
        raise ConfigError(validation_diagnostics(exc, prefix)) from exc


def cmd_check(
    ref: str | ScenarioConfig,
    settings: Settings,
    n: int | None = None,
    samples: int = 500,
) -> int:
    """Print the structural report; exit 1 when a hard invariant fails."""
    try:
        if isinstance(ref, str):
            scenario = builtin(ref, n=n, settings=settings)
        else:
            scenario = assemble(ref, settings, check=False)
    except (UnknownScenarioError, ConfigError) as exc:
        report_error(exc)
        return EXIT_INPUT
    except ConstructionError as exc:
        report_error(exc)
        return EXIT_INVARIANT

    report = check_scenario(scenario, samples=samples)
    print(f"== {report.scenario}")
    for line in report.messages:
        print(line)
    print(report.model_dump_json(indent=2))
    return EXIT_OK if report.ok else EXIT_INVARIANT


def cmd_scenarios(settings: Settings) -> int:
    for name in available():
        scenario = builtin(name, settings=settings)
        print(f"{name:<22} dim {scenario.dim:<2} {scenario.description}")
    return EXIT_OK


def cmd_dual(name: str, covector: list[float], settings: Settings, n: int | None = None, r: float | None = None) -> int:
    """Evaluate α∨ at a covector and print the result as JSON."""
    try:
        scenario = builtin(name, n=n, settings=settings)
        dual, maximizers = describe_dual(scenario.antinorm, np.asarray(covector, dtype=float), r)
    except (UnknownScenarioError, DimensionMismatchError, ConstructionError, ValueError) as exc:
        report_error(exc)
        return EXIT_INPUT
    except NonConvergenceError as exc:
        report_error(exc)
        return EXIT_INVARIANT
    response = DualResponse(scenario=scenario.name, covector=covector, dual=dual, maximizers=maximizers)
    print(response.model_dump_json(indent=2))
    return EXIT_OK


def cmd_plot(path: str | Path, projection: tuple[str, str], out: str | Path | None = None) -> int:
    """Write an SVG of a trajectory file projected to two chart coordinates."""
    src = Path(path)
    target = Path(out) if out is not None else src.with_suffix(".svg")
    if target.is_dir():
        target = target / src.with_suffix(".svg").name
    try:
        traj = read_trajectory(src)
        written = write_svg(traj, projection, target, title=src.stem)
    except (TrajectoryFormatError, UnknownCoordinateError, ValueError) as exc:
        report_error(exc)
        return EXIT_INPUT
    print(f"wrote {written}")
    return EXIT_OK


def load_check_target(config: str | Path) -> tuple[str | ScenarioConfig, int | None]:
    return scenario_from_document(load_document(config))
