"""Trajectory files: CSV with 17 significant digits and a JSON record."""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.exceptions import TrajectoryFormatError
from app.extremal.control import CausalType
from app.extremal.schemas import TrajectoryRecord
from app.extremal.trajectory import ExtremalState, Switch, Trajectory

logger = logging.getLogger(__name__)

NEG_INF_TEXT = "-inf"


def _fmt(x: float) -> str:
    return NEG_INF_TEXT if x == float("-inf") else format(float(x), ".17g")


def csv_header(dim: int, chart_labels: tuple[str, ...]) -> list[str]:
    return (
        ["t"]
        + [f"h_{i + 1}" for i in range(dim)]
        + [f"u_{i + 1}" for i in range(dim)]
        + [f"g_{label}" for label in chart_labels]
        + ["alpha_dual", "causal", "nu"]
    )


def write_csv(traj: Trajectory, path: str | Path) -> Path:
    """Write one row per sample."""
    if not traj.samples:
        raise ValueError("cannot export an empty trajectory")
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    dim = len(traj.samples[0].h)
    labels = traj.chart_labels or tuple(str(i + 1) for i in range(len(traj.samples[0].g)))
    with out.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(csv_header(dim, labels))
        for s in traj.samples:
            writer.writerow(
                [_fmt(s.t)]
                + [_fmt(x) for x in s.h]
                + [_fmt(x) for x in s.u]
                + [_fmt(x) for x in np.asarray(s.g)]
                + [_fmt(s.dual_value), s.causal.value, str(traj.nu)]
            )
    logger.info("Wrote %d samples to %s", len(traj.samples), out)
    return out


def read_csv(path: str | Path) -> Trajectory:
    """Parse a file written by :func:`write_csv`.

    Raises:
        TrajectoryFormatError: If the header or a row is malformed
    """
    src = Path(path)
    try:
        with src.open(newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as exc:
        raise TrajectoryFormatError(f"cannot read {src}: {exc}") from exc
    if not rows:
        raise TrajectoryFormatError(f"{src} is empty")
    header = rows[0]
    h_cols = [i for i, name in enumerate(header) if name.startswith("h_")]
    u_cols = [i for i, name in enumerate(header) if name.startswith("u_")]
    g_cols = [i for i, name in enumerate(header) if name.startswith("g_")]
    if not header or header[0] != "t" or header[-3:] != ["alpha_dual", "causal", "nu"] or len(h_cols) != len(u_cols):
        raise TrajectoryFormatError(f"{src} does not have a trajectory header")
    labels = tuple(header[i][2:] for i in g_cols)

    samples = []
    nu = 0
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise TrajectoryFormatError(f"{src}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            samples.append(
                ExtremalState(
                    t=float(row[0]),
                    g=np.array([float(row[i]) for i in g_cols]),
                    h=np.array([float(row[i]) for i in h_cols]),
                    u=np.array([float(row[i]) for i in u_cols]),
                    causal=CausalType(row[-2]),
                    dual_value=float(row[-3]),
                )
            )
            nu = int(row[-1])
        except ValueError as exc:
            raise TrajectoryFormatError(f"{src}:{lineno}: {exc}") from exc
    times = [s.t for s in samples]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise TrajectoryFormatError(f"{src}: sample times are not strictly increasing")
    dt = times[1] - times[0] if len(times) > 1 else 0.0
    switches = [
        Switch(cur.t, prev.causal, cur.causal)
        for prev, cur in zip(samples, samples[1:])
        if prev.causal is not cur.causal
    ]
    return Trajectory(samples=samples, dt=dt, nu=nu, switches=switches, chart_labels=labels)


def write_record(traj: Trajectory, path: str | Path, scenario: str | None = None) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(TrajectoryRecord.of(traj, scenario).model_dump_json(indent=2), encoding="utf-8")
    logger.info("Wrote trajectory record to %s", out)
    return out


def read_record(path: str | Path) -> Trajectory:
    """Parse a JSON record written by :func:`write_record`.

    Raises:
        TrajectoryFormatError: If the file is not a valid record
    """
    src = Path(path)
    try:
        record = TrajectoryRecord.model_validate_json(src.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as exc:
        raise TrajectoryFormatError(f"{src}: {exc}") from exc
    return record.to_trajectory()


def read_trajectory(path: str | Path) -> Trajectory:
    """Dispatch on the file suffix (.csv or .json)."""
    src = Path(path)
    if src.suffix.lower() == ".json":
        return read_record(src)
    return read_csv(src)
