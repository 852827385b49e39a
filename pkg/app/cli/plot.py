"""SVG plots of trajectory projections, one colored polyline per causal arc."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from app.extremal.control import CausalType  # noqa: E402
from app.extremal.trajectory import Trajectory  # noqa: E402

logger = logging.getLogger(__name__)

CAUSAL_COLORS = {
    CausalType.TIME_LIKE: "#1f77b4",
    CausalType.LIGHT_LIKE: "#d62728",
    CausalType.SUB_RIEMANNIAN_ABNORMAL: "#7f7f7f",
}


class UnknownCoordinateError(KeyError):
    """Raised when a projection names a coordinate the trajectory lacks."""

    def __init__(self, name: str, available: list[str]):
        self.name = name
        self.available = available
        super().__init__(f"Unknown coordinate {name!r}; available: {', '.join(available)}")

    def __str__(self) -> str:
        return self.args[0]


def resolve_coordinate(traj: Trajectory, name: str) -> int:
    """Index of a chart coordinate given by label, ``g_<label>`` or 1-based position."""
    labels = list(traj.chart_labels) or [str(i + 1) for i in range(traj.coordinates.shape[1])]
    key = name[2:] if name.startswith("g_") else name
    if key in labels:
        return labels.index(key)
    if key.isdigit() and 1 <= int(key) <= len(labels):
        return int(key) - 1
    raise UnknownCoordinateError(name, labels)


def arc_segments(traj: Trajectory) -> list[tuple[CausalType, int, int]]:
    """(tag, first, last) sample ranges of constant causal tag.

    Consecutive ranges share their boundary sample so the polyline stays
    connected.
    """
    out: list[tuple[CausalType, int, int]] = []
    start = 0
    tags = traj.causal_tags
    for i in range(1, len(tags)):
        if tags[i] is not tags[i - 1]:
            out.append((tags[start], start, i))
            start = i
    if tags:
        out.append((tags[start], start, len(tags) - 1))
    return out


def write_svg(
    traj: Trajectory,
    projection: tuple[str, str],
    path: str | Path,
    title: str | None = None,
) -> Path:
    """Plot the projection of the trajectory onto two chart coordinates.

    Each arc is an SVG group with id ``arc-<k>-<CausalType>``.

    Raises:
        UnknownCoordinateError: If a projection coordinate is not in the chart
        ValueError: If the trajectory is empty
    """
    if not len(traj):
        raise ValueError("cannot plot an empty trajectory")
    ix, iy = (resolve_coordinate(traj, name) for name in projection)
    coords = traj.coordinates
    labels = list(traj.chart_labels) or [str(i + 1) for i in range(coords.shape[1])]
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)

    with matplotlib.rc_context({"svg.hashsalt": "conelie", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 6))
        seen: set[CausalType] = set()
        for k, (tag, first, last) in enumerate(arc_segments(traj)):
            (line,) = ax.plot(
                coords[first : last + 1, ix],
                coords[first : last + 1, iy],
                color=CAUSAL_COLORS[tag],
                linewidth=1.5,
                label=None if tag in seen else tag.value,
            )
            line.set_gid(f"arc-{k}-{tag.value}")
            seen.add(tag)
        ax.set_xlabel(labels[ix])
        ax.set_ylabel(labels[iy])
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        ax.grid(True, alpha=0.3)
        fig.savefig(out, format="svg", bbox_inches="tight", metadata={"Date": None})
        plt.close(fig)
    logger.info("Wrote projection (%s, %s) to %s", labels[ix], labels[iy], out)
    return out
