"""Sampled extremals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from app.cones.base import Vector
from app.extremal.control import CausalType


@dataclass(frozen=True)
class ExtremalState:
    """One sample of an extremal.

    Attributes:
        t: Time
        g: Group element in the model's canonical chart
        h: Left-trivialized covector
        u: Control
        causal: Causal type of the control
        dual_value: α∨(h), -inf off the dual cone
    """

    t: float
    g: Vector
    h: Vector
    u: Vector
    causal: CausalType
    dual_value: float


@dataclass(frozen=True)
class Switch:
    time: float
    from_causal: CausalType
    to_causal: CausalType


@dataclass
class Trajectory:
    """Samples at times i·dt (plus t1), switches and drift diagnostics."""

    samples: list[ExtremalState]
    dt: float
    nu: int
    switches: list[Switch] = field(default_factory=list)
    conserved_report: dict[str, float] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    truncated: bool = False
    chart_labels: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> NDArray[np.float64]:
        return np.array([s.t for s in self.samples])

    @property
    def covectors(self) -> NDArray[np.float64]:
        return np.array([s.h for s in self.samples])

    @property
    def controls(self) -> NDArray[np.float64]:
        return np.array([s.u for s in self.samples])

    @property
    def coordinates(self) -> NDArray[np.float64]:
        return np.array([s.g for s in self.samples])

    @property
    def dual_values(self) -> NDArray[np.float64]:
        return np.array([s.dual_value for s in self.samples])

    @property
    def causal_tags(self) -> list[CausalType]:
        return [s.causal for s in self.samples]

    def arcs(self) -> list[CausalType]:
        """Causal types of the maximal constant-tag arcs, in order."""
        out: list[CausalType] = []
        for tag in self.causal_tags:
            if not out or out[-1] is not tag:
                out.append(tag)
        return out

    def causal_types(self) -> set[CausalType]:
        return set(self.causal_tags)

    def exhibits_mixed_causality(self) -> bool:
        return {CausalType.TIME_LIKE, CausalType.LIGHT_LIKE} <= self.causal_types()
