"""Linearly damped motion ``X'' = -kappa X'`` in closed form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhasePoint:
    position: float
    velocity: float

    def __post_init__(self):
        if not (np.isfinite(self.position) and np.isfinite(self.velocity)):
            raise ValueError("phase point coordinates must be finite")

    def distance(self, other: "PhasePoint") -> float:
        return float(np.hypot(self.position - other.position, self.velocity - other.velocity))


def _check_kappa(kappa):
    if not kappa > 0:
        raise ValueError(f"damping rate must be positive, got {kappa!r}")


def damped_flow(p: PhasePoint, t: float, kappa: float) -> PhasePoint:
    """Flow map ``S_t``; defined for negative ``t`` too, where it anti-damps."""
    _check_kappa(kappa)
    # 1 - exp(-kappa t) without cancellation near t = 0
    travelled = -np.expm1(-kappa * t) / kappa
    return PhasePoint(p.position + p.velocity * travelled, p.velocity * np.exp(-kappa * t))


def time_inversion(p: PhasePoint) -> PhasePoint:
    return PhasePoint(p.position, -p.velocity)


def motion_reversal_defect(p: PhasePoint, t: float, kappa: float) -> float:
    """Distance from ``p`` after evolving, reversing the motion, evolving again and reversing back.

    Zero for every ``p`` and ``t`` would mean the inverted dynamics retraces
    the original; damping leaves a gap whenever ``t != 0`` and the velocity is nonzero.
    """
    q = time_inversion(damped_flow(time_inversion(damped_flow(p, t, kappa)), t, kappa))
    return q.distance(p)


def lyapunov_speed_trace(p: PhasePoint, kappa: float, times) -> np.ndarray:
    """``|V(t)| = |V(0)| exp(-kappa t)`` at each requested time."""
    _check_kappa(kappa)
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    return abs(p.velocity) * np.exp(-kappa * times)


def flow_ensemble(points, t: float, kappa: float) -> np.ndarray:
    """Transport an ``(N, 2)`` array of phase points; the induced map on empirical measures."""
    _check_kappa(kappa)
    pts = np.asarray(points, dtype=float)
    travelled = -np.expm1(-kappa * t) / kappa
    out = np.empty_like(pts)
    out[:, 0] = pts[:, 0] + pts[:, 1] * travelled
    out[:, 1] = pts[:, 1] * np.exp(-kappa * t)
    return out
