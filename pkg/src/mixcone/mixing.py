"""Mixing-distance profiles of state pairs and the dominance order between them.

The mixing distance of ``(x, y)`` is ``(a, b) -> ||a x0 - b y0||_1`` with
``x0, y0`` the normalised states.  It is positively homogeneous, so the profile
``g(t) = ||t x0 - (1 - t) y0||_1`` on ``t in [0, 1]`` carries all of it.

For classical pairs ``g`` is piecewise linear with kinks at
``t_i = y_i / (x_i + y_i)``, so it is stored exactly.  For quantum pairs it is
convex but not piecewise linear and is sampled on a uniform grid; since
``|g'(t)| <= ||x0 + y0||_1 = 2`` the samples control ``g`` between grid points.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from mixcone.cone import CLASSICAL, QUANTUM, kind_of, one_norm
from mixcone.eigen import eigh

DEFAULT_TOL = 1e-8
DEFAULT_GRID = 2048
LIPSCHITZ = 2.0


@dataclass(frozen=True, eq=False)
class MixingProfile:
    kind: str
    breakpoints: np.ndarray
    values: np.ndarray
    lipschitz_bound: float | None = None

    def __call__(self, t):
        """Evaluate the profile; exact for classical, chordal interpolation for sampled."""
        return np.interp(t, self.breakpoints, self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "g"])
        for t, g in zip(self.breakpoints, self.values):
            writer.writerow([repr(float(t)), repr(float(g))])
        return buf.getvalue()


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of comparing two profiles.

    ``margin`` is ``min_t (g_a(t) - g_b(t))`` over the checked points.  When the
    verdict fails, ``witness_t`` is a point where ``g_b`` exceeds ``g_a`` by
    ``gap > tol``.  ``certified_slack`` bounds how far ``g_a`` may fall below
    ``g_b`` anywhere in ``[0, 1]`` when the verdict holds.
    """

    holds: bool
    margin: float
    witness_t: float | None = None
    gap: float | None = None
    certified_slack: float = 0.0

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "witness_t": self.witness_t,
            "gap": self.gap,
            "margin": self.margin,
        }


def _normalised_pair(x, y):
    kx, a = kind_of(x)
    ky, b = kind_of(y)
    if kx != ky:
        raise TypeError(f"kind mismatch: {kx} vs {ky}")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = one_norm(a), one_norm(b)
    if na == 0 or nb == 0:
        raise ValueError("mixing distance needs nonzero elements")
    return kx, a / na, b / nb


def classical_profile_values(x0, y0, t):
    """Direct evaluation of ``sum_i |t x0_i - (1 - t) y0_i|`` at each ``t``."""
    t = np.asarray(t, dtype=float)[..., None]
    return np.sum(np.abs(t * x0 - (1.0 - t) * y0), axis=-1)


def mixing_profile(x, y, n_grid: int = DEFAULT_GRID) -> MixingProfile:
    kind, x0, y0 = _normalised_pair(x, y)
    if kind == CLASSICAL:
        s = x0 + y0
        occupied = s > 0
        kinks = y0[occupied] / s[occupied]
        ts = np.unique(np.concatenate(([0.0, 1.0], kinks)))
        return MixingProfile(CLASSICAL, ts, classical_profile_values(x0, y0, ts))

    if n_grid < 2:
        raise ValueError("quantum profiles need at least two grid points")
    ts = np.linspace(0.0, 1.0, n_grid)
    values = np.empty(n_grid)
    guess = None
    for i, t in enumerate(ts):
        w, guess = eigh(t * x0 - (1.0 - t) * y0, guess=guess)
        values[i] = np.sum(np.abs(w))
    return MixingProfile(QUANTUM, ts, values, lipschitz_bound=LIPSCHITZ)


def compare_profiles(pa: MixingProfile, pb: MixingProfile, tol: float = DEFAULT_TOL) -> DominanceVerdict:
    """Decide ``g_a(t) >= g_b(t) - tol`` for all ``t``."""
    if pa.kind != pb.kind:
        raise TypeError(f"kind mismatch: {pa.kind} vs {pb.kind}")
    if pa.kind == CLASSICAL:
        # the difference is piecewise linear with kinks in the union of breakpoints
        ts = np.union1d(pa.breakpoints, pb.breakpoints)
        slack = tol
    else:
        if pa.breakpoints.shape != pb.breakpoints.shape or np.any(pa.breakpoints != pb.breakpoints):
            raise ValueError("sampled profiles must share their grid")
        ts = pa.breakpoints
        h = float(np.max(np.diff(ts)))
        slack = tol + (pa.lipschitz_bound + pb.lipschitz_bound) * h / 2.0
    diff = pa(ts) - pb(ts)
    i = int(np.argmin(diff))
    margin = float(diff[i])
    if margin >= -tol:
        return DominanceVerdict(True, margin, certified_slack=slack)
    return DominanceVerdict(False, margin, witness_t=float(ts[i]), gap=-margin, certified_slack=slack)


def dominates(pair_a, pair_b, tol: float = DEFAULT_TOL, n_grid: int = DEFAULT_GRID) -> DominanceVerdict:
    """Whether the mixing distance of ``pair_a`` dominates that of ``pair_b``.

    Pairs may have different dimensions but must be of the same kind.
    """
    pa = mixing_profile(*pair_a, n_grid=n_grid)
    pb = mixing_profile(*pair_b, n_grid=n_grid)
    return compare_profiles(pa, pb, tol)


def is_max_distance(x, y, tol: float = DEFAULT_TOL) -> bool:
    """Whether the profile is identically 1.

    The profile is convex, bounded by 1 and equal to 1 at both ends, so it is
    constant exactly when ``g(1/2) = ||x0 - y0||_1 / 2`` reaches 1.
    """
    _, x0, y0 = _normalised_pair(x, y)
    return one_norm(x0 - y0) / 2.0 >= 1.0 - tol
