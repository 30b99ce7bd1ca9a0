"""One-dimensional Fokker-Planck relaxation on a bounded interval.

Solves ``d rho/dt = -d(b rho)/dX + 1/2 d^2(sigma^2 rho)/dX^2`` with an explicit
conservative finite-volume scheme: drift fluxes are upwinded at cell faces,
the diffusive flux is the centred difference of ``sigma^2 rho / 2`` and both
boundaries carry zero flux.  Each step is a tridiagonal column-stochastic
matrix acting on cell masses, so mass is conserved and, under the step bound,
every coefficient is nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from mixcone.mixing import compare_profiles, mixing_profile

MASS_TOL = 1e-12
CFL = 0.4


class StabilityError(ValueError):
    def __init__(self, dt, bound):
        super().__init__(f"time step {dt!r} exceeds the stability bound {bound!r}")
        self.dt = dt
        self.bound = bound


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Cell-integrated probability masses on ``cells`` equal cells of ``[lower, upper]``."""

    lower: float
    upper: float
    masses: np.ndarray

    def __post_init__(self):
        if not self.upper > self.lower:
            raise ValueError("upper bound must exceed lower bound")
        m = np.array(self.masses, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise ValueError("masses must be a non-empty vector")
        if np.any(m < 0):
            raise ValueError("masses must be nonnegative")
        if abs(m.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {m.sum()!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @property
    def cells(self) -> int:
        return self.masses.size

    @property
    def dx(self) -> float:
        return (self.upper - self.lower) / self.cells

    @property
    def centers(self) -> np.ndarray:
        return self.lower + (np.arange(self.cells) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        """Interior cell faces."""
        return self.lower + np.arange(1, self.cells) * self.dx

    @property
    def density(self) -> np.ndarray:
        return self.masses / self.dx

    def with_masses(self, masses) -> "DensityGrid":
        return DensityGrid(self.lower, self.upper, masses)

    def mean(self) -> float:
        return float(self.centers @ self.masses)

    @classmethod
    def point_mass(cls, lower, upper, cells, x0) -> "DensityGrid":
        m = np.zeros(cells)
        idx = min(cells - 1, max(0, int((x0 - lower) / (upper - lower) * cells)))
        m[idx] = 1.0
        return cls(lower, upper, m)

    @classmethod
    def uniform(cls, lower, upper, cells) -> "DensityGrid":
        return cls(lower, upper, np.full(cells, 1.0 / cells))

    @classmethod
    def gaussian(cls, lower, upper, cells, mean, var) -> "DensityGrid":
        """Cell masses of a normal distribution restricted to the domain."""
        edges = lower + np.arange(cells + 1) * (upper - lower) / cells
        cdf = np.array([0.5 * (1.0 + math.erf((e - mean) / math.sqrt(2.0 * var))) for e in edges])
        m = np.diff(cdf)
        return cls(lower, upper, m / m.sum())


def _evaluate(f, x):
    if callable(f):
        return np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return np.full(x.shape, float(f))


def _rates(grid: DensityGrid, drift, amplitude):
    """Per-unit-time fractions of each cell's mass moving right and left."""
    dx = grid.dx
    b = _evaluate(drift, grid.faces)
    diff = _evaluate(amplitude, grid.centers) ** 2 / 2.0
    right = np.zeros(grid.cells)
    left = np.zeros(grid.cells)
    right[:-1] = (np.maximum(b, 0.0) + diff[:-1] / dx) / dx
    left[1:] = (np.maximum(-b, 0.0) + diff[1:] / dx) / dx
    return right, left


def stability_bound(grid: DensityGrid, drift, amplitude) -> float:
    """Largest admissible step: ``0.4 dx^2 / max sigma^2``, ``0.4 dx / max |b|``
    and the bound keeping every diagonal coefficient nonnegative."""
    dx = grid.dx
    sig2 = float(np.max(_evaluate(amplitude, grid.centers) ** 2))
    bmax = float(np.max(np.abs(_evaluate(drift, grid.faces)))) if grid.cells > 1 else 0.0
    bounds = [CFL * dx * dx / sig2 if sig2 > 0 else math.inf, CFL * dx / bmax if bmax > 0 else math.inf]
    right, left = _rates(grid, drift, amplitude)
    total = float(np.max(right + left))
    bounds.append(1.0 / total if total > 0 else math.inf)
    return min(bounds)


@dataclass(frozen=True)
class StepOperator:
    """Tridiagonal column-stochastic matrix of one time step."""

    stay: np.ndarray
    right: np.ndarray
    left: np.ndarray

    def __call__(self, m: np.ndarray) -> np.ndarray:
        out = self.stay * m
        out[1:] += self.right[:-1] * m[:-1]
        out[:-1] += self.left[1:] * m[1:]
        return out

    def dense(self) -> np.ndarray:
        n = self.stay.size
        M = np.diag(self.stay)
        M[np.arange(1, n), np.arange(n - 1)] = self.right[:-1]
        M[np.arange(n - 1), np.arange(1, n)] = self.left[1:]
        return M


def step_operator(grid: DensityGrid, drift, amplitude, dt: float) -> StepOperator:
    bound = stability_bound(grid, drift, amplitude)
    if not 0 < dt <= bound:
        raise StabilityError(dt, bound)
    right, left = _rates(grid, drift, amplitude)
    right, left = right * dt, left * dt
    return StepOperator(1.0 - right - left, right, left)


def fokker_planck_step(grid: DensityGrid, drift, amplitude, dt: float) -> DensityGrid:
    return grid.with_masses(step_operator(grid, drift, amplitude, dt)(grid.masses))


def stationary_masses(grid: DensityGrid, drift, amplitude) -> np.ndarray:
    """Stationary cell masses of the scheme: zero net flux through every face.

    Requires a strictly positive amplitude.
    """
    right, left = _rates(grid, drift, amplitude)
    if np.any(left[1:] <= 0):
        raise ValueError("zero-flux balance needs a positive amplitude")
    log_ratio = np.log(right[:-1]) - np.log(left[1:])
    logm = np.concatenate(([0.0], np.cumsum(log_ratio)))
    m = np.exp(logm - logm.max())
    return m / m.sum()


def ou_stationary_masses(grid: DensityGrid, rate: float = 1.0, sigma: float = math.sqrt(2.0)) -> np.ndarray:
    """Cell masses of the Ornstein-Uhlenbeck equilibrium ``N(0, sigma^2 / (2 rate))``
    for drift ``-rate X``, renormalised to the domain."""
    return DensityGrid.gaussian(grid.lower, grid.upper, grid.cells, 0.0, sigma ** 2 / (2.0 * rate)).masses


@dataclass
class RelaxationTrace:
    times: np.ndarray
    distances: np.ndarray
    means: np.ndarray
    snapshots: list
    max_mass_drift: float
    min_mass: float
    dominance: list = field(default_factory=list)

    def distance_monotone(self, slack: float = 1e-6) -> bool:
        return bool(np.all(np.diff(self.distances) <= slack))

    def dominance_holds(self) -> bool:
        return all(holds for _, _, holds, _ in self.dominance)


def relaxation_run(rho0: DensityGrid, drift, amplitude, dt: float, steps: int, sample_every: int = 1,
                   reference=None, check_dominance: bool = True, tol: float = 1e-8) -> RelaxationTrace:
    """Evolve ``rho0`` and record its 1-norm distance to the equilibrium.

    ``reference`` defaults to the stationary masses of the scheme itself.  At
    every sampled time the masses are stored; with ``check_dominance`` the
    mixing distance of ``(rho_s, rho*)`` is compared with that of
    ``(rho_t, rho*)`` for all sampled ``s < t``.
    """
    op = step_operator(rho0, drift, amplitude, dt)
    ref = stationary_masses(rho0, drift, amplitude) if reference is None else np.asarray(reference, dtype=float)
    m = rho0.masses.copy()
    times, dists, means, snaps = [0.0], [float(np.abs(m - ref).sum())], [rho0.mean()], [m.copy()]
    centers = rho0.centers
    max_drift = 0.0
    min_mass = float(m.min())
    for k in range(1, steps + 1):
        new = op(m)
        max_drift = max(max_drift, abs(math.fsum(new) - math.fsum(m)))
        min_mass = min(min_mass, float(new.min()))
        m = new
        if k % sample_every == 0 or k == steps:
            times.append(k * dt)
            dists.append(float(np.abs(m - ref).sum()))
            means.append(float(centers @ m))
            snaps.append(m.copy())

    dominance = []
    if check_dominance:
        ref_state = ref / ref.sum()
        profiles = [mixing_profile(s / s.sum(), ref_state) for s in snaps]
        for i in range(len(profiles)):
            for j in range(i + 1, len(profiles)):
                v = compare_profiles(profiles[i], profiles[j], tol)
                dominance.append((i, j, v.holds, v.margin))
    return RelaxationTrace(np.array(times), np.array(dists), np.array(means), snaps, max_drift, min_mass,
                           dominance)
