"""Pair transport: is there one stochastic matrix sending ``(x, y)`` to ``(x', y')``?

The question is a linear feasibility problem in the ``m * n`` entries of the
matrix and is decided with the phase-1 simplex.  For finite classical state
spaces it is equivalent to dominance of mixing distances, which gives an
independent route through :mod:`mixcone.mixing`; infeasible answers carry the
point where dominance fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mixcone.classical import StochasticMatrix, random_column_disjoint, random_stochastic, verify_stochastic
from mixcone.cone import CLASSICAL, kind_of, random_probability
from mixcone.mixing import DEFAULT_TOL, compare_profiles, dominates, mixing_profile
from mixcone.simplex import FEAS_TOL, find_feasible

MAX_DIM = 16
AMBIGUOUS_RESIDUAL = 1e-6


class DimensionBoundError(ValueError):
    """Input exceeds the supported problem size."""


@dataclass
class TransportCertificate:
    feasible: bool
    transport: StochasticMatrix | None = None
    witness_t: float | None = None
    gap: float | None = None
    farkas: np.ndarray | None = None
    residual: float = 0.0
    exact: bool = False

    @property
    def dominance_witness(self):
        return None if self.witness_t is None else (self.witness_t, self.gap)

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "transport": None if self.transport is None else self.transport.to_json(),
            "witness_t": self.witness_t,
            "gap": self.gap,
            "farkas": None if self.farkas is None else self.farkas.tolist(),
            "residual": self.residual,
            "exact": self.exact,
        }


def _classical_state(z, name):
    kind, a = kind_of(z)
    if kind != CLASSICAL:
        raise TypeError(f"{name} must be a classical state")
    if np.any(a < -1e-9) or abs(a.sum() - 1.0) > 1e-9:
        raise ValueError(f"{name} is not a probability vector")
    return a


def transport_system(x, y, xp, yp):
    """Equality system ``A v = b`` for the row-major entries ``v`` of an m x n matrix."""
    n, m = x.size, xp.size
    A = np.zeros((n + 2 * m, m * n))
    b = np.zeros(n + 2 * m)
    for j in range(n):
        A[j, j::n] = 1.0
        b[j] = 1.0
    for i in range(m):
        A[n + i, i * n:(i + 1) * n] = x
        A[n + m + i, i * n:(i + 1) * n] = y
    b[n:n + m] = xp
    b[n + m:] = yp
    return A, b


def _clean(v, m, n):
    M = np.maximum(v.reshape(m, n), 0.0)
    sums = M.sum(axis=0)
    return M / np.where(sums > 0, sums, 1.0)


def _verified(M, x, y, xp, yp, tol):
    return (verify_stochastic(M, tol)
            and np.sum(np.abs(M @ x - xp)) <= tol
            and np.sum(np.abs(M @ y - yp)) <= tol)


def find_transport(x, y, xp, yp, tol: float = DEFAULT_TOL, exact: bool = False,
                   max_dim: int = MAX_DIM) -> TransportCertificate:
    """Search for a stochastic matrix with ``Phi x = x'`` and ``Phi y = y'``.

    The float solve is repeated in exact rational arithmetic when its answer is
    numerically doubtful: a returned matrix that fails verification at ``tol``,
    or an infeasible verdict with phase-1 residual below ``AMBIGUOUS_RESIDUAL``.
    """
    x, y = _classical_state(x, "x"), _classical_state(y, "y")
    xp, yp = _classical_state(xp, "x'"), _classical_state(yp, "y'")
    if x.size != y.size or xp.size != yp.size:
        raise ValueError("states within a pair must share their dimension")
    n, m = x.size, xp.size
    if n > max_dim or m > max_dim:
        raise DimensionBoundError(f"dimensions ({n}, {m}) exceed the bound {max_dim}")

    A, b = transport_system(x, y, xp, yp)
    result = find_feasible(A, b, tol=FEAS_TOL, exact=exact)
    if not exact:
        doubtful = (result.feasible and not _verified(_clean(result.solution, m, n), x, y, xp, yp, tol)) or (
            not result.feasible and result.residual < AMBIGUOUS_RESIDUAL)
        if doubtful:
            result = find_feasible(A, b, tol=FEAS_TOL, exact=True)

    if result.feasible:
        M = _clean(result.solution, m, n)
        return TransportCertificate(True, transport=StochasticMatrix(M), residual=result.residual,
                                    exact=result.exact)

    verdict = compare_profiles(mixing_profile(x, y), mixing_profile(xp, yp), tol)
    return TransportCertificate(False, witness_t=verdict.witness_t, gap=verdict.gap,
                                farkas=result.farkas, residual=result.residual, exact=result.exact)


@dataclass
class RssReport:
    lp_feasible: bool
    dominates: bool
    margin: float
    witness_t: float | None
    gap: float | None
    residual: float

    @property
    def agree(self) -> bool:
        return self.lp_feasible == self.dominates


def check_rss_equivalence(x, y, xp, yp, tol: float = DEFAULT_TOL) -> RssReport:
    """Run the transport LP and the dominance test independently and compare."""
    cert = find_transport(x, y, xp, yp, tol=tol)
    verdict = dominates((x, y), (xp, yp), tol=tol)
    return RssReport(cert.feasible, verdict.holds, verdict.margin, verdict.witness_t, verdict.gap,
                     cert.residual)


def is_reversible_transition(x, y, xp, yp, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``(x', y')`` can be carried back to ``(x, y)``."""
    return find_transport(xp, yp, x, y, tol=tol).feasible


INSTANCE_KINDS = ("image", "reverse", "independent", "perturbed", "isometry")


def random_instance(rng, dim: int):
    """One random transport question of dimension ``dim``.

    Kinds: images under a random stochastic matrix (always feasible), the same
    question reversed, four independent states, images pulled part-way toward
    an independent pair, and images under a random column-disjoint isometry
    mapped back (always feasible).
    """
    kind = INSTANCE_KINDS[rng.integers(len(INSTANCE_KINDS))]
    sparsity = 0.3 if rng.random() < 0.3 else 0.0
    x = random_probability(rng, dim, sparsity)
    y = random_probability(rng, dim, sparsity)
    phi = random_stochastic(rng, dim, dim, concentration=float(rng.choice([0.2, 1.0, 5.0])))
    if kind == "image":
        return kind, x, y, phi @ x, phi @ y
    if kind == "reverse":
        return kind, phi @ x, phi @ y, x, y
    if kind == "independent":
        return kind, x, y, random_probability(rng, dim, sparsity), random_probability(rng, dim, sparsity)
    if kind == "perturbed":
        lam = float(rng.uniform(0.0, 0.3))
        u, v = random_probability(rng, dim), random_probability(rng, dim)
        return kind, x, y, (1 - lam) * (phi @ x) + lam * u, (1 - lam) * (phi @ y) + lam * v
    iso = random_column_disjoint(rng, dim, dim)
    return kind, iso @ x, iso @ y, x, y


def rss_sweep(dim: int, count: int, seed: int, tol: float = DEFAULT_TOL):
    """Yield ``(index, kind, RssReport)`` for ``count`` seeded random instances.

    Each instance draws from its own child seed, so results do not depend on
    evaluation order.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    for index, child in enumerate(children):
        rng = np.random.default_rng(child)
        kind, x, y, xp, yp = random_instance(rng, dim)
        yield index, kind, check_rss_equivalence(x, y, xp, yp, tol)
