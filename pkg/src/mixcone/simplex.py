"""Dense phase-1 simplex for feasibility of ``A v = b, v >= 0``.

Bland's rule (lowest-index entering column, lowest-index leaving basic variable
among ratio ties) guarantees termination.  The same tableau code runs on floats
or, with ``exact=True``, on :class:`fractions.Fraction` entries where every
float input is converted without rounding.

On infeasibility the final simplex multipliers give a Farkas vector ``y`` with
``A^T y >= 0`` and ``b^T y < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
COST_TOL = 1e-12


class LPError(RuntimeError):
    """Numerical failure of the simplex iteration."""


@dataclass
class FeasibilityResult:
    feasible: bool
    residual: float
    solution: np.ndarray | None = None
    farkas: np.ndarray | None = None
    iterations: int = 0
    exact: bool = False
    exact_solution: list | None = None


def _to_fraction_array(a):
    a = np.asarray(a, dtype=float)
    out = np.empty(a.shape, dtype=object)
    for idx, val in np.ndenumerate(a):
        out[idx] = Fraction(val)
    return out


def find_feasible(A, b, tol: float = FEAS_TOL, exact: bool = False, max_iter: int = 50_000) -> FeasibilityResult:
    """Phase-1 simplex: minimise the sum of artificial variables.

    The problem counts as feasible when that minimum is at most ``tol``.  In
    exact mode the minimum itself is computed without rounding; pass
    ``tol=0`` to demand exact feasibility of the float inputs.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError(f"b has shape {b.shape}, expected ({m},)")
    sign = np.where(b < 0, -1.0, 1.0)

    if exact:
        zero, one = Fraction(0), Fraction(1)
        T = np.empty((m, n + m + 1), dtype=object)
        T[:, :n] = _to_fraction_array(A * sign[:, None])
        T[:, n:n + m] = zero
        for i in range(m):
            T[i, n + i] = one
        T[:, -1] = _to_fraction_array(b * sign)
        cost_eps = piv_eps = zero
    else:
        T = np.zeros((m, n + m + 1))
        T[:, :n] = A * sign[:, None]
        T[:, n:n + m] = np.eye(m)
        T[:, -1] = b * sign
        scale = max(1.0, float(np.max(np.abs(T))))
        cost_eps, piv_eps = COST_TOL * scale, PIVOT_TOL

    basis = list(range(n, n + m))
    # reduced costs for c = (0, ..., 0, 1, ..., 1) with the artificial basis
    reduced = np.empty(n + m, dtype=T.dtype)
    reduced[:n] = -T[:, :n].sum(axis=0)
    reduced[n:] = zero if exact else 0.0

    iterations = 0
    while True:
        entering = next((j for j in range(n + m) if reduced[j] < -cost_eps), None)
        if entering is None:
            break
        if iterations >= max_iter:
            raise LPError(f"simplex exceeded {max_iter} pivots")
        col = T[:, entering]
        rows = [i for i in range(m) if col[i] > piv_eps]
        if not rows:
            # the phase-1 objective is bounded below by 0, so a column without
            # positive entries can only come from round-off
            raise LPError("unbounded phase-1 direction; numerically inconsistent tableau")
        ratios = {i: T[i, -1] / col[i] for i in rows}
        best = min(ratios.values())
        tie = 0 if exact else 1e-14 * max(1.0, abs(best))
        best_row = min((i for i in rows if ratios[i] <= best + tie), key=lambda i: basis[i])
        r = best_row
        T[r, :] = T[r, :] / T[r, entering]
        for i in range(m):
            if i != r and T[i, entering] != 0:
                T[i, :] = T[i, :] - T[i, entering] * T[r, :]
        reduced = reduced - reduced[entering] * T[r, :-1]
        basis[r] = entering
        iterations += 1

    residual_exact = sum((T[i, -1] for i in range(m) if basis[i] >= n), Fraction(0) if exact else 0.0)
    residual = float(residual_exact)
    feasible = bool(residual_exact <= tol)

    if feasible:
        v = np.zeros(n, dtype=object if exact else float)
        if exact:
            v[:] = Fraction(0)
        for i, j in enumerate(basis):
            if j < n:
                v[j] = T[i, -1]
        solution = v.astype(float) if exact else np.maximum(v, 0.0)
        return FeasibilityResult(True, residual, solution=solution, iterations=iterations,
                                 exact=exact, exact_solution=list(v) if exact else None)

    # multipliers u_i = 1 - reduced cost of artificial i; Farkas vector is -u
    u = np.array([float(1 - reduced[n + i]) for i in range(m)])
    farkas = -u * sign
    return FeasibilityResult(False, residual, farkas=farkas, iterations=iterations, exact=exact)
