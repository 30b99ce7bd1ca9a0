"""Discrete shift semigroup on integer bins.

``gamma`` is a bijection of the integers onto the positive integers:
``k -> 2k`` for ``k >= 1`` and ``k -> 2|k| + 1`` for ``k <= 0``.  Pushing mass
forward along ``gamma^n`` gives isometric, injective stochastic maps whose
ranges shrink strictly with ``n``, so none of them is surjective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mixcone.simplex import find_feasible


def gamma(k: int) -> int:
    return 2 * k if k >= 1 else 2 * abs(k) + 1


def gamma_inverse(m: int) -> int | None:
    """Preimage of ``m`` under ``gamma``, or ``None`` outside the range."""
    if m < 1:
        return None
    return m // 2 if m % 2 == 0 else -(m - 1) // 2


def gamma_power(k: int, n: int) -> int:
    for _ in range(n):
        k = gamma(k)
    return k


def in_range(m: int, n: int) -> bool:
    """Whether ``m`` lies in ``gamma^n(Z)``."""
    for _ in range(n):
        m = gamma_inverse(m)
        if m is None:
            return False
    return True


@dataclass(frozen=True)
class ShiftState:
    """Probability masses on finitely many integer bins."""

    bins: dict

    def __post_init__(self):
        clean = {int(k): float(v) for k, v in self.bins.items() if v != 0}
        if any(v < 0 for v in clean.values()):
            raise ValueError("masses must be nonnegative")
        if abs(math.fsum(clean.values()) - 1.0) > 1e-12:
            raise ValueError("masses must sum to 1")
        object.__setattr__(self, "bins", clean)

    @classmethod
    def delta(cls, k: int) -> "ShiftState":
        return cls({k: 1.0})


def push(measure: dict, n: int) -> dict:
    """Push a sparse signed measure forward along ``gamma^n``."""
    if n < 0:
        raise ValueError("the shift semigroup has no negative powers")
    return {gamma_power(k, n): v for k, v in measure.items()}


def shift_map(s: ShiftState, n: int) -> ShiftState:
    return ShiftState(push(s.bins, n))


def sparse_norm(measure: dict) -> float:
    return math.fsum(abs(v) for v in measure.values())


def shift_surjectivity_witness(n: int, window: int = 64) -> ShiftState:
    """Point mass on a bin of ``gamma^(n-1)(Z)`` that ``gamma^n`` misses.

    Candidates are scanned by increasing ``|k|`` (ties: negative first).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    for k in sorted(range(-window, window + 1), key=lambda k: (abs(k), k)):
        if in_range(k, n - 1) and not in_range(k, n):
            return ShiftState.delta(k)
    raise ValueError(f"no witness within |k| <= {window}; enlarge the window")


def truncated_shift_matrix(radius: int):
    """``gamma`` restricted to source bins ``-radius..radius`` as a 0/1 matrix.

    Target bins are ``0..2 radius + 1``, which contains the image and the
    missed bin 0.  Returns ``(matrix, source_labels, target_labels)``.
    """
    sources = list(range(-radius, radius + 1))
    targets = list(range(0, 2 * radius + 2))
    M = np.zeros((len(targets), len(sources)))
    for j, k in enumerate(sources):
        M[targets.index(gamma(k)), j] = 1.0
    return M, sources, targets


def window_extension_feasible(radius: int, witness: int = 0):
    """LP check on a finite window: can the inverse of ``gamma`` be extended
    isometrically to the witness bin?

    An isometric extension ``R`` must send each image bin ``gamma(k)`` back to
    ``k`` and the witness bin to a state orthogonal to all of those images,
    i.e. supported outside the whole source window.  The unknown column
    ``R[:, witness]`` must then be a probability vector with zero mass on every
    source bin, which the simplex reports as infeasible.
    """
    M, sources, targets = truncated_shift_matrix(radius)
    if witness not in targets or M[targets.index(witness)].any():
        raise ValueError("witness must be a target bin outside the range")
    n = len(sources)
    A = np.vstack((np.ones((1, n)), np.eye(n)))
    b = np.concatenate(([1.0], np.zeros(n)))
    return find_feasible(A, b, exact=True, tol=0)
