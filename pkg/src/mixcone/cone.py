"""Elements of finite-dimensional measure cones.

Two realisations share one set of operations:

* classical: real weight vectors over a finite index set (signed measures),
  charge = sum of weights, 1-norm = total variation;
* quantum: complex Hermitian matrices, charge = trace, 1-norm = trace norm.

Every operation accepts either the wrapper types defined here or plain array
likes; one-dimensional input is read as classical, square two-dimensional input
as quantum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from mixcone.eigen import eigh

TOL_HERM = 1e-10
TOL = 1e-9
ZERO_EIGENVALUE = 1e-12

CLASSICAL = "classical"
QUANTUM = "quantum"


@dataclass(frozen=True, eq=False)
class SignedMeasure:
    """Real weights over ``dim`` bins."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty one-dimensional sequence")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.size

    def __array__(self, dtype=None, copy=None):
        return self.weights if dtype is None else self.weights.astype(dtype)

    def to_json(self) -> dict:
        return {"dim": self.dim, "weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, doc) -> "SignedMeasure":
        if isinstance(doc, list):
            return cls(doc)
        weights = doc["weights"]
        if "dim" in doc and int(doc["dim"]) != len(weights):
            raise ValueError(f"dim {doc['dim']} does not match {len(weights)} weights")
        return cls(weights)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Complex ``dim x dim`` matrix equal to its conjugate transpose."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"entries must be a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > TOL_HERM:
            raise ValueError("matrix is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }

    @classmethod
    def from_json(cls, doc) -> "HermitianOperator":
        re = np.array(doc["re"], dtype=float)
        im = np.array(doc.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValueError("re and im parts differ in shape")
        if "dim" in doc and int(doc["dim"]) != re.shape[0]:
            raise ValueError(f"dim {doc['dim']} does not match matrix of shape {re.shape}")
        return cls(re + 1j * im)


Element = Union[SignedMeasure, HermitianOperator, np.ndarray]


def element_from_json(doc) -> SignedMeasure | HermitianOperator:
    if isinstance(doc, list) or "weights" in doc:
        return SignedMeasure.from_json(doc)
    return HermitianOperator.from_json(doc)


def kind_of(z) -> tuple[str, np.ndarray]:
    """Return ``(kind, array)`` for any accepted element representation."""
    if isinstance(z, SignedMeasure):
        return CLASSICAL, z.weights
    if isinstance(z, HermitianOperator):
        return QUANTUM, z.entries
    a = np.asarray(z)
    if a.ndim == 1:
        if np.iscomplexobj(a):
            raise TypeError("classical elements must be real")
        return CLASSICAL, a.astype(float)
    if a.ndim == 2 and a.shape[0] == a.shape[1]:
        return QUANTUM, a.astype(complex)
    raise TypeError(f"cannot interpret array of shape {a.shape} as a cone element")


def charge(z) -> float:
    """Total mass: sum of weights, or trace."""
    kind, a = kind_of(z)
    if kind == CLASSICAL:
        return float(np.sum(a))
    return float(np.trace(a).real)


def spectrum(z) -> np.ndarray:
    """Weights (classical) or eigenvalues (quantum), ascending for quantum."""
    kind, a = kind_of(z)
    if kind == CLASSICAL:
        return a.copy()
    return eigh(a)[0]


def one_norm(z) -> float:
    kind, a = kind_of(z)
    if kind == CLASSICAL:
        return float(np.sum(np.abs(a)))
    return float(np.sum(np.abs(eigh(a)[0])))


@dataclass(frozen=True, eq=False)
class MinimalDecomposition:
    """``z = positive_part - negative_part`` with mutually orthogonal positive parts."""

    positive_part: np.ndarray
    negative_part: np.ndarray

    @property
    def positive_charge(self) -> float:
        return charge(self.positive_part)

    @property
    def negative_charge(self) -> float:
        return charge(self.negative_part)

    def reconstruct(self) -> np.ndarray:
        return self.positive_part - self.negative_part


def minimal_decomposition(z) -> MinimalDecomposition:
    """Split ``z`` into its positive and negative parts.

    Classically this is the componentwise split.  For a Hermitian matrix the
    spectral projections onto positive and negative eigenvalues are used;
    eigenvalues within ``ZERO_EIGENVALUE`` of zero go to neither part.
    """
    kind, a = kind_of(z)
    if kind == CLASSICAL:
        return MinimalDecomposition(np.maximum(a, 0.0), np.maximum(-a, 0.0))
    w, v = eigh(a)
    pos = np.where(w > ZERO_EIGENVALUE, w, 0.0)
    neg = np.where(w < -ZERO_EIGENVALUE, -w, 0.0)
    vh = v.conj().T
    return MinimalDecomposition((v * pos) @ vh, (v * neg) @ vh)


def is_positive(z, tol: float = TOL) -> bool:
    return bool(np.min(spectrum(z)) >= -tol)


def is_state(z, tol: float = TOL) -> bool:
    return is_positive(z, tol) and abs(charge(z) - 1.0) <= tol


def as_state(z, tol: float = TOL):
    """Validate ``z`` as a state and return its array form."""
    kind, a = kind_of(z)
    if not is_positive(a, tol):
        raise ValueError("state must be positive")
    c = charge(a)
    if abs(c - 1.0) > tol:
        raise ValueError(f"state must have unit charge, got {c!r}")
    return a


def is_orthogonal(x, y, tol: float = TOL) -> bool:
    """Orthogonality of two nonzero positive elements.

    Classically: disjoint supports, ``x_i * y_i <= tol`` for every bin.
    Quantum: orthogonal ranges, ``tr(x y) <= tol * ||x||_1 * ||y||_1``.
    """
    kx, a = kind_of(x)
    ky, b = kind_of(y)
    if kx != ky or a.shape != b.shape:
        raise ValueError("elements must be of the same kind and dimension")
    if charge(a) <= 0 or charge(b) <= 0:
        raise ValueError("orthogonality is defined for nonzero positive elements")
    if kx == CLASSICAL:
        return bool(np.all(a * b <= tol))
    overlap = float(np.trace(a @ b).real)
    return overlap <= tol * one_norm(a) * one_norm(b)


def random_signed(rng, dim: int) -> np.ndarray:
    return rng.normal(size=dim)


def random_hermitian(rng, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2.0


def random_probability(rng, dim: int, sparsity: float = 0.0) -> np.ndarray:
    """Dirichlet(1) vector; each bin is zeroed with probability ``sparsity``
    while keeping at least one bin occupied."""
    p = rng.dirichlet(np.ones(dim))
    if sparsity > 0 and dim > 1:
        mask = rng.random(dim) < sparsity
        if mask.all():
            mask[rng.integers(dim)] = False
        p[mask] = 0.0
        p /= p.sum()
    return p


def random_density(rng, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def pure_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
