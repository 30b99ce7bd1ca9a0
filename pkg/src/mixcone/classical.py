"""Classical stochastic maps as column-stochastic matrices.

Entry ``(i, j)`` is the fraction of the mass in source bin ``j`` sent to target
bin ``i``, so states are column vectors and a map acts by ``Phi @ z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mixcone.cone import TOL

SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class StochasticCheck:
    valid: bool
    issues: list[str] = field(default_factory=list)
    min_entry: float = 0.0
    max_column_error: float = 0.0

    def __bool__(self):
        return self.valid

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "issues": self.issues,
            "min_entry": self.min_entry,
            "max_column_error": self.max_column_error,
        }


def verify_stochastic(M, tol: float = TOL) -> StochasticCheck:
    """Check nonnegativity and unit column sums, collecting every violation."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.size == 0:
        return StochasticCheck(False, [f"expected a non-empty matrix, got shape {M.shape}"])
    if not np.all(np.isfinite(M)):
        return StochasticCheck(False, ["matrix has non-finite entries"])
    issues = []
    for i, j in zip(*np.nonzero(M < -tol)):
        issues.append(f"negative entry {float(M[i, j])!r} at ({i}, {j})")
    sums = M.sum(axis=0)
    for j in np.nonzero(np.abs(sums - 1.0) > tol)[0]:
        issues.append(f"column {j} sums to {float(sums[j])!r}")
    return StochasticCheck(
        valid=not issues,
        issues=issues,
        min_entry=float(M.min()),
        max_column_error=float(np.max(np.abs(sums - 1.0))),
    )


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        check = verify_stochastic(m)
        if not check:
            raise ValueError("not a stochastic matrix: " + "; ".join(check.issues))
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __matmul__(self, other):
        if isinstance(other, StochasticMatrix):
            return StochasticMatrix(self.entries @ other.entries)
        return apply(self, other)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.entries.tolist()}

    @classmethod
    def from_json(cls, doc) -> "StochasticMatrix":
        return cls(matrix_from_json(doc))


def matrix_from_json(doc) -> np.ndarray:
    entries = np.array(doc["entries"], dtype=float)
    if entries.ndim != 2:
        raise ValueError("entries must be a two-dimensional array")
    if "rows" in doc and int(doc["rows"]) != entries.shape[0]:
        raise ValueError(f"rows {doc['rows']} does not match entries of shape {entries.shape}")
    if "cols" in doc and int(doc["cols"]) != entries.shape[1]:
        raise ValueError(f"cols {doc['cols']} does not match entries of shape {entries.shape}")
    return entries


def apply(phi, z) -> np.ndarray:
    M = np.asarray(phi, dtype=float)
    v = np.asarray(z, dtype=float)
    if v.ndim != 1 or M.shape[1] != v.size:
        raise ValueError(f"cannot apply a {M.shape[0]}x{M.shape[1]} map to an element of shape {v.shape}")
    return M @ v


def supports(phi, tol: float = SUPPORT_TOL) -> list[frozenset]:
    M = np.asarray(phi, dtype=float)
    return [frozenset(np.nonzero(M[:, j] > tol)[0].tolist()) for j in range(M.shape[1])]


@dataclass(frozen=True)
class IsometryCheck:
    isometric: bool
    witness_columns: tuple[int, int] | None = None

    def __bool__(self):
        return self.isometric


def is_isometry(phi, tol: float = SUPPORT_TOL) -> IsometryCheck:
    """A stochastic matrix preserves the 1-norm iff its columns have disjoint supports.

    On failure the lowest-index pair of overlapping columns (0-based) is reported.
    """
    supp = supports(phi, tol)
    for j in range(len(supp)):
        for k in range(j + 1, len(supp)):
            if supp[j] & supp[k]:
                return IsometryCheck(False, (j, k))
    return IsometryCheck(True)


def is_permutation(phi, tol: float = SUPPORT_TOL) -> bool:
    M = np.asarray(phi, dtype=float)
    if M.shape[0] != M.shape[1]:
        return False
    ones = np.abs(M - 1.0) <= tol
    zeros = np.abs(M) <= tol
    return bool(np.all(ones | zeros) and np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))


def inverse_on_range(phi, residual=None, tol: float = SUPPORT_TOL) -> StochasticMatrix:
    """Positive left inverse of an isometric stochastic matrix.

    Every target bin in the support of column ``j`` is sent back to source bin
    ``j``.  Target bins outside all supports never carry mass from the range;
    they are routed to ``residual`` (default: uniform over source bins) so that
    the result is a stochastic matrix on the whole target space.
    """
    M = np.asarray(phi, dtype=float)
    check = is_isometry(M, tol)
    if not check:
        j, k = check.witness_columns
        raise ValueError(f"map is not isometric: columns {j} and {k} overlap")
    rows, cols = M.shape
    if residual is None:
        residual = np.full(cols, 1.0 / cols)
    residual = np.asarray(residual, dtype=float)
    if residual.shape != (cols,):
        raise ValueError(f"residual state must have {cols} entries")
    R = np.zeros((cols, rows))
    covered = np.zeros(rows, dtype=bool)
    for j, s in enumerate(supports(M, tol)):
        idx = sorted(s)
        R[j, idx] = 1.0
        covered[idx] = True
    R[:, ~covered] = residual[:, None]
    return StochasticMatrix(R)


@dataclass
class ReversibilityVerdict:
    reversible: bool
    witness_columns: tuple[int, int] | None = None
    witness_pair: tuple[np.ndarray, np.ndarray] | None = None
    certificate: object | None = None
    inverse: StochasticMatrix | None = None

    def to_json(self) -> dict:
        doc = {"reversible": self.reversible}
        if self.reversible:
            doc["inverse"] = self.inverse.to_json()
        else:
            doc["witness_columns"] = list(self.witness_columns)
            doc["witness_pair"] = [w.tolist() for w in self.witness_pair]
            doc["certificate"] = self.certificate.to_json()
        return doc


def classify_reversible(phi, tol: float = SUPPORT_TOL) -> ReversibilityVerdict:
    """Reversible iff isometric.

    For an irreversible map the point masses on the first overlapping column
    pair form an orthogonal pair whose images overlap; the transport oracle
    certifies that no stochastic map carries the images back.
    """
    from mixcone.transport import find_transport

    M = np.asarray(phi, dtype=float)
    check = is_isometry(M, tol)
    if check:
        return ReversibilityVerdict(True, inverse=inverse_on_range(M, tol=tol))
    j, k = check.witness_columns
    eye = np.eye(M.shape[1])
    x, y = eye[j], eye[k]
    cert = find_transport(M @ x, M @ y, x, y)
    return ReversibilityVerdict(False, witness_columns=(j, k), witness_pair=(x, y), certificate=cert)


def random_stochastic(rng, rows: int, cols: int | None = None, concentration: float = 1.0) -> np.ndarray:
    cols = rows if cols is None else cols
    return rng.dirichlet(np.full(rows, concentration), size=cols).T


def random_column_disjoint(rng, rows: int, cols: int) -> np.ndarray:
    """Random isometric stochastic matrix: target bins are dealt to columns."""
    if rows < cols:
        raise ValueError("an isometry needs at least as many target bins as source bins")
    owner = np.concatenate((np.arange(cols), rng.integers(0, cols + 1, size=rows - cols)))
    owner = rng.permutation(owner)
    M = np.zeros((rows, cols))
    for j in range(cols):
        idx = np.nonzero(owner == j)[0]
        M[idx, j] = rng.dirichlet(np.ones(idx.size))
    return M
