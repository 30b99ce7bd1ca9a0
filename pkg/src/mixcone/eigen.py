"""Cyclic Jacobi eigensolver for Hermitian matrices.

A complex Hermitian ``A = B + iC`` is diagonalised through its real symmetric
embedding ``[[B, -C], [C, B]]``, whose spectrum is that of ``A`` with every
eigenvalue doubled.  Each real eigenvector ``(u, v)`` of the embedding gives the
complex eigenvector ``u + iv`` of ``A``; a complex Gram-Schmidt pass keeps one
representative per pair.  Real input skips the embedding.
"""

from __future__ import annotations

import functools

import numpy as np

OFFDIAG_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


class EigensolverError(ArithmeticError):
    """Raised when the Jacobi iteration does not converge or fails its self-check."""


@functools.lru_cache(maxsize=None)
def _round_robin(n):
    """Tournament schedule: n - 1 rounds of n / 2 disjoint index pairs (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_symmetric(a, tol=OFFDIAG_TOL, max_sweeps=MAX_SWEEPS, v0=None):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every index pair once, in round-robin order so that the
    rotations of one round act on disjoint pairs and can be applied together.
    Iteration stops when the off-diagonal Frobenius mass drops below
    ``tol * max(1, ||a||_F)``.  An orthogonal ``v0`` close to the eigenbasis
    (e.g. from a nearby matrix) warm-starts the iteration.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n)
        Orthogonal matrix whose columns are the matching eigenvectors.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    if n % 2:
        # pad with a decoupled zero row/column, stripped again below
        a = np.pad(a, ((0, 1), (0, 1)))
    m = a.shape[0]
    v = np.eye(m)
    if v0 is not None:
        v[:n, :n] = v0
        a = v.T @ a @ v
    rounds = _round_robin(m)
    eye = np.eye(m)

    for _ in range(max_sweeps):
        if np.linalg.norm(a - np.diag(np.diag(a))) < threshold:
            break
        for p, q in rounds:
            apq = a[p, q]
            zero = apq == 0.0
            theta = (a[q, q] - a[p, p]) / (2.0 * np.where(zero, 1.0, apq))
            t = np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[zero] = 0.0
            c = 1.0 / np.hypot(t, 1.0)
            s = t * c
            rot = eye.copy()
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            a = rot.T @ a @ rot
            a[p, q] = a[q, p] = 0.0
            v = v @ rot
    else:
        raise EigensolverError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    if m != n:
        # the padded index carries eigenvalue 0 with eigenvector e_n; drop it
        pad = int(np.argmax(np.abs(v[n, :])))
        keep = [k for k in range(m) if k != pad]
        w = np.diag(a)[keep]
        v = v[:n, keep]
    else:
        w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigh(a, check=True, guess=None):
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.

    ``guess`` is an optional unitary approximately diagonalising ``a`` (such as
    the eigenvectors of a nearby matrix); it only affects the iteration count.

    With ``check`` set, the reconstruction ``V diag(w) V^H`` is compared with the
    input and :class:`EigensolverError` is raised when the max-entry error exceeds
    ``RECONSTRUCTION_TOL`` (relative to the largest entry when that exceeds 1).
    """
    a = np.asarray(a)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if n and np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(a)))):
        raise ValueError("matrix is not Hermitian")

    if not np.iscomplexobj(a) or not np.any(a.imag):
        v0 = None if guess is None else _orthonormal(np.real(guess))
        w, v = jacobi_symmetric(a.real, v0=v0)
        vecs = v.astype(complex)
    else:
        re, im = a.real, a.imag
        embedded = np.block([[re, -im], [im, re]])
        v0 = None
        if guess is not None:
            g = np.asarray(guess, dtype=complex)
            v0 = np.block([[g.real, -g.imag], [g.imag, g.real]])
        mu, u = jacobi_symmetric(embedded, v0=v0)
        candidates = u[:n, :] + 1j * u[n:, :]
        accepted = []
        for k in range(2 * n):
            c = candidates[:, k]
            for prev in accepted:
                c = c - np.vdot(prev, c) * prev
            nrm = np.linalg.norm(c)
            # a fresh direction keeps at least half its norm; its pair partner keeps ~0
            if nrm > 0.5:
                accepted.append(c / nrm)
            if len(accepted) == n:
                break
        if len(accepted) != n:
            raise EigensolverError("could not recover a complex eigenbasis from the embedding")
        vecs = np.column_stack(accepted)
        w = np.real(np.einsum("ij,ik,kj->j", vecs.conj(), a, vecs))
        order = np.argsort(w, kind="stable")
        w, vecs = w[order], vecs[:, order]

    if check:
        recon = (vecs * w) @ vecs.conj().T
        err = np.max(np.abs(recon - a)) if n else 0.0
        scale = max(1.0, float(np.max(np.abs(a)))) if n else 1.0
        if err > RECONSTRUCTION_TOL * scale:
            raise EigensolverError(f"reconstruction error {err:.3e} exceeds tolerance")
    return w, vecs


def _orthonormal(m):
    q, r = np.linalg.qr(m)
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def eigvalsh(a):
    return eigh(a)[0]
