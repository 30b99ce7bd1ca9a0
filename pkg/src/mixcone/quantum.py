"""Quantum stochastic maps in Kraus form.

Besides generic channels ``z -> sum_k K_k z K_k^H`` this module builds the
non-surjective isometric channels ``z -> sum_k w_k U_k z U_k^H``, where the
``U_k`` embed the input space isometrically into mutually orthogonal blocks of
a larger output space, together with the channel that undoes them on their
range.

Antilinear isometries are written as entrywise conjugation followed by a linear
isometry.  A Kraus operator can therefore carry a ``conjugate_input`` flag; for
Hermitian input the conjugate is the transpose, so the map stays real-linear
and positive (though no longer completely positive).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mixcone.cone import as_state, kind_of, minimal_decomposition, one_norm, random_hermitian
from mixcone.eigen import eigh

TP_TOL = 1e-9
RANK_TOL = 1e-9
DEFAULT_SAMPLES = 200


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus_ops: tuple
    conjugate_input: tuple = field(default=())

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise ValueError("Kraus operators must be matrices of a common shape")
        flags = tuple(bool(f) for f in self.conjugate_input) or (False,) * len(ops)
        if len(flags) != len(ops):
            raise ValueError("one conjugate_input flag per Kraus operator")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "conjugate_input", flags)
        err = completeness_error(self)
        if err > TP_TOL:
            raise ValueError(f"Kraus operators are not trace preserving (error {err:.3e})")

    @property
    def dim_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __call__(self, z):
        return apply_channel(self, z)

    def to_json(self) -> dict:
        doc = {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "kraus": [{"re": k.real.tolist(), "im": k.imag.tolist()} for k in self.kraus_ops],
        }
        if any(self.conjugate_input):
            doc["conjugate_input"] = list(self.conjugate_input)
        return doc

    @classmethod
    def from_json(cls, doc) -> "KrausChannel":
        ops = []
        for k in doc["kraus"]:
            if isinstance(k, dict):
                re = np.array(k["re"], dtype=float)
                ops.append(re + 1j * np.array(k.get("im", np.zeros_like(re)), dtype=float))
            else:
                ops.append(np.array(k, dtype=float))
        ch = cls(tuple(ops), tuple(doc.get("conjugate_input", ())))
        if "dim_in" in doc and int(doc["dim_in"]) != ch.dim_in:
            raise ValueError("dim_in does not match the Kraus operators")
        if "dim_out" in doc and int(doc["dim_out"]) != ch.dim_out:
            raise ValueError("dim_out does not match the Kraus operators")
        return ch


def completeness_error(channel: KrausChannel) -> float:
    """Max-entry deviation of the dual map applied to the identity from the identity."""
    total = np.zeros((channel.dim_in, channel.dim_in), dtype=complex)
    for k, conj in zip(channel.kraus_ops, channel.conjugate_input):
        kk = k.conj().T @ k
        total += kk.T if conj else kk
    return float(np.max(np.abs(total - np.eye(channel.dim_in))))


def apply_channel(channel: KrausChannel, z) -> np.ndarray:
    _, a = kind_of(z)
    if a.ndim != 2 or a.shape[0] != channel.dim_in:
        raise ValueError(f"channel expects a {channel.dim_in}x{channel.dim_in} input, got shape {a.shape}")
    out = np.zeros((channel.dim_out, channel.dim_out), dtype=complex)
    for k, conj in zip(channel.kraus_ops, channel.conjugate_input):
        out += k @ (a.conj() if conj else a) @ k.conj().T
    return (out + out.conj().T) / 2.0


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d),))


def unitary_channel(u, antilinear: bool = False) -> KrausChannel:
    return KrausChannel((np.asarray(u, dtype=complex),), (antilinear,))


def completely_depolarizing(d: int) -> KrausChannel:
    """``z -> tr(z) I / d``."""
    ops = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d))
            k[i, j] = 1.0 / np.sqrt(d)
            ops.append(k)
    return KrausChannel(tuple(ops))


def random_unitary(rng, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@dataclass(frozen=True, eq=False)
class IsometryBlueprint:
    """Weighted isometric embeddings with mutually orthogonal ranges."""

    weights: tuple
    embeddings: tuple
    antilinear: tuple = field(default=())
    tol: float = 1e-9

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        us = tuple(np.array(u, dtype=complex) for u in self.embeddings)
        flags = tuple(bool(f) for f in self.antilinear) or (False,) * len(us)
        if not us or len(us) != w.size or len(flags) != len(us):
            raise ValueError("need one weight, one embedding and one antilinear flag per block")
        if np.any(w < 0) or abs(w.sum() - 1.0) > self.tol:
            raise ValueError("weights must be nonnegative and sum to 1")
        shape = us[0].shape
        if any(u.ndim != 2 or u.shape != shape for u in us):
            raise ValueError("embeddings must share one shape (dim_out x dim_in)")
        d = shape[1]
        for k, uk in enumerate(us):
            for l, ul in enumerate(us):
                target = np.eye(d) if k == l else np.zeros((d, d))
                if np.max(np.abs(uk.conj().T @ ul - target)) > self.tol:
                    raise ValueError(f"embeddings {k} and {l} violate U_k^H U_l = delta_kl I")
        for u in us:
            u.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "embeddings", us)
        object.__setattr__(self, "antilinear", flags)

    @property
    def dim_in(self) -> int:
        return self.embeddings[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.embeddings[0].shape[0]

    @property
    def block_count(self) -> int:
        return len(self.embeddings)

    def block_projectors(self) -> list[np.ndarray]:
        return [u @ u.conj().T for u in self.embeddings]

    @property
    def residual_projector(self) -> np.ndarray:
        return np.eye(self.dim_out) - sum(self.block_projectors())

    def to_json(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "weights": self.weights.tolist(),
            "embeddings": [{"re": u.real.tolist(), "im": u.imag.tolist()} for u in self.embeddings],
            "antilinear": list(self.antilinear),
        }

    @classmethod
    def from_json(cls, doc) -> "IsometryBlueprint":
        if "embeddings" not in doc:
            return block_blueprint(
                int(doc["dim_in"]),
                doc["weights"],
                extra=int(doc.get("extra", 0)),
                antilinear=doc.get("antilinear"),
                rng=np.random.default_rng(doc["seed"]) if doc.get("seed") is not None else None,
            )
        us = [np.array(u["re"], dtype=float) + 1j * np.array(u.get("im", np.zeros_like(u["re"])), dtype=float)
              for u in doc["embeddings"]]
        return cls(tuple(doc["weights"]), tuple(us), tuple(doc.get("antilinear", ())))


def block_blueprint(d: int, weights, extra: int = 0, antilinear=None, rng=None) -> IsometryBlueprint:
    """Blueprint embedding ``C^d`` into consecutive ``d``-blocks of ``C^(n d + extra)``.

    With ``rng`` the blocks are rotated by a random output unitary and each
    embedding is pre-composed with a random input unitary.
    """
    weights = tuple(float(w) for w in weights)
    n = len(weights)
    D = n * d + extra
    rotate = random_unitary(rng, D) if rng is not None else np.eye(D)
    us = []
    for k in range(n):
        block = np.zeros((D, d), dtype=complex)
        block[k * d:(k + 1) * d, :] = np.eye(d)
        inner = random_unitary(rng, d) if rng is not None else np.eye(d)
        us.append(rotate @ block @ inner)
    return IsometryBlueprint(weights, tuple(us), tuple(antilinear or ()))


def build_isometric_channel(blueprint: IsometryBlueprint) -> KrausChannel:
    """``z -> sum_k w_k U_k z U_k^H`` (conjugating ``z`` first on antilinear blocks)."""
    ops = tuple(np.sqrt(w) * u for w, u in zip(blueprint.weights, blueprint.embeddings))
    return KrausChannel(ops, blueprint.antilinear)


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def build_inverse_channel(blueprint: IsometryBlueprint, residual_state=None) -> KrausChannel:
    """Channel undoing ``build_isometric_channel(blueprint)`` on its range.

    Block ``k`` is pulled back with ``U_k^H`` (conjugating afterwards for
    antilinear blocks).  Whatever sits in the residual block ``P0 z P0`` never
    occurs on the range; its trace is sent to ``residual_state`` (default: the
    maximally mixed state) to keep the map trace preserving.
    """
    d = blueprint.dim_in
    sigma = maximally_mixed(d) if residual_state is None else as_state(residual_state)
    if sigma.shape != (d, d):
        raise ValueError(f"residual state must be {d}x{d}")
    ops, flags = [], []
    for u, anti in zip(blueprint.embeddings, blueprint.antilinear):
        # conj(U^H z U) = U^T conj(z) conj(U), i.e. Kraus operator U^T on conjugated input
        ops.append(u.T if anti else u.conj().T)
        flags.append(anti)
    p0 = blueprint.residual_projector
    w0, v0 = eigh((p0 + p0.conj().T) / 2.0)
    residual_basis = v0[:, w0 > 0.5]
    if residual_basis.shape[1]:
        s, phi = eigh(sigma)
        for si, ph in zip(s, phi.T):
            if si <= 0:
                continue
            for r in residual_basis.T:
                ops.append(np.sqrt(si) * np.outer(ph, r.conj()))
                flags.append(False)
    return KrausChannel(tuple(ops), tuple(flags))


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of the real space of ``d x d`` Hermitian matrices."""
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[i, j] = s[j, i] = 1.0 / np.sqrt(2)
            a = np.zeros((d, d), dtype=complex)
            a[i, j], a[j, i] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            basis.extend((s, a))
    return basis


def transfer_matrix(channel: KrausChannel) -> np.ndarray:
    """Real matrix of the channel in Hermitian bases, shape ``(dim_out^2, dim_in^2)``."""
    b_in = hermitian_basis(channel.dim_in)
    b_out = hermitian_basis(channel.dim_out)
    T = np.empty((len(b_out), len(b_in)))
    for col, b in enumerate(b_in):
        img = apply_channel(channel, b)
        for row, c in enumerate(b_out):
            T[row, col] = np.real(np.vdot(c, img))
    return T


def is_surjective(channel: KrausChannel, tol: float = RANK_TOL) -> bool:
    if channel.dim_in != channel.dim_out:
        return False
    s = np.linalg.svd(transfer_matrix(channel), compute_uv=False)
    return int(np.sum(s > tol)) == channel.dim_out ** 2


@dataclass
class ChannelIsometryVerdict:
    """Randomised isometry test: ``False`` is conclusive, ``True`` is statistical."""

    isometric: bool
    samples: int
    max_norm_defect: float
    max_overlap: float
    witness: np.ndarray | None = None

    def __bool__(self):
        return self.isometric

    def to_json(self) -> dict:
        doc = {
            "isometric": self.isometric,
            "samples": self.samples,
            "max_norm_defect": self.max_norm_defect,
            "max_overlap": self.max_overlap,
            "witness": None,
        }
        if self.witness is not None:
            doc["witness"] = {"re": self.witness.real.tolist(), "im": self.witness.imag.tolist()}
        return doc


def is_isometry_channel(channel: KrausChannel, samples: int = DEFAULT_SAMPLES, seed: int = 42,
                        tol: float = 1e-9) -> ChannelIsometryVerdict:
    """Test norm preservation and orthogonality preservation on random inputs.

    Each sample is a random Hermitian ``z`` scaled to unit trace norm; it fails
    when ``| ||Phi z||_1 - 1 | > tol`` or when the images of its positive and
    negative parts overlap, ``tr(Phi(z+) Phi(z-)) > tol``.
    """
    rng = np.random.default_rng(seed)
    worst_defect = worst_overlap = 0.0
    for i in range(samples):
        z = random_hermitian(rng, channel.dim_in)
        z = z / one_norm(z)
        parts = minimal_decomposition(z)
        img_pos = apply_channel(channel, parts.positive_part)
        img_neg = apply_channel(channel, parts.negative_part)
        defect = abs(one_norm(img_pos - img_neg) - 1.0)
        overlap = float(np.real(np.trace(img_pos @ img_neg)))
        worst_defect = max(worst_defect, defect)
        worst_overlap = max(worst_overlap, overlap)
        if defect > tol or overlap > tol:
            return ChannelIsometryVerdict(False, i + 1, worst_defect, worst_overlap, witness=z)
    return ChannelIsometryVerdict(True, samples, worst_defect, worst_overlap)


def purity(x) -> float:
    """``tr(x^2)`` of a density matrix; equals 1 exactly for pure states."""
    rho = as_state(x)
    if rho.ndim != 2:
        raise TypeError("purity is defined for quantum states")
    return float(np.real(np.trace(rho @ rho)))
