import json

import numpy as np
import pytest

from mixcone import cone, quantum
from mixcone.cone import one_norm
from mixcone.quantum import (KrausChannel, apply_channel, block_blueprint, build_inverse_channel,
                             build_isometric_channel, completely_depolarizing, identity_channel, is_isometry_channel,
                             is_surjective, purity, unitary_channel)

SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def test_apply_examples(rng):
    z = cone.random_hermitian(rng, 3)
    np.testing.assert_allclose(apply_channel(identity_channel(3), z), z, atol=1e-14)
    np.testing.assert_allclose(unitary_channel(SWAP)(np.diag([1.0, 0.0])), np.diag([0.0, 1.0]))
    phi = build_isometric_channel(block_blueprint(2, [0.5, 0.5]))
    np.testing.assert_allclose(phi(np.diag([1.0, 0.0])), np.diag([0.5, 0, 0.5, 0]), atol=1e-15)


def test_block_channel_halves(rng):
    phi = build_isometric_channel(block_blueprint(2, [0.5, 0.5]))
    z = cone.random_hermitian(rng, 2)
    expected = np.zeros((4, 4), dtype=complex)
    expected[:2, :2] = expected[2:, 2:] = z / 2
    np.testing.assert_allclose(phi(z), expected, atol=1e-15)
    assert one_norm(phi(z)) == pytest.approx(one_norm(z), abs=1e-12)


def test_channel_basics(rng):
    for _ in range(30):
        d = int(rng.integers(1, 4))
        b = block_blueprint(d, rng.dirichlet(np.ones(3)), extra=int(rng.integers(0, 3)),
                            antilinear=list(rng.random(3) < 0.5), rng=rng)
        for ch in (build_isometric_channel(b), build_inverse_channel(b)):
            assert quantum.completeness_error(ch) <= 1e-10
            z = cone.random_hermitian(rng, ch.dim_in)
            assert abs(np.trace(ch(z)) - np.trace(z)) <= 1e-10
            out = ch(cone.random_density(rng, ch.dim_in))
            assert np.min(np.linalg.eigvalsh(out)) >= -1e-9


def test_blueprint_isometry_and_inverse(rng):
    for _ in range(30):
        d, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        b = block_blueprint(d, rng.dirichlet(np.ones(n)), extra=int(rng.integers(0, 3)),
                            antilinear=list(rng.random(n) < 0.5), rng=rng)
        phi, psi = build_isometric_channel(b), build_inverse_channel(b)
        for _ in range(10):
            z = cone.random_hermitian(rng, d)
            assert one_norm(phi(z)) == pytest.approx(one_norm(z), abs=1e-9)
            assert one_norm(psi(phi(z)) - z) <= 1e-9


def test_residual_block_routed_to_sigma(rng):
    b = block_blueprint(2, [0.5, 0.5], extra=2)
    sigma = cone.random_density(rng, 2)
    psi = build_inverse_channel(b, sigma)
    z = np.zeros((6, 6), dtype=complex)
    z[4:, 4:] = cone.random_density(rng, 2) * 3.0
    np.testing.assert_allclose(psi(z), 3.0 * sigma, atol=1e-12)


def test_unitary_inverse(rng):
    u = quantum.random_unitary(rng, 3)
    b = quantum.IsometryBlueprint((1.0,), (u,))
    psi = build_inverse_channel(b)
    assert len(psi.kraus_ops) == 1
    np.testing.assert_allclose(psi.kraus_ops[0], u.conj().T, atol=1e-14)


def test_blueprint_validation():
    with pytest.raises(ValueError):
        quantum.IsometryBlueprint((0.5, 0.5), (np.eye(2), np.eye(2)))
    with pytest.raises(ValueError):
        quantum.IsometryBlueprint((0.7, 0.7), tuple(block_blueprint(1, [0.5, 0.5]).embeddings))
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2), np.eye(2)))
    b = block_blueprint(2, [0.25, 0.75], extra=1)
    np.testing.assert_allclose(b.residual_projector + sum(b.block_projectors()), np.eye(5), atol=1e-15)


def test_surjectivity():
    assert is_surjective(unitary_channel(SWAP))
    assert is_surjective(unitary_channel(quantum.random_unitary(np.random.default_rng(0), 3), antilinear=True))
    phi = build_isometric_channel(block_blueprint(2, [0.5, 0.5]))
    assert not is_surjective(phi)
    assert np.linalg.matrix_rank(quantum.transfer_matrix(phi)) == 4
    assert not is_surjective(completely_depolarizing(3))
    assert np.linalg.matrix_rank(quantum.transfer_matrix(completely_depolarizing(3))) == 1


def test_transfer_matrix_reproduces_channel(rng):
    ch = build_isometric_channel(block_blueprint(2, [0.3, 0.7], rng=rng))
    T = quantum.transfer_matrix(ch)
    b_in, b_out = quantum.hermitian_basis(2), quantum.hermitian_basis(4)
    z = cone.random_hermitian(rng, 2)
    coords = np.array([np.real(np.vdot(b, z)) for b in b_in])
    img = sum(c * b for c, b in zip(T @ coords, b_out))
    np.testing.assert_allclose(img, ch(z), atol=1e-12)


def test_isometry_verdicts():
    assert is_isometry_channel(build_isometric_channel(block_blueprint(2, [0.5, 0.5], extra=2)))
    assert is_isometry_channel(unitary_channel(SWAP))
    v = is_isometry_channel(completely_depolarizing(2))
    assert not v and v.witness is not None
    z = np.diag([1.0, -1.0])
    assert one_norm(completely_depolarizing(2)(z)) == pytest.approx(0.0, abs=1e-15)
    for n in (2, 3):
        v = is_isometry_channel(build_inverse_channel(block_blueprint(2, [1 / n] * n)))
        assert not v


def test_purity():
    assert purity(np.diag([1.0, 0.0])) == pytest.approx(1.0)
    assert purity(np.eye(2) / 2) == pytest.approx(0.5)
    rng = np.random.default_rng(5)
    for n in (1, 2, 3, 4):
        phi = build_isometric_channel(block_blueprint(2, [1 / n] * n, rng=rng))
        x = cone.pure_state(rng.normal(size=2) + 1j * rng.normal(size=2))
        assert purity(phi(x)) == pytest.approx(1 / n, abs=1e-10)
    u = unitary_channel(quantum.random_unitary(rng, 3), antilinear=True)
    assert purity(u(cone.pure_state([1, 2j, 3]))) == pytest.approx(1.0, abs=1e-10)


def test_json_round_trip(rng):
    b = block_blueprint(2, [0.2, 0.8], extra=1, antilinear=[True, False], rng=rng)
    b2 = quantum.IsometryBlueprint.from_json(json.loads(json.dumps(b.to_json())))
    for u, v in zip(b.embeddings, b2.embeddings):
        np.testing.assert_array_equal(u, v)
    ch = build_inverse_channel(b)
    ch2 = KrausChannel.from_json(json.loads(json.dumps(ch.to_json())))
    z = cone.random_hermitian(rng, 5)
    np.testing.assert_allclose(ch(z), ch2(z), atol=1e-15)
