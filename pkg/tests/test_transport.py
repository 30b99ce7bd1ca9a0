import numpy as np
import pytest
from scipy.optimize import linprog

from mixcone import classical, cone
from mixcone.mixing import dominates
from mixcone.transport import (DimensionBoundError, check_rss_equivalence, find_transport, is_reversible_transition,
                               random_instance, rss_sweep, transport_system)


def test_mix_to_uniform():
    cert = find_transport([1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.5])
    assert cert.feasible
    np.testing.assert_allclose(cert.transport.entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)


def test_equal_inputs_cannot_split():
    cert = find_transport([0.5, 0.5], [0.5, 0.5], [1.0, 0.0], [0.0, 1.0])
    assert not cert.feasible
    assert cert.dominance_witness == pytest.approx((0.5, 1.0))
    A, b = transport_system(*(np.array(v) for v in ([0.5, 0.5], [0.5, 0.5], [1.0, 0.0], [0.0, 1.0])))
    assert np.all(A.T @ cert.farkas >= -1e-9) and b @ cert.farkas < 0
    assert not check_rss_equivalence([0.5, 0.5], [0.5, 0.5], [1.0, 0.0], [0.0, 1.0]).lp_feasible


def test_images_are_feasible_and_sound(rng):
    for _ in range(200):
        n, m = (int(k) for k in rng.integers(1, 6, size=2))
        phi = classical.random_stochastic(rng, m, n, concentration=0.5)
        x, y = cone.random_probability(rng, n, 0.3), cone.random_probability(rng, n, 0.3)
        cert = find_transport(x, y, phi @ x, phi @ y)
        assert cert.feasible
        M = cert.transport.entries
        assert classical.verify_stochastic(M)
        assert np.abs(M @ x - phi @ x).sum() <= 1e-8
        assert np.abs(M @ y - phi @ y).sum() <= 1e-8


def test_lp_agrees_with_highs(rng):
    for _ in range(200):
        _, x, y, xp, yp = random_instance(rng, int(rng.integers(2, 5)))
        A, b = transport_system(x, y, xp, yp)
        res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        cert = find_transport(x, y, xp, yp)
        if abs(dominates((x, y), (xp, yp)).margin) > 1e-6:
            assert cert.feasible == (res.status == 0)


def test_permutation_pairs():
    P = np.eye(3)[[2, 0, 1]]
    x, y = np.array([1.0, 0, 0]), np.array([0, 0.5, 0.5])
    r = check_rss_equivalence(x, y, P @ x, P @ y)
    assert r.lp_feasible and r.dominates and r.agree
    assert is_reversible_transition(x, y, P @ x, P @ y)


def test_uniform_mixing_not_reversible():
    U = np.full((2, 2), 0.5)
    x, y = np.array([1.0, 0.0]), np.array([0.3, 0.7])
    assert not is_reversible_transition(x, y, U @ x, U @ y)


def test_isometries_are_two_way(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        M = classical.random_column_disjoint(rng, n + int(rng.integers(0, 3)), n)
        x, y = cone.random_probability(rng, n), cone.random_probability(rng, n)
        assert is_reversible_transition(x, y, M @ x, M @ y)


def test_transitivity(rng):
    for _ in range(50):
        n = 3
        A, B = classical.random_stochastic(rng, n), classical.random_stochastic(rng, n)
        x, y = cone.random_probability(rng, n), cone.random_probability(rng, n)
        t1 = find_transport(x, y, A @ x, A @ y).transport.entries
        t2 = find_transport(A @ x, A @ y, B @ A @ x, B @ A @ y).transport.entries
        T = t2 @ t1
        assert classical.verify_stochastic(T)
        assert np.abs(T @ x - B @ A @ x).sum() <= 1e-8


def test_exact_mode():
    cert = find_transport([0.5, 0.5], [0.25, 0.75], [0.5, 0.5], [0.25, 0.75], exact=True)
    assert cert.feasible and cert.exact


def test_dimension_bound():
    big = np.full(17, 1 / 17)
    with pytest.raises(DimensionBoundError):
        find_transport(big, big, [1.0], [1.0])
    with pytest.raises(ValueError):
        find_transport([0.5, 0.6], [1.0, 0.0], [1.0], [1.0])


def test_small_sweep_has_no_discrepancies():
    rows = list(rss_sweep(3, 150, seed=7))
    assert len(rows) == 150
    assert all(r.agree for _, _, r in rows)
    for _, _, r in rows:
        if not r.lp_feasible:
            assert r.gap > 1e-8 and 0 <= r.witness_t <= 1


def test_sweep_is_order_independent():
    a = [(i, k, r.lp_feasible) for i, k, r in rss_sweep(2, 30, seed=3)]
    b = [(i, k, r.lp_feasible) for i, k, r in rss_sweep(2, 30, seed=3)]
    assert a == b
