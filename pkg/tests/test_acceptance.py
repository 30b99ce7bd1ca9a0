"""Acceptance criteria 1-8.

Each test records one PASS/FAIL line, echoed to stdout and collected into the
pytest terminal summary.  Run standalone with ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np

from mixcone import classical, cli, cone, quantum
from mixcone.dynamics import damped, fokker_planck, shift
from mixcone.transport import rss_sweep

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # standalone run outside the tests directory
    ACCEPTANCE_LINES = []


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_1_measure_cone_suite():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    contour_ok = True

    def check(z, w):
        nonlocal worst
        parts = cone.minimal_decomposition(z)
        pc, nc = parts.positive_charge, parts.negative_charge
        norm = float(np.sum(np.abs(w)))
        errs = [abs(cone.charge(z) - (pc - nc)), abs(norm - (pc + nc)),
                float(np.max(np.abs(parts.reconstruct() - z)))]
        if pc > 1e-9 and nc > 1e-9:
            overlap = float(np.real(np.sum(np.asarray(parts.positive_part) * np.conj(parts.negative_part))))
            errs.append(max(0.0, overlap - 1e-9 * pc * nc))
        worst = max(worst, *errs)
        return norm

    for i in range(1000):
        n = int(rng.integers(1, 9))
        z = cone.random_signed(rng, n)
        norm = check(z, z)
        contour_ok &= (abs(norm - cone.charge(z)) <= 1e-9) == bool(np.all(z >= 0))
        p = cone.random_probability(rng, n, 0.3) * rng.uniform(0.1, 3)
        contour_ok &= abs(cone.one_norm(p) - cone.charge(p)) <= 1e-9
    for i in range(500):
        n = int(rng.integers(1, 9))
        z = cone.random_hermitian(rng, n)
        w = cone.spectrum(z)
        norm = check(z, w)
        contour_ok &= (abs(norm - cone.charge(z)) <= 1e-9) == bool(w.min() >= -1e-9)
        rho = cone.random_density(rng, n, rank=int(rng.integers(1, n + 1)))
        contour_ok &= abs(cone.one_norm(rho) - cone.charge(rho)) <= 1e-9
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and contour_ok and elapsed < 10
    report(1, "measure-cone suite", ok,
           f"max identity error {worst:.2e}, cone contour {'ok' if contour_ok else 'violated'}, {elapsed:.2f} s")


def test_2_contraction_and_isometry():
    rng = np.random.default_rng(2)
    worst_growth = -math.inf
    for _ in range(1000):
        rows, cols = (int(k) for k in rng.integers(1, 9, size=2))
        M = classical.random_stochastic(rng, rows, cols, concentration=float(rng.choice([0.1, 1.0, 10.0])))
        z = rng.normal(size=cols)
        worst_growth = max(worst_growth, np.abs(M @ z).sum() - np.abs(z).sum())

    disagreements = candidates = 0
    for _ in range(300):
        rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 5))
        if rows >= cols and rng.random() < 0.5:
            M = classical.random_column_disjoint(rng, rows, cols)
        else:
            M = classical.random_stochastic(rng, rows, cols, concentration=0.2)
            M[M < 0.05] = 0.0
            M[:, M.sum(axis=0) == 0] = 1.0
            M /= M.sum(axis=0)
        zs = rng.normal(size=(500, cols))
        brute = bool(np.all(np.abs(np.abs(zs @ M.T).sum(axis=1) - np.abs(zs).sum(axis=1)) <= 1e-9))
        disagreements += bool(classical.is_isometry(M)) != brute
        candidates += 1

    square_bad = square = 0
    for n in range(1, 5):
        for _ in range(500):
            if rng.random() < 0.5:
                M = classical.random_column_disjoint(rng, n, n)
            else:
                M = classical.random_stochastic(rng, n, n, concentration=0.1)
                M[M < 0.1] = 0.0
                M[:, M.sum(axis=0) == 0] = 1.0
                M /= M.sum(axis=0)
            square += 1
            if classical.is_isometry(M) and not classical.is_permutation(M):
                square_bad += 1
            if classical.is_permutation(M) and not classical.is_isometry(M):
                square_bad += 1
    ok = worst_growth <= 1e-9 and disagreements == 0 and square_bad == 0
    report(2, "contraction and isometry suite", ok,
           f"max norm growth {worst_growth:.2e}, {disagreements}/{candidates} isometry disagreements, "
           f"{square_bad}/{square} square non-permutation isometries")


def test_3_rss_equivalence_sweep():
    start = time.perf_counter()
    discrepancies = missing_witness = infeasible = total = 0
    for dim in (2, 3, 4):
        for _, _, r in rss_sweep(dim, 1000, seed=42, tol=1e-8):
            total += 1
            discrepancies += not r.agree
            if not r.lp_feasible:
                infeasible += 1
                missing_witness += not (r.witness_t is not None and r.gap > 1e-8)
    elapsed = time.perf_counter() - start
    ok = discrepancies == 0 and missing_witness == 0 and elapsed < 60
    report(3, "transport/dominance equivalence sweep", ok,
           f"{discrepancies} discrepancies in {total} instances, {infeasible} infeasible with "
           f"{missing_witness} missing witnesses, {elapsed:.2f} s")


def test_4_quantum_isometry_suite():
    rng = np.random.default_rng(4)
    norm_err = inv_err = purity_err = 0.0
    surj_ok = witness_ok = True
    for n in (2, 3):
        for extra in (0, 2):
            for weights in ([1 / n] * n, list(rng.dirichlet(np.ones(n)))):
                b = quantum.block_blueprint(2, weights, extra=extra, antilinear=list(rng.random(n) < 0.5), rng=rng)
                phi, psi = quantum.build_isometric_channel(b), quantum.build_inverse_channel(b)
                for _ in range(200):
                    z = cone.random_hermitian(rng, 2)
                    norm_err = max(norm_err, abs(cone.one_norm(phi(z)) - cone.one_norm(z)))
                    inv_err = max(inv_err, float(np.max(np.abs(psi(phi(z)) - z))))
                for _ in range(20):
                    x = cone.pure_state(rng.normal(size=2) + 1j * rng.normal(size=2))
                    purity_err = max(purity_err, abs(quantum.purity(phi(x)) - float(np.sum(np.square(weights)))))
                surj_ok &= not quantum.is_surjective(phi)
                v = quantum.is_isometry_channel(psi)
                witness_ok &= (not v.isometric) and v.witness is not None
    for d in (2, 3):
        for anti in (False, True):
            surj_ok &= quantum.is_surjective(quantum.unitary_channel(quantum.random_unitary(rng, d), anti))
    ok = norm_err <= 1e-9 and inv_err <= 1e-9 and purity_err <= 1e-10 and surj_ok and witness_ok
    report(4, "quantum isometry suite", ok,
           f"trace-norm defect {norm_err:.1e}, inverse error {inv_err:.1e}, purity error {purity_err:.1e}, "
           f"surjectivity {'ok' if surj_ok else 'wrong'}, inverse witnesses {'ok' if witness_ok else 'missing'}")


def test_5_damped_motion():
    rng = np.random.default_rng(5)
    speed_err = group_err = 0.0
    for _ in range(1000):
        p = damped.PhasePoint(*rng.normal(size=2))
        kappa = rng.uniform(0.1, 3)
        t, s = rng.uniform(0, 3, size=2)
        speed = damped.lyapunov_speed_trace(p, kappa, [t])[0]
        speed_err = max(speed_err, abs(abs(damped.damped_flow(p, t, kappa).velocity) - speed),
                        abs(speed - abs(p.velocity) * math.exp(-kappa * t)))
        group_err = max(group_err, damped.damped_flow(damped.damped_flow(p, s, kappa), t, kappa).distance(
            damped.damped_flow(p, t + s, kappa)))
    defect = damped.motion_reversal_defect(damped.PhasePoint(0.0, 1.0), 1.0, 1.0)
    still = max(damped.motion_reversal_defect(damped.PhasePoint(x, 0.0), t, 1.0)
                for x in (-2.0, 0.0, 3.0) for t in (0.5, 1.0, 4.0))
    ok = speed_err <= 1e-12 and group_err <= 1e-12 and defect > 0.1 and still == 0.0
    report(5, "damped motion", ok,
           f"speed error {speed_err:.1e}, group-law error {group_err:.1e}, defect {defect:.4f}, V=0 defect {still}")


def test_6_fokker_planck_relaxation():
    start = time.perf_counter()
    rho0 = fokker_planck.DensityGrid.point_mass(-6.0, 6.0, 200, 2.0)
    drift, sigma = (lambda x: -x), math.sqrt(2.0)
    dt = 0.95 * fokker_planck.stability_bound(rho0, drift, sigma)
    steps = int(math.ceil(8.0 / dt))
    trace = fokker_planck.relaxation_run(rho0, drift, sigma, dt, steps, sample_every=steps // 40)
    below = trace.times[trace.distances < 0.01]
    elapsed = time.perf_counter() - start
    failed_pairs = sum(1 for *_, holds, _ in trace.dominance if not holds)
    ok = (trace.max_mass_drift <= 1e-12 and trace.min_mass >= 0 and trace.distance_monotone(1e-6)
          and below.size > 0 and below[0] <= 8.0 and failed_pairs == 0 and elapsed < 30)
    first = f"{below[0]:.2f}" if below.size else "never"
    report(6, "Fokker-Planck relaxation", ok,
           f"mass drift {trace.max_mass_drift:.1e}, monotone {trace.distance_monotone(1e-6)}, "
           f"distance < 0.01 from t = {first}, {failed_pairs}/{len(trace.dominance)} dominance failures, "
           f"{elapsed:.2f} s")


def test_7_shift_semigroup():
    rng = np.random.default_rng(7)
    law_ok = norm_ok = True
    for _ in range(500):
        size = int(rng.integers(1, 30))
        bins = rng.choice(np.arange(-50, 51), size=size, replace=False)
        s = shift.ShiftState(dict(zip(bins.tolist(), rng.dirichlet(np.ones(size)).tolist())))
        n, m = (int(k) for k in rng.integers(0, 6, size=2))
        law_ok &= shift.shift_map(shift.shift_map(s, m), n).bins == shift.shift_map(s, n + m).bins
        z = dict(zip(bins.tolist(), rng.normal(size=size).tolist()))
        norm_ok &= shift.sparse_norm(shift.push(z, n)) == shift.sparse_norm(z)
    witness = shift.shift_surjectivity_witness(1)
    image = {shift.gamma(k) for k in range(-50, 51)}
    witness_ok = witness.bins == {0: 1.0} and 0 not in image and not shift.in_range(0, 1)
    ok = law_ok and norm_ok and witness_ok
    report(7, "shift semigroup", ok,
           f"composition law {'exact' if law_ok else 'broken'}, norm {'exact' if norm_ok else 'changed'}, "
           f"witness {sorted(witness.bins)}")


def test_8_cli_determinism():
    outputs = []
    for _ in range(2):
        code, text = cli.run(cli.parse_config(["rss-sweep", "--dim", "3", "--count", "1000", "--seed", "42"]))
        outputs.append((code, text.encode()))
    rows = outputs[0][1].decode().count("\n") - 1
    ok = outputs[0] == outputs[1] and outputs[0][0] == 0 and rows == 1000
    report(8, "CLI determinism", ok, f"{rows} rows, byte-identical: {outputs[0] == outputs[1]}")


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
