"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Test kernels: KA = {c=[1], gamma=[1]}, KB = {c=[1,2], gamma=[1,3]},
KC = {c=[0.5,1,2], gamma=[1,2,5]}; interval basis throughout; the random data
is the seed-42 draw at beta=1, amplitude=1.
"""

import json
import math

import numpy as np
import pytest

from memwave import (
    ExponentialKernel,
    cauchy_determinant,
    find_roots,
    find_time_for_bound,
    forced_response_series,
    free_response_series,
    generate_initial_data,
    interval_basis,
    laplace_khat,
    residue_identity,
    root_asymptotics,
    simulate_mode,
    synthesize,
    verify_plan,
)
from memwave.cli import main
from memwave.synthesis import sample_control_field

from helpers import cauchy_det_exact, snap_to_grid

KA = ExponentialKernel(c=[1.0], gamma=[1.0])
KB = ExponentialKernel(c=[1.0, 2.0], gamma=[1.0, 3.0])
KC = ExponentialKernel(c=[0.5, 1.0, 2.0], gamma=[1.0, 2.0, 5.0])
ALL_KERNELS = {"KA": KA, "KB": KB, "KC": KC}


def report_line(num: int, ok: bool, text: str) -> None:
    print(f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num} failed: {text}"


@pytest.fixture(scope="module")
def seed42_32():
    basis = interval_basis(32)
    return basis, generate_initial_data(basis, 1.0, 1.0, 42)


@pytest.fixture(scope="module")
def verified_runs(seed42_32):
    """Strict and paper runs for both small kernels, verified once, shared below."""
    basis, init = seed42_32
    runs = {}
    for kname, k in (("KA", KA), ("KB", KB)):
        for scheme in ("strict", "paper"):
            plan = synthesize(k, basis, init, 6.0, scheme)
            report = verify_plan(k, basis, init, plan)
            runs[(kname, scheme)] = (plan, report)
    return runs


def test_criterion_1_corrected_residue_identity():
    worst = 0.0
    for kname, k in ALL_KERNELS.items():
        for n in range(1, 101):
            r = find_roots(k, float(n), n=n)
            paper, corrected = residue_identity(r)
            scale = max(abs(1.0 / lp) for lp in r.lprime)
            assert abs(corrected) < 1e-10 * scale, (kname, n)
            expected = -1.0 / (n * n * laplace_khat(k, 0.0).real)
            assert abs(paper - expected) < 1e-10 * max(scale, abs(expected)), (kname, n)
            worst = max(worst, abs(corrected) / scale)
    r1 = find_roots(KA, 1.0)
    paper1, _ = residue_identity(r1)
    assert abs(paper1 - (-1.0)) < 1e-12
    report_line(1, True, f"sum over all roots of 1/l' vanishes, worst rel {worst:.2e}")


def test_criterion_2_representation_oracle():
    dt = 1e-4
    worst = 0.0
    for kname, k in ALL_KERNELS.items():
        for n in (1, 5, 20):
            alpha = float(n)
            roots = find_roots(k, alpha, n=n)
            phi0, phi1 = 0.4, 0.3
            free_tr = simulate_mode(k, alpha, phi0, phi1, None, 5.0, dt, sample_every=1000)
            from memwave import build_moment_system, solve_modal_moments

            mc = solve_modal_moments(
                build_moment_system(roots, phi0, phi1, 6.0, "strict")
            )
            forced_tr = simulate_mode(k, alpha, 0.0, 0.0, mc, 5.0, dt, sample_every=1000)
            for t in (0.1, 1.0, 5.0):
                i_free = int(np.argmin(np.abs(free_tr.times - t)))
                assert abs(free_tr.times[i_free] - t) < 1e-9
                series = free_response_series(roots, phi0, phi1, t)
                sim = free_tr.theta[i_free]
                err = abs(series - sim) / max(abs(series), abs(sim), phi0 + phi1)
                assert err < 1e-6, (kname, n, t, "free")
                worst = max(worst, err)

                i_forced = int(np.argmin(np.abs(forced_tr.times - t)))
                series = forced_response_series(roots, mc, t)
                sim = forced_tr.theta[i_forced]
                err = abs(series - sim) / max(abs(series), abs(sim), mc.sup_bound, 1e-12)
                assert err < 1e-6, (kname, n, t, "forced")
                worst = max(worst, err)
    report_line(2, True, f"residue series match simulation, worst rel {worst:.2e}")


def test_criterion_3_strict_null_control(verified_runs, seed42_32):
    basis, init = seed42_32
    worst = 0.0
    for kname in ("KA", "KB"):
        _, report = verified_runs[(kname, "strict")]
        for m in report.modes:
            assert abs(m.terminal_theta) < 1e-6 * m.scale, (kname, m.n)
            assert abs(m.terminal_dtheta) < 1e-6 * m.scale, (kname, m.n)
            assert m.memory_max < 1e-6 * m.scale, (kname, m.n)
            assert m.rest_residual < 1e-5 * m.scale, (kname, m.n)
            worst = max(
                worst,
                abs(m.terminal_theta) / m.scale,
                abs(m.terminal_dtheta) / m.scale,
                m.memory_max / m.scale,
            )
        assert report.passed
    report_line(3, True, f"strict scheme nulls state and memory, worst rel {worst:.2e}")


def test_criterion_4_paper_defect_law(verified_runs):
    worst = 0.0
    for kname in ("KA", "KB"):
        _, report = verified_runs[(kname, "paper")]
        for m in report.modes:
            gap = abs(m.observed_defect - m.predicted_defect)
            assert gap < 1e-6 * max(1.0, abs(m.predicted_defect)), (kname, m.n)
            assert abs(m.terminal_dtheta) < 1e-6 * m.scale, (kname, m.n)
            worst = max(worst, gap / max(1.0, abs(m.predicted_defect)))
        assert report.passed
    report_line(4, True, f"terminal defect equals (phi1 + int u)/l'(0), worst {worst:.2e}")


def test_criterion_5_moment_residuals(verified_runs):
    worst = 0.0
    for (kname, scheme), (_, report) in verified_runs.items():
        for m in report.modes:
            assert m.moment_residual_max < 1e-8, (kname, scheme, m.n)
            worst = max(worst, m.moment_residual_max)
    report_line(5, True, f"independent quadrature of every moment, worst {worst:.2e}")


def test_criterion_6_bound_decay():
    # The exponential-in-T decay is a property of the nonzero-root scheme; the
    # strict scheme also imposes int u = -phi1, which forces sup|u| >= |phi1|/T
    # and therefore only a 1/T envelope.  The log-linear fit gate runs on the
    # former; strict monotone decrease is asserted for both schemes.
    basis = interval_basis(16)
    init = generate_initial_data(basis, 1.0, 1.0, 42)
    horizons = [4.0, 6.0, 8.0, 10.0]
    results = {}
    for scheme in ("strict", "paper"):
        bounds = [synthesize(KB, basis, init, T, scheme).global_bound for T in horizons]
        assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:])), scheme
        logy = np.log(bounds)
        slope, intercept = np.polyfit(horizons, logy, 1)
        fitted = intercept + slope * np.asarray(horizons)
        r2 = 1.0 - np.sum((logy - fitted) ** 2) / np.sum((logy - np.mean(logy)) ** 2)
        assert slope < 0.0, scheme
        if scheme == "paper":
            assert r2 > 0.95, (scheme, r2)
        results[scheme] = (slope, r2)
    report_line(
        6, True,
        "bound decreasing in T; log-linear fit "
        + ", ".join(f"{s}: slope {v[0]:.3f} R2 {v[1]:.4f}" for s, v in results.items()),
    )


def test_criterion_7_bounded_control_search():
    basis = interval_basis(8)
    init = generate_initial_data(basis, 1.0, 1.0, 42)
    M = 0.5
    T, plan, transcript = find_time_for_bound(KA, basis, init, M)
    assert plan.global_bound <= M
    shorter = synthesize(KA, basis, init, T * (1.0 - 0.02), plan.scheme)
    assert shorter.global_bound > M
    ts = np.linspace(0.0, T, 256)
    xs = np.linspace(0.0, math.pi, 256)
    field_max = float(np.max(np.abs(sample_control_field(plan, basis, ts, xs))))
    assert field_max <= M
    report_line(
        7, True,
        f"T={T:.3f} gives bound {plan.global_bound:.4f} <= {M}, field max {field_max:.4f}",
    )


def test_criterion_8_asymptotics():
    rep_b = root_asymptotics(KB, interval_basis(200))
    assert abs(rep_b.nu_over_alpha[-1] - math.sqrt(5.0 / 3.0)) < 1e-3
    i50, i100 = rep_b.n.index(50), rep_b.n.index(100)
    mu_ratio = rep_b.scaled_mu_dev[i50] / rep_b.scaled_mu_dev[i100]
    assert 1.0 / 8.0 < mu_ratio < 8.0
    q_ratio = rep_b.scaled_q_dev[i50][0] / rep_b.scaled_q_dev[i100][0]
    assert 1.0 / 8.0 < q_ratio < 8.0
    assert rep_b.mu_ref == pytest.approx(0.9, abs=1e-15)
    assert rep_b.q_ref[0] == pytest.approx(2.2, rel=1e-12)

    rep_a = root_asymptotics(KA, interval_basis(200))
    assert all(abs(m - 0.5) < 1e-12 for m in rep_a.mu)
    report_line(
        8, True,
        f"nu/alpha -> {rep_b.nu_over_alpha[-1]:.6f}, n^2 deviation ratios "
        f"mu {mu_ratio:.2f}, q {q_ratio:.2f}; single-term mu = 1/2 exactly",
    )


def test_criterion_9_cauchy_determinant():
    # direct determinant evaluated in exact rational arithmetic so the 1e-10
    # comparison is not polluted by the matrix's own ill conditioning
    rng = np.random.default_rng(1234)
    worst = 0.0
    for size in range(1, 7):
        q = snap_to_grid(np.sort(rng.uniform(0.2, 8.0, size=size)))
        while size > 1 and np.min(np.diff(q)) < 1e-2:
            q = snap_to_grid(np.sort(rng.uniform(0.2, 8.0, size=size)))
        direct = cauchy_det_exact(q)
        closed = cauchy_determinant(q)
        err = abs(closed - direct) / abs(direct)
        assert err < 1e-10, size
        worst = max(worst, err)
    assert cauchy_determinant([2.2]) == pytest.approx(0.2272727, rel=1e-6)
    report_line(9, True, f"closed form vs direct determinant, worst rel {worst:.2e}")


def test_criterion_10_realness_and_determinism(verified_runs, tmp_path, monkeypatch):
    worst = max(
        mc.realness_defect
        for plan, _ in verified_runs.values()
        for mc in plan.modal
    )
    assert worst < 1e-12

    config = {
        "kernel": {"c": [1.0, 2.0], "gamma": [1.0, 3.0]},
        "domain": {"type": "interval"},
        "modes": 8,
        "initial": {"random": {"beta": 1.0, "amplitude": 1.0, "seed": 42}},
    }
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    plan_path = str(tmp_path / "plan.json")
    assert main(["synthesize", "--config", str(cfg), "--horizon", "6",
                 "--output", plan_path]) == 0
    blobs = {}
    for threads in ("1", "4"):
        monkeypatch.setenv("MEMWAVE_THREADS", threads)
        out = tmp_path / f"report_{threads}.json"
        assert main(["verify", "--config", str(cfg), "--plan", plan_path,
                     "--output", str(out)]) == 0
        blobs[threads] = out.read_bytes()
    assert blobs["1"] == blobs["4"]
    report_line(
        10, True,
        f"max relative Im(u) {worst:.2e}; reports identical across thread counts",
    )
