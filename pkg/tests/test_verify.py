import pytest

from memwave import (
    build_moment_system,
    find_roots,
    generate_initial_data,
    interval_basis,
    modal_integral,
    predicted_defect,
    simulate_mode,
    solve_modal_moments,
    synthesize,
    verify_plan,
)
from memwave.spectrum import InitialData
from memwave.verify import report_to_dict


class TestPredictedDefect:
    def test_strict_scheme_defect_vanishes(self, k2):
        roots = find_roots(k2, 2.0)
        sys = build_moment_system(roots, 0.4, -0.7, 6.0, "strict")
        mc = solve_modal_moments(sys)
        assert abs(predicted_defect(roots, -0.7, mc)) < 1e-8

    def test_zero_data_zero_defect(self, k1):
        roots = find_roots(k1, 1.0)
        sys = build_moment_system(roots, 0.0, 0.0, 6.0, "paper")
        mc = solve_modal_moments(sys)
        assert predicted_defect(roots, 0.0, mc) == 0.0

    def test_paper_scheme_defect_matches_simulation(self, k1):
        # l'(0) = 1 for this kernel at alpha=1, so the defect equals int u
        roots = find_roots(k1, 1.0)
        sys = build_moment_system(roots, 1.0, 0.0, 6.0, "paper")
        mc = solve_modal_moments(sys)
        defect = predicted_defect(roots, 0.0, mc)
        assert defect == pytest.approx(modal_integral(mc), rel=1e-12)
        tr = simulate_mode(k1, 1.0, 1.0, 0.0, mc, 6.0, 3e-4)
        assert tr.theta[-1] == pytest.approx(defect, abs=1e-6 * max(1.0, abs(defect)))


class TestVerifyPlan:
    def test_zero_data_trivially_passes(self, k2):
        basis = interval_basis(3)
        init = InitialData(phi0=(0.0,) * 3, phi1=(0.0,) * 3)
        plan = synthesize(k2, basis, init, 5.0)
        report = verify_plan(k2, basis, init, plan)
        assert report.passed
        assert all(m.moment_residual_max < 1e-12 for m in report.modes)
        assert report.sampled_field_max == 0.0

    def test_strict_plan_passes(self, k1):
        basis = interval_basis(8)
        init = generate_initial_data(basis, 1.0, 1.0, 42)
        plan = synthesize(k1, basis, init, 6.0, "strict")
        report = verify_plan(k1, basis, init, plan)
        assert report.passed
        assert report.terminal_ok and report.rest_ok and report.memory_ok
        for m in report.modes:
            assert abs(m.terminal_theta) < 1e-6 * m.scale
            assert abs(m.terminal_dtheta) < 1e-6 * m.scale
            assert m.memory_max < 1e-6 * m.scale
            assert m.rest_residual < 1e-5 * m.scale

    def test_paper_plan_defect_law(self, k1):
        basis = interval_basis(8)
        init = generate_initial_data(basis, 1.0, 1.0, 42)
        plan = synthesize(k1, basis, init, 6.0, "paper")
        report = verify_plan(k1, basis, init, plan)
        assert report.passed and report.defect_ok
        for m in report.modes:
            assert abs(m.observed_defect - m.predicted_defect) < 1e-6 * max(
                1.0, abs(m.predicted_defect)
            )
            assert abs(m.terminal_dtheta) < 1e-6 * m.scale

    def test_fingerprint_mismatch_rejected(self, k1, k2):
        basis = interval_basis(3)
        init = InitialData(phi0=(0.1, 0.0, 0.0), phi1=(0.0, 0.0, 0.0))
        plan = synthesize(k1, basis, init, 5.0)
        with pytest.raises(ValueError, match="fingerprint"):
            verify_plan(k2, basis, init, plan)

    def test_report_flags_recompute(self, k2):
        basis = interval_basis(4)
        init = generate_initial_data(basis, 1.0, 1.0, 9)
        plan = synthesize(k2, basis, init, 6.0)
        report = verify_plan(k2, basis, init, plan)
        doc = report_to_dict(report)
        # stored pass flags must match flags recomputed from the stored values
        tol = doc["tolerances"]
        for mrec, m in zip(doc["modes"], report.modes):
            recomputed = (
                abs(mrec["terminal_theta"]) < tol["terminal"] * mrec["scale"]
                and abs(mrec["terminal_dtheta"]) < tol["terminal"] * mrec["scale"]
                and mrec["memory_max"] < tol["memory"] * mrec["scale"]
                and mrec["rest_residual"] < tol["rest"] * mrec["scale"]
                and mrec["moment_margin"] < tol["moments"]
            )
            assert recomputed == mrec["passed"] == m.passed
        assert doc["passed"] == report.passed

    def test_failed_criterion_is_an_outcome_not_an_exception(self, k1):
        # a horizon too short for accuracy still produces a report object
        basis = interval_basis(2)
        init = InitialData(phi0=(1.0, 0.5), phi1=(0.3, -0.2))
        plan = synthesize(k1, basis, init, 6.0, "strict")
        # tamper with one modal control so a criterion fails honestly
        bad = list(plan.modal)
        mc = bad[0]
        from memwave.moments import ModalControl

        bad[0] = ModalControl(
            n=mc.n, T=mc.T, exponents=mc.exponents,
            scaled_coeffs=tuple(2.0 * c for c in mc.scaled_coeffs),
            sup_bound=2.0 * mc.sup_bound, integral=2.0 * mc.integral,
            realness_defect=mc.realness_defect,
        )
        from dataclasses import replace

        tampered = replace(plan, modal=tuple(bad),
                           global_bound=sum(m.sup_bound * p for m, p in zip(bad, basis.psi_sup)))
        report = verify_plan(k1, basis, init, tampered)
        assert not report.passed
        assert not report.modes[0].passed
        assert report.modes[1].passed
