import numpy as np
import pytest

from szegojac.checker import (TRUNCATION_CAVEAT, check_1_to_2, check_2_to_1,
                              summability_report)
from szegojac.commutation import double_commute_add
from szegojac.geronimus import direct_geronimus
from szegojac.jacobi import JacobiMatrix


class TestCoefficientsToMatrix:
    def test_zero_coefficients_pass_trivially(self):
        rep = check_2_to_1(np.zeros(6), "o")
        assert rep.status == "pass"
        assert rep.passed
        assert rep.lambda_norm_sq == 0.0
        assert rep.kappa_norm_sq == 0.0
        assert rep.criteria["l21_window_decay"]

    def test_geometric_coefficients_report(self):
        alpha = 0.5 ** np.arange(1, 9)
        rep = check_2_to_1(alpha, "e")
        assert rep.status == "pass"
        for key in ("norms_finite", "l21_window_decay", "leading_order",
                    "weight_consistency"):
            assert rep.criteria[key], key
        assert rep.lambda_norm_sq > 0.0
        assert rep.kappa_norm_sq > 0.0
        # regularity norms are cumulative, hence nondecreasing
        norms = rep.log_weight_norms
        assert all(a <= b + 1e-15 for a, b in zip(norms, norms[1:]))
        assert rep.details["weight_discrepancy"] <= 1e-6
        assert TRUNCATION_CAVEAT in rep.notes

    def test_report_dict_is_json_shaped(self):
        rep = check_2_to_1(np.zeros(4), "+")
        d = rep.to_dict()
        assert d["direction"] == "2to1"
        assert d["variant"] == "+"
        assert d["status"] == "pass"
        assert isinstance(d["criteria"], dict)
        assert isinstance(d["alpha"], list)


class TestMatrixToCoefficients:
    def test_free_matrix_lands_in_the_two_finite_case(self):
        rep = check_1_to_2(JacobiMatrix.free())
        assert rep.status == "pass"
        assert rep.case == 2
        assert rep.variant == "o"
        assert rep.removed_eigenvalues == []
        np.testing.assert_allclose(rep.alpha.alpha, 0.0, atol=1e-7)
        for key in ("dispatch_in_range", "boundary_coefficient",
                    "norms_finite", "ratio_l21"):
            assert rep.criteria[key], key

    def test_half_offdiagonal_matrix_lands_in_the_two_infinite_case(self):
        rep = check_1_to_2(JacobiMatrix.from_arrays([np.sqrt(2.0)], []))
        assert rep.status == "pass"
        assert rep.case == 1
        assert rep.variant == "e"
        np.testing.assert_allclose(rep.alpha.alpha, 0.0, atol=1e-7)

    def test_one_sided_cases_dispatch_their_variants(self):
        alpha = np.array([0.3, -0.2, 0.1])
        for variant, case in (("+", 3), ("-", 4)):
            J = direct_geronimus(alpha, variant)
            rep = check_1_to_2(J)
            assert rep.case == case
            assert rep.variant == variant
            np.testing.assert_allclose(rep.alpha.alpha[:3], alpha,
                                       atol=1e-7)
            assert rep.status == "pass"

    def test_inserted_eigenvalue_is_removed_before_dispatch(self):
        res = double_commute_add(JacobiMatrix.free(), 3.0, 1.0)
        rep = check_1_to_2(res.matrix)
        assert rep.removed_eigenvalues == [pytest.approx(3.0, abs=1e-9)]
        assert rep.case == 2
        assert rep.variant == "o"
        assert rep.status == "pass"
        np.testing.assert_allclose(rep.alpha.alpha, 0.0, atol=1e-7)


class TestSummabilityReport:
    def test_square_summable_family_stabilizes(self):
        n = np.arange(64)
        vals = 0.5 * (n + 1.0) ** -2
        out = summability_report(vals)
        assert out["truncations"] == [16, 32, 64]
        assert out["relative_changes"][-1] < 0.05
        assert out["note"] == TRUNCATION_CAVEAT

    def test_slow_family_keeps_growing(self):
        n = np.arange(64)
        vals = 0.5 * (n + 1.0) ** -0.75
        out = summability_report(vals)
        assert all(r > 0.2 for r in out["relative_changes"])
        cn = out["coefficient_norms"]
        assert cn[0] < cn[1] < cn[2]

    def test_short_array_is_rejected(self):
        with pytest.raises(ValueError):
            summability_report(np.zeros(10), truncations=(16,))
