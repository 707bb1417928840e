import numpy as np
import pytest

from szegojac.config import DEFAULT, with_overrides
from szegojac.jacobi import (EdgeValue, JacobiMatrix, METHOD_EXTRAP,
                             METHOD_TAIL, STATUS_FINITE, STATUS_INFINITE,
                             beta_from_z, eigenvalues_outside,
                             jost_solution, m_at_edge, m_function,
                             poly_table, recurrence_solve,
                             spectral_quadrature, weyl_solution)

CHEB_T = JacobiMatrix.from_arrays([np.sqrt(2.0)], [])
FREE = JacobiMatrix.free()


def random_matrix(rng, n=6, spread=0.4):
    a = 1.0 + spread * rng.uniform(-1, 1, n)
    b = spread * rng.uniform(-1, 1, n)
    return JacobiMatrix.from_arrays(a, b)


class TestRecurrenceSolve:
    def test_free_above_band_closed_form(self):
        # E = 5/2 factors as beta + 1/beta with beta = 2, and the seeds
        # (0, 1) pick out the odd combination (2/3)(2^k - 2^-k)
        u = recurrence_solve(FREE, 2.5, 0.0, 1.0, 30)
        k = np.arange(31)
        want = (2.0 / 3.0) * (2.0 ** k - 2.0 ** -k)
        np.testing.assert_allclose(u, want, rtol=1e-13)

    def test_free_edge_constant_solution(self):
        u = recurrence_solve(FREE, 2.0, 1.0, 1.0, 20)
        assert np.all(u == 1.0)

    def test_zero_seeds_stay_zero(self):
        rng = np.random.default_rng(3)
        u = recurrence_solve(random_matrix(rng), 1.7, 0.0, 0.0, 15)
        assert np.all(u == 0.0)

    def test_rejects_empty_window(self):
        with pytest.raises(ValueError):
            recurrence_solve(FREE, 2.0, 1.0, 1.0, 0)


class TestPolyTable:
    def test_chebyshev_values_at_the_edge(self):
        t = poly_table(CHEB_T, 2.0, 12)
        assert t.P[0] == 1.0
        np.testing.assert_allclose(t.P[1:], 2.0, rtol=1e-14)

    def test_free_values_at_the_edge(self):
        t = poly_table(FREE, 2.0, 12)
        n = np.arange(13)
        np.testing.assert_allclose(t.P, n + 1, rtol=1e-14)
        np.testing.assert_allclose(t.Q, n, rtol=1e-14)

    def test_free_f_row_is_constant(self):
        m2 = m_at_edge(FREE, 2.0, method=METHOD_TAIL)
        t = poly_table(FREE, 2.0, 12, m_value=m2)
        np.testing.assert_allclose(t.F, -1.0, rtol=1e-12)

    def test_f_rejects_infinite_edge_value(self):
        m2 = m_at_edge(CHEB_T, 2.0, method=METHOD_TAIL)
        assert m2.is_infinite
        with pytest.raises(ValueError):
            poly_table(CHEB_T, 2.0, 8, m_value=m2)

    def test_orthonormal_wronskian_is_one(self):
        # a_{k+1}(p_k q_{k+1} - p_{k+1} q_k) is the conserved quantity
        # of the recurrence; with these seeds it equals 1 at every k.
        # Exact in exact arithmetic; the float drift reflects the
        # cancellation between the two large products.
        rng = np.random.default_rng(11)
        for E in (2.0, -2.0, 3.3, -2.7):
            for _ in range(5):
                J = random_matrix(rng)
                t = poly_table(J, E, 20)
                for k in range(20):
                    s = abs(t.p[k] * t.q[k + 1]) + abs(t.p[k + 1] * t.q[k])
                    w = J.a_at(k + 1) * (t.p[k] * t.q[k + 1]
                                         - t.p[k + 1] * t.q[k])
                    assert abs(w - 1.0) < 1e-12 * max(1.0, s)

    def test_sign_patterns_outside_the_band(self):
        # (+-1)^n P_n(+-2) > 0; with finite edge values also
        # -F_n(2) > 0 and (-1)^n F_n(-2) > 0
        rng = np.random.default_rng(5)
        for _ in range(5):
            J = random_matrix(rng, spread=0.1)
            try:
                if eigenvalues_outside(J):
                    continue
            except RuntimeError:
                continue
            lo = m_at_edge(J, -2.0, method=METHOD_TAIL)
            hi = m_at_edge(J, 2.0, method=METHOD_TAIL)
            tp = poly_table(J, 2.0, 16, m_value=hi if hi.is_finite else None)
            tm = poly_table(J, -2.0, 16, m_value=lo if lo.is_finite else None)
            n = np.arange(17)
            assert np.all(tp.P > 0)
            assert np.all((-1.0) ** n * tm.P > 0)
            if tp.F is not None:
                assert np.all(-tp.F > 0)
            if tm.F is not None:
                assert np.all((-1.0) ** n * tm.F > 0)


class TestMFunction:
    def test_free_closed_form_on_the_real_axis(self):
        m = m_function(FREE, 3.0)
        assert abs(m - (-3.0 + np.sqrt(5.0)) / 2.0) < 1e-12

    def test_free_closed_form_at_i(self):
        m = m_function(FREE, 1j)
        want = 1j * (np.sqrt(5.0) - 1.0) / 2.0
        assert abs(m - want) < 1e-12
        assert m.imag / 1.0 > 0.6

    def test_chebyshev_closed_form(self):
        m = m_function(CHEB_T, 3.0)
        assert abs(m - (-1.0 / np.sqrt(5.0))) < 1e-12

    def test_herglotz_property(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            J = random_matrix(rng)
            for z in (0.3 + 0.7j, -1.2 + 0.1j, 2.5j):
                assert m_function(J, z).imag > 0

    def test_rejects_points_in_the_band(self):
        with pytest.raises(ValueError):
            m_function(FREE, 1.0)

    def test_rejects_eigenvalues(self):
        J = JacobiMatrix.from_arrays([], [3.0])
        with pytest.raises(ValueError):
            m_function(J, 10.0 / 3.0)


class TestEdgeValues:
    def test_free_edges_are_one(self):
        for method in (METHOD_TAIL, METHOD_EXTRAP):
            lo = m_at_edge(FREE, -2.0, method=method)
            hi = m_at_edge(FREE, 2.0, method=method)
            assert lo.status == STATUS_FINITE
            assert hi.status == STATUS_FINITE
            assert abs(lo.value - 1.0) < 1e-7
            assert abs(-hi.value - 1.0) < 1e-7

    def test_chebyshev_edges_are_infinite(self):
        for method in (METHOD_TAIL, METHOD_EXTRAP):
            lo = m_at_edge(CHEB_T, -2.0, method=method)
            hi = m_at_edge(CHEB_T, 2.0, method=method)
            assert lo.status == STATUS_INFINITE
            assert hi.status == STATUS_INFINITE
            assert lo.is_infinite and hi.is_infinite

    def test_finite_values_obey_the_quarter_bound(self):
        # matrices built from circle coefficients carry their spectral
        # measure on [-2, 2] by construction, so the bound applies
        from szegojac.geronimus import direct_geronimus
        from szegojac.opuc import VerblunskyCoeffs

        rng = np.random.default_rng(23)
        for variant in ("e", "o", "+", "-"):
            for _ in range(5):
                alpha = VerblunskyCoeffs(rng.uniform(-0.5, 0.5, 6))
                J = direct_geronimus(alpha, variant)
                lo = m_at_edge(J, -2.0, method=METHOD_TAIL)
                hi = m_at_edge(J, 2.0, method=METHOD_TAIL)
                if lo.is_finite:
                    assert lo.value > 0.25
                if hi.is_finite:
                    assert -hi.value > 0.25

    def test_edge_value_serialization(self):
        hi = m_at_edge(FREE, 2.0, method=METHOD_TAIL)
        d = hi.to_dict()
        assert d["edge"] == 2.0
        assert d["status"] == STATUS_FINITE
        assert EdgeValue(**d).is_finite


class TestWeylSolution:
    def test_free_norm_at_i(self):
        sol = weyl_solution(FREE, 1j, 60)
        want = (np.sqrt(5.0) - 1.0) / 2.0
        assert abs(sol.norm_sq - want) < 1e-10

    def test_residual_vanishes_by_construction(self):
        # f[k] sits at site k+1 of the resolvent equation (f[0] = m),
        # so row k+1 of the recurrence connects f[k-1], f[k], f[k+1]
        rng = np.random.default_rng(31)
        z = 0.5 + 1.2j
        J = random_matrix(rng)
        sol = weyl_solution(J, z, 50)
        f = sol.f
        for k in range(1, 49):
            r = (J.a_at(k + 1) * f[k + 1] + (J.b_at(k + 1) - z) * f[k]
                 + J.a_at(k) * f[k - 1])
            assert abs(r) < 1e-12

    def test_geometric_decay_rate(self):
        z = 3.0 + 1.0j
        sol = weyl_solution(FREE, z, 40)
        beta = beta_from_z(z)
        ratios = np.abs(sol.f[20:30] / sol.f[19:29])
        np.testing.assert_allclose(ratios, 1.0 / abs(beta), rtol=1e-10)

    def test_requires_upper_half_plane(self):
        with pytest.raises(ValueError):
            weyl_solution(FREE, 3.0 - 0.5j, 20)


class TestSpectralQuadrature:
    def test_free_nodes_are_cosines(self):
        q = spectral_quadrature(FREE, 5)
        want = np.sort(2.0 * np.cos(np.arange(1, 6) * np.pi / 6.0))
        np.testing.assert_allclose(np.sort(q.nodes), want, atol=1e-12)
        assert abs(q.weights.sum() - 1.0) < 1e-12

    def test_weights_normalized_and_first_moment(self):
        rng = np.random.default_rng(41)
        for _ in range(5):
            J = random_matrix(rng)
            q = spectral_quadrature(J, 40)
            assert abs(q.weights.sum() - 1.0) < 1e-12
            assert abs(np.dot(q.weights, q.nodes) - J.b_at(1)) < 1e-10

    def test_rejects_window_inside_support(self):
        rng = np.random.default_rng(43)
        J = random_matrix(rng, n=10)
        with pytest.raises(ValueError):
            spectral_quadrature(J, 4)


class TestEigenvaluesOutside:
    def test_free_has_none(self):
        assert eigenvalues_outside(FREE) == []

    def test_single_diagonal_bump(self):
        # b_1 = 3: u = beta^{-n} solves row n >= 2 for any beta; row 1
        # forces 3 + 1/beta = beta + 1/beta ... beta = 3, E = 10/3
        J = JacobiMatrix.from_arrays([], [3.0])
        evs = eigenvalues_outside(J)
        assert len(evs) == 1
        assert abs(evs[0] - 10.0 / 3.0) < 1e-9

    def test_symmetric_pair(self):
        J = JacobiMatrix.from_arrays([], [3.0, 0.0, -3.0])
        evs = eigenvalues_outside(J)
        assert len(evs) == 2
        assert evs[0] < -2 < 2 < evs[1]


class TestJostSolution:
    def test_free_is_pure_power(self):
        u, beta = jost_solution(FREE, 3.0, 30)
        np.testing.assert_allclose(u, beta ** -np.arange(32), rtol=1e-12)

    def test_decay_beyond_support(self):
        rng = np.random.default_rng(47)
        J = random_matrix(rng)
        u, beta = jost_solution(J, 2.9, 40)
        ratios = u[20:35] / u[19:34]
        np.testing.assert_allclose(ratios, 1.0 / beta, rtol=1e-10)


class TestMatrixBasics:
    def test_beta_from_z_inverts_the_joukowski_map(self):
        for z in (3.0, -2.5, 2.0 + 1.0j, -0.5 + 2.0j):
            beta = beta_from_z(z)
            assert abs(beta + 1.0 / beta - z) < 1e-12
            assert abs(beta) >= 1.0

    def test_dict_roundtrip(self):
        J = JacobiMatrix.from_arrays([1.1, 0.9], [0.2])
        back = JacobiMatrix.from_dict(J.to_dict())
        np.testing.assert_array_equal(back.a.values, J.a.values)
        np.testing.assert_array_equal(back.b.values, J.b.values)

    def test_truncation_returns_band_arrays(self):
        J = JacobiMatrix.from_arrays([1.3], [0.5, -0.2])
        d, e = J.truncation(6)
        assert d.shape == (6,) and e.shape == (5,)
        np.testing.assert_array_equal(d, [0.5, -0.2, 0, 0, 0, 0])
        np.testing.assert_array_equal(e, [1.3, 1, 1, 1, 1])

    def test_support_covers_both_sequences(self):
        assert JacobiMatrix.from_arrays([], [0.0, 0.0, 0.5]).support >= 3
        assert FREE.support == 0
