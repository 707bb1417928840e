import numpy as np
import pytest

from szegojac.sequences import (FourierCoeffs, RealSequence,
                                log_weight_fourier, midpoint_theta_grid,
                                partial_sobolev_norms,
                                samples_from_fourier, sobolev_half_norm,
                                tail_sums, weighted_norm)


def seq(values, offset=1, tail="zero"):
    return RealSequence(offset=offset, values=np.asarray(values, float),
                        tail=tail)


class TestRealSequence:
    def test_indexing_and_tails(self):
        b = seq([0.3, -0.1])
        assert b.at(1) == 0.3
        assert b.at(2) == -0.1
        assert b.at(3) == 0.0
        a = seq([1.2], tail="free")
        assert a.at(1) == 1.2
        assert a.at(5, free_value=1.0) == 1.0

    def test_end_is_one_past_last_stored_index(self):
        assert seq([1.0, 2.0, 3.0]).end == 4
        assert seq([], offset=0).end == 0


class TestTailSums:
    def test_free_matrix_gives_zero_sums(self):
        lam, kap = tail_sums(seq([], tail="zero"), seq([], tail="free"))
        assert np.all(lam.values == 0.0)
        assert np.all(kap.values == 0.0)

    def test_single_offdiagonal_bump(self):
        # a = (sqrt 2, 1, 1, ...): log a_1^2 = log 2 contributes only
        # to the n = 0 entry
        lam, kap = tail_sums(seq([]), seq([np.sqrt(2.0)], tail="free"))
        assert abs(kap.at(0) - (-1.0)) < 1e-12
        for n in range(1, 6):
            assert kap.at(n) == 0.0
        assert np.all(lam.values == 0.0)

    def test_two_diagonal_entries(self):
        lam, _ = tail_sums(seq([1.0, -1.0]), seq([], tail="free"))
        assert abs(lam.at(0) - 0.0) < 1e-12
        assert abs(lam.at(1) - 1.0) < 1e-12
        assert lam.at(2) == 0.0

    def test_rejects_nonpositive_offdiagonal(self):
        with pytest.raises(ValueError):
            tail_sums(seq([]), seq([-1.0], tail="free"))


class TestWeightedNorm:
    def test_single_term(self):
        assert weighted_norm(seq([1.0]), 1.0) == 1.0

    def test_s_zero_is_plain_l2(self):
        v = np.array([0.5, -0.25, 2.0])
        assert abs(weighted_norm(seq(v), 0.0) - np.sum(v ** 2)) < 1e-15

    def test_partial_sums_approach_basel_value(self):
        # beta_n = n^{-3/2} with s = 1 turns each term into n^{-2}
        prev = 0.0
        for N in (100, 1000, 4000):
            n = np.arange(1, N + 1)
            total = weighted_norm(seq(n ** -1.5), 1.0)
            assert total > prev
            # integral tail bound: missing mass is below 1/N
            assert abs(total - np.pi ** 2 / 6.0) < 1.0 / N + 1e-12
            prev = total

    def test_rejects_negative_weight_exponent(self):
        with pytest.raises(ValueError):
            weighted_norm(seq([1.0]), -0.5)


class TestSobolevHalfNorm:
    def test_zero_function(self):
        assert sobolev_half_norm(FourierCoeffs({})) == 0.0

    def test_two_symmetric_coefficients(self):
        t = 0.7
        f = FourierCoeffs({1: t, -1: t})
        assert abs(sobolev_half_norm(f) - 2 * t ** 2) < 1e-15

    def test_partial_sums_approach_twice_basel(self):
        M = 2000
        c = {n: abs(n) ** -1.5 for n in range(-M, M + 1) if n != 0}
        total = sobolev_half_norm(FourierCoeffs(c))
        assert abs(total - np.pi ** 2 / 3.0) < 2.0 / M

    def test_partial_norms_are_cumulative(self):
        f = FourierCoeffs({1: 1.0, -1: 1.0, 3: 0.5, -3: 0.5})
        partial = partial_sobolev_norms(f, [1, 2, 3])
        assert abs(partial[0] - 2.0) < 1e-15
        assert abs(partial[1] - 2.0) < 1e-15
        assert abs(partial[2] - 3.5) < 1e-15


class TestLogWeightFourier:
    def test_constant_weight(self):
        G = 256
        h = log_weight_fourier(np.ones(G), 8)
        for n in range(-8, 9):
            assert abs(h.at(n)) < 1e-14

    def test_exponential_of_cosine(self):
        # w = exp(2t cos theta): log w has exactly the +-1 coefficients
        t = 0.35
        G = 4096
        theta = midpoint_theta_grid(G)
        h = log_weight_fourier(np.exp(2 * t * np.cos(theta)), 6)
        assert abs(h.at(1) - t) < 1e-12
        assert abs(h.at(-1) - t) < 1e-12
        for n in (0, 2, 3, 4, 5, 6):
            if n:
                assert abs(h.at(n)) < 1e-12

    def test_one_plus_cosine(self):
        # log(1 + cos theta) = log|1 + e^{i theta}|^2 - log 2 expands
        # with coefficients (-1)^{n+1}/n; the integrable log
        # singularity at theta = pi slows the grid convergence, so the
        # tolerance reflects the measured aliasing at this grid size
        G = 65536
        theta = midpoint_theta_grid(G)
        h = log_weight_fourier(1.0 + np.cos(theta), 12)
        assert abs(h.at(0) - (-np.log(2.0))) < 1e-4
        for n in range(1, 13):
            want = (-1.0) ** (n + 1) / n
            assert abs(h.at(n) - want) < 1e-4
            assert abs(h.at(-n) - want) < 1e-4

    def test_roundtrip_with_samples(self):
        G = 512
        theta = midpoint_theta_grid(G)
        w = np.exp(0.3 * np.cos(theta) - 0.1 * np.cos(2 * theta))
        h = log_weight_fourier(w, G // 2 - 1)
        back = samples_from_fourier(h, G)
        assert np.max(np.abs(np.exp(back.real) - w)) < 1e-10

    def test_rejects_nonpositive_weight(self):
        G = 128
        w = np.ones(G)
        w[3] = 0.0
        with pytest.raises(ValueError):
            log_weight_fourier(w, 4)

    def test_rejects_odd_grid(self):
        with pytest.raises(ValueError):
            log_weight_fourier(np.ones(100), 4)
