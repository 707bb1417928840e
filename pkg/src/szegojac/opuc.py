"""Orthogonal polynomials on the unit circle: recursion coefficients,
moment recursion, and finitely-supported weight reconstruction.

Sign convention (pinned once, used everywhere): the monic recursion is

    Phi_{n+1}(z) = z Phi_n(z) - conj(alpha_n) Phi*_n(z)
    Phi*_{n+1}(z) = Phi*_n(z) - alpha_n z Phi_n(z)

with alpha_n = -conj(Phi_{n+1}(0)). Measures here are conjugation
invariant, so every alpha_n is real. The boundary value alpha_{-1} = -1
is fixed metadata, not a stored coefficient.
"""

from dataclasses import dataclass

import numpy as np

from .measures import CircleMeasure
from .sequences import midpoint_theta_grid

ALPHA_BOUNDARY = -1.0  # alpha_{-1}, by convention


@dataclass(frozen=True)
class VerblunskyCoeffs:
    """Real recursion coefficients alpha_0 .. alpha_{K-1} in (-1, 1)."""

    alpha: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.alpha, dtype=float)
        object.__setattr__(self, "alpha", vals)
        if vals.size and np.max(np.abs(vals)) >= 1.0:
            raise ValueError("coefficients must lie in (-1, 1)")

    def __len__(self):
        return self.alpha.size

    def at(self, j):
        """alpha_j with the boundary convention: alpha_{-1} = -1,
        alpha_j = 0 for j below -1 or beyond the stored range."""
        if j == -1:
            return ALPHA_BOUNDARY
        if j < -1 or j >= self.alpha.size:
            return 0.0
        return float(self.alpha[j])

    def to_dict(self):
        return {"alpha": self.alpha.tolist()}

    @staticmethod
    def from_dict(d):
        return VerblunskyCoeffs(np.asarray(d["alpha"], dtype=float))


def szego_recursion(alpha, z, n_max):
    """Monic polynomial values (Phi_n(z), Phi*_n(z)) for n = 0..n_max."""
    if isinstance(alpha, VerblunskyCoeffs):
        al = alpha
    else:
        al = VerblunskyCoeffs(np.asarray(alpha, dtype=float))
    Phi = np.zeros(n_max + 1, dtype=complex)
    Star = np.zeros(n_max + 1, dtype=complex)
    Phi[0] = Star[0] = 1.0
    for n in range(n_max):
        an = al.at(n)
        Phi[n + 1] = z * Phi[n] - an * Star[n]       # alpha real: conj = id
        Star[n + 1] = Star[n] - an * z * Phi[n]
    return Phi, Star


def _phi_star_coeffs(alpha, K):
    """Coefficient vector of Phi*_K (degree <= K) under the recursion."""
    phi = np.zeros(K + 1, dtype=complex)
    star = np.zeros(K + 1, dtype=complex)
    phi[0] = star[0] = 1.0
    for n in range(K):
        an = alpha.at(n)
        zphi = np.roll(phi, 1)
        zphi[0] = 0.0
        phi, star = zphi - an * star, star - an * zphi
    return star


def verblunsky_from_moments(moments, K, degeneracy_tol=1e-12):
    """Recursion coefficients from trig moments c_k = int e^{-ik theta} dmu.

    Toeplitz-solving recursion: with the inner product
    <z^j, z^k> = c_{j-k}, orthogonality of Phi_{n+1} to 1 gives

        alpha_n = conj(<1, z Phi_n> / <1, Phi*_n>)

    carried along while the coefficient vectors of Phi_n and Phi*_n are
    updated. Needs moments up to index K. Rejects near-degenerate
    measures (1 - alpha_n^2 below degeneracy_tol), which is where the
    moment matrix stops being positive definite.

    Parameters
    ----------
    moments : complex array, c_0..c_M with M >= K, or a CircleMeasure
    K : number of coefficients to produce
    """
    if isinstance(moments, CircleMeasure):
        c = np.asarray(moments.moments, dtype=complex)
    else:
        c = np.asarray(moments, dtype=complex)
    if c.size < K + 1:
        raise ValueError("need moments up to index K")
    if abs(c[0] - 1.0) > 1e-8:
        raise ValueError("moments must be normalized (c_0 = 1)")

    def pair_with_one(coeffs):
        # <1, g> = sum_j g_j c_{-j} = sum_j g_j conj(c_j)
        idx = np.arange(coeffs.size)
        return np.sum(coeffs * np.conj(c[idx]))

    phi = np.array([1.0 + 0j])
    star = np.array([1.0 + 0j])
    out = np.zeros(K)
    for n in range(K):
        zphi = np.concatenate(([0.0], phi))
        starp = np.concatenate((star, [0.0]))
        denom = pair_with_one(starp)
        if abs(denom) < degeneracy_tol:
            raise ValueError("degenerate measure: moment recursion broke down")
        an = np.conj(pair_with_one(zphi) / denom)
        if abs(an.imag) > 1e-8:
            raise ValueError("moments are not conjugation invariant")
        an = float(an.real)
        if 1.0 - an * an < degeneracy_tol:
            raise ValueError("degenerate measure: coefficient at the unit bound")
        out[n] = an
        phi = zphi - an * starp
        star = starp - an * zphi
    return VerblunskyCoeffs(out)


def weight_from_verblunsky(alpha, G):
    """Weight samples of the measure with finitely many nonzero
    coefficients: w(theta) = prod_j (1 - alpha_j^2) / |Phi*_K(e^{i theta})|^2.

    Exact for finitely supported alpha (the classical finite-moment
    approximation becomes the measure itself).
    """
    if not isinstance(alpha, VerblunskyCoeffs):
        alpha = VerblunskyCoeffs(np.asarray(alpha, dtype=float))
    K = len(alpha)
    theta = midpoint_theta_grid(G)
    z = np.exp(1j * theta)
    star_coeffs = _phi_star_coeffs(alpha, K)
    # evaluate Phi*_K on the grid by Horner in z
    vals = np.zeros_like(z)
    for cf in star_coeffs[::-1]:
        vals = vals * z + cf
    prefactor = float(np.prod(1.0 - alpha.alpha ** 2)) if K else 1.0
    return prefactor / np.abs(vals) ** 2


def measure_from_verblunsky(alpha, G, n_moments=None):
    """CircleMeasure carrying the exact weight for finitely supported alpha."""
    w = weight_from_verblunsky(alpha, G)
    return CircleMeasure.from_weight(w, n_moments=n_moments, normalize=False)
