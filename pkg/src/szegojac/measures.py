"""Probability measures on the unit circle and on [-2, 2].

Both types carry weight samples on the shared midpoint grid
theta_j = 2 pi (j + 1/2)/G. The line side lives at x = 2 cos(theta)
for theta in (0, pi), i.e. the first half of the grid, so the
endpoint Jacobian zeros at x = +-2 are never sampled.
"""

from dataclasses import dataclass, field

import numpy as np

from .sequences import midpoint_theta_grid


@dataclass(frozen=True)
class CircleMeasure:
    """Conjugation-invariant probability measure w(theta) dtheta / 2pi.

    theta   : midpoint grid over (0, 2pi)
    w       : weight samples, even under theta -> 2pi - theta
    moments : trig moments c_k = int e^{-ik theta} dmu, k = 0..len-1
              (c_{-k} = conj(c_k) by reality)
    """

    theta: np.ndarray
    w: np.ndarray
    moments: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "theta", np.asarray(self.theta, dtype=float))
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float))
        if self.moments is not None:
            object.__setattr__(self, "moments", np.asarray(self.moments, dtype=complex))

    @property
    def grid_size(self):
        return self.theta.size

    def moment(self, k):
        """c_k for any integer k within the stored range."""
        m = self.moments
        if m is None:
            raise ValueError("measure carries no moments")
        if abs(k) >= m.size:
            raise IndexError("moment index out of range")
        return m[k] if k >= 0 else np.conj(m[-k])

    @staticmethod
    def from_weight(w_samples, n_moments=None, normalize=True):
        """Build from weight samples on the midpoint grid.

        Moments come from the midpoint rule, which is the trapezoid
        rule on a periodic grid and therefore spectrally accurate for
        smooth w. With normalize=True the samples are rescaled so that
        c_0 = 1.
        """
        w = np.asarray(w_samples, dtype=float)
        G = w.size
        theta = midpoint_theta_grid(G)
        mass = float(np.mean(w))
        if normalize:
            if mass <= 0:
                raise ValueError("cannot normalize a nonpositive weight")
            w = w / mass
        if n_moments is None:
            n_moments = min(G // 2, 256)
        k = np.arange(n_moments)
        # c_k = (1/G) sum_j w_j exp(-i k theta_j)
        phase = np.exp(-1j * np.outer(k, theta))
        moments = phase @ w / G
        return CircleMeasure(theta, w, moments)

    def is_even(self, tol=1e-12):
        return bool(np.max(np.abs(self.w - self.w[::-1])) <= tol)


@dataclass(frozen=True)
class LineMeasure:
    """Measure v(x) dx on [-2, 2], sampled at x = 2 cos(theta).

    x        : sample points 2 cos(theta_j), theta_j in (0, pi), decreasing in j
    v        : density samples v(x_j)
    variant  : tag in {"e", "o", "+", "-"} when produced by one of the
               circle-to-line maps, else None
    nodes, weights : optional quadrature (point masses) for the measure

    Either the samples or the quadrature may be absent (None).
    """

    x: np.ndarray = None
    v: np.ndarray = None
    variant: str = None
    nodes: np.ndarray = None
    weights: np.ndarray = None

    def __post_init__(self):
        if self.x is not None:
            object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
            object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        if self.nodes is not None:
            object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
            object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    @property
    def theta(self):
        return np.arccos(self.x / 2.0)

    def mass(self):
        """Total mass: theta-midpoint rule on the samples (int v dx with
        dx = 2 sin(theta) dtheta), or the weight sum if only a
        quadrature is present."""
        if self.x is None:
            return float(np.sum(self.weights))
        th = self.theta
        dtheta = np.pi / self.x.size
        return float(np.sum(self.v * 2.0 * np.sin(th)) * dtheta)

    def quadrature_moment(self, power):
        if self.nodes is None:
            raise ValueError("measure carries no quadrature")
        return float(np.sum(self.weights * self.nodes ** power))


def line_grid(G):
    """x = 2 cos(theta) over the first half of the midpoint grid."""
    theta = midpoint_theta_grid(G)[: G // 2]
    return 2.0 * np.cos(theta)
