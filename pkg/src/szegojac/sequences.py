"""Sequence containers, weighted norms, tail sums, Fourier-side norms.

Sequences here are finite perturbations: beyond the stored window a
sequence continues either as zeros (`tail="zero"`) or as the free
Jacobi background (`tail="free"`, meaning a_n = 1 forever when the
sequence plays the off-diagonal role, b_n = 0 when it plays the
diagonal role). That convention makes every tail sum below an exact
finite sum.
"""

from dataclasses import dataclass, field

import numpy as np

TAIL_ZERO = "zero"
TAIL_FREE = "free"


@dataclass(frozen=True)
class RealSequence:
    """A real sequence stored on a finite index window.

    offset : index of the first stored entry
    values : the stored entries
    tail   : "zero" or "free"; what the sequence does beyond the window
    """

    offset: int
    values: np.ndarray
    tail: str = TAIL_ZERO

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1:
            raise ValueError("sequence values must be one dimensional")
        if vals.size and not np.all(np.isfinite(vals)):
            raise ValueError("sequence entries must be finite")
        if self.tail not in (TAIL_ZERO, TAIL_FREE):
            raise ValueError("tail must be 'zero' or 'free'")

    def __len__(self):
        return self.values.size

    @property
    def end(self):
        """One past the last stored index."""
        return self.offset + self.values.size

    def at(self, n, free_value=0.0):
        """Entry at index n; `free_value` is the free-tail continuation
        (1.0 for off-diagonal sequences, 0.0 otherwise)."""
        if self.offset <= n < self.end:
            return float(self.values[n - self.offset])
        if self.tail == TAIL_FREE:
            return free_value
        return 0.0

    def to_dict(self):
        return {"offset": self.offset, "values": self.values.tolist(), "tail": self.tail}

    @staticmethod
    def from_dict(d):
        return RealSequence(int(d["offset"]), np.asarray(d["values"], dtype=float),
                            d.get("tail", TAIL_ZERO))


@dataclass(frozen=True)
class FourierCoeffs:
    """Fourier coefficients h_hat(n) on a symmetric index range.

    Stored as a plain dict n -> complex. For a real underlying function
    the coefficients satisfy h_hat(-n) = conj(h_hat(n)).
    """

    coeffs: dict = field(default_factory=dict)

    def at(self, n):
        return complex(self.coeffs.get(n, 0.0))

    @property
    def max_index(self):
        return max((abs(n) for n in self.coeffs), default=0)

    def is_conjugate_symmetric(self, tol=1e-10):
        for n, v in self.coeffs.items():
            if abs(np.conj(v) - self.at(-n)) > tol:
                return False
        return True


def tail_sums(b, a):
    """Tail sums of the diagonal and off-diagonal perturbations.

    lambda_n = -sum_{k>n} b_k and kappa_n = -sum_{k>n} (a_k^2 - 1),
    n = 0, 1, ..., exact because both summands vanish beyond the
    stored windows.

    Parameters
    ----------
    b : RealSequence
        Diagonal entries b_1, b_2, ... (offset 1).
    a : RealSequence
        Off-diagonal entries a_1, a_2, ... (offset 1), all positive.

    Returns
    -------
    (RealSequence, RealSequence)
        (lambda, kappa), both with offset 0 and zero tail.
    """
    N = max(b.end - 1, a.end - 1, 1)
    avals = np.array([a.at(k, 1.0) for k in range(1, N + 1)])
    bvals = np.array([b.at(k, 0.0) for k in range(1, N + 1)])
    if np.any(avals <= 0.0):
        raise ValueError("off-diagonal entries must be positive")
    # lambda_n for n = 0..N; the sum over k > N is empty
    lam = np.zeros(N + 1)
    kap = np.zeros(N + 1)
    for n in range(N + 1):
        lam[n] = -np.sum(bvals[n:])
        kap[n] = -np.sum(avals[n:] ** 2 - 1.0)
    return (RealSequence(0, lam), RealSequence(0, kap))


def weighted_norm(seq, s):
    """Squared weighted norm sum_n |n|^s |beta_n|^2.

    The index n is the true sequence index (offset included). For
    s > 0 the n = 0 term carries weight 0; for s = 0 this is the plain
    squared l2 norm.
    """
    if s < 0:
        raise ValueError("weight exponent s must be nonnegative")
    n_idx = np.arange(seq.offset, seq.end)
    if s == 0:
        w = np.ones_like(n_idx, dtype=float)
    else:
        w = np.abs(n_idx).astype(float) ** s
    return float(np.sum(w * seq.values ** 2))


def sobolev_half_norm(f):
    """Squared homogeneous H^{1/2} norm sum_n |n| |f_hat(n)|^2."""
    total = 0.0
    for n, v in f.coeffs.items():
        total += abs(n) * (abs(v) ** 2)
    return float(total)


def midpoint_theta_grid(G):
    """Midpoint grid theta_j = 2 pi (j + 1/2)/G, j = 0..G-1.

    Avoids theta = 0 and theta = pi exactly, where the circle-to-line
    Jacobians vanish.
    """
    j = np.arange(G)
    return 2.0 * np.pi * (j + 0.5) / G


def log_weight_fourier(w_samples, max_index=None):
    """Fourier coefficients of log w from samples on the midpoint grid.

    Parameters
    ----------
    w_samples : array of positive weight samples w(theta_j) at
        theta_j = 2 pi (j + 1/2)/G with G = len(w_samples), a power of two.
    max_index : keep coefficients |n| <= max_index (default G/2 - 1).

    Returns
    -------
    FourierCoeffs
    """
    w = np.asarray(w_samples, dtype=float)
    G = w.size
    if G & (G - 1):
        raise ValueError("grid size must be a power of two")
    if np.any(w <= 0.0):
        raise ValueError("weight vanishes (or is negative) on the grid")
    h = np.log(w)
    # h_hat(n) = (1/G) sum_j h_j exp(-i n theta_j); the half-sample shift
    # of the grid shows up as the phase exp(-i pi n / G) on the plain FFT
    raw = np.fft.fft(h) / G
    M = G // 2 - 1 if max_index is None else min(max_index, G // 2 - 1)
    coeffs = {}
    for n in range(-M, M + 1):
        coeffs[n] = raw[n % G] * np.exp(-1j * np.pi * n / G)
    return FourierCoeffs(coeffs)


def samples_from_fourier(f, G):
    """Evaluate sum_n f_hat(n) e^{i n theta} on the midpoint grid (inverse
    of log_weight_fourier up to the dropped |n| >= G/2 content)."""
    raw = np.zeros(G, dtype=complex)
    for n, v in f.coeffs.items():
        raw[n % G] = v * np.exp(1j * np.pi * n / G)
    return np.fft.ifft(raw).real * G


def partial_sobolev_norms(f, cutoffs):
    """Squared H^{1/2} norms restricted to |n| <= M for each M in cutoffs."""
    out = []
    for M in cutoffs:
        total = 0.0
        for n, v in f.coeffs.items():
            if abs(n) <= M:
                total += abs(n) * (abs(v) ** 2)
        out.append(float(total))
    return out
