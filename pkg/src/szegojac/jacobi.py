"""Jacobi matrices with finitely supported perturbations of the free matrix.

Index conventions used throughout:

  * matrix entries are 1-based: a_1, a_2, ... off-diagonal, b_1, b_2, ...
    diagonal; beyond the support N, a_k = 1 and b_k = 0 exactly
  * a solution u of J u = E u satisfies, at every site k >= 1,

        a_k u_{k+1} + (b_k - E) u_k + a_{k-1} u_{k-1} = 0,   a_0 := 1

    so u_0 is the boundary value; u_0 = 0 picks the polynomial solution
  * z = beta + 1/beta with |beta| > 1 parametrizes points off [-2, 2];
    the decaying solution behaves like beta^{-n}
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .config import DEFAULT
from .measures import LineMeasure
from .sequences import RealSequence, TAIL_FREE


@dataclass(frozen=True)
class JacobiMatrix:
    """Tridiagonal operator with free tail.

    a, b : RealSequence with offset 1 and free tail (a continues as 1,
           b as 0 beyond the stored window)
    tail_bound : certified sup-norm deviation from the free tail beyond
           the support; 0.0 for exactly finite-support matrices, a tiny
           geometric bound for matrices produced by commutation
    """

    a: RealSequence
    b: RealSequence
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.a.offset != 1 or self.b.offset != 1:
            raise ValueError("a and b must start at index 1")
        if np.any(self.a.values <= 0.0):
            raise ValueError("off-diagonal entries must be positive")

    @staticmethod
    def from_arrays(a_vals, b_vals, tail_bound=0.0):
        a = RealSequence(1, np.asarray(a_vals, dtype=float), TAIL_FREE)
        b = RealSequence(1, np.asarray(b_vals, dtype=float), TAIL_FREE)
        return JacobiMatrix(a, b, tail_bound)

    @staticmethod
    def free():
        return JacobiMatrix.from_arrays([], [])

    @property
    def support(self):
        """Smallest N with a_k = 1, b_k = 0 for all k > N."""
        N = 0
        for k in range(len(self.a), 0, -1):
            if self.a.values[k - 1] != 1.0:
                N = k
                break
        for k in range(len(self.b), 0, -1):
            if self.b.values[k - 1] != 0.0:
                N = max(N, k)
                break
        return N

    def a_at(self, k):
        """a_k for k >= 1, with the convention a_0 = 1."""
        if k == 0:
            return 1.0
        return self.a.at(k, 1.0)

    def b_at(self, k):
        return self.b.at(k, 0.0)

    def truncation(self, M):
        """Diagonal and off-diagonal arrays of the M x M section."""
        d = np.array([self.b_at(k) for k in range(1, M + 1)])
        e = np.array([self.a_at(k) for k in range(1, M)])
        return d, e

    def to_dict(self):
        return {"a": self.a.values.tolist(), "b": self.b.values.tolist()}

    @staticmethod
    def from_dict(d):
        return JacobiMatrix.from_arrays(d.get("a", []), d.get("b", []))


@dataclass(frozen=True)
class PolyTable:
    """First and second kind polynomial values at a fixed point E.

    P, Q are monic (seeds P_{-1} = 0, P_0 = 1, Q_{-1} = -1, Q_0 = 0,
    with a_0^2 := 1 in the n = 0 step); p, q are the orthonormal
    counterparts P_n/(a_1...a_n); F_n = m(E) P_n + Q_n when a finite
    m-value was supplied.
    """

    E: complex
    P: np.ndarray
    Q: np.ndarray
    p: np.ndarray
    q: np.ndarray
    F: np.ndarray = None

    SEEDS = {"P_-1": 0.0, "P_0": 1.0, "Q_-1": -1.0, "Q_0": 0.0}


STATUS_FINITE = "finite"
STATUS_INFINITE = "infinite"
STATUS_INCONCLUSIVE = "inconclusive"

METHOD_TAIL = "closed-form-tail"
METHOD_EXTRAP = "extrapolated-limit"


@dataclass(frozen=True)
class EdgeValue:
    """Boundary value of the m-function at an edge of [-2, 2].

    value is m(edge) itself (not sign-flipped); status records whether
    the limit is finite, infinite, or could not be classified.
    """

    edge: float
    value: float
    method: str
    status: str = STATUS_FINITE
    error_estimate: float = 0.0

    @property
    def is_finite(self):
        return self.status == STATUS_FINITE

    @property
    def is_infinite(self):
        return self.status == STATUS_INFINITE

    def to_dict(self):
        return {"edge": self.edge,
                "value": self.value if self.is_finite else None,
                "method": self.method, "status": self.status,
                "error_estimate": self.error_estimate}


def beta_from_z(z):
    """The root of z = beta + 1/beta with |beta| > 1."""
    z = complex(z)
    beta = (z + np.sqrt(z * z - 4.0 + 0j)) / 2.0
    if abs(beta) < 1.0:
        beta = 1.0 / beta
    if abs(beta) <= 1.0 + 1e-15 and z.imag == 0.0 and abs(z.real) <= 2.0:
        raise ValueError("z lies on [-2, 2]; no decaying branch")
    return beta


def recurrence_solve(J, E, u0, u1, n_max):
    """Propagate the three-term recurrence forward from (u_0, u_1).

    Returns the array (u_0, ..., u_{n_max}).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    dtype = complex if any(isinstance(v, complex) for v in (E, u0, u1)) else float
    u = np.zeros(n_max + 1, dtype=dtype)
    u[0], u[1] = u0, u1
    for k in range(1, n_max):
        u[k + 1] = ((E - J.b_at(k)) * u[k] - J.a_at(k - 1) * u[k - 1]) / J.a_at(k)
    return u


def _backward_solution(J, z, seed_hi, seed_lo, K):
    """Solve the recurrence downward from u_{K+1} = seed_hi, u_K = seed_lo.

    Seeds must be consistent with the free recurrence for the result to
    be the decaying (or boundary) solution. Returns u_0..u_{K+1}.
    """
    dtype = complex if any(isinstance(v, complex) for v in (z, seed_hi, seed_lo)) \
        else float
    u = np.zeros(K + 2, dtype=dtype)
    u[K + 1] = seed_hi
    u[K] = seed_lo
    for k in range(K, 0, -1):
        u[k - 1] = -(J.a_at(k) * u[k + 1] + (J.b_at(k) - z) * u[k]) / J.a_at(k - 1)
    return u


def jost_solution(J, z, K=None):
    """The solution decaying like beta^{-n}, exact in the free tail.

    Built backward from u_n = beta^{-n} at n = K, K+1 with K past the
    support, so every site of the recurrence is satisfied identically.
    Returns (u_0..u_{K+1}, beta).
    """
    beta = beta_from_z(z)
    if K is None:
        K = J.support + 1
    K = max(K, J.support + 1)
    u = _backward_solution(J, complex(z), beta ** -(K + 1), beta ** -K, K)
    return u, beta


def m_function(J, z, tol=DEFAULT):
    """m(z) = <delta_1, (J - z)^{-1} delta_1> for z off [-2, 2].

    Uses the decaying solution u: m = -u_1/u_0. Exact up to roundoff for
    finite-support matrices. Raises if z sits on [-2, 2] or at an
    eigenvalue (u_0 = 0).
    """
    zc = complex(z)
    if zc.imag == 0.0 and -2.0 <= zc.real <= 2.0:
        raise ValueError("z lies on the essential spectrum [-2, 2]")
    u, _ = jost_solution(J, zc)
    scale = np.max(np.abs(u))
    if abs(u[0]) < 1e-13 * scale:
        raise ValueError("z is (numerically) an eigenvalue; m has a pole")
    m = -u[1] / u[0]
    if zc.imag == 0.0 and abs(m.imag) < 1e-12 * (1.0 + abs(m)):
        return float(m.real)
    return complex(m)


def poly_table(J, E, n_max, m_value=None):
    """Values P_n, Q_n, p_n, q_n (and F_n) at E for n = 0..n_max."""
    if isinstance(m_value, EdgeValue):
        if not m_value.is_finite:
            raise ValueError("F-values need a finite m; edge value is not finite")
        m_value = m_value.value
    dtype = complex if isinstance(E, complex) else float
    P = np.zeros(n_max + 1, dtype=dtype)
    Q = np.zeros(n_max + 1, dtype=dtype)
    P[0], Q[0] = 1.0, 0.0
    Pprev, Qprev = 0.0, -1.0   # the n = -1 seeds
    for n in range(n_max):
        b = J.b_at(n + 1)
        a2 = J.a_at(n) ** 2    # a_0^2 = 1 covers the first step
        Pnew = (E - b) * P[n] - a2 * Pprev
        Qnew = (E - b) * Q[n] - a2 * Qprev
        Pprev, Qprev = P[n], Q[n]
        P[n + 1], Q[n + 1] = Pnew, Qnew
    norm = np.cumprod(np.concatenate(([1.0], [J.a_at(n) for n in range(1, n_max + 1)])))
    p = P / norm
    q = Q / norm
    F = None if m_value is None else m_value * P + Q
    return PolyTable(E, P, Q, p, q, F)


def _edge_boundary_solution(J, edge, K=None):
    """Boundary solution with exact tail u_n = (+-1)^n beyond the support."""
    s = 1.0 if edge > 0 else -1.0
    if K is None:
        K = J.support + 1
    K = max(K, J.support + 1)
    return _backward_solution(J, float(edge), s ** (K + 1), s ** K, K)


def eigenvalues_outside(J, tol=DEFAULT, _quick=False):
    """Eigenvalues of J outside [-2, 2], located by truncated eigensolves.

    The M schedule increases until consecutive lists agree to tol_eig
    (finite-support perturbations converge geometrically in M). With
    _quick=True a single moderate truncation is used; good enough for
    precondition checks.
    """
    N = J.support
    schedule = tol.eig_M_schedule if not _quick else (max(64, N + 2),)
    band = 2.0 + tol.eig_band
    prev = None
    for M in schedule:
        M = max(M, N + 2)
        d, e = J.truncation(M)
        evs = eigh_tridiagonal(d, e, eigvals_only=True)
        outside = np.sort(evs[np.abs(evs) > band])
        if prev is not None and prev.size == outside.size and \
                (prev.size == 0 or np.max(np.abs(prev - outside)) <= tol.tol_eig):
            return [float(x) for x in outside]
        prev = outside
    if _quick:
        return [float(x) for x in prev]
    if len(schedule) == 1:
        return [float(x) for x in prev]
    raise RuntimeError("outside-eigenvalue list did not stabilize over the "
                       "truncation schedule; increase eig_M_schedule")


def eigenvalue_refine(J, E0, tol=DEFAULT):
    """Polish an outside eigenvalue to machine precision.

    An eigenvalue is a zero of E -> u_0(E), where u is the decaying
    solution built backward from the exact geometric tail. Secant
    iteration from the truncated-eigensolve estimate converges in a
    handful of steps.
    """
    if abs(E0) <= 2.0:
        raise ValueError("only eigenvalues outside [-2, 2] can be refined")

    def u0(E):
        u, _ = jost_solution(J, complex(E))
        return float(u[0].real)

    x0 = float(E0)
    h = 1e-9 * (1.0 + abs(x0))
    x1 = x0 + h
    f0, f1 = u0(x0), u0(x1)
    for _ in range(60):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if abs(x2) <= 2.0:
            break
        x0, f0, x1, f1 = x1, f1, x2, u0(x2)
        if abs(x1 - x0) < 1e-15 * (1.0 + abs(x1)):
            break
    return x1


def m_at_edge(J, edge, method=METHOD_EXTRAP, tol=DEFAULT, check_spectrum=True):
    """Classify and evaluate m(+-2) = lim m(E), E approaching the edge
    from outside the spectrum.

    method "extrapolated-limit": evaluates m along E = +-(2 + 2^-j) and
    Richardson-extrapolates in sqrt(2^-j). The limit is monotone, so
    divergence shows up as sustained geometric growth of the raw values
    and is flagged as an infinite edge. If the extrapolants neither
    settle below tol_edge nor diverge, status is "inconclusive".

    method "closed-form-tail": for finite-support matrices the boundary
    solution with tail (+-1)^n is exact; m(+-2) = -u_1/u_0, infinite
    exactly when u_0 vanishes. This is the machine-precision method.
    """
    if float(edge) not in (2.0, -2.0):
        raise ValueError("edge must be +2 or -2")
    edge = float(edge)
    if check_spectrum:
        evs = eigenvalues_outside(J, tol=tol, _quick=True)
        if evs:
            raise ValueError("spectrum extends outside [-2, 2]; remove "
                             "eigenvalues before taking edge limits")

    if method == METHOD_TAIL:
        u = _edge_boundary_solution(J, edge)
        scale = float(np.max(np.abs(u)))
        if abs(u[0]) <= tol.edge_zero_rel * scale:
            return EdgeValue(edge, math.inf, method, STATUS_INFINITE, 0.0)
        val = float(-u[1] / u[0])
        return EdgeValue(edge, val, method, STATUS_FINITE, 1e-13 * (1.0 + abs(val)))

    if method != METHOD_EXTRAP:
        raise ValueError("unknown edge method %r" % (method,))

    sgn = 1.0 if edge > 0 else -1.0
    vals = np.empty(tol.edge_j_max)
    for idx in range(tol.edge_j_max):
        E = sgn * (2.0 + 2.0 ** -(idx + 1.0))
        u, _ = jost_solution(J, complex(E))
        vals[idx] = float((-u[1] / u[0]).real)

    # divergence: a finite monotone limit flattens out, an infinite one
    # keeps growing like 2^{j/2} along the schedule
    span = min(tol.edge_growth_span, vals.size - 1)
    tail_abs = np.abs(vals[-span - 1:])
    if np.all(np.diff(tail_abs) > 0):
        growth = tail_abs[-1] / max(tail_abs[0], 1e-300)
        if tail_abs[-1] > tol.edge_divergence or \
                (tail_abs[-1] > 1e3 and growth > 1e2):
            return EdgeValue(edge, math.copysign(math.inf, vals[-1]), method,
                             STATUS_INFINITE, 0.0)

    # Richardson table in t = sqrt(eps) with node ratio sqrt(2); keep the
    # entry whose last differences are smallest
    r = math.sqrt(2.0)
    R = vals.copy()
    best = R[-1]
    best_err = abs(R[-1] - R[-2])
    for level in range(1, tol.edge_levels + 1):
        if R.size < 2:
            break
        R = (r ** level * R[1:] - R[:-1]) / (r ** level - 1.0)
        if R.size >= 3:
            err = abs(R[-1] - R[-2]) + abs(R[-2] - R[-3])
            if err < best_err:
                best, best_err = R[-1], err
    if best_err <= tol.tol_edge:
        return EdgeValue(edge, float(best), method, STATUS_FINITE, float(best_err))
    return EdgeValue(edge, float(best), method, STATUS_INCONCLUSIVE, float(best_err))


@dataclass(frozen=True)
class WeylSolution:
    """The square-summable solution f_n = m(z) p_n + q_n, n >= 0."""

    z: complex
    f: np.ndarray
    m: complex
    beta: complex
    norm_sq: float


def weyl_solution(J, z, n_max, tol=DEFAULT):
    """Weyl solution at Im z > 0 with its l2 norm.

    The norm identity sum |f_n|^2 = Im m / Im z is computable exactly:
    beyond the support f is a pure geometric beta^{-n}, so the tail sums
    in closed form.
    """
    zc = complex(z)
    if zc.imag <= 0.0:
        raise ValueError("weyl_solution needs Im z > 0")
    m = m_function(J, zc, tol=tol)
    K = max(n_max, J.support + 1)
    # build from the decaying side: forward recursion cannot hold the
    # decaying combination over a long window
    u, beta = jost_solution(J, zc, K)
    f = -u[1:K + 2] / u[0]
    ratio = abs(beta) ** -2
    tail = np.abs(f[K]) ** 2 * ratio / (1.0 - ratio)   # sum over n > K
    norm_sq = float(np.sum(np.abs(f[: K + 1]) ** 2) + tail)
    return WeylSolution(zc, f[: n_max + 1], m, beta, norm_sq)


def spectral_quadrature(J, M, tol=DEFAULT):
    """Gauss quadrature for the spectral measure from the M x M section.

    Nodes are the section's eigenvalues; weights are squared first
    components of the normalized eigenvectors. Weights sum to 1.
    """
    if M < J.support + 2:
        raise ValueError("truncation must exceed the support by 2")
    d, e = J.truncation(M)
    evs, vecs = eigh_tridiagonal(d, e)
    weights = vecs[0, :] ** 2
    return LineMeasure(x=None, v=None, variant=None, nodes=evs, weights=weights)


def weight_samples(J, x_grid, tol=DEFAULT):
    """Density of the absolutely continuous part: v(x) = Im m(x + i0)/pi.

    On (-2, 2) take beta = e^{i theta} (the boundary of the |beta| > 1
    branch): with finite support the boundary solution is exact, so v
    comes out in closed form rather than via a smoothed limit.
    """
    x = np.asarray(x_grid, dtype=float)
    v = np.empty_like(x)
    K = J.support + 1
    for idx, xv in enumerate(x):
        theta = math.acos(xv / 2.0)
        beta = np.exp(1j * theta)
        u = _backward_solution(J, complex(xv), beta ** -(K + 1), beta ** -K, K)
        mval = -u[1] / u[0]
        v[idx] = mval.imag / math.pi
    return v
