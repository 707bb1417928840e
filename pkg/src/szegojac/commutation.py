"""Rank-one spectral surgery on Jacobi matrices: insert or delete a
single eigenvalue outside [-2, 2] while keeping the rest of the measure
fixed up to overall renormalization.

Both directions use the same machinery. Given a real solution phi of
the recurrence at energy E and a coupling gamma, set

  c_n     = 1 + gamma * sum_{j<=n} phi_j^2        (c_0 = 1)
  a~_n    = a_n sqrt(c_{n-1} c_{n+1}) / c_n
  b~_n    = b_n + gamma (a_n phi_n phi_{n+1} / c_n
                         - a_{n-1} phi_{n-1} phi_n / c_{n-1})

and on the resolvent side

  m~(z) = (m(z) - gamma / (z - E)) / (1 + gamma).

Insertion takes gamma > 0 and the boundary solution phi (phi_0 = 0,
phi_1 = 1), which grows geometrically when E is not an eigenvalue; the
new point gets mass gamma / (1 + gamma). Deletion takes the
eigenvector phi at E (decaying, phi_0 = 0) and gamma = -1/||phi||^2,
which matches minus the existing mass at E, so the pole cancels.

For deletion the partial sums 1 + gamma * sum_{j<=n} cancel badly once
phi has decayed; c_n is therefore accumulated in the equivalent suffix
form c_n = sum_{j>n} phi_j^2 / ||phi||^2 with the geometric tail summed
in closed form. Beyond the perturbation's support phi and c are both
exactly geometric, so a~ = 1 and b~ = 0 exactly: deleting from a
finite-range matrix lands back on a finite-range matrix.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .jacobi import (JacobiMatrix, beta_from_z, eigenvalue_refine,
                     eigenvalues_outside, jost_solution, recurrence_solve)


@dataclass(frozen=True)
class CommutationResult:
    """Transformed matrix plus the bookkeeping of the moved point mass.

    weight is the mass of the point at E in whichever measure has it:
    the output measure for "add", the input measure for "remove".
    gamma is the coupling actually used (about -weight for "remove").
    """

    matrix: JacobiMatrix
    E: float
    gamma: float
    direction: str
    weight: float


def commuted_m(m, z, E, gamma):
    """The transformed m-function value at z, given the original one."""
    return (m - gamma / (z - E)) / (1.0 + gamma)


def phi_solution(J, E, n_max):
    """Boundary solution at E: phi_0 = 0, phi_1 = 1, recurrence forward."""
    return recurrence_solve(J, E, 0.0, 1.0, n_max)


def _transformed_entries(J, phi, c, gamma, n):
    cm, c0, cp = c[n - 1], c[n], c[n + 1]
    a = J.a_at(n) * np.sqrt(cm * cp) / c0
    b = J.b_at(n) + gamma * (J.a_at(n) * phi[n] * phi[n + 1] / c0
                             - J.a_at(n - 1) * phi[n - 1] * phi[n] / cm)
    return a, b


def double_commute_add(J, E, gamma, tol=DEFAULT):
    """Insert a point mass gamma/(1+gamma) at E, |E| > 2.

    E must not already be an eigenvalue of J (delete it first if so).
    The output has finite range up to a geometrically small tail; the
    truncation level is recorded on the matrix as tail_bound.
    """
    E = float(E)
    if gamma <= 0.0:
        raise ValueError("insertion needs gamma > 0")
    if abs(E) <= 2.0:
        raise ValueError("can only insert point masses outside [-2, 2]")
    existing = eigenvalues_outside(J, tol=tol, _quick=True)
    if any(abs(E - ev) < 1e-6 for ev in existing):
        raise ValueError("E is already an eigenvalue; remove it first")

    N = J.support
    n_cap = N + tol.commute_max_extra

    # phi grows like beta^n and c like gamma beta^{2n}; cap the window
    # well before c overflows
    beta = abs(beta_from_z(E))
    budget = 140.0 - 0.5 * np.log10(max(gamma, 1.0))
    n_cap = min(n_cap, max(N + 8, int(budget / np.log10(beta))))

    phi = phi_solution(J, E, n_cap + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        c = 1.0 + gamma * np.concatenate(([0.0], np.cumsum(phi[1:] ** 2)))
    bad = np.nonzero(~np.isfinite(c))[0]
    if bad.size:
        n_cap = max(1, int(bad[0]) - 2)
        phi, c = phi[:n_cap + 2], c[:n_cap + 2]

    a_new = np.empty(n_cap)
    b_new = np.empty(n_cap)
    cut = n_cap
    quiet = 0
    for n in range(1, n_cap + 1):
        a_new[n - 1], b_new[n - 1] = _transformed_entries(J, phi, c, gamma, n)
        dev = max(abs(a_new[n - 1] - 1.0), abs(b_new[n - 1]))
        if n > N and dev < tol.truncation_threshold:
            quiet += 1
            if quiet >= 5:
                cut = n
                break
        else:
            quiet = 0

    devs = np.maximum(np.abs(a_new[:cut] - 1.0), np.abs(b_new[:cut]))
    while cut > 0 and devs[cut - 1] < tol.truncation_threshold:
        cut -= 1
    tail_bound = float(devs[cut:].max()) if cut < len(devs) else 0.0

    Jt = JacobiMatrix.from_arrays(a_new[:cut], b_new[:cut], tail_bound=tail_bound)
    return CommutationResult(Jt, E, float(gamma), "add",
                             weight=gamma / (1.0 + gamma))


def double_commute_remove(J, E, tol=DEFAULT):
    """Delete the eigenvalue nearest the estimate E.

    E is first polished against the decaying solution; the call fails
    if no eigenvalue sits there. The result has exactly finite range
    (at most one site beyond the input's support).
    """
    E = eigenvalue_refine(J, float(E), tol=tol)
    u, beta = jost_solution(J, E)
    scale = np.max(np.abs(u))
    if abs(u[0]) > 1e-6 * scale:
        raise ValueError("no eigenvalue at the requested energy")
    u = u.real / u[1].real        # eigenvector normalized to phi_1 = 1
    beta = float(beta.real)       # real outside [-2, 2]; negative for E < -2
    K = J.support + 1             # u is exactly geometric past here

    # suffix sums s_n = sum_{j>n} phi_j^2, tail summed in closed form
    r = beta ** -2
    s = np.empty(K + 1)
    s[K] = u[K] ** 2 * r / (1.0 - r)
    for n in range(K - 1, -1, -1):
        s[n] = s[n + 1] + u[n + 1] ** 2
    norm2 = s[0]
    gamma = -1.0 / norm2

    phi = u.copy()
    phi[0] = 0.0
    c = np.empty(K + 2)
    c[:K + 1] = s / norm2         # c_0 = 1 exactly
    c[K + 1] = c[K] * r
    phi[K + 1] = phi[K] / beta

    a_new = np.empty(K)
    b_new = np.empty(K)
    for n in range(1, K + 1):
        a_new[n - 1], b_new[n - 1] = _transformed_entries(J, phi, c, gamma, n)

    devs = np.maximum(np.abs(a_new - 1.0), np.abs(b_new))
    cut = K
    while cut > 0 and devs[cut - 1] < tol.truncation_threshold:
        cut -= 1

    Jt = JacobiMatrix.from_arrays(a_new[:cut], b_new[:cut])
    return CommutationResult(Jt, float(E), float(gamma), "remove",
                             weight=1.0 / norm2)
