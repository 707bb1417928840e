"""Direct and inverse relations between circle recursion coefficients
and Jacobi parameters, one pair of formulas per measure map variant.

Direct side (alpha -> (a, b), boundary alpha_{-1} = -1 applied
automatically, indices n = 0, 1, ...):

  e:  a_{n+1}^2 = (1 - a_{2n-1})(1 - a_{2n}^2)(1 + a_{2n+1})
      b_{n+1}   = a_{2n}(1 - a_{2n-1}) - a_{2n-2}(1 + a_{2n-1})
  o:  a_{n+1}^2 = (1 + a_{2n+1})(1 - a_{2n+2}^2)(1 - a_{2n+3})
      b_{n+1}   = -a_{2n+2}(1 + a_{2n+1}) + a_{2n}(1 - a_{2n+1})
  +:  a_{n+1}^2 = (1 + a_{2n})(1 - a_{2n+1}^2)(1 - a_{2n+2})
      b_{n+1}   = -a_{2n+1}(1 + a_{2n}) + a_{2n-1}(1 - a_{2n})
  -:  a_{n+1}^2 = (1 - a_{2n})(1 - a_{2n+1}^2)(1 + a_{2n+2})
      b_{n+1}   = a_{2n+1}(1 - a_{2n}) - a_{2n-1}(1 + a_{2n})

(a_j above is alpha_j; the off-diagonal is the positive square root.)

Inverse side: from the ratio sequences of first-kind values P_n and of
F_n = m P_n + Q_n at the edges,

  A_n = -P_{n+1}(-2)/P_n(-2)   B_n = P_{n+1}(2)/P_n(2)
  C_n = -F_{n+1}(-2)/F_n(-2)   D_n = F_{n+1}(2)/F_n(2)

all positive on the relevant range, the coefficients come back via the
two-line formulas in `inverse_geronimus`.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .jacobi import (METHOD_TAIL, STATUS_INFINITE, EdgeValue, JacobiMatrix,
                     m_at_edge)
from .opuc import VerblunskyCoeffs

VARIANTS = ("e", "o", "+", "-")


def direct_geronimus(alpha, variant, n_rows=None):
    """Jacobi matrix of the image measure under the chosen map.

    Rows are produced until every referenced coefficient is past the
    stored range (so the matrix is exactly free from there on) and the
    trailing free rows are trimmed.
    """
    if variant not in VARIANTS:
        raise ValueError("unknown variant %r" % (variant,))
    if not isinstance(alpha, VerblunskyCoeffs):
        alpha = VerblunskyCoeffs(np.asarray(alpha, dtype=float))
    al = alpha.at
    K = len(alpha)
    if n_rows is None:
        n_rows = K // 2 + 3
    a = np.empty(n_rows)
    b = np.empty(n_rows)
    for n in range(n_rows):
        if variant == "e":
            a2 = (1 - al(2 * n - 1)) * (1 - al(2 * n) ** 2) * (1 + al(2 * n + 1))
            bb = al(2 * n) * (1 - al(2 * n - 1)) - al(2 * n - 2) * (1 + al(2 * n - 1))
        elif variant == "o":
            a2 = (1 + al(2 * n + 1)) * (1 - al(2 * n + 2) ** 2) * (1 - al(2 * n + 3))
            bb = -al(2 * n + 2) * (1 + al(2 * n + 1)) + al(2 * n) * (1 - al(2 * n + 1))
        elif variant == "+":
            a2 = (1 + al(2 * n)) * (1 - al(2 * n + 1) ** 2) * (1 - al(2 * n + 2))
            bb = -al(2 * n + 1) * (1 + al(2 * n)) + al(2 * n - 1) * (1 - al(2 * n))
        else:
            a2 = (1 - al(2 * n)) * (1 - al(2 * n + 1) ** 2) * (1 + al(2 * n + 2))
            bb = al(2 * n + 1) * (1 - al(2 * n)) - al(2 * n - 1) * (1 + al(2 * n))
        if a2 <= 0.0:
            raise ValueError("nonpositive off-diagonal square at row %d" % n)
        a[n] = np.sqrt(a2)
        b[n] = bb
    # trim rows that are exactly free (the formulas return exact 1, 0
    # once all referenced coefficients are zero)
    W = n_rows
    while W > 0 and a[W - 1] == 1.0 and b[W - 1] == 0.0:
        W -= 1
    return JacobiMatrix.from_arrays(a[:W], b[:W])


@dataclass(frozen=True)
class RatioSeqs:
    """Consecutive-value ratios of P and F at the two edges.

    C and D are None when the corresponding edge value is infinite.
    provenance records which polynomial/edge built each ratio.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray = None
    D: np.ndarray = None
    provenance: dict = None


def _as_edge_value(e, edge):
    """Accept an EdgeValue, a finite float, or +-inf/None for 'infinite'."""
    if isinstance(e, EdgeValue):
        return e
    if e is None or not np.isfinite(e):
        return EdgeValue(edge, None, METHOD_TAIL, status=STATUS_INFINITE)
    return EdgeValue(edge, float(e), METHOD_TAIL)


def _poly_ratios(J, E, n_max):
    """rho_n = P_{n+1}(E)/P_n(E), n = 0..n_max-1, propagated in ratio
    form so the values stay O(1) while P itself may grow."""
    rho = np.empty(n_max)
    rho[0] = E - J.b_at(1)
    for n in range(1, n_max):
        rho[n] = (E - J.b_at(n + 1)) - J.a_at(n) ** 2 / rho[n - 1]
    return rho


def _F_ratios(J, E, m_value, n_max):
    """rho_n = F_{n+1}(E)/F_n(E) with F_n = m P_n + Q_n; same recurrence
    as P, different seed: F_0 = m, F_1 = m (E - b_1) + 1."""
    rho = np.empty(n_max)
    rho[0] = (E - J.b_at(1)) + 1.0 / m_value
    for n in range(1, n_max):
        rho[n] = (E - J.b_at(n + 1)) - J.a_at(n) ** 2 / rho[n - 1]
    return rho


def ratio_sequences(J, edges=None, n_max=32, tol=DEFAULT):
    """The four ratio sequences at the edges.

    edges : optional (EdgeValue at -2, EdgeValue at +2); computed with
        the closed-form-tail method when absent. F-ratios are only
        populated where the edge value is finite.
    """
    if edges is None:
        edges = (m_at_edge(J, -2.0, method=METHOD_TAIL, tol=tol),
                 m_at_edge(J, +2.0, method=METHOD_TAIL, tol=tol))
    lo, hi = (_as_edge_value(e, s) for e, s in zip(edges, (-2.0, 2.0)))
    A = -_poly_ratios(J, -2.0, n_max)
    B = _poly_ratios(J, +2.0, n_max)
    C = D = None
    if lo.is_finite:
        C = -_F_ratios(J, -2.0, lo.value, n_max)
    if hi.is_finite:
        D = _F_ratios(J, +2.0, hi.value, n_max)
    prov = {"A": "P at -2", "B": "P at +2", "C": "F at -2", "D": "F at +2"}
    return RatioSeqs(A, B, C, D, prov)


@dataclass(frozen=True)
class InverseResult:
    """Recovered coefficients plus the reconstructed boundary value.

    alpha_minus1 must come out as -1; it is the consistency check of
    the whole convention stack. For variants e, +, - it is produced by
    the boundary row of the formulas (e) or the first-row diagonal
    identity (+, -). Variant o's formulas never reference the boundary
    coefficient, so there the reported value is -1 plus the defect of
    the first-row identity, keeping the check meaningful.
    """

    alpha: VerblunskyCoeffs
    alpha_minus1: float
    variant: str


def _guard(x, y, what):
    s = x + y
    if abs(s) < 1e-12:
        raise ValueError("degenerate ratio sum in %s" % what)
    return s


def inverse_geronimus(J, variant, edges=None, n_alpha=None, tol=DEFAULT):
    """Recover the recursion coefficients of the preimage measure.

    Callers should confirm the matrix is in the chosen map's range
    (see range_membership); edge values are computed with the
    closed-form-tail method when not supplied.
    """
    if variant not in VARIANTS:
        raise ValueError("unknown variant %r" % (variant,))
    if n_alpha is None:
        n_alpha = 2 * J.support + 2
    n_rows = n_alpha // 2 + 2
    if edges is None:
        lo = m_at_edge(J, -2.0, method=METHOD_TAIL, tol=tol)
        hi = m_at_edge(J, +2.0, method=METHOD_TAIL, tol=tol)
    else:
        lo = _as_edge_value(edges[0], -2.0)
        hi = _as_edge_value(edges[1], +2.0)
    need_lo = variant in ("o", "-")
    need_hi = variant in ("o", "+")
    if need_lo and not lo.is_finite:
        raise ValueError("variant %s needs a finite m(-2)" % variant)
    if need_hi and not hi.is_finite:
        raise ValueError("variant %s needs a finite -m(2)" % variant)
    ratios = ratio_sequences(J, (lo, hi), n_rows, tol=tol)
    A, B, C, D = ratios.A, ratios.B, ratios.C, ratios.D

    alpha = np.zeros(n_alpha)

    def put(idx, val):
        if 0 <= idx < n_alpha:
            alpha[idx] = val

    if variant == "e":
        for n in range(n_rows):
            s = _guard(A[n], B[n], "variant e")
            put(2 * n, (A[n] - B[n]) / s)
            if n > 0:
                put(2 * n - 1, 1.0 - s / 2.0)
        alpha_minus1 = 1.0 - (A[0] + B[0]) / 2.0
    elif variant == "o":
        for n in range(n_rows):
            s = _guard(C[n], D[n], "variant o")
            put(2 * n + 2, -(C[n] - D[n]) / s)
            put(2 * n + 1, s / 2.0 - 1.0)
        # m(-2) and -m(+2) are both positive on this range; their ratio
        # is (1 - alpha_0)/(1 + alpha_0)
        r = lo.value / (-hi.value)
        put(0, (1.0 - r) / (1.0 + r))
        # the boundary coefficient never enters; report -1 plus the
        # defect of the first-row diagonal identity (see InverseResult)
        a0, a1, a2 = alpha[0], alpha[1], (alpha[2] if n_alpha > 2 else 0.0)
        if abs(1.0 - a1) < 1e-12:
            raise ValueError("degenerate first-row identity in variant o")
        a0_check = (J.b_at(1) + a2 * (1.0 + a1)) / (1.0 - a1)
        alpha_minus1 = -1.0 + (a0_check - a0)
    elif variant == "+":
        for n in range(n_rows):
            s = _guard(A[n], D[n], "variant +")
            put(2 * n + 1, -(A[n] - D[n]) / s)
            put(2 * n, s / 2.0 - 1.0)
        a0, a1 = alpha[0], (alpha[1] if n_alpha > 1 else 0.0)
        if abs(1.0 - a0) < 1e-12:
            raise ValueError("degenerate first-row identity in variant +")
        alpha_minus1 = (J.b_at(1) + a1 * (1.0 + a0)) / (1.0 - a0)
    else:
        for n in range(n_rows):
            s = _guard(C[n], B[n], "variant -")
            put(2 * n + 1, (C[n] - B[n]) / s)
            put(2 * n, 1.0 - s / 2.0)
        a0, a1 = alpha[0], (alpha[1] if n_alpha > 1 else 0.0)
        if abs(1.0 + a0) < 1e-12:
            raise ValueError("degenerate first-row identity in variant -")
        alpha_minus1 = (a1 * (1.0 - a0) - J.b_at(1)) / (1.0 + a0)

    clipped = np.clip(alpha, -1.0 + 1e-15, 1.0 - 1e-15)
    return InverseResult(VerblunskyCoeffs(clipped), float(alpha_minus1), variant)
