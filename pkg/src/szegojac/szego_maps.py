"""The four measure maps between the circle and [-2, 2].

All four push a conjugation-invariant probability measure
w(theta) dtheta/2pi forward to v(x) dx on [-2, 2] through x = 2 cos(theta):

    variant e:  v = w / (pi sqrt(4 - x^2))
    variant o:  v = (c^2 / pi)  sqrt(4 - x^2) w
    variant +:  v = (c_+^2 / pi) sqrt((2 - x)/(2 + x)) w
    variant -:  v = (c_-^2 / pi) sqrt((2 + x)/(2 - x)) w

with w evaluated at theta(x) = arccos(x/2) and the constants

    c   = 1 / sqrt(2 (1 - alpha_0^2)(1 - alpha_1))
    c_+- = 1 / sqrt(2 (1 -+ alpha_0))

read from the source measure's recursion coefficients. The squared
constants make every image a probability measure again.
"""

import math

import numpy as np

from .config import DEFAULT
from .jacobi import METHOD_TAIL, m_at_edge
from .measures import CircleMeasure, LineMeasure
from .opuc import VerblunskyCoeffs

VARIANTS = ("e", "o", "+", "-")


def _alpha01(alpha01):
    if alpha01 is None:
        raise ValueError("this variant needs the first two recursion "
                         "coefficients of the source measure")
    if isinstance(alpha01, VerblunskyCoeffs):
        return alpha01.at(0), alpha01.at(1)
    # raw arrays continue with the same zero tail as VerblunskyCoeffs
    a0 = float(alpha01[0]) if len(alpha01) > 0 else 0.0
    a1 = float(alpha01[1]) if len(alpha01) > 1 else 0.0
    return a0, a1


def normalization_constants(alpha01):
    """(c, c_+, c_-) from alpha_0, alpha_1."""
    a0, a1 = _alpha01(alpha01)
    if not (-1.0 < a0 < 1.0 and -1.0 < a1 < 1.0):
        raise ValueError("recursion coefficients must lie in (-1, 1)")
    c = 1.0 / math.sqrt(2.0 * (1.0 - a0 * a0) * (1.0 - a1))
    cp = 1.0 / math.sqrt(2.0 * (1.0 - a0))
    cm = 1.0 / math.sqrt(2.0 * (1.0 + a0))
    return c, cp, cm


def weight_relation_factor(variant, x, alpha01=None):
    """Pointwise factor v(x)/w(theta(x)) of the chosen map."""
    x = np.asarray(x, dtype=float)
    if variant == "e":
        return 1.0 / (math.pi * np.sqrt(4.0 - x * x))
    c, cp, cm = normalization_constants(alpha01)
    if variant == "o":
        return (c * c / math.pi) * np.sqrt(4.0 - x * x)
    if variant == "+":
        return (cp * cp / math.pi) * np.sqrt((2.0 - x) / (2.0 + x))
    if variant == "-":
        return (cm * cm / math.pi) * np.sqrt((2.0 + x) / (2.0 - x))
    raise ValueError("unknown variant %r" % (variant,))


def szego_forward(mu, variant, alpha01=None):
    """Push a circle measure forward to [-2, 2].

    Parameters
    ----------
    mu : CircleMeasure on the midpoint grid
    variant : one of "e", "o", "+", "-"
    alpha01 : first two recursion coefficients of mu; required for
        variants o, +, - (they fix the normalization constants)
    """
    if variant not in VARIANTS:
        raise ValueError("unknown variant %r" % (variant,))
    G = mu.grid_size
    half = G // 2
    theta = mu.theta[:half]
    x = 2.0 * np.cos(theta)
    w_half = mu.w[:half]
    v = weight_relation_factor(variant, x, alpha01) * w_half
    return LineMeasure(x=x, v=v, variant=variant)


def szego_inverse(nu, variant):
    """Recover the even circle weight from a line measure in the range
    of the chosen map.

    The weight relation is inverted pointwise on the open grid (the
    endpoint Jacobian zeros are never sampled) and the result is
    normalized to a probability weight, which absorbs the squared
    constants.
    """
    if variant not in VARIANTS:
        raise ValueError("unknown variant %r" % (variant,))
    if nu.x is None:
        raise ValueError("line measure carries no samples")
    x = nu.x
    if variant == "e":
        w_half = nu.v * math.pi * np.sqrt(4.0 - x * x)
    elif variant == "o":
        w_half = nu.v * math.pi / np.sqrt(4.0 - x * x)
    elif variant == "+":
        w_half = nu.v * math.pi * np.sqrt((2.0 + x) / (2.0 - x))
    else:
        w_half = nu.v * math.pi * np.sqrt((2.0 - x) / (2.0 + x))
    w_full = np.concatenate((w_half, w_half[::-1]))   # even continuation
    return CircleMeasure.from_weight(w_full, normalize=True)


def m_values_from_alpha(alpha, variant):
    """Edge values (m(-2), -m(2)) of the Jacobi matrix built from alpha
    through the chosen map, in closed form:

        variant o:  -+ m(+-2) = 1 / ((1 -+ alpha_0)(1 - alpha_1))
        variant +:  -m(2) = 1 / (2 (1 - alpha_0)),  m(-2) infinite
        variant -:  m(-2) = 1 / (2 (1 + alpha_0)),  -m(2) infinite

    Returns (m_minus2, minus_m_plus2) with math.inf marking the
    divergent side. Variant e has both edges infinite and is rejected.
    """
    if variant == "e":
        raise ValueError("variant e has no finite edge values")
    if isinstance(alpha, VerblunskyCoeffs):
        a0, a1 = alpha.at(0), alpha.at(1)
    else:
        a0, a1 = _alpha01(alpha)
    if variant == "o":
        return (1.0 / ((1.0 + a0) * (1.0 - a1)),
                1.0 / ((1.0 - a0) * (1.0 - a1)))
    if variant == "+":
        return (math.inf, 1.0 / (2.0 * (1.0 - a0)))
    if variant == "-":
        return (1.0 / (2.0 * (1.0 + a0)), math.inf)
    raise ValueError("unknown variant %r" % (variant,))


def range_membership(J, method=METHOD_TAIL, tol=DEFAULT):
    """Which maps' ranges contain the spectral measure of J.

    variant e is always present; o needs both edge values finite;
    + needs -m(2) finite; - needs m(-2) finite.
    """
    lo = m_at_edge(J, -2.0, method=method, tol=tol)
    hi = m_at_edge(J, +2.0, method=method, tol=tol)
    members = {"e"}
    if lo.is_finite:
        members.add("-")
    if hi.is_finite:
        members.add("+")
    if lo.is_finite and hi.is_finite:
        members.add("o")
    return members
