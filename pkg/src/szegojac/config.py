"""Central numeric configuration.

Every tolerance and schedule used by the library lives here so that the
CLI overrides (--tol-*) have a single place to land and tests can state
which knob they exercise.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # edge limits m(+-2)
    tol_edge: float = 1e-7          # Cauchy threshold for the extrapolated edge limit
    edge_j_max: int = 40            # schedule E = +-(2 + 2^-j), j = 1..edge_j_max
    edge_levels: int = 14           # Richardson elimination depth
    edge_divergence: float = 1e6    # |m| beyond this while still growing => infinite
    edge_growth_span: int = 15      # trailing entries consulted by the divergence test
    edge_zero_rel: float = 1e-9     # |u_0| below this (relative) => infinite, tail method

    # roundtrips and identities
    tol_roundtrip: float = 1e-9
    tol_report: float = 1e-6

    # eigenvalue bookkeeping
    tol_eig: float = 1e-9
    eig_band: float = 1e-10         # margin around [-2,2] when hunting outside eigenvalues
    eig_M_schedule: tuple = (64, 128, 256)

    # truncation of commuted matrices back to a finite window
    truncation_threshold: float = 1e-14
    commute_max_extra: int = 200    # hard cap on window growth past the support

    # asymptotic integration
    window_K: int = 512
    fixed_point_tol: float = 1e-13
    fixed_point_max_iter: int = 200
    dichotomy_delta: float = 1e-3   # minimal eigenvalue-ratio separation accepted

    # grids
    grid_size: int = 4096           # power of two; midpoint samples theta_j = 2pi(j+1/2)/G


DEFAULT = Tolerances()


def with_overrides(base=DEFAULT, **kwargs):
    """Return a copy of `base` with the given fields replaced."""
    return replace(base, **kwargs)
