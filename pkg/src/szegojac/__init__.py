"""Szego-type correspondence toolkit for Jacobi matrices.

Finite-support Jacobi matrices, their m-functions and edge behavior,
the four circle-to-interval measure maps with their coefficient
relations in both directions, eigenvalue surgery by double commutation,
asymptotic solution families (hyperbolic and band-edge), and the
end-to-end checkers tying them together.
"""

from .config import DEFAULT, Tolerances, with_overrides
from .sequences import (FourierCoeffs, RealSequence, log_weight_fourier,
                        midpoint_theta_grid, partial_sobolev_norms,
                        samples_from_fourier, sobolev_half_norm,
                        tail_sums, weighted_norm)
from .measures import CircleMeasure, LineMeasure, line_grid
from .jacobi import (EdgeValue, JacobiMatrix, WeylSolution, beta_from_z,
                     eigenvalue_refine, eigenvalues_outside,
                     jost_solution, m_at_edge, m_function, poly_table,
                     recurrence_solve, spectral_quadrature,
                     weight_samples, weyl_solution)
from .opuc import (VerblunskyCoeffs, measure_from_verblunsky,
                   szego_recursion, verblunsky_from_moments,
                   weight_from_verblunsky)
from .szego_maps import (VARIANTS, m_values_from_alpha,
                         normalization_constants, range_membership,
                         szego_forward, szego_inverse,
                         weight_relation_factor)
from .geronimus import (InverseResult, RatioSeqs, direct_geronimus,
                        inverse_geronimus, ratio_sequences)
from .commutation import (CommutationResult, commuted_m,
                          double_commute_add, double_commute_remove,
                          phi_solution)
from .asymptotics import (DiagonalSystem, LevinsonSolution,
                          SolutionFamily, diagonalized_solve,
                          edge_solutions, geometric_convolution,
                          harris_lutz_Q, hl_residual,
                          hyperbolic_solutions, levinson_solve,
                          recurrence_residuals, tail_products)
from .checker import (CheckReport, check_1_to_2, check_2_to_1,
                      summability_report)

__version__ = "0.1.0"
