"""Robin Laplacian eigenvalues on domains with power-type peaks.

Computes eigenvalues of the effective 1-D radial operator, solves the 2-D
Robin eigenproblem on finite peak domains by P1 finite elements with
shift-invert Lanczos, and cross-validates the predicted power law
lambda_j ~ A_omega^(2/(2-q)) lambda_j(L_1) alpha^(2/(2-q)) together with the
localization of eigenfunctions at the peak tip.
"""

from .geometry import (CrossSection, PeakGeometry, TheoryConstants, exponents,
                       hardy_constant, predicted_coefficient, ratio_A)
from .spectrum import Spectrum
from .sturm1d import (EffectiveOperatorSpec, Grid1D, LadderResult,
                      TridiagonalPencil, assemble_effective, build_grid,
                      eigs_tridiagonal, lambda_L1, negative_count,
                      scaling_check, tip_grading)
from .xsection import robin_interval_eigs, robin_rectangle_eig1
from .mesh2d import (Mesh2D, build_peak_mesh, build_rectangle_mesh, refine,
                     DIRICHLET, NEUMANN, ROBIN)
from .femrobin import SymmetricPencil, assemble, rayleigh
from .eigsolve import (BlockLDLT, dense_eigs, estimate_shift, inertia_count,
                       smallest_eigs)
from .experiments import (AgmonReport, AsymptoticFit, SweepResult,
                          agmon_ratio, default_alpha_ladder, fit_power_law,
                          isoperimetric_compare, neumann_window,
                          pullback_check, sweep_alpha)

__version__ = "0.1.0"
