"""Gap function and torsional performance of partially hinged rectangular plates.

The plate ``(0, pi) x (-ell, ell)`` is hinged on ``x = 0, pi`` and free on
``y = +-ell``. The package builds closed-form series solutions of
``Delta^2 u = f``, the gap ``u(x, ell) - u(x, -ell)`` and its maximum, the
torsional eigenpairs, and the asymptotic limits, plus independent
finite-difference and sign-scan oracles to check them.
"""
__version__ = "0.1.0"

from .asymptotics import (AlphaSweep, e_of_ell, e_of_ell_alpha, first_order_correction,
                          sweep_alpha, weak_limit_residual)
from .core import PlateGeometry, ScaledHyperbolic, alpha_coth, stable_ratio
from .eigen import (Branch, ComboResult, ComboSpec, EigenGapEntry, EigenTable, ScalingReport,
                    TorsionalMode, branch_classifier, characteristic_residual, combo_max_gap,
                    critical_s, eigen_bracket, eigen_gap_table, eigenfunction_profile,
                    gap_constant, l1_norm, scaling_exponent_check, torsional_eigenvalue)
from .errors import (AdmissibilityError, BracketError, DegenerateConfigurationError,
                     GeometryError, PlateError, PoleError, QuadratureError, SingularSystemError)
from .oracle import ResidualReport, biharmonic_residual, bracket_scan, simplex_grid_max
from .quadrature import adaptive_simpson, quadrature
from .series import (GapProfile, LoadSpec, ModeCoefficients, PlateSolution, closed_form_m1,
                     fourier_coefficients, gap_profile, make_load, solve_exponential_load,
                     solve_mode_coefficients, solve_plate)
