"""Discrete prolate spheroidal sequences and wave functions.

Spectra by two independent routes (Toeplitz eigendecomposition and Slepian's
commuting tridiagonal matrix), sinc-kernel eigenvalues by the Nystrom method,
machine verification of the closed-form bounds relating the two, and spectral
approximation in the wave-function bases.
"""

from .approximation import (ProjectionResult, SobolevSpec, TestFunction,
                            dilated_gram, project_dilated, project_native,
                            sobolev_norm, weierstrass)
from .bounds import (BoundCheck, BoundReport, SpectrumComparison,
                     asymptotic_decay_constants, comparison_constant,
                     compare_spectra, concentration_inequality_constant,
                     eigenvalue_tail_bound, plunge_count_bound,
                     plunge_count_bound_coarse, plunge_count_estimate,
                     plunge_decay_rate, plunge_mass,
                     superexponential_decay_bound, verify_all,
                     verify_comparison)
from .config import (RunConfig, Tolerances, TOL, install_tolerances,
                     load_config)
from .continuous import (ContinuousSpectrum, PlungeIndex, default_order,
                         eigenspace_bound, hs_lower_bound, hs_norm_sq,
                         kernel_hs_distance, kernel_hs_distance_bound,
                         nystrom_spectrum, plunge_index, projector_distance)
from .discrete import (DiscreteParams, DiscreteSpectrum, commutation_defect,
                       commuting_tridiagonal, concentration, dpswf,
                       dpswf_matrix, extend_dpss, prolate_matrix, spectrum,
                       symmetry_defect)
from .numkit import (EigenSystem, IllConditionedError, NumericalFailure,
                     QuadratureRule, SymTridiag, eig_sym, eig_symtridiag,
                     gauss_legendre, snapped_floor, spectral_norm_sym)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
