"""Numerical toolkit for Gamma-contractions and their Gamma-unitary dilations.

A Gamma-contraction is a commuting pair (S, P) of matrices having the
symmetrized bidisk as a spectral set. The package solves for the fundamental
operators of such a pair, assembles a truncated Gamma-unitary dilation, checks
the relevant operator identities, and models the pair (z1 + z2, z1 z2) on a
truncated Hardy space of the bidisk.
"""

from ._config import Tolerances, config_context, get_config, set_config
from .dilation import (
    JointSpectrum,
    SemiInvariance,
    TruncatedDilation,
    build_dilation,
    check_semi_invariance,
    gamma_unitary_residuals,
    joint_spectrum,
    minimality_span,
    verify_dilation_identity,
    verify_gamma_isometry,
    verify_gamma_unitary,
)
from .exceptions import *  # noqa: F403
from .gamma import (
    BivariatePolynomial,
    FundamentalSolution,
    GammaPair,
    IDENTITY_NAMES,
    check_von_neumann,
    identity_suite,
    point_in_bgamma,
    point_in_gamma,
    power_sum,
    probe_polynomials,
    quadratic_roots,
    solve_fundamental,
    solve_fundamental_adjoint,
    symmetrize,
)
from .linalg import (
    Defect,
    EigenDecomposition,
    defect,
    hermitian_eig,
    numerical_radius,
    opnorm,
    pinv_apply,
    psd_sqrt,
    range_basis,
)
from .rng import XorShiftStar

__version__ = "0.1.0"
