"""Numerical toolkit for flat-torus determinants and their holomorphic extensions.

Modules
-------
special_functions   branch-managed logs and the Dedekind eta function
torus_spectral      flat-torus spectrum, heat trace, zeta-regularized determinant
potential_builder   cone-integrated holomorphic potentials of closed (2,0)-forms
extension           symmetrization, pluriharmonic splitting, assembled extensions
polarization        reconstruction of holomorphic functions from diagonal samples
catalog             serializable form catalog used by the CLI
verify              one-shot verification suite behind ``holodet verify-all``
"""

from .errors import (
    BranchPathError,
    BudgetError,
    DomainError,
    FitRankError,
    HolodetError,
    NotPluriharmonicError,
    QuadratureError,
)
from .extension import (
    ExtensionRecipe,
    ProductPoint,
    assemble_extension,
    genus1_extension,
    genus1_recipe,
    modular_invariance_check,
    pluriharmonic_split,
    symmetrize,
    symmetrized_evaluator,
    wp_form_genus1,
)
from .polarization import (
    DiagonalSampleSet,
    PolarizedPolynomial,
    polarize_fit,
    uniqueness_residual,
)
from .potential_builder import (
    ClosedHoloForm,
    ConeQuadrature,
    ProductDomain,
    check_closed_and_holomorphic,
    cone_potential,
    verify_boundary_vanishing,
    verify_mixed_derivative,
)
from .special_functions import (
    BranchedLog,
    canonical_modulus,
    continue_log,
    eta,
    half_power,
    log_eta,
    modular_discriminant,
)
from .torus_spectral import (
    SpectralDetResult,
    SpectralTruncation,
    TorusSpectrum,
    closed_form_log_det,
    heat_trace,
    torus_eigenvalues,
    zeta_log_det,
)

__version__ = "0.1.0"
