"""Symmetric tensors of smooth complete toric varieties and hypertoric
central fibers, computed with exact integer and rational arithmetic."""
from .classical import (
    determinantal_coordinates,
    determinantal_membership,
    determinantal_monomials,
    nu_eval_blowup,
    sample_zero_fiber,
    springer_eval_pn,
    springer_preimage,
)
from .coxring import GradedPresentation, PresentationKind, cox_presentation
from .estimators import HypertoricGIT, SymmetricTensorAlgebra
from .exceptions import InputError, NotFittedError, PreconditionError
from .fan import (
    ExactSequenceData,
    Fan,
    SignedRayPairing,
    blowup_projective_space,
    build_exact_sequence,
    hirzebruch,
    product_p1_p1,
    projective_space,
    select_sigma1,
    validate_fan,
)
from .hypertoric import (
    HypertoricProblem,
    PhasePoint,
    SupportPattern,
    blowup_weight_matrix,
    central_fiber_components,
    hypertoric_report,
    is_generic,
    is_semistable,
    is_unimodular,
)
from .lattice import hermite_normal_form, integer_kernel, smith_normal_form
from .library import example_names, get_example
from .tensors import (
    InvariantMonomial,
    bigness_growth_report,
    generator_report,
    graded_dims,
    presentations_agree,
)

__version__ = "0.1.0"
