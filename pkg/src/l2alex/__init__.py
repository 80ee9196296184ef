"""L²-Alexander invariants of knots via Fox calculus and Fuglede–Kadison determinants."""
from .groups import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Generator,
    GroupModel,
    Presentation,
    RewrittenModel,
    TorusKnotGroup,
    Word,
    reduce_free,
    trefoil_model,
)
from .dsl import parse_presentation, parse_word
from .ring import PhiGrading, RingElement, RingMatrix, apply_eta, apply_phi_rho, apply_psi, trace
from .fox import LaurentPoly, classical_alexander, fox_derive, fox_matrix
from .knots import KnotSpec, knot_input, parse_knot_spec, phi_from_abelianization, torus_presentation
from .fk import DetEstimate, det_mahler, det_trace_series, det_truncation, fk_determinant
from .alexander import (
    AlexResult,
    l2_alexander,
    l2_alexander_torus,
    simplified_delta_prime,
    torsion_from_alexander,
)
from .weighted import ChainComplexW, restriction_check, weighted_betti, weighted_torsion_z

__version__ = "0.1.0"
