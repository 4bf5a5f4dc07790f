"""Exact symbolic toolkit for cylinders over special Danielewski surfaces.

Builds and verifies explicit isomorphisms between the cylinder over a
special Danielewski surface and the cylinder over a classical surface
x*y = P(z), entirely in exact Q(i) arithmetic.
"""

from .errors import (
    CannotSeparateError,
    CapExceededError,
    DanielewskiError,
    DuplicateRootsError,
    GlobalizationError,
    NotDivisibleError,
    NotSimpleRootError,
    NotSquarefreeError,
    NotTriangularError,
    ParseError,
    PreconditionError,
    SingularSystemError,
)
from .gaussian import GaussianRational, gr
from .polynomials import (
    MultiPoly,
    XLaurent,
    div_exact_x_power,
    formal_derivative,
    substitute,
    substitute_poly,
    taylor_shift,
)
from .parser import parse_poly
from .interpolation import (
    BezoutData,
    HermiteSpec,
    bezout_pair,
    hensel_sections,
    hermite_interpolate,
    inverse_interpolants,
    lagrange,
    slice_interpolant,
)
from .surfaces import (
    Chart,
    ChartedSurface,
    Derivation,
    GlobalFunction,
    SurfaceSpec,
    canonical_lnd,
    check_overlap_consistency,
    make_abstract,
    make_classical,
    make_double_example,
    make_hypersurface,
    make_iterated_example,
    make_raw,
    separating_function,
    transition_map,
)
from .cylinders import (
    Cylinder,
    CylinderMap,
    IsoCertificate,
    PairWitness,
    TheoremWitness,
    build_cylinder_iso,
    build_slice,
    certify_cylinder_iso,
    classical_pair_iso,
    embedding_equations,
    extend_lnd,
    globalize,
    separating_quotients,
)
from .verification import (
    CheckReport,
    Report,
    Witness,
    check_locally_nilpotent,
    check_separation,
    check_slice_congruence,
    division_membership,
    ideal_membership,
    verify_inverse_pair,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
