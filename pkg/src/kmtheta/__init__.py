"""Indefinite theta functions of signature (n-2, 2) lattices built from a Schwartz 2-form on negative planes."""
from .errfn import arctan_limit, e1, e2, e2_boosted, e2_flat, m1, tilde_e2
from .errors import (AccuracyError, DegenerateFormError, IncidenceError, InputError, NotNegativePlaneError,
                     NullVectorError, RegularityError, SingularLocusError)
from .estimator import SurfaceIntegralTransformer
from .fixtures import canonical_fixture, rank3_fixture
from .geometry import FrameConfig, HypercubeChart, SurfaceChart, surface_integral_phi, validate_incidence
from .lattice import Coset, EvenLattice, discriminant_group, enumerate_coset, majorant_on_S
from .quadspace import InnerProductSpace
from .theta import (TauPoint, closed_form_I, completed_theta, holomorphic_part, phi_r_series, shadow_boundary,
                    shadow_fd, verify_S, verify_T)

__all__ = [
    "AccuracyError", "Coset", "DegenerateFormError", "EvenLattice", "FrameConfig", "HypercubeChart",
    "IncidenceError", "InnerProductSpace", "InputError", "NotNegativePlaneError", "NullVectorError",
    "RegularityError", "SingularLocusError", "SurfaceChart", "SurfaceIntegralTransformer", "TauPoint",
    "arctan_limit", "canonical_fixture", "closed_form_I", "completed_theta", "discriminant_group", "e1", "e2",
    "e2_boosted", "e2_flat", "enumerate_coset", "holomorphic_part", "m1", "majorant_on_S", "phi_r_series",
    "rank3_fixture", "shadow_boundary", "shadow_fd", "surface_integral_phi", "tilde_e2", "validate_incidence",
    "verify_S", "verify_T",
]
