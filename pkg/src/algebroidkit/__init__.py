"""Exact Cartan calculus, divergences and modular classes on Lie algebroids."""

from .coeffring import PolyRing, Poly, RatFunc, parse_expr, partial
from .exterior import Form, Multivector, OddVolume, wedge, contract_form, contract_multi, pair
from .algebroid import (
    LieAlgebroid,
    validate_algebroid,
    bracket_sections,
    anchor_apply,
    schouten,
    tangent_algebroid,
    lie_algebra,
    change_frame,
)
from .calculus import (
    Divergence,
    de_rham,
    lie_derivative_form,
    divergence_from_odd_volume,
    generating_from_divergence,
    generating_from_odd_volume,
    witten_differential,
    deformed_generating,
    check_cocycle,
)
from .metricconn import (
    FiberMetric,
    Connection,
    levi_civita,
    curvature,
    curvature_identity_check,
    divergence_from_connection,
    divergence_from_metric_volume,
)
from .homology import build_cochain, build_chain, betti, duality_check, homology_independence
from .modular import (
    Morphism,
    validate_morphism,
    modular_representative,
    modular_via_divergences,
    modular_via_lie_derivatives,
    modular_of_morphism,
    composition_check,
    exactness,
)
from .poisson import PoissonBivector, cotangent_algebroid, jacobi_residual, poisson_modular_form
from .io import load_algebroid, load_bivector, load_definition, dumps_algebroid, dumps_bivector

__version__ = "0.1.0"
