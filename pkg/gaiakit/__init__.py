"""
gaiakit - computational category theory for generative AI models

Finite categories and functors, truncated simplicial sets with horn filling
and lifting problems, compositional learners with backpropagation as a
functor, coalgebras with bisimulation, data migration over categories of
elements, generalized metric spaces, and integer homology.

Every structure is finite and explicit: categories carry their full
composition tables, simplicial sets are truncated at a dimension bound and
all decision procedures are exhaustive searches under a node budget
(``settings.budget``, env ``GAIA_KIT_BUDGET``).

    from gaiakit import chain_category, nerve, homology

    x = nerve(chain_category(2))
    print(homology(x).betti)
"""

from gaiakit.coalgebra import Coalgebra, EndofunctorSpec, greatest_bisimulation
from gaiakit.elements import SetInstance, category_of_elements
from gaiakit.errors import (
    ArityError,
    CapacityError,
    FormatError,
    GaiaKitError,
    NonContractionError,
    StructuralError,
    ValidationError,
)
from gaiakit.fincat import FinCategory, FinFunctor, chain_category, validate_category
from gaiakit.genmetric import GenMetricSpace, build_space, check_isometry
from gaiakit.homology import ChainComplex, HomologyResult, homology
from gaiakit.learn import Learner, ParamFn, backprop_functor, compose_seq
from gaiakit.lifting import solve_lifting
from gaiakit.schemas import ValidationReport
from gaiakit.simplicial import SimplicialSet, nerve

__version__ = "0.1.0"

__all__ = [
    # Categories
    "FinCategory",
    "FinFunctor",
    "chain_category",
    "validate_category",
    "ValidationReport",
    # Simplicial sets
    "SimplicialSet",
    "nerve",
    "solve_lifting",
    "ChainComplex",
    "HomologyResult",
    "homology",
    # Data
    "SetInstance",
    "category_of_elements",
    # Learners
    "Learner",
    "ParamFn",
    "backprop_functor",
    "compose_seq",
    # Coalgebras and metrics
    "Coalgebra",
    "EndofunctorSpec",
    "greatest_bisimulation",
    "GenMetricSpace",
    "build_space",
    "check_isometry",
    # Errors
    "GaiaKitError",
    "StructuralError",
    "ValidationError",
    "ArityError",
    "CapacityError",
    "NonContractionError",
    "FormatError",
]
