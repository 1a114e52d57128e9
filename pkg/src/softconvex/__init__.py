"""Finite soft convex structures: soft-set algebra, hulls, operators, bases and soft maps."""

from .bases import SoftConvexBase, structure_from_cbase, validate_cbase
from .convexity import (
    CrispConvexStructure,
    SoftConvexStructure,
    ValidationReport,
    Witness,
    close_to_structure,
    crisp_hull,
    hull,
    induced_from_crisp,
    is_concave,
    pointwise_hull,
    slice_structure,
    validate_crisp,
    validate_structure,
)
from .core import (
    SoftFamily,
    SoftSet,
    Space,
    complement,
    difference,
    family_intersection,
    family_union,
    intersect,
    is_downward_directed,
    is_subset,
    is_upward_directed,
    make_soft_set,
    union,
)
from .errors import (
    BudgetExceeded,
    InvalidBase,
    InvalidOperator,
    InvalidStructure,
    MissingParameter,
    SoftConvexError,
    SpaceMismatch,
    TableIncomplete,
    UnknownElement,
    UnknownParameter,
)
from .morphisms import (
    SoftFunctionMap,
    check_scc_equivalence,
    check_scp_equivalence,
    compose,
    image,
    is_sbp,
    is_scc,
    is_scp,
    is_sdp,
    preimage,
)
from .operators import (
    OperatorTable,
    hull_from_cderived,
    structure_from_cderived,
    structure_from_hull_operator,
    tabulate_hull,
    validate_cderived_operator,
    validate_hull_operator,
)

__version__ = "0.1.0"
