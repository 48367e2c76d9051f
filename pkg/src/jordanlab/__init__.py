"""Coherent configurations, Jordan schemes and RA loops at desk scale."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .relations import Relation, transpose, relational_product, jordan_union_product
from .rainbow import (
    ColorMatrix,
    ExactMatrix,
    canonical,
    classify_rainbow,
    combinatorial_isomorphism,
    discrete_rainbow,
    is_fusion_of,
    rainbow_from_labels,
    standard_basis,
    thin_rainbow,
    trivial_rainbow,
    validate_rainbow,
)
from .closures import ClosureKind, closure, refine_step, wl_closure_of_permutation_set
from .cayley import CayleyTable, loop_from_table, cyclic_group, abelian_group
from .schemes import (
    SchemeRecord,
    analyze,
    construct_jcal,
    intersection_numbers,
    is_jordan_scheme,
    is_proper_js,
    jordan_triple_check,
    ratio_report,
    recognize_nonregular_thin,
    symmetrization_membership_check,
    symmetrize,
)
from .loops import (
    construct_LGg,
    diamond_from_scheme,
    is_ra_loop,
    loop_properties,
    scheme_from_loop,
    star_involution,
    translations,
)
from .algmaps import (
    algebraic_fusion,
    autonomy_thin_regular,
    brute_force_autonomy,
    enumerate_subgroups,
    fusion_search,
    jaut_enumerate,
    semiregular_two_orbit_config,
)
from .fileformats import parse_loop_file, parse_scheme_file, serialize_loop, serialize_scheme
