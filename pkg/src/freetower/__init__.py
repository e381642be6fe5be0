"""Free-group computations behind hyperbolic towers and forking certificates."""
from .errors import InvalidFloorError, MalformedInputError
from .forking import b_word, fork_witness, normalize_for_witness, weight_witness
from .morphisms import FreeMap, apply, compose, is_primitive, verify_inverse_pair, whitehead_minimize
from .presentations import Presentation, map_relator_check, verify_isomorphism
from .stallings import contains, core_graph, generates_ambient, subgroup_rank
from .towers import (
    build_Gn,
    build_Gn_tilde,
    glue_four_punctured_sphere,
    glue_once_punctured_torus,
    surface,
    validate_floor,
)
from .whitehead import build, cut_vertices, separability_obstruction
from .words import CyclicWord, Word, commutator, commute, cyclic_reduce, multiply, parse_word, reduce

__version__ = "0.1.0"
