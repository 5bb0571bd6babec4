"""Geometric coding trees, lifted tiles and equivalence graphs for rational maps."""
from .cod_space import RadialClass, canonical_form, cod_equal
from .coding_tree import Radial, SymbolSequence, extend_tree, pi_eval
from .complex_geom import Curve, GaussRational, crossing_word
from .eq_graph import build_eq_graph, dihedral_group, multiplicity_classify, relation_decide
from .errors import DomainError
from .lifted_ifs import attractor_raster, lift_radial_class, measure_estimate
from .rational_maps import from_token

__all__ = [
    "Curve", "DomainError", "GaussRational", "Radial", "RadialClass", "SymbolSequence",
    "attractor_raster", "build_eq_graph", "canonical_form", "cod_equal", "crossing_word",
    "dihedral_group", "extend_tree", "from_token", "lift_radial_class", "measure_estimate",
    "multiplicity_classify", "pi_eval", "relation_decide",
]
__version__ = "0.1.0"
