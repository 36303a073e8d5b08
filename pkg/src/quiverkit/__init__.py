"""Exact computations with finite-dimensional quiver representations."""

from .linalg import Field, LinalgError
from .quiver import Morphism, Quiver, QuiverError, Rep, direct_sum, dual_rep, euler_form, random_rep
from .homext import ext_dim, hom_basis, hom_dim, is_exceptional
from .decomp import decompose, end_dim, find_isomorphism, is_indecomposable, is_isomorphic
from .reflect import coxeter, coxeter_power, reflect_sink, reflect_source
from .kronecker import classify_q2, preinjective, preprojective, std_kronecker
from .covering import build_cover, lift_preprojective, lift_sequence, push_down
from .schofield import schofield_pairs
from .treebasis import exceptional_tree_basis, validate_certificate
from .repfile import parse, serialize

__all__ = [
    "Field", "LinalgError", "Morphism", "Quiver", "QuiverError", "Rep", "direct_sum", "dual_rep",
    "euler_form", "random_rep", "ext_dim", "hom_basis", "hom_dim", "is_exceptional", "decompose",
    "end_dim", "find_isomorphism", "is_indecomposable", "is_isomorphic", "coxeter", "coxeter_power",
    "reflect_sink", "reflect_source", "classify_q2", "preinjective", "preprojective", "std_kronecker",
    "build_cover", "lift_preprojective", "lift_sequence", "push_down", "schofield_pairs",
    "exceptional_tree_basis", "validate_certificate", "parse", "serialize",
]
