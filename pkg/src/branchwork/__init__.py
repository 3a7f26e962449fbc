"""Exact computations in the spinal groups ``K_r`` and the growing-valency
group ``G`` acting on rooted trees."""

from .f2 import F2Vector, BudgetExceeded, ZERO, ONES, basis, bar_basis, f2_add, translate_bar
from .tower import TowerInt, TowerRange, f_value, tetr, slog, thm1_bound_u
from .engine import (
    DIRECTED,
    Word,
    VertexPath,
    Portrait,
    normalize,
    identity,
    directed,
    rooted,
    act,
    section,
    inverse,
    commutator,
    conjugate,
    power,
    first_layer_translation,
    active_vertices,
    is_trivial,
    equal,
    portrait,
    fingerprint,
    syllable_length_upper,
)
from .groups import GroupSpec, Kr, Growing, directed_section_rule, enumeration_index, enumeration_vector, make_generators

__version__ = "0.1.0"
