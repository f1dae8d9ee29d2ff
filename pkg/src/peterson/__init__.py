"""Exact structure constants of equivariant Peterson Schubert calculus."""

from .errors import CartanError, InvariantError, UnsupportedError
from .eulerian import mixed_eulerian, volume_polynomial, w_over_det
from .operators import chain_apply, generator_matrix, structure_constants_c, to_peterson_level
from .rootsys import CartanMatrix, build_cartan, rootsystem

__all__ = [
    "CartanError", "InvariantError", "UnsupportedError",
    "CartanMatrix", "build_cartan", "rootsystem",
    "chain_apply", "generator_matrix", "structure_constants_c", "to_peterson_level",
    "mixed_eulerian", "volume_polynomial", "w_over_det",
]
