"""Exact algebra for contact Lie algebras of Cartan type K, Jordanian twists
and their characteristic-0 and modular quantizations."""

__version__ = "0.1.0"

from .cartank import KElement, LieAlgebra, k_bracket, k_basis_modular
from .twists import TwistSpec, product_spec, catalog

__all__ = ["KElement", "LieAlgebra", "k_bracket", "k_basis_modular", "TwistSpec", "product_spec", "catalog"]
