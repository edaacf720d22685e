"""Homology-level algebra of self-maps of wedges and their self-closeness numbers."""

from .abelian import FgAbelianGroup, GroupHom, parse_group
from .blocks import Outcome, decide_k_reducibility
from .closeness import NscResult, nsc
from .spaces import SpaceModel, from_identifier, product, smash, suspension, wedge

__all__ = [
    "FgAbelianGroup",
    "GroupHom",
    "NscResult",
    "Outcome",
    "SpaceModel",
    "decide_k_reducibility",
    "from_identifier",
    "nsc",
    "parse_group",
    "product",
    "smash",
    "suspension",
    "wedge",
]
