"""Exact cochain calculus for inflation-style transfer maps on finite group towers,
with compatible Tate-style cocycle families, finite gerbe levels and a worked
definite SL2 example over Q(sqrt 3)."""

from .cochains import Cochain, CochainError, differential, is_cocycle, normalize
from .groups import FiniteGroup, GroupError, GSet, make_group, quotient, small_groups
from .modules import GModule, induced_module, trivial_module
from .numfield import ExampleFields, FieldElement, NumberField
from .reports import Check, Report
from .tower import Tower, TowerError, preset, random_tower, tower_from_config

__version__ = "0.1.0"
__all__ = [
    "Check", "Cochain", "CochainError", "ExampleFields", "FieldElement", "FiniteGroup",
    "GModule", "GSet", "GroupError", "NumberField", "Report", "Tower", "TowerError",
    "differential", "induced_module", "is_cocycle", "make_group", "normalize", "preset",
    "quotient", "random_tower", "small_groups", "tower_from_config", "trivial_module",
]
