"""K-theory workbench: Bass-Heller-Swan, negative K-groups, the delooping
tower and homotopy K-theory, computed on homotopy groups."""

from . import abgroup, addcat, delooper, kengine, oracle, rings
from .abgroup import FgAbGroup, GroupHom
from .delooper import Expression, KSource, SourceGap
from .kengine import k_value
from .oracle import load
from .rings import parse_ring

__version__ = "0.1.0"

__all__ = [
    "FgAbGroup",
    "GroupHom",
    "Expression",
    "KSource",
    "SourceGap",
    "abgroup",
    "addcat",
    "delooper",
    "k_value",
    "kengine",
    "load",
    "oracle",
    "parse_ring",
    "rings",
]
