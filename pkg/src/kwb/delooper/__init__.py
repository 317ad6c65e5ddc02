"""Derived K-theory functors on homotopy groups.

A *source* serves groups ``pi_i E(X)`` for expressions ``X`` (a base with
adjoined variables) together with the structure maps between them; the
functions here derive NK groups, the fundamental sequence, the
Bass-Heller-Swan comparison, contractedness, the delooping tower, twisted and
Nil bookkeeping, and homotopy K-theory from that data alone.
"""

from .checks import (
    BHSReport,
    ContractedReport,
    FundamentalSequence,
    NKReport,
    bass_complement_agrees,
    bhs_check,
    contracted_check,
    fundamental_sequence,
    group_dict,
    group_text,
    nk,
)
from .derived import (
    BassStep,
    DeloopedSource,
    NegativeKResult,
    NegativeKSource,
    RecordingSource,
    bass_step,
    negative_k,
    nk_data,
    restricted_bhs,
    structure_map_s,
)
from .expression import Adjunction, Expression, format_chain, parse_chain, target_expression
from .homotopy import RingDiagram, eventually_constant, filtered_colimit_check, identity_hom, kh_groups
from .shadows import FunctorShadow, functor_shadows
from .sources import (
    AutoSource,
    BHSModelSource,
    EngineSource,
    KSource,
    RebasedSource,
    SourceGap,
    bhs_extended_source,
)
from .tower import TowerReport, shadow_tower
from .twisted import TorusPieces, mapping_torus_pi, nil_decomposition_check, twisted_bhs_check

__all__ = [
    "Adjunction", "AutoSource", "BHSModelSource", "BHSReport", "BassStep", "ContractedReport",
    "DeloopedSource", "EngineSource", "Expression", "FunctorShadow", "FundamentalSequence", "KSource",
    "NKReport", "NegativeKResult", "NegativeKSource", "RebasedSource", "RecordingSource", "RingDiagram",
    "SourceGap", "TorusPieces", "TowerReport", "bass_complement_agrees", "bass_step", "bhs_check",
    "bhs_extended_source", "contracted_check", "eventually_constant", "filtered_colimit_check",
    "format_chain", "functor_shadows", "fundamental_sequence", "group_dict", "group_text",
    "identity_hom", "kh_groups", "mapping_torus_pi", "negative_k", "nil_decomposition_check", "nk",
    "nk_data", "parse_chain", "restricted_bhs", "shadow_tower", "structure_map_s", "target_expression",
    "twisted_bhs_check",
]
