"""Belief structures over finite state spaces, checked with exact arithmetic.

Accessibility relations and information structures, doxastic blindspots,
group information, the sure-thing principle and agreement, belief operators
and their axioms, credal sets, and the belief structures induced by types in
strategic games.
"""

from doxa.beliefs import AxiomReport, CredalSet, audit_axioms, believes, check_axiom_correspondence, check_b1
from doxa.decisions import (
    AgreementResult,
    GSTPResult,
    Posterior,
    Table,
    agreement_check,
    evaluate,
    satisfies_gstp,
    uniform_prior,
)
from doxa.errors import (
    CapExceeded,
    DoxaError,
    EvaluationError,
    GenerationExhausted,
    InvalidBlindspotSet,
    ParseError,
    SizeLimit,
    UndefinedAt,
    UnknownPlayer,
    UnknownProfile,
    UnknownState,
    ValidationError,
    ZeroProbabilityConditioning,
)
from doxa.frames import (
    Event,
    InfoStructure,
    Relation,
    StateSpace,
    blindspots,
    check_relation_properties,
    check_structure_properties,
    image,
    info_from_relation,
    is_divisible,
    is_partitional,
    relation_from_info,
    verify_frame_theorems,
)
from doxa.games import (
    EpistemicExtension,
    StrategicGame,
    accessibility_degree,
    check_c1,
    relation_from_types,
    verify_extension_theorem,
)
from doxa.group import Chain, Profile, find_chain, group_info, group_relation, is_common_information
from doxa.report import Check, Report, Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "CredalSet",
    "audit_axioms",
    "believes",
    "check_axiom_correspondence",
    "check_b1",
    "AgreementResult",
    "GSTPResult",
    "Posterior",
    "Table",
    "agreement_check",
    "evaluate",
    "satisfies_gstp",
    "uniform_prior",
    "CapExceeded",
    "DoxaError",
    "EvaluationError",
    "GenerationExhausted",
    "InvalidBlindspotSet",
    "ParseError",
    "SizeLimit",
    "UndefinedAt",
    "UnknownPlayer",
    "UnknownProfile",
    "UnknownState",
    "ValidationError",
    "ZeroProbabilityConditioning",
    "Event",
    "InfoStructure",
    "Relation",
    "StateSpace",
    "blindspots",
    "check_relation_properties",
    "check_structure_properties",
    "image",
    "info_from_relation",
    "is_divisible",
    "is_partitional",
    "relation_from_info",
    "verify_frame_theorems",
    "EpistemicExtension",
    "StrategicGame",
    "accessibility_degree",
    "check_c1",
    "relation_from_types",
    "verify_extension_theorem",
    "Chain",
    "Profile",
    "find_chain",
    "group_info",
    "group_relation",
    "is_common_information",
    "Check",
    "Report",
    "Status",
    "Verdict",
]
