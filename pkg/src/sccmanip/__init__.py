"""Exhaustive manipulability checks for social choice correspondences.

Alternatives are ``1..n``; orders are tuples listed best first; profiles are
tuples of orders, one per individual.
"""

from sccmanip.axioms import AxiomReport, check_exclusions, check_sm, check_unanimity, check_us, check_wsm
from sccmanip.errors import BoundError, ConfigError, InputError, ParseError, SccManipError
from sccmanip.extension import Extension, compare, parse_extension, strictly_prefers, succeq
from sccmanip.info import COMPLETE, ZERO, InfoSpec, at_least_as_informative, info_sets, parse_info, winner_info
from sccmanip.manip import (
    Witness,
    check_transfer_propositions,
    is_E_manipulable,
    is_Omega_E_manipulable,
    verify_witness,
)
from sccmanip.prefs import (
    apply_transposition,
    enumerate_orders,
    enumerate_partial_profiles,
    format_profile,
    parse_profile,
    rank,
)
from sccmanip.scc import (
    BORDA,
    COPELAND,
    NEGATIVE_PLURALITY,
    PLURALITY,
    SccRule,
    copeland_score,
    image,
    is_unanimous_rule,
    majority,
    parse_rule,
    positional,
    positional_score,
    winners,
)
from sccmanip.verdict import Stats, Verdict

__all__ = [
    "AxiomReport",
    "BORDA",
    "BoundError",
    "COMPLETE",
    "COPELAND",
    "ConfigError",
    "Extension",
    "InfoSpec",
    "InputError",
    "NEGATIVE_PLURALITY",
    "PLURALITY",
    "ParseError",
    "SccManipError",
    "SccRule",
    "Stats",
    "Verdict",
    "Witness",
    "ZERO",
    "apply_transposition",
    "at_least_as_informative",
    "check_exclusions",
    "check_sm",
    "check_transfer_propositions",
    "check_unanimity",
    "check_us",
    "check_wsm",
    "compare",
    "copeland_score",
    "enumerate_orders",
    "enumerate_partial_profiles",
    "format_profile",
    "image",
    "info_sets",
    "is_E_manipulable",
    "is_Omega_E_manipulable",
    "is_unanimous_rule",
    "majority",
    "parse_extension",
    "parse_info",
    "parse_profile",
    "parse_rule",
    "positional",
    "positional_score",
    "rank",
    "strictly_prefers",
    "succeq",
    "verify_witness",
    "winner_info",
    "winners",
]

__version__ = "0.1.0"
