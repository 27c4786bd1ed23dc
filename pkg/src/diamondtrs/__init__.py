"""Turing machines compiled to term rewriting systems, and checks of diamond-like
properties (local confluence, strong confluence, diamond, subcommutativity,
existence of successors, and any other shape) with honest three-valued verdicts.
"""

from .diamond import (
    NAMED_SHAPES,
    Counterexample,
    DiamondShape,
    Holds,
    ShapeLabel,
    check_shape_on_derived,
    check_shape_on_trs,
    joinable,
    parse_shape,
)
from .encode import RewriteTrace, compile_trs, decode_term, encode_config, simulation_trace
from .oracle import oracle_joinable
from .reach import (
    Budget,
    DerivedRelation,
    No,
    ReachSet,
    Unknown,
    Yes,
    derived_successors,
    reachable_terms,
    reaches_plus,
    terminates_via_trs,
)
from .terms import (
    App,
    Rule,
    Signature,
    Trs,
    Var,
    apply_substitution,
    format_term,
    match_pattern,
    one_step_successors,
    parse_term,
)
from .turing import Configuration, Cycled, Exceeded, Halted, TuringMachine, run, step, validate_machine

__all__ = [
    "App", "Budget", "Configuration", "Counterexample", "Cycled", "DerivedRelation", "DiamondShape",
    "Exceeded", "Halted", "Holds", "NAMED_SHAPES", "No", "ReachSet", "RewriteTrace", "Rule", "ShapeLabel",
    "Signature", "Trs", "TuringMachine", "Unknown", "Var", "Yes", "apply_substitution", "check_shape_on_derived",
    "check_shape_on_trs", "compile_trs", "decode_term", "derived_successors", "encode_config", "format_term",
    "joinable", "match_pattern", "one_step_successors", "oracle_joinable", "parse_shape", "parse_term",
    "reachable_terms", "reaches_plus", "run", "simulation_trace", "step", "terminates_via_trs",
    "validate_machine",
]
