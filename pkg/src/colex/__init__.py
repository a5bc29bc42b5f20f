"""Co-lex orders on finite automata, their width, and an index built on the
automaton transform they induce."""

from .abwt import Abwt, abwt_of_dfa, build_abwt, invert_abwt_dfa, invert_abwt_nfa
from .automaton import Automaton, canonical, isomorphic, minimize, parse, serialize
from .errors import (
    AlphabetMismatchError,
    AxiomViolationError,
    BudgetError,
    CapExceededError,
    ColexError,
    EmptyLanguageError,
    FormatError,
    InversionError,
    NotDeterministicError,
    NotMinimumError,
)
from .index import Index, SearchState, build_index
from .langwidth import (
    WitnessCertificate,
    decide_width_leq,
    find_width_witness,
    language_width_bounds,
    replay_certificate,
)
from .order import (
    ChainPartition,
    PartialOrder,
    brute_force_nfa_width,
    chain_partition,
    check_colex_axioms,
    compute_max_colex_order,
    dfa_width,
    maximal_colex_order,
)
from .powerset import check_powerset_bounds, nfa_equivalent, nfa_membership, powerset_construct

__version__ = "0.1.0"

__all__ = [
    "Abwt", "abwt_of_dfa", "build_abwt", "invert_abwt_dfa", "invert_abwt_nfa",
    "Automaton", "canonical", "isomorphic", "minimize", "parse", "serialize",
    "AlphabetMismatchError", "AxiomViolationError", "BudgetError", "CapExceededError",
    "ColexError", "EmptyLanguageError", "FormatError", "InversionError",
    "NotDeterministicError", "NotMinimumError",
    "Index", "SearchState", "build_index",
    "WitnessCertificate", "decide_width_leq", "find_width_witness",
    "language_width_bounds", "replay_certificate",
    "ChainPartition", "PartialOrder", "brute_force_nfa_width", "chain_partition",
    "check_colex_axioms", "compute_max_colex_order", "dfa_width", "maximal_colex_order",
    "check_powerset_bounds", "nfa_equivalent", "nfa_membership", "powerset_construct",
]
