"""Pseudo-Boolean constraints to CNF through mixed-radix sorting networks,
with reuse of previously encoded sorters."""

from .cnf import ClauseStore, Stats
from .encoder import EncodeOptions, EncodeReport, encode_constraint, encode_instance
from .model import (
    CONTRADICTION, FALSE, TRUE, PbConstraint, PbInstance, canonicalize,
    merge_duplicate_literals, mk_lit, neg,
)
from .opb import OpbParseError, format_opb, parse_opb, print_result, write_dimacs
from .reuse import SorterRegistry, build_sorter_with_reuse, exact_cover_bruteforce, greedy_cover
from .solver import optimize, solve

__version__ = "0.1.0"
