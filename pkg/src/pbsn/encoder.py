"""PB constraint to CNF through carry-connected sorters over a mixed radix base."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cnf import ClauseStore, Stats
from .model import FALSE, PbConstraint, PbInstance, canonicalize
from .networks import DEFAULT_BLOCK
from .radix import DigitPlan, build_digit_plan, carry_indices, find_base
from .reuse import BuiltSorter, SorterRegistry, build_sorter_with_reuse


@dataclass
class EncodeOptions:
    reuse: bool = True
    reuse_guard: bool = True
    skip: bool = True
    block_size: int = DEFAULT_BLOCK
    max_base_prime: int = 17


@dataclass
class EncodeReport:
    stats: Stats
    reused_per_constraint: list[int] = field(default_factory=list)
    unsat: bool = False


@dataclass
class EncodedConstraint:
    plan: Optional[DigitPlan]
    sorters: list[BuiltSorter]


def encode_constraint(
    store: ClauseStore,
    registry: SorterRegistry,
    c: PbConstraint,
    opts: Optional[EncodeOptions] = None,
) -> EncodedConstraint:
    """Encode one canonical ``<`` constraint and enforce it with unit clauses."""
    opts = opts or EncodeOptions()
    if c.is_contradiction:
        store.add_clause([])
        return EncodedConstraint(None, [])
    if c.relation != "<":
        raise ValueError("encode_constraint expects a canonical '<' constraint")
    base = find_base([a for a, _ in c.terms], opts.max_base_prime)
    plan = build_digit_plan(c, base)
    sorters = []
    carries: list[int] = []
    for i, digits in enumerate(plan.inputs):
        inputs = sorted(digits + tuple(carries))
        built = build_sorter_with_reuse(
            store, registry, inputs, len(inputs),
            reuse=opts.reuse, block=opts.block_size, skip=opts.skip,
            guard=opts.reuse_guard,
        )
        sorters.append(built)
        if i < base.top:
            carries = [built.outputs[j - 1]
                       for j in carry_indices(len(built.outputs), base.radices[i])]

    top = sorters[-1]
    d = plan.enforce_digit
    for p in range(d, len(top.outputs) + 1):
        store.add_clause([top.outputs[p - 1] ^ 1])
        # later reusers of this sorter see the forced zeros and fold them away
        j = p - 1 - top.offset
        if top.record is not None and 0 <= j < len(top.record.output):
            top.record.output[j] = FALSE
    return EncodedConstraint(plan, sorters)


def encode_instance(
    store: ClauseStore,
    instance: PbInstance,
    opts: Optional[EncodeOptions] = None,
    registry: Optional[SorterRegistry] = None,
) -> EncodeReport:
    """Encode the hard constraints of ``instance`` in file order, sharing one registry."""
    opts = opts or EncodeOptions()
    registry = registry if registry is not None else SorterRegistry()
    report = EncodeReport(store.stats)
    for c in instance.constraints:
        before = store.stats.sorters_reused
        for cc in canonicalize(c):
            encode_constraint(store, registry, cc, opts)
        report.reused_per_constraint.append(store.stats.sorters_reused - before)
    report.stats = store.snapshot_stats()
    report.unsat = store.unsat_flag
    return report
