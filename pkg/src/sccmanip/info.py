"""Information available to a voter about the others: complete, zero, or the outcome.

An information set is stored extensionally as a bitset over partial-profile
positions (bit ``k`` set iff the ``k``-th partial profile of
:func:`~sccmanip.prefs.enumerate_partial_profiles` belongs to it).

Winner-information sets are read off the winner table slice for ``(i, q)``,
one per outcome actually attained there; outcomes attained elsewhere in the
image but not in this slice would give empty preimages and are never emitted.
Membership-wise this is the same family as taking preimages over the full image
and discarding the empty ones.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from sccmanip.errors import ConfigError
from sccmanip.prefs import (
    DEFAULT_MAX_STATES,
    AltSet,
    Order,
    PartialProfile,
    all_orders,
    altset_key,
    check_bound,
    format_order,
    mask_of,
    order_index,
    partial_profile_at,
    set_of_mask,
)
from sccmanip.scc import SccRule, parse_rule, winner_table
from sccmanip.verdict import Stats, Verdict

INFO_KINDS = ("complete", "zero", "winner")


@dataclass(frozen=True)
class InfoSpec:
    kind: str
    rule: SccRule | None = None

    def __post_init__(self):
        if self.kind not in INFO_KINDS:
            raise ConfigError(f"unknown information profile {self.kind!r}")
        if self.kind == "winner" and self.rule is None:
            raise ConfigError("winner information needs a rule")

    def __str__(self) -> str:
        return self.kind


COMPLETE = InfoSpec("complete")
ZERO = InfoSpec("zero")


def winner_info(rule: SccRule) -> InfoSpec:
    return InfoSpec("winner", rule)


def parse_info(text: str, rule: SccRule | str | None = None) -> InfoSpec:
    kind = text.strip().lower()
    if kind == "winner":
        if isinstance(rule, str):
            rule = parse_rule(rule)
        return InfoSpec("winner", rule)
    return InfoSpec(kind)


@dataclass(frozen=True)
class InfoSet:
    """What individual ``owner`` with sincere order ``sincere`` may know.

    ``outcome`` is set for winner information; ``members`` is the bitset extension.
    """

    owner: int
    sincere: Order
    kind: str
    outcome: AltSet | None
    members: int
    n: int
    m: int

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, pp: PartialProfile) -> bool:
        return pp.absent == self.owner and bool(self.members >> pp.position() & 1)

    def positions(self) -> Iterator[int]:
        bits, k = self.members, 0
        while bits:
            if bits & 1:
                yield k
            bits >>= 1
            k += 1

    def partial_profiles(self) -> Iterator[PartialProfile]:
        for k in self.positions():
            yield partial_profile_at(self.n, self.m, self.owner, k)

    def descriptor(self) -> dict:
        return {
            "kind": self.kind,
            "outcome": None if self.outcome is None else sorted(self.outcome),
        }

    def __str__(self) -> str:
        label = self.kind if self.outcome is None else f"{self.kind} {sorted(self.outcome)}"
        return f"info({label}; i={self.owner}, q=[{format_order(self.sincere)}], |w|={len(self)})"


def bits_from_bool(flags: np.ndarray) -> int:
    """Pack a boolean vector into an int with bit ``k`` = ``flags[k]``."""
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def partial_space_size(n: int, m: int) -> int:
    return math.factorial(n) ** (m - 1)


def info_sets(
    spec: InfoSpec, i: int, q: Order, n: int, m: int, max_states: int = DEFAULT_MAX_STATES
) -> Iterator[InfoSet]:
    """The family ``Omega_i(q)`` in canonical order.

    Complete: one singleton per partial profile, by position. Zero: the whole
    space. Winner: one preimage per attained outcome, ordered by outcome.
    """
    check_bound(n, m, max_states)
    P = partial_space_size(n, m)
    if spec.kind == "complete":
        for k in range(P):
            yield InfoSet(i, q, "complete", None, 1 << k, n, m)
    elif spec.kind == "zero":
        yield InfoSet(i, q, "zero", None, (1 << P) - 1, n, m)
    else:
        row = winner_table(spec.rule, n, m, max_states).slices(i)[order_index(q)]
        for mask in sorted((int(v) for v in np.unique(row)), key=lambda v: altset_key(set_of_mask(v))):
            yield InfoSet(i, q, "winner", set_of_mask(mask), bits_from_bool(row == mask), n, m)


def winner_cell(rule: SccRule, i: int, q: Order, outcome: AltSet, n: int, m: int,
                max_states: int = DEFAULT_MAX_STATES) -> InfoSet:
    """The winner-information set for one outcome (possibly empty if not attained)."""
    row = winner_table(rule, n, m, max_states).slices(i)[order_index(q)]
    return InfoSet(i, q, "winner", frozenset(outcome), bits_from_bool(row == mask_of(outcome)), n, m)


def at_least_as_informative(
    finer: InfoSpec, coarser: InfoSpec, n: int, m: int, max_states: int = DEFAULT_MAX_STATES
) -> Verdict:
    """Decide whether ``finer`` is at least as informative as ``coarser``.

    For each coarse cell it suffices to test the largest candidate subfamily,
    the fine cells contained in it: any subfamily whose union is the coarse
    cell is made of such cells, so their union is the cell too.
    """
    start = time.perf_counter()
    check_bound(n, m, max_states)
    states = 0
    for i in range(1, m + 1):
        for q in all_orders(n):
            fine = [w.members for w in info_sets(finer, i, q, n, m, max_states)]
            for cell in info_sets(coarser, i, q, n, m, max_states):
                states += 1
                union = 0
                for w in fine:
                    if w & ~cell.members == 0:
                        union |= w
                if union != cell.members:
                    return Verdict(
                        False,
                        counterexample=(i, q, cell.descriptor()),
                        stats=Stats(states, millis=(time.perf_counter() - start) * 1e3),
                    )
    return Verdict(True, stats=Stats(states, millis=(time.perf_counter() - start) * 1e3))


def check_partition(rule: SccRule, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Winner-information cells are nonempty, pairwise disjoint and cover the space."""
    full = (1 << partial_space_size(n, m)) - 1
    states = 0
    for i in range(1, m + 1):
        for q in all_orders(n):
            seen = 0
            for cell in info_sets(winner_info(rule), i, q, n, m, max_states):
                states += 1
                if cell.members == 0 or cell.members & seen:
                    return Verdict(False, counterexample=(i, q, cell.descriptor()), stats=Stats(states))
                seen |= cell.members
            if seen != full:
                return Verdict(False, counterexample=(i, q, "cells do not cover"), stats=Stats(states))
    return Verdict(True, stats=Stats(states))
