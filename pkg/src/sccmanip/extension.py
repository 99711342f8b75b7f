"""Kelly and Fishburn extensions of a linear order to nonempty sets of alternatives.

Both are implemented literally as weak relations; the strict part is always
derived generically (``B > C`` iff ``B >= C`` and not ``C >= B``).
"""

from __future__ import annotations

import itertools
from enum import Enum
from functools import lru_cache
from typing import Iterable

import numpy as np

from sccmanip.errors import ConfigError, InputError
from sccmanip.prefs import Order, all_orders, rank, set_of_mask
from sccmanip.verdict import Stats, Verdict


class Extension(str, Enum):
    KELLY = "kelly"
    FISHBURN = "fishburn"

    def __str__(self) -> str:
        return self.value


def parse_extension(text: str) -> Extension:
    try:
        return Extension(text.strip().lower())
    except ValueError:
        raise ConfigError(f"unknown extension rule {text!r}") from None


def _dominates(q: Order, B: Iterable[int], C: Iterable[int]) -> bool:
    """Every element of B is weakly above every element of C in q."""
    C = list(C)
    return all(rank(q, x) <= rank(q, y) for x in B for y in C)


def succeq(ext: Extension, q: Order, B: Iterable[int], C: Iterable[int]) -> bool:
    """Whether ``(B, C)`` belongs to the extended relation ``E(q)``."""
    B, C = frozenset(B), frozenset(C)
    if not B or not C:
        raise InputError("extension operands must be nonempty")
    if ext is Extension.KELLY:
        return B == C or _dominates(q, B, C)
    if ext is Extension.FISHBURN:
        return _dominates(q, B - C, C) and _dominates(q, B, C - B)
    raise ConfigError(f"unknown extension rule {ext!r}")


def strictly_prefers(ext: Extension, q: Order, B: Iterable[int], C: Iterable[int]) -> bool:
    B, C = frozenset(B), frozenset(C)
    return succeq(ext, q, B, C) and not succeq(ext, q, C, B)


def compare(ext: Extension, q: Order, B: Iterable[int], C: Iterable[int]) -> str:
    """One of ``strict``, ``weak-equal``, ``reverse`` or ``incomparable``."""
    fwd, bwd = succeq(ext, q, B, C), succeq(ext, q, C, B)
    if fwd and bwd:
        return "weak-equal"
    if fwd:
        return "strict"
    if bwd:
        return "reverse"
    return "incomparable"


@lru_cache(maxsize=None)
def relation_tables(ext: Extension, q: Order) -> tuple[np.ndarray, np.ndarray]:
    """``(weak, strict)`` boolean tables indexed by ``[mask(B), mask(C)]``.

    Row and column 0 (the empty set) are all False.
    """
    n = len(q)
    size = 1 << n
    weak = np.zeros((size, size), dtype=bool)
    sets = [set_of_mask(k) for k in range(size)]
    for b in range(1, size):
        for c in range(1, size):
            weak[b, c] = succeq(ext, q, sets[b], sets[c])
    strict = weak & ~weak.T
    weak.flags.writeable = False
    strict.flags.writeable = False
    return weak, strict


def nonempty_subsets(n: int) -> list[frozenset[int]]:
    alts = range(1, n + 1)
    return [frozenset(c) for k in range(1, n + 1) for c in itertools.combinations(alts, k)]


def is_extension_rule_witness(ext: Extension, n: int) -> Verdict:
    """Exhaustively check ``{x} >= {y}`` iff ``x >= y`` for every order on ``1..n``."""
    states = 0
    for q in all_orders(n):
        for x in q:
            for y in q:
                states += 1
                if succeq(ext, q, {x}, {y}) != (rank(q, x) <= rank(q, y)):
                    return Verdict(False, counterexample=(q, x, y), stats=Stats(states))
    return Verdict(True, stats=Stats(states))


def is_antisymmetric(ext: Extension, n: int) -> Verdict:
    subsets = nonempty_subsets(n)
    states = 0
    for q in all_orders(n):
        for B in subsets:
            for C in subsets:
                states += 1
                if B != C and succeq(ext, q, B, C) and succeq(ext, q, C, B):
                    return Verdict(False, counterexample=(q, B, C), stats=Stats(states))
    return Verdict(True, stats=Stats(states))


def is_refinement(finer: Extension, coarser: Extension, n: int) -> Verdict:
    """``finer(q)`` is a subset of ``coarser(q)`` for every ``q``."""
    subsets = nonempty_subsets(n)
    states = 0
    for q in all_orders(n):
        for B in subsets:
            for C in subsets:
                states += 1
                if succeq(finer, q, B, C) and not succeq(coarser, q, B, C):
                    return Verdict(False, counterexample=(q, B, C), stats=Stats(states))
    return Verdict(True, stats=Stats(states))


def kelly_property_violations(q: Order, B: frozenset[int], C: frozenset[int]) -> list[str]:
    """Names of the Kelly properties (i)-(vi) that fail on ``(q, B, C)``."""
    K = Extension.KELLY
    bad = []
    strict_bc = strictly_prefers(K, q, B, C)
    comparable = succeq(K, q, B, C) or succeq(K, q, C, B)
    if strict_bc and len(B & C) > 1:
        bad.append("i")
    if B < C and comparable and len(B) != 1:
        bad.append("ii")
    not_strict_cb = not strictly_prefers(K, q, C, B)
    some_above = any(rank(q, x) < rank(q, y) for x in B for y in C)
    if not_strict_cb != (B == C or some_above):
        bad.append("iii")
    if len(B) == 1 and len(C) == 1 and B != C:
        (x,), (y,) = B, C
        if rank(q, y) > rank(q, x):
            xy = frozenset({x, y})
            if not (strictly_prefers(K, q, B, xy) and strictly_prefers(K, q, xy, C)):
                bad.append("iv")
    best = frozenset({q[0]})
    if B == best and C != best and not strictly_prefers(K, q, B, C):
        bad.append("v")
    if q[0] in B and q[0] not in C and strictly_prefers(K, q, C, B):
        bad.append("vi")
    return bad


def check_kelly_properties(n: int) -> Verdict:
    """Kelly properties (i)-(vi), partial-order axioms, and Kelly within Fishburn, for all q, B, C."""
    K, F = Extension.KELLY, Extension.FISHBURN
    subsets = nonempty_subsets(n)
    violations: list[tuple] = []
    states = 0
    for q in all_orders(n):
        weak = {(B, C): succeq(K, q, B, C) for B in subsets for C in subsets}
        for B in subsets:
            if not weak[B, B]:
                violations.append(("reflexive", q, B, B))
            for C in subsets:
                states += 1
                for name in kelly_property_violations(q, B, C):
                    violations.append((name, q, B, C))
                if weak[B, C] and weak[C, B] and B != C:
                    violations.append(("antisymmetric", q, B, C))
                if weak[B, C] and not succeq(F, q, B, C):
                    violations.append(("kelly-in-fishburn", q, B, C))
                if weak[B, C]:
                    for D in subsets:
                        if weak[C, D] and not weak[B, D]:
                            violations.append(("transitive", q, B, C, D))
    return Verdict(
        not violations,
        counterexample=violations[0] if violations else None,
        stats=Stats(states),
        note=f"{len(violations)} violations",
    )
