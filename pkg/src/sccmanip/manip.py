"""Exhaustive manipulability search with deterministic witnesses.

The search walks ``(i, q, q', omega, pbar)`` in a fixed order: individuals
ascending, sincere then misreported orders lexicographically, information sets
by their outcome (sorted members, lexicographically), then partial profiles by
position. The first hit is the witness, so a witness is a pure function of
``(rule, ext, info, n, m)``.

Per ``(i, q)`` all misreports are handled at once: the winner table row of
every ``q'`` is compared against the row of ``q`` through precomputed
``(weak, strict)`` relation tables of ``E(q)``.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from sccmanip.errors import InputError
from sccmanip.extension import Extension, is_antisymmetric, is_refinement, relation_tables, strictly_prefers, succeq
from sccmanip.info import COMPLETE, ZERO, InfoSpec, at_least_as_informative, winner_info
from sccmanip.prefs import (
    DEFAULT_MAX_STATES,
    AltSet,
    Order,
    PartialProfile,
    all_orders,
    altset_key,
    enumerate_partial_profiles,
    linear_order,
    partial_profile,
    partial_profile_at,
    set_of_mask,
)
from sccmanip.scc import BORDA, COPELAND, NEGATIVE_PLURALITY, PLURALITY, RuleLike, SccRule, majority, winner_table, winners
from sccmanip.verdict import Stats, Verdict

WITNESS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": [
        "individual", "sincere", "misreport", "info", "gain_at", "outcome_sincere", "outcome_misreport",
    ],
    "properties": {
        "individual": {"type": "integer", "minimum": 1},
        "sincere": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
        "misreport": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
        "info": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "outcome"],
                    "properties": {
                        "kind": {"enum": ["winner", "complete", "zero"]},
                        "outcome": {
                            "oneOf": [
                                {"type": "null"},
                                {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                            ]
                        },
                    },
                },
            ]
        },
        "gain_at": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
        },
        "outcome_sincere": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "outcome_misreport": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
    },
}


@dataclass(frozen=True)
class Witness:
    """A certified manipulation.

    ``info_kind`` is None for plain E-manipulability (full knowledge of one
    partial profile); ``info_outcome`` is the known outcome for winner information.
    """

    individual: int
    sincere: Order
    misreport: Order
    info_kind: str | None
    info_outcome: AltSet | None
    gain_at: PartialProfile
    outcome_sincere: AltSet
    outcome_misreport: AltSet

    def to_json(self) -> dict:
        info = None
        if self.info_kind is not None:
            outcome = None if self.info_outcome is None else sorted(self.info_outcome)
            info = {"kind": self.info_kind, "outcome": outcome}
        return {
            "individual": self.individual,
            "sincere": list(self.sincere),
            "misreport": list(self.misreport),
            "info": info,
            "gain_at": [list(q) for q in self.gain_at.orders],
            "outcome_sincere": sorted(self.outcome_sincere),
            "outcome_misreport": sorted(self.outcome_misreport),
        }

    @classmethod
    def from_json(cls, d: dict) -> Witness:
        try:
            n = len(d["sincere"])
            info = d["info"]
            return cls(
                individual=int(d["individual"]),
                sincere=linear_order(d["sincere"], n),
                misreport=linear_order(d["misreport"], n),
                info_kind=None if info is None else info["kind"],
                info_outcome=None if info is None or info["outcome"] is None else frozenset(info["outcome"]),
                gain_at=partial_profile(int(d["individual"]), d["gain_at"]),
                outcome_sincere=frozenset(d["outcome_sincere"]),
                outcome_misreport=frozenset(d["outcome_misreport"]),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed witness: {exc}") from None


def closed_form_states(n: int, m: int) -> int:
    """Size of the ``(i, q, q' != q, pbar)`` space: ``m * n! * (n! - 1) * (n!)^(m-1)``."""
    N = math.factorial(n)
    return m * N * (N - 1) * N ** (m - 1)


def _altset_order(n: int) -> np.ndarray:
    """``r[mask]`` = position of the set ``mask`` in lexicographic alternative-set order."""
    masks = sorted(range(1, 1 << n), key=lambda v: altset_key(set_of_mask(v)))
    r = np.full(1 << n, len(masks), dtype=np.int64)
    r[masks] = np.arange(len(masks))
    return r


def _search_pair(table, ext: Extension, kind: str | None, i: int, qi: int):
    """Search one ``(i, q)`` slice. Returns ``(states, witness or None)``.

    ``states`` counts ``(q', pbar)`` pairs up to and including the witness row.
    """
    n = table.n
    orders = all_orders(n)
    q = orders[qi]
    S = table.slices(i)
    N, P = S.shape
    row = S[qi]
    weak_t, strict_t = relation_tables(ext, q)
    weak = weak_t[S, row[None, :]]
    strict = strict_t[S, row[None, :]]
    strict[qi] = False

    if kind in (None, "complete"):
        ok = strict.any(axis=1)
    elif kind == "zero":
        ok = weak.all(axis=1) & strict.any(axis=1)
    else:
        ranks = _altset_order(n)[row]
        perm = np.argsort(ranks, kind="stable")
        sorted_ranks = ranks[perm]
        starts = np.flatnonzero(np.r_[True, sorted_ranks[1:] != sorted_ranks[:-1]])
        cell_ok = np.logical_and.reduceat(weak[:, perm], starts, axis=1)
        cell_ok &= np.logical_or.reduceat(strict[:, perm], starts, axis=1)
        ok = cell_ok.any(axis=1)

    hits = np.flatnonzero(ok)
    if not hits.size:
        return (N - 1) * P, None
    qpi = int(hits[0])
    misreport = orders[qpi]
    rows_before = qpi if qpi < qi else qpi - 1
    states = (rows_before + 1) * P

    outcome = None
    if kind == "winner":
        g = int(np.flatnonzero(cell_ok[qpi])[0])
        lo = starts[g]
        hi = starts[g + 1] if g + 1 < len(starts) else P
        members = np.sort(perm[lo:hi])
        k = int(members[np.flatnonzero(strict[qpi, members])[0]])
        outcome = set_of_mask(int(row[k]))
    else:
        k = int(np.flatnonzero(strict[qpi])[0])
    gain_at = partial_profile_at(n, table.m, i, k)
    witness = Witness(
        individual=i,
        sincere=q,
        misreport=misreport,
        info_kind=kind,
        info_outcome=outcome,
        gain_at=gain_at,
        outcome_sincere=set_of_mask(int(row[k])),
        outcome_misreport=set_of_mask(int(S[qpi, k])),
    )
    return states, witness


def _search(
    rule: RuleLike,
    ext: Extension,
    kind: str | None,
    n: int,
    m: int,
    max_states: int,
    workers: int,
) -> Verdict:
    start = time.perf_counter()
    table = winner_table(rule, n, m, max_states)
    ext = Extension(ext)
    N = len(all_orders(n))
    pairs = [(i, qi) for i in range(1, m + 1) for qi in range(N)]
    per_pair = (N - 1) * N ** (m - 1)

    found = None
    if workers <= 1:
        for idx, (i, qi) in enumerate(pairs):
            states, witness = _search_pair(table, ext, kind, i, qi)
            if witness is not None:
                found = (idx, states, witness)
                break
    else:
        for i in range(1, m + 1):
            table.slices(i)  # warm the shared cache before fanning out
        chunk = 4 * workers
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for lo in range(0, len(pairs), chunk):
                batch = pairs[lo : lo + chunk]
                results = pool.map(lambda pr: _search_pair(table, ext, kind, *pr), batch)
                hits = [(lo + j, s, w) for j, (s, w) in enumerate(results) if w is not None]
                if hits:
                    found = min(hits, key=lambda h: h[0])
                    break

    millis = (time.perf_counter() - start) * 1e3
    if found is None:
        stats = Stats(len(pairs) * per_pair, table.size, millis)
        return Verdict(False, stats=stats, note="exhausted")
    idx, states, witness = found
    stats = Stats(idx * per_pair + states, table.size, millis)
    return Verdict(True, witness=witness, stats=stats)


def is_E_manipulable(
    rule: RuleLike,
    ext: Extension,
    n: int,
    m: int,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    workers: int = 1,
) -> Verdict:
    """Some voter strictly gains (under ``E(q)``) by misreporting at some known profile."""
    return _search(rule, ext, None, n, m, max_states, workers)


def is_Omega_E_manipulable(
    rule: RuleLike,
    ext: Extension,
    info: InfoSpec,
    n: int,
    m: int,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    workers: int = 1,
) -> Verdict:
    """Some voter has a misreport that never hurts on an information set and helps somewhere on it."""
    if info.kind == "winner" and info.rule != rule:
        raise InputError("winner information must use the rule under test")
    return _search(rule, ext, info.kind, n, m, max_states, workers)


def verify_witness(rule: RuleLike, ext: Extension, info: InfoSpec | None, w: Witness) -> bool:
    """Re-check a witness from the definitions alone, with no winner table.

    ``info`` None checks plain E-manipulability.
    """
    n = len(w.sincere)
    if len(w.misreport) != n or w.gain_at.absent != w.individual:
        raise InputError("malformed witness: inconsistent dimensions")
    if any(len(o) != n for o in w.gain_at.orders):
        raise InputError("malformed witness: orders of different lengths")
    q, qp, pbar = w.sincere, w.misreport, w.gain_at
    m = pbar.m
    ext = Extension(ext)

    sincere = winners(rule, pbar.splice(q))
    lie = winners(rule, pbar.splice(qp))
    if sincere != w.outcome_sincere or lie != w.outcome_misreport:
        return False
    if not strictly_prefers(ext, q, lie, sincere):
        return False
    if info is None:
        return w.info_kind is None
    if info.kind != w.info_kind:
        return False
    if info.kind == "complete":
        return True
    if info.kind == "winner" and (w.info_outcome is None or sincere != w.info_outcome):
        return False
    for other in enumerate_partial_profiles(n, m, w.individual, max_states=10**12):
        before = winners(rule, other.splice(q))
        if info.kind == "winner" and before != w.info_outcome:
            continue
        if not succeq(ext, q, winners(rule, other.splice(qp)), before):
            return False
    return True


def default_rules(n: int) -> list[SccRule]:
    rules = [BORDA, PLURALITY, NEGATIVE_PLURALITY, COPELAND]
    if n == 2:
        rules.append(majority())
    return rules


def check_transfer_propositions(
    n: int,
    m: int,
    rules: Iterable[SccRule] | None = None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
) -> Verdict:
    """Check the monotonicity transfers between verdicts on every rule in ``rules``.

    * more information never removes manipulability (for each pair ordered by
      :func:`~sccmanip.info.at_least_as_informative`);
    * Kelly manipulability carries over to Fishburn, once Kelly is confirmed to
      refine Fishburn and Fishburn to be antisymmetric at this ``n``;
    * manipulability under complete information equals plain E-manipulability,
      and any information-restricted manipulability implies it.
    """
    start = time.perf_counter()
    rules = list(default_rules(n) if rules is None else rules)
    exts = (Extension.KELLY, Extension.FISHBURN)
    violations: list[tuple] = []
    states = 0

    refines = is_refinement(Extension.KELLY, Extension.FISHBURN, n).holds
    antisym = is_antisymmetric(Extension.FISHBURN, n).holds

    for rule in rules:
        specs = {"complete": COMPLETE, "winner": winner_info(rule), "zero": ZERO}
        order = {}
        for a in specs:
            for b in specs:
                if a != b:
                    order[a, b] = at_least_as_informative(specs[a], specs[b], n, m, max_states).holds
        verdict = {}
        for ext in exts:
            verdict[ext, None] = is_E_manipulable(rule, ext, n, m, max_states=max_states).holds
            for name, spec in specs.items():
                v = is_Omega_E_manipulable(rule, ext, spec, n, m, max_states=max_states)
                states += v.stats.states
                verdict[ext, name] = v.holds
        for ext in exts:
            if verdict[ext, "complete"] != verdict[ext, None]:
                violations.append((str(rule), str(ext), "complete-vs-plain"))
            for name in specs:
                if verdict[ext, name] and not verdict[ext, None]:
                    violations.append((str(rule), str(ext), name, "restricted-implies-plain"))
            for (a, b), finer in order.items():
                if finer and verdict[ext, b] and not verdict[ext, a]:
                    violations.append((str(rule), str(ext), a, b, "informativeness"))
        if refines and antisym:
            for name in [None, *specs]:
                if verdict[Extension.KELLY, name] and not verdict[Extension.FISHBURN, name]:
                    violations.append((str(rule), name, "kelly-to-fishburn"))

    millis = (time.perf_counter() - start) * 1e3
    note = f"{len(rules)} rules; kelly refines fishburn: {refines}; fishburn antisymmetric: {antisym}"
    return Verdict(
        not violations,
        counterexample=violations or None,
        stats=Stats(states, millis=millis),
        note=note,
    )
