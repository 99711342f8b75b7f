"""Exhaustive checks of the monotonicity and sensitivity axioms.

All three axioms look at an individual ``i`` exchanging two adjacent
alternatives ``x`` (rank ``k``) and ``y`` (rank ``k + 1``) in a sincere order
``q``, with everyone else fixed at ``pbar``:

* wsm: if ``F = {z}`` with ``z`` ranked below ``y``, the new outcome lies in ``{z, y}``;
* sm: if ``x`` is not chosen, the outcome does not change;
* us: for some such instance with ``F = {z}``, ``y`` joins the new outcome.

Instances are scanned in the order used by the manipulation search:
individuals ascending, then ``q``, then the swapped order ``psi q``
lexicographically, then ``z`` ascending, then ``pbar`` by position. The
first us instance is therefore the seed of a winner-information manipulation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from sccmanip.errors import InputError
from sccmanip.extension import Extension
from sccmanip.info import winner_info
from sccmanip.prefs import (
    DEFAULT_MAX_STATES,
    AltSet,
    Order,
    PartialProfile,
    all_orders,
    apply_transposition,
    format_order,
    format_partial_profile,
    order_index,
    partial_profile_at,
    rank,
    set_of_mask,
)
from sccmanip.scc import RuleLike, SccRule, winner_table, winners
from sccmanip.verdict import Stats, Verdict

AXIOMS = ("wsm", "sm", "us", "unanimity")


@dataclass(frozen=True)
class AxiomInstance:
    """One ``(i, pbar, q, x, y, z)`` tuple with the outcomes before and after the swap.

    ``z`` is None for sm; for unanimity only ``x`` (the common top) and the
    profile are meaningful, the profile being ``pbar`` spliced with ``q``.
    """

    individual: int
    pbar: PartialProfile
    sincere: Order
    x: int
    y: int | None
    z: int | None
    before: AltSet
    after: AltSet | None

    def to_json(self) -> dict:
        return {
            "individual": self.individual,
            "pbar": [list(o) for o in self.pbar.orders],
            "sincere": list(self.sincere),
            "x": self.x,
            "y": self.y,
            "z": self.z,
            "before": sorted(self.before),
            "after": None if self.after is None else sorted(self.after),
        }

    def __str__(self) -> str:
        parts = [
            f"i={self.individual}",
            f"pbar={format_partial_profile(self.pbar)}",
            f"q=[{format_order(self.sincere)}]",
            f"x={self.x}",
        ]
        if self.y is not None:
            parts.append(f"y={self.y}")
        if self.z is not None:
            parts.append(f"z={self.z}")
        parts.append(f"F={sorted(self.before)}")
        if self.after is not None:
            parts.append(f"F'={sorted(self.after)}")
        return " ".join(parts)


@dataclass(frozen=True)
class AxiomReport:
    """``instance`` is the counterexample of a failed universal axiom or the us witness."""

    axiom: str
    holds: bool
    instance: AxiomInstance | None = None
    stats: Stats = field(default_factory=Stats)
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


# -- literal re-checks ---------------------------------------------------------


def _adjacent(q: Order, x: int, y: int) -> bool:
    return rank(q, x) + 1 == rank(q, y)


def wsm_violation(rule: RuleLike, inst: AxiomInstance) -> bool:
    """Whether ``inst`` violates weak set-monotonicity, from the definition."""
    q, x, y, z = inst.sincere, inst.x, inst.y, inst.z
    if y is None or z is None or not _adjacent(q, x, y) or rank(q, y) >= rank(q, z):
        return False
    if winners(rule, inst.pbar.splice(q)) != {z}:
        return False
    return not winners(rule, inst.pbar.splice(apply_transposition(q, x, y))) <= {y, z}


def sm_violation(rule: RuleLike, inst: AxiomInstance) -> bool:
    """Whether ``inst`` violates set-monotonicity, from the definition."""
    q, x, y = inst.sincere, inst.x, inst.y
    if y is None or not _adjacent(q, x, y):
        return False
    before = winners(rule, inst.pbar.splice(q))
    if x in before:
        return False
    return winners(rule, inst.pbar.splice(apply_transposition(q, x, y))) != before


def us_witness(rule: RuleLike, inst: AxiomInstance) -> bool:
    """Whether ``inst`` witnesses upward sensitivity, from the definition."""
    q, x, y, z = inst.sincere, inst.x, inst.y, inst.z
    if y is None or z is None or not _adjacent(q, x, y) or rank(q, y) >= rank(q, z):
        return False
    if winners(rule, inst.pbar.splice(q)) != {z}:
        return False
    return y in winners(rule, inst.pbar.splice(apply_transposition(q, x, y)))


def unanimity_violation(rule: RuleLike, p) -> bool:
    tops = {o[0] for o in p}
    return len(tops) == 1 and winners(rule, p) != tops


def make_instance(rule: RuleLike, i: int, pbar, q, x: int, y: int, z: int | None = None) -> AxiomInstance:
    """Build an instance with its outcomes evaluated literally."""
    if pbar.absent != i:
        raise InputError("pbar must leave out the individual who swaps")
    before = winners(rule, pbar.splice(q))
    after = winners(rule, pbar.splice(apply_transposition(q, x, y)))
    return AxiomInstance(i, pbar, tuple(q), x, y, z, before, after)


# -- vectorized checkers -------------------------------------------------------


def _swaps(q: Order):
    """Adjacent swaps of ``q`` as ``(k, x, y, psi q)``, ordered by ``psi q``."""
    out = [(k, q[k], q[k + 1], apply_transposition(q, q[k], q[k + 1])) for k in range(len(q) - 1)]
    return sorted(out, key=lambda s: s[3])


def _scan(axiom: str, rule: RuleLike, n: int, m: int, max_states: int):
    """Return ``(states, first matching instance or None)``.

    For wsm and sm the match is a violation; for us it is a witness.
    """
    table = winner_table(rule, n, m, max_states)
    orders = all_orders(n)
    states = 0
    for i in range(1, m + 1):
        S = table.slices(i)
        P = S.shape[1]
        for qi, q in enumerate(orders):
            row = S[qi]
            for k, x, y, swapped in _swaps(q):
                new = S[order_index(swapped)]
                ybit = 1 << (y - 1)
                if axiom == "sm":
                    hit = ((row >> (x - 1)) & 1 == 0) & (new != row)
                    states += P
                    z = None
                    cells = np.flatnonzero(hit)
                else:
                    cells = np.empty(0, dtype=np.int64)
                    for z in sorted(q[k + 2 :]):
                        zbit = 1 << (z - 1)
                        if axiom == "wsm":
                            hit = (row == zbit) & ((new | (ybit | zbit)) != (ybit | zbit))
                        else:
                            hit = (row == zbit) & (new & ybit != 0)
                        states += P
                        cells = np.flatnonzero(hit)
                        if cells.size:
                            break
                if cells.size:
                    pos = int(cells[0])
                    pbar = partial_profile_at(n, m, i, pos)
                    inst = AxiomInstance(
                        i, pbar, q, x, y, z, set_of_mask(int(row[pos])), set_of_mask(int(new[pos]))
                    )
                    return states, inst
    return states, None


def _report(axiom: str, holds: bool, inst, states: int, start: float, note: str = "") -> AxiomReport:
    stats = Stats(states, millis=(time.perf_counter() - start) * 1e3)
    return AxiomReport(axiom, holds, inst, stats, note)


def check_wsm(rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> AxiomReport:
    start = time.perf_counter()
    if n == 2:
        return _report("wsm", True, None, 0, start, "vacuous with two alternatives")
    states, inst = _scan("wsm", rule, n, m, max_states)
    return _report("wsm", inst is None, inst, states, start)


def check_sm(rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> AxiomReport:
    start = time.perf_counter()
    states, inst = _scan("sm", rule, n, m, max_states)
    return _report("sm", inst is None, inst, states, start)


def check_us(rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> AxiomReport:
    start = time.perf_counter()
    if n == 2:
        return _report("us", False, None, 0, start, "unsatisfiable with two alternatives")
    states, inst = _scan("us", rule, n, m, max_states)
    return _report("us", inst is not None, inst, states, start)


def check_unanimity(rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> AxiomReport:
    """Every profile whose orders share the top ``x`` yields ``{x}``."""
    start = time.perf_counter()
    table = winner_table(rule, n, m, max_states)
    tops = np.array([o[0] for o in all_orders(n)])
    states = 0
    for x in range(1, n + 1):
        idx = np.flatnonzero(tops == x)
        sub = table.masks[np.ix_(*[idx] * m)]
        states += sub.size
        bad = np.flatnonzero(sub.ravel() != 1 << (x - 1))
        if bad.size:
            cell = np.unravel_index(int(bad[0]), sub.shape)
            p = tuple(all_orders(n)[int(idx[c])] for c in cell)
            pbar = PartialProfile(m, p[:-1])
            inst = AxiomInstance(m, pbar, p[-1], x, None, None, set_of_mask(int(sub[cell])), None)
            return _report("unanimity", False, inst, states, start)
    return _report("unanimity", True, None, states, start)


CHECKERS = {"wsm": check_wsm, "sm": check_sm, "us": check_us, "unanimity": check_unanimity}


def check_axiom(name: str, rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> AxiomReport:
    try:
        fn = CHECKERS[name]
    except KeyError:
        raise InputError(f"unknown axiom {name!r}; expected one of {', '.join(AXIOMS)}") from None
    return fn(rule, n, m, max_states)


def reverify(rule: RuleLike, report: AxiomReport) -> bool:
    """Re-check a report's instance against the literal definition."""
    inst = report.instance
    if inst is None:
        return True
    if report.axiom == "wsm":
        return wsm_violation(rule, inst)
    if report.axiom == "sm":
        return sm_violation(rule, inst)
    if report.axiom == "us":
        return us_witness(rule, inst)
    return unanimity_violation(rule, inst.pbar.splice(inst.sincere))


def check_exclusions(rule: SccRule, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Cross-check the axiom reports against each other and the manipulation search.

    sm implies wsm; sm and us never hold together; wsm and us together force a
    winner-information Kelly manipulation.
    """
    from sccmanip.manip import is_Omega_E_manipulable

    start = time.perf_counter()
    wsm = check_wsm(rule, n, m, max_states)
    sm = check_sm(rule, n, m, max_states)
    us = check_us(rule, n, m, max_states)
    problems = []
    for r in (wsm, sm, us):
        if not reverify(rule, r):
            problems.append(f"{r.axiom} instance does not re-verify")
    if sm.holds and not wsm.holds:
        problems.append("sm holds but wsm fails")
    if sm.holds and us.holds:
        problems.append("sm and us both hold")
    manip = None
    if wsm.holds and us.holds:
        manip = is_Omega_E_manipulable(rule, Extension.KELLY, winner_info(rule), n, m, max_states=max_states)
        if not manip.holds:
            problems.append("wsm and us hold but no winner-information Kelly manipulation exists")
    states = wsm.stats.states + sm.stats.states + us.stats.states + (manip.stats.states if manip else 0)
    note = f"wsm={wsm.holds} sm={sm.holds} us={us.holds}"
    if manip is not None:
        note += f" manipulable={manip.holds}"
    return Verdict(
        not problems,
        witness=manip.witness if manip else None,
        counterexample=problems or None,
        stats=Stats(states, millis=(time.perf_counter() - start) * 1e3),
        note=note,
    )
