"""Verification suites: the claim matrix, axiom table, Kelly properties and invariants.

Each suite yields :class:`CaseResult` rows sharing one report layout, so the
CLI can print or serialize them uniformly. The claim matrix and axiom table
are CSV files shipped in ``sccmanip/data`` so they can be reviewed as data.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterator

from sccmanip.axioms import check_axiom, check_exclusions, make_instance, reverify, sm_violation, us_witness, wsm_violation
from sccmanip.errors import InputError
from sccmanip.extension import Extension, check_kelly_properties, is_antisymmetric, is_extension_rule_witness, parse_extension
from sccmanip.info import COMPLETE, ZERO, at_least_as_informative, check_partition, parse_info, winner_info
from sccmanip.manip import (
    check_transfer_propositions,
    closed_form_states,
    is_E_manipulable,
    is_Omega_E_manipulable,
    verify_witness,
)
from sccmanip.prefs import DEFAULT_MAX_STATES, check_bound, linear_order, parse_order, parse_partial_profile
from sccmanip.scc import BORDA, COPELAND, check_copeland_conservation, check_np_lower_bound, parse_rule
from sccmanip.verdict import Verdict

SUITES = ("claims", "paper", "axioms", "kelly-properties", "invariants", "all")
REPORT_COLUMNS = ("rule", "ext", "info", "n", "m", "expected", "observed", "states", "millis")
VERDICTS = ("manipulable", "strategy-proof")


@dataclass(frozen=True)
class SuiteCase:
    id: str
    rule: str
    ext: str
    info: str
    n: int
    m: int
    expected: str
    source: str

    def __post_init__(self):
        if self.expected not in VERDICTS:
            raise InputError(f"case {self.id}: expected must be one of {VERDICTS}")
        if self.info not in ("none", "complete", "zero", "winner"):
            raise InputError(f"case {self.id}: unknown info regime {self.info!r}")


@dataclass(frozen=True)
class CaseResult:
    """One report row. ``sound`` records the soundness check of the verdict.

    For manipulation rows: the witness re-verifies, or the state count of a
    negative verdict equals the closed-form size. Other rows re-verify their
    counterexample or witness where one exists.
    """

    id: str
    rule: str
    ext: str
    info: str
    n: int
    m: int
    expected: str
    observed: str
    states: int
    millis: float
    sound: bool = True
    detail: str = ""
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.expected == self.observed and self.sound

    def row(self, timing: bool = True) -> dict:
        d = {k: getattr(self, k) for k in REPORT_COLUMNS}
        d["millis"] = round(self.millis, 1) if timing else ""
        return d


def _read_csv(name: str) -> list[dict]:
    text = resources.files("sccmanip").joinpath("data").joinpath(name).read_text(encoding="ascii")
    return list(csv.DictReader(io.StringIO(text)))


def load_claims() -> list[SuiteCase]:
    return [
        SuiteCase(r["id"], r["rule"], r["ext"], r["info"], int(r["n"]), int(r["m"]), r["expected"], r["source"])
        for r in _read_csv("claims.csv")
    ]


def load_axiom_rows() -> list[dict]:
    return _read_csv("axioms.csv")


def run_case(case: SuiteCase, *, max_states: int = DEFAULT_MAX_STATES, workers: int = 1) -> CaseResult:
    rule = parse_rule(case.rule)
    ext = parse_extension(case.ext)
    if case.info == "none":
        info = None
        v = is_E_manipulable(rule, ext, case.n, case.m, max_states=max_states, workers=workers)
    else:
        info = parse_info(case.info, rule)
        v = is_Omega_E_manipulable(rule, ext, info, case.n, case.m, max_states=max_states, workers=workers)
    observed = VERDICTS[0] if v.holds else VERDICTS[1]
    if v.holds:
        sound = verify_witness(rule, ext, info, v.witness)
        detail = "witness verified" if sound else "witness FAILED re-verification"
    else:
        expect = closed_form_states(case.n, case.m)
        sound = v.stats.states == expect
        detail = f"exhausted {v.stats.states} of {expect} states"
    return CaseResult(
        case.id, case.rule, case.ext, case.info, case.n, case.m, case.expected, observed,
        v.stats.states, v.stats.millis, sound, detail, v.witness.to_json() if v.witness else None,
    )


def _opt_int(text: str) -> int | None:
    return int(text) if text.strip() else None


def run_axiom_row(r: dict, *, max_states: int = DEFAULT_MAX_STATES) -> CaseResult:
    """An axiom row either runs the exhaustive checker or, when an instance is given, re-checks it literally."""
    start = time.perf_counter()
    rule = parse_rule(r["rule"])
    axiom = r["axiom"]
    n, m = int(r["n"]), int(r["m"])
    check_bound(n, m, max_states)
    if r["individual"].strip():
        inst = make_instance(
            rule,
            int(r["individual"]),
            parse_partial_profile(r["pbar"]),
            linear_order(parse_order(r["sincere"])),
            int(r["x"]),
            int(r["y"]),
            _opt_int(r["z"]),
        )
        if axiom == "us":
            observed = "holds" if us_witness(rule, inst) else "fails"
        elif axiom == "sm":
            observed = "fails" if sm_violation(rule, inst) else "holds"
        else:
            observed = "fails" if wsm_violation(rule, inst) else "holds"
        return CaseResult(
            r["id"], r["rule"], "-", axiom, n, m, r["expected"], observed, 1,
            (time.perf_counter() - start) * 1e3, True, str(inst),
        )
    rep = check_axiom(axiom, rule, n, m, max_states)
    sound = reverify(rule, rep)
    detail = str(rep.instance) if rep.instance else rep.note
    return CaseResult(
        r["id"], r["rule"], "-", axiom, n, m, r["expected"], "holds" if rep.holds else "fails",
        rep.stats.states, rep.stats.millis, sound, detail,
    )


def _verdict_row(id: str, label: str, n: int, m: int, v: Verdict, *, ext: str = "-", info: str = "-") -> CaseResult:
    detail = v.note if v.holds else f"{v.counterexample}"
    return CaseResult(
        id, label, ext, info, n, m, "holds", "holds" if v.holds else "fails",
        v.stats.states, v.stats.millis, True, detail,
    )


def _timed(fn: Callable[[], Verdict]) -> Verdict:
    start = time.perf_counter()
    v = fn()
    if not v.stats.millis:
        v.stats.millis = (time.perf_counter() - start) * 1e3
    return v


def kelly_rows(max_states: int = DEFAULT_MAX_STATES) -> Iterator[CaseResult]:
    for n in (2, 3, 4):
        yield _verdict_row(f"kelly-properties-{n}", "kelly", n, 0, _timed(lambda: check_kelly_properties(n)), ext="kelly")
        for ext in Extension:
            v = _timed(lambda: is_extension_rule_witness(ext, n))
            yield _verdict_row(f"extension-rule-{ext.value}-{n}", "singletons", n, 0, v, ext=ext.value)
        v = _timed(lambda: is_antisymmetric(Extension.FISHBURN, n))
        yield _verdict_row(f"fishburn-antisymmetric-{n}", "antisymmetry", n, 0, v, ext="fishburn")


def invariant_rows(max_states: int = DEFAULT_MAX_STATES) -> Iterator[CaseResult]:
    for n, m in ((3, 3), (4, 3)):
        yield _verdict_row(f"copeland-sum-{n}-{m}", "copeland", n, m, check_copeland_conservation(n, m, max_states))
    for n, m in ((5, 2), (4, 3)):
        yield _verdict_row(f"np-lower-bound-{n}-{m}", "negative-plurality", n, m, check_np_lower_bound(n, m, max_states))
    for rule in (BORDA, COPELAND):
        v = _timed(lambda: check_partition(rule, 3, 3, max_states))
        yield _verdict_row(f"partition-{rule}-3-3", str(rule), 3, 3, v, info="winner")
    for n, m in ((3, 2), (3, 3)):
        v = _timed(lambda: check_transfer_propositions(n, m, max_states=max_states))
        yield _verdict_row(f"transfer-{n}-{m}", "zoo", n, m, v, info="all")
    for rule in (BORDA, COPELAND):
        chain = [("complete", COMPLETE), ("winner", winner_info(rule)), ("zero", ZERO)]
        for (a, sa), (b, sb) in zip(chain, chain[1:]):
            v = _timed(lambda: at_least_as_informative(sa, sb, 3, 2, max_states))
            yield _verdict_row(f"informative-{rule}-{a}-{b}", str(rule), 3, 2, v, info=f"{a}>={b}")
    for rule in (BORDA, COPELAND):
        v = _timed(lambda: check_exclusions(rule, 3, 3, max_states))
        yield _verdict_row(f"exclusions-{rule}-3-3", str(rule), 3, 3, v, ext="kelly", info="axioms")


def run_suite(name: str, *, max_states: int = DEFAULT_MAX_STATES, workers: int = 1) -> Iterator[CaseResult]:
    """Yield report rows for suite ``name``. Bound violations propagate as :class:`BoundError`.

    ``paper`` is an alias of ``claims``, the manipulability verdict matrix.
    """
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    if name in ("claims", "paper", "all"):
        cases = load_claims()
        for case in cases:
            check_bound(case.n, case.m, max_states)
        for case in cases:
            yield run_case(case, max_states=max_states, workers=workers)
    if name in ("axioms", "all"):
        rows = load_axiom_rows()
        for r in rows:
            check_bound(int(r["n"]), int(r["m"]), max_states)
        for r in rows:
            yield run_axiom_row(r, max_states=max_states)
    if name in ("kelly-properties", "all"):
        yield from kelly_rows(max_states)
    if name in ("invariants", "all"):
        yield from invariant_rows(max_states)
