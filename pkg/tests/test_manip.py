from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction

import jsonschema
import pytest

from sccmanip.errors import BoundError, InputError
from sccmanip.extension import Extension, strictly_prefers, succeq
from sccmanip.info import COMPLETE, ZERO, winner_info
from sccmanip.manip import (
    WITNESS_SCHEMA,
    Witness,
    check_transfer_propositions,
    closed_form_states,
    is_E_manipulable,
    is_Omega_E_manipulable,
    verify_witness,
)
from sccmanip.prefs import PartialProfile, all_orders, enumerate_partial_profiles, rank
from sccmanip.scc import BORDA, COPELAND, NEGATIVE_PLURALITY, PLURALITY, majority, positional, winners

K, F = Extension.KELLY, Extension.FISHBURN
ZOO = [BORDA, PLURALITY, NEGATIVE_PLURALITY, COPELAND]
KINDS = ["complete", "zero", "winner"]


def spec(kind, rule):
    return {"complete": COMPLETE, "zero": ZERO, "winner": winner_info(rule)}[kind]


def brute_force(rule, ext, kind, n, m):
    """Literal reading of the definition: any (i, q, q', cell) that never hurts and helps somewhere."""
    for i in range(1, m + 1):
        space = list(enumerate_partial_profiles(n, m, i))
        for q in all_orders(n):
            sincere = [winners(rule, pp.splice(q)) for pp in space]
            if kind == "complete":
                cells = [[k] for k in range(len(space))]
            elif kind == "zero":
                cells = [list(range(len(space)))]
            else:
                cells = [[k for k in range(len(space)) if sincere[k] == X] for X in set(sincere)]
            for qp in all_orders(n):
                lie = [winners(rule, pp.splice(qp)) for pp in space]
                for cell in cells:
                    if all(succeq(ext, q, lie[k], sincere[k]) for k in cell) and any(
                        strictly_prefers(ext, q, lie[k], sincere[k]) for k in cell
                    ):
                        return True
    return False


def search(rule, ext, kind, n, m, **kw):
    if kind is None:
        return is_E_manipulable(rule, ext, n, m, **kw)
    return is_Omega_E_manipulable(rule, ext, spec(kind, rule), n, m, **kw)


@pytest.mark.parametrize(
    "rule,n,m,expected",
    [
        (BORDA, 3, 2, True),
        (PLURALITY, 3, 3, False),
        (NEGATIVE_PLURALITY, 5, 2, False),
        (majority(1), 2, 2, False),
        (NEGATIVE_PLURALITY, 3, 4, True),
    ],
)
def test_plain_kelly_examples(rule, n, m, expected):
    v = is_E_manipulable(rule, K, n, m)
    assert v.holds is expected
    if expected:
        assert verify_witness(rule, K, None, v.witness)
    else:
        assert v.witness is None and v.stats.states == closed_form_states(n, m)


@pytest.mark.parametrize(
    "rule,ext,n,m,expected",
    [
        (COPELAND, K, 3, 2, True),
        (NEGATIVE_PLURALITY, K, 4, 3, False),
        (NEGATIVE_PLURALITY, F, 4, 3, True),
        (NEGATIVE_PLURALITY, K, 3, 4, False),
        (NEGATIVE_PLURALITY, F, 3, 2, True),
    ],
)
def test_winner_information_examples(rule, ext, n, m, expected):
    v = is_Omega_E_manipulable(rule, ext, winner_info(rule), n, m)
    assert v.holds is expected
    if expected:
        assert v.witness.info_kind == "winner"
        assert verify_witness(rule, ext, winner_info(rule), v.witness)


@pytest.mark.parametrize("i", [1, 2])
def test_hand_built_copeland_witness(i):
    w = Witness(
        individual=i,
        sincere=(2, 1, 3),
        misreport=(2, 3, 1),
        info_kind="winner",
        info_outcome=frozenset({1, 2}),
        gain_at=PartialProfile(i, ((1, 2, 3),)),
        outcome_sincere=frozenset({1, 2}),
        outcome_misreport=frozenset({2}),
    )
    assert verify_witness(COPELAND, K, winner_info(COPELAND), w)
    swapped = dataclasses.replace(
        w, sincere=w.misreport, misreport=w.sincere,
        outcome_sincere=w.outcome_misreport, outcome_misreport=w.outcome_sincere,
    )
    assert not verify_witness(COPELAND, K, winner_info(COPELAND), swapped)


def test_witness_with_gain_outside_its_cell_is_rejected():
    v = is_Omega_E_manipulable(BORDA, K, winner_info(BORDA), 3, 2)
    w = v.witness
    assert verify_witness(BORDA, K, winner_info(BORDA), w)
    other = frozenset(range(1, 4)) - w.info_outcome
    assert not verify_witness(BORDA, K, winner_info(BORDA), dataclasses.replace(w, info_outcome=other))
    assert not verify_witness(BORDA, K, ZERO, w)
    assert not verify_witness(BORDA, F, winner_info(BORDA), dataclasses.replace(w, outcome_sincere=other))


def test_malformed_witnesses():
    w = is_E_manipulable(BORDA, K, 3, 2).witness
    with pytest.raises(InputError):
        verify_witness(BORDA, K, None, dataclasses.replace(w, misreport=(1, 2)))
    with pytest.raises(InputError):
        verify_witness(BORDA, K, None, dataclasses.replace(w, gain_at=PartialProfile(2, w.gain_at.orders)))
    with pytest.raises(InputError):
        Witness.from_json({"individual": 1})
    bad = w.to_json() | {"sincere": [1, 1, 2]}
    with pytest.raises(InputError):
        Witness.from_json(bad)


@pytest.mark.parametrize("rule", ZOO)
@pytest.mark.parametrize("ext", [K, F])
@pytest.mark.parametrize("kind", [None, *KINDS])
@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (3, 3)])
def test_search_agrees_with_brute_force(rule, ext, kind, n, m):
    v = search(rule, ext, kind, n, m)
    assert v.holds == brute_force(rule, ext, kind or "complete", n, m)
    if v.holds:
        assert verify_witness(rule, ext, None if kind is None else spec(kind, rule), v.witness)
        jsonschema.validate(v.witness.to_json(), WITNESS_SCHEMA)
        assert Witness.from_json(v.witness.to_json()) == v.witness
    else:
        assert v.stats.states == closed_form_states(n, m)


def test_closed_form_counts_every_tuple():
    for n, m in [(2, 2), (2, 3), (3, 2)]:
        N = len(all_orders(n))
        brute = sum(1 for _ in itertools.product(range(m), range(N), range(N - 1), range(N ** (m - 1))))
        assert closed_form_states(n, m) == brute


@pytest.mark.parametrize(
    "rule,ext,kind,n,m",
    [
        (BORDA, K, "winner", 4, 3),
        (COPELAND, K, "winner", 4, 3),
        (NEGATIVE_PLURALITY, F, "winner", 4, 3),
        (NEGATIVE_PLURALITY, K, None, 4, 4),
        (PLURALITY, K, "winner", 3, 5),
    ],
)
def test_witness_is_deterministic_across_runs_and_workers(rule, ext, kind, n, m):
    first = search(rule, ext, kind, n, m)
    again = search(rule, ext, kind, n, m)
    threaded = search(rule, ext, kind, n, m, workers=4)
    assert first.witness == again.witness == threaded.witness
    assert first.stats.states == again.stats.states == threaded.stats.states


def test_parallel_negative_verdict_counts_everything():
    v = is_Omega_E_manipulable(NEGATIVE_PLURALITY, K, winner_info(NEGATIVE_PLURALITY), 4, 3, workers=3)
    assert not v.holds and v.stats.states == closed_form_states(4, 3)


@pytest.mark.parametrize("rule", [*ZOO, positional(3, 1, 0)])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_monotone_hierarchy(rule, m):
    zero = is_Omega_E_manipulable(rule, K, ZERO, 3, m).holds
    win = is_Omega_E_manipulable(rule, K, winner_info(rule), 3, m).holds
    full = is_Omega_E_manipulable(rule, K, COMPLETE, 3, m).holds
    assert (not zero or win) and (not win or full)
    assert full == is_E_manipulable(rule, K, 3, m).holds


def resolute_brute_force(rule, kind, m):
    """Manipulability of a resolute rule read on single winners, with rank comparisons only."""
    n = 2
    for i in range(1, m + 1):
        space = list(enumerate_partial_profiles(n, m, i))
        for q in all_orders(n):
            before = [min(winners(rule, pp.splice(q))) for pp in space]
            if kind == "complete":
                cells = [[k] for k in range(len(space))]
            elif kind == "zero":
                cells = [list(range(len(space)))]
            else:
                cells = [[k for k in range(len(space)) if before[k] == x] for x in set(before)]
            for qp in all_orders(n):
                after = [min(winners(rule, pp.splice(qp))) for pp in space]
                for cell in cells:
                    if all(rank(q, after[k]) <= rank(q, before[k]) for k in cell) and any(
                        rank(q, after[k]) < rank(q, before[k]) for k in cell
                    ):
                        return True
    return False


@pytest.mark.parametrize("rule", [BORDA, PLURALITY, positional(3, 1), positional(Fraction(1, 2), 0)])
@pytest.mark.parametrize("m", [3, 5])
@pytest.mark.parametrize("kind", KINDS)
def test_resolute_slice_matches_single_winner_reading(rule, m, kind):
    for p in itertools.product(all_orders(2), repeat=m):
        assert len(winners(rule, p)) == 1
    expected = resolute_brute_force(rule, kind, m)
    for ext in (K, F):
        assert is_Omega_E_manipulable(rule, ext, spec(kind, rule), 2, m).holds == expected


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_transfer_propositions(n, m):
    v = check_transfer_propositions(n, m)
    assert v.holds, v.counterexample
    assert "fishburn antisymmetric: True" in v.note


def test_search_refuses_beyond_bound():
    with pytest.raises(BoundError):
        is_E_manipulable(BORDA, K, 3, 3, max_states=100)
    with pytest.raises(BoundError):
        is_Omega_E_manipulable(BORDA, K, ZERO, 3, 2, max_states=0)


def test_winner_information_must_match_rule():
    with pytest.raises(InputError):
        is_Omega_E_manipulable(BORDA, K, winner_info(COPELAND), 3, 2)
