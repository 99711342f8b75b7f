from __future__ import annotations

import pytest

from sccmanip.errors import BoundError, ConfigError
from sccmanip.info import (
    COMPLETE,
    ZERO,
    at_least_as_informative,
    check_partition,
    info_sets,
    parse_info,
    partial_space_size,
    winner_cell,
    winner_info,
)
from sccmanip.prefs import PartialProfile, all_orders
from sccmanip.scc import BORDA, COPELAND, NEGATIVE_PLURALITY, PLURALITY, winners

ZOO = [BORDA, PLURALITY, NEGATIVE_PLURALITY, COPELAND]


def test_zero_and_complete_examples():
    (whole,) = info_sets(ZERO, 1, (1, 2, 3), 3, 2)
    assert len(whole) == 6
    singles = list(info_sets(COMPLETE, 1, (1, 2, 3), 3, 2))
    assert len(singles) == 6 and all(len(w) == 1 for w in singles)
    assert [next(w.partial_profiles()) for w in singles] == [PartialProfile(1, (q,)) for q in all_orders(3)]


@pytest.mark.parametrize("i", [1, 2])
def test_copeland_winner_cell_example(i):
    cells = {w.outcome: w for w in info_sets(winner_info(COPELAND), i, (2, 1, 3), 3, 2)}
    cell = cells[frozenset({1, 2})]
    assert list(cell.partial_profiles()) == [PartialProfile(i, ((1, 2, 3),))]
    assert PartialProfile(i, ((1, 2, 3),)) in cell
    assert winner_cell(COPELAND, i, (2, 1, 3), {1, 2}, 3, 2).members == cell.members


@pytest.mark.parametrize("rule", ZOO)
@pytest.mark.parametrize("m", [2, 3])
def test_winner_cells_are_literal_preimages(rule, m):
    for i in range(1, m + 1):
        for q in all_orders(3):
            cells = list(info_sets(winner_info(rule), i, q, 3, m))
            assert [sorted(c.outcome) for c in cells] == sorted(sorted(c.outcome) for c in cells)
            for cell in cells:
                assert len(cell) > 0
                for pp in cell.partial_profiles():
                    assert winners(rule, pp.splice(q)) == cell.outcome


@pytest.mark.parametrize("rule", ZOO)
@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_partition_property(rule, n, m):
    assert check_partition(rule, n, m).holds


@pytest.mark.parametrize("spec", [COMPLETE, ZERO])
@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (3, 3)])
def test_fixed_kinds_do_not_depend_on_sincere_order(spec, n, m):
    for i in range(1, m + 1):
        families = {tuple(w.members for w in info_sets(spec, i, q, n, m)) for q in all_orders(n)}
        assert len(families) == 1
        (family,) = families
        assert sum(bin(b).count("1") for b in family) == partial_space_size(n, m)


@pytest.mark.parametrize("spec", [COMPLETE, ZERO, winner_info(BORDA), winner_info(COPELAND)])
def test_informativeness_is_reflexive(spec):
    assert at_least_as_informative(spec, spec, 3, 2).holds


@pytest.mark.parametrize("rule", ZOO)
def test_informativeness_chain(rule):
    W = winner_info(rule)
    assert at_least_as_informative(COMPLETE, W, 3, 2).holds
    assert at_least_as_informative(W, ZERO, 3, 2).holds
    assert at_least_as_informative(COMPLETE, ZERO, 3, 2).holds


def test_informativeness_failures():
    v = at_least_as_informative(ZERO, COMPLETE, 2, 2)
    assert not v.holds
    i, q, cell = v.counterexample
    assert (i, q) == (1, (1, 2)) and cell == {"kind": "complete", "outcome": None}
    assert not at_least_as_informative(winner_info(BORDA), COMPLETE, 3, 2).holds
    assert not at_least_as_informative(ZERO, winner_info(BORDA), 3, 2).holds


def test_parse_info():
    assert parse_info("complete") == COMPLETE
    assert parse_info("winner", "borda") == winner_info(BORDA)
    with pytest.raises(ConfigError):
        parse_info("winner")
    with pytest.raises(ConfigError):
        parse_info("poll")


def test_info_sets_respect_bound():
    with pytest.raises(BoundError):
        list(info_sets(winner_info(BORDA), 1, (1, 2, 3), 3, 3, max_states=10))
