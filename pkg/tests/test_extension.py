from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import orders
from sccmanip.errors import ConfigError, InputError
from sccmanip.extension import (
    Extension,
    check_kelly_properties,
    compare,
    is_antisymmetric,
    is_extension_rule_witness,
    is_refinement,
    kelly_property_violations,
    nonempty_subsets,
    parse_extension,
    relation_tables,
    strictly_prefers,
    succeq,
)
from sccmanip.prefs import all_orders, mask_of

K, F = Extension.KELLY, Extension.FISHBURN
S = frozenset


@pytest.mark.parametrize(
    "ext,q,B,C,expected",
    [
        (K, (1, 2, 3), {1}, {1, 2}, True),
        (K, (1, 2, 3), {1, 2}, {2}, True),
        (K, (1, 2, 3), {1, 3}, {2}, False),
        (K, (1, 2, 3), {2}, {1, 3}, False),
        (K, (3, 1, 2), {1, 2}, {1, 2}, True),
        (F, (1, 2, 3), {1, 2}, {2}, True),
        (F, (1, 2, 3), {1}, {1, 2}, True),
        (F, (1, 2, 3), {1, 2}, {1, 3}, False),  # B minus C = {2} does not dominate 1
        (F, (1, 2, 3), {1, 2}, {2, 3}, True),
        (F, (1, 2, 3), {1, 3}, {2, 3}, False),  # 3 does not dominate C minus B = {2}
        (K, (1, 2, 3), {1, 2}, {1, 3}, False),
    ],
)
def test_succeq_examples(ext, q, B, C, expected):
    assert succeq(ext, q, B, C) is expected


def test_strict_examples():
    q = (2, 3, 1)
    for B in nonempty_subsets(3):
        if B != {2}:
            assert strictly_prefers(K, q, {2}, B)
        assert not strictly_prefers(K, q, B, B)
        assert not strictly_prefers(F, q, B, B)
    assert strictly_prefers(F, (1, 2, 3), {1}, {1, 2})


@pytest.mark.parametrize(
    "B,C,expected",
    [({1}, {1, 2}, "strict"), ({1, 3}, {2}, "incomparable"), ({2}, {2}, "weak-equal"), ({3}, {1}, "reverse")],
)
def test_compare(B, C, expected):
    assert compare(K, (1, 2, 3), B, C) == expected


def test_empty_operand_rejected():
    with pytest.raises(InputError):
        succeq(K, (1, 2), set(), {1})
    with pytest.raises(InputError):
        strictly_prefers(F, (1, 2), {1}, ())


def test_parse_extension():
    assert parse_extension("Kelly") is K
    assert parse_extension("fishburn") is F
    with pytest.raises(ConfigError):
        parse_extension("leximax")


@pytest.mark.parametrize("ext", list(Extension))
@pytest.mark.parametrize("n", [2, 3, 4])
def test_singleton_faithfulness(ext, n):
    assert is_extension_rule_witness(ext, n).holds


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kelly_properties_exhaustive(n):
    v = check_kelly_properties(n)
    assert v.holds, v.counterexample


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kelly_inside_fishburn_and_antisymmetry(n):
    assert is_refinement(K, F, n).holds
    if n >= 3:
        assert not is_refinement(F, K, n).holds
    assert is_antisymmetric(K, n).holds
    assert is_antisymmetric(F, n).holds


def test_overlapping_sets_are_not_strictly_ranked():
    # two shared alternatives rule out a strict Kelly preference
    q = (1, 2, 3)
    assert not strictly_prefers(K, q, S({1, 2}), S({1, 2, 3}))
    assert kelly_property_violations(q, S({1, 2}), S({1, 2, 3})) == []


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(orders(n), st.sets(st.integers(1, n), min_size=1),
                                                     st.sets(st.integers(1, n), min_size=1))))
def test_strict_part_is_generic(args):
    q, B, C = args
    for ext in Extension:
        assert strictly_prefers(ext, q, B, C) == (succeq(ext, q, B, C) and not succeq(ext, q, C, B))
        if ext is K:
            assert strictly_prefers(ext, q, B, C) == (succeq(ext, q, B, C) and S(B) != S(C))


@pytest.mark.parametrize("ext", list(Extension))
@pytest.mark.parametrize("n", [2, 3, 4])
def test_relation_tables_match_literal(ext, n):
    subsets = nonempty_subsets(n)
    for q in all_orders(n):
        weak, strict = relation_tables(ext, q)
        for B in subsets:
            for C in subsets:
                b, c = mask_of(B), mask_of(C)
                assert weak[b, c] == succeq(ext, q, B, C)
                assert strict[b, c] == strictly_prefers(ext, q, B, C)
