from __future__ import annotations

from hypothesis import strategies as st


def orders(n: int):
    return st.permutations(list(range(1, n + 1))).map(tuple)


@st.composite
def profiles(draw, n_range=(2, 5), m_range=(2, 5)):
    n = draw(st.integers(*n_range))
    m = draw(st.integers(*m_range))
    return tuple(draw(orders(n)) for _ in range(m))


def plurality_with_fallback(p):
    """The 7-voter resolute rule: the strict plurality leader, else individual 1's top."""
    counts = {}
    for q in p:
        counts[q[0]] = counts.get(q[0], 0) + 1
    best = max(counts.values())
    leaders = [x for x, c in counts.items() if c == best]
    return frozenset(leaders if len(leaders) == 1 else [p[0][0]])
