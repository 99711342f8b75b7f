"""Alternatives, linear orders, profiles and their wire format.

Alternatives are the integers ``1..n``. A linear order is a tuple listing the
alternatives best first, so ``q[0]`` has rank 1. A profile is a tuple of ``m``
orders, individual ``i`` (1-based) at index ``i - 1``.

Every enumeration in the package walks orders in lexicographic order of these
tuples (the order of :func:`itertools.permutations` on ``1..n``), and profiles
in lexicographic order with individual 1 most significant. Witness searches
inherit their tie-breaking from this fixed order.
"""

from __future__ import annotations

import itertools
import math
import re
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from sccmanip.errors import BoundError, InputError, ParseError

Order = tuple[int, ...]
Profile = tuple[Order, ...]
AltSet = frozenset[int]

DEFAULT_MAX_STATES = 10**7

_TOKEN = re.compile(r"\S+")


def linear_order(seq: Iterable[int], n: int | None = None) -> Order:
    """Validate ``seq`` as a ranking of ``1..n`` and return it as a tuple."""
    q = tuple(int(x) for x in seq)
    if n is None:
        n = len(q)
    if len(q) != n or sorted(q) != list(range(1, n + 1)):
        raise InputError(f"{list(q)} is not a linear order on 1..{n}")
    return q


def rank(q: Order, x: int) -> int:
    """1-based position of ``x`` in ``q``."""
    if not 1 <= x <= len(q):
        raise InputError(f"alternative {x} out of range 1..{len(q)}")
    return q.index(x) + 1


def top(q: Order) -> int:
    return q[0]


def bottom(q: Order) -> int:
    return q[-1]


def apply_transposition(q: Order, x: int, y: int) -> Order:
    """Return ``psi q`` where ``psi`` exchanges the alternatives ``x`` and ``y``."""
    if x == y:
        raise InputError("a transposition needs two distinct alternatives")
    n = len(q)
    if not (1 <= x <= n and 1 <= y <= n):
        raise InputError(f"alternatives {x}, {y} out of range 1..{n}")
    swap = {x: y, y: x}
    return tuple(swap.get(a, a) for a in q)


def enumerate_orders(n: int) -> Iterator[Order]:
    """All ``n!`` linear orders on ``1..n`` in lexicographic order."""
    if n < 1:
        raise InputError("n must be at least 1")
    return itertools.permutations(range(1, n + 1))


@lru_cache(maxsize=None)
def all_orders(n: int) -> tuple[Order, ...]:
    return tuple(enumerate_orders(n))


@lru_cache(maxsize=None)
def _order_positions(n: int) -> dict[Order, int]:
    return {q: k for k, q in enumerate(all_orders(n))}


def order_index(q: Order) -> int:
    """Position of ``q`` in :func:`enumerate_orders`."""
    try:
        return _order_positions(len(q))[tuple(q)]
    except KeyError:
        raise InputError(f"{list(q)} is not a linear order") from None


def profile_count(n: int, m: int) -> int:
    return math.factorial(n) ** m


def check_bound(n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Return ``(n!)^m``, raising :class:`BoundError` if it exceeds ``max_states``."""
    size = profile_count(n, m)
    if size > max_states:
        raise BoundError(size, max_states)
    return size


def make_profile(orders: Sequence[Sequence[int]]) -> Profile:
    if len(orders) < 2:
        raise InputError("a profile needs at least two individuals")
    n = len(orders[0])
    if n < 2:
        raise InputError("a profile needs at least two alternatives")
    return tuple(linear_order(q, n) for q in orders)


class PartialProfile(NamedTuple):
    """Orders of every individual except ``absent``, in increasing individual order."""

    absent: int
    orders: tuple[Order, ...]

    @property
    def m(self) -> int:
        return len(self.orders) + 1

    def splice(self, q: Order) -> Profile:
        """The full profile ``(pbar, q[i])``."""
        k = self.absent - 1
        return self.orders[:k] + (tuple(q),) + self.orders[k:]

    def position(self) -> int:
        """Position of this partial profile in :func:`enumerate_partial_profiles`."""
        if not self.orders:
            return 0
        base = math.factorial(len(self.orders[0]))
        idx = 0
        for q in self.orders:
            idx = idx * base + order_index(q)
        return idx


def partial_profile(absent: int, orders: Sequence[Sequence[int]]) -> PartialProfile:
    if not orders:
        raise InputError("a partial profile needs at least one present individual")
    n = len(orders[0])
    m = len(orders) + 1
    if not 1 <= absent <= m:
        raise InputError(f"absent individual {absent} out of range 1..{m}")
    return PartialProfile(absent, tuple(linear_order(q, n) for q in orders))


def restrict(p: Profile, i: int) -> PartialProfile:
    """Drop individual ``i`` from the full profile ``p``."""
    if not 1 <= i <= len(p):
        raise InputError(f"individual {i} out of range 1..{len(p)}")
    return PartialProfile(i, p[: i - 1] + p[i:])


def partial_profile_at(n: int, m: int, absent: int, idx: int) -> PartialProfile:
    """Inverse of :meth:`PartialProfile.position`."""
    orders = all_orders(n)
    base = len(orders)
    digits = []
    for _ in range(m - 1):
        idx, r = divmod(idx, base)
        digits.append(orders[r])
    if idx:
        raise InputError("partial profile index out of range")
    return PartialProfile(absent, tuple(reversed(digits)))


def enumerate_partial_profiles(
    n: int, m: int, absent: int, max_states: int = DEFAULT_MAX_STATES
) -> Iterator[PartialProfile]:
    """All ``(n!)^(m-1)`` partial profiles missing ``absent``, lexicographically."""
    if not 1 <= absent <= m:
        raise InputError(f"absent individual {absent} out of range 1..{m}")
    check_bound(n, m, max_states)
    for orders in itertools.product(all_orders(n), repeat=m - 1):
        yield PartialProfile(absent, orders)


def enumerate_profiles(n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> Iterator[Profile]:
    check_bound(n, m, max_states)
    return itertools.product(all_orders(n), repeat=m)


# -- alternative sets -------------------------------------------------------


def alt_set(members: Iterable[int], n: int | None = None) -> AltSet:
    s = frozenset(int(x) for x in members)
    if not s:
        raise InputError("alternative sets must be nonempty")
    if min(s) < 1 or (n is not None and max(s) > n):
        raise InputError(f"alternative set {sorted(s)} outside 1..{n}")
    return s


def mask_of(s: Iterable[int]) -> int:
    mask = 0
    for x in s:
        mask |= 1 << (x - 1)
    return mask


def set_of_mask(mask: int) -> AltSet:
    return frozenset(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


def altset_key(s: Iterable[int]) -> tuple[int, ...]:
    """Sort key ordering alternative sets lexicographically by their sorted members."""
    return tuple(sorted(s))


# -- wire format ------------------------------------------------------------


def format_order(q: Order) -> str:
    return " ".join(str(x) for x in q)


def format_profile(p: Profile) -> str:
    return ";".join(format_order(q) for q in p)


def format_partial_profile(pp: PartialProfile) -> str:
    return ";".join([f"!{pp.absent}"] + [format_order(q) for q in pp.orders])


def _parse_orders(text: str, offset: int = 0) -> list[Order]:
    if not text.isascii():
        raise ParseError("non-ASCII input", offset)
    orders: list[Order] = []
    n = None
    pos = offset
    for chunk in text.split(";"):
        tokens = [(pos + t.start(), t.group()) for t in _TOKEN.finditer(chunk)]
        if not tokens:
            raise ParseError("empty order", pos)
        for tok_pos, tok in tokens:
            if not tok.isdigit():
                raise ParseError(f"malformed token {tok!r}", tok_pos)
        values = [int(tok) for _, tok in tokens]
        if n is None:
            n = len(values)
        if len(values) != n:
            raise ParseError(f"expected {n} alternatives, got {len(values)}", pos)
        seen = set()
        for (tok_pos, _), v in zip(tokens, values):
            if not 1 <= v <= n:
                raise ParseError(f"alternative {v} out of range 1..{n}", tok_pos)
            if v in seen:
                raise ParseError(f"repeated alternative {v}", tok_pos)
            seen.add(v)
        orders.append(tuple(values))
        pos += len(chunk) + 1
    return orders


def parse_order(text: str) -> Order:
    orders = _parse_orders(text)
    if len(orders) != 1:
        raise ParseError("expected a single order", 0)
    return orders[0]


def parse_profile(text: str) -> Profile:
    """Parse ``"3 1 2;3 1 2;2 1 3"`` into a profile."""
    orders = _parse_orders(text)
    if len(orders) < 2:
        raise ParseError("a profile needs at least two individuals", len(text))
    if len(orders[0]) < 2:
        raise ParseError("a profile needs at least two alternatives", 0)
    return tuple(orders)


def parse_partial_profile(text: str) -> PartialProfile:
    """Parse ``"!2;1 2 3;3 2 1"``: individual 2 absent, individuals 1 and 3 present."""
    head, sep, rest = text.partition(";")
    if not head.startswith("!") or not head[1:].isdigit() or not sep:
        raise ParseError("partial profile must start with '!i;'", 0)
    absent = int(head[1:])
    orders = _parse_orders(rest, len(head) + 1)
    if not 1 <= absent <= len(orders) + 1:
        raise ParseError(f"absent individual {absent} out of range", 1)
    return PartialProfile(absent, tuple(orders))
