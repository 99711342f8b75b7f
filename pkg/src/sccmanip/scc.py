"""Social choice correspondences: positional rules, Copeland and alpha-majority.

Two evaluation routes are provided and kept independent of each other:

* :func:`winners` evaluates one profile literally from the definitions, with
  :class:`fractions.Fraction` scores.
* :func:`winner_table` evaluates every profile at a given ``(n, m)`` at once
  with numpy, on integer-scaled weights, and stores each outcome as a bitmask
  (bit ``x - 1`` set iff ``x`` wins).

Neither route ever touches floating point, so argmax ties are exact.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np

from sccmanip.errors import ConfigError, InputError, ParseError
from sccmanip.prefs import (
    DEFAULT_MAX_STATES,
    AltSet,
    Profile,
    all_orders,
    check_bound,
    enumerate_profiles,
    order_index,
    rank,
    set_of_mask,
)
from sccmanip.verdict import Stats, Verdict

KINDS = ("positional", "borda", "plurality", "negative-plurality", "copeland", "majority")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {text!r}") from None


def scoring_vector(weights: Sequence) -> tuple[Fraction, ...]:
    """Validate ``w_1 >= ... >= w_n`` with ``w_1 > w_n`` and return exact weights."""
    w = tuple(Fraction(x) for x in weights)
    if len(w) < 2:
        raise ConfigError("a scoring vector needs at least two weights")
    if any(a < b for a, b in zip(w, w[1:])):
        raise ConfigError(f"scoring vector {_fmt_weights(w)} is not non-increasing")
    if not w[0] > w[-1]:
        raise ConfigError(f"scoring vector {_fmt_weights(w)} is constant")
    return w


def _fmt_weights(w: Sequence[Fraction]) -> str:
    return ",".join(str(x) for x in w)


@dataclass(frozen=True)
class SccRule:
    """A named correspondence. ``weights`` only for positional, ``alpha`` only for majority."""

    kind: str
    weights: tuple[Fraction, ...] | None = field(default=None)
    alpha: Fraction | None = field(default=None)
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown rule kind {self.kind!r}")
        if self.kind == "positional":
            object.__setattr__(self, "weights", scoring_vector(self.weights or ()))
        elif self.weights is not None:
            raise ConfigError(f"{self.kind} takes no weights")
        if self.kind == "majority" and self.alpha is not None:
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        elif self.kind != "majority" and self.alpha is not None:
            raise ConfigError(f"{self.kind} takes no alpha")
        # rules key every cache; Fraction hashing is too slow to repeat per lookup
        object.__setattr__(self, "_hash", hash((self.kind, self.weights, self.alpha)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.kind == "positional":
            return "positional:" + _fmt_weights(self.weights)
        if self.kind == "majority" and self.alpha is not None:
            return f"majority:{self.alpha}"
        return self.kind

    @property
    def is_positional(self) -> bool:
        return self.kind in ("positional", "borda", "plurality", "negative-plurality")

    def weights_for(self, n: int) -> tuple[Fraction, ...]:
        if self.kind == "positional":
            if len(self.weights) != n:
                raise ConfigError(f"{self} has {len(self.weights)} weights but n = {n}")
            return self.weights
        if self.kind == "borda":
            return tuple(Fraction(n - k) for k in range(1, n + 1))
        if self.kind == "plurality":
            return (Fraction(1),) + (Fraction(0),) * (n - 1)
        if self.kind == "negative-plurality":
            return (Fraction(1),) * (n - 1) + (Fraction(0),)
        raise ConfigError(f"{self} is not positional")

    def alpha_for(self, m: int) -> Fraction:
        return Fraction(m, 2) if self.alpha is None else self.alpha

    def validate(self, n: int, m: int) -> None:
        if n < 2 or m < 2:
            raise ConfigError("need at least two alternatives and two individuals")
        if self.is_positional:
            self.weights_for(n)
        if self.kind == "majority":
            if n != 2:
                raise ConfigError("the alpha-majority rule is only defined for n = 2")
            if self.alpha_for(m) < Fraction(m, 2):
                raise ConfigError(f"alpha must be at least m/2 = {Fraction(m, 2)}")


BORDA = SccRule("borda")
PLURALITY = SccRule("plurality")
NEGATIVE_PLURALITY = SccRule("negative-plurality")
COPELAND = SccRule("copeland")
MAJORITY = SccRule("majority")


def positional(*weights) -> SccRule:
    return SccRule("positional", weights=tuple(Fraction(w) for w in weights))


def majority(alpha=None) -> SccRule:
    return SccRule("majority", alpha=None if alpha is None else Fraction(alpha))


def parse_rule(text: str, weights: str | None = None, alpha: str | None = None) -> SccRule:
    """Parse a rule specifier such as ``"borda"``, ``"majority:3/2"`` or ``"positional:3,1,0"``.

    ``weights`` and ``alpha`` supply the parameter separately (``--weights`` / ``--alpha``).
    """
    name, _, arg = text.strip().partition(":")
    if name == "positional":
        arg = arg or weights
        if not arg:
            raise ConfigError("positional rule needs weights")
        return SccRule("positional", weights=tuple(parse_rational(x) for x in arg.split(",")))
    if name == "majority":
        arg = arg or alpha
        return SccRule("majority", alpha=parse_rational(arg) if arg else None)
    if arg:
        raise ConfigError(f"rule {name!r} takes no parameter")
    if name not in KINDS:
        raise ConfigError(f"unknown rule {text!r}")
    return SccRule(name)


# -- literal evaluation ------------------------------------------------------


def positional_score(w: Sequence[Fraction], x: int, p: Profile) -> Fraction:
    """Sum over individuals of the weight at the rank of ``x``."""
    if any(len(q) != len(w) for q in p):
        raise InputError("scoring vector and profile disagree on n")
    return sum((Fraction(w[rank(q, x) - 1]) for q in p), Fraction(0))


def majority_count(x: int, y: int, p: Profile) -> int:
    """Number of individuals ranking ``x`` strictly above ``y``."""
    return sum(1 for q in p if rank(q, x) < rank(q, y))


def copeland_score(x: int, p: Profile) -> int:
    """Majority wins minus majority losses; pairwise ties count for neither."""
    n = len(p[0])
    wins = losses = 0
    for y in range(1, n + 1):
        if y == x:
            continue
        cxy, cyx = majority_count(x, y, p), majority_count(y, x, p)
        if cxy > cyx:
            wins += 1
        elif cxy < cyx:
            losses += 1
    return wins - losses


def _argmax(scores: dict[int, object]) -> AltSet:
    best = max(scores.values())
    return frozenset(x for x, s in scores.items() if s == best)


RuleLike = Union[SccRule, Callable[[Profile], AltSet]]


@lru_cache(maxsize=None)
def _validate(rule: SccRule, n: int, m: int) -> None:
    rule.validate(n, m)


@lru_cache(maxsize=None)
def _exact_weights(rule: SccRule, n: int) -> tuple:
    """The scoring vector, as ints when every weight is integral (still exact)."""
    w = rule.weights_for(n)
    if all(x.denominator == 1 for x in w):
        return tuple(int(x) for x in w)
    return w


def winners(rule: RuleLike, p: Profile) -> AltSet:
    """Winner set of ``rule`` at ``p``, evaluated from the definitions."""
    if not isinstance(rule, SccRule):
        return frozenset(rule(p))
    n, m = len(p[0]), len(p)
    _validate(rule, n, m)
    alts = range(1, n + 1)
    if rule.is_positional:
        w = _exact_weights(rule, n)
        scores = dict.fromkeys(alts, 0)
        for q in p:
            for k, x in enumerate(q):
                scores[x] += w[k]
        return _argmax(scores)
    if rule.kind == "copeland":
        return _argmax({x: copeland_score(x, p) for x in alts})
    alpha = rule.alpha_for(m)
    a_count = sum(1 for q in p if q[0] == 1)
    if a_count > alpha:
        return frozenset({1})
    if m - a_count > alpha:
        return frozenset({2})
    return frozenset({1, 2})


def is_unanimous_rule(rule: SccRule, n: int, m: int) -> bool:
    """Whether the rule returns ``{x}`` whenever every individual top-ranks ``x``."""
    rule.validate(n, m)
    if rule.is_positional:
        w = rule.weights_for(n)
        return w[0] > w[1]
    if rule.kind == "copeland":
        return True
    return m > rule.alpha_for(m)


# -- vectorized winner tables ------------------------------------------------


@dataclass(frozen=True, eq=False)
class WinnerTable:
    """Outcome bitmask of every full profile at ``(n, m)``.

    ``masks`` has shape ``(n!,) * m``; axis ``i - 1`` indexes individual ``i``'s
    order by its lexicographic position.
    """

    rule: RuleLike
    n: int
    m: int
    masks: np.ndarray

    @property
    def size(self) -> int:
        return self.masks.size

    def outcome(self, p: Profile) -> AltSet:
        return set_of_mask(int(self.masks[tuple(order_index(q) for q in p)]))

    def slices(self, i: int) -> np.ndarray:
        """2-D view: row = order index of individual ``i``, column = partial profile position."""
        return _slices(self, i)

    def image(self) -> set[AltSet]:
        return {set_of_mask(int(v)) for v in np.unique(self.masks)}


@lru_cache(maxsize=64)
def _slices(table: WinnerTable, i: int) -> np.ndarray:
    N = len(all_orders(table.n))
    out = np.ascontiguousarray(np.moveaxis(table.masks, i - 1, 0)).reshape(N, -1)
    out.flags.writeable = False
    return out


def _mask_dtype(n: int):
    if n <= 8:
        return np.uint8
    if n <= 16:
        return np.uint16
    raise ConfigError("winner tables support at most 16 alternatives")


def _rank_table(n: int) -> np.ndarray:
    """``R[o, x - 1]`` = 0-based rank of ``x`` in order ``o``."""
    orders = np.array(all_orders(n), dtype=np.int64)
    R = np.empty_like(orders)
    np.put_along_axis(R, orders - 1, np.arange(n)[None, :].repeat(len(orders), 0), axis=1)
    return R


def _broadcast_sum(per_order: np.ndarray, copies: int) -> np.ndarray:
    """Sum ``per_order[o_1] + ... + per_order[o_copies]`` over all index tuples."""
    N = per_order.shape[0]
    tail = per_order.shape[1:]
    total = np.zeros((1,) * copies + tail, dtype=per_order.dtype)
    for k in range(copies):
        shape = [1] * copies
        shape[k] = N
        total = total + per_order.reshape(tuple(shape) + tail)
    return total


def _argmax_masks(scores: np.ndarray, dtype) -> np.ndarray:
    n = scores.shape[-1]
    top = scores.max(axis=-1, keepdims=True)
    powers = (1 << np.arange(n)).astype(np.int64)
    return ((scores == top).astype(np.int64) @ powers).astype(dtype)


def _positional_masks(w: Sequence[Fraction], n: int, m: int, dtype) -> np.ndarray:
    scale = math.lcm(*(x.denominator for x in w))
    iw = np.array([int(x * scale) for x in w], dtype=np.int64)
    S = iw[_rank_table(n)]
    rest = _broadcast_sum(S, m - 1)
    return np.stack([_argmax_masks(rest + S[o], dtype) for o in range(S.shape[0])])


def _copeland_masks(n: int, m: int, dtype) -> np.ndarray:
    R = _rank_table(n)
    beats = (R[:, :, None] < R[:, None, :]).astype(np.int16)
    rest = _broadcast_sum(beats, m - 1)
    out = []
    for o in range(beats.shape[0]):
        c = rest + beats[o]
        ct = np.swapaxes(c, -1, -2)
        score = (c > ct).sum(-1, dtype=np.int16) - (c < ct).sum(-1, dtype=np.int16)
        out.append(_argmax_masks(score, dtype))
    return np.stack(out)


def _majority_masks(alpha: Fraction, m: int, dtype) -> np.ndarray:
    first = np.array([1, 0], dtype=np.int64)  # orders (1,2) and (2,1)
    count = _broadcast_sum(first, m)
    a_wins = count * alpha.denominator > alpha.numerator
    b_wins = (m - count) * alpha.denominator > alpha.numerator
    return np.where(a_wins, 1, np.where(b_wins, 2, 3)).astype(dtype)


def _callable_masks(fn: Callable[[Profile], AltSet], n: int, m: int, dtype) -> np.ndarray:
    import itertools

    orders = all_orders(n)
    flat = np.empty(len(orders) ** m, dtype=dtype)
    for k, p in enumerate(itertools.product(orders, repeat=m)):
        mask = 0
        for x in fn(p):
            mask |= 1 << (x - 1)
        flat[k] = mask
    return flat.reshape((len(orders),) * m)


@lru_cache(maxsize=32)
def _build_table(rule: RuleLike, n: int, m: int) -> WinnerTable:
    dtype = _mask_dtype(n)
    if not isinstance(rule, SccRule):
        masks = _callable_masks(rule, n, m, dtype)
    elif rule.is_positional:
        masks = _positional_masks(rule.weights_for(n), n, m, dtype)
    elif rule.kind == "copeland":
        masks = _copeland_masks(n, m, dtype)
    else:
        masks = _majority_masks(rule.alpha_for(m), m, dtype)
    masks.flags.writeable = False
    return WinnerTable(rule, n, m, masks)


def winner_table(rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> WinnerTable:
    """Winner bitmasks for all ``(n!)^m`` profiles, built once per ``(rule, n, m)``."""
    if isinstance(rule, SccRule):
        rule.validate(n, m)
    check_bound(n, m, max_states)
    return _build_table(rule, n, m)


def image(rule: RuleLike, n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> set[AltSet]:
    """Every winner set the rule attains at some full profile."""
    return winner_table(rule, n, m, max_states).image()


# -- structural invariants, checked literally -------------------------------


def check_copeland_conservation(n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Copeland scores sum to zero on every profile."""
    start = time.perf_counter()
    count = 0
    for p in enumerate_profiles(n, m, max_states):
        count += 1
        if sum(copeland_score(x, p) for x in range(1, n + 1)) != 0:
            return Verdict(False, counterexample=p, stats=Stats(count, count))
    return Verdict(True, stats=Stats(count, count, (time.perf_counter() - start) * 1e3))


def check_np_lower_bound(n: int, m: int, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """``|NP(p)| >= max(1, n - m)`` everywhere, and ``n - m >= 2`` iff no profile has a single NP winner."""
    start = time.perf_counter()
    bound = max(1, n - m)
    count = 0
    smallest = n
    for p in enumerate_profiles(n, m, max_states):
        count += 1
        size = len(winners(NEGATIVE_PLURALITY, p))
        if size < bound:
            return Verdict(False, counterexample=p, stats=Stats(count, count))
        smallest = min(smallest, size)
    stats = Stats(count, count, (time.perf_counter() - start) * 1e3)
    if (n - m >= 2) != (smallest >= 2):
        return Verdict(False, counterexample=("smallest winner set", smallest), stats=stats)
    return Verdict(True, stats=stats, note=f"smallest winner set {smallest}")
