"""Alternatives, strict linear orders, preference profiles, and the
three-alternative bit codec.

Alternatives are indices 0..m-1 with display names a, b, c, ... (m <= 6
everywhere in this package).  A linear order is a permutation of the
alternatives, best first.  At m=3 an order is equivalently a triple of bits
(a>b, a>c, b>c); exactly six of the eight triples are acyclic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

ALTERNATIVE_NAMES = "abcdef"

# The three alternative pairs at m=3, in canonical order: ab, ac, bc.
PAIRS3 = ((0, 1), (0, 2), (1, 2))
PAIR_NAMES = ("ab", "ac", "bc")

# Bit triples that encode a cycle rather than an order.
CYCLIC_CODES = frozenset({(0, 1, 0), (1, 0, 1)})

DEFAULT_ORDER_CAP = 6
DEFAULT_PROFILE_BUDGET = 10_000_000


@dataclass(frozen=True, order=True)
class LinearOrder:
    """A strict total order over m alternatives; ranking lists them best first."""

    ranking: tuple[int, ...]

    def __post_init__(self):
        m = len(self.ranking)
        if m == 0 or sorted(self.ranking) != list(range(m)):
            raise ValueError(f"ranking must be a permutation of 0..m-1, got {self.ranking}")

    @property
    def m(self) -> int:
        return len(self.ranking)

    def position(self, x: int) -> int:
        """Rank of alternative x; 0 is best."""
        return self.ranking.index(x)

    def prefers(self, x: int, y: int) -> bool:
        return self.ranking.index(x) < self.ranking.index(y)

    def reversed(self) -> "LinearOrder":
        return LinearOrder(self.ranking[::-1])

    def __str__(self) -> str:
        return ">".join(ALTERNATIVE_NAMES[i] for i in self.ranking)


@dataclass(frozen=True)
class Profile:
    """One linear order per agent, all over the same alternatives."""

    orders: tuple[LinearOrder, ...]

    def __post_init__(self):
        if not self.orders:
            raise ValueError("a profile needs at least one agent")
        m = self.orders[0].m
        if any(o.m != m for o in self.orders):
            raise ValueError("all orders in a profile must share the same m")

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def m(self) -> int:
        return self.orders[0].m

    def __str__(self) -> str:
        return ";".join(str(o) for o in self.orders)


def all_linear_orders(m: int, cap: int = DEFAULT_ORDER_CAP) -> list[LinearOrder]:
    """All m! orders, lexicographic on the underlying permutations."""
    if m < 1 or m > cap:
        raise ValueError(f"alternative count {m} outside supported range 1..{cap}")
    return [LinearOrder(p) for p in itertools.permutations(range(m))]


def bits_of_order(order: LinearOrder) -> tuple[int, int, int]:
    """Encode an m=3 order as (a>b, a>c, b>c)."""
    if order.m != 3:
        raise ValueError(f"bit codec is defined for m=3 only, got m={order.m}")
    return tuple(1 if order.prefers(x, y) else 0 for x, y in PAIRS3)


def order_of_bits(code: tuple[int, int, int]) -> LinearOrder:
    """Decode a (a>b, a>c, b>c) triple; rejects the two cyclic codes."""
    code = tuple(int(b) for b in code)
    if len(code) != 3 or any(b not in (0, 1) for b in code):
        raise ValueError(f"bit code must be a triple of 0/1, got {code}")
    if code in CYCLIC_CODES:
        rels = ", ".join(
            f"{ALTERNATIVE_NAMES[x]}>{ALTERNATIVE_NAMES[y]}" if b else f"{ALTERNATIVE_NAMES[y]}>{ALTERNATIVE_NAMES[x]}"
            for (x, y), b in zip(PAIRS3, code)
        )
        raise ValueError(f"cyclic bit code {format_bits(code)}: {rels}")
    return _ORDER_BY_BITS[code]


def format_bits(code: tuple[int, int, int]) -> str:
    return "".join(str(int(b)) for b in code)


def kendall_tau(o1: LinearOrder, o2: LinearOrder) -> int:
    """Number of unordered pairs the two orders rank oppositely."""
    if o1.m != o2.m:
        raise ValueError(f"orders have mismatched sizes {o1.m} and {o2.m}")
    pos1 = {x: i for i, x in enumerate(o1.ranking)}
    pos2 = {x: i for i, x in enumerate(o2.ranking)}
    return sum(
        1
        for x, y in itertools.combinations(range(o1.m), 2)
        if (pos1[x] < pos1[y]) != (pos2[x] < pos2[y])
    )


def all_profiles(n: int, m: int, budget: int = DEFAULT_PROFILE_BUDGET) -> list[Profile]:
    """All (m!)^n profiles, lexicographic over per-agent canonical order indices."""
    if n < 1:
        raise ValueError(f"agent count must be positive, got {n}")
    count = factorial(m) ** n
    if count > budget:
        raise ValueError(f"profile enumeration of {count} profiles exceeds budget {budget}")
    orders = all_linear_orders(m)
    return [Profile(combo) for combo in itertools.product(orders, repeat=n)]


_ORDER_BY_BITS = {
    bits_of_order(o): o for o in (LinearOrder(p) for p in itertools.permutations(range(3)))
}
