"""Social welfare functions on the two-representation model.

A pairwise SWF (m=3 only) stores one truth table per alternative pair; the
social bit for a pair is a function of the agents' bits for that same pair,
so independence of irrelevant alternatives holds by construction.  An
extensional SWF is a plain total table from profiles to orders and can
represent anything.

Table entry convention: the entry index for a pair packs the agents' bits
with agent 0 as the most significant bit, so index 2^n-1 is the all-ones
input and index 0 the all-zeros input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .orders import (
    CYCLIC_CODES,
    PAIRS3,
    PAIR_NAMES,
    LinearOrder,
    Profile,
    all_linear_orders,
    all_profiles,
    bits_of_order,
    kendall_tau,
    order_of_bits,
)

DEFAULT_CANDIDATE_BUDGET = 1 << 24

DICTATORIAL = "dictatorial"
INVERSELY_DICTATORIAL = "inversely_dictatorial"
CONSTANT = "constant"
SMALL_RANGE = "small_range"
UNCLASSIFIED = "unclassified"
CLASS_TAGS = (DICTATORIAL, INVERSELY_DICTATORIAL, CONSTANT, SMALL_RANGE, UNCLASSIFIED)


@dataclass(frozen=True)
class PairwiseSwf:
    """m=3 SWF as three per-pair truth tables over the agents' bits."""

    n: int
    tables: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"agent count must be positive, got {self.n}")
        size = 1 << self.n
        if len(self.tables) != 3 or any(len(t) != size for t in self.tables):
            raise ValueError(f"need 3 tables of {size} entries each")
        if any(e not in (0, 1) for t in self.tables for e in t):
            raise ValueError("table entries must be 0 or 1")
        for i1, i2, i3 in profile_pair_indices(self.n):
            code = (self.tables[0][i1], self.tables[1][i2], self.tables[2][i3])
            if code in CYCLIC_CODES:
                raise ValueError(f"tables produce cyclic social code {code} on some profile")


@dataclass(frozen=True)
class ExtensionalSwf:
    """Total map from every profile to a social order, indexed canonically."""

    n: int
    m: int
    outputs: tuple[LinearOrder, ...]

    def __post_init__(self):
        expected = factorial(self.m) ** self.n
        if len(self.outputs) != expected:
            raise ValueError(f"extensional SWF needs {expected} outputs, got {len(self.outputs)}")
        if any(o.m != self.m for o in self.outputs):
            raise ValueError("output orders must match the SWF's m")


Swf = PairwiseSwf | ExtensionalSwf


@dataclass(frozen=True)
class SwfClass:
    """Classification outcome; `unclassified` carries the offending range."""

    tag: str
    agent: int | None = None
    orders: tuple[LinearOrder, ...] | None = None

    def __post_init__(self):
        if self.tag not in CLASS_TAGS:
            raise ValueError(f"unknown class tag {self.tag!r}")
        if self.tag == CONSTANT and (self.orders is None or len(self.orders) != 1):
            raise ValueError("constant class carries exactly one order")
        if self.tag == SMALL_RANGE:
            if self.orders is None or len(self.orders) != 2:
                raise ValueError("small_range class carries exactly two orders")
            if kendall_tau(self.orders[0], self.orders[1]) > 1:
                raise ValueError("small_range orders must be at Kendall distance <= 1")


@dataclass(frozen=True)
class IiaViolation:
    pair: tuple[int, int]
    profiles: tuple[Profile, Profile]


@dataclass(frozen=True)
class UnanimityViolation:
    pair: tuple[int, int]
    profile: Profile


@lru_cache(maxsize=None)
def _codes6() -> tuple[tuple[int, int, int], ...]:
    return tuple(bits_of_order(o) for o in all_linear_orders(3))


@lru_cache(maxsize=None)
def profile_pair_indices(n: int) -> tuple[tuple[int, int, int], ...]:
    """Per canonical profile: the three table entry indices it selects."""
    out = []
    for combo in itertools.product(_codes6(), repeat=n):
        idx = [0, 0, 0]
        for agent, code in enumerate(combo):
            for k in range(3):
                idx[k] |= code[k] << (n - 1 - agent)
        out.append(tuple(idx))
    return tuple(out)


@lru_cache(maxsize=None)
def _order_rank(m: int) -> dict[LinearOrder, int]:
    return {o: i for i, o in enumerate(all_linear_orders(m))}


def profile_index(p: Profile) -> int:
    """Canonical position of p in all_profiles(p.n, p.m)."""
    rank = _order_rank(p.m)
    base = factorial(p.m)
    idx = 0
    for o in p.orders:
        idx = idx * base + rank[o]
    return idx


def evaluate(swf: Swf, p: Profile) -> LinearOrder:
    """The social order for profile p."""
    if isinstance(swf, PairwiseSwf):
        if p.n != swf.n or p.m != 3:
            raise ValueError(f"profile dimensions ({p.n},{p.m}) do not match SWF ({swf.n},3)")
        codes = [bits_of_order(o) for o in p.orders]
        bits = []
        for k in range(3):
            j = 0
            for agent, code in enumerate(codes):
                j |= code[k] << (swf.n - 1 - agent)
            bits.append(swf.tables[k][j])
        return order_of_bits(tuple(bits))
    if p.n != swf.n or p.m != swf.m:
        raise ValueError(f"profile dimensions ({p.n},{p.m}) do not match SWF ({swf.n},{swf.m})")
    return swf.outputs[profile_index(p)]


def to_extensional(swf: Swf) -> ExtensionalSwf:
    if isinstance(swf, ExtensionalSwf):
        return swf
    profiles = all_profiles(swf.n, 3)
    return ExtensionalSwf(swf.n, 3, tuple(evaluate(swf, p) for p in profiles))


def to_pairwise(swf: Swf) -> PairwiseSwf:
    """Rebuild the per-pair tables; fails if the SWF is not IIA (or m != 3)."""
    if isinstance(swf, PairwiseSwf):
        return swf
    if swf.m != 3:
        raise ValueError("pairwise form is defined for m=3 only")
    size = 1 << swf.n
    tables: list[list[int | None]] = [[None] * size for _ in range(3)]
    profiles = all_profiles(swf.n, 3)
    for p, out in zip(profiles, swf.outputs):
        out_bits = bits_of_order(out)
        codes = [bits_of_order(o) for o in p.orders]
        for k in range(3):
            j = 0
            for agent, code in enumerate(codes):
                j |= code[k] << (swf.n - 1 - agent)
            if tables[k][j] is None:
                tables[k][j] = out_bits[k]
            elif tables[k][j] != out_bits[k]:
                raise ValueError(f"SWF is not IIA on pair {PAIR_NAMES[k]}; no pairwise form")
    return PairwiseSwf(swf.n, tuple(tuple(t) for t in tables))


def satisfies_iia(swf: Swf) -> tuple[bool, IiaViolation | None]:
    """Scan all pairs and profile pairs for an independence violation."""
    if isinstance(swf, PairwiseSwf):
        return True, None
    profiles = all_profiles(swf.n, swf.m)
    for x, y in itertools.combinations(range(swf.m), 2):
        first_seen: dict[tuple[int, ...], tuple[Profile, int]] = {}
        for p, out in zip(profiles, swf.outputs):
            key = tuple(1 if o.prefers(x, y) else 0 for o in p.orders)
            bit = 1 if out.prefers(x, y) else 0
            if key not in first_seen:
                first_seen[key] = (p, bit)
            elif first_seen[key][1] != bit:
                return False, IiaViolation((x, y), (first_seen[key][0], p))
    return True, None


def satisfies_unanimity(swf: Swf) -> tuple[bool, UnanimityViolation | None]:
    """Unanimous pairwise preferences must be copied by the social order."""
    if isinstance(swf, PairwiseSwf):
        size = 1 << swf.n
        top = order_of_bits((1, 1, 1))
        bottom = order_of_bits((0, 0, 0))
        for k in range(3):
            if swf.tables[k][size - 1] != 1:
                return False, UnanimityViolation(PAIRS3[k], Profile((top,) * swf.n))
            if swf.tables[k][0] != 0:
                return False, UnanimityViolation(PAIRS3[k], Profile((bottom,) * swf.n))
        return True, None
    profiles = all_profiles(swf.n, swf.m)
    for p, out in zip(profiles, swf.outputs):
        for x, y in itertools.combinations(range(swf.m), 2):
            agent_bits = {o.prefers(x, y) for o in p.orders}
            if len(agent_bits) == 1 and out.prefers(x, y) != next(iter(agent_bits)):
                return False, UnanimityViolation((x, y), p)
    return True, None


def _all_outputs(swf: Swf) -> tuple[list[Profile], list[LinearOrder]]:
    if isinstance(swf, PairwiseSwf):
        profiles = all_profiles(swf.n, 3)
        return profiles, [evaluate(swf, p) for p in profiles]
    return all_profiles(swf.n, swf.m), list(swf.outputs)


def is_dictatorial(swf: Swf) -> int | None:
    """The agent whose order the SWF always copies, if any."""
    profiles, outs = _all_outputs(swf)
    for i in range(profiles[0].n):
        if all(out == p.orders[i] for p, out in zip(profiles, outs)):
            return i
    return None


def is_inversely_dictatorial(swf: Swf) -> int | None:
    """The agent whose order the SWF always reverses, if any."""
    profiles, outs = _all_outputs(swf)
    for i in range(profiles[0].n):
        if all(out == p.orders[i].reversed() for p, out in zip(profiles, outs)):
            return i
    return None


def range_of(swf: Swf) -> frozenset[LinearOrder]:
    _, outs = _all_outputs(swf)
    return frozenset(outs)


def classify(swf: Swf) -> SwfClass:
    """Place an IIA-satisfying SWF into the range-structure taxonomy."""
    agent = is_dictatorial(swf)
    if agent is not None:
        return SwfClass(DICTATORIAL, agent=agent)
    agent = is_inversely_dictatorial(swf)
    if agent is not None:
        return SwfClass(INVERSELY_DICTATORIAL, agent=agent)
    rng = tuple(sorted(range_of(swf)))
    if len(rng) == 1:
        return SwfClass(CONSTANT, orders=rng)
    if len(rng) == 2 and kendall_tau(rng[0], rng[1]) <= 1:
        return SwfClass(SMALL_RANGE, orders=rng)
    return SwfClass(UNCLASSIFIED, orders=rng)


def _int_to_table(x: int, size: int) -> tuple[int, ...]:
    # entry 0 is the most significant bit, so integer order is lexicographic
    return tuple((x >> (size - 1 - j)) & 1 for j in range(size))


def enumerate_iia_swfs(n: int, candidate_budget: int = DEFAULT_CANDIDATE_BUDGET) -> list[PairwiseSwf]:
    """All acyclic-valid pairwise SWFs, lexicographic on concatenated tables.

    Brute force over candidate table triples: for each (ab, ac) pair of
    tables, the acyclicity constraint either forces or frees each bc entry,
    so the bc tables are completed directly instead of rescanned.
    """
    if n < 1:
        raise ValueError(f"agent count must be positive, got {n}")
    size = 1 << n
    candidates = (1 << size) ** 3
    if candidates > candidate_budget:
        raise ValueError(
            f"candidate space of {candidates} table triples exceeds budget {candidate_budget}"
        )
    indices = profile_pair_indices(n)
    shift = [size - 1 - j for j in range(size)]
    full = (1 << size) - 1
    out: list[PairwiseSwf] = []
    for t1 in range(1 << size):
        # group profiles by their ac-table entry, keyed on the ab bit:
        # ab=0,ac=1 forces bc=1 (else 010); ab=1,ac=0 forces bc=0 (else 101)
        force1_by_i2 = [0] * size
        force0_by_i2 = [0] * size
        for i1, i2, i3 in indices:
            if (t1 >> shift[i1]) & 1:
                force0_by_i2[i2] |= 1 << shift[i3]
            else:
                force1_by_i2[i2] |= 1 << shift[i3]
        for t2 in range(1 << size):
            forced1 = 0
            forced0 = 0
            for i2 in range(size):
                if (t2 >> shift[i2]) & 1:
                    forced1 |= force1_by_i2[i2]
                else:
                    forced0 |= force0_by_i2[i2]
            if forced1 & forced0:
                continue
            free = full & ~(forced1 | forced0)
            free_shifts = [s for s in range(size - 1, -1, -1) if (free >> s) & 1]
            f = len(free_shifts)
            for c in range(1 << f):
                t3 = forced1
                for k, s in enumerate(free_shifts):
                    t3 |= ((c >> (f - 1 - k)) & 1) << s
                out.append(
                    PairwiseSwf(
                        n,
                        (_int_to_table(t1, size), _int_to_table(t2, size), _int_to_table(t3, size)),
                    )
                )
    return out


def recount_small_range(n: int) -> int:
    """Count small-range non-constant SWFs constructively, family by family.

    A family fixes two pairs to constant bits and lets one pair vary; it is
    admissible when both completions of the varying bit decode to orders.
    Independent of enumerate_iia_swfs.
    """
    size = 1 << n
    seen: set[PairwiseSwf] = set()
    for k in range(3):
        others = [p for p in range(3) if p != k]
        for fixed in itertools.product((0, 1), repeat=2):
            codes = []
            for b in (0, 1):
                code = [0, 0, 0]
                code[k] = b
                code[others[0]], code[others[1]] = fixed
                codes.append(tuple(code))
            if any(c in CYCLIC_CODES for c in codes):
                continue
            for t in range(1, (1 << size) - 1):  # skip the two constant tables
                tables = [None, None, None]
                tables[k] = _int_to_table(t, size)
                tables[others[0]] = (fixed[0],) * size
                tables[others[1]] = (fixed[1],) * size
                seen.add(PairwiseSwf(n, tuple(tables)))
    return len(seen)


@dataclass(frozen=True)
class ArrowReport:
    n: int
    iia_count: int
    survivors: tuple[PairwiseSwf, ...]
    survivor_classes: tuple[SwfClass, ...]
    impossibility_holds: bool


@dataclass(frozen=True)
class WilsonReport:
    n: int
    iia_count: int
    survivors: tuple[PairwiseSwf, ...]
    survivor_classes: tuple[SwfClass, ...]


@dataclass(frozen=True)
class TangLinReport:
    n: int
    iia_count: int
    census: dict[str, int]
    unclassified: tuple[PairwiseSwf, ...]
    theorem_holds: bool
    small_range_recount: int
    recount_matches: bool


def arrow_base_case(n: int, candidate_budget: int = DEFAULT_CANDIDATE_BUDGET) -> ArrowReport:
    """Filter the IIA enumeration by unanimity and classify the survivors."""
    swfs = enumerate_iia_swfs(n, candidate_budget)
    survivors = tuple(s for s in swfs if satisfies_unanimity(s)[0])
    classes = tuple(classify(s) for s in survivors)
    return ArrowReport(
        n=n,
        iia_count=len(swfs),
        survivors=survivors,
        survivor_classes=classes,
        impossibility_holds=all(c.tag == DICTATORIAL for c in classes),
    )


def wilson_base_case(n: int, candidate_budget: int = DEFAULT_CANDIDATE_BUDGET) -> WilsonReport:
    """Filter the IIA enumeration by surjectivity onto all six orders."""
    swfs = enumerate_iia_swfs(n, candidate_budget)
    survivors = tuple(s for s in swfs if len(range_of(s)) == 6)
    return WilsonReport(
        n=n,
        iia_count=len(swfs),
        survivors=survivors,
        survivor_classes=tuple(classify(s) for s in survivors),
    )


def verify_tang_lin(n: int, candidate_budget: int = DEFAULT_CANDIDATE_BUDGET) -> TangLinReport:
    """Classify every IIA SWF; the claim holds iff nothing is unclassified."""
    swfs = enumerate_iia_swfs(n, candidate_budget)
    census = {tag: 0 for tag in CLASS_TAGS}
    unclassified = []
    for s in swfs:
        c = classify(s)
        census[c.tag] += 1
        if c.tag == UNCLASSIFIED:
            unclassified.append(s)
    recount = recount_small_range(n)
    return TangLinReport(
        n=n,
        iia_count=len(swfs),
        census=census,
        unclassified=tuple(unclassified),
        theorem_holds=census[UNCLASSIFIED] == 0,
        small_range_recount=recount,
        recount_matches=recount == census[SMALL_RANGE],
    )


def pairwise_to_json(swf: PairwiseSwf) -> dict:
    tables = {
        PAIR_NAMES[k]: "".join(str(e) for e in swf.tables[k]) for k in range(3)
    }
    return {"form": "pairwise", "n": swf.n, "tables": tables}


def extensional_to_json(swf: ExtensionalSwf) -> dict:
    profiles = all_profiles(swf.n, swf.m)
    table = {str(p): str(out) for p, out in zip(profiles, swf.outputs)}
    return {"form": "extensional", "n": swf.n, "m": swf.m, "table": table}


def swf_to_json(swf: Swf) -> dict:
    if isinstance(swf, PairwiseSwf):
        return pairwise_to_json(swf)
    return extensional_to_json(swf)


def swf_class_to_json(c: SwfClass) -> dict:
    out: dict = {"tag": c.tag}
    if c.agent is not None:
        out["agent"] = c.agent
    if c.orders is not None:
        out["orders"] = [str(o) for o in c.orders]
    return out
