"""Second-price auction semantics and exhaustive property checks.

All money amounts are exact rationals (fractions.Fraction); dominance is a
family of inequalities whose boundary cases (a deviation tying the best
competing bid) must not be blurred by floating point.

Tie-breaking: the lowest-index participant among the maximal bidders wins.
Weak dominance of truthful bidding and valuation-wise efficiency both hold
under this rule; it also makes the outcome a function of the bids, which
the soundness check verifies.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

DEFAULT_SWEEP_BUDGET = 10_000_000

Amount = Fraction
AuctionRule = Callable[[Sequence[Fraction]], "AuctionOutcome"]


def to_amount(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass int, str, or Fraction for exactness")
    return Fraction(value)


def to_amounts(values, label: str = "amount") -> tuple[Fraction, ...]:
    out = tuple(to_amount(v) for v in values)
    for i, v in enumerate(out):
        if v < 0:
            raise ValueError(f"negative {label} {v} at index {i}")
    return out


@dataclass(frozen=True)
class AuctionOutcome:
    """Binary allocation vector and payment vector; not self-validating so
    that deliberately broken rules can be fed to the soundness checker."""

    x: tuple[int, ...]
    p: tuple[Fraction, ...]


def outcome_violations(out: AuctionOutcome, n: int) -> list[str]:
    """Soundness defects of a single outcome, empty when sound."""
    problems = []
    if len(out.x) != n or len(out.p) != n:
        problems.append(f"vectors sized ({len(out.x)},{len(out.p)}), expected {n}")
        return problems
    if any(xi not in (0, 1) for xi in out.x):
        problems.append("allocation entries must be 0 or 1")
    if sum(out.x) != 1:
        problems.append(f"expected exactly one winner, got {sum(out.x)}")
    for i, (xi, pi) in enumerate(zip(out.x, out.p)):
        if pi < 0:
            problems.append(f"negative payment {pi} for participant {i}")
        if xi == 0 and pi != 0:
            problems.append(f"losing participant {i} pays {pi} instead of 0")
    return problems


def run_spa(bids: Sequence) -> AuctionOutcome:
    """Second-price rule: highest bid wins, pays the best competing bid."""
    b = to_amounts(bids, "bid")
    if not b:
        raise ValueError("auction needs at least one bid")
    winner = max(range(len(b)), key=lambda i: (b[i], -i))
    price = max((b[j] for j in range(len(b)) if j != winner), default=Fraction(0))
    return _checked(_outcome(len(b), winner, price))


def run_first_price(bids: Sequence) -> AuctionOutcome:
    """Mutant rule for falsification runs: the winner pays its own bid."""
    b = to_amounts(bids, "bid")
    if not b:
        raise ValueError("auction needs at least one bid")
    winner = max(range(len(b)), key=lambda i: (b[i], -i))
    return _checked(_outcome(len(b), winner, b[winner]))


RULES: dict[str, AuctionRule] = {"second-price": run_spa, "first-price": run_first_price}


def _outcome(n: int, winner: int, price: Fraction) -> AuctionOutcome:
    return AuctionOutcome(
        x=tuple(1 if i == winner else 0 for i in range(n)),
        p=tuple(price if i == winner else Fraction(0) for i in range(n)),
    )


def _checked(out: AuctionOutcome) -> AuctionOutcome:
    problems = outcome_violations(out, len(out.x))
    if problems:
        raise RuntimeError(f"auction rule produced an unsound outcome: {problems}")
    return out


def payoff(v_i, x_i: int, p_i) -> Fraction:
    return to_amount(v_i) * x_i - to_amount(p_i)


@dataclass(frozen=True)
class BidGrid:
    points: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", to_amounts(self.points, "grid point"))
        if not self.points:
            raise ValueError("grid must be non-empty")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError("grid points must be strictly ascending")


def parse_grid(text: str) -> BidGrid:
    """Grid syntax: explicit "0,1,2" or inclusive range "start:stop:step"."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range grid must be start:stop:step, got {text!r}")
        start, stop, step = (Fraction(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        points = []
        v = start
        while v <= stop:
            points.append(v)
            v += step
        return BidGrid(tuple(points))
    return BidGrid(tuple(Fraction(p) for p in text.split(",")))


@dataclass(frozen=True)
class DominanceCounterexample:
    agent: int
    truthful_bids: tuple[Fraction, ...]
    deviation_bids: tuple[Fraction, ...]
    truthful_payoff: Fraction
    deviation_payoff: Fraction


@dataclass(frozen=True)
class DominanceResult:
    holds: bool
    cells: int
    counterexample: DominanceCounterexample | None = None


def _agent_counterexample(
    i: int,
    v_i: Fraction,
    n: int,
    opponent_grid: tuple[Fraction, ...],
    deviations: tuple[Fraction, ...],
    rule: AuctionRule,
) -> tuple[tuple[int, int, int], DominanceCounterexample] | None:
    """First (by canonical sweep order) profitable deviation for agent i."""
    for oi, others in enumerate(itertools.product(opponent_grid, repeat=n - 1)):
        truthful = others[:i] + (v_i,) + others[i:]
        out = rule(truthful)
        truth_pay = payoff(v_i, out.x[i], out.p[i])
        for di, dev in enumerate(deviations):
            dev_bids = others[:i] + (dev,) + others[i:]
            dev_out = rule(dev_bids)
            dev_pay = payoff(v_i, dev_out.x[i], dev_out.p[i])
            if dev_pay > truth_pay:
                return (i, oi, di), DominanceCounterexample(
                    agent=i,
                    truthful_bids=truthful,
                    deviation_bids=dev_bids,
                    truthful_payoff=truth_pay,
                    deviation_payoff=dev_pay,
                )
    return None


def _dominance_chunk(args):
    return _agent_counterexample(*args)


def check_weak_dominance(
    valuations: Sequence,
    grid: BidGrid,
    rule: AuctionRule = run_spa,
    sweep_budget: int = DEFAULT_SWEEP_BUDGET,
    jobs: int = 1,
) -> DominanceResult:
    """Exhaustively compare truthful bidding against every grid deviation.

    For each participant, opponents range over the grid and the deviation
    domain is the grid plus the participant's own valuation.
    """
    v = to_amounts(valuations, "valuation")
    n = len(v)
    if n < 2:
        raise ValueError(f"dominance check needs more than one participant, got {n}")
    dev_domains = [tuple(sorted(set(grid.points) | {v_i})) for v_i in v]
    cells = sum(len(grid.points) ** (n - 1) * len(d) for d in dev_domains)
    if cells > sweep_budget:
        raise ValueError(f"dominance sweep of {cells} cells exceeds budget {sweep_budget}")
    tasks = [(i, v[i], n, grid.points, dev_domains[i], rule) for i in range(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = [h for h in pool.map(_dominance_chunk, tasks) if h is not None]
    else:
        hits = [h for h in map(_dominance_chunk, tasks) if h is not None]
    if hits:
        _, ce = min(hits, key=lambda h: h[0])
        return DominanceResult(False, cells, ce)
    return DominanceResult(True, cells)


@dataclass(frozen=True)
class EfficiencyResult:
    holds: bool
    winner: int
    winner_valuation: Fraction
    max_valuation: Fraction


def check_efficiency(valuations: Sequence, rule: AuctionRule = run_spa) -> EfficiencyResult:
    """Truthful bidding must award the good to a maximal valuation."""
    v = to_amounts(valuations, "valuation")
    out = rule(v)
    winner = out.x.index(1)
    return EfficiencyResult(
        holds=v[winner] == max(v),
        winner=winner,
        winner_valuation=v[winner],
        max_valuation=max(v),
    )


@dataclass(frozen=True)
class SoundnessReport:
    bids: tuple[Fraction, ...]
    violations: tuple[str, ...]
    outcome: AuctionOutcome

    @property
    def sound(self) -> bool:
        return not self.violations


def check_soundness(bids: Sequence, rule: AuctionRule = run_spa, repeats: int = 3) -> SoundnessReport:
    """Outcome invariants plus determinism across repeated evaluation."""
    b = to_amounts(bids, "bid")
    first = rule(b)
    problems = outcome_violations(first, len(b))
    for _ in range(repeats - 1):
        again = rule(b)
        if again != first:
            problems.append(f"nondeterministic outcome: {again} != {first}")
            break
    return SoundnessReport(b, tuple(problems), first)


def sweep_soundness(
    n: int, grid: BidGrid, rule: AuctionRule = run_spa, sweep_budget: int = DEFAULT_SWEEP_BUDGET
) -> list[SoundnessReport]:
    """check_soundness over every bid vector in grid^n; empty-violation list
    entries are included so callers can count the sweep size."""
    cells = len(grid.points) ** n
    if cells > sweep_budget:
        raise ValueError(f"soundness sweep of {cells} bid vectors exceeds budget {sweep_budget}")
    return [check_soundness(bids, rule) for bids in itertools.product(grid.points, repeat=n)]


def max_classical(xs: Sequence) -> Fraction:
    """Pick the witness element certified >= every element by direct scan."""
    items = [to_amount(x) for x in xs]
    if not items:
        raise ValueError("maximum of an empty list is undefined")
    for candidate in items:
        if all(candidate >= other for other in items):
            return candidate
    raise AssertionError("unreachable: a finite list has a maximal element")


def max_constructive(xs: Sequence) -> Fraction:
    """Fold recursively: a singleton is its own maximum, otherwise compare
    the head against the maximum of the rest."""
    items = [to_amount(x) for x in xs]
    if not items:
        raise ValueError("maximum of an empty list is undefined")

    def rec(i: int) -> Fraction:
        if i == len(items) - 1:
            return items[i]
        rest = rec(i + 1)
        return items[i] if items[i] >= rest else rest

    return rec(0)


@dataclass(frozen=True)
class AbstractDominanceResult:
    n: int
    grid: BidGrid
    holds: bool
    cells: int
    counterexample: DominanceCounterexample | None = None


def check_abstract_dominance(
    n: int, v_i, delta, rule: AuctionRule = run_spa, sweep_budget: int = DEFAULT_SWEEP_BUDGET
) -> AbstractDominanceResult:
    """Three-representative abstraction of the bid space for one bidder.

    Every bidder's domain collapses to {v_i - delta (floored at 0), v_i,
    v_i + delta}; only the distinguished bidder 0 is checked for profitable
    deviations.
    """
    value = to_amount(v_i)
    step = to_amount(delta)
    if n < 2:
        raise ValueError(f"dominance check needs more than one participant, got {n}")
    if step <= 0:
        raise ValueError("delta must be positive")
    points = tuple(sorted({max(Fraction(0), value - step), value, value + step}))
    grid = BidGrid(points)
    cells = len(points) ** (n - 1) * len(points)
    if cells > sweep_budget:
        raise ValueError(f"abstract sweep of {cells} cells exceeds budget {sweep_budget}")
    hit = _agent_counterexample(0, value, n, grid.points, grid.points, rule)
    if hit is None:
        return AbstractDominanceResult(n, grid, True, cells)
    return AbstractDominanceResult(n, grid, False, cells, hit[1])
