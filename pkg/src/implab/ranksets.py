"""Preferences over nonempty subsets of a small ordered universe.

Objects are indices 0..m-1 ranked by a base order (identity by default, so
object 0 is the best).  Subsets are nonzero bitmasks.  A relation is a full
boolean matrix geq[A][B] meaning "A is at least as good as B"; the strict
part is derived as geq(A,B) and not geq(B,A).

The axiom catalog is grounded into concrete constraints over the geq atoms,
which serve both direct checking of a given relation and CNF encoding for
the axiom-subset impossibility search.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .orders import ALTERNATIVE_NAMES, LinearOrder
from .satkit import Cnf, solve


class Axiom(Enum):
    SIMPLE_DOMINANCE = "dominance"
    INDEPENDENCE = "independence"
    UNCERTAINTY_AVERSION = "aversion"
    UNCERTAINTY_APPEAL = "appeal"
    SIMPLE_TOP_MONOTONICITY = "topmono"


CATALOG = tuple(Axiom)


class RelationClass(Enum):
    TRANSITIVE = "transitive"
    WEAK_ORDER = "weak"
    LINEAR_ORDER = "linear"


@dataclass(frozen=True)
class Universe:
    m: int
    base_order: LinearOrder | None = None

    def __post_init__(self):
        if not 2 <= self.m <= 6:
            raise ValueError(f"universe size {self.m} outside supported range 2..6")
        if self.base_order is None:
            object.__setattr__(self, "base_order", LinearOrder(tuple(range(self.m))))
        if self.base_order.m != self.m:
            raise ValueError("base order size does not match the universe")

    def subsets(self) -> range:
        return range(1, 1 << self.m)

    def pos(self, x: int) -> int:
        return self.base_order.position(x)

    def prefers(self, x: int, y: int) -> bool:
        return self.pos(x) < self.pos(y)

    def best_pos(self, mask: int) -> int:
        return min(self.pos(x) for x in range(self.m) if mask >> x & 1)

    def worst_pos(self, mask: int) -> int:
        return max(self.pos(x) for x in range(self.m) if mask >> x & 1)

    def subset_name(self, mask: int) -> str:
        return "{" + ",".join(ALTERNATIVE_NAMES[x] for x in range(self.m) if mask >> x & 1) + "}"


@dataclass(frozen=True)
class GroundConstraint:
    """Either an unconditional preference or a one-step implication.

    With an antecedent: strict(antecedent) implies the consequent.  The
    consequent is strict or weak per the flag; strict(A,B) expands to
    geq(A,B) and not geq(B,A).
    """

    axiom: Axiom
    antecedent: tuple[int, int] | None
    consequent: tuple[int, int]
    strict: bool

    def sort_key(self) -> tuple[int, int, int, int]:
        ant = self.antecedent if self.antecedent is not None else (0, 0)
        return (*ant, *self.consequent)

    def describe(self, u: Universe) -> str:
        cons = f"{u.subset_name(self.consequent[0])} {'>' if self.strict else '>='} {u.subset_name(self.consequent[1])}"
        if self.antecedent is None:
            return cons
        return f"{u.subset_name(self.antecedent[0])} > {u.subset_name(self.antecedent[1])} implies {cons}"


@dataclass(frozen=True)
class GroundedAxiom:
    axiom: Axiom
    constraints: tuple[GroundConstraint, ...]
    vacuous: bool


@dataclass(frozen=True)
class SetRelation:
    universe: Universe
    geq: tuple[tuple[bool, ...], ...]  # indexed [A-1][B-1] over nonempty masks
    relation_class: RelationClass

    def __post_init__(self):
        size = (1 << self.universe.m) - 1
        if len(self.geq) != size or any(len(row) != size for row in self.geq):
            raise ValueError(f"geq matrix must be {size}x{size}")
        problem = class_violation(self.geq, self.relation_class)
        if problem:
            raise ValueError(f"declared class {self.relation_class.value} does not hold: {problem}")

    def geq_at(self, a: int, b: int) -> bool:
        return self.geq[a - 1][b - 1]

    def strict(self, a: int, b: int) -> bool:
        return self.geq[a - 1][b - 1] and not self.geq[b - 1][a - 1]


def class_violation(geq, relation_class: RelationClass) -> str | None:
    """First failed class constraint, scanning masks in ascending order."""
    size = len(geq)
    for a in range(size):
        for b in range(size):
            if not geq[a][b]:
                continue
            row_c = geq[b]
            out = geq[a]
            for c in range(size):
                if row_c[c] and not out[c]:
                    return f"transitivity fails at ({a + 1},{b + 1},{c + 1})"
    if relation_class is RelationClass.TRANSITIVE:
        return None
    for a in range(size):
        for b in range(a, size):
            if not geq[a][b] and not geq[b][a]:
                return f"totality fails at ({a + 1},{b + 1})"
    if relation_class is RelationClass.WEAK_ORDER:
        return None
    for a in range(size):
        for b in range(a + 1, size):
            if geq[a][b] and geq[b][a]:
                return f"antisymmetry fails at ({a + 1},{b + 1})"
    return None


def strongest_class(geq) -> RelationClass:
    for cls in (RelationClass.LINEAR_ORDER, RelationClass.WEAK_ORDER, RelationClass.TRANSITIVE):
        if class_violation(geq, cls) is None:
            return cls
    raise ValueError("relation is not even transitive")


def minmax_relation(u: Universe) -> SetRelation:
    """Rank sets by worst element, breaking ties by best element.

    Ties remain between distinct sets sharing worst and best (first at m=3),
    so the relation is a weak order rather than a linear one there.
    """
    masks = list(u.subsets())
    wb = {mask: (u.worst_pos(mask), u.best_pos(mask)) for mask in masks}
    geq = tuple(
        tuple(
            wb[a][0] < wb[b][0] or (wb[a][0] == wb[b][0] and wb[a][1] <= wb[b][1])
            for b in masks
        )
        for a in masks
    )
    return SetRelation(u, geq, strongest_class(geq))


def _ranked_triples(u: Universe):
    """All (x, y, z) with x > y > z in the base order."""
    ranked = u.base_order.ranking
    return itertools.combinations(ranked, 3)


def ground_axiom(u: Universe, ax: Axiom) -> GroundedAxiom:
    """Instantiate one axiom over all concrete subsets of the universe."""
    cs: list[GroundConstraint] = []
    if ax is Axiom.SIMPLE_DOMINANCE:
        for x, y in itertools.combinations(u.base_order.ranking, 2):
            cs.append(GroundConstraint(ax, None, (1 << x, (1 << x) | (1 << y)), True))
            cs.append(GroundConstraint(ax, None, ((1 << x) | (1 << y), 1 << y), True))
    elif ax is Axiom.INDEPENDENCE:
        for a in u.subsets():
            for b in u.subsets():
                if a == b:
                    continue
                for x in range(u.m):
                    bit = 1 << x
                    if (a | b) & bit:
                        continue
                    cs.append(GroundConstraint(ax, (a, b), (a | bit, b | bit), False))
    elif ax is Axiom.UNCERTAINTY_AVERSION:
        for x, y, z in _ranked_triples(u):
            cs.append(GroundConstraint(ax, None, (1 << y, (1 << x) | (1 << z)), True))
    elif ax is Axiom.UNCERTAINTY_APPEAL:
        for x, y, z in _ranked_triples(u):
            cs.append(GroundConstraint(ax, None, ((1 << x) | (1 << z), 1 << y), True))
    elif ax is Axiom.SIMPLE_TOP_MONOTONICITY:
        for x, y, z in _ranked_triples(u):
            cs.append(GroundConstraint(ax, None, ((1 << x) | (1 << z), (1 << y) | (1 << z)), True))
    else:
        raise ValueError(f"unknown axiom {ax}")
    cs.sort(key=GroundConstraint.sort_key)
    return GroundedAxiom(ax, tuple(cs), vacuous=not cs)


@dataclass(frozen=True)
class AxiomCheck:
    axiom: Axiom
    holds: bool
    vacuous: bool
    violation: GroundConstraint | None = None


def check_relation(rel: SetRelation, ax: Axiom) -> AxiomCheck:
    """First ground constraint the relation violates, in canonical order."""
    grounded = ground_axiom(rel.universe, ax)
    for c in grounded.constraints:
        if c.antecedent is not None and not rel.strict(*c.antecedent):
            continue
        a, b = c.consequent
        ok = rel.strict(a, b) if c.strict else rel.geq_at(a, b)
        if not ok:
            return AxiomCheck(ax, False, grounded.vacuous, c)
    return AxiomCheck(ax, True, grounded.vacuous)


def _var(u: Universe, a: int, b: int) -> int:
    size = (1 << u.m) - 1
    return (a - 1) * size + (b - 1) + 1


def encode_ranksets(
    u: Universe, axioms, relation_class: RelationClass = RelationClass.LINEAR_ORDER
) -> Cnf:
    """CNF with one variable per ordered subset pair (A,B) for geq(A,B)."""
    axioms = tuple(ax for ax in CATALOG if ax in set(axioms))
    clauses: list[tuple[int, ...]] = []
    masks = list(u.subsets())
    for a in masks:
        for b in masks:
            if a == b:
                continue
            for c in masks:
                if c == b:
                    continue
                clauses.append((-_var(u, a, b), -_var(u, b, c), _var(u, a, c)))
    if relation_class in (RelationClass.WEAK_ORDER, RelationClass.LINEAR_ORDER):
        for a in masks:
            for b in masks:
                if a < b:
                    clauses.append((_var(u, a, b), _var(u, b, a)))
                elif a == b:
                    clauses.append((_var(u, a, a),))
    if relation_class is RelationClass.LINEAR_ORDER:
        for a in masks:
            for b in masks:
                if a < b:
                    clauses.append((-_var(u, a, b), -_var(u, b, a)))
    for ax in axioms:
        for c in ground_axiom(u, ax).constraints:
            ca, cb = c.consequent
            cons_lits = [(_var(u, ca, cb),)]
            if c.strict:
                cons_lits.append((-_var(u, cb, ca),))
            if c.antecedent is None:
                clauses.extend(cons_lits)
            else:
                aa, ab = c.antecedent
                guard = (-_var(u, aa, ab), _var(u, ab, aa))
                for lits in cons_lits:
                    clauses.append(guard + lits)
    ordered = sorted(set(tuple(sorted(cl, key=abs)) for cl in clauses))
    size = (1 << u.m) - 1
    names = {
        _var(u, a, b): f"geq({u.subset_name(a)},{u.subset_name(b)})" for a in masks for b in masks
    }
    return Cnf(size * size, tuple(ordered), var_names=names)


def decode_ranksets(
    u: Universe, model: dict[int, bool], relation_class: RelationClass
) -> SetRelation:
    masks = list(u.subsets())
    geq = tuple(tuple(model[_var(u, a, b)] for b in masks) for a in masks)
    return SetRelation(u, geq, relation_class)


@dataclass(frozen=True)
class SubsetFinding:
    axioms: tuple[Axiom, ...]
    relation_class: RelationClass
    statuses: dict[int, str]  # m -> "sat" | "unsat"
    minimal_unsat_m: int | None
    pruned: bool = False
    witness: SetRelation | None = None  # model at the largest satisfiable m


@dataclass(frozen=True)
class DiscoveryReport:
    u_max: int
    relation_class: RelationClass
    findings: tuple[SubsetFinding, ...]


def _solve_cell(args) -> tuple[int, int, bool, dict[int, bool] | None]:
    subset_idx, m, axiom_values, class_value = args
    u = Universe(m)
    axioms = [Axiom(v) for v in axiom_values]
    res = solve(encode_ranksets(u, axioms, RelationClass(class_value)))
    return subset_idx, m, res.satisfiable, res.assignment


def find_inconsistent_subsets(
    u_max: int,
    catalog=CATALOG,
    relation_class: RelationClass = RelationClass.LINEAR_ORDER,
    prune: bool = False,
    m_min: int = 2,
    jobs: int = 1,
) -> DiscoveryReport:
    """Minimal universe size at which each axiom subset becomes unsatisfiable.

    With prune enabled, strict supersets of a subset already found
    inconsistent are skipped (and marked), mirroring the obvious implication.
    """
    if not 2 <= u_max <= 6:
        raise ValueError(f"u_max {u_max} outside supported range 2..6")
    catalog = tuple(catalog)
    subsets: list[tuple[Axiom, ...]] = []
    for r in range(1, len(catalog) + 1):
        subsets.extend(itertools.combinations(catalog, r))

    cells = [(i, m) for i, _ in enumerate(subsets) for m in range(m_min, u_max + 1)]
    results: dict[tuple[int, int], tuple[bool, dict[int, bool] | None]] = {}
    if jobs > 1 and not prune:
        tasks = [
            (i, m, tuple(ax.value for ax in subsets[i]), relation_class.value) for i, m in cells
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, m, sat, assignment in pool.map(_solve_cell, tasks, chunksize=4):
                results[(i, m)] = (sat, assignment)

    findings: list[SubsetFinding] = []
    inconsistent: list[set[Axiom]] = []
    for i, subset in enumerate(subsets):
        if prune and any(known < set(subset) for known in inconsistent):
            findings.append(
                SubsetFinding(subset, relation_class, {}, minimal_unsat_m=None, pruned=True)
            )
            continue
        statuses: dict[int, str] = {}
        minimal: int | None = None
        witness: SetRelation | None = None
        for m in range(m_min, u_max + 1):
            if (i, m) in results:
                sat, assignment = results[(i, m)]
            else:
                u = Universe(m)
                res = solve(encode_ranksets(u, subset, relation_class))
                sat, assignment = res.satisfiable, res.assignment
            statuses[m] = "sat" if sat else "unsat"
            if sat:
                witness = decode_ranksets(Universe(m), assignment, relation_class)
            elif minimal is None:
                minimal = m
        if minimal is not None:
            inconsistent.append(set(subset))
        findings.append(
            SubsetFinding(subset, relation_class, statuses, minimal, witness=witness)
        )
    return DiscoveryReport(u_max, relation_class, tuple(findings))


def relation_to_json(rel: SetRelation) -> dict:
    masks = list(rel.universe.subsets())
    return {
        "m": rel.universe.m,
        "class": rel.relation_class.value,
        "subsets": [rel.universe.subset_name(a) for a in masks],
        "geq_rows": ["".join("1" if v else "0" for v in row) for row in rel.geq],
    }
