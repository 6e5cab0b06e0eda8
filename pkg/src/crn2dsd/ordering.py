"""Reactant-ordering validation and repair.

A compiled system garbage-collects exactly the buffer strands released by
second reactants of termolecular reactions. Those strands are identified by
their domains alone, so a species that is a *first* reactant in one reaction
and a *second* reactant in another termolecular reaction would make a
kept-buffer identity collide with a collected-buffer identity. The check
here is purely positional: inspect reactant order in each reaction.

``solve_ordering`` repairs a violating network when possible by swapping the
first two reactant positions of termolecular reactions. Bimolecular
reactions are never touched: swapping their positions would change the final
reactant, which determines the reaction's fuel-strand identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .crn import Crn, Reaction


@dataclass(frozen=True)
class RoleTable:
    """Positional roles per species: where it sits first, and where it sits
    second in a termolecular reaction. Position 2 of a bimolecular reaction
    is the final reactant and is exempt."""

    first_of: dict[str, frozenset[int]]
    second_ter_of: dict[str, frozenset[int]]

    @classmethod
    def from_reactant_lists(cls, lists: list[tuple[str, ...]]) -> "RoleTable":
        first: dict[str, set[int]] = {}
        second: dict[str, set[int]] = {}
        for rid, reactants in enumerate(lists):
            if len(reactants) >= 2:
                first.setdefault(reactants[0], set()).add(rid)
            if len(reactants) == 3:
                second.setdefault(reactants[1], set()).add(rid)
        return cls({s: frozenset(v) for s, v in first.items()},
                   {s: frozenset(v) for s, v in second.items()})

    @classmethod
    def from_crn(cls, crn: Crn) -> "RoleTable":
        return cls.from_reactant_lists([r.reactants for r in crn.reactions])


@dataclass(frozen=True)
class OrderingViolation:
    species: str
    first_in: int
    second_in: int

    def __str__(self) -> str:
        return (f"species {self.species} is first reactant of r{self.first_in} "
                f"and second reactant of termolecular r{self.second_in}")


class InfeasibleOrdering(ValueError):
    """No swap assignment repairs the network. ``witness`` is a minimal
    subset of reaction ids that is already unrepairable on its own."""

    def __init__(self, witness: frozenset[int]):
        ids = ", ".join(f"r{i}" for i in sorted(witness))
        super().__init__(f"no reactant ordering is consistent; conflicting reactions: {ids}")
        self.witness = witness


def _list_violations(lists: list[tuple[str, ...]]) -> list[OrderingViolation]:
    table = RoleTable.from_reactant_lists(lists)
    out = []
    for species in sorted(set(table.first_of) & set(table.second_ter_of)):
        for a in sorted(table.first_of[species]):
            for b in sorted(table.second_ter_of[species]):
                out.append(OrderingViolation(species, a, b))
    return out


def _is_consistent(lists: list[tuple[str, ...]]) -> bool:
    first: set[str] = set()
    second: set[str] = set()
    for reactants in lists:
        if len(reactants) >= 2:
            first.add(reactants[0])
        if len(reactants) == 3:
            second.add(reactants[1])
    return not (first & second)


def validate_ordering(crn: Crn) -> list[OrderingViolation]:
    """All (species, first-position reaction, second-termolecular reaction)
    conflicts, sorted by species name then reaction ids. Empty means valid."""
    return _list_violations([r.reactants for r in crn.reactions])


def _swapped(reactants: tuple[str, ...]) -> tuple[str, ...]:
    return (reactants[1], reactants[0]) + reactants[2:]


def _search(lists: list[tuple[str, ...]], ter_ids: list[int]) -> list[int] | None:
    """Smallest swap set, ties broken toward leaving low-id reactions alone.

    Iterative deepening over the number of swaps; within one budget a
    depth-first scan assigns no-swap before swap in reaction-id order, so the
    first full assignment found is the lexicographically smallest 0/1 swap
    vector. Partial assignments are pruned as soon as the already-decided
    reactions conflict (adding decisions never removes a conflict).
    """
    undecided = list(ter_ids)

    def consistent_prefix(current: list[tuple[str, ...]], decided_upto: int) -> bool:
        pending = set(undecided[decided_upto:])
        return _is_consistent([rs for i, rs in enumerate(current)
                               if i not in pending])

    for budget in range(len(ter_ids) + 1):
        current = list(lists)
        chosen: list[int] = []

        def dfs(pos: int, remaining: int) -> bool:
            if remaining > len(undecided) - pos:
                return False
            if not consistent_prefix(current, pos):
                return False
            if pos == len(undecided):
                return remaining == 0
            rid = undecided[pos]
            if dfs(pos + 1, remaining):
                return True
            if remaining > 0:
                current[rid] = _swapped(current[rid])
                chosen.append(rid)
                if dfs(pos + 1, remaining - 1):
                    return True
                chosen.pop()
                current[rid] = _swapped(current[rid])
            return False

        if dfs(0, budget):
            return chosen
    return None


def _feasible(lists: list[tuple[str, ...]]) -> bool:
    ter = [i for i, r in enumerate(lists) if len(r) == 3]
    return _search(lists, ter) is not None


def solve_ordering(crn: Crn) -> Crn:
    """Return a CRN that passes :func:`validate_ordering`, differing from the
    input only in the first two reactant positions of termolecular reactions.
    Final reactants, products, and reaction ids are untouched. Returns the
    input object unchanged if it is already valid.

    Raises :class:`InfeasibleOrdering` with a minimal conflicting reaction
    set when no swap assignment exists.
    """
    lists = [r.reactants for r in crn.reactions]
    ter_ids = [i for i, rs in enumerate(lists) if len(rs) == 3]
    swaps = _search(list(lists), ter_ids)
    if swaps is None:
        raise InfeasibleOrdering(_minimal_witness(lists))
    if not swaps:
        return crn
    swap_set = set(swaps)
    reactions = tuple(
        Reaction(r.id, _swapped(r.reactants) if r.id in swap_set else r.reactants,
                 r.products, line=r.line, col=r.col)
        for r in crn.reactions)
    return Crn(reactions)


def _minimal_witness(lists: list[tuple[str, ...]]) -> frozenset[int]:
    """Shrink to a minimal infeasible subset (greedy single-removal passes).

    Dropping a reaction relaxes the problem, so any subset that stays
    infeasible after a removal is a valid smaller witness.
    """
    keep = [i for i in range(len(lists))]
    for rid in list(keep):
        trial = [i for i in keep if i != rid]
        if not _feasible([lists[i] for i in trial]):
            keep = trial
    return frozenset(keep)


def exhaustive_orderings(lists: list[tuple[str, ...]]):
    """Yield every reachable reactant-list vector: all combinations of
    first/second swaps of termolecular reactions. Test oracle."""
    ter = [i for i, r in enumerate(lists) if len(r) == 3]
    for k in range(len(ter) + 1):
        for combo in combinations(ter, k):
            out = list(lists)
            for i in combo:
                out[i] = _swapped(out[i])
            yield out
