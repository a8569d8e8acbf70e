"""Backward fixed-point computation of minimal attacker-winning budgets.

For every position the solver maintains the Pareto frontier (antichain)
of energies from which the attacker wins.  Budgets originate at stuck
defender positions (attacker has already won: budget 0) and propagate
backwards:

* attacker positions take the minima over all moves of the inverse
  update of any winning successor budget;
* defender positions must beat every move, so each combination of one
  winning budget per successor contributes the supremum of the inverse
  updates, and the frontier keeps the minima over all combinations; a
  single unbeaten successor keeps the defender safe (empty frontier).

Updates only ever decrease energies, so the iteration is monotone and
terminates (ascending chains of upward-closed subsets of N^8 are
finite).  Alongside each minimal budget the solver records which move
and successor budget justified it when the budget was first derived;
strategy extraction replays those witnesses.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from .energy import Antichain, Energy, ZERO, inverse, leq, sup
from .errors import SolverLimitError
from .game import GameGraph, Position, is_defender

#: attacker witness: (move index, successor budget)
#: defender witness: tuple of (move index, successor budget), one per move
Witness = Tuple


class BudgetTable:
    """Solved winning budgets for one game graph."""

    def __init__(self, graph: GameGraph):
        self.graph = graph
        self.antichains: List[Antichain] = [Antichain() for _ in graph.positions]
        self.witnesses: List[Dict[Energy, Witness]] = [{} for _ in graph.positions]

    def _idx(self, pos) -> int:
        return pos if isinstance(pos, int) else self.graph.index[pos]

    def min_budgets(self, pos) -> List[Energy]:
        """Sorted minimal attacker-winning budgets at ``pos``."""
        return self.antichains[self._idx(pos)].sorted()

    def attacker_wins(self, pos, e: Energy) -> bool:
        """True iff ``e`` lies in the upward closure of the budgets at ``pos``."""
        return self.antichains[self._idx(pos)].dominates(e)


def _recompute_attacker(moves, antichains) -> Tuple[Antichain, Dict[Energy, Witness]]:
    fresh = Antichain()
    wits: Dict[Energy, Witness] = {}
    for mi, (tgt, update, _rule, _aux) in enumerate(moves):
        for b2 in antichains[tgt]:
            cand = inverse(b2, update)
            if fresh.insert(cand):
                wits[cand] = (mi, b2)
    return fresh, {e: wits[e] for e in fresh}


def _recompute_defender(moves, antichains) -> Tuple[Antichain, Dict[Energy, Witness]]:
    if not moves:
        fresh = Antichain([ZERO])
        return fresh, {ZERO: ()}
    contribs = []
    for mi, (tgt, update, _rule, _aux) in enumerate(moves):
        chain = antichains[tgt]
        if not chain:
            return Antichain(), {}
        contribs.append([(inverse(b2, update), (mi, b2)) for b2 in chain])

    fresh = Antichain()
    wits: Dict[Energy, Witness] = {}
    k = len(contribs)
    choice: List = [None] * k

    def descend(j: int, acc: Energy):
        if j == k:
            if fresh.insert(acc):
                wits[acc] = tuple(choice)
            return
        if fresh.dominates(acc):
            return      # completions only grow acc, so they stay dominated
        for inv, picked in contribs[j]:
            choice[j] = picked
            descend(j + 1, sup(acc, inv))

    descend(0, ZERO)
    return fresh, {e: wits[e] for e in fresh}


def solve(graph: GameGraph, max_steps: Optional[int] = None) -> BudgetTable:
    """Compute all minimal winning budgets by backward propagation."""
    n = len(graph.positions)
    if max_steps is None:
        max_steps = max(100_000, 500 * n)

    preds: List[set] = [set() for _ in range(n)]
    for i, outs in enumerate(graph.moves):
        for tgt, _u, _r, _a in outs:
            preds[tgt].add(i)

    table = BudgetTable(graph)
    defender = [is_defender(pos) for pos in graph.positions]

    pending = deque()
    queued = [False] * n

    def push(i: int):
        if not queued[i]:
            queued[i] = True
            pending.append(i)

    for i, pos in enumerate(graph.positions):
        if defender[i] and not graph.moves[i]:
            table.antichains[i] = Antichain([ZERO])
            table.witnesses[i] = {ZERO: ()}
            for j in preds[i]:
                push(j)

    steps = 0
    antichains = table.antichains
    while pending:
        i = pending.popleft()
        queued[i] = False
        steps += 1
        if steps > max_steps:
            raise SolverLimitError("budget fixed point exceeded %d recomputations"
                                   % max_steps)
        if defender[i]:
            if not graph.moves[i]:
                continue            # seeded stuck defender, never changes
            fresh, wits = _recompute_defender(graph.moves[i], antichains)
        else:
            fresh, wits = _recompute_attacker(graph.moves[i], antichains)
        if fresh != antichains[i]:
            # Budgets carried over from the previous frontier keep their
            # original justification.  A witness therefore always points
            # at a budget that existed strictly earlier in the fixed-point
            # iteration, which keeps witness chains acyclic even across
            # zero-cost move cycles.
            old = table.witnesses[i]
            antichains[i] = fresh
            table.witnesses[i] = {e: old.get(e, wits[e]) for e in fresh}
            for j in preds[i]:
                push(j)
    return table


def attacker_wins(table: BudgetTable, pos, e: Energy) -> bool:
    return table.attacker_wins(pos, e)


def min_budgets(table: BudgetTable, pos) -> List[Energy]:
    return table.min_budgets(pos)
