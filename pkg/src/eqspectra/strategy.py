"""Turn winning budgets into certified distinguishing formulas.

The solver records, for every minimal budget at every position, the
move (and successor budget) that justified it.  Replaying those
witnesses top-down assembles a formula whose shape follows the move
rule:

    delay                wraps the delayed formula in <e>
    procrastination      passes the delayed formula through
    observation          prefixes <a>
    finishing            the empty conjunction T
    immediate_conj       wraps the defender's conjuncts without delay
    late_conj            wraps the defender's conjuncts as a conjunction
    conj_answer          one conjunct per challenged state
    positive_conjunct    <e>chi
    negative_conjunct    ~<e>chi            (the flipped pair)
    stable_conj          conjunction guarded by ~<tau>T
    conj_stable_answer   one conjunct per stable challenged state
    stable_finishing     the bare stable conjunction /\\{~<tau>T}
    branching_conj       conjunction with an optional-step head
    branch_answer        one conjunct per unfollowed state
    branch_observation   the (alpha)phi head (accounting pays the depth)
    branch_accounting    passes the attacker formula through

When several moves justify the same budget the solver kept the first
in rule-table order at the time the budget was first derived; when
several minimal budgets fit the requested energy, extraction takes the
lexicographically least.  Every extracted
formula is post-checked (it must distinguish the position's processes
and cost no more than the budget); a failure raises ExtractionError
and indicates a bug rather than bad input.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .energy import Energy, leq
from .errors import ExtractionError
from .game import (ATT_BRANCH, ATT_CONJ, ATT_DELAYED, ATTACKER, DEF_BRANCH,
                   DEF_CONJ, DEF_STABLE, GameGraph, format_position)
from .hml import (Delayed, Evaluator, Formula, Neg, Obs, Pos, StableConj,
                  branch_conj, immediate_conj, price, stable_conj, std_conj)
from .solver import BudgetTable


class _Extractor:
    def __init__(self, sys, graph: GameGraph, table: BudgetTable):
        self.sys = sys
        self.graph = graph
        self.table = table
        self.memo: Dict[Tuple[int, Energy], object] = {}

    def _go(self, idx: int, budget: Energy):
        """Walk ``idx`` at the best minimal budget within ``budget``.

        A stored witness may reference a successor budget that a later
        fixed-point round improved upon; the frontier then holds a
        strictly smaller element, and the walk proceeds with that one.
        """
        wits = self.table.witnesses[idx]
        if budget not in wits:
            fitting = [b for b in self.table.antichains[idx] if leq(b, budget)]
            if not fitting:
                raise ExtractionError(
                    "budget %s is not winning at %s" %
                    (budget, format_position(self.sys, self.graph.positions[idx])))
            budget = min(fitting)
        return self.walk(idx, budget)

    def walk(self, idx: int, budget: Energy):
        key = (idx, budget)
        got = self.memo.get(key)
        if got is not None:
            return got
        pos = self.graph.positions[idx]
        kind = pos[0]
        moves = self.graph.moves[idx]
        wit = self.table.witnesses[idx].get(budget)
        if wit is None:
            raise ExtractionError("no witness for %s at %s" %
                                  (budget, format_position(self.sys, pos)))
        if kind in (DEF_CONJ, DEF_STABLE, DEF_BRANCH):
            result = self._walk_defender(pos, moves, wit)
        else:
            result = self._walk_attacker(pos, moves, wit)
        self.memo[key] = result
        return result

    def _walk_attacker(self, pos, moves, wit):
        mi, b2 = wit
        tgt, _update, rule, aux = moves[mi]
        if rule == "delay":
            return Delayed(self._go(tgt, b2))
        if rule in ("finishing", "immediate_conj"):
            return immediate_conj(self._go(tgt, b2))
        if rule == "procrastination":
            return self._go(tgt, b2)
        if rule == "observation":
            return Obs(aux, self._go(tgt, b2))
        if rule == "late_conj":
            return std_conj(self._go(tgt, b2))
        if rule in ("stable_conj", "branching_conj"):
            return self._go(tgt, b2)
        if rule == "positive_conjunct":
            return Pos(self._go(tgt, b2))
        if rule == "negative_conjunct":
            return Neg(self._go(tgt, b2))
        if rule == "branch_accounting":
            return self._go(tgt, b2)
        raise ExtractionError("unexpected attacker rule %r" % rule)

    def _walk_defender(self, pos, moves, wit):
        kind = pos[0]
        if kind == DEF_CONJ:
            return tuple(self._go(moves[mi][0], b2) for mi, b2 in wit)
        if kind == DEF_STABLE:
            conjuncts = []
            for mi, b2 in wit:
                tgt, _u, rule, _aux = moves[mi]
                if rule == "conj_stable_answer":
                    conjuncts.append(self._go(tgt, b2))
                # stable_finishing contributes no conjunct beyond ~<tau>T
            return StableConj(()) if not conjuncts else stable_conj(conjuncts)
        if kind == DEF_BRANCH:
            action = pos[2]
            conjuncts = []
            head = None
            for mi, b2 in wit:
                tgt, _u, rule, _aux = moves[mi]
                if rule == "branch_answer":
                    conjuncts.append(self._go(tgt, b2))
                else:   # branch_observation through the accounting position
                    head = self._go(tgt, b2)
            if head is None:
                raise ExtractionError("branching defender without observation move")
            return branch_conj(action, head, conjuncts)
        raise ExtractionError("unexpected defender kind %r" % kind)


def _pick_budget(table: BudgetTable, idx: int, e: Energy) -> Optional[Energy]:
    fitting = [b for b in table.antichains[idx] if leq(b, e)]
    return min(fitting) if fitting else None


def extract(sys, graph: GameGraph, table: BudgetTable, pos, e: Energy,
            evaluator: Optional[Evaluator] = None) -> Formula:
    """Distinguishing formula for attacker position ``pos`` within ``e``.

    ``pos`` must be an ``[p,Q]a`` attacker position whose budgets
    dominate ``e``.  The result is always post-checked: it distinguishes
    ``p`` from ``Q`` and its price fits the chosen minimal budget.
    """
    idx = pos if isinstance(pos, int) else graph.index[pos]
    position = graph.positions[idx]
    if position[0] != ATTACKER:
        raise ValueError("extraction starts at attacker [p,Q]a positions")
    budget = _pick_budget(table, idx, e)
    if budget is None:
        raise ValueError("energy %s is not attacker-winning at %s"
                         % (e, format_position(sys, position)))
    formula = _Extractor(sys, graph, table).walk(idx, budget)
    check = evaluator or Evaluator(sys)
    _, p, q_mask = position
    if not check.distinguishes(formula, p, q_mask):
        raise ExtractionError("formula %s fails to distinguish %s"
                              % (formula, format_position(sys, position)))
    if not leq(price(formula), budget):
        raise ExtractionError("formula %s priced %s over budget %s at %s"
                              % (formula, price(formula), budget,
                                 format_position(sys, position)))
    return formula


def extract_fragment(sys, graph: GameGraph, table: BudgetTable, idx: int,
                     budget: Energy):
    """Replay witnesses from any attacker-won position at an exact
    minimal budget; returns the layer object (formula, delayed formula
    or conjunct depending on the position variant).  No post-check."""
    return _Extractor(sys, graph, table).walk(idx, budget)


def certificates(sys, graph: GameGraph, table: BudgetTable, pos,
                 evaluator: Optional[Evaluator] = None) -> List[Tuple[Energy, Formula]]:
    """One certified formula per minimal budget at ``pos`` (sorted).

    Defender-won positions (e.g. comparing a process with itself)
    yield the empty list.
    """
    idx = pos if isinstance(pos, int) else graph.index[pos]
    out = []
    for budget in table.min_budgets(idx):
        out.append((budget, extract(sys, graph, table, idx, budget, evaluator)))
    return out
