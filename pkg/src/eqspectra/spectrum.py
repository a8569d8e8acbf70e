"""The spectrum of weak behavioural notions and verdict derivation.

Every notion is characterized by one energy coordinate: a preorder
holds from left to right exactly when the notion's coordinate is *not*
an attacker-winning budget at the corresponding attacker position.
The partial order between notions ("finer than") is stored as an
explicit edge list, transitively closed on demand; for every edge the
finer coordinate dominates the coarser one componentwise, which is
asserted at import time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Tuple

from .energy import Energy, INF, leq
from .solver import BudgetTable

I = INF


@dataclass(frozen=True)
class Notion:
    name: str
    long_name: str
    coord: Energy


_TABLE: Tuple[Tuple[str, str, Energy], ...] = (
    ("BBsr",      "branching bisimulation (stability-respecting)", (I, I, I, I, I, I, I, I)),
    ("BB",        "branching bisimulation",                        (I, I, I, 0, I, I, I, I)),
    ("DBsr",      "delay bisimulation (stability-respecting)",     (I, 0, I, I, I, I, I, I)),
    ("eta-bisim", "eta-bisimulation",                              (I, I, I, 0, 0, I, I, I)),
    ("DB",        "delay bisimulation",                            (I, 0, I, 0, I, I, I, I)),
    ("SB",        "stable bisimulation",                           (I, 0, 0, I, 0, I, I, I)),
    ("B",         "weak bisimulation",                             (I, 0, I, 0, 0, I, I, I)),
    ("2S",        "weak 2-nested simulation",                      (I, 0, I, 0, 0, I, I, 1)),
    ("C",         "contrasimulation",                              (I, 0, I, 0, 0, 0, I, I)),
    ("RS",        "weak ready simulation",                         (I, 0, I, 0, 0, I, 1, 1)),
    ("PF",        "weak possible futures",                         (I, 0, 1, 0, 0, I, I, 1)),
    ("IF",        "weak impossible futures",                       (I, 0, 1, 0, 0, 0, I, 1)),
    ("eta-sim",   "eta-simulation",                                (I, I, I, 0, 0, I, 0, 0)),
    ("1S",        "weak simulation",                               (I, 0, I, 0, 0, I, 0, 0)),
    ("R",         "weak readiness",                                (I, 0, 1, 0, 0, 1, 1, 1)),
    ("RSs",       "stable ready simulation",                       (I, 0, 0, I, 0, I, 1, 1)),
    ("IFs",       "stable impossible futures",                     (I, 0, 0, 1, 0, 0, I, 1)),
    ("F",         "weak failures",                                 (I, 0, 1, 0, 0, 0, 1, 1)),
    ("Rs",        "stable readiness",                              (I, 0, 0, 1, 0, 1, 1, 1)),
    ("Fs",        "stable failures",                               (I, 0, 0, 1, 0, 0, 1, 1)),
    ("T",         "weak traces",                                   (I, 0, 0, 0, 0, 0, 0, 0)),
)

NOTIONS: Dict[str, Notion] = {name: Notion(name, long_name, coord)
                              for name, long_name, coord in _TABLE}

#: Report order; finer notions precede coarser ones.
ORDER: Tuple[str, ...] = tuple(name for name, _ln, _c in _TABLE)

#: Immediate "finer than" edges of the hierarchy.
EDGES: Tuple[Tuple[str, str], ...] = (
    ("BBsr", "BB"), ("BBsr", "DBsr"),
    ("BB", "eta-bisim"), ("BB", "DB"),
    ("DBsr", "DB"), ("DBsr", "SB"),
    ("eta-bisim", "B"), ("eta-bisim", "eta-sim"),
    ("DB", "B"),
    ("SB", "RSs"), ("SB", "IFs"),
    ("B", "2S"), ("B", "C"),
    ("2S", "RS"), ("2S", "PF"),
    ("C", "IF"),
    ("RS", "1S"), ("RS", "R"),
    ("PF", "R"), ("PF", "IF"),
    ("eta-sim", "1S"),
    ("1S", "T"),
    ("IF", "F"),
    ("R", "F"),
    ("F", "T"),
    ("RSs", "Rs"),
    ("Rs", "Fs"),
    ("IFs", "Fs"),
    ("Fs", "T"),
)

for _finer, _coarser in EDGES:
    assert leq(NOTIONS[_coarser].coord, NOTIONS[_finer].coord), \
        "hierarchy edge %s -> %s contradicts the coordinates" % (_finer, _coarser)


def _transitive(edges) -> Dict[str, FrozenSet[str]]:
    below: Dict[str, set] = {n: set() for n in NOTIONS}
    for finer, coarser in edges:
        below[finer].add(coarser)
    changed = True
    while changed:
        changed = False
        for n in below:
            extra = set()
            for m in below[n]:
                extra |= below[m]
            if not extra <= below[n]:
                below[n] |= extra
                changed = True
    return {n: frozenset(s) for n, s in below.items()}


#: strictly coarser notions, transitively
COARSER: Dict[str, FrozenSet[str]] = _transitive(EDGES)
#: strictly finer notions, transitively
FINER: Dict[str, FrozenSet[str]] = {
    n: frozenset(m for m in NOTIONS if n in COARSER[m]) for n in NOTIONS}


@dataclass
class Verdict:
    """Per-notion outcome of one process comparison."""
    lr: Dict[str, bool]
    rl: Dict[str, bool]

    @property
    def eq(self) -> Dict[str, bool]:
        return {n: self.lr[n] and self.rl[n] for n in self.lr}

    def holds(self, name: str, relation: str = "equivalence") -> bool:
        if relation == "equivalence":
            return self.lr[name] and self.rl[name]
        if relation == "lr":
            return self.lr[name]
        if relation == "rl":
            return self.rl[name]
        raise ValueError("relation must be equivalence, lr or rl")


def classify(table: BudgetTable, pos_lr, pos_rl) -> Verdict:
    """Decide every notion of the spectrum from the solved budgets.

    ``pos_lr``/``pos_rl`` are the attacker positions ``[p,{q}]a`` and
    ``[q,{p}]a``.  A preorder is maintained iff its coordinate is not
    attacker-winning.  Hierarchy monotonicity (finer maintained implies
    coarser maintained) is re-checked on every call.
    """
    lr = {}
    rl = {}
    for name, notion in NOTIONS.items():
        lr[name] = not table.attacker_wins(pos_lr, notion.coord)
        rl[name] = not table.attacker_wins(pos_rl, notion.coord)
    for finer, coarser in EDGES:
        for side in (lr, rl):
            if side[finer] and not side[coarser]:
                raise RuntimeError(
                    "hierarchy violation: %s maintained but %s violated"
                    % (finer, coarser))
    return Verdict(lr=lr, rl=rl)


def frontier(verdict: Verdict, relation: str = "equivalence"
             ) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """(finest maintained, coarsest violated) for the chosen relation.

    The maintained set is closed toward coarser notions, so its finest
    members are those with no maintained strictly-finer notion; dually
    for the violated set.
    """
    maintained = {n for n in NOTIONS if verdict.holds(n, relation)}
    violated = set(NOTIONS) - maintained
    finest = tuple(n for n in ORDER
                   if n in maintained and not (FINER[n] & maintained))
    coarsest = tuple(n for n in ORDER
                     if n in violated and not (COARSER[n] & violated))
    return finest, coarsest


def coordinate(name: str) -> Energy:
    """Energy coordinate of a notion; raises KeyError for unknown names."""
    return NOTIONS[name].coord
