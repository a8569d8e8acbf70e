"""The spectroscopy energy game between attacker and defender.

Position variants (bitmask ``Q`` throughout)::

    [p,Q]a    attacker            (ATTACKER, p, Q)
    [p,Q]e    attacker delayed    (ATT_DELAYED, p, Q)
    [p,q]^    attacker conjunct   (ATT_CONJ, p, q)
    [p,Q]b    attacker branching  (ATT_BRANCH, p, Q)
    (p,Q)d    defender conj       (DEF_CONJ, p, Q)
    (p,Q)s    defender stable     (DEF_STABLE, p, Q)
    (p,a,p',Q,Qa)b defender branching (DEF_BRANCH, p, a, p2, Q, Qa)

Move table (update entries are relative or min-select; see energy.py):

    finishing           [p,{}]a  -> (p,{})d           0
    delay               [p,Q]a   -> [p,cl(Q)]e        0
    immediate_conj      [p,Q]a   -> (p,Q)d            -e5         (Q nonempty)
    procrastination     [p,Q]e   -> [p',Q]e           0           (p -tau-> p', p' != p)
    observation         [p,Q]e   -> [p',Q-a->]a       -e1         (p -a-> p', a visible)
    late_conj           [p,Q]e   -> (p,Q)d            0
    stable_conj         [p,Q]e   -> (p,Q&stable)s     0           (p stable)
    branching_conj      [p,Q]e   -> (p,a,p',Q\\Qa,Qa)b 0          (p -(a)-> p', {} != Qa subset Q)
    conj_answer         (p,Q)d   -> [p,q]^            -e3         (q in Q)
    positive_conjunct   [p,q]^   -> [p,cl({q})]e      min{1,6}
    negative_conjunct   [p,q]^   -> [q,cl({p})]e      min{1,7}, -1 at 8   (p != q)
    conj_stable_answer  (p,Q)s   -> [p,q]^            -e4         (q in Q)
    stable_finishing    (p,{})s  -> (p,{})d           -e4
    branch_answer       (p,a,p',Q,Qa)b -> [p,q]^      -e2-e3      (q in Q)
    branch_observation  (p,a,p',Q,Qa)b -> [p',Qa-(a)->]b  min{1,6}, -1 at 2,3
    branch_accounting   [p,Q]b   -> [p,Q]a            -e1

Every update is declining, so winning budgets propagate backwards by
Galois inversion (see solver.py).
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .energy import Update, format_update
from .errors import PositionLimitError
from .lts import TAU, TransitionSystem, bits

ATTACKER, ATT_DELAYED, ATT_CONJ, ATT_BRANCH, DEF_CONJ, DEF_STABLE, DEF_BRANCH = range(7)

KIND_NAMES = ("attacker", "attacker_delayed", "attacker_conjunct",
              "attacker_branching", "defender_conj", "defender_stable_conj",
              "defender_branching")

DEFENDER_KINDS = (DEF_CONJ, DEF_STABLE, DEF_BRANCH)

U_ZERO: Update = (0, 0, 0, 0, 0, 0, 0, 0)
U_OBS: Update = (-1, 0, 0, 0, 0, 0, 0, 0)
U_IMM: Update = (0, 0, 0, 0, -1, 0, 0, 0)
U_ANSWER: Update = (0, 0, -1, 0, 0, 0, 0, 0)
U_STABLE_ANS: Update = (0, 0, 0, -1, 0, 0, 0, 0)
U_POS: Update = ((0, 5), 0, 0, 0, 0, 0, 0, 0)
U_NEG: Update = ((0, 6), 0, 0, 0, 0, 0, 0, -1)
U_BR_ANSWER: Update = (0, -1, -1, 0, 0, 0, 0, 0)
U_BR_OBS: Update = ((0, 5), -1, -1, 0, 0, 0, 0, 0)

RULES = ("delay", "procrastination", "observation", "finishing",
         "immediate_conj", "late_conj", "conj_answer", "positive_conjunct",
         "negative_conjunct", "stable_conj", "conj_stable_answer",
         "stable_finishing", "branching_conj", "branch_answer",
         "branch_observation", "branch_accounting")

Position = Tuple
#: (target position, update, rule name, auxiliary datum or None)
Move = Tuple[Position, Update, str, Optional[str]]

DEFAULT_MAX_POSITIONS = 1_000_000


def attacker_position(p: int, q_mask: int) -> Position:
    return (ATTACKER, p, q_mask)


def is_defender(pos: Position) -> bool:
    return pos[0] in DEFENDER_KINDS


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _optional_heads(sys: TransitionSystem, p: int) -> List[Tuple[str, int]]:
    heads = {(TAU, p)}
    heads.update(sys.transitions_from(p))
    return sorted(heads)


def successors(sys: TransitionSystem, pos: Position) -> List[Move]:
    """All moves out of ``pos``, in rule-table order."""
    kind = pos[0]
    moves: List[Move] = []
    if kind == ATTACKER:
        _, p, q_mask = pos
        # finishing first: a win over the empty set is plain T, and the
        # formula walk takes the first fitting move.
        if q_mask == 0:
            moves.append(((DEF_CONJ, p, 0), U_ZERO, "finishing", None))
        moves.append(((ATT_DELAYED, p, sys.weak_closure(q_mask)), U_ZERO, "delay", None))
        if q_mask:
            moves.append(((DEF_CONJ, p, q_mask), U_IMM, "immediate_conj", None))
    elif kind == ATT_DELAYED:
        _, p, q_mask = pos
        for q in bits(sys.steps(p, TAU)):
            if q != p:
                moves.append(((ATT_DELAYED, q, q_mask), U_ZERO, "procrastination", None))
        for action in sys.alphabet:
            step = sys.step_set(q_mask, action)
            for p2 in bits(sys.steps(p, action)):
                moves.append(((ATTACKER, p2, step), U_OBS, "observation", action))
        moves.append(((DEF_CONJ, p, q_mask), U_ZERO, "late_conj", None))
        if sys.is_stable(p):
            moves.append(((DEF_STABLE, p, q_mask & sys.stable_mask), U_ZERO,
                          "stable_conj", None))
        # Branching conjunctions with an empty optional-step part are
        # dominated by the plain conjunction (every answer there inverts
        # a strictly smaller update), so only nonempty Qa is offered.
        for action, p2 in _optional_heads(sys, p):
            for qa in _submasks(q_mask):
                if qa == 0:
                    continue
                moves.append(((DEF_BRANCH, p, action, p2, q_mask & ~qa, qa),
                              U_ZERO, "branching_conj", None))
    elif kind == ATT_CONJ:
        _, p, q = pos
        moves.append(((ATT_DELAYED, p, sys.weak_closure(1 << q)), U_POS,
                      "positive_conjunct", None))
        if p != q:
            moves.append(((ATT_DELAYED, q, sys.weak_closure(1 << p)), U_NEG,
                          "negative_conjunct", None))
    elif kind == ATT_BRANCH:
        _, p, q_mask = pos
        moves.append(((ATTACKER, p, q_mask), U_OBS, "branch_accounting", None))
    elif kind == DEF_CONJ:
        _, p, q_mask = pos
        for q in bits(q_mask):
            moves.append(((ATT_CONJ, p, q), U_ANSWER, "conj_answer", None))
    elif kind == DEF_STABLE:
        _, p, q_mask = pos
        if q_mask:
            for q in bits(q_mask):
                moves.append(((ATT_CONJ, p, q), U_STABLE_ANS,
                              "conj_stable_answer", None))
        else:
            moves.append(((DEF_CONJ, p, 0), U_STABLE_ANS, "stable_finishing", None))
    elif kind == DEF_BRANCH:
        _, p, action, p2, q_mask, qa_mask = pos
        for q in bits(q_mask):
            moves.append(((ATT_CONJ, p, q), U_BR_ANSWER, "branch_answer", None))
        moves.append(((ATT_BRANCH, p2, sys.optional_step_set(qa_mask, action)),
                      U_BR_OBS, "branch_observation", None))
    else:
        raise ValueError("unknown position kind %r" % (kind,))
    return moves


class GameGraph:
    """Interned game positions with their outgoing moves.

    ``moves[i]`` holds ``(target_index, update, rule, aux)`` tuples in
    generation order; construction is a breadth-first closure of the
    start positions, so the layout is deterministic.
    """

    def __init__(self, sys: TransitionSystem, starts: List[Position],
                 max_positions: int = DEFAULT_MAX_POSITIONS):
        self.sys = sys
        self.positions: List[Position] = []
        self.index: Dict[Position, int] = {}
        self.moves: List[List[Tuple[int, Update, str, Optional[str]]]] = []
        self.starts: List[int] = []

        queue: List[Position] = []

        def intern(pos: Position) -> int:
            idx = self.index.get(pos)
            if idx is None:
                if len(self.positions) >= max_positions:
                    raise PositionLimitError(
                        "game exceeded %d positions" % max_positions)
                idx = len(self.positions)
                self.index[pos] = idx
                self.positions.append(pos)
                self.moves.append([])
                queue.append(pos)
            return idx

        for pos in starts:
            self.starts.append(intern(pos))
        head = 0
        while head < len(queue):
            pos = queue[head]
            head += 1
            idx = self.index[pos]
            for target, update, rule, aux in successors(sys, pos):
                self.moves[idx].append((intern(target), update, rule, aux))

    def __len__(self) -> int:
        return len(self.positions)

    def move_count(self) -> int:
        return sum(len(m) for m in self.moves)

    def position_index(self, pos: Position) -> int:
        return self.index[pos]


def build_multi(sys: TransitionSystem, starts: Iterable[Tuple[int, int]],
                max_positions: int = DEFAULT_MAX_POSITIONS) -> GameGraph:
    """Game closure from attacker positions ``[p,Q]a`` for each (p, Q mask)."""
    return GameGraph(sys, [attacker_position(p, q_mask) for p, q_mask in starts],
                     max_positions)


def build(sys: TransitionSystem, p: int, q: int,
          max_positions: int = DEFAULT_MAX_POSITIONS) -> GameGraph:
    """Shared game graph for comparing ``p`` and ``q`` in both directions.

    The first two start positions are ``[p,{q}]a`` and ``[q,{p}]a``.
    """
    return build_multi(sys, [(p, 1 << q), (q, 1 << p)], max_positions)


def format_position(sys: TransitionSystem, pos: Position) -> str:
    kind = pos[0]
    name = sys.state_name

    def set_str(mask: int) -> str:
        return "{%s}" % ",".join(sys.set_names(mask))

    if kind == ATTACKER:
        return "[%s,%s]a" % (name(pos[1]), set_str(pos[2]))
    if kind == ATT_DELAYED:
        return "[%s,%s]e" % (name(pos[1]), set_str(pos[2]))
    if kind == ATT_CONJ:
        return "[%s,%s]^" % (name(pos[1]), name(pos[2]))
    if kind == ATT_BRANCH:
        return "[%s,%s]b" % (name(pos[1]), set_str(pos[2]))
    if kind == DEF_CONJ:
        return "(%s,%s)d" % (name(pos[1]), set_str(pos[2]))
    if kind == DEF_STABLE:
        return "(%s,%s)s" % (name(pos[1]), set_str(pos[2]))
    if kind == DEF_BRANCH:
        return "(%s,%s,%s,%s,%s)b" % (name(pos[1]), pos[2], name(pos[3]),
                                      set_str(pos[4]), set_str(pos[5]))
    raise ValueError(kind)


def graph_to_json(graph: GameGraph) -> dict:
    """JSON-ready dump with variant tags, rule names and update vectors."""
    sys = graph.sys
    positions = []
    for i, pos in enumerate(graph.positions):
        positions.append({
            "id": i,
            "kind": KIND_NAMES[pos[0]],
            "display": format_position(sys, pos),
        })
    moves = []
    for i, outs in enumerate(graph.moves):
        for tgt, update, rule, aux in outs:
            entry = {"from": i, "to": tgt, "rule": rule,
                     "update": format_update(update)}
            if aux is not None:
                entry["action"] = aux
            moves.append(entry)
    return {"positions": positions, "moves": moves,
            "starts": list(graph.starts)}
