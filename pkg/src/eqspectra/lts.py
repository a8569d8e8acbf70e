"""Finite labelled transition systems with silent steps.

States are dense indices 0..n-1 with display names kept alongside.
State sets are int bitmasks (bit p set iff state p is in the set),
which keeps the closure/step algebra tight and allocation-free.

The action named ``tau`` is the silent action.  The labels ``e`` and
the unicode epsilon are rejected: ``<e>`` marks delayed observation in
the certificate syntax and an action of that name would render
ambiguously.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .errors import ParseError

#: Reserved label of the silent action.
TAU = "tau"

_FORBIDDEN_LABELS = {"e", "ε", ""}


def bits(mask: int) -> Iterator[int]:
    """Iterate the indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class TransitionSystem:
    """An immutable finite LTS over named states.

    :param transitions: iterable of ``(source, action, target)`` name
        triples.  Duplicate triples collapse to one transition.
    :param states: optional extra state names (for isolated states);
        states mentioned in transitions are declared implicitly, in
        order of first appearance.
    """

    def __init__(self, transitions: Iterable[Tuple[str, str, str]],
                 states: Sequence[str] = ()) -> None:
        names: List[str] = []
        index: Dict[str, int] = {}

        def intern(name: str) -> int:
            if name not in index:
                index[name] = len(names)
                names.append(name)
            return index[name]

        for name in states:
            intern(name)

        triples = []
        seen = set()
        visible = []
        for src, act, tgt in transitions:
            if act in _FORBIDDEN_LABELS:
                raise ParseError("action label %r is reserved" % act)
            trip = (intern(src), act, intern(tgt))
            if trip in seen:
                continue
            seen.add(trip)
            triples.append(trip)
            if act != TAU and act not in visible:
                visible.append(act)

        self.names: Tuple[str, ...] = tuple(names)
        self.index: Dict[str, int] = index
        self.alphabet: Tuple[str, ...] = tuple(sorted(visible))
        self.n = len(names)
        self.full_mask = (1 << self.n) - 1

        succ: List[Dict[str, int]] = [dict() for _ in range(self.n)]
        out: List[List[Tuple[str, int]]] = [[] for _ in range(self.n)]
        for p, act, q in triples:
            succ[p][act] = succ[p].get(act, 0) | (1 << q)
            out[p].append((act, q))
        self._succ = succ
        self._out = [tuple(sorted(o)) for o in out]
        self.transitions: Tuple[Tuple[int, str, int], ...] = tuple(sorted(triples))

        stable = 0
        for p in range(self.n):
            if TAU not in succ[p]:
                stable |= 1 << p
        self._stable_mask = stable

        # Silent-step closures of the singletons; every other closure is
        # a union of these.
        closures: List[int] = []
        for p in range(self.n):
            mask = 1 << p
            frontier = mask
            while frontier:
                step = 0
                for q in bits(frontier):
                    step |= succ[q].get(TAU, 0)
                frontier = step & ~mask
                mask |= step
            closures.append(mask)
        self._closure = closures

    # -- basic lookups ------------------------------------------------

    def state(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError("unknown state %r" % name) from None

    def state_name(self, p: int) -> str:
        return self.names[p]

    def state_set(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.state(name)
        return mask

    def set_names(self, mask: int) -> Tuple[str, ...]:
        return tuple(self.names[p] for p in bits(mask))

    def transitions_from(self, p: int) -> Tuple[Tuple[str, int], ...]:
        return self._out[p]

    def steps(self, p: int, action: str) -> int:
        return self._succ[p].get(action, 0)

    # -- the set-lifted step algebra -----------------------------------

    def weak_closure(self, mask: int) -> int:
        """All states reachable from ``mask`` by any number of silent
        steps.  Extensive, idempotent and monotone in ``mask``."""
        out = 0
        for p in bits(mask):
            out |= self._closure[p]
        return out

    def step_set(self, mask: int, action: str) -> int:
        """Targets of one ``action`` step from any state in ``mask``."""
        out = 0
        for p in bits(mask):
            out |= self._succ[p].get(action, 0)
        return out

    def optional_step_set(self, mask: int, action: str) -> int:
        """Targets of one optional step: a real ``action`` step, or for
        the silent action also staying put."""
        out = self.step_set(mask, action)
        if action == TAU:
            out |= mask
        return out

    def is_stable(self, p: int) -> bool:
        """True iff state ``p`` has no outgoing silent step."""
        return bool(self._stable_mask & (1 << p))

    @property
    def stable_mask(self) -> int:
        return self._stable_mask

    def __repr__(self) -> str:
        return "TransitionSystem(%d states, %d transitions)" % (
            self.n, len(self.transitions))


def parse_transitions(text: str) -> TransitionSystem:
    """Read the plain transition-list format.

    One transition per line, ``source<TAB>action<TAB>target`` (commas
    work too); blank lines and ``#`` comments are skipped.
    """
    triples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in (line.split("\t") if "\t" in line else line.split(","))]
        if len(parts) != 3 or not all(parts):
            raise ParseError("expected 'source, action, target'", line=lineno)
        src, act, tgt = parts
        if act in _FORBIDDEN_LABELS:
            raise ParseError("action label %r is reserved" % act, line=lineno)
        triples.append((src, act, tgt))
    if not triples:
        raise ParseError("no transitions found")
    return TransitionSystem(triples)
