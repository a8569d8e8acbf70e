"""Eight-dimensional energies, declining updates and Pareto antichains.

An energy is a plain 8-tuple of non-negative ints.  The module-level
constant :data:`INF` stands in for an unbounded component; only notion
coordinates ever contain it, computed winning budgets stay finite.
Components are indexed 0..7 internally (printed forms count from 1).

Updates are 8-tuples as well.  An entry is either a relative change
(``0`` or ``-1``) or a tuple of component indices ``(j, k, ...)``
meaning "replace this component by the minimum over those components"
(the entry's own index is always included).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Tuple, Union

DIMS = 8

#: Sentinel infinity.  Large enough that no computed budget reaches it;
#: arithmetic saturates at this value instead of growing past it.
INF = 1 << 30

Energy = Tuple[int, ...]
UpdateEntry = Union[int, Tuple[int, ...]]
Update = Tuple[UpdateEntry, ...]

ZERO: Energy = (0,) * DIMS


def unit(index: int, value: int = 1) -> Energy:
    """The energy that is `value` at `index` and 0 elsewhere."""
    e = [0] * DIMS
    e[index] = value
    return tuple(e)


def leq(a: Energy, b: Energy) -> bool:
    """Componentwise order: a <= b in every component."""
    return all(x <= y for x, y in zip(a, b))


def sup(a: Energy, b: Energy) -> Energy:
    """Componentwise maximum (least upper bound)."""
    return tuple(max(x, y) for x, y in zip(a, b))


def apply(e: Energy, u: Update) -> Optional[Energy]:
    """Apply a declining update to an energy.

    Relative entries add (-1 decrements, saturating at INF); min-select
    entries replace the component by the minimum over the selected
    components.  Returns None when the result would drop below zero in
    any component, i.e. when the update is undefined at ``e``.
    """
    out = []
    for k in range(DIMS):
        uk = u[k]
        if type(uk) is tuple:
            v = min(e[j] for j in uk)
        else:
            ek = e[k]
            if ek >= INF:
                v = INF
            else:
                v = ek + uk
                if v < 0:
                    return None
        out.append(v)
    return tuple(out)


def inverse(target: Energy, u: Update) -> Energy:
    """Least energy e with apply(e, u) defined and >= target.

    Component j must cover its own constraint (target_j - u_j for a
    relative entry, nothing for a min-select entry) and additionally
    every min-select entry k whose selection includes j pulls j up to
    target_k.
    """
    out = []
    for j in range(DIMS):
        uj = u[j]
        if type(uj) is tuple:
            v = 0
        else:
            tj = target[j]
            v = tj if tj >= INF else tj - uj
        for k in range(DIMS):
            uk = u[k]
            if type(uk) is tuple and j in uk and target[k] > v:
                v = target[k]
        out.append(v)
    return tuple(out)


class Antichain:
    """A set of pairwise-incomparable energies (a Pareto frontier).

    Represents the set of minimal elements of an upward-closed set of
    energies.  Kept as a flat list; all game instances stay far below
    the sizes where fancier structures would pay off.
    """

    __slots__ = ("_elems",)

    def __init__(self, elems: Iterable[Energy] = ()) -> None:
        self._elems: list = []
        for e in elems:
            self.insert(e)

    def insert(self, e: Energy) -> bool:
        """Add ``e``; drop dominated members.  True iff the set changed.

        An element equal to or dominated by an existing member leaves
        the antichain untouched (the earlier member is kept).
        """
        elems = self._elems
        for m in elems:
            if leq(m, e):
                return False
        self._elems = [m for m in elems if not leq(e, m)]
        self._elems.append(e)
        return True

    def dominates(self, e: Energy) -> bool:
        """True iff some member is componentwise <= e."""
        return any(leq(m, e) for m in self._elems)

    def sorted(self) -> list:
        return sorted(self._elems)

    def __iter__(self) -> Iterator[Energy]:
        return iter(self._elems)

    def __len__(self) -> int:
        return len(self._elems)

    def __bool__(self) -> bool:
        return bool(self._elems)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Antichain):
            return NotImplemented
        return sorted(self._elems) == sorted(other._elems)

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        raise TypeError("Antichain is mutable and unhashable")

    def __repr__(self) -> str:
        return "Antichain([%s])" % ", ".join(format_energy(e) for e in self.sorted())

    def copy(self) -> "Antichain":
        fresh = Antichain()
        fresh._elems = list(self._elems)
        return fresh


def antichain_insert(chain: Antichain, e: Energy) -> bool:
    """Functional-style alias for :meth:`Antichain.insert`."""
    return chain.insert(e)


def dominates(chain: Antichain, e: Energy) -> bool:
    """True iff ``e`` lies in the upward closure of ``chain``."""
    return chain.dominates(e)


def minima(energies: Iterable[Energy]) -> Antichain:
    """Pareto frontier (set of minimal elements) of the given energies."""
    return Antichain(energies)


def format_energy(e: Energy) -> str:
    return "(%s)" % ",".join("inf" if x >= INF else str(x) for x in e)


def parse_energy(text: str) -> Energy:
    """Parse the textual form, e.g. ``(2,0,inf,0,0,0,1,1)``."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = [p.strip() for p in s.split(",")]
    if len(parts) != DIMS:
        raise ValueError("energy needs %d components, got %d: %r" % (DIMS, len(parts), text))
    out = []
    for p in parts:
        if p.lower() in ("inf", "infinity", "oo"):
            out.append(INF)
        else:
            v = int(p)
            if v < 0:
                raise ValueError("energy components are non-negative: %r" % text)
            out.append(min(v, INF))
    return tuple(out)


def format_update(u: Update) -> str:
    """Render an update, min-select entries as 1-based ``min(j,k)``."""
    parts = []
    for entry in u:
        if type(entry) is tuple:
            parts.append("min(%s)" % ",".join(str(j + 1) for j in entry))
        else:
            parts.append("%d" % entry)
    return "(%s)" % ",".join(parts)
