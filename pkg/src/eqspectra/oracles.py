"""Slow reference deciders, independent of the game pipeline.

Two families:

* classic relational/subset constructions — greatest-fixpoint pair
  deletion for the bisimulation-like notions, determinization for
  trace inclusion, both straight from the textbook definitions;

* an exact modal-denotation engine: for a notion whose coordinate only
  uses 0 and infinity, the family of denotations realizable by its
  sublogic is closed under finitely many operations (observation
  preimages, delay preimages, complements, intersections, the stable
  mask, optional-step heads), so iterating those to a fixpoint yields
  *every* achievable denotation — no depth bound involved.  The
  preorder then reads off as "every denotation containing p contains
  q".  Stable bisimilarity is decided this way; the same engine
  cross-checks the relational oracles elsewhere, which keeps it honest.

Everything here is O(n^2 * m)-ish and meant for systems of a dozen
states or less; the CLI exposes it behind a debug flag only.
"""

from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Set, Tuple

from .energy import INF
from .lts import TAU, TransitionSystem, bits
from .spectrum import NOTIONS


# -- relational oracles ---------------------------------------------------


def _weak_visible_targets(sys: TransitionSystem, q: int, action: str) -> int:
    """States reachable from q via closure, one `action` step, closure."""
    mid = sys.step_set(sys.weak_closure(1 << q), action)
    return sys.weak_closure(mid)


@lru_cache(maxsize=256)
def branching_bisim_sr_relation(sys: TransitionSystem) -> FrozenSet[Tuple[int, int]]:
    """Largest stability-respecting branching bisimulation (as pair set)."""
    pairs: Set[Tuple[int, int]] = {(p, q) for p in range(sys.n) for q in range(sys.n)}

    def ok(p: int, q: int, rel) -> bool:
        if (q, p) not in rel:
            return False
        for action, p2 in sys.transitions_from(p):
            if action == TAU and (p2, q) in rel:
                continue
            # need q => q1 -action-> q2 with (p,q1) and (p2,q2) related
            found = False
            for q1 in bits(sys.weak_closure(1 << q)):
                if (p, q1) not in rel:
                    continue
                for q2 in bits(sys.steps(q1, action)):
                    if (p2, q2) in rel:
                        found = True
                        break
                if found:
                    break
            if not found:
                return False
        if sys.is_stable(p):
            if not any(sys.is_stable(q1) and (p, q1) in rel
                       for q1 in bits(sys.weak_closure(1 << q))):
                return False
        return True

    while True:
        keep = {(p, q) for (p, q) in pairs if ok(p, q, pairs)}
        if keep == pairs:
            return frozenset(pairs)
        pairs = keep


def branching_bisim_sr(sys: TransitionSystem, p: int, q: int) -> bool:
    """Stability-respecting branching bisimilarity of two states."""
    return (p, q) in branching_bisim_sr_relation(sys)


@lru_cache(maxsize=256)
def weak_bisim_relation(sys: TransitionSystem) -> FrozenSet[Tuple[int, int]]:
    pairs: Set[Tuple[int, int]] = {(p, q) for p in range(sys.n) for q in range(sys.n)}

    def ok(p: int, q: int, rel) -> bool:
        if (q, p) not in rel:
            return False
        for action, p2 in sys.transitions_from(p):
            if action == TAU:
                answers = sys.weak_closure(1 << q)
            else:
                answers = _weak_visible_targets(sys, q, action)
            if not any((p2, q2) in rel for q2 in bits(answers)):
                return False
        return True

    while True:
        keep = {(p, q) for (p, q) in pairs if ok(p, q, pairs)}
        if keep == pairs:
            return frozenset(pairs)
        pairs = keep


def weak_bisim(sys: TransitionSystem, p: int, q: int) -> bool:
    """Weak bisimilarity of two states."""
    return (p, q) in weak_bisim_relation(sys)


@lru_cache(maxsize=256)
def weak_sim_relation(sys: TransitionSystem) -> FrozenSet[Tuple[int, int]]:
    pairs: Set[Tuple[int, int]] = {(p, q) for p in range(sys.n) for q in range(sys.n)}

    def ok(p: int, q: int, rel) -> bool:
        for action, p2 in sys.transitions_from(p):
            if action == TAU:
                answers = sys.weak_closure(1 << q)
            else:
                answers = _weak_visible_targets(sys, q, action)
            if not any((p2, q2) in rel for q2 in bits(answers)):
                return False
        return True

    while True:
        keep = {(p, q) for (p, q) in pairs if ok(p, q, pairs)}
        if keep == pairs:
            return frozenset(pairs)
        pairs = keep


def weak_sim_preorder(sys: TransitionSystem, p: int, q: int) -> bool:
    """True iff q weakly simulates p (every modal-positive observation
    of p is available to q)."""
    return (p, q) in weak_sim_relation(sys)


def weak_trace_preorder(sys: TransitionSystem, p: int, q: int) -> bool:
    """Weak-trace inclusion via the subset construction."""
    start = (sys.weak_closure(1 << p), sys.weak_closure(1 << q))
    seen = set()
    stack = [start]
    while stack:
        pset, qset = stack.pop()
        if (pset, qset) in seen:
            continue
        seen.add((pset, qset))
        for action in sys.alphabet:
            p2 = sys.weak_closure(sys.step_set(pset, action))
            if not p2:
                continue
            q2 = sys.weak_closure(sys.step_set(qset, action))
            if not q2:
                return False
            stack.append((p2, q2))
    return True


# -- the exact modal-denotation engine ------------------------------------


def _intersection_closure(base: Set[int], full: int) -> Set[int]:
    out = set(base)
    out.add(full)
    frontier = list(out)
    while frontier:
        x = frontier.pop()
        for y in list(out):
            z = x & y
            if z not in out:
                out.add(z)
                frontier.append(z)
    return out


@lru_cache(maxsize=512)
def modal_denotations(sys: TransitionSystem, notion: str) -> FrozenSet[int]:
    """Every immediate-layer denotation achievable in the sublogic of
    ``notion``.  Only coordinates built from 0 and infinity qualify."""
    coord = NOTIONS[notion].coord
    if any(c not in (0, INF) for c in coord):
        raise ValueError("notion %s has finite nonzero coordinates; "
                         "the closure oracle does not apply" % notion)
    branching = coord[1] > 0
    unstable = coord[2] > 0
    stable = coord[3] > 0
    immediate = coord[4] > 0
    positives = coord[5] > 0
    negatives = coord[6] > 0 and coord[7] > 0

    full = sys.full_mask

    def delayed(mask: int) -> int:
        out = 0
        for s in range(sys.n):
            if sys.weak_closure(1 << s) & mask:
                out |= 1 << s
        return out

    def obs_pre(action: str, mask: int) -> int:
        out = 0
        for s in range(sys.n):
            if sys.steps(s, action) & mask:
                out |= 1 << s
        return out

    def opt_pre(action: str, mask: int) -> int:
        out = obs_pre(action, mask)
        if action == TAU:
            out |= mask
        return out

    phis: Set[int] = {full}
    chis: Set[int] = {full}          # chi-layer T
    while True:
        new_chis = set(chis)
        for action in sys.alphabet:
            for x in phis:
                new_chis.add(obs_pre(action, x))
        pool: Set[int] = set()
        for x in chis:
            d = delayed(x)
            if positives:
                pool.add(d)
            if negatives:
                pool.add(full ^ d)
        inters = _intersection_closure(pool, full)
        if unstable:
            new_chis |= inters
        if stable:
            new_chis |= {sys.stable_mask & i for i in inters}
        if branching:
            for action in sys.alphabet + (TAU,):
                for x in phis:
                    head = opt_pre(action, x)
                    new_chis |= {head & i for i in inters}
        new_phis = set(phis)
        for x in new_chis:
            new_phis.add(delayed(x))
        if immediate:
            new_phis |= inters
        if new_phis == phis and new_chis == chis:
            return frozenset(phis)
        phis, chis = new_phis, new_chis


def modal_preorder(sys: TransitionSystem, notion: str, p: int, q: int) -> bool:
    """p below q in the sublogic of ``notion``: every achievable
    denotation containing p also contains q."""
    for x in modal_denotations(sys, notion):
        if (x >> p) & 1 and not ((x >> q) & 1):
            return False
    return True


def stable_bisim(sys: TransitionSystem, p: int, q: int) -> bool:
    """Stable bisimilarity, decided through the exact modal closure."""
    return modal_preorder(sys, "SB", p, q) and modal_preorder(sys, "SB", q, p)
