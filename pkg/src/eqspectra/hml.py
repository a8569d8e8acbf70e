"""Modal formulas observing systems up to delays, with price vectors.

The grammar has three mutually recursive layers::

    phi  ::=  <e> chi  |  /\{psi, ...}              (immediate layer)
    chi  ::=  <a> phi  |  /\{psi, ...}              (delayed layer)
            |  /\{~<tau>T, psi, ...}                (stable conjunction)
            |  /\{(alpha) phi, psi, ...}            (branching conjunction)
    psi  ::=  <e> chi  |  ~<e> chi                  (conjuncts)

``T`` abbreviates the empty conjunction at either of the first two
layers.  The negated-silent-step conjunct of a stable conjunction and
the optional-step head of a branching conjunction are kept implicit in
the AST (the renderer reinstates them).  Conjunct tuples are expected
in canonical order (sorted by rendered text); the builder helpers and
the parser take care of that.

The price of a formula is an 8-dimensional energy; dimensions count
1) modal depth, 2) branching conjunctions, 3) unstable conjunctions,
4) stable conjunctions, 5) immediate conjunctions, 6) positive conjunct
depth, 7) negative conjunct depth, 8) negations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from .energy import DIMS, ZERO, Energy, sup, unit
from .errors import ParseError
from .lts import TAU, TransitionSystem, bits


# -- abstract syntax ----------------------------------------------------

class Formula:
    """Immediate-layer formula."""
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


class DelayedFormula:
    """Delayed-layer formula (interpreted up to leading silent steps)."""
    __slots__ = ()

    def __str__(self) -> str:
        return render_delayed(self)


class Conjunct:
    """Positive or negated delayed formula under a conjunction."""
    __slots__ = ()

    def __str__(self) -> str:
        return render_conjunct(self)


@dataclass(frozen=True)
class Delayed(Formula):
    chi: DelayedFormula


@dataclass(frozen=True)
class ImmediateConj(Formula):
    conjuncts: Tuple[Conjunct, ...]


@dataclass(frozen=True)
class Obs(DelayedFormula):
    action: str
    cont: Formula

    def __post_init__(self):
        if self.action == TAU:
            raise ValueError("observations are of visible actions only")


@dataclass(frozen=True)
class StdConj(DelayedFormula):
    conjuncts: Tuple[Conjunct, ...]


@dataclass(frozen=True)
class StableConj(DelayedFormula):
    conjuncts: Tuple[Conjunct, ...]


@dataclass(frozen=True)
class BranchConj(DelayedFormula):
    action: str
    cont: Formula
    conjuncts: Tuple[Conjunct, ...]


@dataclass(frozen=True)
class Pos(Conjunct):
    chi: DelayedFormula


@dataclass(frozen=True)
class Neg(Conjunct):
    chi: DelayedFormula


TRUE = ImmediateConj(())


def _canon(conjuncts: Iterable[Conjunct]) -> Tuple[Conjunct, ...]:
    uniq = {render_conjunct(c): c for c in conjuncts}
    return tuple(uniq[k] for k in sorted(uniq))


def immediate_conj(conjuncts: Iterable[Conjunct]) -> ImmediateConj:
    return ImmediateConj(_canon(conjuncts))


def std_conj(conjuncts: Iterable[Conjunct]) -> StdConj:
    return StdConj(_canon(conjuncts))


def stable_conj(conjuncts: Iterable[Conjunct]) -> StableConj:
    return StableConj(_canon(conjuncts))


def branch_conj(action: str, cont: Formula,
                conjuncts: Iterable[Conjunct]) -> BranchConj:
    return BranchConj(action, cont, _canon(conjuncts))


# -- rendering ----------------------------------------------------------

def render(phi: Formula) -> str:
    match phi:
        case ImmediateConj(()):
            return "T"
        case ImmediateConj(conjuncts):
            return "/\\{%s}" % ", ".join(render_conjunct(c) for c in conjuncts)
        case Delayed(chi):
            return "<e>%s" % render_delayed(chi)
    raise TypeError(phi)


def render_delayed(chi: DelayedFormula) -> str:
    match chi:
        case Obs(action, cont):
            return "<%s>%s" % (action, render(cont))
        case StdConj(()):
            return "T"
        case StdConj(conjuncts):
            return "/\\{%s}" % ", ".join(render_conjunct(c) for c in conjuncts)
        case StableConj(conjuncts):
            items = ["~<%s>T" % TAU] + [render_conjunct(c) for c in conjuncts]
            return "/\\{%s}" % ", ".join(items)
        case BranchConj(action, cont, conjuncts):
            items = ["(%s)%s" % (action, render(cont))]
            items += [render_conjunct(c) for c in conjuncts]
            return "/\\{%s}" % ", ".join(items)
    raise TypeError(chi)


def render_conjunct(psi: Conjunct) -> str:
    match psi:
        case Pos(chi):
            return "<e>%s" % render_delayed(chi)
        case Neg(chi):
            return "~<e>%s" % render_delayed(chi)
    raise TypeError(psi)


# -- parsing ------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError("%s (at offset %d in formula)" % (message, self.pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.take(literal):
            self.error("expected %r" % literal)

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            self.error("expected an action name")
        return self.text[start:self.pos]


def parse_formula(text: str) -> Formula:
    """Parse the ASCII formula syntax; inverse of :func:`render`."""
    sc = _Scanner(text)
    phi = _parse_phi(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        sc.error("trailing input")
    return phi


def _parse_phi(sc: _Scanner) -> Formula:
    if sc.take("T"):
        return TRUE
    if sc.take("<"):
        name = sc.ident()
        sc.expect(">")
        if name == "e":
            return Delayed(_parse_chi(sc))
        sc.error("an immediate formula starts with <e>, /\\{ or T")
    if sc.take("/\\{"):
        conjuncts, stable, branch = _parse_conj_items(sc)
        if stable or branch is not None:
            sc.error("stable/branching conjunctions only occur under <e>")
        return ImmediateConj(_canon(conjuncts))
    sc.error("expected a formula")


def _parse_chi(sc: _Scanner) -> DelayedFormula:
    if sc.take("T"):
        return StdConj(())
    if sc.take("<"):
        name = sc.ident()
        sc.expect(">")
        if name == "e":
            sc.error("nested <e> must be wrapped in a conjunct")
        if name == TAU:
            sc.error("silent steps cannot be observed directly")
        return Obs(name, _parse_phi(sc))
    if sc.take("/\\{"):
        conjuncts, stable, branch = _parse_conj_items(sc)
        if stable and branch is not None:
            sc.error("a conjunction cannot be both stable and branching")
        if stable:
            return StableConj(_canon(conjuncts))
        if branch is not None:
            action, cont = branch
            return BranchConj(action, cont, _canon(conjuncts))
        return StdConj(_canon(conjuncts))
    sc.error("expected a delayed formula")


def _parse_conj_items(sc: _Scanner):
    conjuncts = []
    stable = False
    branch = None
    if sc.take("}"):
        return conjuncts, stable, branch
    while True:
        if sc.take("("):
            action = sc.ident()
            sc.expect(")")
            if branch is not None:
                sc.error("at most one optional-step head per conjunction")
            branch = (action, _parse_phi(sc))
        elif sc.take("~"):
            sc.expect("<")
            name = sc.ident()
            sc.expect(">")
            if name == TAU:
                sc.expect("T")
                stable = True
            elif name == "e":
                conjuncts.append(Neg(_parse_chi(sc)))
            else:
                sc.error("negation applies to <e> or <%s>T" % TAU)
        elif sc.take("<"):
            name = sc.ident()
            sc.expect(">")
            if name != "e":
                sc.error("conjuncts start with <e>, ~<e> or a head")
            conjuncts.append(Pos(_parse_chi(sc)))
        else:
            sc.error("expected a conjunct")
        if sc.take("}"):
            return conjuncts, stable, branch
        sc.expect(",")


# -- semantics ----------------------------------------------------------

class Evaluator:
    """Memoizing evaluator of formulas over one transition system.

    Keeps one denotation cache per layer, so repeated queries against
    the same system (certificate post-checks, bulk soundness sweeps)
    stay cheap.
    """

    def __init__(self, sys: TransitionSystem):
        self.sys = sys
        self._phi: Dict[Formula, int] = {}
        self._chi: Dict[DelayedFormula, int] = {}
        self._psi: Dict[Conjunct, int] = {}

    def _delay_preimage(self, mask: int) -> int:
        sys = self.sys
        out = 0
        for p in range(sys.n):
            if sys.weak_closure(1 << p) & mask:
                out |= 1 << p
        return out

    def phi(self, formula: Formula) -> int:
        try:
            return self._phi[formula]
        except KeyError:
            pass
        match formula:
            case Delayed(chi):
                mask = self._delay_preimage(self.chi_eps(chi))
            case ImmediateConj(conjuncts):
                mask = self.sys.full_mask
                for c in conjuncts:
                    mask &= self.conjunct(c)
            case _:
                raise TypeError(formula)
        self._phi[formula] = mask
        return mask

    def chi_eps(self, chi: DelayedFormula) -> int:
        try:
            return self._chi[chi]
        except KeyError:
            pass
        sys = self.sys
        match chi:
            case Obs(action, cont):
                target = self.phi(cont)
                mask = 0
                for p in range(sys.n):
                    if sys.steps(p, action) & target:
                        mask |= 1 << p
            case StdConj(conjuncts):
                mask = sys.full_mask
                for c in conjuncts:
                    mask &= self.conjunct(c)
            case StableConj(conjuncts):
                mask = sys.stable_mask
                for c in conjuncts:
                    mask &= self.conjunct(c)
            case BranchConj(action, cont, conjuncts):
                target = self.phi(cont)
                mask = 0
                for p in range(sys.n):
                    opt = sys.steps(p, action)
                    if action == TAU:
                        opt |= 1 << p
                    if opt & target:
                        mask |= 1 << p
                for c in conjuncts:
                    mask &= self.conjunct(c)
            case _:
                raise TypeError(chi)
        self._chi[chi] = mask
        return mask

    def conjunct(self, psi: Conjunct) -> int:
        try:
            return self._psi[psi]
        except KeyError:
            pass
        match psi:
            case Pos(chi):
                mask = self._delay_preimage(self.chi_eps(chi))
            case Neg(chi):
                mask = self.sys.full_mask ^ self._delay_preimage(self.chi_eps(chi))
            case _:
                raise TypeError(psi)
        self._psi[psi] = mask
        return mask

    def distinguishes(self, formula: Formula, p: int, q_mask: int) -> bool:
        mask = self.phi(formula)
        return bool((mask >> p) & 1) and not (mask & q_mask)


def evaluate(sys: TransitionSystem, formula: Formula) -> int:
    """Denotation of an immediate-layer formula as a state bitmask."""
    return Evaluator(sys).phi(formula)


def distinguishes(sys: TransitionSystem, formula: Formula, p: int, q_mask: int) -> bool:
    """True iff ``p`` satisfies the formula and no state of ``q_mask`` does."""
    return Evaluator(sys).distinguishes(formula, p, q_mask)


# -- prices -------------------------------------------------------------

def _add(a: Energy, b: Energy) -> Energy:
    return tuple(x + y for x, y in zip(a, b))


def _with_dim(e: Energy, index: int, value: int) -> Energy:
    out = list(ZERO)
    out[index] = value
    return sup(e, tuple(out))


def price(phi: Formula) -> Energy:
    """Price of an immediate-layer formula."""
    match phi:
        case ImmediateConj(()):
            return ZERO
        case Delayed(chi):
            return price_delayed(chi)
        case ImmediateConj(conjuncts):
            inner = price_delayed(StdConj(conjuncts))
            return _add(unit(4), inner)
    raise TypeError(phi)


def price_delayed(chi: DelayedFormula) -> Energy:
    """Price of a delayed-layer formula."""
    match chi:
        case Obs(_, cont):
            return _add(unit(0), price(cont))
        case StdConj(()):
            return ZERO
        case StdConj(conjuncts):
            best = ZERO
            for c in conjuncts:
                best = sup(best, price_conjunct(c))
            return _add(unit(2), best)
        case StableConj(conjuncts):
            best = ZERO          # the implicit ~<tau>T conjunct is free
            for c in conjuncts:
                best = sup(best, price_conjunct(c))
            return _add(unit(3), best)
        case BranchConj(_, cont, conjuncts):
            head = price(cont)
            best = sup(_add(unit(0), head), _with_dim(ZERO, 5, 1 + head[0]))
            for c in conjuncts:
                best = sup(best, price_conjunct(c))
            return _add(_add(unit(1), unit(2)), best)
    raise TypeError(chi)


def price_conjunct(psi: Conjunct) -> Energy:
    """Price of a conjunct."""
    match psi:
        case Pos(chi):
            inner = price_delayed(chi)
            return _with_dim(inner, 5, inner[0])
        case Neg(chi):
            inner = price_delayed(chi)
            return _with_dim(_add(unit(7), inner), 6, inner[0])
    raise TypeError(psi)
