"""Guarded-choice process definitions and their compilation to an LTS.

The input language is deliberately small::

    # comment
    Pe = op.Ae + op.Be
    Ae = idle.Ae + a.0
    @compare Pe, Pl

One definition or directive per line.  ``Sum ::= Seq ('+' Seq)*``,
``Seq ::= Atom ('.' Seq)?``, ``Atom ::= '0' | Ident | '(' Expr ')'``.
An identifier in prefix position (followed by ``.``) is an action
label, otherwise it names a process.  ``tau`` prefixes a silent step.
Recursion must be guarded by at least one prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import ParseError
from .lts import TransitionSystem


# -- abstract syntax ----------------------------------------------------

class ProcessExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Nil(ProcessExpr):
    pass


@dataclass(frozen=True)
class Prefix(ProcessExpr):
    action: str
    cont: ProcessExpr


@dataclass(frozen=True)
class Choice(ProcessExpr):
    left: ProcessExpr
    right: ProcessExpr


@dataclass(frozen=True)
class Name(ProcessExpr):
    ident: str


@dataclass(frozen=True)
class Directive:
    kind: str           # "compare" | "preorder"
    left: str
    right: str
    line: int = 0


@dataclass
class Definitions:
    defs: Dict[str, ProcessExpr]
    directives: List[Directive]


# -- parsing ------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_DIRECTIVE = re.compile(r"@(compare|preorder)\s+([A-Za-z_][A-Za-z0-9_]*)\s*,"
                        r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*$")
_RESERVED_ACTIONS = {"e", "ε"}


def _tokenize(text: str, lineno: int) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "=+.()," :
            toks.append(("op", ch, pos + 1))
            pos += 1
            continue
        if ch == "0":
            nxt = text[pos + 1] if pos + 1 < len(text) else ""
            if nxt and (nxt.isalnum() or nxt == "_"):
                raise ParseError("malformed token starting with '0'", lineno, pos + 1)
            toks.append(("nil", "0", pos + 1))
            pos += 1
            continue
        m = _IDENT.match(text, pos)
        if m:
            toks.append(("ident", m.group(), pos + 1))
            pos = m.end()
            continue
        raise ParseError("unexpected character %r" % ch, lineno, pos + 1)
    return toks


class _LineParser:
    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.end_col = len(text) + 1
        self.toks = _tokenize(text, lineno)
        self.i = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> Tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.lineno, self.end_col)
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            raise ParseError("expected %r, got %r" % (value, tok[1]), self.lineno, tok[2])
        return tok

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError("trailing input %r" % tok[1], self.lineno, tok[2])

    # Expr ::= Sum ::= Seq ('+' Seq)*
    def parse_expr(self) -> ProcessExpr:
        expr = self.parse_seq()
        while self.peek() and self.peek()[1] == "+":
            self.next()
            expr = Choice(expr, self.parse_seq())
        return expr

    # Seq ::= Atom ('.' Seq)?
    def parse_seq(self) -> ProcessExpr:
        kind, value, col = self.next()
        follows_dot = self.peek() is not None and self.peek()[1] == "."
        if kind == "ident" and follows_dot:
            # prefix position: the identifier is an action label
            self.next()
            if value in _RESERVED_ACTIONS:
                raise ParseError("action label %r is reserved" % value, self.lineno, col)
            return Prefix(value, self.parse_seq())
        if kind == "nil":
            if follows_dot:
                raise ParseError("only an action name may appear in prefix position",
                                 self.lineno, col)
            return Nil()
        if kind == "ident":
            return Name(value)
        if value == "(":
            inner = self.parse_expr()
            self.expect(")")
            if self.peek() is not None and self.peek()[1] == ".":
                raise ParseError("only an action name may appear in prefix position",
                                 self.lineno, col)
            return inner
        raise ParseError("unexpected %r" % value, self.lineno, col)


def parse(source: str) -> Definitions:
    """Parse process definitions and ``@compare``/``@preorder`` lines."""
    defs: Dict[str, ProcessExpr] = {}
    def_lines: Dict[str, int] = {}
    directives: List[Directive] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("@"):
            m = _DIRECTIVE.match(stripped)
            if not m:
                raise ParseError("malformed directive (use '@compare A, B')", lineno)
            directives.append(Directive(m.group(1), m.group(2), m.group(3), lineno))
            continue
        lp = _LineParser(line, lineno)
        head = lp.next()
        if head[0] != "ident":
            raise ParseError("definition must start with a process name", lineno, head[2])
        name = head[1]
        lp.expect("=")
        body = lp.parse_expr()
        lp.done()
        if name in defs:
            raise ParseError("duplicate definition of %r (first at line %d)"
                             % (name, def_lines[name]), lineno)
        defs[name] = body
        def_lines[name] = lineno

    _check_names(defs, def_lines)
    for d in directives:
        for operand in (d.left, d.right):
            if operand not in defs:
                raise ParseError("directive names undefined process %r" % operand, d.line)
    _check_guarded(defs, def_lines)
    return Definitions(defs, directives)


def _check_names(defs, def_lines):
    def walk(expr):
        match expr:
            case Name(ident):
                if ident not in defs:
                    raise ParseError("undefined process name %r" % ident)
            case Prefix(_, cont):
                walk(cont)
            case Choice(left, right):
                walk(left)
                walk(right)
            case Nil():
                pass

    for name, body in defs.items():
        try:
            walk(body)
        except ParseError as exc:
            raise ParseError("%s (in definition of %r)" % (exc.args[0], name),
                             def_lines[name]) from None


def _check_guarded(defs, def_lines):
    # names reachable without passing a prefix; a definition reaching
    # itself this way is unguarded recursion
    def unguarded(expr, seen):
        match expr:
            case Name(ident):
                if ident in seen:
                    raise ParseError("unguarded recursion through %r" % ident,
                                     def_lines.get(ident))
                unguarded(defs[ident], seen | {ident})
            case Choice(left, right):
                unguarded(left, seen)
                unguarded(right, seen)
            case _:
                pass

    for name, body in defs.items():
        unguarded(body, {name})


# -- printing -----------------------------------------------------------

def render_expr(expr: ProcessExpr) -> str:
    match expr:
        case Nil():
            return "0"
        case Name(ident):
            return ident
        case Prefix(action, cont):
            inner = render_expr(cont)
            if isinstance(cont, Choice):
                inner = "(%s)" % inner
            return "%s.%s" % (action, inner)
        case Choice(left, right):
            return "%s + %s" % (render_expr(left), render_expr(right))
    raise TypeError(expr)


def print_definitions(defs: Definitions) -> str:
    lines = ["%s = %s" % (name, render_expr(body)) for name, body in defs.defs.items()]
    lines += ["@%s %s, %s" % (d.kind, d.left, d.right) for d in defs.directives]
    return "\n".join(lines) + "\n"


# -- compilation to an LTS ------------------------------------------------

def _resolve(expr: ProcessExpr, defs: Dict[str, ProcessExpr]) -> ProcessExpr:
    while isinstance(expr, Name):
        expr = defs[expr.ident]
    return expr


def _derivatives(expr: ProcessExpr, defs) -> List[Tuple[str, ProcessExpr]]:
    match expr:
        case Nil():
            return []
        case Prefix(action, cont):
            return [(action, cont)]
        case Choice(left, right):
            return (_derivatives(_resolve(left, defs), defs)
                    + _derivatives(_resolve(right, defs), defs))
    raise TypeError(expr)


def compile_definitions(defs: Definitions) -> Tuple[TransitionSystem, Dict[str, int]]:
    """Build the reachable LTS; structurally identical subexpressions
    share a state.  Returns the system and the name -> state mapping."""
    table = defs.defs
    display: Dict[str, str] = {}     # expression key -> state display name
    for name, body in table.items():
        display.setdefault(render_expr(_resolve(body, table)), name)

    order: List[str] = []
    worklist: List[ProcessExpr] = [_resolve(body, table) for body in table.values()]
    transitions: List[Tuple[str, str, str]] = []
    seen = set()
    while worklist:
        expr = worklist.pop(0)
        key = render_expr(expr)
        if key in seen:
            continue
        seen.add(key)
        order.append(key)
        for action, cont in _derivatives(expr, table):
            tgt = _resolve(cont, table)
            tgt_key = render_expr(tgt)
            transitions.append((key, action, tgt_key))
            if tgt_key not in seen:
                worklist.append(tgt)

    name_of = lambda key: display.get(key, key)
    sys_transitions = [(name_of(src), act, name_of(tgt)) for src, act, tgt in transitions]
    system = TransitionSystem(sys_transitions, states=[name_of(k) for k in order])
    mapping = {name: system.state(name_of(render_expr(_resolve(body, table))))
               for name, body in table.items()}
    return system, mapping
