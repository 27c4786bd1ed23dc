"""First-order terms, matching, substitution and one-step rewriting.

Only ground subjects are ever rewritten, so matching is one-sided and no
unification is needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

Position = tuple[int, ...]
Substitution = Mapping[str, "Term"]

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class TermError(ValueError):
    """Raised for malformed term text or terms that violate a signature."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at column {pos + 1})"
        super().__init__(message)
        self.pos = pos


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    head: str
    args: tuple[Term, ...] = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.head, self.args)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_term(self)


Term = Var | App


def const(name: str) -> App:
    return App(name, ())


@dataclass(frozen=True)
class Signature:
    """Function symbols with fixed arities, plus the identifiers read as variables."""

    symbols: Mapping[str, int]
    variables: frozenset[str] = frozenset()

    def __post_init__(self):
        clash = set(self.symbols) & set(self.variables)
        if clash:
            raise TermError(f"identifiers used both as symbol and variable: {sorted(clash)}")
        for name, arity in self.symbols.items():
            if not IDENT.fullmatch(name):
                raise TermError(f"bad symbol name {name!r}")
            if arity < 0:
                raise TermError(f"negative arity for {name}")

    def arity(self, name: str) -> int | None:
        return self.symbols.get(name)


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise TermError(f"rule lhs is a bare variable: {self.lhs}")
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            raise TermError(f"rhs variables not in lhs: {sorted(extra)} in {self}")

    def __str__(self) -> str:
        return f"{format_term(self.lhs)} -> {format_term(self.rhs)}"


@dataclass(frozen=True)
class Trs:
    signature: Signature
    rules: tuple[Rule, ...]

    def __post_init__(self):
        for rule in self.rules:
            check_term(rule.lhs, self.signature)
            check_term(rule.rhs, self.signature)


@dataclass(frozen=True)
class Step:
    """One rewrite step: which rule fired, where, and the resulting term."""

    rule: int
    position: Position
    result: Term


# --- inspection -------------------------------------------------------------


def variables(t: Term) -> set[str]:
    match t:
        case Var(name):
            return {name}
        case App(_, args):
            out: set[str] = set()
            for a in args:
                out |= variables(a)
            return out


def is_ground(t: Term) -> bool:
    match t:
        case Var():
            return False
        case App(_, args):
            return all(is_ground(a) for a in args)


def size(t: Term) -> int:
    """Node count."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def check_term(t: Term, sig: Signature) -> None:
    match t:
        case Var(name):
            if name not in sig.variables:
                raise TermError(f"undeclared variable {name}")
        case App(head, args):
            arity = sig.arity(head)
            if arity is None:
                raise TermError(f"unknown symbol {head}")
            if arity != len(args):
                raise TermError(f"{head} expects {arity} arguments, got {len(args)}")
            for a in args:
                check_term(a, sig)


def positions(t: Term) -> Iterator[tuple[Position, Term]]:
    """Subterm positions in leftmost-outermost (pre-order) order."""
    stack: list[tuple[Position, Term]] = [((), t)]
    while stack:
        pos, sub = stack.pop()
        yield pos, sub
        if isinstance(sub, App):
            for i in range(len(sub.args) - 1, -1, -1):
                stack.append((pos + (i,), sub.args[i]))


def subterm(t: Term, pos: Position) -> Term:
    for i in pos:
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    args = list(t.args)
    args[i] = replace_at(args[i], rest, new)
    return App(t.head, tuple(args))


# --- text -------------------------------------------------------------------


def format_term(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case App(head, ()):
            return head
        case App(head, args):
            return f"{head}({','.join(format_term(a) for a in args)})"


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.i = 0
        self.sig = sig

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def expect(self, ch: str):
        self.skip()
        if self.i >= len(self.text) or self.text[self.i] != ch:
            found = self.text[self.i] if self.i < len(self.text) else "end of input"
            raise TermError(f"expected {ch!r}, found {found!r}", self.i)
        self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def term(self) -> Term:
        self.skip()
        start = self.i
        m = IDENT.match(self.text, self.i)
        if not m:
            raise TermError("expected identifier", self.i)
        name = m.group()
        self.i = m.end()
        args: list[Term] = []
        if self.peek() == "(":
            self.i += 1
            args.append(self.term())
            while self.peek() == ",":
                self.i += 1
                args.append(self.term())
            self.expect(")")
        sig = self.sig
        if sig is None:
            return App(name, tuple(args))
        if name in sig.variables:
            if args:
                raise TermError(f"variable {name} applied to arguments", start)
            return Var(name)
        arity = sig.arity(name)
        if arity is None:
            raise TermError(f"unknown symbol {name}", start)
        if arity != len(args):
            raise TermError(f"{name} expects {arity} arguments, got {len(args)}", start)
        return App(name, tuple(args))


def parse_term(text: str, sig: Signature | None = None) -> Term:
    """Parse ``ident | ident(term, ...)``.

    With a signature, declared variables become :class:`Var` and symbols are
    arity-checked. Without one, every identifier is a function symbol.
    """
    p = _Parser(text, sig)
    t = p.term()
    p.skip()
    if p.i != len(text):
        raise TermError("trailing input", p.i)
    return t


# --- matching and rewriting -------------------------------------------------


def match_pattern(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """Bindings making ``pattern`` equal to ``subject``, or None.

    Repeated pattern variables must bind equal subterms.
    """
    sigma: dict[str, Term] = {}
    todo = [(pattern, subject)]
    while todo:
        p, s = todo.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        elif isinstance(s, App) and p.head == s.head and len(p.args) == len(s.args):
            todo.extend(zip(p.args, s.args))
        else:
            return None
    return sigma


def apply_substitution(t: Term, s: Substitution) -> Term:
    match t:
        case Var(name):
            return s.get(name, t)
        case App(head, args):
            if not args:
                return t
            return App(head, tuple(apply_substitution(a, s) for a in args))


def rewrite_steps(trs: Trs, t: Term) -> Iterator[Step]:
    """All one-step rewrites of ``t``, by position (leftmost-outermost) then rule order."""
    for pos, sub in positions(t):
        if isinstance(sub, Var):
            continue
        for idx, rule in enumerate(trs.rules):
            sigma = match_pattern(rule.lhs, sub)
            if sigma is not None:
                yield Step(idx, pos, replace_at(t, pos, apply_substitution(rule.rhs, sigma)))


def one_step_successors(trs: Trs, t: Term) -> list[Term]:
    """Distinct one-step reducts of ``t`` in deterministic enumeration order."""
    seen: dict[Term, None] = {}
    for step in rewrite_steps(trs, t):
        seen.setdefault(step.result, None)
    return list(seen)


def apply_step(trs: Trs, t: Term, rule: int, pos: Position) -> Term | None:
    """Rewrite ``t`` with rule ``rule`` at ``pos``; None if it does not apply."""
    try:
        sub = subterm(t, pos)
    except (AttributeError, IndexError):
        return None
    if not 0 <= rule < len(trs.rules):
        return None
    r = trs.rules[rule]
    sigma = match_pattern(r.lhs, sub)
    if sigma is None:
        return None
    return replace_at(t, pos, apply_substitution(r.rhs, sigma))
