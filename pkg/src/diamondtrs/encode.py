"""Compile a Turing machine into a rewrite system and move between configurations and terms.

A configuration in state ``q`` becomes ``st_q(L, R)`` where ``L`` lists the head
cell and the cells to its left (nearest first) and ``R`` lists the cells to the
right of the head. Lists are built from ``cons``/``nil``; the blank symbol is the
constant ``blank`` and every other tape symbol is a constant of the same name.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import IDENT, App, Position, Rule, Signature, Term, Trs, Var, apply_step, const
from .turing import LEFT, Configuration, TuringMachine, ensure_valid, step

STATE_PREFIX = "st_"
CONS = "cons"
NIL = "nil"
BLANK = "blank"
INIT = "init"
TERM = "term"
RESERVED = frozenset({CONS, NIL, BLANK, INIT, TERM})

NIL_T = const(NIL)
INIT_T = const(INIT)
TERM_T = const(TERM)

RULE_VARIABLES = ("xs", "ys", "l", "r", "x", "y")


class EncodingError(ValueError):
    pass


def state_symbol(q: str) -> str:
    return STATE_PREFIX + q


def symbol_constant(tm: TuringMachine, a: str) -> str:
    return BLANK if a == tm.blank else a


def check_names(tm: TuringMachine) -> None:
    """Reject machines whose identifiers would collide with generated symbol names."""
    problems = []
    constants = set()
    for a in tm.alphabet:
        if a == tm.blank:
            continue
        if not IDENT.fullmatch(a):
            problems.append(f"tape symbol {a!r} is not an identifier")
        elif a in RESERVED or a.startswith(STATE_PREFIX):
            problems.append(f"tape symbol {a!r} collides with a reserved name")
        constants.add(a)
    for q in tm.states:
        if not IDENT.fullmatch(STATE_PREFIX + q):
            problems.append(f"state {q!r} does not form an identifier")
        elif state_symbol(q) in constants:
            problems.append(f"state symbol {state_symbol(q)} collides with a tape symbol")
    if problems:
        raise EncodingError("; ".join(problems))


def cons_list(items) -> Term:
    t: Term = NIL_T
    for a in reversed(list(items)):
        t = App(CONS, (a, t))
    return t


def signature(tm: TuringMachine) -> Signature:
    symbols = {CONS: 2, NIL: 0, INIT: 0, TERM: 0, BLANK: 0}
    for a in tm.alphabet:
        symbols[symbol_constant(tm, a)] = 0
    for q in tm.states:
        symbols[state_symbol(q)] = 2
    return Signature(symbols, frozenset(RULE_VARIABLES))


def compile_trs(tm: TuringMachine) -> Trs:
    """The rewrite system simulating ``tm``.

    Rule order: two blank-insertion rules per state, one rule per transition (in
    the machine's delta order), then ``st_final(x,y) -> term`` and
    ``init -> st_start(nil,nil)``.
    """
    ensure_valid(tm)
    check_names(tm)
    xs, ys, l, r, x, y = (Var(v) for v in RULE_VARIABLES)
    pad = cons_list([const(BLANK)])
    rules = []
    for q in tm.states:
        f = state_symbol(q)
        rules.append(Rule(App(f, (xs, NIL_T)), App(f, (xs, pad))))
        rules.append(Rule(App(f, (NIL_T, ys)), App(f, (pad, ys))))
    for (q, a), (q2, d, b) in tm.delta.items():
        ca, cb = const(symbol_constant(tm, a)), const(symbol_constant(tm, b))
        lhs = App(state_symbol(q), (App(CONS, (ca, l)), App(CONS, (x, r))))
        if d == LEFT:
            rhs = App(state_symbol(q2), (l, App(CONS, (cb, App(CONS, (x, r))))))
        else:
            rhs = App(state_symbol(q2), (App(CONS, (x, App(CONS, (cb, l)))), r))
        rules.append(Rule(lhs, rhs))
    rules.append(Rule(App(state_symbol(tm.final), (x, y)), TERM_T))
    rules.append(Rule(INIT_T, App(state_symbol(tm.start), (NIL_T, NIL_T))))
    return Trs(signature(tm), tuple(rules))


def _trimmed(cells: list[str], blank: str) -> list[str]:
    while cells and cells[-1] == blank:
        cells.pop()
    return cells


def encode_config(tm: TuringMachine, k: Configuration) -> Term:
    """Canonical term for ``k``: both lists drop all trailing blanks."""
    tape = k.tape()
    if tape:
        lo, hi = min(tape), max(tape)
    else:
        lo = hi = k.position
    left = [tape.get(p, tm.blank) for p in range(k.position, min(lo, k.position) - 1, -1)]
    right = [tape.get(p, tm.blank) for p in range(k.position + 1, max(hi, k.position) + 1)]
    lists = []
    for cells in (left, right):
        cells = _trimmed(cells, tm.blank)
        lists.append(cons_list([const(symbol_constant(tm, a)) for a in cells]))
    return App(state_symbol(k.state), tuple(lists))


def _decode_list(t: Term, symbols: dict[str, str]) -> list[str] | None:
    out = []
    while isinstance(t, App) and t.head == CONS and len(t.args) == 2:
        head = t.args[0]
        if not (isinstance(head, App) and not head.args and head.head in symbols):
            return None
        out.append(symbols[head.head])
        t = t.args[1]
    if t != NIL_T:
        return None
    return out


def decode_term(tm: TuringMachine, t: Term) -> Configuration | None:
    """Configuration encoded by ``t`` with the head at position 0, or None.

    Explicit blank padding is ignored, so every encoding of a configuration
    decodes to the same value.
    """
    if not (isinstance(t, App) and len(t.args) == 2 and t.head.startswith(STATE_PREFIX)):
        return None
    q = t.head[len(STATE_PREFIX):]
    if q not in tm.states:
        return None
    symbols = {symbol_constant(tm, a): a for a in tm.alphabet}
    left = _decode_list(t.args[0], symbols)
    right = _decode_list(t.args[1], symbols)
    if left is None or right is None:
        return None
    tape = {-i: a for i, a in enumerate(left)}
    tape.update({i + 1: a for i, a in enumerate(right)})
    return Configuration.make(q, 0, tape, tm.blank)


@dataclass(frozen=True)
class RewriteTrace:
    """Terms ``t0 .. tn`` with the (rule index, position) used for each step."""

    terms: tuple[Term, ...]
    steps: tuple[tuple[int, Position], ...] = ()

    def __post_init__(self):
        if not self.terms or len(self.steps) != len(self.terms) - 1:
            raise ValueError("a trace needs one step per adjacent pair of terms")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def last(self) -> Term:
        return self.terms[-1]

    def replays(self, trs: Trs) -> bool:
        return all(
            apply_step(trs, a, rule, pos) == b
            for a, b, (rule, pos) in zip(self.terms, self.terms[1:], self.steps)
        )

    def then(self, other: RewriteTrace) -> RewriteTrace:
        if other.terms[0] != self.last:
            raise ValueError("traces do not connect")
        return RewriteTrace(self.terms + other.terms[1:], self.steps + other.steps)


def rule_indices(tm: TuringMachine) -> dict:
    """Index of each rule of ``compile_trs(tm)`` by role."""
    idx = {}
    for i, q in enumerate(tm.states):
        idx["pad_right", q] = 2 * i
        idx["pad_left", q] = 2 * i + 1
    base = 2 * len(tm.states)
    for j, key in enumerate(tm.delta):
        idx["delta", key] = base + j
    idx["final"] = base + len(tm.delta)
    idx["init"] = base + len(tm.delta) + 1
    return idx


def simulation_trace(tm: TuringMachine, k: Configuration, n: int) -> RewriteTrace:
    """Rewrite trace from ``encode_config(k)`` realizing ``n`` machine steps.

    Each machine step pads an empty side with one blank where needed (left side
    first) and then fires exactly one transition rule at the root.
    """
    ensure_valid(tm)
    check_names(tm)
    idx = rule_indices(tm)
    trs = compile_trs(tm)
    t = encode_config(tm, k)
    terms, steps = [t], []

    def fire(rule: int):
        nonlocal t
        t = apply_step(trs, t, rule, ())
        assert t is not None, "compiled rule failed to apply"
        terms.append(t)
        steps.append((rule, ()))

    for i in range(n):
        if k.state == tm.final:
            raise ValueError(f"machine halted after {i} of {n} requested steps")
        if t.args[0] == NIL_T:
            fire(idx["pad_left", k.state])
        if t.args[1] == NIL_T:
            fire(idx["pad_right", k.state])
        head = t.args[0].args[0].head
        a = tm.blank if head == BLANK else head
        fire(idx["delta", (k.state, a)])
        k = step(tm, k)
    return RewriteTrace(tuple(terms), tuple(steps))
