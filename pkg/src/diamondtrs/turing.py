"""Deterministic single-tape Turing machines over a two-way infinite tape."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

LEFT = "L"
RIGHT = "R"

Action = tuple[str, str, str]  # (next state, direction, written symbol)


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    blank: str
    start: str
    final: str
    delta: Mapping[tuple[str, str], Action] = field(hash=False)

    def __hash__(self) -> int:
        return hash((self.states, self.alphabet, self.blank, self.start, self.final,
                     tuple(self.delta.items())))

    def initial(self) -> Configuration:
        return Configuration(self.start, 0)


@dataclass(frozen=True)
class Configuration:
    """State, head position and the non-blank cells of the tape, sorted by position."""

    state: str
    position: int
    cells: tuple[tuple[int, str], ...] = ()

    @classmethod
    def make(cls, state: str, position: int, tape: Mapping[int, str], blank: str) -> Configuration:
        return cls(state, position, tuple(sorted((p, a) for p, a in tape.items() if a != blank)))

    def read(self, pos: int, blank: str) -> str:
        for p, a in self.cells:
            if p == pos:
                return a
        return blank

    def tape(self) -> dict[int, str]:
        return dict(self.cells)

    def normalized(self) -> Configuration:
        """Translate so the head sits at position 0."""
        d = self.position
        if d == 0:
            return self
        return Configuration(self.state, 0, tuple((p - d, a) for p, a in self.cells))


@dataclass(frozen=True)
class Halted:
    steps: int
    final: Configuration


@dataclass(frozen=True)
class Cycled:
    """Configuration number ``prefix + period`` equals configuration number ``prefix``."""

    prefix: int
    period: int


@dataclass(frozen=True)
class Exceeded:
    budget: int


RunOutcome = Halted | Cycled | Exceeded


class InvalidMachine(ValueError):
    def __init__(self, defects: list[str]):
        super().__init__("; ".join(defects))
        self.defects = defects


def validate_machine(tm: TuringMachine) -> list[str]:
    """Return the list of violated well-formedness clauses; empty means valid."""
    defects = []
    if len(set(tm.states)) != len(tm.states):
        defects.append("duplicate states")
    if len(set(tm.alphabet)) != len(tm.alphabet):
        defects.append("duplicate alphabet symbols")
    if tm.blank not in tm.alphabet:
        defects.append(f"blank {tm.blank} not in alphabet")
    if tm.start not in tm.states:
        defects.append(f"start state {tm.start} not in states")
    if tm.final not in tm.states:
        defects.append(f"final state {tm.final} not in states")
    for q in tm.states:
        if q == tm.final:
            continue
        for a in tm.alphabet:
            if (q, a) not in tm.delta:
                defects.append(f"delta undefined at ({q},{a})")
    for (q, a), (q2, d, b) in tm.delta.items():
        if q == tm.final:
            defects.append(f"delta defined at final state ({q},{a})")
        elif q not in tm.states or a not in tm.alphabet:
            defects.append(f"delta defined outside states x alphabet at ({q},{a})")
        if q2 not in tm.states:
            defects.append(f"delta({q},{a}) targets unknown state {q2}")
        if d not in (LEFT, RIGHT):
            defects.append(f"delta({q},{a}) has bad direction {d!r}")
        if b not in tm.alphabet:
            defects.append(f"delta({q},{a}) writes unknown symbol {b}")
    return defects


def ensure_valid(tm: TuringMachine) -> None:
    defects = validate_machine(tm)
    if defects:
        raise InvalidMachine(defects)


def step(tm: TuringMachine, k: Configuration) -> Configuration | None:
    if k.state == tm.final:
        return None
    q2, d, b = tm.delta[k.state, k.read(k.position, tm.blank)]
    tape = k.tape()
    tape[k.position] = b
    p2 = k.position + 1 if d == RIGHT else k.position - 1
    return Configuration.make(q2, p2, tape, tm.blank)


def run(tm: TuringMachine, max_steps: int) -> RunOutcome:
    """Iterate from the all-blank start configuration for at most ``max_steps`` steps.

    A repeated configuration is an exact proof of non-termination because the
    step relation is deterministic.
    """
    ensure_valid(tm)
    k = tm.initial()
    if k.state == tm.final:
        return Halted(0, k)
    seen = {k: 0}
    for n in range(1, max_steps + 1):
        k = step(tm, k)
        if k.state == tm.final:
            return Halted(n, k)
        first = seen.setdefault(k, n)
        if first != n:
            return Cycled(first, n - first)
    return Exceeded(max_steps)


def trajectory(tm: TuringMachine, max_steps: int) -> list[Configuration]:
    """The start configuration followed by up to ``max_steps`` successors."""
    out = [tm.initial()]
    for _ in range(max_steps):
        nxt = step(tm, out[-1])
        if nxt is None:
            break
        out.append(nxt)
    return out
