"""Diamond-like shapes and their checkers.

A shape with labels ``k1 .. kn`` holds at a peak ``x0`` when every choice of
one-step successors ``x1 .. xn`` (repetition allowed) has a common ``y`` with
``xi`` reaching ``y`` as ``ki`` prescribes:

====== =================== =========
label  steps from xi to y  ASCII
====== =================== =========
one    exactly 1           ``1``
eq     0 or 1              ``=``
plus   1 or more           ``+``
star   0 or more           ``*``
====== =================== =========
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .encode import INIT_T
from .reach import Budget, CertificateConflict, DerivedRelation, No, Unknown, Yes
from .terms import Term, Trs, format_term, is_ground, one_step_successors, size
from .turing import TuringMachine, ensure_valid

Successors = Callable[[Term], "tuple[list[Term], bool]"]


class ShapeLabel(enum.Enum):
    STAR = "*"
    PLUS = "+"
    EQ = "="
    ONE = "1"

    def __str__(self) -> str:
        return self.value


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class DiamondShape:
    labels: tuple[ShapeLabel, ...]

    def __post_init__(self):
        if not self.labels:
            raise ShapeError("a shape needs at least one branch")

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.labels)

    @property
    def trivial(self) -> bool:
        """Single branch allowing zero steps: ``y = x1`` always works."""
        return len(self.labels) == 1 and self.labels[0] in (ShapeLabel.STAR, ShapeLabel.EQ)


def _shape(text: str) -> DiamondShape:
    return DiamondShape(tuple(ShapeLabel(tok) for tok in text.split(",")))


NAMED_SHAPES = {
    "local-confluence": _shape("*,*"),
    "strong-confluence": _shape("*,="),
    "diamond": _shape("1,1"),
    "subcommutative": _shape("=,="),
    "successor": _shape("1"),
}


def parse_shape(text: str) -> DiamondShape:
    """A named shape or a comma-separated list over ``* + = 1``."""
    text = text.strip()
    if text in NAMED_SHAPES:
        return NAMED_SHAPES[text]
    if not text:
        raise ShapeError("empty shape")
    labels = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            labels.append(ShapeLabel(tok))
        except ValueError:
            known = ", ".join(NAMED_SHAPES)
            raise ShapeError(f"bad shape token {tok!r}; use * + = 1 or one of: {known}") from None
    return DiamondShape(tuple(labels))


@dataclass(frozen=True)
class Holds:
    exact: bool
    evidence: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Counterexample:
    peak: Term
    branches: tuple[Term, ...]
    explanation: str
    exact: bool = True
    evidence: dict = field(default_factory=dict, compare=False)


CheckOutcome = Holds | Counterexample | Unknown


# --- labeled cones ----------------------------------------------------------


def trs_successors(trs: Trs) -> Successors:
    def succ(t: Term) -> tuple[list[Term], bool]:
        return one_step_successors(trs, t), True
    return succ


def labeled_cone(succ: Successors, x: Term, label: ShapeLabel, budget: Budget) -> tuple[list[Term], bool]:
    """Terms reachable from ``x`` with a step count allowed by ``label``, in BFS order."""
    if label is ShapeLabel.ONE:
        return succ(x)
    if label is ShapeLabel.EQ:
        nxt, complete = succ(x)
        return [x] + [u for u in nxt if u != x], complete
    if label is ShapeLabel.STAR:
        start = [x]
        complete = True
    else:
        start, complete = succ(x)
    depth = dict.fromkeys(start, 0 if label is ShapeLabel.STAR else 1)
    order = list(depth)
    queue = deque(order)
    while queue:
        t = queue.popleft()
        nxt, ok = succ(t)
        complete = complete and ok
        for u in nxt:
            if u in depth:
                continue
            if depth[t] >= budget.max_rewrite_steps or len(order) >= budget.max_distinct_terms:
                return order, False
            if size(u) > budget.max_term_size:
                complete = False
                continue
            depth[u] = depth[t] + 1
            order.append(u)
            queue.append(u)
    return order, complete


class _Cones:
    def __init__(self, succ: Successors, budget: Budget):
        self.succ = succ
        self.budget = budget
        self.cache: dict = {}

    def get(self, x: Term, label: ShapeLabel) -> tuple[list[Term], frozenset[Term], bool]:
        key = (x, label)
        if key not in self.cache:
            order, complete = labeled_cone(self.succ, x, label, self.budget)
            self.cache[key] = (order, frozenset(order), complete)
        return self.cache[key]

    def join(self, branches: Sequence[Term], labels: Sequence[ShapeLabel]) -> Term | None | Unknown:
        cones = [self.get(b, k) for b, k in zip(branches, labels)]
        first = cones[0][0]
        for y in first:
            if all(y in s for _, s, _ in cones[1:]):
                return y
        if all(c for _, _, c in cones):
            return None
        return Unknown("labeled cones truncated")


def _check_arity(branches, labels):
    if len(branches) != len(labels):
        raise ShapeError(f"{len(branches)} branches but {len(labels)} labels")


def joinable(trs: Trs, branches: Sequence[Term], labels: Sequence[ShapeLabel], budget: Budget) -> Term | None | Unknown:
    """Least common reduct of ``branches`` under ``labels``.

    Returns the witness, None when the fully computed cones are disjoint, or
    :class:`Unknown` when a cone was cut short by the budget.
    """
    _check_arity(branches, labels)
    return _Cones(trs_successors(trs), budget).join(branches, labels)


# --- shape checking ---------------------------------------------------------


class _Search:
    """Depth-first walk over successor tuples carrying the running intersection of
    labeled cones, so that an empty intersection settles a whole subtree: a
    definite failure if every cone on the path is complete, undecided otherwise."""

    def __init__(self, cones: _Cones, out: list[Term], labels: Sequence[ShapeLabel]):
        self.cones = cones
        self.out = out
        self.labels = labels
        self.visited = 0

    def _extend(self, inter, complete, j, label):
        _, cone, ok = self.cones.get(self.out[j], label)
        return (cone if inter is None else inter & cone), complete and ok

    def any_failure(self) -> tuple[bool, bool]:
        """``(fails, undecided)``. Joinability depends only on the multiset of
        successors per label, so indices are non-decreasing within a label group."""
        order = sorted(range(len(self.labels)), key=lambda i: self.labels[i].value)
        labels = [self.labels[i] for i in order]
        undecided = False

        def walk(i, lo, inter, complete):
            nonlocal undecided
            self.visited += 1
            if inter is not None and not inter:
                if complete:
                    return True
                undecided = True
                return False
            if i == len(labels):
                return False
            for j in range(lo, len(self.out)):
                nxt = j if i + 1 < len(labels) and labels[i + 1] is labels[i] else 0
                if walk(i + 1, nxt, *self._extend(inter, complete, j, labels[i])):
                    return True
            return False

        return walk(0, 0, None, True), undecided

    def first_failure(self) -> tuple[int, ...] | None:
        """Lowest failing tuple in product order."""
        n = len(self.labels)

        def walk(prefix, inter, complete):
            if inter is not None and not inter:
                return prefix + (0,) * (n - len(prefix)) if complete else None
            if len(prefix) == n:
                return None
            for j in range(len(self.out)):
                found = walk(prefix + (j,), *self._extend(inter, complete, j, self.labels[len(prefix)]))
                if found is not None:
                    return found
            return None

        return walk((), None, True)


def check_shape(succ: Successors, shape: DiamondShape, peaks: Iterable[Term], budget: Budget) -> CheckOutcome:
    """Check ``shape`` at every peak under an arbitrary successor function.

    The first definite failure (lowest peak, then lowest successor tuple in
    product order) is reported. Success is only ever bounded: it covers the
    supplied peaks.
    """
    cones = _Cones(succ, budget)
    labels = shape.labels
    undecided = []
    n_peaks = n_nodes = 0
    for peak in dict.fromkeys(peaks):
        n_peaks += 1
        out, complete = succ(peak)
        if not complete:
            undecided.append(f"successors of {format_term(peak)} truncated")
        if not out:
            continue
        search = _Search(cones, out, labels)
        fails, unsure = search.any_failure()
        n_nodes += search.visited
        if fails:
            tup = search.first_failure()
            branches = tuple(out[i] for i in tup)
            return Counterexample(peak, branches, _explain(cones, branches, labels))
        if unsure:
            undecided.append(f"join undecided at {format_term(peak)}")
    if undecided:
        return Unknown(f"{undecided[0]} ({len(undecided)} undecided cases, budget {budget})")
    return Holds(False, {"peaks": n_peaks, "search_nodes": n_nodes})


def _explain(cones: _Cones, branches, labels) -> str:
    parts = []
    for b, k in zip(branches, labels):
        order = cones.get(b, k)[0]
        shown = ", ".join(format_term(t) for t in order[:4]) + (", ..." if len(order) > 4 else "")
        parts.append(f"{format_term(b)} -{k}-> {{{shown}}}")
    return "no common reduct: " + "; ".join(parts)


def check_shape_on_trs(trs: Trs, shape: DiamondShape, peaks: Iterable[Term], budget: Budget) -> CheckOutcome:
    peaks = list(peaks)
    for p in peaks:
        if not is_ground(p):
            raise ValueError(f"peak {format_term(p)} is not ground")
    return check_shape(trs_successors(trs), shape, peaks, budget)


def check_shape_on_derived(tm: TuringMachine, shape: DiamondShape, budget: Budget,
                           cross_check: bool = False) -> CheckOutcome:
    """Exact verdict for ``shape`` on the derived relation of ``tm`` when termination is decided.

    A halting machine satisfies every shape: each branch steps to ``term``. A
    machine proven not to halt fails every non-trivial shape at the peak
    ``init``, whose branches then have no successors at all. With
    ``cross_check`` the bounded direct check over ``init`` and its cone is run
    as well and must not contradict the exact verdict (skipped when there is
    no exact verdict to contradict).
    """
    ensure_valid(tm)
    rel = DerivedRelation(tm, budget)
    verdict = rel.verdict
    outcome: CheckOutcome
    if shape.trivial:
        outcome = Holds(True, {"reason": "single branch allowing zero steps; y = x1"})
    elif isinstance(verdict, Yes):
        outcome = Holds(True, {"reason": "machine halts; every branch steps to term",
                               "halting_trace": verdict.trace})
    elif isinstance(verdict, No):
        outcome = _derived_counterexample(rel, shape)
    else:
        outcome = Unknown(f"termination undecided: {verdict.reason}")
    if cross_check and not isinstance(outcome, Unknown):
        peaks = [INIT_T] + [t for t in rel.init_cone.terms if t != INIT_T]
        direct = check_shape(rel.successors, shape, peaks, budget)
        contradicts = (
            (isinstance(outcome, Holds) and outcome.exact and isinstance(direct, Counterexample))
            or (isinstance(outcome, Counterexample) and isinstance(direct, Holds))
        )
        if contradicts:
            raise CertificateConflict(f"exact verdict {type(outcome).__name__} but direct check gave {direct}")
        outcome.evidence["cross_check"] = direct
    return outcome


def _derived_counterexample(rel: DerivedRelation, shape: DiamondShape) -> Counterexample:
    reached = [t for t in rel.init_cone.terms if t != INIT_T]
    need = min(len(shape), 2)
    if len(reached) < need:
        raise RuntimeError("init cone has too few terms to build a counterexample")
    branches = tuple(reached[i % len(reached)] for i in range(len(shape)))
    for b in set(branches):
        nxt, complete = rel.successors(b)
        assert not nxt and complete, "non-halting machine with derived successors past init"
    if len(shape) == 1:
        why = f"{format_term(branches[0])} has no successor but label {shape.labels[0]} needs a step"
    else:
        why = (f"{format_term(branches[0])} and {format_term(branches[1])} are distinct and have no "
               "successors, since the machine never halts")
    traces = tuple(rel.init_cone.trace_to(b) for b in branches)
    return Counterexample(INIT_T, branches, why, True,
                          {"nontermination": rel.verdict.certificate, "branch_traces": traces})
