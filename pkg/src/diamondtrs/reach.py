"""Budgeted reachability, the termination query and the derived relation.

Every semi-decidable question answers Yes (with a replayable trace), No (with a
certificate that can be re-checked) or Unknown. Nothing here treats an exhausted
budget as a negative answer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .encode import INIT_T, TERM_T, RewriteTrace, compile_trs, encode_config, rule_indices, simulation_trace
from .terms import Position, Term, Trs, is_ground, one_step_successors, rewrite_steps, size
from .turing import Cycled, Halted, RunOutcome, TuringMachine, ensure_valid, run


class CertificateConflict(RuntimeError):
    """Two independent decision procedures returned opposite definite answers."""


@dataclass(frozen=True)
class Budget:
    max_rewrite_steps: int = 1000
    max_distinct_terms: int = 10_000
    max_term_size: int = 1000

    def __post_init__(self):
        for name in ("max_rewrite_steps", "max_distinct_terms", "max_term_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def parse(cls, text: str) -> Budget:
        """Read ``steps=N,terms=N,size=N`` (any subset, any order)."""
        keys = {"steps": "max_rewrite_steps", "terms": "max_distinct_terms", "size": "max_term_size"}
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, val = part.partition("=")
            if not sep or key.strip() not in keys:
                raise ValueError(f"bad budget item {part!r}; expected steps=, terms= or size=")
            try:
                values[keys[key.strip()]] = int(val)
            except ValueError:
                raise ValueError(f"budget value for {key.strip()} is not an integer: {val!r}") from None
        return cls(**values)

    def __str__(self) -> str:
        return f"steps={self.max_rewrite_steps},terms={self.max_distinct_terms},size={self.max_term_size}"


@dataclass
class ReachSet:
    """Terms reachable from ``seed`` in BFS order.

    ``complete`` is true only if the set is closed under one-step rewriting,
    i.e. no budget limit cut the search short.
    """

    seed: Term
    terms: list[Term]
    complete: bool
    truncation: str = ""
    parents: dict[Term, tuple[Term, int, Position]] = field(default_factory=dict, repr=False)

    def __contains__(self, t: Term) -> bool:
        return t in self.parents or t == self.seed

    def __len__(self) -> int:
        return len(self.terms)

    def trace_to(self, t: Term) -> RewriteTrace:
        terms, steps = [t], []
        while t != self.seed:
            prev, rule, pos = self.parents[t]
            terms.append(prev)
            steps.append((rule, pos))
            t = prev
        return RewriteTrace(tuple(reversed(terms)), tuple(reversed(steps)))


@dataclass(frozen=True)
class Yes:
    trace: RewriteTrace | None = None


@dataclass(frozen=True)
class No:
    certificate: ReachSet | RunOutcome


@dataclass(frozen=True)
class Unknown:
    reason: str = "budget exhausted"


ThreeValued = Yes | No | Unknown


def _search(trs: Trs, seed: Term, budget: Budget, goal: Callable[[Term], bool] | None = None):
    """Breadth-first closure of ``seed``; stops early when a generated successor meets ``goal``.

    Returns ``(reach_set, trace)`` where ``trace`` leads to the goal, if found.
    """
    parents: dict[Term, tuple[Term, int, Position]] = {}
    order = [seed]
    depth = {seed: 0}
    queue = deque([seed])
    reasons = []
    while queue:
        t = queue.popleft()
        d = depth[t]
        for st in rewrite_steps(trs, t):
            u = st.result
            if goal is not None and goal(u):
                # a recorded term that meets the goal can only be the seed
                rs = ReachSet(seed, order, False, "goal reached", parents)
                path = rs.trace_to(t)
                return rs, RewriteTrace(path.terms + (u,), path.steps + ((st.rule, st.position),))
            if u in depth:
                continue
            if d >= budget.max_rewrite_steps:
                reasons.append(f"rewrite depth {budget.max_rewrite_steps}")
                queue.clear()
                break
            if size(u) > budget.max_term_size:
                reasons.append(f"term size {budget.max_term_size}")
                continue
            if len(order) >= budget.max_distinct_terms:
                reasons.append(f"{budget.max_distinct_terms} distinct terms")
                queue.clear()
                break
            parents[u] = (t, st.rule, st.position)
            depth[u] = d + 1
            order.append(u)
            queue.append(u)
    reasons = list(dict.fromkeys(reasons))
    return ReachSet(seed, order, not reasons, "; ".join(reasons), parents), None


def reachable_terms(trs: Trs, seed: Term, budget: Budget) -> ReachSet:
    """Everything reachable from ``seed`` (including itself) within ``budget``."""
    return _search(trs, seed, budget)[0]


def reaches_plus_where(trs: Trs, start: Term, goal: Callable[[Term], bool], budget: Budget) -> ThreeValued:
    """Is some term satisfying ``goal`` reachable from ``start`` in one or more steps?"""
    rs, trace = _search(trs, start, budget, goal)
    if trace is not None:
        return Yes(trace)
    return No(rs) if rs.complete else Unknown(f"search truncated: {rs.truncation}")


def reaches_plus(trs: Trs, start: Term, target: Term, budget: Budget) -> ThreeValued:
    """``start ->+ target`` under ``trs``; needs at least one step even when they are equal."""
    return reaches_plus_where(trs, start, lambda u: u == target, budget)


def verify_closure(trs: Trs, rs: ReachSet) -> bool:
    """Re-check that a complete reach set is closed under one-step rewriting."""
    members = set(rs.terms)
    return all(u in members for t in rs.terms for u in one_step_successors(trs, t))


def halting_trace(tm: TuringMachine, steps: int) -> RewriteTrace:
    """``init`` to ``term`` through the encoded run of a machine that halts after ``steps`` steps."""
    idx = rule_indices(tm)
    k0 = tm.initial()
    head = RewriteTrace((INIT_T, encode_config(tm, k0)), ((idx["init"], ()),))
    body = simulation_trace(tm, k0, steps)
    tail = RewriteTrace((body.last, TERM_T), ((idx["final"], ()),))
    return head.then(body).then(tail)


def terminates_via_trs(tm: TuringMachine, budget: Budget) -> ThreeValued:
    """Does ``tm`` halt from the blank tape, i.e. ``init ->+ term`` in its compiled system?

    Direct simulation and the term-level search are both run; if both reach a
    verdict they must agree.
    """
    ensure_valid(tm)
    outcome = run(tm, budget.max_rewrite_steps)
    trs = compile_trs(tm)
    searched = reaches_plus(trs, INIT_T, TERM_T, budget)
    by_run: ThreeValued
    if isinstance(outcome, Halted):
        by_run = Yes(halting_trace(tm, outcome.steps))
    elif isinstance(outcome, Cycled):
        by_run = No(outcome)
    else:
        by_run = Unknown(f"no halt or repeated configuration within {outcome.budget} machine steps")
    if isinstance(by_run, Unknown):
        if isinstance(searched, Unknown):
            return Unknown(f"{by_run.reason}; term search truncated")
        return searched
    if not isinstance(searched, Unknown) and type(searched) is not type(by_run):
        raise CertificateConflict(f"simulation says {type(by_run).__name__}, term search says {type(searched).__name__}")
    if isinstance(by_run, No) and isinstance(searched, No):
        return searched
    return by_run


class DerivedRelation:
    """The relation with edges ``init -> t`` for every ``t`` with ``init ->+ t``, and,
    only when the machine halts, ``t -> u`` whenever ``init ->+ t ->* u``.

    Results of the underlying searches are cached per instance.
    """

    def __init__(self, tm: TuringMachine, budget: Budget):
        ensure_valid(tm)
        self.tm = tm
        self.budget = budget
        self.trs = compile_trs(tm)
        self.verdict = terminates_via_trs(tm, budget)
        self.init_cone = reachable_terms(self.trs, INIT_T, budget)
        self._cache: dict[Term, tuple[list[Term], bool]] = {}

    def from_init(self, t: Term) -> ThreeValued:
        """``init ->+ t``; no compiled rule produces ``init``, so ``init`` itself is never reached."""
        if t != INIT_T and t in self.init_cone:
            return Yes(self.init_cone.trace_to(t))
        if t == INIT_T or self.init_cone.complete:
            return No(self.init_cone)
        return Unknown(f"init cone truncated: {self.init_cone.truncation}")

    def successors(self, t: Term) -> tuple[list[Term], bool]:
        if t in self._cache:
            return self._cache[t]
        out: dict[Term, None] = {}
        complete = True
        if t == INIT_T:
            out.update(dict.fromkeys(self.init_cone.terms[1:]))
            complete = self.init_cone.complete
        if not isinstance(self.verdict, No):
            reached = self.from_init(t)
            if isinstance(reached, Unknown):
                complete = False
            elif isinstance(reached, Yes):
                if isinstance(self.verdict, Yes):
                    cone = reachable_terms(self.trs, t, self.budget)
                    out.update(dict.fromkeys(cone.terms))
                    complete = complete and cone.complete
                else:
                    complete = False
        result = (list(out), complete)
        self._cache[t] = result
        return result


def derived_successors(tm: TuringMachine, t: Term, budget: Budget) -> tuple[list[Term], bool]:
    """One-step successors of ``t`` in the derived relation and whether the set is complete."""
    if not is_ground(t):
        raise ValueError("derived successors are only defined for ground terms")
    return DerivedRelation(tm, budget).successors(t)
