"""Naive reference implementation of joinability and shape checking.

Used to cross-examine :mod:`diamondtrs.diamond`. It deliberately shares no code
with the main path: rewriting, matching and reachability are redone here in the
most direct way, by tracking the set of endpoints of all rewrite sequences of
each exact length.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .diamond import DiamondShape, ShapeLabel
from .reach import Budget, Unknown
from .terms import App, Term, Trs, Var


def _match(p: Term, t: Term, env: dict) -> bool:
    if isinstance(p, Var):
        if p.name in env:
            return env[p.name] == t
        env[p.name] = t
        return True
    if not isinstance(t, App) or p.head != t.head or len(p.args) != len(t.args):
        return False
    return all(_match(a, b, env) for a, b in zip(p.args, t.args))


def _inst(t: Term, env: dict) -> Term:
    if isinstance(t, Var):
        return env[t.name]
    return App(t.head, tuple(_inst(a, env) for a in t.args))


def _nodes(t: Term) -> int:
    return 1 + sum(_nodes(a) for a in t.args) if isinstance(t, App) else 1


class NaiveRewriter:
    def __init__(self, trs: Trs, budget: Budget):
        self.rules = trs.rules
        self.n = budget.max_rewrite_steps
        self.max_size = budget.max_term_size
        self._levels: dict[Term, tuple[list[set[Term]], bool]] = {}
        self._reducts: dict[Term, set[Term]] = {}

    def reducts(self, t: Term) -> set[Term]:
        if t not in self._reducts:
            out = set()
            for rule in self.rules:
                env: dict = {}
                if _match(rule.lhs, t, env):
                    out.add(_inst(rule.rhs, env))
            if isinstance(t, App):
                for i, a in enumerate(t.args):
                    for r in self.reducts(a):
                        out.add(App(t.head, t.args[:i] + (r,) + t.args[i + 1:]))
            self._reducts[t] = out
        return self._reducts[t]

    def levels(self, t: Term) -> tuple[list[set[Term]], bool]:
        """``levels[k]``: endpoints of all sequences of exactly ``k`` steps, ``k <= n``.

        The flag says no sequence beyond length ``n`` (or past the size bound)
        reaches anything new.
        """
        if t not in self._levels:
            lv = [{t}]
            oversize = False
            for _ in range(self.n):
                nxt = set()
                for u in lv[-1]:
                    for r in self.reducts(u):
                        if _nodes(r) > self.max_size:
                            oversize = True
                        else:
                            nxt.add(r)
                lv.append(nxt)
            self._levels[t] = (lv, oversize)
        lv, oversize = self._levels[t]
        return lv, not oversize

    def endpoints(self, t: Term, label: ShapeLabel) -> tuple[set[Term], bool]:
        lv, within_size = self.levels(t)
        if label is ShapeLabel.ONE:
            return set(lv[1]) if len(lv) > 1 else self.reducts(t), within_size
        if label is ShapeLabel.EQ:
            return {t} | (lv[1] if len(lv) > 1 else self.reducts(t)), within_size
        lo = 0 if label is ShapeLabel.STAR else 1
        got = set().union(*lv[lo:])
        beyond = set().union(*(self.reducts(u) for u in lv[-1])) if lv[-1] else set()
        return got, within_size and beyond <= got


def oracle_joinable(trs: Trs, branches: Sequence[Term], labels: Sequence[ShapeLabel], budget: Budget,
                    rewriter: NaiveRewriter | None = None) -> Term | None | Unknown:
    """Same contract as :func:`diamondtrs.diamond.joinable`, computed naively.

    The witness returned is the common endpoint fewest steps away from the first
    branch, ties broken by node count and then text.
    """
    if len(branches) != len(labels):
        raise ValueError(f"{len(branches)} branches but {len(labels)} labels")
    rw = rewriter or NaiveRewriter(trs, budget)
    sets, exact = [], True
    for b, k in zip(branches, labels):
        s, ok = rw.endpoints(b, k)
        sets.append(s)
        exact = exact and ok
    common = set.intersection(*sets)
    if common:
        lv, _ = rw.levels(branches[0])
        dist = {}
        for k, level in enumerate(lv):
            for y in level:
                dist.setdefault(y, k)
        return min(common, key=lambda y: (dist.get(y, len(lv)), _nodes(y), str(y)))
    return None if exact else Unknown("sequence enumeration cut off")


def oracle_check_shape(trs: Trs, shape: DiamondShape, peaks: Iterable[Term], budget: Budget) -> str:
    """``"holds"``, ``"counterexample"`` or ``"unknown"`` by brute force over all successor tuples."""
    rw = NaiveRewriter(trs, budget)
    unknown = False
    for peak in peaks:
        succ = sorted(rw.reducts(peak), key=str)
        for tup in itertools.product(succ, repeat=len(shape.labels)):
            res = oracle_joinable(trs, tup, shape.labels, budget, rw)
            if res is None:
                return "counterexample"
            if isinstance(res, Unknown):
                unknown = True
    return "unknown" if unknown else "holds"


def witness_valid(trs: Trs, branch: Term, label: ShapeLabel, y: Term, budget: Budget) -> bool:
    """Does ``branch`` reach ``y`` with a step count allowed by ``label``?"""
    lv, _ = NaiveRewriter(trs, budget).levels(branch)
    lengths = {k for k, s in enumerate(lv) if y in s}
    allowed = {ShapeLabel.ONE: {1}, ShapeLabel.EQ: {0, 1}}.get(label)
    if allowed is not None:
        return bool(lengths & allowed)
    return bool(lengths - ({0} if label is ShapeLabel.PLUS else set()))
