"""Text formats: COPS-style TRS files, Turing machine spec files and DOT graphs."""

from __future__ import annotations

import re

from .reach import Budget, reachable_terms
from .terms import App, Rule, Signature, Term, TermError, Trs, Var, format_term, parse_term, rewrite_steps
from .turing import LEFT, RIGHT, TuringMachine


class FormatError(ValueError):
    def __init__(self, message: str, source: str = "<input>", line: int | None = None):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


# --- TRS files --------------------------------------------------------------


def emit_trs(trs: Trs) -> str:
    lines = [f"(VAR {' '.join(sorted(trs.signature.variables))})", "(RULES"]
    lines += [f"  {rule}" for rule in trs.rules]
    lines.append(")")
    return "\n".join(lines) + "\n"


def _blocks(text: str, source: str):
    """Yield ``(keyword, body, first_line)`` for each top-level parenthesised block."""
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        line = text.count("\n", 0, i) + 1
        if text[i] != "(":
            raise FormatError(f"expected '(' to open a block, found {text[i]!r}", source, line)
        depth, j = 0, i
        while j < n:
            if text[j] == "(":
                depth += 1
            elif text[j] == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        if depth:
            raise FormatError("unbalanced parentheses", source, line)
        m = re.match(r"\(\s*([A-Za-z]+)", text[i:j])
        if not m:
            raise FormatError("block without keyword", source, line)
        body_start = i + m.end()
        yield m.group(1).upper(), text[body_start:j], text.count("\n", 0, body_start) + 1
        i = j + 1


def _collect_symbols(t: Term, symbols: dict, variables: frozenset, where):
    if isinstance(t, App):
        if t.head in variables:
            raise where(f"variable {t.head} used as a function symbol")
        known = symbols.setdefault(t.head, len(t.args))
        if known != len(t.args):
            raise where(f"symbol {t.head} used with arities {known} and {len(t.args)}")
        for a in t.args:
            _collect_symbols(a, symbols, variables, where)


def _tag_vars(t: Term, variables: frozenset) -> Term:
    if isinstance(t, App):
        if not t.args and t.head in variables:
            return Var(t.head)
        return App(t.head, tuple(_tag_vars(a, variables) for a in t.args))
    return t


def parse_trs(text: str, source: str = "<input>") -> Trs:
    """Read ``(VAR ...)`` and ``(RULES lhs -> rhs ...)`` blocks; ``(COMMENT ...)`` is skipped.

    Symbols and their arities are inferred from the rules.
    """
    variables: list[str] = []
    raw_rules: list[tuple[int, str, str]] = []
    for kw, body, line in _blocks(text, source):
        if kw == "VAR":
            variables += body.split()
        elif kw == "RULES":
            for k, row in enumerate(body.split("\n")):
                row = row.strip()
                if not row:
                    continue
                lhs, sep, rhs = row.partition("->")
                if not sep:
                    raise FormatError(f"rule without '->': {row!r}", source, line + k)
                raw_rules.append((line + k, lhs, rhs))
        elif kw != "COMMENT":
            raise FormatError(f"unsupported block ({kw} ...)", source, line)
    var_set = frozenset(variables)
    symbols: dict[str, int] = {}
    rules = []
    for line, lhs, rhs in raw_rules:
        def where(msg, line=line):
            return FormatError(msg, source, line)
        try:
            lt = _tag_vars(parse_term(lhs), var_set)
            rt = _tag_vars(parse_term(rhs), var_set)
            _collect_symbols(lt, symbols, var_set, where)
            _collect_symbols(rt, symbols, var_set, where)
            rules.append(Rule(lt, rt))
        except TermError as e:
            raise FormatError(str(e), source, line) from None
    try:
        return Trs(Signature(symbols, var_set), tuple(rules))
    except TermError as e:
        raise FormatError(str(e), source) from None


# --- Turing machine spec files ----------------------------------------------


def emit_tm(tm: TuringMachine) -> str:
    alphabet = [tm.blank] + [a for a in tm.alphabet if a != tm.blank]
    lines = [
        f"states: {' '.join(tm.states)}",
        f"alphabet: {' '.join(alphabet)}",
        f"blank: {tm.blank}",
        f"start: {tm.start}",
        f"final: {tm.final}",
    ]
    lines += [f"delta: {q} {a} -> {q2} {d} {b}" for (q, a), (q2, d, b) in tm.delta.items()]
    return "\n".join(lines) + "\n"


_DELTA = re.compile(r"(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+(\S+)")


def parse_tm(text: str, source: str = "<input>") -> TuringMachine:
    """Read the line-oriented machine format; ``#`` starts a comment."""
    fields: dict[str, list[str]] = {}
    delta: dict = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise FormatError(f"expected 'key: value', got {line!r}", source, n)
        if key == "delta":
            m = _DELTA.fullmatch(rest.strip())
            if not m:
                raise FormatError("delta lines read 'q a -> q2 L|R b'", source, n)
            q, a, q2, d, b = m.groups()
            if d not in (LEFT, RIGHT):
                raise FormatError(f"direction must be L or R, got {d!r}", source, n)
            if (q, a) in delta:
                raise FormatError(f"duplicate delta entry for ({q},{a})", source, n)
            delta[q, a] = (q2, d, b)
        elif key in ("states", "alphabet", "blank", "start", "final"):
            if key in fields:
                raise FormatError(f"duplicate '{key}:' line", source, n)
            fields[key] = rest.split()
        else:
            raise FormatError(f"unknown key {key!r}", source, n)
    for key in ("states", "blank", "start", "final"):
        if key not in fields:
            raise FormatError(f"missing '{key}:' line", source)
    for key in ("blank", "start", "final"):
        if len(fields[key]) != 1:
            raise FormatError(f"'{key}:' takes exactly one name", source)
    blank = fields["blank"][0]
    alphabet = [blank] + [a for a in fields.get("alphabet", []) if a != blank]
    return TuringMachine(tuple(fields["states"]), tuple(alphabet), blank,
                         fields["start"][0], fields["final"][0], delta)


# --- DOT --------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(trs: Trs, seed: Term, budget: Budget) -> str:
    """Reachable terms from ``seed`` as a DOT digraph; edges carry rule indices."""
    rs = reachable_terms(trs, seed, budget)
    ids = {t: f"n{i}" for i, t in enumerate(rs.terms)}
    lines = ["digraph rewrites {", "  node [shape=box];"]
    for t, i in ids.items():
        lines.append(f"  {i} [label={_dot_quote(format_term(t))}];")
    for t in rs.terms:
        edges: dict[str, list[int]] = {}
        for st in rewrite_steps(trs, t):
            if st.result in ids:
                edges.setdefault(ids[st.result], []).append(st.rule)
        for target, rules in edges.items():
            label = ",".join(str(r) for r in dict.fromkeys(rules))
            lines.append(f"  {ids[t]} -> {target} [label={_dot_quote(label)}];")
    if not rs.complete:
        lines.append(f"  // truncated: {rs.truncation}")
    lines.append("}")
    return "\n".join(lines) + "\n"
