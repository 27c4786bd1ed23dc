"""Termination as reachability: does init rewrite to term?

Each answer is Yes (a replayable trace), No (a closed set of reachable terms
or a repeated configuration) or Unknown when the budget runs out.
"""

from diamondtrs import Budget, No, Unknown, Yes, compile_trs, reachable_terms, terminates_via_trs
from diamondtrs.corpus import NAMES, load
from diamondtrs.encode import INIT_T
from diamondtrs.reach import verify_closure

budget = Budget(max_rewrite_steps=200, max_distinct_terms=500)
for name in NAMES:
    tm = load(name)
    verdict = terminates_via_trs(tm, budget)
    match verdict:
        case Yes(trace):
            print(f"{name:7} halts: init ->+ term in {len(trace)} steps, replays={trace.replays(compile_trs(tm))}")
        case No(cert):
            print(f"{name:7} never halts: certificate {type(cert).__name__}", end="")
            rs = reachable_terms(compile_trs(tm), INIT_T, budget)
            print(f", {len(rs)} reachable terms, closed={verify_closure(compile_trs(tm), rs)}")
        case Unknown(reason):
            print(f"{name:7} unknown: {reason}")
