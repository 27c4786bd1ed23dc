"""Run a small machine, compile it to a rewrite system and watch the rewrite
trace follow the machine step by step."""

from diamondtrs import compile_trs, decode_term, encode_config, run, simulation_trace
from diamondtrs.corpus import load
from diamondtrs.turing import trajectory

tm = load("count3")
print("machine count3:", run(tm, 100))

trs = compile_trs(tm)
print(f"\ncompiled system ({len(trs.rules)} rules):")
for i, rule in enumerate(trs.rules):
    print(f"  {i:2}: {rule}")

print("\nconfigurations and their encodings:")
for k in trajectory(tm, 10):
    t = encode_config(tm, k)
    assert decode_term(tm, t).normalized() == k.normalized()
    print(f"  {k.state} @ {k.position:2}  cells {dict(k.cells)}   {t}")

trace = simulation_trace(tm, tm.initial(), 3)
print(f"\nthree machine steps as {len(trace)} rewrite steps (replays: {trace.replays(trs)}):")
for t in trace.terms:
    print("  ", t)
