"""Diamond-like shapes on a plain rewrite system and on the relation derived
from a machine, where the verdict is exactly the machine's halting behaviour."""

from diamondtrs import NAMED_SHAPES, Budget, Counterexample, Holds, Unknown, check_shape_on_derived, check_shape_on_trs, joinable, parse_shape
from diamondtrs.corpus import load
from diamondtrs.formats import parse_trs
from diamondtrs.terms import parse_term

trs = parse_trs("(RULES\n b -> a\n b -> c\n a -> d\n c -> d\n)")
b, a, c = (parse_term(x) for x in "bac")
budget = Budget(20, 100)
print("a and c join at", joinable(trs, [a, c], parse_shape("*,*").labels, budget))
for name, shape in NAMED_SHAPES.items():
    print(f"  {name:18} ({shape}) at b:", check_shape_on_trs(trs, shape, [b], budget))

print("\nderived relations:")
desk = Budget(200, 500)
for machine in ("halt1", "loop2", "loop1"):
    out = check_shape_on_derived(load(machine), NAMED_SHAPES["diamond"], desk, cross_check=True)
    match out:
        case Holds(exact, evidence):
            print(f"  {machine}: holds (exact={exact}): {evidence['reason']}")
        case Counterexample(peak, branches, explanation):
            print(f"  {machine}: counterexample at {peak}: {explanation}")
        case Unknown(reason):
            print(f"  {machine}: unknown: {reason}")
