import itertools

import pytest
from hypothesis import given, settings, strategies as st

from diamondtrs.diamond import (
    NAMED_SHAPES, Counterexample, DiamondShape, Holds, ShapeError, ShapeLabel, _Cones, check_shape,
    check_shape_on_derived, check_shape_on_trs, joinable, labeled_cone, parse_shape, trs_successors,
)
from diamondtrs.encode import INIT_T, TERM_T
from diamondtrs.formats import parse_trs
from diamondtrs.oracle import oracle_check_shape, oracle_joinable, witness_valid
from diamondtrs.reach import Budget, CertificateConflict, DerivedRelation, Unknown, reachable_terms
from diamondtrs.terms import Signature, Trs, const, parse_term

from randtrs import ground_terms, random_trs

STAR, PLUS, EQ, ONE = ShapeLabel.STAR, ShapeLabel.PLUS, ShapeLabel.EQ, ShapeLabel.ONE
a, b, c, d = (const(x) for x in "abcd")
DESK = Budget(max_rewrite_steps=200, max_distinct_terms=500)


def test_named_shapes():
    assert parse_shape("strong-confluence").labels == (STAR, EQ)
    assert parse_shape("local-confluence").labels == (STAR, STAR)
    assert parse_shape("diamond").labels == (ONE, ONE)
    assert parse_shape("subcommutative").labels == (EQ, EQ)
    assert parse_shape("successor").labels == (ONE,)
    assert parse_shape("1,1,1,1") == DiamondShape((ONE,) * 4)
    assert parse_shape(" *, + ,=,1").labels == (STAR, PLUS, EQ, ONE)


@pytest.mark.parametrize("text", ["", "2", "*,,*", "confluence", "*;*"])
def test_bad_shapes(text):
    with pytest.raises(ShapeError):
        parse_shape(text)


def test_joinable_examples(r1, r2):
    assert joinable(r2, [a, c], [ONE, ONE], Budget()) == d
    assert joinable(r1, [a, c], [STAR, STAR], Budget()) is None
    assert joinable(r1, [b, b], [STAR, STAR], Budget()) == b
    with pytest.raises(ShapeError):
        joinable(r1, [a], [STAR, STAR], Budget())


def test_oracle_examples(r1, r2):
    assert oracle_joinable(r2, [a, c], [ONE, ONE], Budget()) == d
    assert oracle_joinable(r1, [a, c], [STAR, STAR], Budget()) is None
    assert oracle_joinable(r1, [b, b], [STAR, STAR], Budget()) == b
    empty = Trs(Signature({"a": 0, "c": 0}), ())
    assert oracle_joinable(empty, [a, c], [PLUS, PLUS], Budget()) is None
    assert joinable(empty, [a, c], [PLUS, PLUS], Budget()) is None
    assert joinable(empty, [a, a], [PLUS, PLUS], Budget()) is None


def test_labels_count_steps(r2):
    # b -> a -> d: d is two steps from b
    assert joinable(r2, [b, d], [ONE, STAR], Budget()) is None
    assert joinable(r2, [b, d], [PLUS, STAR], Budget()) == d
    assert joinable(r2, [b, a], [EQ, EQ], Budget()) == a
    assert joinable(r2, [d, d], [PLUS, STAR], Budget()) is None


def test_unbounded_cone_is_unknown():
    grow = parse_trs("(VAR x)\n(RULES\n  a -> f(a)\n)\n")
    stop = parse_trs("(VAR x)\n(RULES\n  a -> f(a)\n  b -> c\n)\n")
    assert joinable(grow, [a, parse_term("f(a)")], [ONE, ONE], Budget(10)) is None
    assert joinable(grow, [a, parse_term("f(a)")], [STAR, STAR], Budget(10)) == parse_term("f(a)")
    assert isinstance(joinable(stop, [a, c], [STAR, STAR], Budget(10)), Unknown)
    assert isinstance(oracle_joinable(stop, [a, c], [STAR, STAR], Budget(10)), Unknown)


def test_check_r1_local_confluence(r1):
    peaks = reachable_terms(r1, b, Budget()).terms
    out = check_shape_on_trs(r1, NAMED_SHAPES["local-confluence"], peaks, Budget())
    assert isinstance(out, Counterexample)
    assert out.peak == b and out.branches == (a, c)


def test_check_r2(r2):
    peaks = [a, b, c, d]
    out = check_shape_on_trs(r2, NAMED_SHAPES["local-confluence"], peaks, Budget())
    assert isinstance(out, Holds) and not out.exact
    out = check_shape_on_trs(r2, NAMED_SHAPES["diamond"], peaks, Budget())
    assert isinstance(out, Counterexample)
    assert out.peak == a and out.branches == (d, d)


def test_vacuous_peak():
    empty = Trs(Signature({"a": 0}), ())
    for shape in NAMED_SHAPES.values():
        assert isinstance(check_shape_on_trs(empty, shape, [a], Budget()), Holds)


def test_unknown_check():
    grow = parse_trs("(VAR)\n(RULES\n  a -> f(a)\n  a -> b\n)\n")
    out = check_shape_on_trs(grow, NAMED_SHAPES["local-confluence"], [a], Budget(5))
    assert isinstance(out, Unknown)


def test_peaks_must_be_ground(r1):
    from diamondtrs.terms import Var
    with pytest.raises(ValueError):
        check_shape_on_trs(r1, NAMED_SHAPES["diamond"], [Var("x")], Budget())


# --- derived relation ------------------------------------------------------

SHAPES = [*NAMED_SHAPES.values(), parse_shape("1,1,1,1")]


@pytest.mark.parametrize("shape", SHAPES, ids=str)
def test_halt1_holds_exactly(machines, shape):
    out = check_shape_on_derived(machines["halt1"], shape, DESK, cross_check=True)
    assert isinstance(out, Holds) and out.exact
    assert isinstance(out.evidence["cross_check"], Holds)


@pytest.mark.parametrize("shape", SHAPES, ids=str)
def test_loop2_counterexample(machines, shape):
    tm = machines["loop2"]
    out = check_shape_on_derived(tm, shape, DESK, cross_check=True)
    assert isinstance(out, Counterexample) and out.exact and out.peak == INIT_T
    assert len(out.branches) == len(shape)
    if len(shape) >= 2:
        assert out.branches[0] != out.branches[1]
    rel = DerivedRelation(tm, DESK)
    init_succ = set(rel.successors(INIT_T)[0])
    for br, trace in zip(out.branches, out.evidence["branch_traces"]):
        assert br in init_succ
        assert trace.replays(rel.trs) and trace.terms[0] == INIT_T and trace.last == br
        assert rel.successors(br) == ([], True)
    assert isinstance(out.evidence["cross_check"], Counterexample)


def test_loop1_unknown(machines):
    for shape in SHAPES:
        assert isinstance(check_shape_on_derived(machines["loop1"], shape, DESK), Unknown)


def test_loop1_cross_check_is_skipped(machines):
    out = check_shape_on_derived(machines["loop1"], parse_shape("1,1,1,1"), DESK, cross_check=True)
    assert isinstance(out, Unknown)


def test_wide_fan_out_is_pruned():
    # 300 successors and four branches: 3e9 multisets if enumerated blindly
    leaves = [const(f"c{i}") for i in range(300)]

    def succ(t):
        return (leaves, True) if t == a else ([], False)

    out = check_shape(succ, parse_shape("1,1,1,1"), [a], DESK)
    assert isinstance(out, Unknown)
    succ_done = lambda t: (leaves, True) if t == a else ([], True)
    out = check_shape(succ_done, parse_shape("1,1,1,1"), [a], DESK)
    assert isinstance(out, Counterexample) and out.branches == (leaves[0],) * 4


def test_trivial_single_branch(machines):
    for text in ("*", "="):
        out = check_shape_on_derived(machines["loop2"], parse_shape(text), DESK, cross_check=True)
        assert isinstance(out, Holds) and out.exact
    out = check_shape_on_derived(machines["loop2"], parse_shape("+"), DESK)
    assert isinstance(out, Counterexample)


def test_cross_check_conflict_detected(machines, monkeypatch):
    import diamondtrs.diamond as dmod
    monkeypatch.setattr(dmod, "check_shape", lambda *args: Counterexample(INIT_T, (TERM_T,), "forced"))
    with pytest.raises(CertificateConflict):
        check_shape_on_derived(machines["halt1"], NAMED_SHAPES["diamond"], DESK, cross_check=True)


# --- enumeration and lattice properties ----------------------------------

def product_check(trs, shape, peaks, budget):
    """Plain product enumeration, no multiset shortcut."""
    cones = _Cones(trs_successors(trs), budget)
    unknown = False
    for peak in peaks:
        succ, _ = cones.succ(peak)
        for tup in itertools.product(succ, repeat=len(shape)):
            res = cones.join(tup, shape.labels)
            if res is None:
                return ("counterexample", peak, tup)
            unknown |= isinstance(res, Unknown)
    return ("unknown",) if unknown else ("holds",)


shapes_st = st.lists(st.sampled_from(list(ShapeLabel)), min_size=1, max_size=3).map(
    lambda ls: DiamondShape(tuple(ls)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), shapes_st)
def test_multiset_shortcut_matches_product(seed, shape):
    trs = random_trs(seed)
    peaks = ground_terms(trs, 4)
    budget = Budget(6)
    got = check_shape_on_trs(trs, shape, peaks, budget)
    want = product_check(trs, shape, peaks, budget)
    if isinstance(got, Counterexample):
        assert want == ("counterexample", got.peak, got.branches)
    else:
        assert want[0] == ("holds" if isinstance(got, Holds) else "unknown")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_oracle_check_agrees(seed):
    trs = random_trs(seed)
    peaks = ground_terms(trs, 4)
    for shape in SHAPES[:4]:
        got = check_shape_on_trs(trs, shape, peaks, Budget(6))
        want = oracle_check_shape(trs, shape, peaks, Budget(6))
        kind = {Holds: "holds", Counterexample: "counterexample", Unknown: "unknown"}[type(got)]
        if "unknown" not in (kind, want):
            assert kind == want


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_label_lattice(seed, data):
    trs = random_trs(seed)
    terms = ground_terms(trs, 4)
    x = data.draw(st.sampled_from(terms))
    y = data.draw(st.sampled_from(terms))
    budget = Budget(6)
    weaker = {ONE: [EQ, PLUS, STAR], EQ: [STAR], PLUS: [STAR], STAR: []}
    for k in ShapeLabel:
        w = joinable(trs, [x, y], [k, k], budget)
        if isinstance(w, Unknown) or w is None:
            continue
        for weak in weaker[k]:
            assert witness_valid(trs, x, weak, w, budget) and witness_valid(trs, y, weak, w, budget)
            assert joinable(trs, [x, y], [weak, weak], budget) is not None


def test_labeled_cone_orders(r2):
    succ = trs_successors(r2)
    assert labeled_cone(succ, b, STAR, Budget()) == ([b, a, c, d], True)
    assert labeled_cone(succ, b, PLUS, Budget()) == ([a, c, d], True)
    assert labeled_cone(succ, b, EQ, Budget()) == ([b, a, c], True)
    assert labeled_cone(succ, b, ONE, Budget()) == ([a, c], True)
    assert labeled_cone(succ, b, STAR, Budget(1)) == ([b, a, c], False)
