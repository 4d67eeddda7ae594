import pytest

from ordgames.errors import FormulaError
from ordgames.finite import FiniteChain, eval_kernel, eval_source
from ordgames.formulas import (Atom, Bin, Neg, Quant, at_least_length,
                               exact_length, parse_formula, position_is,
                               quantifier_depth, relativize, render,
                               to_kernel)

GOOD = [
    "empty(X1)",
    "sing(X2)",
    "X1 sub X2",
    "~empty(X1) & sing(X2)",
    "empty(X1) | empty(X2) | sing(X1)",
    "empty(X1) -> empty(X2) -> sing(X1)",
    "empty(X1) <-> sing(X2)",
    "ex1 x: x in X1",
    "all1 x: x in X1 -> x in X2",
    "ex1 x: ex1 y: x < y & x in X1 & y in X2",
    "ex2 Y: X1 sub Y & all1 x: x in Y -> x in X2",
    "all2 Y: ex1 x: x in Y | empty(Y)",
    "~(empty(X1) & empty(X2))",
    "ex1 x: (all1 y: y < x | y = x) & x in X1",
]


@pytest.mark.parametrize("text", GOOD)
def test_parse_render_round_trip(text):
    f = parse_formula(text)
    again = parse_formula(render(f))
    assert again == f
    assert render(again) == render(f)


def test_precedence_and_or():
    f = parse_formula("empty(X1) & sing(X1) | empty(X2)")
    assert isinstance(f, Bin) and f.op == "|"
    assert isinstance(f.left, Bin) and f.left.op == "&"


def test_precedence_implies_right_assoc():
    f = parse_formula("empty(X1) -> empty(X2) -> sing(X1)")
    assert f.op == "->"
    assert isinstance(f.right, Bin) and f.right.op == "->"
    assert isinstance(f.left, Atom)


def test_quantifier_body_extends_right():
    f = parse_formula("ex1 x: x in X1 & empty(X2)")
    assert isinstance(f, Quant)
    assert isinstance(f.body, Bin) and f.body.op == "&"


def test_negation_tight():
    f = parse_formula("~empty(X1) & sing(X2)")
    assert f.op == "&"
    assert isinstance(f.left, Neg)


@pytest.mark.parametrize("text", [
    "x < y",                          # unbound first-order
    "ex1 x: x < y",                   # y unbound
    "empty(Y)",                       # free set var not X<i>
    "ex1 x: ex1 x: x = x",            # rebinding
    "ex2 Y: ex2 Y: empty(Y)",         # rebinding, set
    "ex2 X1: empty(X1)",              # reserved name bound
    "ex1 X: X in X",                  # case mismatch
    "ex2 y: empty(y)",                # case mismatch
    "empty(X1",                       # missing paren
    "empty(X1) &",                    # dangling operator
    "sing(x) ex1",                    # sing of first-order
    "ex1 in: in < in",                # keyword as variable
    "X1 < X2",                        # comparison of set vars
    "",                               # empty input
    "empty(X1) @ empty(X2)",          # stray character
])
def test_parse_errors(text):
    with pytest.raises(FormulaError):
        parse_formula(text)


def test_error_positions_reported():
    try:
        parse_formula("empty(X1) & @")
    except FormulaError as e:
        assert e.position == 12
    else:
        pytest.fail("expected a FormulaError")


def test_quantifier_depth():
    assert quantifier_depth(parse_formula("empty(X1)")) == 0
    assert quantifier_depth(parse_formula("ex1 x: x in X1")) == 1
    assert quantifier_depth(parse_formula("ex1 x: ex1 y: x < y")) == 2
    f = parse_formula("(ex1 x: x in X1) & (ex1 y: ex2 Z: y in Z)")
    assert quantifier_depth(f) == 2


def all_chains(max_len, width=2):
    for k in range(max_len + 1):
        for code in range((1 << width) ** k):
            letters = []
            c = code
            for _ in range(k):
                letters.append(tuple(c >> i & 1 for i in range(width)))
                c >>= width
            yield FiniteChain.from_letters(letters, width)


@pytest.mark.parametrize("text", GOOD)
def test_kernel_preserves_depth_and_meaning(text):
    f = parse_formula(text)
    kf = to_kernel(f, l=2)
    assert kf.n == quantifier_depth(f)
    assert kf.l == 2
    for chain in all_chains(3):
        assert eval_kernel(kf, chain) == eval_source(f, chain), (text, chain)


def test_kernel_l_defaults_to_highest_slot():
    assert to_kernel(parse_formula("empty(X2)")).l == 2
    assert to_kernel(parse_formula("ex1 x: x = x")).l == 0
    with pytest.raises(FormulaError):
        to_kernel(parse_formula("empty(X2)"), l=1)


def prefix(chain, t):
    return FiniteChain(t, tuple(frozenset(p for p in s if p < t)
                                for s in chain.sets))


def suffix(chain, t):
    k = chain.length
    return FiniteChain(k - t, tuple(frozenset(p - t for p in s if p >= t)
                                    for s in chain.sets))


REL_CASES = [
    "empty(X1)",
    "sing(X1)",
    "X1 sub X2",
    "ex1 x: x in X1 & ~(x in X2)",
    "all1 x: x in X1 -> x in X2",
    "ex2 Y: ~empty(Y) & Y sub X1",
    "all2 Y: Y sub X1 -> (empty(Y) | ex1 x: x in Y)",
    "ex1 x: all1 y: y < x | y = x",
]


@pytest.mark.parametrize("text", REL_CASES)
@pytest.mark.parametrize("mode", ["<", ">="])
def test_relativize_matches_half_chain(text, mode):
    f = parse_formula(text)
    rf = relativize(f, mode, "t")
    assert quantifier_depth(rf) <= quantifier_depth(f) + 2
    for chain in all_chains(3):
        for t in range(chain.length):
            half = prefix(chain, t) if mode == "<" else suffix(chain, t)
            got = eval_source(rf, chain, env={"t": t})
            want = eval_source(f, half, env={
                "X1": half.sets[0], "X2": half.sets[1]})
            assert got == want, (text, mode, chain, t)


def test_relativize_depth_overhead_frozen():
    f = parse_formula("X1 sub X2")
    assert quantifier_depth(relativize(f, "<", "t")) == 1
    g = parse_formula("sing(X1)")
    assert quantifier_depth(relativize(g, "<", "t")) == 2
    h = parse_formula("ex2 Y: Y sub X1")
    assert quantifier_depth(relativize(h, "<", "t")) == 2


def test_relativize_rejects_pivot_collision():
    f = parse_formula("ex1 t: t in X1")
    with pytest.raises(FormulaError):
        relativize(f, "<", "t")
    with pytest.raises(FormulaError):
        relativize(f, "bogus", "u")


def test_relativized_formula_round_trips_when_closed():
    f = parse_formula("ex1 x: x in X1 & sing(X2)")
    rf = relativize(f, "<", "t")
    closed = Quant("ex1", "t", rf)
    assert parse_formula(render(closed)) == closed


def test_length_templates():
    for k in range(4):
        for length in range(5):
            bare = FiniteChain(length, ())
            if k >= 1:
                assert eval_source(at_least_length(k), bare) == (length >= k)
            assert eval_source(exact_length(k), bare) == (length == k)


def test_position_template():
    f = position_is("t", 2)
    for chain in all_chains(4, width=1):
        for t in range(chain.length):
            assert eval_source(f, chain, env={"t": t}) == (t == 2)
    g = Quant("ex1", "t", Bin("&", position_is("t", 0), Atom("mem", ("t", "X1"))))
    ch = FiniteChain.from_letters([(1,), (0,)], 1)
    assert eval_source(g, ch)
    ch2 = FiniteChain.from_letters([(0,), (1,)], 1)
    assert not eval_source(g, ch2)
