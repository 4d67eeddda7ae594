import pytest

from ordgames.config import RunConfig
from ordgames.errors import ResourceLimit, StrategyError
from ordgames.finite import (FiniteChain, FiniteStrategyTable, enumerate_type,
                             eval_kernel, eval_source, run_finite_strategy,
                             solve_finite_game, verify_finite_strategy)
from ordgames.formulas import KAtom, KernelFormula, parse_formula, to_kernel


def chain(*letters):
    return FiniteChain.from_letters(letters, 2)


def test_chain_letters_round_trip():
    c = chain((1, 0), (0, 1), (1, 1))
    assert c.letters() == ((1, 0), (0, 1), (1, 1))
    assert c.sets == (frozenset({0, 2}), frozenset({1, 2}))
    with pytest.raises(ValueError):
        FiniteChain(2, (frozenset({5}),))


def test_eval_source_hand_cases():
    c = chain((1, 0), (0, 1))
    assert eval_source(parse_formula("ex1 x: x in X1"), c)
    assert eval_source(parse_formula("ex1 x: ex1 y: x < y & x in X1 & y in X2"), c)
    assert not eval_source(parse_formula("X1 sub X2"), c)
    assert eval_source(parse_formula("sing(X1) & sing(X2)"), c)
    assert eval_source(parse_formula("all1 x: x in X1 | x in X2"), c)
    assert not eval_source(parse_formula("empty(X1)"), c)
    e = chain()
    assert eval_source(parse_formula("empty(X1) & empty(X2)"), e)
    assert eval_source(parse_formula("all1 x: x < x"), e)
    assert not eval_source(parse_formula("ex1 x: x = x"), e)


def test_kernel_atom_semantics():
    c = chain((1, 0), (0, 1))
    before12 = KernelFormula(KAtom("before", 1, 2), 2)
    before21 = KernelFormula(KAtom("before", 2, 1), 2)
    before11 = KernelFormula(KAtom("before", 1, 1), 2)
    assert eval_kernel(before12, c)
    assert not eval_kernel(before21, c)
    assert not eval_kernel(before11, c)
    wide = chain((1, 0), (0, 1), (1, 0))
    assert eval_kernel(KernelFormula(KAtom("before", 1, 1), 2), wide)
    assert eval_kernel(KernelFormula(KAtom("before", 2, 1), 2), wide)
    assert eval_kernel(KernelFormula(KAtom("sing", 2), 2), wide)
    assert not eval_kernel(KernelFormula(KAtom("sub", 1, 2), 2), wide)
    empty1 = FiniteChain(3, (frozenset(), frozenset({0})))
    assert eval_kernel(KernelFormula(KAtom("empty", 1), 2), empty1)
    assert eval_kernel(KernelFormula(KAtom("sub", 1, 2), 2), empty1)


def test_enumerate_type_depth0():
    t = enumerate_type(((1, 0), (0, 1)), 0)
    kind, sizes, sub, before = t
    assert kind == "d0"
    assert sizes == (1, 1)
    # ordered pairs (i, j) indexed i*2+j over slots {0, 1}
    assert sub == (1 << 0) | (1 << 3)            # only the diagonal
    assert before == (1 << 1)                    # slot 0 precedes slot 1


def test_enumerate_type_depth0_invariants():
    for code in range(4 ** 3):
        letters = []
        c = code
        for _ in range(3):
            letters.append((c & 1, c >> 1 & 1))
            c >>= 2
        kind, sizes, sub, before = enumerate_type(letters, 0)
        for i in range(2):
            assert sub >> (i * 2 + i) & 1, "diagonal containment"
            assert (before >> (i * 2 + i) & 1) == (sizes[i] >= 2)
            for j in range(2):
                if sizes[i] == 0:
                    assert sub >> (i * 2 + j) & 1
                if before >> (i * 2 + j) & 1:
                    assert sizes[i] > 0 and sizes[j] > 0


def test_enumerate_type_depth1_hand_case():
    # single position, slot occupied: the two one-slot extensions
    t = enumerate_type(((1,),), 1)
    assert t[0] == "set"
    assert t[1] == frozenset({
        enumerate_type(((1, 0),), 0),
        enumerate_type(((1, 1),), 0),
    })
    assert len(t[1]) == 2


def test_enumerate_type_saturation_and_separation():
    ones = lambda k: tuple(((1,),) * k)
    # size classes cap at 2, so depth 0 cannot tell length 2 from 3
    assert enumerate_type(ones(2), 0) == enumerate_type(ones(3), 0)
    # depth 1 can: length 3 has a position with neighbors on both sides
    assert enumerate_type(ones(2), 1) != enumerate_type(ones(3), 1)
    assert enumerate_type(ones(1), 1) != enumerate_type(ones(2), 1)


def test_enumerate_type_caps():
    with pytest.raises(ResourceLimit):
        enumerate_type(((1,),), 3)
    with pytest.raises(ResourceLimit):
        enumerate_type(tuple(((1,),) * 9), 1, cfg=RunConfig(max_chain=8))


def game(text):
    return to_kernel(parse_formula(text), l=2)


def test_game_trivial_conditions():
    for k in range(4):
        winner, table = solve_finite_game(game("empty(X1) | ~empty(X1)"), k)
        assert winner == "I"
        assert verify_finite_strategy(game("empty(X1) | ~empty(X1)"), table) == []
        winner, _ = solve_finite_game(game("empty(X1) & ~empty(X1)"), k)
        assert winner == "II"


def test_game_copycat():
    # second player falsifies "the plays coincide" by answering 1 - a
    eq = game("X1 sub X2 & X2 sub X1")
    winner, table = solve_finite_game(eq, 0)
    assert winner == "I"
    for k in (1, 2, 3):
        winner, table = solve_finite_game(eq, k)
        assert winner == "II"
        assert verify_finite_strategy(eq, table) == []
        pairs = run_finite_strategy(table, (0,) * k)
        assert any(a != b for a, b in pairs)


def test_game_first_player_marks_a_position():
    f = game("ex1 x: x in X1")
    for k in (1, 2, 3):
        winner, table = solve_finite_game(f, k)
        assert winner == "I"
        assert table.move(()) == 1 or any(
            table.move(bits) == 1
            for r in range(k) for bits in [tuple([0] * r)])
        assert verify_finite_strategy(f, table) == []
    winner, _ = solve_finite_game(f, 0)
    assert winner == "II"


def test_game_second_player_stays_silent():
    f = game("ex1 x: x in X2")
    for k in (1, 2):
        winner, table = solve_finite_game(f, k)
        assert winner == "II"
        assert verify_finite_strategy(f, table) == []
        pairs = run_finite_strategy(table, (1,) * k)
        assert all(b == 0 for _, b in pairs)


def test_game_mark_required():
    # any positive number of rounds lets player I make X1 nonempty
    f = game("~empty(X1)")
    for k in (1, 2, 3):
        winner, table = solve_finite_game(f, k)
        assert winner == "I"
        losses = verify_finite_strategy(f, table)
        assert losses == []


def test_strategy_table_reports_missing_history():
    t = FiniteStrategyTable("I", 2, {(): 1})
    with pytest.raises(StrategyError):
        run_finite_strategy(t, (0, 0))


def test_corrupted_strategy_detected():
    f = game("ex1 x: x in X1")
    winner, table = solve_finite_game(f, 2)
    assert winner == "I"
    bad = FiniteStrategyTable("I", 2, {k: 0 for k in table.moves})
    assert verify_finite_strategy(f, bad) != []


def test_game_round_cap():
    with pytest.raises(ResourceLimit):
        solve_finite_game(game("empty(X1)"), 6)


def test_kernel_matches_source_on_random_formulas():
    texts = [
        "all1 x: (x in X1 <-> ~(x in X2))",
        "ex2 Y: Y sub X1 & ~empty(Y) & all1 x: x in Y -> x in X2",
        "all2 Y: (all1 x: x in Y -> x in X1) -> (Y sub X2 | empty(Y))",
    ]
    for text in texts:
        f = parse_formula(text)
        kf = to_kernel(f, l=2)
        for code in range(4 ** 2):
            letters = []
            c = code
            for _ in range(2):
                letters.append((c & 1, c >> 1 & 1))
                c >>= 2
            ch = FiniteChain.from_letters(letters, 2)
            assert eval_kernel(kf, ch) == eval_source(f, ch), (text, letters)
