"""Brute-force semantics on finite chains.

Everything here is deliberately naive: direct subset enumeration for
quantifiers, full minimax for the finite bit game, and a from-the-definition
type enumerator.  These serve as ground truth for the algebraic machinery,
so they must stay independent of it (no imports from the type algebra).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .config import DEFAULT, RunConfig
from .errors import ResourceLimit, StrategyError
from .formulas import (Atom, Bin, Formula, KAnd, KAtom, KernelFormula, KEx,
                       KNot, KOr, Neg, Quant, is_set_var)


@dataclass(frozen=True)
class FiniteChain:
    """A finite word: `length` positions, one position set per slot 1..l."""

    length: int
    sets: tuple

    def __post_init__(self):
        for s in self.sets:
            if any(p < 0 or p >= self.length for p in s):
                raise ValueError("position out of range")

    @property
    def width(self) -> int:
        return len(self.sets)

    def letters(self) -> tuple:
        return tuple(
            tuple(1 if p in s else 0 for s in self.sets)
            for p in range(self.length))

    @classmethod
    def from_letters(cls, letters, width: Optional[int] = None) -> "FiniteChain":
        letters = tuple(tuple(x) for x in letters)
        if width is None:
            if not letters:
                raise ValueError("width needed for the empty chain")
            width = len(letters[0])
        if any(len(x) != width for x in letters):
            raise ValueError("ragged letters")
        sets = tuple(
            frozenset(p for p, x in enumerate(letters) if x[i])
            for i in range(width))
        return cls(len(letters), sets)


def _subsets(k: int):
    for mask in range(1 << k):
        yield frozenset(p for p in range(k) if mask >> p & 1)


# ---------------------------------------------------------------------------
# evaluation


def eval_source(f: Formula, chain: FiniteChain, env: Optional[dict] = None,
                cfg: RunConfig = DEFAULT) -> bool:
    """Evaluate a surface formula on a finite chain.

    `env` maps free set variables to frozensets of positions; X1, X2, ...
    default to the chain's own slots.  First-order entries (ints) may be
    supplied for open formulas.
    """
    k = chain.length
    full_env = {"X%d" % (i + 1): s for i, s in enumerate(chain.sets)}
    if env:
        full_env.update(env)
    work = [0]

    def spend(amount=1):
        work[0] += amount
        if work[0] > cfg.max_eval_work:
            raise ResourceLimit("finite evaluation budget exhausted",
                                "%d steps" % work[0])

    def ev(node, env):
        spend()
        if isinstance(node, Atom):
            a = node.args
            if node.kind == "lt":
                return env[a[0]] < env[a[1]]
            if node.kind == "eq":
                return env[a[0]] == env[a[1]]
            if node.kind == "mem":
                return env[a[0]] in env[a[1]]
            if node.kind == "sub":
                return env[a[0]] <= env[a[1]]
            if node.kind == "empty":
                return not env[a[0]]
            return len(env[a[0]]) == 1
        if isinstance(node, Neg):
            return not ev(node.sub, env)
        if isinstance(node, Bin):
            a = ev(node.left, env)
            if node.op == "&":
                return a and ev(node.right, env)
            if node.op == "|":
                return a or ev(node.right, env)
            if node.op == "->":
                return (not a) or ev(node.right, env)
            return a == ev(node.right, env)
        if node.q in ("ex1", "all1"):
            want = node.q == "ex1"
            for p in range(k):
                if ev(node.body, dict(env, **{node.var: p})) == want:
                    return want
            return not want
        want = node.q == "ex2"
        for s in _subsets(k):
            spend()
            if ev(node.body, dict(env, **{node.var: s})) == want:
                return want
        return not want

    return ev(f, full_env)


def eval_kernel(kf: KernelFormula, chain: FiniteChain,
                cfg: RunConfig = DEFAULT) -> bool:
    """Evaluate a kernel formula on a finite chain (slots 1..l from chain)."""
    if chain.width < kf.l:
        raise ValueError("chain has %d slots, formula needs %d" % (chain.width, kf.l))
    k = chain.length
    est = len(kf._postorder) * (1 << k) ** max(kf.n, 1)
    if est > cfg.max_eval_work:
        raise ResourceLimit("kernel evaluation too large",
                            "estimated %d steps" % est)
    memo = {}

    def ev(node, env):
        key = (kf.node_id(node), env)
        if key in memo:
            return memo[key]
        if isinstance(node, KAtom):
            if node.kind == "sub":
                r = env[node.i - 1] <= env[node.j - 1]
            elif node.kind == "before":
                a, b = env[node.i - 1], env[node.j - 1]
                r = bool(a) and bool(b) and min(a) < max(b)
            elif node.kind == "empty":
                r = not env[node.i - 1]
            else:
                r = len(env[node.i - 1]) == 1
        elif isinstance(node, KNot):
            r = not ev(node.sub, env)
        elif isinstance(node, KAnd):
            r = ev(node.left, env) and ev(node.right, env)
        elif isinstance(node, KOr):
            r = ev(node.left, env) or ev(node.right, env)
        else:
            r = any(ev(node.body, env + (s,)) for s in _subsets(k))
        memo[key] = r
        return r

    return ev(kf.root, tuple(chain.sets[:kf.l]))


# ---------------------------------------------------------------------------
# structural types, straight from the definition


def enumerate_type(letters, depth: int, width: Optional[int] = None,
                   cfg: RunConfig = DEFAULT):
    """Structural type of a finite word.

    Depth 0 is read off the word: per-slot size class (0, 1, or 2 meaning
    two-or-more) and, per ordered slot pair, containment and whether some
    element of the first precedes some element of the second.  Depth d+1 is
    the set of depth-d types of all one-slot extensions of the word.

    Returns a hashable tree: ("d0", sizes, submask, beforemask) at the
    leaves, ("set", frozenset(...)) above.
    """
    letters = tuple(tuple(x) for x in letters)
    if width is None:
        width = len(letters[0]) if letters else 0
    if depth > 2:
        raise ResourceLimit("structural type enumeration capped at depth 2",
                            "asked for depth %d" % depth)
    if len(letters) > cfg.max_chain:
        raise ResourceLimit("chain too long for type enumeration",
                            "%d positions" % len(letters))
    k = len(letters)
    if depth == 0:
        sets = [frozenset(p for p in range(k) if letters[p][i])
                for i in range(width)]
        sizes = tuple(min(2, len(s)) for s in sets)
        sub = 0
        before = 0
        for i in range(width):
            for j in range(width):
                bit = 1 << (i * width + j)
                if sets[i] <= sets[j]:
                    sub |= bit
                if sets[i] and sets[j] and min(sets[i]) < max(sets[j]):
                    before |= bit
        return ("d0", sizes, sub, before)
    members = set()
    for mask in range(1 << k):
        ext = tuple(letters[p] + (mask >> p & 1,) for p in range(k))
        members.add(enumerate_type(ext, depth - 1, width + 1, cfg))
    return ("set", frozenset(members))


# ---------------------------------------------------------------------------
# the finite bit game


@dataclass(frozen=True)
class FiniteStrategyTable:
    """A finite-game strategy as an explicit lookup table.

    Player I's move at round r is keyed by II's bits from rounds < r;
    player II's move is keyed by I's bits from rounds <= r.
    """

    player: str              # "I" or "II"
    rounds: int
    moves: dict

    def move(self, opponent_bits: tuple) -> int:
        try:
            return self.moves[tuple(opponent_bits)]
        except KeyError:
            raise StrategyError("no move recorded for opponent history %r"
                                % (opponent_bits,))


def _play_value(kf: KernelFormula, k: int, cfg: RunConfig):
    """phi's value on every complete play, as a dict keyed by bit pairs."""
    vals = {}

    def rec(pairs):
        if len(pairs) == k:
            chain = FiniteChain.from_letters(pairs, 2)
            vals[pairs] = eval_kernel(kf, chain, cfg)
            return
        for a in (0, 1):
            for b in (0, 1):
                rec(pairs + ((a, b),))

    rec(())
    return vals


def _winset_play_value(target, k: int, algebra):
    """Fold every complete play through the block algebra; True iff in target."""
    vals = {}

    def rec(pairs, acc):
        if len(pairs) == k:
            vals[pairs] = acc in target
            return
        for a in (0, 1):
            for b in (0, 1):
                blk = algebra.letters[(a, b)]
                rec(pairs + ((a, b),),
                    blk if acc is None else algebra.plus(acc, blk))

    rec((), None)
    return vals


def solve_finite_game(cond, k: int, cfg: RunConfig = DEFAULT, algebra=None):
    """Full minimax for the k-round bit game.

    Each round player I picks a bit, then player II picks a bit seeing it.
    `cond` is either a kernel formula over X1, X2 (player I wins a play iff
    it holds on the play) or a set of block ids together with the `algebra`
    that folds letter blocks (player I wins iff the folded play block lies
    in the set).  Returns (winner, FiniteStrategyTable for the winner).
    Among equally winning moves the table prefers one after which every
    continuation already wins, then the smaller bit.
    """
    if k > cfg.max_game_rounds:
        raise ResourceLimit("finite game capped at %d rounds" % cfg.max_game_rounds,
                            "asked for %d" % k)
    if isinstance(cond, KernelFormula):
        if cond.l != 2:
            raise ValueError("bit game needs a formula over X1, X2")
        leaf = _play_value(cond, k, cfg)
    else:
        if algebra is None:
            raise ValueError("a win-set condition needs its block algebra")
        if k < 1:
            raise ValueError("win-set games need at least one round")
        leaf = _winset_play_value(frozenset(cond), k, algebra)

    @lru_cache(maxsize=None)
    def val(pairs) -> bool:
        if len(pairs) == k:
            return leaf[pairs]
        return any(all(val(pairs + ((a, b),)) for b in (0, 1)) for a in (0, 1))

    @lru_cache(maxsize=None)
    def settled(pairs):
        # (every completion wins for I, every completion wins for II)
        if len(pairs) == k:
            v = leaf[pairs]
            return v, not v
        subs = [settled(pairs + ((a, b),)) for a in (0, 1) for b in (0, 1)]
        return all(s[0] for s in subs), all(s[1] for s in subs)

    winner = "I" if val(()) else "II"
    side = 0 if winner == "I" else 1

    # univ[(r, a, b)]: playing (a, b) at round r decides every continuation
    # for the winner no matter what was played before
    univ = {}

    def scan(pairs):
        r = len(pairs)
        if r == k:
            return
        for a in (0, 1):
            for b in (0, 1):
                child = pairs + ((a, b),)
                key = (r, a, b)
                univ[key] = univ.get(key, True) and settled(child)[side]
                scan(child)

    scan(())
    moves = {}

    def pick(good, done):
        for o in (0, 1):
            if good(o) and done(o):
                return o
        return next(o for o in (0, 1) if good(o))

    def walk(pairs):
        if len(pairs) == k:
            return
        r = len(pairs)
        if winner == "I":
            key = tuple(b for _, b in pairs)
            choice = pick(lambda a: all(val(pairs + ((a, b),)) for b in (0, 1)),
                          lambda a: univ[r, a, 0] and univ[r, a, 1])
            moves[key] = choice
            for b in (0, 1):
                walk(pairs + ((choice, b),))
        else:
            for a in (0, 1):
                key = tuple(x for x, _ in pairs) + (a,)
                choice = pick(lambda b: not val(pairs + ((a, b),)),
                              lambda b: univ[r, a, b])
                moves[key] = choice
                walk(pairs + ((a, choice),))

    walk(())
    val.cache_clear()
    settled.cache_clear()
    return winner, FiniteStrategyTable(winner, k, moves)


def run_finite_strategy(table: FiniteStrategyTable, opponent: tuple):
    """Play the table against a fixed opponent bit sequence; returns pairs."""
    k = table.rounds
    if len(opponent) != k:
        raise ValueError("opponent sequence must have %d bits" % k)
    pairs = []
    for r in range(k):
        if table.player == "I":
            a = table.move(tuple(opponent[:r]))
            pairs.append((a, opponent[r]))
        else:
            b = table.move(tuple(opponent[:r + 1]))
            pairs.append((opponent[r], b))
    return tuple(pairs)


def verify_finite_strategy(cond, table: FiniteStrategyTable,
                           cfg: RunConfig = DEFAULT, algebra=None):
    """Check a table against every opponent behavior.

    `cond` is a kernel formula or a win set plus its block algebra, as in
    solve_finite_game.  Returns the list of opponent bit sequences the
    table loses against (empty means the strategy wins outright).
    """
    k = table.rounds
    want = table.player == "I"
    if isinstance(cond, KernelFormula):
        def holds(pairs):
            return eval_kernel(cond, FiniteChain.from_letters(pairs, 2), cfg)
    else:
        if algebra is None:
            raise ValueError("a win-set condition needs its block algebra")
        target = frozenset(cond)

        def holds(pairs):
            return algebra.fold(algebra.letters[p] for p in pairs) in target

    losses = []
    for mask in range(1 << k):
        opp = tuple(mask >> r & 1 for r in range(k))
        pairs = run_finite_strategy(table, opp)
        if holds(pairs) != want:
            losses.append(opp)
    return losses
