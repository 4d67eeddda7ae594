"""Games of length omega over a finite value semigroup.

A play emits one alphabet symbol per round; each symbol carries an element
of a finite semigroup, and the infinite emission sequence has a well
defined value: by Ramsey's theorem it factors as a finite prefix followed
by blocks that all carry one idempotent e, and the value is prefix +
(e + e + ...).  The protagonist wants that value inside a winning subset.

The solver chain: a nondeterministic Buechi automaton that guesses the
factorization, a deterministic parity automaton built by a history-tree
construction, a product arena, and Zielonka's recursive solver, which is
positional for both sides.  Winning strategies come out as Mealy
machines.  Everything here is independent of the type algebra; the
semigroups under test can be toys.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .config import DEFAULT, RunConfig
from .errors import ResourceLimit, StrategyError


# ---------------------------------------------------------------------------
# finite pointed semigroups


@dataclass(frozen=True)
class Semigroup:
    """Elements 0..size-1 with a total addition, a total constant-omega
    sum, and a winning subset.  `omega[t]` is the value of t+t+t+...,
    which equals the plain omega power on additively idempotent t."""

    size: int
    add: tuple            # size x size, row-major tuple of ints
    omega: tuple          # size ints
    win: frozenset
    names: tuple = ()

    def plus(self, a: int, b: int) -> int:
        return self.add[a * self.size + b]

    def is_idempotent(self, a: int) -> bool:
        return self.plus(a, a) == a

    def idempotent_power(self, a: int) -> int:
        seen = set()
        cur = a
        while True:
            if self.is_idempotent(cur):
                return cur
            if cur in seen:
                raise ValueError("cyclic powers without an idempotent")
            seen.add(cur)
            cur = self.plus(cur, a)

    def name(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    def idempotents(self):
        return [a for a in range(self.size) if self.is_idempotent(a)]

    def validate(self, full: bool = True, rng=None, samples: int = 10000):
        """Check the algebra laws; `full` tests associativity exhaustively,
        otherwise `samples` random triples."""
        n = self.size
        if len(self.add) != n * n or len(self.omega) != n:
            raise ValueError("table sizes off")
        if any(not 0 <= x < n for x in self.add):
            raise ValueError("addition leaves the carrier")
        if any(not 0 <= x < n for x in self.omega):
            raise ValueError("omega leaves the carrier")
        if not all(0 <= w < n for w in self.win):
            raise ValueError("winning set leaves the carrier")
        if full:
            triples = ((a, b, c) for a in range(n) for b in range(n)
                       for c in range(n))
        else:
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(samples))
        for a, b, c in triples:
            if self.plus(self.plus(a, b), c) != self.plus(a, self.plus(b, c)):
                raise ValueError("not associative at (%d,%d,%d)" % (a, b, c))
        for a in range(n):
            e = self.idempotent_power(a)
            if self.omega[a] != self.omega[e]:
                raise ValueError("omega must factor through idempotent powers")
            if self.plus(e, self.omega[e]) != self.omega[e]:
                raise ValueError("e + omega(e) must equal omega(e)")


def semigroup_from_tables(add_rows, omega, win, names=()) -> Semigroup:
    n = len(add_rows)
    flat = tuple(x for row in add_rows for x in row)
    return Semigroup(n, flat, tuple(omega), frozenset(win), tuple(names))


def fold_value(sg: Semigroup, xs) -> Optional[int]:
    out = None
    for x in xs:
        out = x if out is None else sg.plus(out, x)
    return out


def lasso_value(sg: Semigroup, u, v) -> int:
    """Value of the eventually periodic sequence u v v v ..."""
    if not v:
        raise ValueError("the repeating part must be nonempty")
    tail = sg.omega[fold_value(sg, v)]
    head = fold_value(sg, u)
    return tail if head is None else sg.plus(head, tail)


# ---------------------------------------------------------------------------
# nondeterministic Buechi automata


@dataclass
class NBA:
    """States 0..n-1; `trans[q]` maps a symbol to a tuple of successors."""

    n: int
    initial: tuple
    accepting: frozenset
    trans: tuple          # per state: dict symbol -> tuple of states

    def successors(self, q: int, sym):
        return self.trans[q].get(sym, ())


def build_value_nba(sg: Semigroup, alphabet: dict) -> NBA:
    """NBA over `alphabet` (symbol -> element) accepting exactly the
    sequences whose value lies in the winning set.

    It tracks the prefix sum, nondeterministically jumps to block tracking
    for a guessed idempotent e whose factorization would win, and accepts
    on infinitely many completed blocks.  Completing a block is itself a
    guess: a running block whose sum hits e may close there or keep
    absorbing letters, because a valid cut can require passing through e
    in mid-block (left-absorbing additions are the classic case).  States
    number at most 1 + |S| + |S|^2 + |S| (prefix states, in-block states,
    one block boundary per idempotent).
    """
    states = {}

    def st(key):
        if key not in states:
            states[key] = len(states)
        return states[key]

    start = st(("start",))
    idems = sg.idempotents()

    def wins(prefix: Optional[int], e: int) -> bool:
        tail = sg.omega[e]
        val = tail if prefix is None else sg.plus(prefix, tail)
        return val in sg.win

    trans = {}

    def arrow(q, sym, r):
        trans.setdefault(q, {}).setdefault(sym, set()).add(r)

    def block_arrows(q, sym, e: int, s: int):
        arrow(q, sym, st(("blk", e, s)))
        if s == e:
            arrow(q, sym, st(("bd", e)))

    for sym, x in alphabet.items():
        # stay in prefix mode
        arrow(start, sym, st(("pfx", x)))
        for p in range(sg.size):
            arrow(st(("pfx", p)), sym, st(("pfx", sg.plus(p, x))))
        # or treat this symbol as the first letter of the block phase
        for e in idems:
            if wins(None, e):
                block_arrows(start, sym, e, x)
            for p in range(sg.size):
                if wins(p, e):
                    block_arrows(st(("pfx", p)), sym, e, x)
        # inside the block phase the only freedom is where blocks end
        for e in idems:
            for b in range(sg.size):
                block_arrows(st(("blk", e, b)), sym, e, sg.plus(b, x))
            block_arrows(st(("bd", e)), sym, e, x)

    n = len(states)
    acc = frozenset(states[k] for k in states if k[0] == "bd")
    table = tuple(
        {sym: tuple(sorted(target)) for sym, target in trans.get(q, {}).items()}
        for q in range(n))
    return NBA(n, (start,), acc, table)


def nba_accepts_lasso(nba: NBA, u, v) -> bool:
    """Membership of the word u v v v ... (a reachable accepting cycle in
    the product with the lasso's position graph)."""
    if not v:
        raise ValueError("the repeating part must be nonempty")
    word = list(u) + list(v)
    loop_to = len(u)

    def pos_next(i):
        return i + 1 if i + 1 < len(word) else loop_to

    reach = {(q, 0) for q in nba.initial}
    frontier = list(reach)
    edges = {}
    while frontier:
        q, i = frontier.pop()
        for r in nba.successors(q, word[i]):
            node = (r, pos_next(i))
            edges.setdefault((q, i), []).append(node)
            if node not in reach:
                reach.add(node)
                frontier.append(node)
    # accepting iff some accepting product node lies on a reachable cycle
    for node in reach:
        if node[0] not in nba.accepting:
            continue
        seen = set()
        stack = list(edges.get(node, []))
        while stack:
            x = stack.pop()
            if x == node:
                return True
            if x in seen:
                continue
            seen.add(x)
            stack.extend(edges.get(x, []))
    return False


# ---------------------------------------------------------------------------
# deterministic parity automata (transition-based, min-parity)


@dataclass
class DPA:
    """Deterministic, transition-based priorities, min-parity acceptance:
    a run is accepting iff the least priority seen infinitely often is
    even.  `step[q]` maps a symbol to (successor, priority)."""

    n: int
    initial: int
    step: tuple
    max_priority: int

    def run_lasso(self, u, v) -> bool:
        if not v:
            raise ValueError("the repeating part must be nonempty")
        q = self.initial
        for sym in u:
            q, _ = self.step[q][sym]
        seen = {}
        history = []
        while q not in seen:
            seen[q] = len(history)
            best = None
            for sym in v:
                q, pri = self.step[q][sym]
                best = pri if best is None else min(best, pri)
            history.append(best)
        cycle_best = min(history[seen[q]:])
        return cycle_best % 2 == 0


def trim_nba(nba: NBA) -> NBA:
    """Language-preserving shrink: keep only states that are reachable
    from an initial state and can still reach an accepting state lying on
    a cycle.  Runs through dropped states never accept, so membership is
    unchanged while downstream determinization sees far fewer states."""
    succ = [set() for _ in range(nba.n)]
    pred = [set() for _ in range(nba.n)]
    for q in range(nba.n):
        for targets in nba.trans[q].values():
            for r in targets:
                succ[q].add(r)
                pred[r].add(q)

    def closure(seed, edges):
        out = set(seed)
        frontier = list(seed)
        while frontier:
            q = frontier.pop()
            for r in edges[q]:
                if r not in out:
                    out.add(r)
                    frontier.append(r)
        return out

    reach = closure(nba.initial, succ)
    live_acc = {a for a in nba.accepting if a in closure(succ[a], pred)}
    keep = sorted(reach & closure(live_acc, pred))
    if not any(q in keep for q in nba.initial):
        empty = ({sym: () for row in nba.trans for sym in row},)
        return NBA(1, (0,), frozenset(), empty)
    index = {q: i for i, q in enumerate(keep)}
    trans = tuple(
        {sym: tuple(index[r] for r in targets if r in index)
         for sym, targets in nba.trans[q].items()}
        for q in keep)
    initial = tuple(index[q] for q in nba.initial if q in index)
    accepting = frozenset(index[q] for q in nba.accepting if q in index)
    return NBA(len(keep), initial, accepting, trans)


def _history_step(nodes, image, accepting):
    """One deterministic step of a history tree; returns the successor
    tree and the best (lowest) event priority, or None for a quiet step.

    A tree is a tuple of (parent index, label) pairs named by position;
    parents precede children and older siblings precede younger ones.
    The step moves every label through `image`, sprouts a youngest child
    per node that touched the accepting set, keeps each automaton state
    only in the oldest sibling that claims it, drops emptied nodes (an
    odd event, 2d-1 for the smallest dropped name d), and collapses any
    node whose children jointly cover it back to a childless node (an
    even event, 2g for the smallest such name g).  Survivors are then
    renamed to close the gaps, which keeps the naming seniority-faithful
    so the priorities below stay meaningful across steps.
    """
    parents = [par for par, _ in nodes]
    labels = []
    for _, lab in nodes:
        nxt = set()
        for q in lab:
            nxt.update(image[q])
        labels.append(frozenset(nxt))
    # sprout a youngest child wherever the accepting set was touched
    for i in range(len(nodes)):
        fresh = labels[i] & accepting
        if fresh:
            parents.append(i)
            labels.append(fresh)
    # oldest sibling keeps contested states; children stay inside parents
    for j in range(len(labels)):
        pj = parents[j]
        if pj >= 0:
            kept = labels[j] & labels[pj]
            for k in range(j):
                if parents[k] == pj:
                    kept = kept - labels[k]
            labels[j] = kept
    # emptied nodes disappear (their subtrees are empty with them)
    dead = [j for j in range(len(labels)) if parents[j] >= 0 and not labels[j]]
    best = 2 * dead[0] - 1 if dead else None
    alive = [j for j in range(len(labels)) if j not in set(dead)]
    # a node covered by its children flashes and sheds its subtree
    greens = []
    for j in alive:
        union = set()
        seen_kid = False
        for k in alive:
            if parents[k] == j:
                seen_kid = True
                union.update(labels[k])
        if seen_kid and labels[j] == frozenset(union):
            greens.append(j)
    if greens:
        flash = 2 * greens[0]
        best = flash if best is None else min(best, flash)
        doomed = set()
        stack = list(greens)
        while stack:
            v = stack.pop()
            for k in alive:
                if parents[k] == v and k not in doomed:
                    doomed.add(k)
                    stack.append(k)
        alive = [j for j in alive if j not in doomed]
    rename = {j: t for t, j in enumerate(alive)}
    out = tuple((rename[parents[j]] if parents[j] >= 0 else -1, labels[j])
                for j in alive)
    return out, best


def determinize(nba: NBA, alphabet: Iterable,
                cfg: RunConfig = DEFAULT) -> DPA:
    """Parity automaton equivalent to the NBA over the given symbols.

    States are history trees of subsets: the root runs the plain subset
    construction while descendants remember which runs revisited the
    accepting set and in what order the attempts started.  A tree node
    that keeps getting covered by its children marks runs that accept,
    and the renaming discipline in `_history_step` turns that into the
    parity condition: the least priority seen infinitely often is even
    exactly when some eventually-stable node flashes forever.
    """
    nba = trim_nba(nba)
    symbols = sorted(alphabet, key=repr)
    images = {
        sym: tuple(frozenset(nba.successors(q, sym)) for q in range(nba.n))
        for sym in symbols}
    root = ((-1, frozenset(nba.initial)),)
    states = {root: 0}
    order = [root]
    table = []
    hi = 1
    i = 0
    while i < len(order):
        tree = order[i]
        row = {}
        for sym in symbols:
            nxt, best = _history_step(tree, images[sym], nba.accepting)
            if nxt not in states:
                if len(order) >= cfg.max_states:
                    raise ResourceLimit("parity automaton too large",
                                        "%d states" % len(order))
                states[nxt] = len(order)
                order.append(nxt)
            if best is not None:
                hi = max(hi, best)
            row[sym] = (states[nxt], best)
        table.append(row)
        i += 1
    silent = hi + 1 if (hi + 1) % 2 else hi + 2
    fixed = tuple(
        {sym: (q, silent if pri is None else pri)
         for sym, (q, pri) in row.items()}
        for row in table)
    return DPA(len(order), 0, fixed, silent)


def dpa_from_semigroup(sg: Semigroup, alphabet: dict,
                       cfg: RunConfig = DEFAULT) -> DPA:
    """Deterministic parity acceptor for value-in-winning-set sequences."""
    return determinize(build_value_nba(sg, alphabet), alphabet, cfg)


# ---------------------------------------------------------------------------
# parity games


@dataclass
class ParityArena:
    """owner[v] is 0 for the even (protagonist) player, 1 for the odd;
    min-parity on node priorities; every node needs a successor."""

    nodes: tuple
    owner: dict
    succ: dict
    priority: dict

    def validate(self):
        for v in self.nodes:
            if not self.succ.get(v):
                raise ValueError("dead end at %r" % (v,))


def solve_parity(arena: ParityArena):
    """Zielonka's algorithm; returns (win0, win1, strat0, strat1) with a
    positional winning strategy on each winner's region.  The arena must
    be total (every node keeps a successor in every subgame reached here,
    which holds automatically when the full arena is total)."""
    arena.validate()

    def attractor(nodes, succ_map, target, player):
        attr = set(target)
        moves = {}
        preds = {}
        count = {}
        # fixed processing order keeps extracted moves reproducible
        for v in sorted(nodes, key=repr):
            count[v] = len(succ_map[v])
            for w in succ_map[v]:
                preds.setdefault(w, []).append(v)
        queue = deque(sorted(target, key=repr))
        while queue:
            w = queue.popleft()
            for v in preds.get(w, ()):
                if v in attr:
                    continue
                if arena.owner[v] == player:
                    attr.add(v)
                    moves[v] = w
                    queue.append(v)
                else:
                    count[v] -= 1
                    if count[v] == 0:
                        attr.add(v)
                        queue.append(v)
        return attr, moves

    def solve(nodes):
        if not nodes:
            return set(), set(), {}, {}
        succ_map = {v: [w for w in arena.succ[v] if w in nodes] for v in nodes}
        d = min(arena.priority[v] for v in nodes)
        side = d & 1
        target = {v for v in nodes if arena.priority[v] == d}
        a, a_moves = attractor(nodes, succ_map, target, side)
        w0, w1, s0, s1 = solve(nodes - a)
        wins = (w0, w1)
        strats = (s0, s1)
        if not wins[1 - side]:
            # plays either settle in the sub-region, where the recursive
            # strategy wins, or revisit priority d forever, which is the
            # least priority here and has this side's parity
            own = dict(strats[side])
            own.update(a_moves)
            for v in target:
                if arena.owner[v] == side:
                    own[v] = succ_map[v][0]
            full = set(nodes)
            return (full, set(), own, {}) if side == 0 else (set(), full, {}, own)
        b, b_moves = attractor(nodes, succ_map, wins[1 - side], 1 - side)
        w0b, w1b, s0b, s1b = solve(nodes - b)
        winsb = (w0b, w1b)
        stratsb = (s0b, s1b)
        opp = dict(strats[1 - side])
        opp.update(b_moves)
        opp.update(stratsb[1 - side])
        opp_region = winsb[1 - side] | b
        own_region = winsb[side]
        own = stratsb[side]
        if side == 0:
            return own_region, opp_region, own, opp
        return opp_region, own_region, opp, own

    return solve(set(arena.nodes))


# ---------------------------------------------------------------------------
# Mealy machines


@dataclass
class MealyMachine:
    """Finite strategy transducer.

    A machine for the opening player emits `emit[state]` before seeing
    anything, then moves by `delta[state, response]`.  A machine for the
    answering player reads the input first: it emits `emit[state, input]`
    and moves by `delta[state, input]`.
    """

    role: str                  # "opener" or "responder"
    n: int
    initial: int
    emit: dict
    delta: dict

    def opening_move(self, state: int):
        if self.role != "opener":
            raise StrategyError("responder machines move second")
        return self.emit[state]

    def respond(self, state: int, received):
        if self.role != "responder":
            raise StrategyError("opener machines move first")
        try:
            return self.emit[state, received], self.delta[state, received]
        except KeyError:
            raise StrategyError("no transition for %r at state %d"
                                % (received, state))

    def after(self, state: int, received):
        if self.role != "opener":
            raise StrategyError("responder machines use respond()")
        try:
            return self.delta[state, received]
        except KeyError:
            raise StrategyError("no transition for %r at state %d"
                                % (received, state))


# ---------------------------------------------------------------------------
# the two omega-round games


@dataclass
class OmegaGameResult:
    winner: str                 # "I" or "II"
    machine: MealyMachine
    arena_size: int
    dpa_size: int
    arena: ParityArena = field(repr=False, default=None)
    regions: tuple = field(repr=False, default=None)


def solve_omega_bit_game(sg: Semigroup, letters: dict,
                         cfg: RunConfig = DEFAULT) -> OmegaGameResult:
    """Each round player I picks a bit, player II answers with a bit, and
    the pair emits its letter's semigroup element.  Player I wins iff the
    value of the emitted sequence is in the winning set.

    Returns the winner with a winning Mealy machine (player I machines
    open, player II machines respond).
    """
    dpa = dpa_from_semigroup(sg, dict(letters), cfg)
    neutral = dpa.max_priority + 2 - (dpa.max_priority % 2)

    nodes = []
    owner = {}
    succ = {}
    priority = {}

    def node(key, own, pri):
        if key not in owner:
            nodes.append(key)
            owner[key] = own
            priority[key] = pri
            succ[key] = []
        return key

    start = node(("I", dpa.initial, neutral), 0, neutral)
    stack = [start]
    seen = {start}
    while stack:
        key = stack.pop()
        kind = key[0]
        if kind == "I":
            _, q, _ = key
            for a in (0, 1):
                nxt = node(("II", q, a), 1, neutral + 1)
                succ[key].append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        else:
            _, q, a = key
            for b in (0, 1):
                q2, pri = dpa.step[q][(a, b)]
                nxt = node(("I", q2, pri), 0, pri)
                succ[key].append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(nodes) > cfg.max_positions:
            raise ResourceLimit("game arena too large", "%d nodes" % len(nodes))

    arena = ParityArena(tuple(nodes), owner, succ, priority)
    w0, w1, s0, s1 = solve_parity(arena)
    if start in w0:
        winner = "I"
        machine = _bit_machine_opener(arena, s0, start)
    else:
        winner = "II"
        machine = _bit_machine_responder(arena, s1, start)
    return OmegaGameResult(winner, machine, len(nodes), dpa.n, arena, (w0, w1))


def _bit_machine_opener(arena, strat, start):
    states = {start: 0}
    order = [start]
    emit = {}
    delta = {}
    i = 0
    while i < len(order):
        key = order[i]
        mid = strat[key]
        a = mid[2]
        emit[i] = a
        for b, nxt in zip((0, 1), arena.succ[mid]):
            if nxt not in states:
                states[nxt] = len(order)
                order.append(nxt)
            delta[i, b] = states[nxt]
        i += 1
    return MealyMachine("opener", len(order), 0, emit, delta)


def _bit_machine_responder(arena, strat, start):
    states = {start: 0}
    order = [start]
    emit = {}
    delta = {}
    i = 0
    while i < len(order):
        key = order[i]
        for a, mid in zip((0, 1), arena.succ[key]):
            nxt = strat[mid]
            b = arena.succ[mid].index(nxt)
            emit[i, a] = b
            if nxt not in states:
                states[nxt] = len(order)
                order.append(nxt)
            delta[i, a] = states[nxt]
        i += 1
    return MealyMachine("responder", len(order), 0, emit, delta)


def solve_omega_choice_game(sg: Semigroup, proposals, cfg: RunConfig = DEFAULT,
                            ) -> OmegaGameResult:
    """Each round player I proposes one of the given element sets, player
    II picks an element from the proposal, and that element is emitted.
    Player I wins iff the value of the emitted sequence is in the winning
    set.  Proposals must be nonempty."""
    return solve_phased_choice_game(sg, [proposals], 0, cfg)


def solve_mcnaughton_omega(sg: Semigroup, letters: dict, winset=None,
                           cfg: RunConfig = DEFAULT) -> OmegaGameResult:
    """Length-omega bit game under an explicit winning set.

    Same game as solve_omega_bit_game; a non-None winset replaces the
    semigroup's own winning subset before solving.
    """
    if winset is not None:
        sg = replace(sg, win=frozenset(winset))
    return solve_omega_bit_game(sg, letters, cfg)


def solve_game_omega(sg: Semigroup, proposals, winset=None,
                     cfg: RunConfig = DEFAULT) -> OmegaGameResult:
    """Propose-and-pick game under an explicit winning set.

    Same game as solve_omega_choice_game; a non-None winset replaces the
    semigroup's own winning subset before solving.
    """
    if winset is not None:
        sg = replace(sg, win=frozenset(winset))
    return solve_omega_choice_game(sg, proposals, cfg)


def solve_phased_choice_game(sg: Semigroup, phases, loop_to: int,
                             cfg: RunConfig = DEFAULT) -> OmegaGameResult:
    """Choice game whose proposal menu depends on the round: round k uses
    phases[k], and past the end the phases repeat from index loop_to."""
    menus = [[tuple(sorted(m)) for m in props] for props in phases]
    if not menus or any(not props or any(not m for m in props)
                        for props in menus):
        raise ValueError("need nonempty proposals in every phase")
    if not 0 <= loop_to < len(menus):
        raise ValueError("loop index out of range")
    elems = sorted({x for props in menus for m in props for x in m})
    dpa = dpa_from_semigroup(sg, {x: x for x in elems}, cfg)
    neutral = dpa.max_priority + 2 - (dpa.max_priority % 2)

    def phase_next(ph):
        return ph + 1 if ph + 1 < len(menus) else loop_to

    nodes = []
    owner = {}
    succ = {}
    priority = {}

    def node(key, own, pri):
        if key not in owner:
            nodes.append(key)
            owner[key] = own
            priority[key] = pri
            succ[key] = []
        return key

    start = node(("I", dpa.initial, 0, neutral), 0, neutral)
    stack = [start]
    seen = {start}
    while stack:
        key = stack.pop()
        if key[0] == "I":
            _, q, ph, _ = key
            for mi in range(len(menus[ph])):
                nxt = node(("II", q, ph, mi), 1, neutral + 1)
                succ[key].append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        else:
            _, q, ph, mi = key
            for x in menus[ph][mi]:
                q2, pri = dpa.step[q][x]
                nxt = node(("I", q2, phase_next(ph), pri), 0, pri)
                succ[key].append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(nodes) > cfg.max_positions:
            raise ResourceLimit("game arena too large", "%d nodes" % len(nodes))

    arena = ParityArena(tuple(nodes), owner, succ, priority)
    w0, w1, s0, s1 = solve_parity(arena)
    if start in w0:
        winner = "I"
        machine = _choice_machine_opener(arena, s0, start, menus)
    else:
        winner = "II"
        machine = _choice_machine_responder(arena, s1, start, menus)
    return OmegaGameResult(winner, machine, len(nodes), dpa.n, arena, (w0, w1))


def _choice_machine_opener(arena, strat, start, menus):
    states = {start: 0}
    order = [start]
    emit = {}
    delta = {}
    i = 0
    while i < len(order):
        key = order[i]
        mid = strat[key]
        ph, mi = mid[2], mid[3]
        emit[i] = menus[ph][mi]
        for x, nxt in zip(menus[ph][mi], arena.succ[mid]):
            if nxt not in states:
                states[nxt] = len(order)
                order.append(nxt)
            delta[i, x] = states[nxt]
        i += 1
    return MealyMachine("opener", len(order), 0, emit, delta)


def _choice_machine_responder(arena, strat, start, menus):
    states = {start: 0}
    order = [start]
    emit = {}
    delta = {}
    i = 0
    while i < len(order):
        key = order[i]
        ph = key[2]
        for mi, mid in zip(range(len(menus[ph])), arena.succ[key]):
            nxt = strat[mid]
            x = menus[ph][mi][arena.succ[mid].index(nxt)]
            emit[i, menus[ph][mi]] = x
            if nxt not in states:
                states[nxt] = len(order)
                order.append(nxt)
            delta[i, menus[ph][mi]] = states[nxt]
        i += 1
    return MealyMachine("responder", len(order), 0, emit, delta)


# ---------------------------------------------------------------------------
# model checking a machine against the objective


def machine_symbol_graph(letters: dict, machine: MealyMachine) -> dict:
    """Graph of the machine against a free opponent: maps each reachable
    machine state to a list of (opponent_bit, emitted_symbol, successor)."""
    edges = {}
    stack = [machine.initial]
    seen = {machine.initial}
    while stack:
        s = stack.pop()
        rows = []
        for opp in (0, 1):
            if machine.role == "opener":
                a = machine.opening_move(s)
                nxt = machine.after(s, opp)
                sym = (a, opp)
            else:
                b, nxt = machine.respond(s, opp)
                sym = (opp, b)
            if sym not in letters:
                raise StrategyError("machine emits unknown symbol %r" % (sym,))
            rows.append((opp, sym, nxt))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
        edges[s] = rows
    return edges


def _product_violations(dpa, edges: dict, initial, want_even: bool) -> list:
    """Product of an opponent-choice graph with a parity automaton.

    `edges` maps each graph node to (symbol, successor) rows.  Returns
    counterexample lassos (prefix_symbols, cycle_symbols) for every
    reachable product cycle whose least priority has the wrong parity.
    """
    start = (initial, dpa.initial)
    prod = {}
    back = {start: None}
    order = [start]
    i = 0
    while i < len(order):
        s, q = order[i]
        rows = []
        for sym, nxt in edges[s]:
            q2, pri = dpa.step[q][sym]
            node = (nxt, q2)
            rows.append((sym, pri, node))
            if node not in back:
                back[node] = ((s, q), sym)
                order.append(node)
        prod[(s, q)] = rows
        i += 1

    bad = []
    for d in range(dpa.max_priority + 1):
        if (d % 2 == 0) == want_even:
            continue
        witness = _cycle_with_min_priority(prod, d)
        if witness is None:
            continue
        entry, cyc_syms = witness
        prefix = []
        node = entry
        while back[node] is not None:
            node, sym = back[node]
            prefix.append(sym)
        prefix.reverse()
        bad.append((tuple(prefix), tuple(cyc_syms)))
    return bad


def machine_value_check(sg: Semigroup, letters: dict, machine: MealyMachine,
                        player: str, cfg: RunConfig = DEFAULT) -> list:
    """Verify a bit-game Mealy machine against every opponent behavior.

    Runs the machine's opponent-choice graph through the parity automaton
    for the objective and looks for a reachable product cycle whose least
    priority has the wrong parity for the player.  Returns a list of
    counterexample lassos (prefix_symbols, cycle_symbols); empty means the
    machine wins against every opponent, periodic or not.
    """
    dpa = dpa_from_semigroup(sg, dict(letters), cfg)
    graph = machine_symbol_graph(letters, machine)
    edges = {s: [(sym, nxt) for _, sym, nxt in rows]
             for s, rows in graph.items()}
    return _product_violations(dpa, edges, machine.initial, player == "I")


def model_check_strategy(letters: dict, dpa: DPA, machine: MealyMachine,
                         player: str) -> bool:
    """True iff the machine wins the bit game for the player against every
    opponent: the machine-restricted product with the parity automaton has
    no reachable cycle whose least priority favors the other player."""
    graph = machine_symbol_graph(letters, machine)
    edges = {s: [(sym, nxt) for _, sym, nxt in rows]
             for s, rows in graph.items()}
    return not _product_violations(dpa, edges, machine.initial, player == "I")


def choice_machine_check(sg: Semigroup, machine: MealyMachine,
                         cfg: RunConfig = DEFAULT) -> list:
    """Verify a proposal machine against every element-picking opponent.

    The machine must be an opener: `emit[state]` is the proposed element
    set and `delta[state, x]` consumes the opponent's pick.  Checks that
    the value of every pick sequence lands in the winning set; returns
    counterexample lassos over picked elements (empty means the machine
    forces the objective).
    """
    if machine.role != "opener":
        raise StrategyError("proposal machines open each round")
    edges = {}
    stack = [machine.initial]
    seen = {machine.initial}
    elems = set()
    while stack:
        s = stack.pop()
        prop = machine.emit[s]
        rows = []
        for x in prop:
            elems.add(x)
            nxt = machine.delta[s, x]
            rows.append((x, nxt))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
        edges[s] = rows
    dpa = dpa_from_semigroup(sg, {x: x for x in sorted(elems)}, cfg)
    return _product_violations(dpa, edges, machine.initial, True)


def _cycle_with_min_priority(prod, d):
    """A reachable cycle whose least edge priority is exactly d, if any;
    returns (entry_node, cycle_symbols)."""
    allowed = {v: [(sym, pri, w) for sym, pri, w in rows if pri >= d]
               for v, rows in prod.items()}
    sccs = _tarjan(allowed)
    comp = {}
    for ci, members in enumerate(sccs):
        for v in members:
            comp[v] = ci
    for v, rows in allowed.items():
        for sym, pri, w in rows:
            if pri == d and comp[v] == comp[w] and _in_cycle(allowed, v, w):
                # close the loop: walk from w back to v inside the component
                path = _path_within(allowed, w, v, comp[v], comp)
                return v, [sym] + path
    return None


def _in_cycle(allowed, v, w):
    if v == w:
        return True
    return _path_within_exists(allowed, w, v)


def _path_within_exists(allowed, src, dst):
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            return True
        for _, _, y in allowed.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def _path_within(allowed, src, dst, ci, comp):
    """Symbol path src -> dst inside one strongly connected component."""
    if src == dst:
        return []
    backref = {src: None}
    queue = [src]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for sym, _, y in allowed.get(x, ()):
            if comp.get(y) != ci or y in backref:
                continue
            backref[y] = (x, sym)
            if y == dst:
                out = []
                node = y
                while backref[node] is not None:
                    node, s = backref[node]
                    out.append(s)
                out.reverse()
                return out
            queue.append(y)
    raise AssertionError("endpoints not connected inside the component")


def _tarjan(graph):
    """Strongly connected components of {node: [(sym, pri, succ), ...]}."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = [0]

    def strongconnect(root):
        work = [(root, iter(graph.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for _, _, w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(graph.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                members = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    members.add(w)
                    if w == v:
                        break
                out.append(members)

    for v in graph:
        if v not in index:
            strongconnect(v)
    return out
