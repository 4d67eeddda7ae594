"""Structured winning strategies and their certificates.

A strategy for an ordinal-length bit game is assembled segment by segment:
finite stretches become explicit lookup tables, single omega stretches
become Mealy machines, omega powers become proposal machines whose rounds
delegate to strategies one power lower, and concatenations become branch
nodes keyed by the value block the prefix actually realized.  Every node
records the player, its segment length, and the set of blocks it promises
to steer the segment value into; verification re-derives each promise
bottom-up, so a certificate never rests on the construction that produced
the tree.

The module also builds the sentences that state "this formula defines a
winning strategy", emits defining formulas from trees where that is
possible, reduces games beyond the decidable synthesis range to their
omega^omega core, and searches a deterministic candidate stream for
definable strategies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .config import DEFAULT, RunConfig
from .errors import (GameValueError, FormulaError, OrdinalError,
                     ResourceLimit, StrategyError)
from .formulas import (Atom, Bin, Formula, Neg, Quant, all_names, conj, disj,
                       free_set_vars, parse_formula, position_is, relativize,
                       render, to_kernel)
from .finite import (FiniteChain, FiniteStrategyTable, eval_kernel,
                     run_finite_strategy, solve_finite_game)
from .ordinals import (Ordinal, format_ordinal, from_finite, omega_power,
                       parse_ordinal, split_last)
from .omega import (MealyMachine, choice_machine_check, machine_symbol_graph,
                    machine_value_check, solve_omega_bit_game,
                    solve_omega_choice_game)
from .gametypes import gt_contains, gt_one, gt_power, k_set, ordinal_game_type
from .engine import FormulaView, decide, decide_sentence, level_semigroup


# ---------------------------------------------------------------------------
# tree nodes


@dataclass
class Leaf:
    """A finite segment played from an explicit table."""

    player: str
    alpha: Ordinal
    objective: frozenset
    table: FiniteStrategyTable


@dataclass
class OmegaLeaf:
    """A single omega segment played by a bit-level Mealy machine."""

    player: str
    alpha: Ordinal
    objective: frozenset
    machine: MealyMachine


@dataclass
class SeqNode:
    """A concatenation: play the prefix, observe its value block, then
    play the peeled suffix unit with the branch chosen by that block."""

    player: str
    alpha: Ordinal
    objective: frozenset
    left: "StrategyTree"
    unit: tuple                       # ("fin", k) or ("pow", e)
    branches: dict                    # realized prefix block -> subtree


@dataclass
class OmegaNode:
    """An omega-power segment: a proposal machine names a forceable block
    set each meta round and a one-power-lower subtree delivers it."""

    player: str
    alpha: Ordinal
    objective: frozenset
    machine: MealyMachine
    branches: dict                    # proposal tuple -> subtree


StrategyTree = Union[Leaf, OmegaLeaf, SeqNode, OmegaNode]


def _unit_ordinal(unit: tuple) -> Ordinal:
    kind, v = unit
    return from_finite(v) if kind == "fin" else omega_power(v)


def _rejoin(rest: Ordinal, unit: tuple) -> Ordinal:
    """Undo split_last, for structural checks."""
    kind, v = unit
    if kind == "fin":
        return Ordinal(rest.limit_part, rest.terms + ((0, v),))
    if rest.terms and rest.terms[-1][0] == v:
        e, c = rest.terms[-1]
        return Ordinal(rest.limit_part, rest.terms[:-1] + ((e, c + 1),))
    return Ordinal(rest.limit_part, rest.terms + ((v, 1),))


def segment_count(alpha: Ordinal) -> int:
    """Number of tree segments the ordinal decomposes into."""
    return sum(c if e else 1 for e, c in alpha.terms)


# ---------------------------------------------------------------------------
# construction


def synthesize(view: FormulaView, alpha: Ordinal,
               cfg: Optional[RunConfig] = None):
    """Winner plus a structured winning strategy for the alpha-round game.

    Works below omega^omega; the recursion peels the final Cantor normal
    form unit, aims the prefix at the matching steering set, and branches
    on the block the prefix actually realizes.
    """
    cfg = cfg or view.engine.cfg
    if alpha.limit_part:
        raise OrdinalError("synthesis stops below w^w; %s has a leading "
                           "w^w block" % format_ordinal(alpha))
    if alpha.is_zero:
        raise GameValueError("no rounds to play")
    if segment_count(alpha) > cfg.max_segments:
        raise ResourceLimit("strategy tree would need %d segments"
                            % segment_count(alpha),
                            "capped at %d" % cfg.max_segments)
    winner = decide(view, alpha).winner
    size = view.level().size
    win = frozenset(view.level().wins[0])
    objective = win if winner == "I" else frozenset(range(size)) - win
    tree = _build(view, winner, alpha, objective, cfg)
    return winner, tree


def _build(view: FormulaView, role: str, alpha: Ordinal,
           objective: frozenset, cfg: RunConfig) -> StrategyTree:
    if alpha.is_finite:
        return _build_leaf(view, role, alpha.finite_value(), objective, cfg)
    if len(alpha.terms) == 1 and alpha.terms[0] == (alpha.terms[0][0], 1):
        e = alpha.terms[0][0]
        if e == 1:
            return _build_omega_leaf(view, role, objective, cfg)
        return _build_omega_node(view, role, e, objective, cfg)
    rest, unit = split_last(alpha)
    ctx = view.game()
    ugt = _unit_game_type(view, role, unit, cfg)
    steer = k_set(ctx, ugt, objective)
    left = _build(view, role, rest, steer, cfg)
    plus = ctx.sg.plus
    branches = {}
    for tau in sorted(outcome_set(view, left)):
        member = _steering_witness(plus, ugt, tau, objective)
        branches[tau] = _build(view, role, _unit_ordinal(unit),
                               frozenset(member), cfg)
    return SeqNode(role, alpha, objective, left, unit, branches)


def _unit_game_type(view: FormulaView, role: str, unit: tuple,
                    cfg: RunConfig):
    ctx = view.game()
    if unit[0] == "fin":
        return gt_power(ctx, gt_one(ctx, role), unit[1], cfg)
    return view.stab(role).power(unit[1])


def _steering_witness(plus, ugt, tau, objective):
    """The first minimal forceable set that keeps tau composed inside the
    objective; exists whenever tau came from the matching steering set."""
    for m in sorted(ugt, key=sorted):
        if all(plus(tau, t) in objective for t in m):
            return m
    raise StrategyError("block %d cannot be steered into the objective" % tau)


def _build_leaf(view: FormulaView, role: str, k: int,
                objective: frozenset, cfg: RunConfig) -> Leaf:
    if k < 1:
        raise GameValueError("need at least one round")
    level = view.level()
    cond = objective if role == "I" else \
        frozenset(range(level.size)) - objective
    winner, table = solve_finite_game(cond, k, cfg, algebra=level)
    if winner != role:
        raise StrategyError("player %s cannot force the block set over %d "
                            "rounds" % (role, k))
    return Leaf(role, from_finite(k), objective, table)


def _build_omega_leaf(view: FormulaView, role: str, objective: frozenset,
                      cfg: RunConfig) -> OmegaLeaf:
    sg, letters = level_semigroup(view.level())
    goal = objective if role == "I" else frozenset(range(sg.size)) - objective
    res = solve_omega_bit_game(replace(sg, win=goal), letters, cfg)
    if res.winner != role:
        raise StrategyError("player %s cannot force the block set over an "
                            "omega segment" % role)
    return OmegaLeaf(role, omega_power(1), objective, res.machine)


def _build_omega_node(view: FormulaView, role: str, e: int,
                      objective: frozenset, cfg: RunConfig) -> OmegaNode:
    sg, _ = level_semigroup(view.level())
    inner = view.stab(role).power(e - 1)
    proposals = [tuple(sorted(m)) for m in sorted(inner, key=sorted)]
    res = solve_omega_choice_game(replace(sg, win=objective), proposals, cfg)
    if res.winner != "I":
        raise StrategyError("player %s cannot force the block set over a "
                            "w^%d segment" % (role, e))
    machine = res.machine
    branches = {}
    for prop in sorted(_emitted_proposals(machine)):
        branches[prop] = _build(view, role, omega_power(e - 1),
                                frozenset(prop), cfg)
    return OmegaNode(role, omega_power(e), objective, machine, branches)


def _emitted_proposals(machine: MealyMachine) -> set:
    out = set()
    stack = [machine.initial]
    seen = {machine.initial}
    while stack:
        s = stack.pop()
        prop = machine.emit[s]
        out.add(tuple(prop))
        for x in prop:
            nxt = machine.delta[s, x]
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return out


# ---------------------------------------------------------------------------
# exact outcome sets


def outcome_set(view: FormulaView, tree: StrategyTree) -> frozenset:
    """Every segment value an adversarial opponent can still realize when
    the tree's player follows the tree."""
    level = view.level()
    if isinstance(tree, Leaf):
        return _leaf_outcomes(level, tree)
    if isinstance(tree, OmegaLeaf):
        graph = machine_symbol_graph(dict(level.letters), tree.machine)
        edges = {s: [(level.letters[sym], nxt) for _, sym, nxt in rows]
                 for s, rows in graph.items()}
        return _omega_run_values(level, edges, tree.machine.initial)
    if isinstance(tree, OmegaNode):
        edges = {}
        stack = [tree.machine.initial]
        seen = {tree.machine.initial}
        while stack:
            s = stack.pop()
            prop = tuple(tree.machine.emit[s])
            sub = tree.branches.get(prop)
            if sub is None:
                raise StrategyError("no branch for proposed set %r" % (prop,))
            rows = []
            for x in sorted(outcome_set(view, sub)):
                nxt = tree.machine.delta[s, x]
                rows.append((x, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
            edges[s] = rows
        return _omega_run_values(level, edges, tree.machine.initial)
    out = set()
    for tau in sorted(outcome_set(view, tree.left)):
        sub = tree.branches.get(tau)
        if sub is None:
            raise StrategyError("no branch for realized block %d" % tau)
        for v in outcome_set(view, sub):
            out.add(level.plus(tau, v))
    return frozenset(out)


def _leaf_outcomes(level, tree: Leaf) -> frozenset:
    letters = level.letters
    moves = tree.table.moves
    out = set()

    def walk(b, r, ihist, iihist):
        if r == 0:
            out.add(b)
            return
        if tree.player == "I":
            a = moves[iihist]
            for bb in (0, 1):
                x = letters[a, bb]
                walk(x if b is None else level.plus(b, x), r - 1,
                     ihist + (a,), iihist + (bb,))
        else:
            for a in (0, 1):
                bb = moves[ihist + (a,)]
                x = letters[a, bb]
                walk(x if b is None else level.plus(b, x), r - 1,
                     ihist + (a,), iihist + (bb,))

    walk(None, tree.table.rounds, (), ())
    return frozenset(out)


def _omega_run_values(level, edges: dict, initial) -> frozenset:
    """Values of all infinite label paths from the initial node.

    Any infinite path revisits some node, so its value is a reachable
    prefix plus an omega tail built from loop values at that node; loop
    value sets are closed under concatenation, which makes the tail set
    exactly the omega row over the loop closure with optional lead-in.
    """
    plus = level.plus
    pref = {initial: {None}}
    work = [initial]
    while work:
        u = work.pop()
        for x, v in edges[u]:
            vals = {x if p is None else plus(p, x) for p in pref[u]}
            tgt = pref.setdefault(v, set())
            fresh = vals - tgt
            if fresh:
                tgt |= fresh
                work.append(v)
    paths = _path_values(plus, edges)
    out = set()
    for s, prefixes in pref.items():
        loops = paths.get(s, {}).get(s)
        if not loops:
            continue
        closure = _sum_closure(plus, loops)
        tails = set()
        for b in closure:
            if plus(b, b) == b:
                t = level.omega[b]
                tails.add(t)
                tails.update(plus(u, t) for u in closure)
        for p in prefixes:
            for t in tails:
                out.add(t if p is None else plus(p, t))
    return frozenset(out)


def _path_values(plus, edges: dict) -> dict:
    """paths[u][v] = set of values of nonempty label paths u -> v."""
    paths = {u: {} for u in edges}
    for u, rows in edges.items():
        for x, v in rows:
            paths[u].setdefault(v, set()).add(x)
    changed = True
    while changed:
        changed = False
        for u in edges:
            for v, vals in list(paths[u].items()):
                for x, w in edges[v]:
                    tgt = paths[u].setdefault(w, set())
                    for p in list(vals):
                        q = plus(p, x)
                        if q not in tgt:
                            tgt.add(q)
                            changed = True
    return paths


def _sum_closure(plus, gens) -> frozenset:
    seen = set(gens)
    work = list(gens)
    while work:
        a = work.pop()
        for g in gens:
            b = plus(a, g)
            if b not in seen:
                seen.add(b)
                work.append(b)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Obligation:
    path: str
    kind: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    obligations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(o.ok for o in self.obligations)

    def failures(self) -> list:
        return [o for o in self.obligations if not o.ok]

    def add(self, path, kind, ok, detail=""):
        self.obligations.append(Obligation(path, kind, bool(ok), detail))


def verify_strategy_tree(view: FormulaView, tree: StrategyTree,
                         alpha: Optional[Ordinal] = None,
                         cfg: Optional[RunConfig] = None) -> VerifyReport:
    """Re-check every promise in the tree from scratch.

    Structural damage (segments that do not concatenate, a missing branch,
    an objective that disagrees with the steering set) raises
    StrategyError; behavioral damage (a table or machine that fails to
    force its blocks) lands in the report with the exact node path.
    """
    cfg = cfg or view.engine.cfg
    report = VerifyReport()
    if alpha is not None and tree.alpha != alpha:
        raise StrategyError("tree covers %s, not %s"
                            % (format_ordinal(tree.alpha),
                               format_ordinal(alpha)))
    size = view.level().size
    win = frozenset(view.level().wins[0])
    goal = win if tree.player == "I" else frozenset(range(size)) - win
    report.add("root", "root-goal", tree.objective == goal,
               "objective must be the %s blocks"
               % ("winning" if tree.player == "I" else "losing"))
    _verify_node(view, tree, "root", report, cfg)
    return report


def _verify_node(view, tree, path, report, cfg):
    level = view.level()
    if tree.player not in ("I", "II"):
        raise StrategyError("unknown player %r" % (tree.player,))

    if isinstance(tree, Leaf):
        if not tree.alpha.is_finite or tree.alpha.is_zero:
            raise StrategyError("leaf segment must be a positive length")
        if tree.table.rounds != tree.alpha.finite_value():
            raise StrategyError("table covers %d rounds, segment needs %s"
                                % (tree.table.rounds,
                                   format_ordinal(tree.alpha)))
        if tree.table.player != tree.player:
            raise StrategyError("table plays for %s inside a %s node"
                                % (tree.table.player, tree.player))
        escaped = _leaf_outcomes(level, tree) - tree.objective
        report.add(path, "leaf-force", not escaped,
                   "all plays stay in the target blocks" if not escaped
                   else "blocks %s escape" % sorted(escaped))
        return

    if isinstance(tree, OmegaLeaf):
        if tree.alpha != omega_power(1):
            raise StrategyError("machine segment must be exactly w")
        sg, letters = level_semigroup(level)
        goal = (tree.objective if tree.player == "I"
                else frozenset(range(sg.size)) - tree.objective)
        bad = machine_value_check(replace(sg, win=goal), letters,
                                  tree.machine, tree.player, cfg)
        report.add(path, "machine-check", not bad,
                   "no losing lasso" if not bad
                   else "%d losing lassos" % len(bad))
        return

    if isinstance(tree, OmegaNode):
        e = tree.alpha.degree
        if tree.alpha != omega_power(e) or e < 2:
            raise StrategyError("proposal segment must be w^e with e >= 2")
        sg, _ = level_semigroup(level)
        bad = choice_machine_check(replace(sg, win=tree.objective),
                                   tree.machine, cfg)
        report.add(path, "proposal-machine-check", not bad,
                   "forces the target against every pick" if not bad
                   else "%d losing lassos" % len(bad))
        emitted = _emitted_proposals(tree.machine)
        missing = emitted - set(tree.branches)
        if missing:
            raise StrategyError("no branch for proposed set %r"
                                % (sorted(missing)[0],))
        report.add(path, "proposal-coverage", True,
                   "%d proposals, %d branches"
                   % (len(emitted), len(tree.branches)))
        for prop, sub in sorted(tree.branches.items()):
            if sub.alpha != omega_power(e - 1):
                raise StrategyError("branch %r covers %s, expected w^%d"
                                    % (prop, format_ordinal(sub.alpha), e - 1))
            if sub.objective != frozenset(prop):
                raise StrategyError("branch %r promises %s instead of the "
                                    "proposed set" % (prop,
                                                      sorted(sub.objective)))
            if sub.player != tree.player:
                raise StrategyError("branch player flips at %s" % path)
            _verify_node(view, sub, "%s.prop%s" % (path, list(prop)),
                         report, cfg)
        return

    if not isinstance(tree, SeqNode):
        raise StrategyError("unknown node kind %r" % type(tree).__name__)
    if _rejoin(tree.left.alpha, tree.unit) != tree.alpha:
        raise StrategyError("segments %s + %s do not concatenate to %s"
                            % (format_ordinal(tree.left.alpha),
                               tree.unit, format_ordinal(tree.alpha)))
    if tree.left.player != tree.player:
        raise StrategyError("prefix player flips at %s" % path)
    ctx = view.game()
    ugt = _unit_game_type(view, tree.player, tree.unit, cfg)
    steer = k_set(ctx, ugt, tree.objective)
    if tree.left.objective != steer:
        raise StrategyError("prefix objective at %s disagrees with the "
                            "steering set" % path)
    report.add(path, "steering-set", True,
               "prefix aims at %d blocks" % len(steer))
    realized = outcome_set(view, tree.left)
    missing = realized - set(tree.branches)
    if missing:
        raise StrategyError("no branch for realized block %d"
                            % sorted(missing)[0])
    report.add(path, "branch-coverage", True,
               "%d realizable blocks, %d branches"
               % (len(realized), len(tree.branches)))
    plus = ctx.sg.plus
    for tau, sub in sorted(tree.branches.items()):
        if sub.alpha != _unit_ordinal(tree.unit):
            raise StrategyError("branch %d covers %s, expected the %r unit"
                                % (tau, format_ordinal(sub.alpha), tree.unit))
        if sub.player != tree.player:
            raise StrategyError("branch player flips at %s" % path)
        composed_ok = all(plus(tau, v) in tree.objective
                          for v in sub.objective)
        if not composed_ok:
            raise StrategyError("branch %d objective composes outside the "
                                "target at %s" % (tau, path))
        report.add(path, "branch-compose", True,
                   "block %d steers into %d-block set"
                   % (tau, len(sub.objective)))
        _verify_node(view, sub, "%s.b%d" % (path, tau), report, cfg)
    _verify_node(view, tree.left, path + ".prefix", report, cfg)


# ---------------------------------------------------------------------------
# running and flattening finite trees


def run_tree(view: FormulaView, tree: StrategyTree, opponent: tuple) -> tuple:
    """Play a finite tree against a fixed opponent bit sequence."""
    if not tree.alpha.is_finite:
        raise StrategyError("only finite trees can be run to completion")
    k = tree.alpha.finite_value()
    if len(opponent) != k:
        raise GameValueError("opponent sequence must have %d bits" % k)
    if isinstance(tree, Leaf):
        return run_finite_strategy(tree.table, tuple(opponent))
    if not isinstance(tree, SeqNode):
        raise StrategyError("omega machinery inside a finite tree")
    kl = tree.left.alpha.finite_value()
    pairs = run_tree(view, tree.left, tuple(opponent[:kl]))
    level = view.level()
    tau = None
    for a, b in pairs:
        x = level.letters[a, b]
        tau = x if tau is None else level.plus(tau, x)
    sub = tree.branches.get(tau)
    if sub is None:
        raise StrategyError("no branch for realized block %r" % (tau,))
    return pairs + run_tree(view, sub, tuple(opponent[kl:]))


def flatten_tree(view: FormulaView, tree: StrategyTree) -> FiniteStrategyTable:
    """Collapse a finite tree into one lookup table.

    The table replays identically against every opponent, so it can be
    checked by the brute-force verifier with no algebra involved.
    """
    if not tree.alpha.is_finite:
        raise StrategyError("only finite trees flatten to a table")
    k = tree.alpha.finite_value()
    moves = {}
    for mask in range(1 << k):
        opp = tuple(mask >> r & 1 for r in range(k))
        pairs = run_tree(view, tree, opp)
        for r in range(k):
            if tree.player == "I":
                moves[tuple(b for _, b in pairs[:r])] = pairs[r][0]
            else:
                moves[tuple(a for a, _ in pairs[:r + 1])] = pairs[r][1]
    return FiniteStrategyTable(tree.player, k, moves)


# ---------------------------------------------------------------------------
# serialization


def tree_to_doc(tree: StrategyTree) -> dict:
    """JSON-ready document; see doc/strategy-schema in the README."""
    base = {"player": tree.player,
            "ordinal": format_ordinal(tree.alpha),
            "objective": sorted(tree.objective)}
    if isinstance(tree, Leaf):
        base["kind"] = "table"
        base["rounds"] = tree.table.rounds
        base["moves"] = {"".join(map(str, h)): bit
                         for h, bit in sorted(tree.table.moves.items())}
        return base
    if isinstance(tree, OmegaLeaf):
        base["kind"] = "bit-machine"
        base["machine"] = _machine_to_doc(tree.machine)
        return base
    if isinstance(tree, OmegaNode):
        base["kind"] = "proposal-machine"
        base["machine"] = _machine_to_doc(tree.machine)
        base["branches"] = {",".join(map(str, prop)): tree_to_doc(sub)
                            for prop, sub in sorted(tree.branches.items())}
        return base
    base["kind"] = "split"
    base["unit"] = list(tree.unit)
    base["prefix"] = tree_to_doc(tree.left)
    base["branches"] = {str(tau): tree_to_doc(sub)
                        for tau, sub in sorted(tree.branches.items())}
    return base


def tree_from_doc(doc: dict) -> StrategyTree:
    player = doc["player"]
    alpha = parse_ordinal(doc["ordinal"])
    objective = frozenset(doc["objective"])
    kind = doc["kind"]
    if kind == "table":
        moves = {tuple(int(c) for c in h): bit
                 for h, bit in doc["moves"].items()}
        return Leaf(player, alpha, objective,
                    FiniteStrategyTable(player, doc["rounds"], moves))
    if kind == "bit-machine":
        return OmegaLeaf(player, alpha, objective,
                         _machine_from_doc(doc["machine"]))
    if kind == "proposal-machine":
        branches = {tuple(int(x) for x in key.split(",")): tree_from_doc(sub)
                    for key, sub in doc["branches"].items()}
        return OmegaNode(player, alpha, objective,
                         _machine_from_doc(doc["machine"]), branches)
    if kind == "split":
        branches = {int(key): tree_from_doc(sub)
                    for key, sub in doc["branches"].items()}
        return SeqNode(player, alpha, objective, tree_from_doc(doc["prefix"]),
                       tuple(doc["unit"]), branches)
    raise StrategyError("unknown node kind %r" % (kind,))


def _machine_to_doc(m: MealyMachine) -> dict:
    if m.role == "opener":
        emit = {str(s): (list(v) if isinstance(v, tuple) else v)
                for s, v in sorted(m.emit.items())}
    else:
        emit = {_dockey(key): v for key, v in sorted(m.emit.items())}
    delta = {_dockey(key): v for key, v in sorted(m.delta.items())}
    return {"role": m.role, "n": m.n, "initial": m.initial,
            "emit": emit, "delta": delta}


def _machine_from_doc(doc: dict) -> MealyMachine:
    if doc["role"] == "opener":
        emit = {int(s): (tuple(v) if isinstance(v, list) else v)
                for s, v in doc["emit"].items()}
    else:
        emit = {_undockey(key): v for key, v in doc["emit"].items()}
    delta = {_undockey(key): v for key, v in doc["delta"].items()}
    return MealyMachine(doc["role"], doc["n"], doc["initial"], emit, delta)


def _dockey(key: tuple) -> str:
    state, x = key
    if isinstance(x, tuple):
        return "%d|%s" % (state, ",".join(map(str, x)))
    return "%d|%d" % (state, x)


def _undockey(key: str):
    state, x = key.split("|")
    if "," in x:
        return (int(state), tuple(int(p) for p in x.split(",")))
    return (int(state), int(x))


# ---------------------------------------------------------------------------
# the sentences "this formula defines a winning strategy"


def _fresh_names(used, how_many, pool):
    out = []
    for stem in pool:
        if stem not in used:
            out.append(stem)
            if len(out) == how_many:
                return out
    for i in itertools.count(2):
        for stem in pool:
            name = "%s%d" % (stem, i)
            if name not in used:
                out.append(name)
                if len(out) == how_many:
                    return out
    raise AssertionError("unreachable")


def rename_free_set_vars(f: Formula, mapping: dict) -> Formula:
    """Substitute fresh names for free set variables; bound names shadow."""

    def walk(node, bound):
        if isinstance(node, Atom):
            args = tuple(mapping.get(a, a) if a not in bound else a
                         for a in node.args)
            return Atom(node.kind, args)
        if isinstance(node, Neg):
            return Neg(walk(node.sub, bound))
        if isinstance(node, Bin):
            return Bin(node.op, walk(node.left, bound),
                       walk(node.right, bound))
        return Quant(node.q, node.var, walk(node.body, bound | {node.var}))

    return walk(f, frozenset())


def _eq_sets(u, v, z):
    return Quant("all1", z, Bin("<->", Atom("mem", (z, u)),
                                Atom("mem", (z, v))))


def _agree(u, v, t, z, upto):
    guard = Neg(Atom("lt", (t, z))) if upto else Atom("lt", (z, t))
    return Quant("all1", z, Bin("->", guard,
                                Bin("<->", Atom("mem", (z, u)),
                                    Atom("mem", (z, v)))))


def build_win_sentences(phi: Union[str, Formula],
                        psi: Union[str, Formula]) -> tuple:
    """Sentences stating that psi plays a winning strategy.

    The first sentence holds on a chain exactly when psi defines a total,
    single-valued operator producing the opening player's bits from the
    answering player's bits seen so far (strictly so: round r output may
    depend only on rounds before r), all of whose plays satisfy phi.  The
    second is the answering player's dual: the operator reads bits up to
    and including the current round and all plays falsify phi.
    """
    phi = parse_formula(phi) if isinstance(phi, str) else phi
    psi = parse_formula(psi) if isinstance(psi, str) else psi
    for name, f in (("condition", phi), ("strategy", psi)):
        extra = free_set_vars(f) - {"X1", "X2"}
        if extra:
            raise FormulaError("%s formula must keep its free variables "
                               "inside X1, X2 (saw %s)"
                               % (name, sorted(extra)[0]))
    used = all_names(phi) | all_names(psi)
    a, a2, b, b2 = _fresh_names(used, 4, ("A", "C", "B", "D"))
    t, z = _fresh_names(used | {a, a2, b, b2}, 2, ("t", "z", "u", "v"))

    def inst(f, own, opp):
        return rename_free_set_vars(f, {"X1": own, "X2": opp})

    def quantify(names, body):
        for name in reversed(names):
            body = Quant("all2", name, body)
        return body

    total_i = Quant("all2", b, Quant("ex2", a, inst(psi, a, b)))
    unique_i = quantify([b, a, a2],
                        Bin("->", Bin("&", inst(psi, a, b), inst(psi, a2, b)),
                            _eq_sets(a, a2, z)))
    causal_i = quantify([b, b2, a, a2], Quant(
        "all1", t,
        Bin("->",
            conj([inst(psi, a, b), inst(psi, a2, b2),
                  _agree(b, b2, t, z, upto=False)]),
            Bin("<->", Atom("mem", (t, a)), Atom("mem", (t, a2))))))
    wins_i = quantify([b, a], Bin("->", inst(psi, a, b), inst(phi, a, b)))
    win_i = conj([total_i, unique_i, causal_i, wins_i])

    total_ii = Quant("all2", a, Quant("ex2", b, inst(psi, a, b)))
    unique_ii = quantify([a, b, b2],
                         Bin("->", Bin("&", inst(psi, a, b),
                                       inst(psi, a, b2)),
                             _eq_sets(b, b2, z)))
    causal_ii = quantify([a, a2, b, b2], Quant(
        "all1", t,
        Bin("->",
            conj([inst(psi, a, b), inst(psi, a2, b2),
                  _agree(a, a2, t, z, upto=True)]),
            Bin("<->", Atom("mem", (t, b)), Atom("mem", (t, b2))))))
    wins_ii = quantify([a, b],
                       Bin("->", inst(psi, a, b), Neg(inst(phi, a, b))))
    win_ii = conj([total_ii, unique_ii, causal_ii, wins_ii])
    return win_i, win_ii


def operator_response_map(psi: Union[str, Formula], player: str, k: int,
                          cfg: RunConfig = DEFAULT) -> dict:
    """For each opponent set over k rounds, every own set satisfying psi."""
    psi = parse_formula(psi) if isinstance(psi, str) else psi
    kf = to_kernel(psi, 2)
    table = {}
    for omask in range(1 << k):
        opp = frozenset(p for p in range(k) if omask >> p & 1)
        outs = []
        for mask in range(1 << k):
            own = frozenset(p for p in range(k) if mask >> p & 1)
            sets = (own, opp) if player == "I" else (opp, own)
            if eval_kernel(kf, FiniteChain(k, sets), cfg):
                outs.append(own)
        table[opp] = outs
    return table


def check_win_finite(phi: Union[str, Formula], psi: Union[str, Formula],
                     player: str, k: int,
                     cfg: RunConfig = DEFAULT) -> tuple:
    """Direct finite-chain check of the winning-strategy sentences.

    Evaluates the defined operator play by play instead of evaluating the
    quantifier tower, so it stays fast enough for sweeps; agrees with
    evaluating the sentences themselves.  Returns (ok, failure notes).
    """
    if player not in ("I", "II"):
        raise GameValueError("role must be I or II")
    phi = parse_formula(phi) if isinstance(phi, str) else phi
    kphi = to_kernel(phi, 2)
    responses = operator_response_map(psi, player, k, cfg)
    fails = []
    fn = {}
    for opp, outs in sorted(responses.items(), key=lambda kv: sorted(kv[0])):
        if len(outs) != 1:
            fails.append("input %s has %d outputs" % (sorted(opp), len(outs)))
            continue
        fn[opp] = outs[0]
    if not fails:
        inputs = sorted(fn, key=sorted)
        for i, o1 in enumerate(inputs):
            for o2 in inputs[i + 1:]:
                for t in range(k):
                    below = set(range(t)) if player == "I" \
                        else set(range(t + 1))
                    if o1 & below != o2 & below:
                        continue
                    if (t in fn[o1]) != (t in fn[o2]):
                        fails.append("output at round %d peeks past the "
                                     "allowed input prefix" % t)
                        break
                if fails:
                    break
            if fails:
                break
    if not fails:
        for opp, own in sorted(fn.items(), key=lambda kv: sorted(kv[0])):
            sets = (own, opp) if player == "I" else (opp, own)
            holds = eval_kernel(kphi, FiniteChain(k, sets), cfg)
            if holds != (player == "I"):
                fails.append("play against %s ends on the wrong side"
                             % (sorted(opp),))
    return not fails, fails[:10]


# ---------------------------------------------------------------------------
# emission


@dataclass
class EmittedStrategy:
    formula: Optional[Formula]
    text: str
    certified: bool
    notes: tuple = ()


def emit_strategy_formula(tree: StrategyTree, view: FormulaView,
                          cfg: Optional[RunConfig] = None) -> EmittedStrategy:
    """Render the tree's behavior as a defining formula where possible.

    Finite tables and omega machines emit real formulas (small recurring
    shapes collapse to closed forms, everything else gets an explicit
    position or run encoding).  Splits after an infinite prefix and
    omega-power nodes need segment-boundary devices with no plain
    rendering, so they come back as structured text with placeholder
    guards and certified=False.
    """
    cfg = cfg or view.engine.cfg
    emitted = _emit_node(tree, view, cfg)
    if emitted.formula is not None and not tree.alpha.is_finite:
        return replace(emitted, certified=False,
                       notes=emitted.notes +
                       ("faithful to the machine by construction; no "
                        "finite evaluation exists at this length",))
    return emitted


def certify_emission(view: FormulaView, tree: StrategyTree,
                     emitted: EmittedStrategy,
                     cfg: Optional[RunConfig] = None) -> EmittedStrategy:
    """Round-trip an emitted formula through the win sentences.

    Only finite trees can be certified; the check replays the defined
    operator on every input of the tree's length.
    """
    cfg = cfg or view.engine.cfg
    if emitted.formula is None:
        return replace(emitted, notes=emitted.notes +
                       ("nothing to certify: no closed formula",))
    if not tree.alpha.is_finite:
        return replace(emitted, notes=emitted.notes +
                       ("certification needs a finite length",))
    k = tree.alpha.finite_value()
    try:
        ok, fails = check_win_finite(view.surface, emitted.formula,
                                     tree.player, k, cfg)
    except ResourceLimit as exc:
        return replace(emitted, notes=emitted.notes +
                       ("certification exceeded the evaluation budget: %s"
                        % exc,))
    notes = ("defines a winning strategy at length %d" % k,) if ok \
        else tuple(fails)
    return replace(emitted, certified=ok, notes=emitted.notes + notes)


def _emit_node(tree, view, cfg) -> EmittedStrategy:
    if isinstance(tree, Leaf):
        return _emit_leaf(tree, cfg)
    if isinstance(tree, OmegaLeaf):
        return _emit_machine(tree.machine, tree.player)
    if isinstance(tree, SeqNode):
        return _emit_seq(tree, view, cfg)
    parts = []
    for prop, sub in sorted(tree.branches.items()):
        inner = _emit_node(sub, view, cfg)
        parts.append("when %s is proposed: %s" % (list(prop), inner.text))
    text = ("meta-run over length-%s blocks driven by a %d-state proposal "
            "machine; %s" % (format_ordinal(omega_power(tree.alpha.degree - 1)),
                             tree.machine.n, "; ".join(parts)))
    return EmittedStrategy(None, text, False,
                           ("blocks of transfinite length have no plain "
                            "successor predicate; boundaries stay "
                            "placeholders",))


def _round_functions(table: FiniteStrategyTable):
    """Per-round move maps keyed by opponent history."""
    k = table.rounds
    rounds = [dict() for _ in range(k)]
    for hist, bit in table.moves.items():
        r = len(hist) if table.player == "I" else len(hist) - 1
        rounds[r][hist] = bit
    return rounds


def _emit_leaf(tree: Leaf, cfg) -> EmittedStrategy:
    table = tree.table
    rounds = _round_functions(table)
    own = "X1" if table.player == "I" else "X2"
    closed = _leaf_closed_form(table, rounds, own)
    if closed is not None:
        return closed
    return _emit_leaf_matrix(table, rounds, cfg)


def _leaf_closed_form(table, rounds, own) -> Optional[EmittedStrategy]:
    consts = []
    for fn in rounds:
        vals = set(fn.values())
        consts.append(vals.pop() if len(vals) == 1 else None)
    mem = Atom("mem", ("t", own))
    if all(c == 1 for c in consts):
        f = Quant("all1", "t", mem)
    elif all(c == 0 for c in consts):
        f = Quant("all1", "t", Neg(mem))
    elif consts[0] == 1 and all(c == 0 for c in consts[1:]):
        first = Neg(Quant("ex1", "s", Atom("lt", ("s", "t"))))
        f = Quant("all1", "t", Bin("<->", mem, first))
    elif table.player == "II" and all(
            all(bit == fn_key[-1] for fn_key, bit in fn.items())
            for fn in rounds):
        f = Quant("all1", "t", Bin("<->", mem, Atom("mem", ("t", "X1"))))
    elif table.player == "II" and all(
            all(bit == 1 - fn_key[-1] for fn_key, bit in fn.items())
            for fn in rounds):
        f = Quant("all1", "t", Bin("<->", mem, Neg(Atom("mem", ("t", "X1")))))
    else:
        return None
    return EmittedStrategy(f, render(f), False, ("closed form",))


def _position_vars(k):
    return ["u%d" % (i + 1) for i in range(k)]


def _pinned_positions(names, below=None):
    """names enumerate the positions (below a pivot when given), in order."""
    parts = []
    for i in range(len(names) - 1):
        parts.append(Atom("lt", (names[i], names[i + 1])))
    options = disj([Atom("eq", ("q", n)) for n in names])
    if below is not None:
        parts.append(Atom("lt", (names[-1], below)))
        cover = Quant("all1", "q",
                      Bin("->", Atom("lt", ("q", below)), options))
    else:
        cover = Quant("all1", "q", options)
    parts.append(cover)
    return conj(parts)


def _bit_literal(var, setname, bit):
    atom = Atom("mem", (var, setname))
    return atom if bit else Neg(atom)


def _emit_leaf_matrix(table, rounds, cfg) -> EmittedStrategy:
    k = table.rounds
    names = _position_vars(k)
    own, opp = ("X1", "X2") if table.player == "I" else ("X2", "X1")
    clauses = []
    for r, fn in enumerate(rounds):
        ones = [h for h, bit in sorted(fn.items()) if bit == 1]
        if not ones:
            rule = Neg(Atom("eq", (names[0], names[0])))
        elif len(ones) == len(fn):
            rule = Atom("eq", (names[0], names[0]))
        else:
            pats = []
            for h in ones:
                lits = [_bit_literal(names[j], opp, h[j])
                        for j in range(len(h))]
                pats.append(conj(lits) if lits else
                            Atom("eq", (names[0], names[0])))
            rule = disj(pats)
        clauses.append(Bin("<->", Atom("mem", (names[r], own)), rule))
    body = Bin("&", _pinned_positions(names), conj(clauses))
    f = body
    for n in reversed(names):
        f = Quant("ex1", n, f)
    return EmittedStrategy(f, render(f), False,
                           ("explicit position encoding; evaluation cost "
                            "grows steeply with length",))


def _emit_machine(machine: MealyMachine, player: str) -> EmittedStrategy:
    closed = _machine_closed_form(machine, player)
    if closed is not None:
        return closed
    own, opp = ("X1", "X2") if player == "I" else ("X2", "X1")
    n = machine.n
    states = ["Z%d" % (i + 1) for i in range(n)]
    mem = lambda v, s: Atom("mem", (v, s))
    parts = []
    one_of = []
    for i in range(n):
        others = [Neg(mem("t", states[j])) for j in range(n) if j != i]
        one_of.append(conj([mem("t", states[i])] + others)
                      if others else mem("t", states[i]))
    parts.append(Quant("all1", "t", disj(one_of)))
    first = Neg(Quant("ex1", "s", Atom("lt", ("s", "t"))))
    parts.append(Quant("all1", "t",
                       Bin("->", first, mem("t", states[machine.initial]))))
    succ = Bin("&", Atom("lt", ("t", "u")),
               Neg(Quant("ex1", "v",
                         Bin("&", Atom("lt", ("t", "v")),
                             Atom("lt", ("v", "u"))))))
    steps = []
    outs = []
    for i in range(n):
        for bit in (0, 1):
            trig = Bin("&", mem("t", states[i]),
                       _bit_literal("t", opp, bit))
            steps.append(Bin("->", trig, mem("u", states[machine.delta[i, bit]])))
        if machine.role == "opener":
            outs.append(Bin("->", mem("t", states[i]),
                            _bit_literal("t", own, machine.emit[i])))
        else:
            for bit in (0, 1):
                trig = Bin("&", mem("t", states[i]),
                           _bit_literal("t", opp, bit))
                outs.append(Bin("->", trig,
                                _bit_literal("t", own, machine.emit[i, bit])))
    parts.append(Quant("all1", "t", Quant("all1", "u",
                                          Bin("->", succ, conj(steps)))))
    parts.append(Quant("all1", "t", conj(outs)))
    f = conj(parts)
    for s in reversed(states):
        f = Quant("ex2", s, f)
    return EmittedStrategy(f, render(f), False,
                           ("run encoding of a %d-state machine" % n,))


def _machine_closed_form(machine: MealyMachine,
                         player: str) -> Optional[EmittedStrategy]:
    own = "X1" if player == "I" else "X2"
    mem = Atom("mem", ("t", own))
    if machine.role == "opener":
        bits = {machine.emit[s] for s in range(machine.n)
                if s in machine.emit}
        if len(bits) == 1:
            bit = bits.pop()
            f = Quant("all1", "t", mem if bit else Neg(mem))
            return EmittedStrategy(f, render(f), False, ("closed form",))
        return None
    shapes = {(a, machine.emit[s, a])
              for s in range(machine.n) for a in (0, 1)
              if (s, a) in machine.emit}
    for fn, build in (
            (lambda a: a, lambda: Bin("<->", mem, Atom("mem", ("t", "X1")))),
            (lambda a: 1 - a,
             lambda: Bin("<->", mem, Neg(Atom("mem", ("t", "X1"))))),
            (lambda a: 1, lambda: mem),
            (lambda a: 0, lambda: Neg(mem))):
        if all(b == fn(a) for a, b in shapes):
            f = Quant("all1", "t", build())
            return EmittedStrategy(f, render(f), False, ("closed form",))
    return None


def _emit_seq(tree: SeqNode, view, cfg) -> EmittedStrategy:
    left = _emit_node(tree.left, view, cfg)
    branch_parts = {tau: _emit_node(sub, view, cfg)
                    for tau, sub in sorted(tree.branches.items())}
    pivot = "t0"
    if (tree.left.alpha.is_finite and left.formula is not None
            and all(p.formula is not None for p in branch_parts.values())):
        kl = tree.left.alpha.finite_value()
        guards = _prefix_guards(tree, view, kl, pivot, cfg)
        if guards is not None:
            parts = [position_is(pivot, kl),
                     relativize(left.formula, "<", pivot)]
            for tau, part in branch_parts.items():
                parts.append(Bin("->", guards[tau],
                                 relativize(part.formula, ">=", pivot)))
            f = Quant("ex1", pivot, conj(parts))
            notes = ("split after %d rounds; branch guards enumerate the "
                     "prefix plays per realized block" % kl,)
            return EmittedStrategy(f, render(f), False, notes)
    lines = ["split after %s:" % format_ordinal(tree.left.alpha),
             "prefix: %s" % left.text]
    for tau, part in branch_parts.items():
        lines.append("if the prefix realizes block %d: %s" % (tau, part.text))
    return EmittedStrategy(None, "\n".join(lines), False,
                           ("realized-block guards over an infinite prefix "
                            "stay placeholders",))


def _prefix_guards(tree: SeqNode, view, kl: int, pivot: str,
                   cfg) -> Optional[dict]:
    """Per-block guard formulas enumerating the concrete prefix plays."""
    if 4 ** kl > cfg.max_guard_patterns:
        return None
    level = view.level()
    by_block = {}
    for bits in itertools.product((0, 1), (0, 1), repeat=kl):
        pairs = [(bits[2 * i], bits[2 * i + 1]) for i in range(kl)]
        tau = None
        for a, b in pairs:
            x = level.letters[a, b]
            tau = x if tau is None else level.plus(tau, x)
        by_block.setdefault(tau, []).append(pairs)
    names = ["w%d" % (i + 1) for i in range(kl)]
    guards = {}
    for tau in tree.branches:
        pats = []
        for pairs in by_block.get(tau, []):
            lits = []
            for j, (a, b) in enumerate(pairs):
                lits.append(_bit_literal(names[j], "X1", a))
                lits.append(_bit_literal(names[j], "X2", b))
            pats.append(conj([_pinned_positions(names, below=pivot)] + lits))
        if not pats:
            continue
        g = disj(pats)
        for n in reversed(names):
            g = Quant("ex1", n, g)
        guards[tau] = g
    return guards


# ---------------------------------------------------------------------------
# reduction of flagged ordinals to the omega^omega game


@dataclass(frozen=True)
class Reduction:
    alpha: Ordinal
    beta: Ordinal
    winset: frozenset
    text: str
    winner_full: str
    winner_reduced: str

    @property
    def consistent(self) -> bool:
        return self.winner_full == self.winner_reduced


def reduce_to_omega_omega(view: FormulaView, alpha: Ordinal,
                          cfg: Optional[RunConfig] = None) -> Reduction:
    """Rewrite a game beyond omega^omega as an omega^omega game.

    The digits after the leading block form a suffix the opening player
    must still steer through, so the core game's objective becomes the
    steering set of that suffix.  The returned text names one value-block
    characterizer per member; those names are placeholders for the
    defining conditions of the blocks, not evaluable formulas.
    """
    cfg = cfg or view.engine.cfg
    if not alpha.limit_part:
        raise OrdinalError("%s has no leading w^w block to split off"
                           % format_ordinal(alpha))
    beta = Ordinal(0, alpha.terms)
    ctx = view.game()
    stab = view.stab("I")
    win = ctx.sg.win
    if beta.is_zero:
        winset = frozenset(win)
    else:
        suffix = ordinal_game_type(ctx, stab, beta, cfg)
        winset = k_set(ctx, suffix, win)
    if not winset:
        text = "never"
    elif len(winset) == ctx.sg.size:
        text = "always"
    else:
        text = " | ".join("block%d(X1,X2)" % b for b in sorted(winset))
    winner_reduced = "I" if gt_contains(stab.limit, winset) else "II"
    winner_full = decide(view, alpha).winner
    return Reduction(alpha, beta, winset, text, winner_full, winner_reduced)


# ---------------------------------------------------------------------------
# candidate search


_FO_POOL = ("t", "s")


def _atoms(nv: int) -> list:
    avail = _FO_POOL[:nv]
    out = []
    for v in avail:
        for X in ("X1", "X2"):
            out.append(Atom("mem", (v, X)))
    for u in avail:
        for v in avail:
            if u != v:
                out.append(Atom("lt", (u, v)))
    if nv == 2:
        out.append(Atom("eq", _FO_POOL))
    for X in ("X1", "X2"):
        out.append(Atom("empty", (X,)))
        out.append(Atom("sing", (X,)))
    out.append(Atom("sub", ("X1", "X2")))
    out.append(Atom("sub", ("X2", "X1")))
    return out


def enumerate_candidates(max_size: int):
    """Deterministic stream of candidate strategy formulas.

    Formulas over X1, X2 with at most two first-order variables (t, then
    s) and no set quantifiers, produced in order of AST node count with
    the rendered text as the tiebreak.  Connectives are negation,
    conjunction, disjunction and equivalence with canonically ordered
    operands (implication is expressible through them); double negations,
    repeated operands, and duplicated renderings are dropped.  The order
    is a free choice: it only affects which witness is found first.
    """
    memo = {}

    def gen(size, nv):
        key = (size, nv)
        if key in memo:
            return memo[key]
        out = []
        texts = set()

        def keep(f):
            s = render(f)
            if s not in texts:
                texts.add(s)
                out.append(f)

        if size == 1:
            for f in _atoms(nv):
                keep(f)
        else:
            for f in gen(size - 1, nv):
                if not isinstance(f, Neg):
                    keep(Neg(f))
            if nv < len(_FO_POOL):
                var = _FO_POOL[nv]
                for body in gen(size - 1, nv + 1):
                    keep(Quant("ex1", var, body))
                    keep(Quant("all1", var, body))
            for i in range(1, size - 1):
                if i > size - 1 - i:
                    break
                for lf in gen(i, nv):
                    lt = render(lf)
                    for rf in gen(size - 1 - i, nv):
                        if i == size - 1 - i and render(rf) < lt:
                            continue
                        if lt == render(rf):
                            continue
                        for op in ("&", "|", "<->"):
                            keep(Bin(op, lf, rf))
        memo[key] = out
        return out

    seen = set()
    for size in range(1, max_size + 1):
        batch = sorted(gen(size, 0), key=render)
        for f in batch:
            text = render(f)
            if text not in seen:
                seen.add(text)
                yield f


@dataclass
class SearchResult:
    formula: Optional[Formula]
    tested: int
    skipped: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.formula is not None


def search_definable_strategy(view: FormulaView, alpha: Ordinal, budget: int,
                              cfg: Optional[RunConfig] = None,
                              max_size: int = 9) -> SearchResult:
    """First candidate formula that provably plays the winning side.

    Tests candidates from enumerate_candidates in order until the budget
    of tested formulas runs out.  Candidates that cannot mention the
    winner's own variable are filtered without spending budget, since
    totality and uniqueness already rule them out.  A miss is only
    none-within-budget, never a proof that no definition exists.
    """
    cfg = cfg or view.engine.cfg
    player = decide(view, alpha).winner
    own = "X1" if player == "I" else "X2"
    tested = 0
    skipped = []
    for psi in enumerate_candidates(max_size):
        if tested >= budget:
            break
        if own not in free_set_vars(psi):
            continue
        tested += 1
        try:
            if _candidate_wins(view, psi, player, alpha, cfg):
                return SearchResult(psi, tested, skipped)
        except ResourceLimit as exc:
            skipped.append((render(psi), str(exc)))
    return SearchResult(None, tested, skipped)


def _candidate_wins(view, psi, player, alpha, cfg) -> bool:
    if alpha.is_finite:
        k = alpha.finite_value()
        if k == 0:
            return False
        ok, _ = check_win_finite(view.surface, psi, player, k, cfg)
        return ok
    win_i, win_ii = build_win_sentences(view.surface, psi)
    sentence = win_i if player == "I" else win_ii
    return decide_sentence(view.engine, sentence, alpha)
