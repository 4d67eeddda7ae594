"""Forceable-outcome antichains for bit games of ordinal length.

Fix a finite value semigroup with a designated winning subset and a letter
map from bit pairs to elements.  Over any segment of the game, a player
can force the segment's emitted value into certain sets of elements; the
family of such sets is upward closed, so its minimal members form an
antichain that completely describes the player's power over the segment.
A minimal forceable set is exactly realizable: the opponent can steer the
value onto every element of it.

These antichains compose: concatenation is a choice-function product
(the mover sees the realized value of the finished segment before
committing in the next), and an omega repetition is a proposal game that
the parity solver settles.  Folding the composition over the terms of an
ordinal's normal form decides who wins the whole game, with coefficient
powers and exponent towers shortcut through cycle detection, so arbitrary
codes stay cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .config import DEFAULT, RunConfig
from .errors import GameValueError, ResourceLimit
from .omega import Semigroup, solve_omega_choice_game, solve_phased_choice_game
from .ordinals import Ordinal


# ---------------------------------------------------------------------------
# antichains of minimal forceable sets

GameType = frozenset          # of frozensets of element ids


def min_antichain(family) -> GameType:
    sets = sorted({frozenset(m) for m in family}, key=len)
    out = []
    for m in sets:
        if not any(k <= m for k in out):
            out.append(m)
    return frozenset(out)


def gcode(g: GameType) -> tuple:
    """Canonical hashable form of a game type."""
    return tuple(sorted(tuple(sorted(m)) for m in g))


def gt_contains(g: GameType, winset) -> bool:
    """Membership of a value set in the upward closed family.

    The antichain stores only minimal forceable sets; a set belongs to
    the family exactly when it contains one of them.
    """
    w = frozenset(winset)
    return any(m <= w for m in g)


@dataclass(frozen=True)
class GameContext:
    """A value semigroup with the per-round letter map.

    `letters[(a, b)]` is the element emitted when the opening player bids
    a and the answering player replies b.  The semigroup's winning subset
    is the opening player's objective for the full game value.
    """

    sg: Semigroup
    letters: dict

    def __post_init__(self):
        need = {(a, b) for a in (0, 1) for b in (0, 1)}
        if set(self.letters) != need:
            raise GameValueError("letter map must cover the four bit pairs")

    def round_type(self, role: str) -> GameType:
        """Antichain of the one-round game for the given player."""
        lt = self.letters
        if role == "I":
            family = [{lt[a, 0], lt[a, 1]} for a in (0, 1)]
        elif role == "II":
            family = [{lt[0, f0], lt[1, f1]}
                      for f0 in (0, 1) for f1 in (0, 1)]
        else:
            raise GameValueError("role must be I or II")
        return min_antichain(family)


def gt_one(ctx: GameContext, role: str = "I") -> GameType:
    """Antichain of the single-round segment."""
    return ctx.round_type(role)


def k_set(ctx: GameContext, b: GameType, g) -> frozenset:
    """Values from which the mover can still steer a following segment.

    An element tau belongs to the result when some minimal forceable set
    of the following segment keeps tau plus every element of it inside g.
    Larger antichain members only constrain more, so scanning the minimal
    sets is enough.
    """
    plus = ctx.sg.plus
    g = frozenset(g)
    out = set()
    for tau in range(ctx.sg.size):
        for m in b:
            if all(plus(tau, t) in g for t in m):
                out.add(tau)
                break
    return frozenset(out)


def gt_add(ctx: GameContext, g1: GameType, g2: GameType,
           cfg: RunConfig = DEFAULT) -> GameType:
    """Antichain of the concatenated segment.

    The mover first forces the left value into some minimal set, observes
    which element the opponent realized, and picks a right-segment set per
    element; the reachable combined values form one candidate set per
    choice function.
    """
    plus = ctx.sg.plus
    basis2 = sorted(g2, key=sorted)
    family = []
    count = 0
    for m1 in sorted(g1, key=sorted):
        elems = sorted(m1)
        count += len(basis2) ** len(elems)
        if count > cfg.max_candidates:
            raise ResourceLimit("too many choice functions in composition",
                                "%d candidates" % count)
        for pick in itertools.product(basis2, repeat=len(elems)):
            combined = frozenset(plus(t1, t2)
                                 for t1, m2 in zip(elems, pick)
                                 for t2 in m2)
            family.append(combined)
    out = min_antichain(family)
    if len(out) > cfg.max_antichain:
        raise ResourceLimit("antichain too large", "%d sets" % len(out))
    return out


def gt_power(ctx: GameContext, g: GameType, c: int,
             cfg: RunConfig = DEFAULT) -> GameType:
    """c-fold concatenation of a segment with itself; cycle detection in
    the sequence of partial folds keeps huge coefficients exact."""
    if c < 1:
        raise GameValueError("coefficient must be positive")
    seen = {}
    seq = [g]
    cur = g
    while len(seq) < c:
        key = gcode(cur)
        if key in seen:
            start = seen[key]
            period = len(seq) - 1 - start
            idx = start + (c - 1 - start) % period
            return seq[idx]
        seen[key] = len(seq) - 1
        cur = gt_add(ctx, cur, g, cfg)
        seq.append(cur)
    return seq[c - 1]


# ---------------------------------------------------------------------------
# omega products through the proposal game


def _forceable(ctx: GameContext, phases, loop_to, target,
               cfg: RunConfig) -> bool:
    sg = replace(ctx.sg, win=frozenset(target))
    if len(phases) == 1:
        res = solve_omega_choice_game(sg, phases[0], cfg)
    else:
        res = solve_phased_choice_game(sg, phases, loop_to, cfg)
    return res.winner == "I"


def _minimize(ctx, phases, loop_to, base, cfg) -> frozenset:
    cur = set(base)
    for x in sorted(base):
        if len(cur) == 1:
            break
        trial = cur - {x}
        if _forceable(ctx, phases, loop_to, trial, cfg):
            cur = trial
    return frozenset(cur)


def _min_transversals(antichain) -> list:
    """Minimal hitting sets, by incremental intersection products."""
    trs = [frozenset()]
    for m in sorted(antichain, key=sorted):
        nxt = []
        for t in trs:
            if t & m:
                nxt.append(t)
                continue
            for x in sorted(m):
                nxt.append(t | {x})
        trs = []
        nxt.sort(key=len)
        for t in nxt:
            if not any(s <= t for s in trs):
                trs.append(t)
    return trs


def gt_omega_of(ctx: GameContext, phases, loop_to=0,
                cfg: RunConfig = DEFAULT) -> GameType:
    """Antichain of the segment formed by infinitely many sub-segments.

    Sub-segment k offers proposals from phases[k] (the last phases repeat
    from loop_to on).  Forceability of a target set is monotone, so the
    minimal forceable sets are enumerated by shrinking the full ground set
    and then testing complements of minimal transversals until none of
    them is forceable any more.
    """
    phase_props = [sorted(g, key=sorted) for g in phases]
    ground = frozenset(x for g in phases for m in g for x in m)
    closure = _value_closure(ctx.sg, ground)
    if not _forceable(ctx, phase_props, loop_to, closure, cfg):
        return frozenset()
    found = [_minimize(ctx, phase_props, loop_to, closure, cfg)]
    while True:
        if len(found) > cfg.max_antichain:
            raise ResourceLimit("antichain too large", "%d sets" % len(found))
        fresh = None
        for tr in _min_transversals(found):
            cand = closure - tr
            if _forceable(ctx, phase_props, loop_to, cand, cfg):
                fresh = _minimize(ctx, phase_props, loop_to, cand, cfg)
                break
        if fresh is None:
            return min_antichain(found)
        found.append(fresh)


def _value_closure(sg: Semigroup, ground) -> frozenset:
    """All values an omega sequence over `ground` can take: closure under
    addition, plus prefixed omega powers of idempotents in the closure."""
    closed = set(ground)
    frontier = list(closed)
    while frontier:
        x = frontier.pop()
        for y in tuple(closed):
            for z in (sg.plus(x, y), sg.plus(y, x)):
                if z not in closed:
                    closed.add(z)
                    frontier.append(z)
    out = set()
    for e in closed:
        if sg.is_idempotent(e):
            tail = sg.omega[e]
            out.add(tail)
            for p in closed:
                out.add(sg.plus(p, tail))
    return frozenset(out)


def gt_omega(ctx: GameContext, g: GameType, cfg: RunConfig = DEFAULT,
             ) -> GameType:
    """Antichain of a segment repeated omega many times."""
    return gt_omega_of(ctx, [g], 0, cfg)


gt_times_omega = gt_omega


# ---------------------------------------------------------------------------
# stabilization of the omega powers and the ordinal fold


@dataclass(frozen=True)
class StabilizationInfo:
    """Everything the ordinal fold needs, computed once per game.

    `tower[e]` is the antichain of a length omega^e segment; at exponent
    `m` the tower reaches its fixpoint and every higher power, including
    the omega-th one, equals `tower[m]` (the `limit` field is computed
    independently through the staged proposal game and checked against
    it).  For each exponent below m the sequence of coefficient folds
    j -> antichain(omega^e times j) is eventually periodic; `coeff_seq[e]`
    stores it up to one full period past the lag."""

    role: str
    tower: tuple
    m: int
    limit: GameType
    coeff_lag: tuple
    coeff_period: tuple
    coeff_seq: tuple

    def power(self, e: int) -> GameType:
        return self.tower[min(e, self.m)]

    def trun(self, e: int, c: int) -> int:
        """Coefficient representative with the same game type."""
        q, p = self.coeff_lag[e], self.coeff_period[e]
        return c if c < q else q + ((c - q) % p)

    def coeff_value(self, e: int, c: int) -> GameType:
        if e >= self.m:
            return self.tower[self.m]
        return self.coeff_seq[e][self.trun(e, c) - 1]


def stabilize(ctx: GameContext, role: str,
              cfg: RunConfig = DEFAULT) -> StabilizationInfo:
    """Iterate the omega product to its fixpoint and record periodicities.

    The omega-power sequence of antichains reaches a fixpoint rather than
    a longer cycle; a repeat that skips back over distinct values would
    contradict the absorption of higher powers and is reported as an
    internal error rather than papered over.
    """
    tower = [ctx.round_type(role)]
    seen = {gcode(tower[0]): 0}
    while True:
        if len(tower) > cfg.max_stabilize:
            raise ResourceLimit("omega power tower does not stabilize",
                                "%d levels computed" % len(tower))
        nxt = gt_omega(ctx, tower[-1], cfg)
        key = gcode(nxt)
        if key in seen:
            if seen[key] != len(tower) - 1:
                raise AssertionError("omega powers cycled without a fixpoint")
            m = len(tower) - 1
            break
        seen[key] = len(tower)
        tower.append(nxt)
    limit = gt_omega_of(ctx, tower, m, cfg)
    if gcode(limit) != gcode(tower[m]):
        raise AssertionError("limit antichain disagrees with the fixpoint")
    lags = []
    periods = []
    seqs = []
    for e in range(m):
        seq = [tower[e]]
        idx = {gcode(tower[e]): 1}
        while True:
            if len(seq) > cfg.max_periodicity:
                raise ResourceLimit("coefficient folds do not cycle",
                                    "%d folds at exponent %d" % (len(seq), e))
            nxt = gt_add(ctx, seq[-1], tower[e], cfg)
            key = gcode(nxt)
            j = len(seq) + 1
            if key in idx:
                q = idx[key]
                lags.append(q)
                periods.append(j - q)
                break
            idx[key] = j
            seq.append(nxt)
        seqs.append(tuple(seq))
    lags.append(1)
    periods.append(1)
    seqs.append((tower[m],))
    return StabilizationInfo(role, tuple(tower[:m + 1]), m, limit,
                             tuple(lags), tuple(periods), tuple(seqs))


def ordinal_game_type(ctx: GameContext, stab: StabilizationInfo,
                      alpha: Ordinal, cfg: RunConfig = DEFAULT,
                      literal: bool = False) -> GameType:
    """Antichain of the full game of length alpha (positive ordinals).

    Normally the fixpoint absorbs the leading limit block and every
    coefficient at or above the stable exponent; with `literal` those
    shortcuts are skipped and the copies are folded out one by one, which
    lets callers confirm both routes agree.
    """
    if alpha.is_zero:
        raise GameValueError("the empty game has no rounds")
    parts = []
    if alpha.limit_part:
        if literal:
            parts.append(gt_power(ctx, stab.limit, alpha.limit_part, cfg))
        else:
            parts.append(stab.limit)
    for e, c in alpha.terms:
        if literal:
            parts.append(gt_power(ctx, stab.power(e), c, cfg))
        else:
            parts.append(stab.coeff_value(e, c))
    out = parts[0]
    for g in parts[1:]:
        out = gt_add(ctx, out, g, cfg)
    return out


def forced_win_sets(g: GameType, win: frozenset, role: str) -> list:
    """Antichain members that settle the game for the role's player."""
    if role == "I":
        return [m for m in g if m <= win]
    return [m for m in g if not (m & win)]


def decide_from_types(ctx: GameContext, stab: StabilizationInfo,
                      alpha: Ordinal, cfg: RunConfig = DEFAULT) -> str:
    g = ordinal_game_type(ctx, stab, alpha, cfg)
    return "I" if forced_win_sets(g, ctx.sg.win, "I") else "II"


# ---------------------------------------------------------------------------
# ordinal codes relative to a stabilization


def gcode_of(alpha: Ordinal, stab: StabilizationInfo) -> tuple:
    """Game code: the flag absorbs everything at or above the stable
    exponent, lower digits are truncated into their periodic range."""
    if alpha.is_zero:
        raise GameValueError("the zero ordinal has no game code")
    m = stab.m
    flag = 1 if alpha.limit_part or any(e >= m for e, _ in alpha.terms) else 0
    digits = []
    coeff = {e: c for e, c in alpha.terms}
    for e in range(m - 1, -1, -1):
        digits.append(stab.trun(e, coeff.get(e, 0)) if coeff.get(e, 0) else 0)
    return (flag,) + tuple(digits)


def gcode_domain(stab: StabilizationInfo) -> list:
    """Every realizable game code, in lexicographic order."""
    m = stab.m
    ranges = [range(stab.coeff_lag[e] + stab.coeff_period[e])
              for e in range(m - 1, -1, -1)]
    out = []
    for flag in (0, 1):
        for digits in itertools.product(*ranges):
            if flag == 0 and not any(digits):
                continue
            out.append((flag,) + digits)
    return out


def ordinal_with_gcode(code: tuple, stab: StabilizationInfo) -> Ordinal:
    """A smallest ordinal whose game code is the given one."""
    flag = code[0]
    digits = code[1:]
    terms = []
    if flag:
        terms.append((stab.m, 1))
    for i, d in enumerate(digits):
        if d:
            terms.append((stab.m - 1 - i, d))
    return Ordinal(0, tuple(terms))
