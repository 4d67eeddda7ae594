"""Shared caches and the top-level decision pipeline.

An Engine holds one type table and hands every winning condition a view
that lazily builds the formula's block algebra, the game context over it,
and the stabilized omega-power antichains.  All of it is cached on the
view, so repeated questions about one formula pay the construction cost
once.

Deciding who wins the bit game of length alpha then has three disjoint
paths: empty plays are evaluated directly, finite lengths go through
backward induction over blocks, and infinite lengths fold the ordinal's
normal form over the antichain calculus.  The finite-length path shares
no game logic with the brute-force minimax over play trees, which is what
makes their agreement a real check rather than an identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .config import DEFAULT, RunConfig
from .errors import GameValueError, ResourceLimit
from .finite import FiniteChain, eval_kernel
from .formulas import Formula, KernelFormula, parse_formula, render, to_kernel
from .gametypes import (GameContext, StabilizationInfo, decide_from_types,
                        forced_win_sets, gcode_domain, gcode_of,
                        ordinal_game_type, ordinal_with_gcode, stabilize)
from .levels import LevelMap, block_chain_value, build_level, formula_level
from .omega import OmegaGameResult, Semigroup, solve_omega_bit_game
from .ordinals import Ordinal, format_ordinal, parse_ordinal
from .typealg import TypeTable

GROUND_WIDTH_CAP = 4       # the quantifier-free closure fits up to here


class Engine:
    """One type table, one cached view per formula."""

    def __init__(self, cfg: RunConfig = DEFAULT):
        self.cfg = cfg
        self.table = TypeTable(cfg)
        self._views = {}
        self._sentence_levels = {}

    def view(self, formula: Union[str, Formula]) -> "FormulaView":
        surface = parse_formula(formula) if isinstance(formula, str) else formula
        kf = to_kernel(surface, 2)
        key = kf.root
        if key not in self._views:
            self._views[key] = FormulaView(self, surface, kf)
        return self._views[key]


@dataclass
class FormulaView:
    """Everything the solvers need for one winning condition."""

    engine: Engine
    surface: Formula
    kf: KernelFormula
    _level: Optional[LevelMap] = field(default=None, repr=False)
    _game: Optional[GameContext] = field(default=None, repr=False)
    _stabs: dict = field(default_factory=dict, repr=False)
    _finite_memo: dict = field(default_factory=dict, repr=False)

    @property
    def source(self) -> str:
        return render(self.surface)

    @property
    def depth(self) -> int:
        return self.kf.n

    def level(self) -> LevelMap:
        if self._level is None:
            if self.kf.l + self.kf.n > GROUND_WIDTH_CAP:
                raise ResourceLimit(
                    "blocks at quantifier depth %d are out of reach" % self.kf.n,
                    "the quantifier-free closure is only affordable up to "
                    "width %d" % GROUND_WIDTH_CAP)
            self._level = formula_level(self.engine.table, self.kf,
                                        self.engine.cfg)
        return self._level

    def game(self) -> GameContext:
        if self._game is None:
            self._game = GameContext(*level_semigroup(self.level()))
        return self._game

    def stab(self, role: str) -> StabilizationInfo:
        if role not in self._stabs:
            self._stabs[role] = stabilize(self.game(), role, self.engine.cfg)
        return self._stabs[role]

    def empty_play_holds(self) -> bool:
        chain = FiniteChain(0, (frozenset(), frozenset()))
        return eval_kernel(self.kf, chain, self.engine.cfg)


def level_semigroup(level: LevelMap):
    """The level's blocks as a plain semigroup plus the bit-pair letter
    map, ready for the game solvers."""
    sg = Semigroup(level.size, level.add, level.omega,
                   frozenset(level.wins[0]),
                   tuple("b%d" % i for i in range(level.size)))
    return sg, dict(level.letters)


# ---------------------------------------------------------------------------
# deciding the game


@dataclass(frozen=True)
class Decision:
    winner: str
    alpha: Ordinal
    method: str
    detail: str = ""

    def __str__(self):
        return "%s wins at %s (%s)" % (self.winner,
                                       format_ordinal(self.alpha), self.method)


def decide_finite_by_types(view: FormulaView, k: int) -> str:
    """Winner of the k-round game by backward induction over blocks.

    States are blocks of the bits emitted so far, not play histories, so
    the cost grows with the block count rather than 4^k.
    """
    if k < 1:
        raise GameValueError("need at least one round")
    level = view.level()
    letters = level.letters
    win = level.wins[0]
    memo = view._finite_memo

    def wins(b, r) -> bool:
        key = (b, r)
        if key in memo:
            return memo[key]
        if r == 0:
            out = b in win
        else:
            out = any(all(wins(letters[a, bb] if b is None
                               else level.plus(b, letters[a, bb]), r - 1)
                          for bb in (0, 1))
                      for a in (0, 1))
        memo[key] = out
        return out

    return "I" if wins(None, k) else "II"


def decide(view: FormulaView, alpha: Ordinal) -> Decision:
    """Winner of the bit game of length alpha for the view's condition."""
    if alpha.is_zero:
        winner = "I" if view.empty_play_holds() else "II"
        return Decision(winner, alpha, "empty-play")
    if alpha.is_finite:
        winner = decide_finite_by_types(view, alpha.finite_value())
        return Decision(winner, alpha, "finite-blocks")
    winner = decide_from_types(view.game(), view.stab("I"), alpha,
                               view.engine.cfg)
    return Decision(winner, alpha, "antichain",
                    "%d blocks" % view.level().size)


def omega_game(view: FormulaView) -> OmegaGameResult:
    """Winner and a finite-state strategy for the length-omega game."""
    sg, letters = level_semigroup(view.level())
    return solve_omega_bit_game(sg, letters, view.engine.cfg)


# ---------------------------------------------------------------------------
# sentences


def sentence_level(engine: Engine, formula: Union[str, Formula]) -> tuple:
    surface = parse_formula(formula) if isinstance(formula, str) else formula
    kf = to_kernel(surface, 0)
    key = kf.root
    if key not in engine._sentence_levels:
        if kf.n > GROUND_WIDTH_CAP:
            raise ResourceLimit(
                "sentence depth %d is out of reach" % kf.n,
                "the quantifier-free closure is only affordable up to "
                "width %d" % GROUND_WIDTH_CAP)
        engine._sentence_levels[key] = build_level(engine.table, (kf.root,),
                                                   0, engine.cfg)
    return engine._sentence_levels[key], kf


def decide_sentence(engine: Engine, formula: Union[str, Formula],
                    alpha: Ordinal) -> bool:
    """Truth of a sentence in the monadic theory of the chain alpha."""
    surface = parse_formula(formula) if isinstance(formula, str) else formula
    kf = to_kernel(surface, 0)
    if alpha.is_zero:
        return eval_kernel(kf, FiniteChain(0, ()), engine.cfg)
    level, kf = sentence_level(engine, surface)
    return block_chain_value(level, alpha.limit_part, alpha.terms) in level.wins[0]


# ---------------------------------------------------------------------------
# the winner atlas over game codes


@dataclass(frozen=True)
class AtlasRow:
    code: tuple
    alpha: Ordinal
    winner: str


@dataclass(frozen=True)
class Atlas:
    """Winner of the game at every game code.

    Two ordinals with the same code have the same winner, so the finite
    table below is the complete answer for all countable ordinals."""

    formula: str
    stable_exponent: int
    coeff_lag: tuple
    coeff_period: tuple
    rows: tuple

    def winner_of(self, code: tuple) -> str:
        for row in self.rows:
            if row.code == code:
                return row.winner
        raise KeyError(code)


def winning_code_atlas(view: FormulaView) -> Atlas:
    """Decide every game code once; the finite table covers all ordinals."""
    stab = view.stab("I")
    rows = []
    for code in gcode_domain(stab):
        rep = ordinal_with_gcode(code, stab)
        dec = decide(view, rep)
        rows.append(AtlasRow(code, rep, dec.winner))
    return Atlas(view.source, stab.m, stab.coeff_lag, stab.coeff_period,
                 tuple(rows))


_DEFAULT_ENGINE: Optional[Engine] = None


def default_engine() -> Engine:
    global _DEFAULT_ENGINE
    if _DEFAULT_ENGINE is None:
        _DEFAULT_ENGINE = Engine()
    return _DEFAULT_ENGINE
