"""Run-wide resource budgets and defaults.

Every closure-growing operation takes its limits from a RunConfig so the
engine degrades predictably instead of hanging: interning, universe
closures, automaton construction and game solving all check their caps and
raise ResourceLimit with a progress note when exceeded.
"""

from dataclasses import dataclass


@dataclass
class RunConfig:
    # interning and closure caps
    max_types: int = 400_000          # total interned types
    max_universe: int = 60_000        # elements in one reachable universe
    max_closure: int = 60_000         # elements in any add-closure
    # automata and arena caps
    max_states: int = 250_000         # determinization state cap
    max_positions: int = 2_000_000    # parity arena positions
    # game-type caps
    max_antichain: int = 4_000        # minimal sets per game type
    max_candidates: int = 2_000_000   # gt_add choice functions per step
    max_stabilize: int = 40           # omega-power iterations before giving up
    max_periodicity: int = 2_000      # coefficient folds while hunting (lag, period)
    # finite-oracle caps
    max_chain: int = 6                # chain length for finite evaluation
    max_game_rounds: int = 6          # finite game length
    max_eval_work: int = 100_000_000  # 2^k * |f| budget for eval_finite
    # strategy caps
    max_segments: int = 48            # strategy tree segments per ordinal
    max_guard_patterns: int = 256     # prefix patterns per emitted branch guard
    # misc
    seed: int = 2026
    json_output: bool = False


DEFAULT = RunConfig()
