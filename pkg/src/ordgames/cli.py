"""Command-line surface for the ordinal game engine.

Subcommands: decide, mth, synth, verify, atlas, reduce, search, play.
Exit status 0 on success, 1 on usage or input errors, 2 on a resource
limit.  `--json` switches every subcommand to one machine-readable JSON
object on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from functools import lru_cache

from .config import DEFAULT, RunConfig
from .engine import (Engine, decide, decide_sentence, omega_game,
                     winning_code_atlas)
from .errors import GameValueError, OrdgamesError, ResourceLimit, StrategyError
from .finite import FiniteChain, eval_kernel, solve_finite_game
from .formulas import render
from .ordinals import format_ordinal, from_finite, parse_ordinal
from .report import atlas_tsv, code_literal, write_atlas_report
from .synthesis import (reduce_to_omega_omega, search_definable_strategy,
                        synthesize, tree_from_doc, tree_to_doc,
                        verify_strategy_tree)

STRATEGY_SCHEMA = "ordgames-strategy-v1"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--max-types", type=int, metavar="N",
                        help="cap on the type table size")
    shared.add_argument("--max-states", type=int, metavar="N",
                        help="cap on automaton state counts")
    shared.add_argument("--seed", type=int, metavar="N",
                        help="seed for sampled checks")
    shared.add_argument("--json", action="store_true",
                        help="machine-readable output")

    top = _Parser(prog="ordgames",
                  description="Decide and synthesize ordinal-length "
                              "two-player bit games.")
    sub = top.add_subparsers(dest="command", required=True,
                             parser_class=_Parser)

    def command(name, help_text, **kwargs):
        p = sub.add_parser(name, parents=[shared], help=help_text, **kwargs)
        return p

    p = command("decide", "winner of the game at an ordinal")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="winning condition over X1, X2")
    src.add_argument("--file", help="file holding the condition")
    p.add_argument("--ordinal", required=True, help="game length")
    p.set_defaults(handler=_cmd_decide)

    p = command("mth", "truth of a sentence in a chain's monadic theory")
    p.add_argument("--sentence", required=True)
    p.add_argument("--ordinal", required=True)
    p.set_defaults(handler=_cmd_mth)

    p = command("synth", "synthesize a structured winning strategy")
    p.add_argument("--expr", required=True)
    p.add_argument("--ordinal", required=True)
    p.add_argument("--out", required=True, help="strategy document path")
    p.set_defaults(handler=_cmd_synth)

    p = command("verify", "re-check a strategy document from scratch")
    p.add_argument("--strategy", required=True, help="strategy document path")
    p.add_argument("--expr", required=True)
    p.add_argument("--ordinal", required=True)
    p.set_defaults(handler=_cmd_verify)

    p = command("atlas", "winner for every game code of a condition")
    p.add_argument("--expr", required=True)
    p.add_argument("--out", help="write the table here plus a figure "
                                 "alongside it")
    p.set_defaults(handler=_cmd_atlas)

    p = command("reduce", "restate a long game as an w^w game")
    p.add_argument("--expr", required=True)
    p.add_argument("--ordinal", required=True)
    p.set_defaults(handler=_cmd_reduce)

    p = command("search", "look for a formula-defined strategy")
    p.add_argument("--expr", required=True)
    p.add_argument("--ordinal", required=True)
    p.add_argument("--budget", type=int, required=True,
                   help="number of candidates to test")
    p.set_defaults(handler=_cmd_search)

    p = command("play", "play against the engine at the terminal")
    p.add_argument("--expr", required=True)
    p.add_argument("--length", type=int, required=True,
                   help="rounds to play")
    p.add_argument("--as", dest="side", choices=("I", "II"), required=True,
                   help="the side you play")
    p.add_argument("--ordinal", help="full game length when playing a "
                                     "bounded prefix of a longer game")
    p.set_defaults(handler=_cmd_play)
    return top


def _config(args) -> RunConfig:
    cfg = DEFAULT
    if args.max_types is not None:
        cfg = replace(cfg, max_types=args.max_types)
    if args.max_states is not None:
        cfg = replace(cfg, max_states=args.max_states)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.json:
        cfg = replace(cfg, json_output=True)
    return cfg


def _emit(args, payload: dict, lines) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _formula_text(args) -> str:
    if getattr(args, "file", None):
        with open(args.file) as fh:
            return fh.read().strip()
    return args.expr


# ---------------------------------------------------------------------------
# subcommands


def _cmd_decide(args) -> int:
    eng = Engine(_config(args))
    view = eng.view(_formula_text(args))
    alpha = parse_ordinal(args.ordinal)
    d = decide(view, alpha)
    _emit(args,
          {"command": "decide", "formula": view.source,
           "ordinal": format_ordinal(alpha), "winner": d.winner,
           "method": d.method},
          ["winner: %s" % d.winner,
           "ordinal: %s" % format_ordinal(alpha),
           "method: %s" % d.method])
    return 0


def _cmd_mth(args) -> int:
    eng = Engine(_config(args))
    alpha = parse_ordinal(args.ordinal)
    holds = decide_sentence(eng, args.sentence, alpha)
    _emit(args,
          {"command": "mth", "sentence": args.sentence,
           "ordinal": format_ordinal(alpha), "holds": holds},
          ["holds: %s" % ("true" if holds else "false")])
    return 0


def _cmd_synth(args) -> int:
    eng = Engine(_config(args))
    view = eng.view(args.expr)
    alpha = parse_ordinal(args.ordinal)
    winner, tree = synthesize(view, alpha)
    doc = {"schema": STRATEGY_SCHEMA, "formula": view.source,
           "ordinal": format_ordinal(alpha), "player": winner,
           "tree": tree_to_doc(tree)}
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    _emit(args,
          {"command": "synth", "formula": view.source,
           "ordinal": format_ordinal(alpha), "winner": winner,
           "out": args.out},
          ["winner: %s" % winner, "strategy: %s" % args.out])
    return 0


def _load_strategy(path: str):
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise StrategyError("strategy document must be a JSON object")
    body = doc.get("tree", doc)
    try:
        return tree_from_doc(body), doc
    except (KeyError, ValueError, TypeError) as exc:
        raise StrategyError("malformed strategy document: %s" % exc)


def _cmd_verify(args) -> int:
    eng = Engine(_config(args))
    view = eng.view(args.expr)
    alpha = parse_ordinal(args.ordinal)
    tree, _doc = _load_strategy(args.strategy)
    report = verify_strategy_tree(view, tree, alpha)
    failures = report.failures()
    lines = ["obligations: %d" % len(report.obligations)]
    for f in failures:
        lines.append("FAIL %s %s: %s" % (f.path, f.kind, f.detail))
    lines.append("verified: %s" % ("true" if report.ok else "false"))
    _emit(args,
          {"command": "verify", "formula": view.source,
           "ordinal": format_ordinal(alpha), "ok": report.ok,
           "obligations": len(report.obligations),
           "failures": [{"path": f.path, "kind": f.kind, "detail": f.detail}
                        for f in failures]},
          lines)
    return 0


def _cmd_atlas(args) -> int:
    eng = Engine(_config(args))
    view = eng.view(args.expr)
    atlas = winning_code_atlas(view)
    payload = {"command": "atlas", "formula": atlas.formula,
               "stable_exponent": atlas.stable_exponent,
               "rows": [{"code": code_literal(r.code),
                         "ordinal": format_ordinal(r.alpha),
                         "winner": r.winner} for r in atlas.rows]}
    if args.out:
        table, figure = write_atlas_report(atlas, args.out)
        payload["table"] = table
        payload["figure"] = figure
        _emit(args, payload,
              ["rows: %d" % len(atlas.rows), "table: %s" % table,
               "figure: %s" % figure])
    else:
        _emit(args, payload, [atlas_tsv(atlas).rstrip("\n")])
    return 0


def _cmd_reduce(args) -> int:
    eng = Engine(_config(args))
    view = eng.view(args.expr)
    alpha = parse_ordinal(args.ordinal)
    red = reduce_to_omega_omega(view, alpha)
    _emit(args,
          {"command": "reduce", "formula": view.source,
           "ordinal": format_ordinal(alpha),
           "tail": format_ordinal(red.beta),
           "blocks": sorted(red.winset), "characterizer": red.text,
           "winner": red.winner_full, "reduced_winner": red.winner_reduced,
           "consistent": red.consistent},
          ["tail: %s" % format_ordinal(red.beta),
           "blocks: %s" % (",".join(map(str, sorted(red.winset))) or "-"),
           "characterizer: %s" % red.text,
           "winner: %s" % red.winner_full,
           "reduced winner: %s" % red.winner_reduced,
           "consistent: %s" % ("true" if red.consistent else "false")])
    return 0


def _cmd_search(args) -> int:
    eng = Engine(_config(args))
    view = eng.view(args.expr)
    alpha = parse_ordinal(args.ordinal)
    res = search_definable_strategy(view, alpha, args.budget)
    found = render(res.formula) if res.found else None
    lines = ["found: %s" % (found or "none"),
             "tested: %d" % res.tested,
             "skipped: %d" % len(res.skipped)]
    for psi, why in res.skipped[:3]:
        lines.append("  skipped %s: %s" % (psi, why))
    _emit(args,
          {"command": "search", "formula": view.source,
           "ordinal": format_ordinal(alpha), "found": found,
           "tested": res.tested,
           "skipped": [{"candidate": c, "reason": r}
                       for c, r in res.skipped]},
          lines)
    return 0


# ---------------------------------------------------------------------------
# interactive play


def _ask_bit(prompt: str, quiet_stdout: bool = False):
    out = sys.stderr if quiet_stdout else sys.stdout
    while True:
        out.write(prompt)
        out.flush()
        try:
            raw = input()
        except EOFError:
            return None
        raw = raw.strip().lower()
        if raw in ("q", "quit", "abort"):
            return None
        if raw in ("0", "1"):
            return int(raw)
        out.write("please answer 0 or 1 (q to abort)\n")


def _minimax_policy(view, k: int):
    """Fallback engine policy: play into a winning subtree when one
    exists, otherwise the smaller bit."""
    level = view.level()
    letters = dict(level.letters)
    win = frozenset(level.wins[0])

    @lru_cache(maxsize=None)
    def val(acc, r):
        if r == k:
            return acc in win
        return any(all(val(_fold(level, acc, letters[(a, b)]), r + 1)
                       for b in (0, 1))
                   for a in (0, 1))

    def move_i(acc, r):
        for a in (0, 1):
            if all(val(_fold(level, acc, letters[(a, b)]), r + 1)
                   for b in (0, 1)):
                return a
        return 0

    def move_ii(acc, r, a):
        for b in (0, 1):
            if not val(_fold(level, acc, letters[(a, b)]), r + 1):
                return b
        return 0

    return move_i, move_ii


def _fold(level, acc, block):
    return block if acc is None else level.plus(acc, block)


def _cmd_play(args) -> int:
    cfg = _config(args)
    eng = Engine(cfg)
    view = eng.view(args.expr)
    k = args.length
    if k < 1:
        raise GameValueError("need at least one round")
    if k > cfg.max_game_rounds:
        raise GameValueError("interactive play is capped at %d rounds"
                             % cfg.max_game_rounds)
    human = args.side
    engine_side = "II" if human == "I" else "I"
    full = parse_ordinal(args.ordinal) if args.ordinal else from_finite(k)
    prefix_only = not full.is_finite
    if not prefix_only and full.finite_value() != k:
        raise GameValueError("--length must match the finite --ordinal")

    level = view.level()
    letters = dict(level.letters)
    machine = None
    mstate = None
    table = None
    note = None
    if prefix_only:
        omega_result = omega_game(view)
        if omega_result.winner == engine_side:
            machine = omega_result.machine
            mstate = machine.initial
        else:
            note = ("the engine does not win the full game as %s; it plays "
                    "the %d-round policy as a demo" % (engine_side, k))
    else:
        winner, tbl = solve_finite_game(view.kf, k, cfg)
        if winner == engine_side:
            table = tbl
        else:
            note = ("you play the winning side; the engine plays its "
                    "best-effort policy")
    move_i, move_ii = _minimax_policy(view, k)
    if note and not args.json:
        print(note)

    rounds = []
    acc = None
    aborted = False
    i_bits = []
    ii_bits = []
    for r in range(k):
        # player I moves first
        if human == "I":
            a = _ask_bit("round %d, your bit for X1 (0/1, q to abort): " % r, args.json)
            if a is None:
                aborted = True
                break
        else:
            if machine is not None and machine.role == "opener":
                a = machine.opening_move(mstate)
            elif table is not None:
                a = table.move(tuple(ii_bits))
            else:
                a = move_i(acc, r)
            if not args.json:
                print("round %d: engine (I) plays %d" % (r, a))
        # player II answers
        if human == "II":
            b = _ask_bit("round %d, your bit for X2 (0/1, q to abort): " % r, args.json)
            if b is None:
                aborted = True
                break
        else:
            if machine is not None and machine.role == "responder":
                b, mstate = machine.respond(mstate, a)
            elif table is not None:
                b = table.move(tuple(i_bits) + (a,))
            else:
                b = move_ii(acc, r, a)
            if not args.json:
                print("round %d: engine (II) plays %d" % (r, b))
        if machine is not None and machine.role == "opener":
            mstate = machine.after(mstate, b)
        i_bits.append(a)
        ii_bits.append(b)
        rounds.append((a, b))
        acc = _fold(level, acc, letters[(a, b)])

    payload = {"command": "play", "formula": view.source,
               "length": format_ordinal(full), "side": human,
               "rounds": [list(rd) for rd in rounds],
               "aborted": aborted}
    lines = ["transcript: %s" %
             " ".join("%d%d" % rd for rd in rounds)]
    if aborted:
        payload["verdict"] = None
        lines.append("aborted: yes")
    elif prefix_only:
        payload["verdict"] = None
        payload["horizon"] = k
        lines.append("horizon: %d rounds of a length-%s game; this is a "
                     "horizon, not a verdict" % (k, format_ordinal(full)))
    else:
        chain = FiniteChain(k, (frozenset(i for i, rd in enumerate(rounds)
                                          if rd[0]),
                                frozenset(i for i, rd in enumerate(rounds)
                                          if rd[1])))
        holds = eval_kernel(view.kf, chain, cfg)
        verdict = "I" if holds else "II"
        payload["verdict"] = verdict
        lines.append("condition %s" % ("holds" if holds else "fails"))
        lines.append("verdict: %s wins" % verdict)
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# entry point


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ResourceLimit as exc:
        print("resource limit: %s" % exc, file=sys.stderr)
        return 2
    except OrdgamesError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
