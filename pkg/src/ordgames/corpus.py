"""The committed formula corpus used by the test suite and the demos.

Every entry is a winning condition over the two play sets X1 (player I's
bits) and X2 (player II's bits) whose kernel form has quantifier depth at
most two, so each fits the per-formula level pipeline.  Names are stable;
tests and reports key on them.
"""

from __future__ import annotations

CORPUS = (
    # quantifier-free conditions
    ("empty-i", "empty(X1)"),
    ("nonempty-i", "~ empty(X1)"),
    ("empty-ii", "empty(X2)"),
    ("nonempty-ii", "~ empty(X2)"),
    ("sing-i", "sing(X1)"),
    ("sing-ii", "sing(X2)"),
    ("subset-i-ii", "X1 sub X2"),
    ("subset-ii-i", "X2 sub X1"),
    ("equal-sets", "X1 sub X2 & X2 sub X1"),
    ("empty-agree", "empty(X1) <-> empty(X2)"),
    ("empty-flow", "empty(X1) -> empty(X2)"),
    ("chain-or", "X1 sub X2 | X2 sub X1"),
    ("sing-pair", "sing(X1) & sing(X2)"),
    # one quantifier
    ("copycat", "all1 t: (t in X1 <-> t in X2)"),
    ("negation-game", "all1 t: (t in X1 <-> ~(t in X2))"),
    ("all-ones-i", "all1 t: t in X1"),
    ("cover", "all1 t: (t in X1 | t in X2)"),
    ("meet", "ex1 t: (t in X1 & t in X2)"),
    ("disjoint", "all1 t: ~(t in X1 & t in X2)"),
    ("gap-i", "ex1 t: ~(t in X1)"),
    ("witness-subset", "ex2 Y: (Y sub X1 & ~ empty(Y))"),
    # two quantifiers
    ("follow-up", "all1 t: (t in X2 -> ex1 s: (t < s & s in X1))"),
    ("limit-detector", "~(all1 t: ex1 s: (t < s & s in X2))"),
    ("cofinal-i", "all1 t: ex1 s: (t < s & s in X1)"),
    ("match-nonempty", "(ex1 t: t in X1) <-> (ex1 t: t in X2)"),
    ("first-one", "ex1 t: (t in X1 & ~ ex1 s: s < t)"),
    ("first-one-ii", "ex1 t: (t in X2 & ~ ex1 s: s < t)"),
    ("last-one", "ex1 t: (t in X1 & ~ ex1 s: t < s)"),
    ("has-max", "ex1 t: ~ ex1 s: t < s"),
    ("no-max", "all1 t: ex1 s: t < s"),
    ("echo-back", "all1 t: (t in X1 -> ex1 s: (s < t & s in X2))"),
    ("echo-forward", "all1 t: (t in X2 -> ex1 s: (s < t & s in X1))"),
    ("bounded-ii", "ex1 t: all1 s: (s in X2 -> s < t)"),
    ("ordered-pair", "ex1 t: ex1 s: (t < s & t in X1 & s in X2)"),
)

NAMES = tuple(name for name, _ in CORPUS)


def corpus_formula(name: str) -> str:
    for n, text in CORPUS:
        if n == name:
            return text
    raise KeyError("no corpus formula named %r" % name)
