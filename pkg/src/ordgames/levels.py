"""Per-formula finite algebras built one quantifier level at a time.

Games over plays of arbitrary countable length only ever inspect a play
segment through a bounded stack of quantifiers.  The raw space of segment
types explodes doubly exponentially with that stack, but almost none of
the distinctions matter to any one formula.  This module therefore works
upward one quantifier at a time: build the carrier for the innermost
level, collapse it to the blocks of its syntactic congruence, and use
those blocks as the alphabet of facts for the level above.  Each level
stays small even when the raw type space does not.

The output is a `LevelMap`: a finite addition table with a constant-omega
row, the block of every one-position letter, and one winning block set per
tracked formula.  Addition describes concatenation of play segments, the
omega row describes repeating a segment forever, and the winning sets say
on which segments each tracked formula holds.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import RunConfig, DEFAULT
from .errors import ResourceLimit
from .formulas import (KAtom, KNot, KAnd, KOr, KNode, KernelFormula,
                       kernel_depth)
from .typealg import TypeTable, letter_types


@dataclass(frozen=True)
class LevelMap:
    """Blocks of play-segment behaviour at one quantifier level.

    `add` is row-major over block ids, `omega` maps each block to the
    block of its infinite repetition, `letters` maps each one-position bit
    vector to its block, and `wins[i]` is the winning block set of the
    i-th tracked kernel.
    """

    width: int
    size: int
    add: tuple
    omega: tuple
    letters: dict
    wins: tuple

    def plus(self, a: int, b: int) -> int:
        return self.add[a * self.size + b]

    def is_idempotent(self, a: int) -> bool:
        return self.plus(a, a) == a

    def idempotent_power(self, a: int) -> int:
        seen = {a}
        cur = a
        while True:
            cur = self.plus(cur, a)
            if self.plus(cur, cur) == cur:
                return cur
            if cur in seen:
                raise AssertionError("power cycle without idempotent")
            seen.add(cur)

    def fold(self, blocks: Iterable[int]) -> int:
        it = iter(blocks)
        try:
            acc = next(it)
        except StopIteration:
            raise ValueError("cannot fold an empty segment")
        for b in it:
            acc = self.plus(acc, b)
        return acc

    def word_block(self, word) -> int:
        return self.fold(self.letters[tuple(bits)] for bits in word)


def _skeleton_bodies(roots: Iterable[KNode]) -> list:
    """Outermost quantified subtrees across all roots, deduplicated."""
    out = []
    seen = set()

    def walk(node):
        if isinstance(node, KAtom):
            return
        if isinstance(node, KNot):
            walk(node.sub)
        elif isinstance(node, (KAnd, KOr)):
            walk(node.left)
            walk(node.right)
        else:
            if node.body not in seen:
                seen.add(node.body)
                out.append(node.body)

    for r in roots:
        walk(r)
    return out


def _eval_skeleton(root: KNode, atom_fn, ex_fn) -> bool:
    """Evaluate boolean structure; atoms and quantified subtrees via hooks."""
    if isinstance(root, KAtom):
        return atom_fn(root)
    if isinstance(root, KNot):
        return not _eval_skeleton(root.sub, atom_fn, ex_fn)
    if isinstance(root, KAnd):
        return (_eval_skeleton(root.left, atom_fn, ex_fn)
                and _eval_skeleton(root.right, atom_fn, ex_fn))
    if isinstance(root, KOr):
        return (_eval_skeleton(root.left, atom_fn, ex_fn)
                or _eval_skeleton(root.right, atom_fn, ex_fn))
    return ex_fn(root)


def _atom_value(table: TypeTable, d0: int, atom: KAtom) -> bool:
    sizes, sub, bef = table.d0_of(d0)
    w = len(sizes)
    i = atom.i - 1
    if atom.kind == "sub":
        return bool(sub >> (i * w + atom.j - 1) & 1)
    if atom.kind == "before":
        return bool(bef >> (i * w + atom.j - 1) & 1)
    if atom.kind == "empty":
        return sizes[i] == 0
    return sizes[i] == 1


def _close_under_add(gens, add_fn, cap, what):
    """Sub-semigroup generated by gens.  Every product is a left fold, so
    extending on the right by the generators reaches everything."""
    closure = set(gens)
    frontier = list(closure)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                z = add_fn(x, g)
                if z not in closure:
                    closure.add(z)
                    nxt.append(z)
        if len(closure) > cap:
            raise ResourceLimit("closure too large",
                                "%d %s" % (len(closure), what))
        frontier = nxt
    return closure


def _close_level(lets, add_fn, omega_fn, cap, what, sort_key):
    """Close the letters under addition and constant-omega sums.

    Returns the closure and the generator list (letters plus every omega
    value that was not already a product); the closure is exactly the set
    of products over those generators.
    """
    gens = list(dict.fromkeys(lets))
    while True:
        closure = _close_under_add(gens, add_fn, cap, what)
        new = sorted({omega_fn(x) for x in closure} - closure, key=sort_key)
        if not new:
            return closure, gens
        gens.extend(new)


def _congruence(order, index, add_fn, omega_fn, generators, init) -> np.ndarray:
    """Coarsest refinement of the `init` partition that is a two-sided
    congruence for the generators and respects the constant-omega map."""
    n = len(order)
    right = [np.fromiter((index[add_fn(x, g)] for x in order), np.int32, n)
             for g in generators]
    left = [np.fromiter((index[add_fn(g, x)] for x in order), np.int32, n)
            for g in generators]
    omega_row = np.fromiter((index[omega_fn(x)] for x in order), np.int32, n)
    block = init.astype(np.int32)
    count = int(block.max()) + 1 if n else 0
    while True:
        cols = [block, block[omega_row]]
        cols.extend(block[r] for r in right)
        cols.extend(block[l] for l in left)
        sig = np.column_stack(cols)
        _, inverse = np.unique(sig, axis=0, return_inverse=True)
        new_count = int(inverse.max()) + 1
        if new_count == count:
            break
        block = inverse.astype(np.int32)
        count = new_count
    remap = {}
    final = np.empty(n, np.int32)
    for i in range(n):
        b = int(block[i])
        if b not in remap:
            remap[b] = len(remap)
        final[i] = remap[b]
    return final


def _finish_level(width, order, index, add_fn, omega_fn, generators,
                  win_flags, letter_map) -> LevelMap:
    """Quotient a closed carrier and package the block tables."""
    sigmap = {}
    init = np.fromiter(
        (sigmap.setdefault(tuple(flags[i] for flags in win_flags),
                           len(sigmap))
         for i in range(len(order))), np.int64, len(order))
    final = _congruence(order, index, add_fn, omega_fn, generators, init)
    count = int(final.max()) + 1 if len(order) else 0
    rep = [None] * count
    for i, x in enumerate(order):
        if rep[final[i]] is None:
            rep[final[i]] = x
    blk = {x: int(final[i]) for i, x in enumerate(order)}
    add = [0] * (count * count)
    for a in range(count):
        for b in range(count):
            add[a * count + b] = blk[add_fn(rep[a], rep[b])]
    omega = tuple(blk[omega_fn(rep[a])] for a in range(count))
    letters = {bits: blk[x] for bits, x in letter_map.items()}
    wins = tuple(frozenset(int(final[i]) for i in range(len(order))
                           if flags[i])
                 for flags in win_flags)
    return LevelMap(width, count, tuple(add), omega, letters, wins)


def _ground_level(table: TypeTable, roots: tuple, width: int,
                  cfg: RunConfig) -> LevelMap:
    """Quantifier-free level: carrier is the raw one-level closure."""
    letter_map = letter_types(table, 0, width)
    lets = sorted(set(letter_map.values()))
    closure, gens = _close_level(lets, table.add, table.omega_const,
                                 cfg.max_closure,
                                 "elements at width %d" % width,
                                 lambda t: t)
    order = sorted(closure)
    index = {t: i for i, t in enumerate(order)}
    win_flags = []
    for r in roots:
        memo = {}
        win_flags.append([_eval_d0(table, t, r, memo) for t in order])
    return _finish_level(width, order, index, table.add, table.omega_const,
                         gens, win_flags, letter_map)


def _eval_d0(table, t, root, memo) -> bool:
    r = memo.get(t)
    if r is None:
        def atom(a):
            return _atom_value(table, t, a)

        def ex(node):
            raise AssertionError("quantifier in a depth-0 kernel")

        r = _eval_skeleton(root, atom, ex)
        memo[t] = r
    return r


def build_level(table: TypeTable, roots, width: int,
                cfg: RunConfig = DEFAULT) -> LevelMap:
    """Blocks for all tracked kernels at once, built bottom up.

    `roots` is a sequence of kernel nodes over `width` free slots.  The
    inner levels are shared across all of them, so tracking the several
    formulas of one game costs little more than tracking one.
    """
    roots = tuple(roots)
    depth = max((kernel_depth(r) for r in roots), default=0)
    if depth == 0:
        return _ground_level(table, roots, width, cfg)
    bodies = _skeleton_bodies(roots)
    sub = build_level(table, tuple(bodies), width + 1, cfg)
    body_win = {b: sub.wins[i] for i, b in enumerate(bodies)}
    n = sub.size
    sub_add = sub.add

    # profiles pair the quantifier-free facts of a segment with the set of
    # one-slot expansion blocks it can realise
    def padd(x, y):
        (da, sa), (db, sb) = x, y
        s = frozenset(sub_add[a * n + b] for a in sa for b in sb)
        return (table.add(da, db), s)

    omega_memo = {}

    def pomega(x):
        d, sa = x
        tail = omega_memo.get(sa)
        if tail is None:
            # expansions of an infinite repetition pick one expansion per
            # copy independently, so the realisable blocks are all values
            # prefix + omega-power over the additive closure of sa
            closed = _close_under_add(sa, lambda a, b: sub_add[a * n + b],
                                      n + 1, "blocks")
            tails = {sub.omega[e] for e in closed if sub_add[e * n + e] == e}
            vals = set(tails)
            for p in closed:
                for t in tails:
                    vals.add(sub_add[p * n + t])
            tail = frozenset(vals)
            omega_memo[sa] = tail
        return (table.omega_const(d), tail)

    letter_map = {}
    for code in range(1 << width):
        bits = tuple(code >> i & 1 for i in range(width))
        blocks = frozenset({sub.letters[bits + (0,)],
                            sub.letters[bits + (1,)]})
        letter_map[bits] = (table.letter(0, width, bits), blocks)

    def sort_key(x):
        return (x[0], sorted(x[1]))

    closure, gens = _close_level(list(letter_map.values()), padd, pomega,
                                 cfg.max_closure,
                                 "profiles at width %d" % width, sort_key)
    order = sorted(closure, key=sort_key)
    index = {x: i for i, x in enumerate(order)}
    win_flags = []
    for r in roots:
        flags = []
        for d, sa in order:
            def atom(a, d=d):
                return _atom_value(table, d, a)

            def ex(node, sa=sa):
                w = body_win[node.body]
                return any(b in w for b in sa)

            flags.append(_eval_skeleton(r, atom, ex))
        win_flags.append(flags)
    return _finish_level(width, order, index, padd, pomega, gens,
                         win_flags, letter_map)


def formula_level(table: TypeTable, kf: KernelFormula,
                  cfg: RunConfig = DEFAULT) -> LevelMap:
    """The block algebra of a single kernel formula."""
    return build_level(table, (kf.root,), kf.l, cfg)


# ---------------------------------------------------------------------------
# ordinal chains at block level


def block_chain_value(level: LevelMap, limit_part: int, terms) -> int:
    """Block of the all-zero-bits chain of a given ordinal shape.

    `terms` are (exponent, coefficient) pairs in decreasing exponent
    order; `limit_part` counts leading copies of the omega-th omega power.
    Widths above zero work too: the single letter used is all zero bits.
    """
    one = level.letters[(0,) * level.width]
    parts = []
    if limit_part:
        parts.append(_power_block(level, _limit_block(level, one), limit_part))
    for e, c in terms:
        base = one
        for _ in range(e):
            base = level.omega[base]
        parts.append(_power_block(level, base, c))
    if not parts:
        raise ValueError("zero ordinal has no chain value")
    acc = parts[0]
    for p in parts[1:]:
        acc = level.plus(acc, p)
    return acc


def _limit_block(level: LevelMap, one: int) -> int:
    """Block of the chain summing every finite omega power in order.

    The omega-power tower over a finite block algebra is eventually
    periodic; the sum splits into the pre-periodic prefix followed by an
    infinite repetition of one period's combined block.
    """
    seen = {}
    seq = []
    cur = one
    while cur not in seen:
        seen[cur] = len(seq)
        seq.append(cur)
        cur = level.omega[cur]
    start = seen[cur]
    acc = None
    for b in seq[:start]:
        acc = b if acc is None else level.plus(acc, b)
    cyc = None
    for b in seq[start:]:
        cyc = b if cyc is None else level.plus(cyc, b)
    tail = level.omega[cyc]
    return tail if acc is None else level.plus(acc, tail)


def _power_block(level: LevelMap, b: int, c: int) -> int:
    """c-fold sum of a block, jumping over the cycle for huge c."""
    if c <= 0:
        raise ValueError("coefficient must be positive")
    seen = {b: 1}
    seq = [None, b]
    cur = b
    k = 1
    while k < c:
        cur = level.plus(cur, b)
        k += 1
        if cur in seen:
            start = seen[cur]
            cycle = k - start
            rem = start + ((c - start) % cycle)
            return seq[rem]
        seen[cur] = k
        seq.append(cur)
    return cur
