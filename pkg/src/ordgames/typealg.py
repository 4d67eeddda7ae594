"""Composable types of decorated linear orders.

A depth-0 type records, for a word with some set slots, each slot's size
class (0, 1, or 2 meaning two-or-more) and two relations over ordered slot
pairs: containment, and existence of an element of the first slot strictly
before an element of the second.  A depth-(d+1) type is the set of depth-d
types of all one-slot expansions.  These finitely many values compose: the
type of a concatenation is a function of the two types, and the type of an
omega-concatenation of a fixed additively idempotent type has a closed
form.  That is what lets finite computations settle games of infinite
length.

All types live interned in a TypeTable and are passed around as ints.
Raw type universes grow into the tens of thousands, so the game machinery
never touches them directly; it runs on the small quotient produced by
`syntactic_quotient`, the coarsest congruence that still tracks a fixed
winning set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import ResourceLimit
from .formulas import KAtom, KAnd, KernelFormula, KEx, KNot, KOr
from .ordinals import Ordinal

TypeId = int


class TypeTable:
    """Interning table plus memoized operations on type ids."""

    def __init__(self, cfg: RunConfig = DEFAULT):
        self.cfg = cfg
        self._ids = {}          # (depth, width, payload) -> id
        self._info = []         # id -> (depth, width, payload)
        self._add = {}
        self._drop = {}
        self._d0 = {}
        self._omega = {}
        self._idem_pow = {}
        self._letter = {}
        self._empty = {}
        self._local = {}        # (depth, width) -> {tid: bit index}
        self._rev = {}          # (depth, width) -> [tid]
        self._img = {}          # (side, generator, member) -> bitmask

    # -- interning ----------------------------------------------------------

    def intern(self, depth: int, width: int, payload) -> TypeId:
        key = (depth, width, payload)
        t = self._ids.get(key)
        if t is not None:
            return t
        if depth == 0:
            self._check_d0(width, payload)
        else:
            if not isinstance(payload, frozenset) or not payload:
                raise ValueError("depth>=1 payload must be a nonempty frozenset")
            for m in payload:
                d, w, _ = self._info[m]
                if d != depth - 1 or w != width + 1:
                    raise ValueError("member at (%d,%d), expected (%d,%d)"
                                     % (d, w, depth - 1, width + 1))
        if len(self._info) >= self.cfg.max_types:
            raise ResourceLimit("type table full",
                                "%d types interned" % len(self._info))
        t = len(self._info)
        self._ids[key] = t
        self._info.append(key)
        return t

    @staticmethod
    def _check_d0(width, payload):
        sizes, sub, before = payload
        if len(sizes) != width or any(s not in (0, 1, 2) for s in sizes):
            raise ValueError("bad size vector")
        for i in range(width):
            if not sub >> (i * width + i) & 1:
                raise ValueError("containment must be reflexive")
            if bool(before >> (i * width + i) & 1) != (sizes[i] >= 2):
                raise ValueError("diagonal precedence tracks size class")
            for j in range(width):
                if sizes[i] == 0 and not sub >> (i * width + j) & 1:
                    raise ValueError("the empty slot is contained everywhere")
                if before >> (i * width + j) & 1 and (sizes[i] == 0 or sizes[j] == 0):
                    raise ValueError("precedence needs both slots nonempty")

    def depth(self, t: TypeId) -> int:
        return self._info[t][0]

    def width(self, t: TypeId) -> int:
        return self._info[t][1]

    def payload(self, t: TypeId):
        return self._info[t][2]

    def members(self, t: TypeId) -> frozenset:
        d, _, p = self._info[t]
        if d == 0:
            raise ValueError("depth-0 types have no members")
        return p

    def __len__(self):
        return len(self._info)

    # -- basic constructors -------------------------------------------------

    def letter(self, depth: int, width: int, bits: tuple) -> TypeId:
        key = (depth, width, bits)
        t = self._letter.get(key)
        if t is not None:
            return t
        if len(bits) != width or any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0/1 of length width")
        if depth == 0:
            sub = 0
            for i in range(width):
                for j in range(width):
                    if not bits[i] or bits[j]:
                        sub |= 1 << (i * width + j)
            t = self.intern(0, width, (tuple(bits), sub, 0))
        else:
            ms = frozenset(self.letter(depth - 1, width + 1, bits + (b,))
                           for b in (0, 1))
            t = self.intern(depth, width, ms)
        self._letter[key] = t
        return t

    def empty(self, depth: int, width: int) -> TypeId:
        key = (depth, width)
        t = self._empty.get(key)
        if t is not None:
            return t
        if depth == 0:
            sub = (1 << width * width) - 1
            t = self.intern(0, width, ((0,) * width, sub, 0))
        else:
            t = self.intern(depth, width,
                            frozenset({self.empty(depth - 1, width + 1)}))
        self._empty[key] = t
        return t

    # -- composition --------------------------------------------------------

    def add(self, s: TypeId, t: TypeId) -> TypeId:
        key = (s, t)
        r = self._add.get(key)
        if r is not None:
            return r
        ds, ws, ps = self._info[s]
        dt, wt, pt = self._info[t]
        if (ds, ws) != (dt, wt):
            raise ValueError("cannot add types at (%d,%d) and (%d,%d)"
                             % (ds, ws, dt, wt))
        if ds == 0:
            sizes_s, sub_s, bef_s = ps
            sizes_t, sub_t, bef_t = pt
            w = ws
            sizes = tuple(min(2, a + b) for a, b in zip(sizes_s, sizes_t))
            sub = sub_s & sub_t
            bef = bef_s | bef_t
            for i in range(w):
                if sizes_s[i]:
                    for j in range(w):
                        if sizes_t[j]:
                            bef |= 1 << (i * w + j)
            r = self.intern(0, w, (sizes, sub, bef))
        else:
            ms = frozenset(self.add(a, b) for a in ps for b in pt)
            r = self.intern(ds, ws, ms)
        self._add[key] = r
        return r

    def fold_add(self, ts: Iterable[TypeId]) -> TypeId:
        out = None
        for t in ts:
            out = t if out is None else self.add(out, t)
        if out is None:
            raise ValueError("empty sum has no type here; use empty()")
        return out

    # -- fast extension by a designated generator ---------------------------

    def _member_bit(self, space, tid: TypeId) -> int:
        local = self._local.setdefault(space, {})
        idx = local.get(tid)
        if idx is None:
            idx = len(local)
            local[tid] = idx
            self._rev.setdefault(space, []).append(tid)
        return idx

    def _img_mask(self, side: str, g: TypeId, a: TypeId, space) -> int:
        key = (side, g, a)
        m = self._img.get(key)
        if m is None:
            m = 0
            if side == "r":
                for b in self.payload(g):
                    m |= 1 << self._member_bit(space, self.add(a, b))
            else:
                for b in self.payload(g):
                    m |= 1 << self._member_bit(space, self.add(b, a))
            self._img[key] = m
        return m

    def extend(self, x: TypeId, g: TypeId, right: bool = True) -> TypeId:
        """add(x, g) or add(g, x), tuned for a g reused across many x.

        Per-(g, member) images are cached as bitmasks, so each call costs
        |payload(x)| mask unions instead of |payload(x)| * |payload(g)| dict
        probes.  Results land in the plain add memo.
        """
        key = (x, g) if right else (g, x)
        r = self._add.get(key)
        if r is not None:
            return r
        d, w, px = self._info[x]
        if d == 0:
            return self.add(*key)
        side = "r" if right else "l"
        space = (d - 1, w + 1)
        mask = 0
        for a in px:
            mask |= self._img_mask(side, g, a, space)
        rev = self._rev[space]
        ms = []
        while mask:
            low = mask & -mask
            ms.append(rev[low.bit_length() - 1])
            mask ^= low
        r = self.intern(d, w, frozenset(ms))
        self._add[key] = r
        return r

    # -- slot bookkeeping ----------------------------------------------------

    def drop_slot(self, t: TypeId, slot: int) -> TypeId:
        """Forget slot `slot` (1-based); the result has one slot fewer."""
        key = (t, slot)
        r = self._drop.get(key)
        if r is not None:
            return r
        d, w, p = self._info[t]
        if not 1 <= slot <= w:
            raise ValueError("no slot %d at width %d" % (slot, w))
        if d == 0:
            sizes, sub, bef = p
            keep = [i for i in range(w) if i != slot - 1]
            nw = w - 1
            nsub = 0
            nbef = 0
            for a, i in enumerate(keep):
                for b, j in enumerate(keep):
                    if sub >> (i * w + j) & 1:
                        nsub |= 1 << (a * nw + b)
                    if bef >> (i * w + j) & 1:
                        nbef |= 1 << (a * nw + b)
            r = self.intern(0, nw, (tuple(sizes[i] for i in keep), nsub, nbef))
        else:
            r = self.intern(d, w - 1,
                            frozenset(self.drop_slot(m, slot) for m in p))
        self._drop[key] = r
        return r

    def proj(self, t: TypeId) -> TypeId:
        """The depth-(d-1) type of the same word."""
        d, w, p = self._info[t]
        if d == 0:
            raise ValueError("already at depth 0")
        member = min(p)
        return self.drop_slot(member, w + 1)

    def d0_of(self, t: TypeId) -> tuple:
        """Project all the way down; returns the depth-0 payload."""
        r = self._d0.get(t)
        if r is not None:
            return r
        cur = t
        while self.depth(cur) > 0:
            cur = self.proj(cur)
        r = self.payload(cur)
        self._d0[t] = r
        return r

    # -- omega sums ---------------------------------------------------------

    def is_idempotent(self, t: TypeId) -> bool:
        return self.add(t, t) == t

    def idempotent_power(self, t: TypeId) -> TypeId:
        r = self._idem_pow.get(t)
        if r is not None:
            return r
        seen = {t}
        seq = [t]
        cur = t
        while True:
            cur = self.add(cur, t)
            if cur in seen:
                break
            seen.add(cur)
            seq.append(cur)
            if len(seq) > self.cfg.max_periodicity:
                raise ResourceLimit("runaway power sequence",
                                    "%d multiples" % len(seq))
        r = next(e for e in seq if self.is_idempotent(e))
        self._idem_pow[t] = r
        return r

    def omega_idem(self, e: TypeId) -> TypeId:
        """Type of an omega-concatenation of segments all of type e."""
        r = self._omega.get(e)
        if r is not None:
            return r
        if not self.is_idempotent(e):
            raise ValueError("omega power needs an additively idempotent type")
        d, w, p = self._info[e]
        if d == 0:
            r = e
        else:
            r = self.intern(d, w, self.achievable(p))
        self._omega[e] = r
        return r

    def omega_const(self, t: TypeId) -> TypeId:
        """Type of t + t + t + ... (omega many copies)."""
        return self.omega_idem(self.idempotent_power(t))

    def add_closure(self, ts: Iterable[TypeId]) -> frozenset:
        """The sub-semigroup generated by ts: types of nonempty finite sums.

        Every finite sum is a left fold, so extending by the generators on
        the right reaches everything; no pairwise products needed.
        """
        gens = list(dict.fromkeys(ts))
        closure = set(gens)
        frontier = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    z = self.extend(x, g)
                    if z not in closure:
                        closure.add(z)
                        nxt.append(z)
            if len(closure) > self.cfg.max_closure:
                raise ResourceLimit("addition closure too large",
                                    "%d types" % len(closure))
            frontier = nxt
        return frozenset(closure)

    def achievable(self, ts: Iterable[TypeId]) -> frozenset:
        """All values of infinite (length omega) sums with summands from ts.

        By Ramsey factorization every such sum is p + (e + e + ...) with p a
        finite sum (possibly absent) and e an idempotent finite sum.
        """
        plus = self.add_closure(ts)
        idems = [e for e in plus if self.is_idempotent(e)]
        out = set()
        for e in idems:
            tail = self.omega_idem(e)
            out.add(tail)
            for pfx in plus:
                out.add(self.add(pfx, tail))
        return frozenset(out)

    # -- structural import/export ------------------------------------------

    def intern_structural(self, s, width: int) -> TypeId:
        if s[0] == "d0":
            _, sizes, sub, before = s
            if len(sizes) != width:
                raise ValueError("width mismatch")
            return self.intern(0, width, (tuple(sizes), sub, before))
        members = frozenset(self.intern_structural(m, width + 1) for m in s[1])
        depths = {self.depth(m) for m in members}
        if len(depths) != 1:
            raise ValueError("ragged structural type")
        return self.intern(depths.pop() + 1, width, members)

    def structural(self, t: TypeId):
        d, _, p = self._info[t]
        if d == 0:
            return ("d0",) + p
        return ("set", frozenset(self.structural(m) for m in p))


# ---------------------------------------------------------------------------
# words and formulas


def word_type(table: TypeTable, letters, depth: int,
              width: Optional[int] = None) -> TypeId:
    """Type of a finite word, by composing letter types (the homomorphism)."""
    letters = tuple(tuple(x) for x in letters)
    if width is None:
        if not letters:
            raise ValueError("width needed for the empty word")
        width = len(letters[0])
    if not letters:
        return table.empty(depth, width)
    return table.fold_add(table.letter(depth, width, x) for x in letters)


def enumerate_type(table: TypeTable, depth: int, width: int,
                   word) -> TypeId:
    """Type of a finite word at an explicit depth and width."""
    return word_type(table, word, depth, width)


def letter_type(table: TypeTable, depth: int, width: int,
                bits: tuple) -> TypeId:
    """Type of the one-position word whose sets are given by a bit vector."""
    return table.letter(depth, width, tuple(bits))


def omega_sum_const(table: TypeTable, t: TypeId) -> TypeId:
    """Type of t + t + t + ... (any element, via its idempotent power)."""
    return table.omega_const(t)


def eval_type(table: TypeTable, t: TypeId, kf: KernelFormula,
              memo: Optional[dict] = None) -> bool:
    """Does the formula hold on (any) word of this type?

    The type's width must equal the formula's free slot count and its depth
    must be at least the formula's quantifier depth.  A shared memo is only
    valid across calls with the same formula object.
    """
    if table.width(t) != kf.l:
        raise ValueError("type width %d, formula wants %d" % (table.width(t), kf.l))
    if table.depth(t) < kf.n:
        raise ValueError("type depth %d below quantifier depth %d"
                         % (table.depth(t), kf.n))
    if memo is None:
        memo = {}

    def ev(node, tid) -> bool:
        key = (kf.node_id(node), tid)
        if key in memo:
            return memo[key]
        if isinstance(node, KAtom):
            sizes, sub, bef = table.d0_of(tid)
            w = len(sizes)
            i = node.i - 1
            if node.kind == "sub":
                r = bool(sub >> (i * w + node.j - 1) & 1)
            elif node.kind == "before":
                r = bool(bef >> (i * w + node.j - 1) & 1)
            elif node.kind == "empty":
                r = sizes[i] == 0
            else:
                r = sizes[i] == 1
        elif isinstance(node, KNot):
            r = not ev(node.sub, tid)
        elif isinstance(node, KAnd):
            r = ev(node.left, tid) and ev(node.right, tid)
        elif isinstance(node, KOr):
            r = ev(node.left, tid) or ev(node.right, tid)
        else:
            r = any(ev(node.body, m) for m in table.members(tid))
        memo[key] = r
        return r

    return ev(kf.root, t)


def win_set(table: TypeTable, universe: Iterable[TypeId],
            kf: KernelFormula) -> frozenset:
    memo = {}
    return frozenset(t for t in universe if eval_type(table, t, kf, memo))


def letter_types(table: TypeTable, depth: int, width: int = 2):
    """All one-position types, keyed by their bit vector."""
    out = {}
    for code in range(1 << width):
        bits = tuple(code >> i & 1 for i in range(width))
        out[bits] = table.letter(depth, width, bits)
    return out


@dataclass
class LevelUniverse:
    """Everything reachable at one quantifier depth and width."""

    depth: int
    width: int
    letters: dict           # bits -> type id
    generators: tuple       # letters plus omega values, the BFS generator set
    words: frozenset        # types of nonempty finite plays
    types: frozenset        # closed also under omega powers of idempotents


def build_level_universe(table: TypeTable, depth: int,
                         width: int = 2) -> LevelUniverse:
    letters_map = letter_types(table, depth, width)
    letters = sorted(set(letters_map.values()))
    words = table.add_closure(letters)
    closure = words
    omegas = set()
    while True:
        if len(closure) > table.cfg.max_universe:
            raise ResourceLimit("universe too large", "%d types" % len(closure))
        vals = {table.omega_idem(e) for e in closure if table.is_idempotent(e)}
        new = vals - closure
        if not new:
            break
        omegas |= new
        closure = table.add_closure(letters + sorted(omegas))
    return LevelUniverse(depth, width, letters_map,
                         tuple(letters + sorted(omegas)), words, closure)


def reachable_universe(table: TypeTable, depth: int, width: int = 2,
                       words_only: bool = False) -> frozenset:
    """Types of all plays that can actually arise.

    The closure of the one-position types under addition covers every
    nonempty finite play; closing also under omega powers of idempotents
    covers plays over every countable ordinal built from them.
    """
    if words_only:
        letters = sorted(set(letter_types(table, depth, width).values()))
        return table.add_closure(letters)
    return build_level_universe(table, depth, width).types


# ---------------------------------------------------------------------------
# the syntactic quotient


@dataclass
class Quotient:
    """The universe collapsed to what a fixed winning set can see.

    Blocks are numbered 0..count-1.  `add` and `omega_const` are total
    tables over blocks; `win` is the winning block set; `letters` maps each
    bit vector to its block; `classes` lists each block's raw type ids.
    """

    count: int
    block_of: dict
    classes: tuple
    add: dict
    omega_const: dict
    win: frozenset
    letters: dict

    def idempotent_power(self, b: int) -> int:
        seen = {b}
        cur = b
        while True:
            cur = self.add[cur, b]
            if self.add[cur, cur] == cur:
                return cur
            if cur in seen:
                raise AssertionError("cyclic block power without idempotent")
            seen.add(cur)


@dataclass
class ExtensionTables:
    """Formula-independent refinement data for one level universe.

    `order` lists the universe; `right[k]` and `left[k]` map each position
    i to the position of order[i] + g resp. g + order[i] for the k-th
    generator g; `omega_row` maps i to the position of the constant-omega
    sum of order[i]."""

    order: tuple
    index: dict
    right: list
    left: list
    omega_row: "np.ndarray"


def extension_tables(table: TypeTable, uni: LevelUniverse) -> ExtensionTables:
    U = sorted(uni.types)
    index = {t: i for i, t in enumerate(U)}
    right = []
    left = []
    for g in uni.generators:
        right.append(np.fromiter(
            (index[table.extend(t, g, True)] for t in U), np.int32, len(U)))
        left.append(np.fromiter(
            (index[table.extend(t, g, False)] for t in U), np.int32, len(U)))
    omega_row = np.fromiter(
        (index[table.omega_const(t)] for t in U), np.int32, len(U))
    return ExtensionTables(tuple(U), index, right, left, omega_row)


def syntactic_quotient(table: TypeTable, uni: LevelUniverse,
                       winset: frozenset,
                       ext: Optional[ExtensionTables] = None) -> Quotient:
    """Coarsest two-sided congruence of the universe respecting `winset`.

    Refines by one-step extensions with the universe's generators (both
    sides) and by the block of each element's constant-omega sum; at the
    fixpoint the blocks form a semigroup with a well-defined omega power on
    idempotent blocks, and the game machinery can work there soundly.
    """
    if ext is None:
        ext = extension_tables(table, uni)
    U = ext.order
    n = len(U)
    block = np.fromiter((1 if t in winset else 0 for t in U), np.int32, n)
    if not block.any():
        block = np.zeros(n, np.int32)
    count = len(np.unique(block))
    while True:
        cols = [block, block[ext.omega_row]]
        cols.extend(block[r] for r in ext.right)
        cols.extend(block[l] for l in ext.left)
        sig = np.column_stack(cols)
        _, inverse = np.unique(sig, axis=0, return_inverse=True)
        new_count = int(inverse.max()) + 1
        if new_count == count:
            break
        block = inverse.astype(np.int32)
        count = new_count
    # renumber by first appearance for a stable, readable order
    remap = {}
    final = np.empty(n, np.int32)
    for i in range(n):
        b = int(block[i])
        if b not in remap:
            remap[b] = len(remap)
        final[i] = remap[b]
    block_of = {t: int(final[i]) for i, t in enumerate(U)}
    classes = [[] for _ in range(count)]
    for i, t in enumerate(U):
        classes[int(final[i])].append(t)
    reps = [cls[0] for cls in classes]
    add = {}
    for i, r in enumerate(reps):
        for j, s in enumerate(reps):
            add[i, j] = block_of[table.add(r, s)]
    omega = {i: block_of[table.omega_const(r)] for i, r in enumerate(reps)}
    win = frozenset(i for i, cls in enumerate(classes) if cls[0] in winset)
    letters = {bits: block_of[t] for bits, t in uni.letters.items()}
    return Quotient(count, block_of, tuple(tuple(c) for c in classes),
                    add, omega, win, letters)


# ---------------------------------------------------------------------------
# types of ordinal chains


def omega_tower(table: TypeTable, depth: int, width: int, bits: tuple,
                top: int):
    """Types of w^0, w^1, ..., w^top chains of constant letters `bits`."""
    ts = [table.letter(depth, width, bits)]
    for _ in range(top):
        ts.append(table.omega_const(ts[-1]))
    return ts


def omega_omega_type(table: TypeTable, depth: int, width: int,
                     bits: tuple = ()) -> TypeId:
    """Type of the w^w chain, via the eventually cyclic power tower."""
    one = table.letter(depth, width, bits)
    seq = [one]
    seen = {one: 0}
    while True:
        nxt = table.omega_const(seq[-1])
        if nxt in seen:
            start = seen[nxt]
            break
        seen[nxt] = len(seq)
        seq.append(nxt)
        if len(seq) > table.cfg.max_periodicity:
            raise ResourceLimit("power tower does not settle",
                                "%d levels" % len(seq))
    # w^w = w^0 + w^1 + w^2 + ...: a lasso over the tower sequence
    cycle = seq[start:]
    val = _lasso(table, seq[:start], cycle)
    again = _lasso(table, seq[:start] + cycle, cycle)
    if val != again or not table.is_idempotent(val):
        raise AssertionError("inconsistent limit type for the w^w chain")
    return val


def _lasso(table, prefix, cycle):
    tail = table.omega_const(table.fold_add(cycle))
    if not prefix:
        return tail
    return table.add(table.fold_add(prefix), tail)


def power_add(table: TypeTable, t: TypeId, c: int) -> TypeId:
    """Type of c copies of t in a row; the partial sums are eventually
    cyclic, so huge coefficients cost only the cycle's length."""
    if c < 1:
        raise ValueError("need a positive count")
    seen = {}
    seq = [t]
    cur = t
    while len(seq) < c:
        if cur in seen:
            start = seen[cur]
            period = len(seq) - 1 - start
            return seq[start + (c - 1 - start) % period]
        seen[cur] = len(seq) - 1
        cur = table.add(cur, t)
        seq.append(cur)
    return seq[c - 1]


def ordinal_chain_type(table: TypeTable, o: Ordinal, depth: int,
                       width: int = 0, bits: tuple = ()) -> TypeId:
    """Type of the bare chain of order type o (slots constant `bits`).

    A leading w^w block of any positive multiplicity contributes one limit
    type; that collapse is safe because the limit type is idempotent,
    which the tower computation asserts.
    """
    if o.is_zero:
        return table.empty(depth, width)
    parts = []
    if o.limit_part:
        parts.append(omega_omega_type(table, depth, width, bits))
    if o.terms:
        tower = omega_tower(table, depth, width, bits, o.terms[0][0])
        for e, c in o.terms:
            parts.append(power_add(table, tower[e], c))
    return table.fold_add(parts)


def decide_mth(table: TypeTable, kf: KernelFormula, o: Ordinal) -> bool:
    """Truth of a sentence (kernel form, no free slots) on the chain o."""
    if kf.l != 0:
        raise ValueError("monadic theory queries take sentences")
    t = ordinal_chain_type(table, o, kf.n, 0, ())
    return eval_type(table, t, kf)
