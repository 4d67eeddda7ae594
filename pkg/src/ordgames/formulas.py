"""Monadic second-order formulas over linear orders.

Surface syntax
--------------
First-order variables are lowercase identifiers, set variables uppercase.
The free set variables X1, X2 name the two players' plays.

    atom  := x < y | x = y | x in X | X sub Y | empty(X) | sing(X)
    form  := atom | ~form | form & form | form | form
           | form -> form | form <-> form
           | ex1 x: form | all1 x: form | ex2 X: form | all2 X: form
           | (form)

`&` binds tighter than `|`, then `->` (right associative), then `<->`.
A quantifier's body extends as far right as possible.

The kernel form keeps only set variables (first-order variables become
guarded singletons), atoms Sub/Before/Empty/Sing, connectives ~ & |, and a
single existential set quantifier.  Kernel variables are numbered with a
stack discipline: the free variables are 1..l and a variable bound at
nesting depth d is number l+d, so the binder needs no name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import FormulaError

# ---------------------------------------------------------------------------
# surface AST


@dataclass(frozen=True)
class Atom:
    kind: str                 # lt | eq | mem | sub | empty | sing
    args: tuple


@dataclass(frozen=True)
class Neg:
    sub: "Formula"


@dataclass(frozen=True)
class Bin:
    op: str                   # & | "|" | -> | <->
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    q: str                    # ex1 | all1 | ex2 | all2
    var: str
    body: "Formula"


Formula = Union[Atom, Neg, Bin, Quant]

_SET_VAR = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
_PLAYER_VAR = re.compile(r"X([0-9]+)\Z")


def is_set_var(name: str) -> bool:
    return bool(_SET_VAR.match(name))


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Neg):
        return quantifier_depth(f.sub)
    if isinstance(f, Bin):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def all_names(f: Formula) -> set:
    if isinstance(f, Atom):
        return set(f.args)
    if isinstance(f, Neg):
        return all_names(f.sub)
    if isinstance(f, Bin):
        return all_names(f.left) | all_names(f.right)
    return {f.var} | all_names(f.body)


def free_set_vars(f: Formula, bound=frozenset()) -> set:
    if isinstance(f, Atom):
        return {a for a in f.args if is_set_var(a) and a not in bound}
    if isinstance(f, Neg):
        return free_set_vars(f.sub, bound)
    if isinstance(f, Bin):
        return free_set_vars(f.left, bound) | free_set_vars(f.right, bound)
    return free_set_vars(f.body, bound | {f.var})


# ---------------------------------------------------------------------------
# tokenizer / parser

_KEYWORDS = {"ex1", "all1", "ex2", "all2", "in", "sub", "empty", "sing"}
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<sym><->|->|[<=~&|():])|(?P<id>[A-Za-z_][A-Za-z0-9_]*))"
)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while i < n:
        m = _TOKEN_RE.match(text, i)
        if not m or m.end() == i:
            stripped = text[i:].lstrip()
            if not stripped:
                break
            raise FormulaError("unexpected character %r" % stripped[0],
                               n - len(stripped))
        if m.group("sym"):
            out.append(_Tok("sym", m.group("sym"), m.start("sym")))
        else:
            word = m.group("id")
            kind = "kw" if word in _KEYWORDS else "id"
            out.append(_Tok(kind, word, m.start("id")))
        i = m.end()
    out.append(_Tok("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise FormulaError("expected %r, found %r" % (text, t.text or "end of input"), t.pos)
        return t

    # precedence ladder -----------------------------------------------------

    def parse(self) -> Formula:
        f = self.iff()
        t = self.peek()
        if t.kind != "end":
            raise FormulaError("unexpected %r" % t.text, t.pos)
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek().text == "<->":
            self.next()
            f = Bin("<->", f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disj()
        if self.peek().text == "->":
            self.next()
            return Bin("->", f, self.implies())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "|":
            self.next()
            f = Bin("|", f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&":
            self.next()
            f = Bin("&", f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t.text == "~":
            self.next()
            return Neg(self.unary())
        if t.text in ("ex1", "all1", "ex2", "all2"):
            self.next()
            var = self.next()
            if var.kind not in ("id", "kw"):
                raise FormulaError("expected a variable after %s" % t.text, var.pos)
            if var.kind == "kw":
                raise FormulaError("%r is a keyword, not a variable" % var.text, var.pos)
            want_set = t.text in ("ex2", "all2")
            if want_set != is_set_var(var.text):
                raise FormulaError(
                    "%s binds a %s variable (%s case), got %r"
                    % (t.text, "set" if want_set else "first-order",
                       "uppercase" if want_set else "lowercase", var.text),
                    var.pos)
            self.expect(":")
            return Quant(t.text, var.text, self.iff())
        if t.text == "(":
            self.next()
            f = self.iff()
            self.expect(")")
            return f
        if t.text in ("empty", "sing"):
            self.next()
            self.expect("(")
            v = self.next()
            if v.kind != "id" or not is_set_var(v.text):
                raise FormulaError("%s() takes a set variable" % t.text, v.pos)
            self.expect(")")
            return Atom(t.text, (v.text,))
        if t.kind == "id":
            return self.atom()
        raise FormulaError("expected a formula, found %r" % (t.text or "end of input"), t.pos)

    def atom(self) -> Formula:
        v = self.next()
        if is_set_var(v.text):
            op = self.next()
            if op.text != "sub":
                raise FormulaError("set variable %r can start only 'X sub Y' here" % v.text, op.pos)
            w = self.next()
            if w.kind != "id" or not is_set_var(w.text):
                raise FormulaError("'sub' takes a set variable on the right", w.pos)
            return Atom("sub", (v.text, w.text))
        op = self.next()
        if op.text == "<" or op.text == "=":
            w = self.next()
            if w.kind != "id" or is_set_var(w.text):
                raise FormulaError("%r compares first-order variables" % op.text, w.pos)
            return Atom("lt" if op.text == "<" else "eq", (v.text, w.text))
        if op.text == "in":
            w = self.next()
            if w.kind != "id" or not is_set_var(w.text):
                raise FormulaError("'in' takes a set variable on the right", w.pos)
            return Atom("mem", (v.text, w.text))
        raise FormulaError("expected <, = or 'in' after %r" % v.text, op.pos)


def _check_scopes(f: Formula, bound: dict, text_hint: str):
    """Reject unbound first-order variables, rebinding, and odd free set names."""
    if isinstance(f, Atom):
        for a in f.args:
            if is_set_var(a):
                if a not in bound and not _PLAYER_VAR.match(a):
                    raise FormulaError(
                        "free set variable %r (free set variables must be X1, X2, ...)" % a)
            else:
                if a not in bound:
                    raise FormulaError("unbound first-order variable %r" % a)
        return
    if isinstance(f, Neg):
        _check_scopes(f.sub, bound, text_hint)
        return
    if isinstance(f, Bin):
        _check_scopes(f.left, bound, text_hint)
        _check_scopes(f.right, bound, text_hint)
        return
    if f.var in bound:
        raise FormulaError("variable %r rebound in nested scope" % f.var)
    if _PLAYER_VAR.match(f.var):
        raise FormulaError("reserved player variable %r cannot be bound" % f.var)
    _check_scopes(f.body, dict(bound, **{f.var: f.q}), text_hint)


def parse_formula(text: str) -> Formula:
    """Parse surface syntax; raises FormulaError with an offset on bad input."""
    f = _Parser(text).parse()
    _check_scopes(f, {}, text)
    return f


# ---------------------------------------------------------------------------
# renderer

_PREC = {"<->": 10, "->": 20, "|": 30, "&": 40}


def _prec(f: Formula) -> int:
    if isinstance(f, Bin):
        return _PREC[f.op]
    if isinstance(f, Quant):
        return 5
    if isinstance(f, Neg):
        return 90
    return 100


def _render(f: Formula, ctx: int) -> str:
    p = _prec(f)
    if isinstance(f, Atom):
        if f.kind == "lt":
            s = "%s < %s" % f.args
        elif f.kind == "eq":
            s = "%s = %s" % f.args
        elif f.kind == "mem":
            s = "%s in %s" % f.args
        elif f.kind == "sub":
            s = "%s sub %s" % f.args
        else:
            s = "%s(%s)" % (f.kind, f.args[0])
    elif isinstance(f, Neg):
        s = "~" + _render(f.sub, 90)
    elif isinstance(f, Quant):
        s = "%s %s: %s" % (f.q, f.var, _render(f.body, 0))
    else:
        if f.op == "->":
            s = "%s -> %s" % (_render(f.left, p + 1), _render(f.right, p))
        else:
            s = "%s %s %s" % (_render(f.left, p), f.op, _render(f.right, p + 1))
    if p < ctx:
        return "(" + s + ")"
    return s


def render(f: Formula) -> str:
    """Canonical text form; parse_formula(render(f)) reproduces f."""
    return _render(f, 0)


# ---------------------------------------------------------------------------
# kernel form


@dataclass(frozen=True)
class KAtom:
    kind: str                 # sub | before | empty | sing
    i: int
    j: int = 0


@dataclass(frozen=True)
class KNot:
    sub: "KNode"


@dataclass(frozen=True)
class KAnd:
    left: "KNode"
    right: "KNode"


@dataclass(frozen=True)
class KOr:
    left: "KNode"
    right: "KNode"


@dataclass(frozen=True)
class KEx:
    body: "KNode"


KNode = Union[KAtom, KNot, KAnd, KOr, KEx]


def kernel_depth(node: KNode) -> int:
    if isinstance(node, KAtom):
        return 0
    if isinstance(node, KNot):
        return kernel_depth(node.sub)
    if isinstance(node, (KAnd, KOr)):
        return max(kernel_depth(node.left), kernel_depth(node.right))
    return 1 + kernel_depth(node.body)


class KernelFormula:
    """A set-variable-only formula: free variables 1..l, depth n = qd."""

    def __init__(self, root: KNode, l: int):
        self.root = root
        self.l = l
        self.n = kernel_depth(root)
        self._ids = {}
        self._postorder = []
        self._index(root)

    def _index(self, node):
        if id(node) in self._ids:
            return
        if isinstance(node, KNot):
            self._index(node.sub)
        elif isinstance(node, (KAnd, KOr)):
            self._index(node.left)
            self._index(node.right)
        elif isinstance(node, KEx):
            self._index(node.body)
        self._ids[id(node)] = len(self._postorder)
        self._postorder.append(node)

    def node_id(self, node) -> int:
        return self._ids[id(node)]

    def __repr__(self):
        return "KernelFormula(n=%d, l=%d, nodes=%d)" % (self.n, self.l, len(self._postorder))


def to_kernel(f: Formula, l: Optional[int] = None) -> KernelFormula:
    """Translate to kernel form.

    Free set variables must be X1..Xl; `l` can widen the declared free slot
    count (games always use l=2).  Quantifier depth is preserved exactly:
    universal quantifiers become ~ex~, x = y becomes Sub both ways, and
    first-order binders reuse their own singleton guard.
    """
    free = free_set_vars(f)
    need = 0
    for name in free:
        m = _PLAYER_VAR.match(name)
        if not m:
            raise FormulaError("free set variable %r is not of the form X<i>" % name)
        need = max(need, int(m.group(1)))
    if l is None:
        l = need
    elif l < need:
        raise FormulaError("formula mentions X%d but l=%d declared" % (need, l))

    def tr(node: Formula, env: dict, depth: int) -> KNode:
        if isinstance(node, Atom):
            if node.kind == "lt":
                return KAtom("before", env[node.args[0]], env[node.args[1]])
            if node.kind == "eq":
                a, b = env[node.args[0]], env[node.args[1]]
                return KAnd(KAtom("sub", a, b), KAtom("sub", b, a))
            if node.kind == "mem":
                return KAtom("sub", env[node.args[0]], env[node.args[1]])
            if node.kind == "sub":
                return KAtom("sub", env[node.args[0]], env[node.args[1]])
            return KAtom(node.kind, env[node.args[0]])
        if isinstance(node, Neg):
            return KNot(tr(node.sub, env, depth))
        if isinstance(node, Bin):
            a = tr(node.left, env, depth)
            b = tr(node.right, env, depth)
            if node.op == "&":
                return KAnd(a, b)
            if node.op == "|":
                return KOr(a, b)
            if node.op == "->":
                return KOr(KNot(a), b)
            a2 = tr(node.left, env, depth)
            b2 = tr(node.right, env, depth)
            return KAnd(KOr(KNot(a), b), KOr(KNot(b2), a2))
        idx = l + depth + 1
        env2 = dict(env)
        env2[node.var] = idx
        body = tr(node.body, env2, depth + 1)
        if node.q == "ex1":
            return KEx(KAnd(KAtom("sing", idx), body))
        if node.q == "all1":
            return KNot(KEx(KAnd(KAtom("sing", idx), KNot(body))))
        if node.q == "ex2":
            return KEx(body)
        return KNot(KEx(KNot(body)))

    env = {}
    for name in free:
        env[name] = int(_PLAYER_VAR.match(name).group(1))
    root = tr(f, env, 0)
    kf = KernelFormula(root, l)
    assert kf.n == quantifier_depth(f), "translation must preserve quantifier depth"
    return kf


# ---------------------------------------------------------------------------
# relativization


def relativize(f: Formula, mode: str, pivot: str) -> Formula:
    """Restrict f to positions before (mode '<') or at-or-after (mode '>=')
    the first-order variable `pivot`.

    All quantifiers are guarded; atoms over free set variables are rewritten
    with bounded quantifiers so that the result, evaluated on a full chain,
    agrees with f evaluated on the corresponding half.  The pivot must not
    occur anywhere in f.  Quantifier depth grows by at most 2.
    """
    if mode not in ("<", ">="):
        raise FormulaError("relativize mode must be '<' or '>='")
    if is_set_var(pivot):
        raise FormulaError("pivot must be a first-order variable")
    used = all_names(f)
    if pivot in used:
        raise FormulaError("pivot %r occurs in the formula" % pivot)

    fresh_cache = []
    fresh_counter = [0]

    class _Pool:
        def __getitem__(self, k):
            while len(fresh_cache) <= k:
                c = fresh_counter[0]
                fresh_counter[0] += 1
                name = "z%d" % c if c else "z"
                if name not in used and name != pivot:
                    fresh_cache.append(name)
            return fresh_cache[k]

    fresh_pool = _Pool()

    def guard(v: str) -> Formula:
        if mode == "<":
            return Atom("lt", (v, pivot))
        return Neg(Atom("lt", (v, pivot)))

    def set_guard(V: str, z: str) -> Formula:
        return Quant("all1", z, Bin("->", Atom("mem", (z, V)), guard(z)))

    def walk(node: Formula, bound: frozenset, pool_i: int) -> Formula:
        if isinstance(node, Atom):
            if node.kind == "empty" and node.args[0] not in bound:
                z = fresh_pool[pool_i]
                return Neg(Quant("ex1", z,
                                 Bin("&", guard(z), Atom("mem", (z, node.args[0])))))
            if node.kind == "sing" and node.args[0] not in bound:
                X = node.args[0]
                z = fresh_pool[pool_i]
                u = fresh_pool[pool_i + 1]
                inside = Bin("&", Bin("&", guard(z), Atom("mem", (z, X))),
                             Quant("all1", u,
                                   Bin("->", Bin("&", guard(u), Atom("mem", (u, X))),
                                       Atom("eq", (u, z)))))
                return Quant("ex1", z, inside)
            if node.kind == "sub" and node.args[0] not in bound:
                X, Y = node.args
                z = fresh_pool[pool_i]
                return Quant("all1", z,
                             Bin("->", Bin("&", guard(z), Atom("mem", (z, X))),
                                 Atom("mem", (z, Y))))
            return node
        if isinstance(node, Neg):
            return Neg(walk(node.sub, bound, pool_i))
        if isinstance(node, Bin):
            return Bin(node.op, walk(node.left, bound, pool_i),
                       walk(node.right, bound, pool_i))
        body = walk(node.body, bound | {node.var}, pool_i + 1)
        if node.q == "ex1":
            return Quant("ex1", node.var, Bin("&", guard(node.var), body))
        if node.q == "all1":
            return Quant("all1", node.var, Bin("->", guard(node.var), body))
        z = fresh_pool[pool_i]
        if node.q == "ex2":
            return Quant("ex2", node.var, Bin("&", set_guard(node.var, z), body))
        return Quant("all2", node.var, Bin("->", set_guard(node.var, z), body))

    return walk(f, frozenset(), 0)


# ---------------------------------------------------------------------------
# small builders used by templates, reports, and synthesized formulas


def conj(parts):
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Bin("&", out, p)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Bin("|", out, p)
    return out


def at_least_length(k: int, names=None) -> Formula:
    """Sentence: the chain has at least k positions (k >= 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    names = names or ["t%d" % (i + 1) for i in range(k)]
    if k == 1:
        return Quant("ex1", names[0], Atom("eq", (names[0], names[0])))
    inner = conj(Atom("lt", (names[i], names[i + 1])) for i in range(k - 1))
    f = inner
    for v in reversed(names):
        f = Quant("ex1", v, f)
    return f


def exact_length(k: int) -> Formula:
    """Sentence: the chain has exactly k positions (k >= 0)."""
    if k == 0:
        return Neg(at_least_length(1))
    f = at_least_length(k)
    return Bin("&", f, Neg(at_least_length(k + 1, ["s%d" % (i + 1) for i in range(k + 1)])))


def position_is(var: str, j: int) -> Formula:
    """var is the position with exactly j predecessors (j small)."""
    if j == 0:
        return Neg(Quant("ex1", "p1", Atom("lt", ("p1", var))))
    names = ["p%d" % (i + 1) for i in range(j)]
    chain = [Atom("lt", (names[i], names[i + 1])) for i in range(j - 1)]
    chain.append(Atom("lt", (names[-1], var)))
    gap = Quant("all1", "q1",
                Bin("->", Atom("lt", ("q1", var)),
                    disj([Atom("eq", ("q1", n)) for n in names])))
    inner = conj(chain + [gap])
    f = inner
    for v in reversed(names):
        f = Quant("ex1", v, f)
    return f
