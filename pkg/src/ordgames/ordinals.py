"""Ordinal notation for game lengths.

Ordinals are written in Cantor normal form over base omega with finite
exponents, optionally preceded by a single `w^w` term:

    w^w + w^3*2 + w*4 + 7        w^2        w*3 + 1        0

Exponents must strictly decrease left to right and coefficients are
positive.  The alternative literal `code:[f, a_n, ..., a_0]` gives the
multiplicity f of a leading w^w block and the digit a_k of w^k; the games
never distinguish different positive f, and `collapse_limit` normalizes
them to 1, but the multiplicity is kept so that the collapse is a checked
theorem rather than a notational accident.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import OrdinalError


@dataclass(frozen=True)
class Ordinal:
    """`limit_part` is the multiplicity of a leading w^w block (0 for
    none); `terms` is ((exponent, coefficient), ...) with exponents
    strictly decreasing and coefficients >= 1."""

    limit_part: int
    terms: tuple

    def __post_init__(self):
        if self.limit_part < 0:
            raise OrdinalError("negative w^w multiplicity")
        last = None
        for e, c in self.terms:
            if e < 0 or c < 1:
                raise OrdinalError("bad term (%r, %r)" % (e, c))
            if last is not None and e >= last:
                raise OrdinalError("exponents must strictly decrease")
            last = e

    @property
    def is_zero(self) -> bool:
        return not self.limit_part and not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.limit_part and all(e == 0 for e, _ in self.terms)

    def finite_value(self) -> int:
        if not self.is_finite:
            raise OrdinalError("not a finite ordinal: %s" % format_ordinal(self))
        return self.terms[0][1] if self.terms else 0

    @property
    def degree(self) -> int:
        """Largest exponent among the digit terms (-1 if there are none)."""
        return self.terms[0][0] if self.terms else -1

    def digit(self, k: int) -> int:
        for e, c in self.terms:
            if e == k:
                return c
        return 0


ZERO = Ordinal(0, ())
OMEGA_TO_OMEGA = Ordinal(1, ())


def from_finite(k: int) -> Ordinal:
    if k < 0:
        raise OrdinalError("negative length")
    return Ordinal(0, ((0, k),) if k else ())


def omega_power(e: int, coeff: int = 1) -> Ordinal:
    if e < 0 or coeff < 1:
        raise OrdinalError("bad power")
    return Ordinal(0, ((e, coeff),)) if e else from_finite(coeff)


def from_code(flag: int, digits) -> Ordinal:
    """Digits are a_n..a_0 (most significant first); leading zeros allowed."""
    digits = list(digits)
    if flag < 0:
        raise OrdinalError("code flag must be nonnegative")
    if any(d < 0 for d in digits):
        raise OrdinalError("code digits must be nonnegative")
    n = len(digits) - 1
    terms = tuple((n - i, d) for i, d in enumerate(digits) if d > 0)
    return Ordinal(flag, terms)


def code_of(o: Ordinal):
    """(flag, digits a_n..a_0); digits are () for a pure w^w block or zero."""
    n = o.degree
    digits = tuple(o.digit(n - i) for i in range(n + 1))
    return (o.limit_part, digits)


_TERM_WW = re.compile(r"w\s*\^\s*w\Z")
_TERM_POW = re.compile(r"w\s*\^\s*([0-9]+)\s*(?:\*\s*([0-9]+))?\Z")
_TERM_W = re.compile(r"w\s*(?:\*\s*([0-9]+))?\Z")
_TERM_NAT = re.compile(r"([0-9]+)\Z")
_CODE = re.compile(r"code\s*:\s*\[([0-9,\s]*)\]\Z")


def parse_ordinal(text: str) -> Ordinal:
    s = text.strip()
    if not s:
        raise OrdinalError("empty ordinal expression")
    m = _CODE.match(s)
    if m:
        inner = [p.strip() for p in m.group(1).split(",")] if m.group(1).strip() else []
        if not inner or any(not p.isdigit() for p in inner):
            raise OrdinalError("code literal needs integers: code:[f,a_n,...,a_0]")
        nums = [int(p) for p in inner]
        return from_code(nums[0], nums[1:])
    parts = [p.strip() for p in s.split("+")]
    if parts == ["0"]:
        return ZERO
    limit = 0
    terms = []
    for i, p in enumerate(parts):
        if not p:
            raise OrdinalError("empty term in %r" % text)
        if _TERM_WW.match(p):
            if i != 0:
                raise OrdinalError("w^w may appear only as the leading term")
            limit = 1
            continue
        m = _TERM_POW.match(p)
        if m:
            e, c = int(m.group(1)), int(m.group(2) or 1)
        else:
            m = _TERM_W.match(p)
            if m:
                e, c = 1, int(m.group(1) or 1)
            else:
                m = _TERM_NAT.match(p)
                if not m:
                    raise OrdinalError("cannot read term %r" % p)
                e, c = 0, int(m.group(1))
                if i != len(parts) - 1:
                    raise OrdinalError("a plain number must be the last term")
        if c < 1:
            raise OrdinalError("coefficient must be positive in %r" % p)
        terms.append((e, c))
    try:
        return Ordinal(limit, tuple(terms))
    except OrdinalError as err:
        raise OrdinalError("%s in %r" % (err.args[0], text))


def format_ordinal(o: Ordinal) -> str:
    if o.is_zero:
        return "0"
    if o.limit_part > 1:
        flag, digits = code_of(o)
        return "code:[%s]" % ",".join(str(x) for x in (flag,) + digits)
    parts = []
    if o.limit_part:
        parts.append("w^w")
    for e, c in o.terms:
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            parts.append("w" if c == 1 else "w*%d" % c)
        else:
            parts.append("w^%d" % e if c == 1 else "w^%d*%d" % (e, c))
    return " + ".join(parts)


def collapse_limit(o: Ordinal) -> Ordinal:
    """Normalize any positive w^w multiplicity down to 1."""
    return Ordinal(min(o.limit_part, 1), o.terms)


def split_last(o: Ordinal):
    """Peel the final Cantor normal form unit for right-to-left synthesis.

    Returns (rest, unit) where unit is ("fin", k) for a trailing finite
    block, taken whole, or ("pow", e) for one copy of w^e (e >= 1).
    """
    if o.is_zero or o.limit_part:
        raise OrdinalError("cannot peel %s" % format_ordinal(o))
    e, c = o.terms[-1]
    if e == 0:
        return Ordinal(False, o.terms[:-1]), ("fin", c)
    rest = o.terms[:-1] + (((e, c - 1),) if c > 1 else ())
    return Ordinal(False, rest), ("pow", e)
