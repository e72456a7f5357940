"""Sparse multivariate polynomials over the rationals.

Monomials are plain tuples of exponents.  A :class:`PolyRing` fixes the
variable names, their (positive) weights and a :class:`TermOrder`; every
:class:`Polynomial` points at the ring it lives in and is immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

from .kernels import mul_terms

__all__ = [
    "TermOrder",
    "PolyRing",
    "Polynomial",
    "PolyParseError",
    "divides",
    "mono_lcm",
]


def divides(a, b):
    """True if monomial ``a`` divides monomial ``b``."""
    for i, j in zip(a, b):
        if i > j:
            return False
    return True


def mono_lcm(a, b):
    return tuple(i if i > j else j for i, j in zip(a, b))


def _mono_add(a, b):
    return tuple(i + j for i, j in zip(a, b))


def _mono_sub(a, b):
    return tuple(i - j for i, j in zip(a, b))


class TermOrder:
    """A monomial order, exposed through a flat integer sort key.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"elim"``.  ``perm`` lists the
    variable indices from most to least significant (default: declaration
    order).  ``block`` is the size of the eliminated leading block for
    ``"elim"``.  ``weights`` are the variable degrees used by the graded
    comparisons.
    """

    KINDS = ("grevlex", "lex", "elim")

    def __init__(self, kind="grevlex", nvars=None, weights=None, perm=None, block=0):
        if kind not in self.KINDS:
            raise ValueError(f"unknown term order {kind!r}")
        if nvars is None:
            nvars = len(weights) if weights is not None else len(perm)
        self.kind = kind
        self.nvars = nvars
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        self.perm = tuple(perm) if perm is not None else tuple(range(nvars))
        if sorted(self.perm) != list(range(nvars)) or len(self.weights) != nvars:
            raise ValueError("permutation/weights do not match the variable count")
        if any(w <= 0 for w in self.weights):
            raise ValueError("variable weights must be positive")
        if kind == "elim" and not 0 < block < nvars:
            raise ValueError("elimination block must be a proper nonempty prefix")
        self.block = block
        self._key = self._build_key()

    def _build_key(self):
        perm, w = self.perm, self.weights
        if self.kind == "lex":
            return lambda m: tuple(m[p] for p in perm)

        def grev(idx):
            rev = tuple(reversed(idx))
            return lambda m: (sum(w[p] * m[p] for p in idx),) + tuple(-m[p] for p in rev)

        if self.kind == "grevlex":
            return grev(perm)
        head, tail = grev(perm[: self.block]), grev(perm[self.block:])
        return lambda m: head(m) + tail(m)

    def key(self, m):
        """Flat integer tuple; larger key means larger monomial."""
        return self._key(m)

    def cmp(self, a, b):
        if len(a) != self.nvars or len(b) != self.nvars:
            raise ValueError("monomial length does not match the order")
        ka, kb = self._key(a), self._key(b)
        return (ka > kb) - (ka < kb)

    def __eq__(self, other):
        return (
            isinstance(other, TermOrder)
            and (self.kind, self.weights, self.perm, self.block)
            == (other.kind, other.weights, other.perm, other.block)
        )

    def __hash__(self):
        return hash((self.kind, self.weights, self.perm, self.block))

    def __repr__(self):
        extra = f", block={self.block}" if self.kind == "elim" else ""
        return f"TermOrder({self.kind!r}, perm={self.perm}{extra})"


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolyRing:
    """The free polynomial ring Q[v_1, ..., v_n] with a fixed term order."""

    def __init__(self, names, degrees=None, order="grevlex", perm=None, block=0):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable name")
        for n in names:
            if not _IDENT.match(n):
                raise ValueError(f"invalid variable name {n!r}")
        self.names = names
        self.nvars = len(names)
        self.degrees = tuple(degrees) if degrees is not None else (1,) * self.nvars
        if len(self.degrees) != self.nvars:
            raise ValueError("one degree per variable required")
        if isinstance(order, TermOrder):
            self.order = order
        else:
            self.order = TermOrder(order, self.nvars, self.degrees, perm, block)
        self.index = {n: i for i, n in enumerate(names)}
        self.one_mono = (0,) * self.nvars

    def with_order(self, kind, perm=None, block=0):
        return PolyRing(self.names, self.degrees, kind, perm, block)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.degrees == other.degrees
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.degrees, self.order))

    def __repr__(self):
        return f"PolyRing({','.join(self.names)}; {self.order.kind})"

    # constructors
    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {self.one_mono: Fraction(1)})

    def const(self, c):
        c = Fraction(c)
        return Polynomial(self, {self.one_mono: c} if c else {})

    def var(self, name):
        m = [0] * self.nvars
        m[self.index[name]] = 1
        return Polynomial(self, {tuple(m): Fraction(1)})

    def gens(self):
        return [self.var(n) for n in self.names]

    def monomial(self, mono, coeff=1):
        coeff = Fraction(coeff)
        return Polynomial(self, {tuple(mono): coeff} if coeff else {})

    def mono_degree(self, m):
        return sum(d * e for d, e in zip(self.degrees, m))

    def monomials_of_degree(self, d):
        """All monomials of weighted degree ``d``, in no particular order."""
        out = []
        degs = self.degrees
        n = self.nvars

        def rec(i, left, acc):
            if i == n - 1:
                if left % degs[i] == 0:
                    out.append(tuple(acc) + (left // degs[i],))
                return
            for e in range(left // degs[i] + 1):
                acc.append(e)
                rec(i + 1, left - e * degs[i], acc)
                acc.pop()

        if d < 0:
            return []
        if n == 0:
            return [()] if d == 0 else []
        rec(0, d, [])
        return out

    def parse(self, text):
        return _Parser(self, text).parse()

    def __call__(self, text):
        return self.parse(text)


@total_ordering
class Polynomial:
    """Immutable sparse polynomial; ``terms`` lists (coefficient, monomial)
    pairs in strictly descending term order."""

    __slots__ = ("ring", "_d", "_sorted", "_hash")

    def __init__(self, ring, coeffs):
        # ``coeffs`` must already be zero-free; callers inside the package
        # guarantee it and it is never mutated afterwards.
        self.ring = ring
        self._d = coeffs
        self._sorted = None
        self._hash = None

    @classmethod
    def from_dict(cls, ring, coeffs):
        return cls(ring, {m: Fraction(c) for m, c in coeffs.items() if c})

    @classmethod
    def from_terms(cls, ring, terms):
        d = {}
        for c, m in terms:
            m = tuple(m)
            if len(m) != ring.nvars:
                raise ValueError("monomial length does not match the ring")
            v = d.get(m, 0) + Fraction(c)
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return cls(ring, d)

    # views
    @property
    def coeffs(self):
        """Read-only mapping monomial -> Fraction (do not mutate)."""
        return self._d

    @property
    def terms(self):
        if self._sorted is None:
            key = self.ring.order.key
            self._sorted = tuple(
                (self._d[m], m) for m in sorted(self._d, key=key, reverse=True)
            )
        return self._sorted

    def is_zero(self):
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def __len__(self):
        return len(self._d)

    def lm(self):
        if not self._d:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._d, key=self.ring.order.key)

    def lc(self):
        return self._d[self.lm()]

    def degree(self):
        """Maximum weighted degree of a term; -1 for zero."""
        if not self._d:
            return -1
        return max(self.ring.mono_degree(m) for m in self._d)

    def is_homogeneous(self):
        degs = {self.ring.mono_degree(m) for m in self._d}
        return len(degs) <= 1

    def homogeneous_part(self, d):
        md = self.ring.mono_degree
        return Polynomial(self.ring, {m: c for m, c in self._d.items() if md(m) == d})

    def constant_term(self):
        return self._d.get(self.ring.one_mono, Fraction(0))

    def content_scale(self, c):
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c for m, v in self._d.items()})

    def mul_monomial(self, mono, c=1):
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {_mono_add(m, mono): v * c for m, v in self._d.items()})

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring.nvars != self.ring.nvars:
                raise ValueError("variable-count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._d)
        for m, c in other._d.items():
            v = d.get(m, 0) + c
            if v:
                d[m] = v
            else:
                del d[m]
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self._d.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, mul_terms(self._d, other._d))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.nvars == other.ring.nvars and self._d == other._d

    def __lt__(self, other):
        # only used to get deterministic sorting of polynomial lists
        key = self.ring.order.key
        a = [(key(m), c) for c, m in self.terms]
        b = [(key(m), c) for c, m in other.terms]
        return a < b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"

    def to_string(self):
        if not self._d:
            return "0"
        names = self.ring.names
        parts = []
        for c, m in self.terms:
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, b in parts[1:]:
            out += s + b
        return out


class PolyParseError(ValueError):
    def __init__(self, msg, pos, text=""):
        super().__init__(f"{msg} at column {pos + 1}" + (f" in {text!r}" if text else ""))
        self.msg = msg
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    """Recursive-descent parser: ``+ - * ^ /`` (division by integers only)
    and parentheses.  Juxtaposition is rejected."""

    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.toks = []
        for m in _TOKEN.finditer(text):
            num, ident, op = m.groups()
            if num is not None:
                self.toks.append(("num", int(num), m.start(1)))
            elif ident is not None:
                self.toks.append(("id", ident, m.start(2)))
            elif op is not None:
                if op not in "+-*^/()":
                    raise PolyParseError(f"unexpected character {op!r}", m.start(3), text)
                self.toks.append(("op", op, m.start(3)))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg):
        raise PolyParseError(msg, self.peek()[2], self.text)

    def parse(self):
        if not self.toks:
            self.error("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            self.error("unexpected token")
        return p

    def expr(self):
        kind, val, _ = self.peek()
        neg = False
        if kind == "op" and val in "+-":
            self.take()
            neg = val == "-"
        p = self.term()
        if neg:
            p = -p
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                k, n, _ = self.peek()
                if k != "num":
                    self.error("only division by an integer is allowed")
                self.take()
                if n == 0:
                    self.error("division by zero")
                p = p.content_scale(Fraction(1, n))
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                self.error("juxtaposition is not allowed, use '*'")
            else:
                return p

    def factor(self):
        p = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, n, _ = self.peek()
            if k != "num":
                self.error("exponent must be a non-negative integer")
            self.take()
            p = p ** n
        return p

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(val)
        if kind == "id":
            if val not in self.ring.index:
                self.error(f"unknown variable {val!r}")
            self.take()
            return self.ring.var(val)
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            k, v, _ = self.peek()
            if not (k == "op" and v == ")"):
                self.error("expected ')'")
            self.take()
            return p
        self.error("expected a number, variable or '('")
