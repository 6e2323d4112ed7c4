"""Exact arithmetic in the cyclotomic field Q(z), z a primitive 2n-th root of unity.

Scalars are rational coefficient vectors modulo the 2n-th cyclotomic
polynomial, so equality is plain coefficient equality.  The conventions
zeta = z^2 and q = z^(2n-1) are fixed, which gives q^-2 = zeta.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import re


# integer / rational polynomial helpers, coefficient lists low -> high

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(x) for x in a]
    lead = Fraction(b[-1])
    while len(r) >= len(b) and r:
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r = _trim(r)
    return _trim(q), r


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> tuple:
    """Integer coefficients of the N-th cyclotomic polynomial."""
    if N < 1:
        raise ValueError("cyclotomic index must be positive")
    num = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not rem, "inexact cyclotomic division"
    out = tuple(int(c) for c in num)
    assert all(Fraction(c) == c2 for c, c2 in zip(out, num))
    return out


class CycContext:
    """Field data for Q(z) with z a primitive N-th root of unity, N = 2n."""

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 2:
            raise ValueError(f"invalid order n={n!r}: the Taft order must be an integer >= 2")
        self.n = n
        self.N = 2 * n
        self.phi = cyclotomic_poly(self.N)
        self.degree = len(self.phi) - 1
        # z^k mod phi for 0 <= k < 2*degree, used to fold products
        d = self.degree
        self._fold = []
        for k in range(2 * d):
            self._fold.append(self._reduce_monomial(k))
        # phi is monic, so the folds have integer entries
        self._ifold = [tuple(int(c) for c in f) for f in self._fold]
        self._powers = {}

    def _reduce_monomial(self, k):
        p = [0] * k + [1]
        _, r = _poly_divmod(p, list(self.phi))
        r = r + [Fraction(0)] * (self.degree - len(r))
        return tuple(Fraction(c) for c in r)

    def __eq__(self, other):
        return isinstance(other, CycContext) and other.n == self.n

    def __hash__(self):
        return hash(("CycContext", self.n))

    def __repr__(self):
        return f"CycContext(n={self.n})"

    # constructors
    def scalar(self, value) -> "CycScalar":
        if isinstance(value, CycScalar):
            if value.ctx != self:
                raise ValueError("scalar belongs to a different field")
            return value
        if isinstance(value, str):
            return parse_scalar(self, value)
        if isinstance(value, int):
            return CycScalar._raw(self, (value,) + (0,) * (self.degree - 1), 1)
        v = Fraction(value)
        return CycScalar._raw(self, (v.numerator,) + (0,) * (self.degree - 1), v.denominator)

    def zero(self) -> "CycScalar":
        z = self.__dict__.get("_zero")
        if z is None:
            z = self._zero = self.scalar(0)
        return z

    def one(self) -> "CycScalar":
        o = self.__dict__.get("_one")
        if o is None:
            o = self._one = self.scalar(1)
        return o

    def root_power(self, k: int) -> "CycScalar":
        k %= self.N
        s = self._powers.get(k)
        if s is None:
            if k < self.degree:
                coeffs = [Fraction(0)] * self.degree
                coeffs[k] = Fraction(1)
                s = CycScalar(self, tuple(coeffs))
            else:
                s = CycScalar(self, self._reduce_monomial(k))
            self._powers[k] = s
        return s

    def z(self) -> "CycScalar":
        return self.root_power(1)

    def zeta(self) -> "CycScalar":
        return self.root_power(2)

    def zeta_power(self, k: int) -> "CycScalar":
        return self.root_power(2 * k)

    def q(self) -> "CycScalar":
        return self.root_power(2 * self.n - 1)

    def q_power(self, k: int) -> "CycScalar":
        return self.root_power((2 * self.n - 1) * k)

    def reduce(self, poly) -> "CycScalar":
        """Canonical residue of an arbitrary rational polynomial."""
        d = self.degree
        out = [Fraction(0)] * d
        for k, c in enumerate(poly):
            if c == 0:
                continue
            if k < d:
                out[k] += c
            else:
                if k >= len(self._fold):
                    red = self.root_power(k % self.N).coeffs
                else:
                    red = self._fold[k]
                for i, r in enumerate(red):
                    if r:
                        out[i] += c * r
        return CycScalar(self, tuple(out))


@lru_cache(maxsize=None)
def make_context(n: int) -> CycContext:
    return CycContext(n)


def _coerce(ctx, other):
    if type(other) is CycScalar and other.ctx is ctx:
        return other
    if isinstance(other, CycScalar):
        if other.ctx is not ctx and other.ctx != ctx:
            raise ValueError("mixing scalars from different fields")
        return other
    if isinstance(other, (int, Fraction)):
        return ctx.scalar(other)
    return None


def _from_ints(ctx, nums, den):
    """Build a scalar from integer numerators over a positive common denominator."""
    g = den
    for x in nums:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g != 1:
        nums = [x // g for x in nums]
        den //= g
    return CycScalar._raw(ctx, tuple(nums), den)


class CycScalar:
    """An element of Q(z) stored as integer numerators over one positive denominator."""

    __slots__ = ("ctx", "num", "den", "_hash", "_coeffs")

    def __init__(self, ctx: CycContext, coeffs):
        den = 1
        fr = [Fraction(c) for c in coeffs]
        for c in fr:
            d = c.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        self.ctx = ctx
        self.num = tuple(c.numerator * (den // c.denominator) for c in fr)
        self.den = den
        self._hash = None
        self._coeffs = None

    @classmethod
    def _raw(cls, ctx, num, den):
        s = cls.__new__(cls)
        s.ctx = ctx
        s.num = num
        s.den = den
        s._hash = None
        s._coeffs = None
        return s

    @property
    def coeffs(self):
        if self._coeffs is None:
            self._coeffs = tuple(Fraction(x, self.den) for x in self.num)
        return self._coeffs

    def ints(self):
        return self.num, self.den

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not rational")
        return Fraction(self.num[0], self.den)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = other if isinstance(other, CycScalar) else _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den and self.ctx == o.ctx

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.n, self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"CycScalar({format_scalar(self)!r}, n={self.ctx.n})"

    def __str__(self):
        return format_scalar(self)

    def __neg__(self):
        return CycScalar._raw(self.ctx, tuple(-x for x in self.num), self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return _combine(self, o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return _combine(self, o, -1)

    def __rsub__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if type(other) is CycScalar and (other.ctx is self.ctx):
            o = other
        elif isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return _from_ints(self.ctx, [x * other.numerator for x in self.num], self.den * other.denominator)
        else:
            o = _coerce(self.ctx, other)
            if o is None:
                return NotImplemented
        a, b = self.num, o.num
        if not any(a) or not any(b):
            return self.ctx.zero()
        den = self.den * o.den
        if not any(b[1:]):
            r = b[0]
            return _from_ints(self.ctx, [x * r for x in a], den)
        if not any(a[1:]):
            r = a[0]
            return _from_ints(self.ctx, [x * r for x in b], den)
        d = len(a)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        fold = self.ctx._ifold
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for i, r in enumerate(fold[k]):
                    if r:
                        out[i] += c * r
        return _from_ints(self.ctx, out, den)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return self.ctx.scalar(Fraction(self.den, self.num[0]))
        # extended euclid: s*a + t*phi = g, g a nonzero constant
        a = _trim(self.coeffs)
        b = [Fraction(c) for c in self.ctx.phi]
        s0, s1 = [Fraction(1)], []
        r0, r1 = a, b
        while r1:
            quo, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1))
        assert len(r0) == 1, "element not invertible modulo the cyclotomic polynomial"
        c = r0[0]
        return self.ctx.reduce([x / c for x in s0])

    def __truediv__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(self.ctx, other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def to_complex(self) -> complex:
        """Floating point value at z = exp(i*pi/n); only for cross-checks."""
        import cmath
        w = cmath.exp(1j * cmath.pi / self.ctx.n)
        return sum(x * w ** k for k, x in enumerate(self.num)) / self.den


def _combine(x, y, sign):
    a, da = x.num, x.den
    b, db = y.num, y.den
    if da == db:
        return _from_ints(x.ctx, [u + sign * v for u, v in zip(a, b)], da)
    g = gcd(da, db)
    fa, fb = db // g, da // g
    return _from_ints(x.ctx, [u * fa + sign * v * fb for u, v in zip(a, b)], da * fa)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def arith(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        if not b.is_rational() or b.rational().denominator != 1:
            raise ValueError("exponent must be an integer")
        return a ** int(b.rational())
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def root_power(ctx: CycContext, k: int) -> CycScalar:
    return ctx.root_power(k)


def zeta(ctx: CycContext) -> CycScalar:
    return ctx.zeta()


def q(ctx: CycContext) -> CycScalar:
    return ctx.q()


# parsing and formatting

class ScalarSyntaxError(ValueError):
    def __init__(self, message, pos, text):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    text = text.replace("−", "-")
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ScalarSyntaxError(f"unexpected character {text[pos + stripped]!r}", pos + stripped, text)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("z", None, start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, ctx, text):
        self.ctx = ctx
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ScalarSyntaxError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1] or self.peek()[0]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            w = self.unary()
            if tok[1] == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ScalarSyntaxError("division by zero", tok[2], self.text)
                v = v / w
        return v

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            k = self.exponent()
            if k < 0 and base.is_zero():
                raise ScalarSyntaxError("division by zero", tok[2], self.text)
            base = base ** k
        return base

    def exponent(self):
        t = self.peek()
        sign = 1
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
            t = self.peek()
        if t[0] == "num":
            self.take()
            return sign * t[1]
        if t[0] == "op" and t[1] == "(":
            self.take()
            v = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            if not v.is_rational() or v.rational().denominator != 1:
                self.error("exponent must be an integer", t)
            return sign * int(v.rational())
        self.error("exponent must be an integer")

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return self.ctx.scalar(t[1])
        if t[0] == "z":
            return self.ctx.z()
        if t[0] == "op" and t[1] == "(":
            v = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return v
        self.i -= 1
        self.error("expected a number, 'z' or '('")


def parse_scalar(ctx: CycContext, text: str) -> CycScalar:
    return _Parser(ctx, str(text)).parse()


def _format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_scalar(s: CycScalar) -> str:
    parts = []
    for k in range(len(s.coeffs) - 1, -1, -1):
        c = s.coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _format_rational(mag)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if mag == 1 else f"{_format_rational(mag)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def nth_root(s: CycScalar, k: int):
    """A k-th root of s of the form r * z^t with r rational, or None."""
    ctx = s.ctx
    if k < 1:
        raise ValueError("root degree must be positive")
    if s.is_zero():
        return ctx.zero()
    for t in range(ctx.N):
        w = s * ctx.root_power(-t)
        if not w.is_rational():
            continue
        rho = w.rational()
        r = _rational_root(abs(rho), k)
        if r is None:
            continue
        # s = rho * z^t; need (r * z^u)^k = sign * r^k * z^t
        target = t + (ctx.n if rho < 0 else 0)
        for u in range(ctx.N):
            if (u * k - target) % ctx.N == 0:
                cand = ctx.scalar(r) * ctx.root_power(u)
                if cand ** k == s:
                    return cand
    return None


def _int_root(x: int, k: int):
    if x < 0:
        return None
    lo, hi = 0, 1
    while hi ** k <= x:
        hi *= 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo ** k == x else None


def _rational_root(x: Fraction, k: int):
    a = _int_root(x.numerator, k)
    b = _int_root(x.denominator, k)
    if a is None or b is None:
        return None
    return Fraction(a, b)
