"""Laurent polynomials in named symbols with cyclotomic coefficients.

Used only for reporting parameter families; all real computation is numeric.
"""

from __future__ import annotations

from .cyclo import CycContext, CycScalar, format_scalar


def _mono(items) -> tuple:
    d = {}
    for s, e in items:
        d[s] = d.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in d.items() if e))


class Poly:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: CycContext, terms=None):
        self.ctx = ctx
        self.terms = {}
        for m, c in (terms or {}).items():
            c = ctx.scalar(c)
            if not c.is_zero():
                self.terms[_mono(m)] = c

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, {(): c})

    @classmethod
    def symbol(cls, ctx, name, exp=1):
        return cls(ctx, {((name, exp),): 1})

    def is_zero(self):
        return not self.terms

    def symbols(self):
        return {s for m in self.terms for s, _ in m}

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            v = c if v is None else v + c
            if v.is_zero():
                t.pop(m, None)
            else:
                t[m] = v
        return Poly(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono(m1 + m2)
                v = t.get(m)
                v = c1 * c2 if v is None else v + c1 * c2
                if v.is_zero():
                    t.pop(m, None)
                else:
                    t[m] = v
        return Poly(self.ctx, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (m, c), = self.terms.items()
            return Poly(self.ctx, {tuple((s, -e * -k) for s, e in m): c ** k})
        out = Poly.const(self.ctx, 1)
        for _ in range(k):
            out = out * self
        return out

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(self.ctx, other)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.ctx, other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def subs(self, env: dict) -> "Poly":
        """Substitute symbols by Polys (monomial values only for negative powers)."""
        out = Poly(self.ctx)
        for m, c in self.terms.items():
            term = Poly.const(self.ctx, c)
            for s, e in m:
                if s in env:
                    term = term * (env[s] ** e)
                else:
                    term = term * Poly.symbol(self.ctx, s, e)
            out = out + term
        return out

    def evaluate(self, env: dict) -> CycScalar:
        total = self.ctx.zero()
        for m, c in self.terms.items():
            v = c
            for s, e in m:
                v = v * (env[s] ** e)
            total = total + v
        return total

    def degree_in(self, s):
        return max((dict(m).get(s, 0) for m in self.terms), default=0)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)

    def to_json(self):
        return [{"coeff": format_scalar(c), "monomial": {s: e for s, e in m}}
                for m, c in sorted(self.terms.items())]


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for m, c in sorted(p.terms.items(), key=lambda kv: (-sum(abs(e) for _, e in kv[0]), kv[0])):
        syms = "*".join(s if e == 1 else f"{s}^{e}" for s, e in m)
        cs = format_scalar(c)
        neg = False
        if not syms:
            body = cs
        elif cs == "1":
            body = syms
        elif cs == "-1":
            body, neg = syms, True
        elif c.is_rational():
            neg = cs.startswith("-")
            body = f"{cs.lstrip('-')}*{syms}"
        else:
            body = f"({cs})*{syms}"
        if not syms and cs.startswith("-") and c.is_rational():
            neg, body = True, cs[1:]
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
