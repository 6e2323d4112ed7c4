"""Quivers, paths and the path algebra with exact coefficients.

Paths are read left to right: a1 a2 ... ak with t(a_i) = s(a_{i+1}).
"""

from __future__ import annotations

import json
from collections import namedtuple

from .cyclo import CycContext, CycScalar

Arrow = namedtuple("Arrow", ["id", "src", "tgt"])


class QuiverError(ValueError):
    pass


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = [str(v) for v in vertices]
        self.arrows = [Arrow(str(a[0]), str(a[1]), str(a[2])) for a in arrows]
        self.arrow = {a.id: a for a in self.arrows}
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.out_arrows = {v: [] for v in self.vertices}
        for a in self.arrows:
            if a.src in self.out_arrows:
                self.out_arrows[a.src].append(a)
        for v in self.out_arrows:
            self.out_arrows[v].sort(key=lambda a: a.id)
        self._key = (tuple(self.vertices), tuple(self.arrows))

    def __eq__(self, other):
        return isinstance(other, Quiver) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def arrow_between(self, src, tgt):
        for a in self.out_arrows.get(src, ()):
            if a.tgt == tgt:
                return a
        return None

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.id, a.tgt, a.src) for a in self.arrows])

    def subquiver(self, vertices, arrow_ids) -> "Quiver":
        vs = [v for v in self.vertices if v in set(vertices)]
        ids = set(arrow_ids)
        return Quiver(vs, [a for a in self.arrows if a.id in ids])

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }


class Path:
    """A trivial path e_v or a composable arrow sequence."""

    __slots__ = ("src", "tgt", "arrows", "_hash")

    def __init__(self, src, tgt, arrows=()):
        self.src = src
        self.tgt = tgt
        self.arrows = tuple(arrows)
        self._hash = hash((src, tgt, self.arrows))

    @classmethod
    def trivial(cls, v) -> "Path":
        return cls(v, v, ())

    @classmethod
    def of_arrow(cls, a: Arrow) -> "Path":
        return cls(a.src, a.tgt, (a.id,))

    @classmethod
    def from_arrows(cls, quiver: Quiver, ids) -> "Path":
        ids = list(ids)
        if not ids:
            raise QuiverError("use Path.trivial for paths of length zero")
        for x, y in zip(ids, ids[1:]):
            if quiver.arrow[x].tgt != quiver.arrow[y].src:
                raise QuiverError(f"arrows {x} and {y} are not composable")
        return cls(quiver.arrow[ids[0]].src, quiver.arrow[ids[-1]].tgt, ids)

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self):
        return not self.arrows

    def __eq__(self, other):
        return (isinstance(other, Path) and self._hash == other._hash
                and self.src == other.src and self.tgt == other.tgt and self.arrows == other.arrows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Path({self.label()})"

    def label(self) -> str:
        if not self.arrows:
            return f"e[{self.src}]"
        return "*".join(self.arrows)

    def concat(self, other: "Path"):
        """Product in the path algebra, or None when it vanishes."""
        if self.tgt != other.src:
            return None
        if not self.arrows:
            return other
        if not other.arrows:
            return self
        return Path(self.src, other.tgt, self.arrows + other.arrows)

    def reversed(self) -> "Path":
        return Path(self.tgt, self.src, self.arrows[::-1])


def path_sort_key(quiver: Quiver, p: Path):
    if not p.arrows:
        return (0, (), quiver.vertex_index.get(p.src, -1))
    return (len(p.arrows), p.arrows, 0)


def split_path(quiver: Quiver, p: Path, k: int):
    """Split a nontrivial path after k arrows (0 <= k <= len)."""
    if k == 0:
        return Path.trivial(p.src), p
    if k == len(p.arrows):
        return p, Path.trivial(p.tgt)
    mid = quiver.arrow[p.arrows[k - 1]].tgt
    return Path(p.src, mid, p.arrows[:k]), Path(mid, p.tgt, p.arrows[k:])


class AlgebraElement:
    """Sparse linear combination of paths; zero coefficients are never stored."""

    __slots__ = ("quiver", "ctx", "terms")

    def __init__(self, quiver: Quiver, ctx: CycContext, terms=None):
        self.quiver = quiver
        self.ctx = ctx
        self.terms = {}
        if terms:
            for p, c in terms.items():
                c = ctx.scalar(c)
                if not c.is_zero():
                    self.terms[p] = c

    @classmethod
    def of_path(cls, quiver, ctx, p: Path, coeff=1) -> "AlgebraElement":
        return cls(quiver, ctx, {p: coeff})

    @classmethod
    def zero(cls, quiver, ctx) -> "AlgebraElement":
        return cls(quiver, ctx)

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError("expected an AlgebraElement")
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise QuiverError("operands live in path algebras of different quivers")
        if other.ctx != self.ctx:
            raise QuiverError("operands use different scalar fields")

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(p) for p in self.terms), default=-1)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.quiver == other.quiver and self.terms == other.terms

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.quiver, self.ctx, add_terms(self.terms, other.terms))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.quiver, self.ctx, add_terms(self.terms, other.terms, -1))

    def __neg__(self):
        return AlgebraElement(self.quiver, self.ctx, {p: -c for p, c in self.terms.items()})

    def scale(self, c) -> "AlgebraElement":
        c = self.ctx.scalar(c)
        return AlgebraElement(self.quiver, self.ctx, scale_terms(self.terms, c))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: path_sort_key(self.quiver, kv[0]))

    def __repr__(self):
        return f"AlgebraElement({format_element(self)})"

    def __str__(self):
        return format_element(self)


# raw term-dict helpers, shared by the operator code for speed

def add_terms(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for p, c in b.items():
        v = out.get(p)
        v = (c if sign == 1 else -c) if v is None else (v + c if sign == 1 else v - c)
        if v.is_zero():
            out.pop(p, None)
        else:
            out[p] = v
    return out


def add_into(acc: dict, b: dict, coeff=None):
    for p, c in b.items():
        if coeff is not None:
            c = c * coeff
        v = acc.get(p)
        v = c if v is None else v + c
        if v.is_zero():
            acc.pop(p, None)
        else:
            acc[p] = v
    return acc


def scale_terms(a: dict, c: CycScalar) -> dict:
    if c.is_zero():
        return {}
    return {p: v * c for p, v in a.items()}


def mul_terms(a: dict, b: dict) -> dict:
    out = {}
    for p, c in a.items():
        for r, d in b.items():
            pr = p.concat(r)
            if pr is None:
                continue
            v = out.get(pr)
            v = c * d if v is None else v + c * d
            if v.is_zero():
                out.pop(pr, None)
            else:
                out[pr] = v
    return out


def multiply(p: AlgebraElement, q: AlgebraElement) -> AlgebraElement:
    p._check(q)
    return AlgebraElement(p.quiver, p.ctx, mul_terms(p.terms, q.terms))


def unit(quiver: Quiver, ctx: CycContext) -> AlgebraElement:
    if not quiver.vertices:
        raise QuiverError("the path algebra of an empty quiver has no unit")
    return AlgebraElement(quiver, ctx, {Path.trivial(v): 1 for v in quiver.vertices})


def enumerate_paths(quiver: Quiver, L: int) -> list:
    """All paths of length <= L, ordered by length then by arrow ids."""
    if L < 0:
        raise ValueError("length bound must be nonnegative")
    out = [Path.trivial(v) for v in quiver.vertices]
    layer = [Path.of_arrow(a) for a in quiver.arrows] if L >= 1 else []
    length = 1
    while layer and length <= L:
        layer.sort(key=lambda p: p.arrows)
        out.extend(layer)
        if length == L:
            break
        nxt = []
        for p in layer:
            for a in quiver.out_arrows.get(p.tgt, ()):
                nxt.append(Path(p.src, a.tgt, p.arrows + (a.id,)))
        layer = nxt
        length += 1
    return out


def validate_quiver(quiver: Quiver) -> dict:
    """Report every loop, parallel arrow, duplicate id and dangling endpoint."""
    problems = []
    seen_v = set()
    for v in quiver.vertices:
        if v in seen_v:
            problems.append({"kind": "duplicate-vertex", "vertex": v})
        seen_v.add(v)
    seen_a = set()
    pairs = {}
    for a in quiver.arrows:
        if a.id in seen_a:
            problems.append({"kind": "duplicate-arrow", "arrow": a.id})
        seen_a.add(a.id)
        for end in (a.src, a.tgt):
            if end not in seen_v:
                problems.append({"kind": "unknown-vertex", "arrow": a.id, "vertex": end})
        if a.src == a.tgt:
            problems.append({"kind": "loop", "arrow": a.id, "vertex": a.src})
        key = (a.src, a.tgt)
        if key in pairs:
            problems.append({"kind": "parallel", "arrows": [pairs[key], a.id], "src": a.src, "tgt": a.tgt})
        else:
            pairs[key] = a.id
    if not quiver.vertices:
        problems.append({"kind": "empty", "detail": "no vertices"})
    return {"valid": not problems, "violations": problems}


def parse_quiver(data) -> Quiver:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise QuiverError(f"$: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise QuiverError("$: expected an object")
    verts = data.get("vertices")
    if not isinstance(verts, list):
        raise QuiverError("$.vertices: expected a list")
    if not verts:
        raise QuiverError("$.vertices: empty vertex list (the path algebra would have no unit)")
    for i, v in enumerate(verts):
        if not isinstance(v, (str, int)) or isinstance(v, bool):
            raise QuiverError(f"$.vertices[{i}]: expected a string id")
    arrows = data.get("arrows", [])
    if not isinstance(arrows, list):
        raise QuiverError("$.arrows: expected a list")
    out = []
    for i, a in enumerate(arrows):
        if not isinstance(a, dict):
            raise QuiverError(f"$.arrows[{i}]: expected an object")
        for field in ("id", "src", "tgt"):
            if field not in a:
                raise QuiverError(f"$.arrows[{i}].{field}: missing")
            if not isinstance(a[field], (str, int)) or isinstance(a[field], bool):
                raise QuiverError(f"$.arrows[{i}].{field}: expected a string")
        out.append((a["id"], a["src"], a["tgt"]))
    vset = {str(v) for v in verts}
    for i, (aid, s, t) in enumerate(out):
        if str(s) not in vset:
            raise QuiverError(f"$.arrows[{i}].src: unknown vertex {s!r}")
        if str(t) not in vset:
            raise QuiverError(f"$.arrows[{i}].tgt: unknown vertex {t!r}")
    return Quiver(verts, out)


def serialize_quiver(quiver: Quiver) -> str:
    return json.dumps(quiver.to_json(), indent=2)


# a small palette; orbits cycle through it
_PALETTE = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
            "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62"]


def export_dot(quiver: Quiver, action=None, name="Q") -> str:
    """Graphviz text; vertices are colored by orbit when an action is given."""
    color = {}
    if action is not None:
        from .symmetry import vertex_orbits
        for k, orb in enumerate(vertex_orbits(quiver, action)):
            for v in orb:
                color[v] = _PALETTE[k % len(_PALETTE)]
    lines = [f"digraph {_dot_id(name)} {{"]
    for v in quiver.vertices:
        attrs = f'label="{v}"'
        if v in color:
            attrs += f', style=filled, fillcolor="{color[v]}"'
        lines.append(f"  {_dot_id(v)} [{attrs}];")
    for a in quiver.arrows:
        lines.append(f'  {_dot_id(a.src)} -> {_dot_id(a.tgt)} [label="{a.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(s):
    s = str(s)
    if s.isidentifier():
        return s
    return '"' + s.replace('"', '\\"') + '"'


def format_element(x: AlgebraElement) -> str:
    from .cyclo import format_scalar
    if not x.terms:
        return "0"
    parts = []
    for p, c in x.sorted_terms():
        cs = format_scalar(c)
        lab = p.label()
        if cs == "1":
            body, sign = lab, "+"
        elif cs == "-1":
            body, sign = lab, "-"
        elif c.is_rational():
            sign = "-" if cs.startswith("-") else "+"
            body = f"{cs.lstrip('-')}*{lab}"
        else:
            body, sign = f"({cs})*{lab}", "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_element(quiver: Quiver, ctx: CycContext, text: str) -> AlgebraElement:
    """Parse sums like "f1*f2 + 1/2*e[v1] - (z)*f3" or "1" (the unit)."""
    from .cyclo import parse_scalar
    import re
    text = text.replace("−", "-").strip()
    if not text:
        raise QuiverError("empty path expression")
    # split on top-level + and -
    terms = []
    depth = 0
    start = 0
    sign = 1
    i = 0
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        start = i = 1
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and text[i - 1] not in "*/^(":
            terms.append((sign, text[start:i]))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    terms.append((sign, text[start:]))
    acc = {}
    word_re = re.compile(r"^(?:e\[([^\]]+)\]|[A-Za-z_][\w.]*)$")
    for sign, body in terms:
        factors = [f.strip() for f in _split_top(body, "*")]
        coeff = ctx.scalar(sign)
        path = None
        has_word = False
        for f in factors:
            if not f:
                raise QuiverError(f"empty factor in {body!r}")
            m = word_re.match(f)
            if m and (m.group(1) is not None or f in quiver.arrow):
                has_word = True
                p = Path.trivial(m.group(1)) if m.group(1) is not None else Path.of_arrow(quiver.arrow[f])
                if m.group(1) is not None and m.group(1) not in quiver.vertex_index:
                    raise QuiverError(f"unknown vertex {m.group(1)!r}")
                if path is None:
                    path = p
                else:
                    nxt = path.concat(p)
                    if nxt is None:
                        raise QuiverError(f"non-composable path word {body.strip()!r}")
                    path = nxt
            elif m and f != "z" and f not in quiver.arrow:
                raise QuiverError(f"unknown arrow {f!r}")
            else:
                coeff = coeff * parse_scalar(ctx, f)
        if not has_word:
            # a bare scalar multiplies the unit
            add_into(acc, {Path.trivial(v): coeff for v in quiver.vertices})
        else:
            add_into(acc, {path: coeff})
    return AlgebraElement(quiver, ctx, acc)


def _split_top(s, sep):
    out, depth, cur = [], 0, ""
    i = 0
    while i < len(s):
        ch = s[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
        i += 1
    out.append(cur)
    return out
