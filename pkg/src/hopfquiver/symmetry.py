"""Z_n-actions on quivers: orbits, components and canonical labels."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd

from .cyclo import CycContext, format_scalar, parse_scalar
from .quiver import Quiver, QuiverError


class ActionError(ValueError):
    pass


class ZnAction:
    """g permutes vertices and sends each arrow a to scale(a) * image(a)."""

    def __init__(self, n, vertex_perm, arrow_map, ctx: CycContext = None):
        from .cyclo import make_context
        self.n = int(n)
        self.ctx = ctx or make_context(self.n)
        self.vertex_perm = {str(k): str(v) for k, v in vertex_perm.items()}
        self.arrow_map = {}
        for a, (img, scale) in arrow_map.items():
            self.arrow_map[str(a)] = (str(img), self.ctx.scalar(scale))

    def image(self, a):
        return self.arrow_map[a][0]

    def scale(self, a):
        return self.arrow_map[a][1]

    def preimage(self, b):
        for a, (img, _) in self.arrow_map.items():
            if img == b:
                return a
        raise KeyError(b)

    def __eq__(self, other):
        return (isinstance(other, ZnAction) and self.n == other.n
                and self.vertex_perm == other.vertex_perm and self.arrow_map == other.arrow_map)

    def __repr__(self):
        return f"ZnAction(n={self.n}, {len(self.vertex_perm)} vertices, {len(self.arrow_map)} arrows)"

    def to_json(self):
        return {
            "n": self.n,
            "vertex_perm": dict(self.vertex_perm),
            "arrows": {a: {"image": img, "scale": format_scalar(s)}
                       for a, (img, s) in self.arrow_map.items()},
        }

    def inverse(self) -> "ZnAction":
        """The action of g^{-1}."""
        vp = {v: k for k, v in self.vertex_perm.items()}
        am = {img: (a, s.inverse()) for a, (img, s) in self.arrow_map.items()}
        return ZnAction(self.n, vp, am, self.ctx)


def identity_action(quiver: Quiver, n, ctx=None) -> ZnAction:
    return ZnAction(n, {v: v for v in quiver.vertices},
                    {a.id: (a.id, 1) for a in quiver.arrows}, ctx)


def action_from_perm(quiver: Quiver, n, vertex_perm, ctx=None, scales=None) -> ZnAction:
    """Induce the arrow permutation from a vertex permutation (Schurian quivers only)."""
    scales = scales or {}
    arrows = {}
    for a in quiver.arrows:
        b = quiver.arrow_between(vertex_perm[a.src], vertex_perm[a.tgt])
        if b is None:
            raise ActionError(f"vertex permutation does not map arrow {a.id} to an arrow")
        arrows[a.id] = (b.id, scales.get(a.id, 1))
    return ZnAction(n, vertex_perm, arrows, ctx)


def parse_action(data, ctx: CycContext = None) -> ZnAction:
    from .cyclo import make_context
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ActionError(f"$: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ActionError("$: expected an object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ActionError("$.n: expected an integer >= 2")
    ctx = ctx or make_context(n)
    if ctx.n != n:
        raise ActionError(f"$.n: {n} does not match the scalar context (n={ctx.n})")
    vp = data.get("vertex_perm")
    if not isinstance(vp, dict):
        raise ActionError("$.vertex_perm: expected an object")
    arrows = data.get("arrows", {})
    if not isinstance(arrows, dict):
        raise ActionError("$.arrows: expected an object")
    am = {}
    for a, spec in arrows.items():
        if not isinstance(spec, dict) or "image" not in spec:
            raise ActionError(f"$.arrows.{a}: expected an object with an 'image' field")
        scale = spec.get("scale", "1")
        try:
            s = parse_scalar(ctx, str(scale))
        except ValueError as exc:
            raise ActionError(f"$.arrows.{a}.scale: {exc}") from exc
        am[a] = (spec["image"], s)
    return ZnAction(n, vp, am, ctx)


def serialize_action(act: ZnAction) -> str:
    return json.dumps(act.to_json(), indent=2)


def _cycles(perm, items):
    seen, out = set(), []
    for x in sorted(items):
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = perm[x]
        while y != x:
            if y in seen:
                raise ActionError(f"not a permutation near {y!r}")
            cyc.append(y)
            seen.add(y)
            y = perm[y]
        out.append(cyc)
    return out


def _order(cycles):
    o = 1
    for c in cycles:
        o = o * len(c) // gcd(o, len(c))
    return o


def validate_action(quiver: Quiver, act: ZnAction) -> dict:
    problems = []
    vs = set(quiver.vertices)
    if set(act.vertex_perm) != vs:
        problems.append({"kind": "vertex-domain", "detail": "vertex_perm must be defined on every vertex"})
    if set(act.vertex_perm.values()) != vs or len(set(act.vertex_perm.values())) != len(act.vertex_perm):
        problems.append({"kind": "vertex-bijection", "detail": "vertex_perm is not a bijection of the vertex set"})
    ids = {a.id for a in quiver.arrows}
    if set(act.arrow_map) != ids:
        problems.append({"kind": "arrow-domain", "detail": "arrow map must be defined on every arrow"})
    imgs = [img for img, _ in act.arrow_map.values()]
    if set(imgs) != ids or len(imgs) != len(set(imgs)):
        problems.append({"kind": "arrow-bijection", "detail": "arrow images do not form a permutation"})
    if problems:
        return {"valid": False, "violations": problems, "faithful": False, "order": None}
    for a in quiver.arrows:
        img, s = act.arrow_map[a.id]
        b = quiver.arrow[img]
        if b.src != act.vertex_perm[a.src] or b.tgt != act.vertex_perm[a.tgt]:
            problems.append({"kind": "not-automorphism", "arrow": a.id, "image": img})
        if s.is_zero():
            problems.append({"kind": "zero-scale", "arrow": a.id})
    vcyc = _cycles(act.vertex_perm, quiver.vertices)
    acyc = _cycles({a: act.arrow_map[a][0] for a in act.arrow_map}, ids)
    order = _order(vcyc + acyc)
    if act.n % order:
        problems.append({"kind": "order", "detail": f"permutation order {order} does not divide n={act.n}"})
    elif not any(p["kind"] == "zero-scale" for p in problems):
        for cyc in acyc:
            prod = act.ctx.one()
            for a in cyc:
                prod = prod * act.scale(a)
            total = prod ** (act.n // len(cyc))
            if total != act.ctx.one():
                problems.append({"kind": "scale-product", "orbit": cyc,
                                 "product": format_scalar(total)})
    return {"valid": not problems, "violations": problems,
            "faithful": order == act.n, "order": order}


def vertex_orbits(quiver: Quiver, act: ZnAction) -> list:
    """Orbits as lists starting at the smallest id and following g."""
    return _cycles(act.vertex_perm, quiver.vertices)


def arrow_orbits(quiver: Quiver, act: ZnAction) -> list:
    return _cycles({a: act.arrow_map[a][0] for a in act.arrow_map}, [a.id for a in quiver.arrows])


def orbits(quiver: Quiver, act: ZnAction) -> dict:
    return {"vertex": vertex_orbits(quiver, act), "arrow": arrow_orbits(quiver, act)}


def orbit_key(orbit) -> str:
    return f"orbit-of:{min(orbit)}"


@dataclass
class Component:
    kind: str  # "A", "B" or "isolated"
    orbits: tuple  # one orbit for A / isolated, (source, target) for B
    arrows: list = field(default_factory=list)
    labels: list = field(default_factory=list)  # per orbit: {vertex: label in 1..m}
    arrow_labels: dict = field(default_factory=dict)  # arrow id -> (i, j)

    @property
    def sizes(self):
        return tuple(len(o) for o in self.orbits)

    @property
    def vertices(self):
        out = []
        for o in self.orbits:
            out.extend(o)
        return out

    def arrow_at(self, i, j):
        """Arrow with labels (i, j) reduced mod the orbit sizes, or None."""
        m = len(self.orbits[0])
        mp = len(self.orbits[-1])
        key = ((i - 1) % m + 1, (j - 1) % mp + 1)
        return self._by_label().get(key)

    def _by_label(self):
        cache = getattr(self, "_cache", None)
        if cache is None:
            cache = {lab: a for a, lab in self.arrow_labels.items()}
            object.__setattr__(self, "_cache", cache)
        return cache

    def name(self, a) -> str:
        i, j = self.arrow_labels[a]
        return f"{'a' if self.kind == 'A' else 'b'}^{i}_{j}"

    def to_json(self):
        d = {"kind": {"A": "TypeA", "B": "TypeB", "isolated": "IsolatedVertices"}[self.kind],
             "orbits": [list(o) for o in self.orbits],
             "sizes": list(self.sizes)}
        if self.kind == "B":
            d["labels"] = {"source": self.labels[0], "target": self.labels[1]}
        else:
            d["labels"] = self.labels[0]
        if self.arrows:
            d["arrows"] = {a: self.name(a) for a in self.arrows}
        return d


def _rotate_to_min(orbit, perm):
    start = min(orbit)
    out = [start]
    v = perm[start]
    while v != start:
        out.append(v)
        v = perm[v]
    return out


def canonical_labels(c: Component, quiver: Quiver, act: ZnAction) -> Component:
    """Relabel so each orbit starts at its smallest id; idempotent."""
    orbs = tuple(_rotate_to_min(o, act.vertex_perm) for o in c.orbits)
    labels = [{v: k + 1 for k, v in enumerate(o)} for o in orbs]
    src_lab = labels[0]
    tgt_lab = labels[-1]
    arrow_labels = {}
    for aid in c.arrows:
        a = quiver.arrow[aid]
        arrow_labels[aid] = (src_lab[a.src], tgt_lab[a.tgt])
    arrows = sorted(c.arrows, key=lambda x: arrow_labels[x])
    return Component(c.kind, orbs, arrows, labels, arrow_labels)


def decompose_components(quiver: Quiver, act: ZnAction) -> list:
    """Type A per orbit with internal arrows, Type B per ordered orbit pair, isolated orbits last."""
    orbs = vertex_orbits(quiver, act)
    where = {}
    for k, o in enumerate(orbs):
        for v in o:
            where[v] = k
    groups = {}
    for a in quiver.arrows:
        key = (where[a.src], where[a.tgt])
        groups.setdefault(key, []).append(a.id)
    touched = set()
    comps = []
    for (s, t) in sorted(groups, key=lambda k: (min(orbs[k[0]]), min(orbs[k[1]]))):
        touched.update((s, t))
        if s == t:
            c = Component("A", (orbs[s],), groups[(s, t)])
        else:
            c = Component("B", (orbs[s], orbs[t]), groups[(s, t)])
        comps.append(canonical_labels(c, quiver, act))
    for k, o in enumerate(orbs):
        if k not in touched:
            comps.append(canonical_labels(Component("isolated", (o,), []), quiver, act))
    return comps


def glue_components(components, quiver: Quiver = None) -> Quiver:
    """Union of the components as a quiver; vertex order follows `quiver` if given."""
    verts, arrow_ids = set(), set()
    for c in components:
        verts.update(c.vertices)
        arrow_ids.update(c.arrows)
    if quiver is not None:
        return quiver.subquiver(verts, arrow_ids)
    raise ValueError("a reference quiver is needed to recover arrow endpoints")


def classify_minimal(quiver: Quiver, act: ZnAction):
    """("TypeA", m) / ("TypeB", m, m') when Q is one minimal component, else ("NotMinimal",)."""
    comps = [c for c in decompose_components(quiver, act) if c.kind != "isolated"]
    if len(comps) == 1 and set(comps[0].vertices) == set(quiver.vertices):
        c = comps[0]
        if c.kind == "A":
            return ("TypeA", c.sizes[0])
        return ("TypeB", c.sizes[0], c.sizes[1])
    return ("NotMinimal",)


def format_classification(cls) -> str:
    if cls[0] == "TypeA":
        return f"TypeA({cls[1]})"
    if cls[0] == "TypeB":
        return f"TypeB({cls[1]}, {cls[2]})"
    return "NotMinimal"


def require_valid(quiver: Quiver, act: ZnAction):
    rep = validate_action(quiver, act)
    if not rep["valid"]:
        v = rep["violations"][0]
        raise ActionError(f"invalid action: {v}")
    return rep


__all__ = [
    "ActionError", "ZnAction", "Component", "identity_action", "action_from_perm",
    "parse_action", "serialize_action", "validate_action", "vertex_orbits", "arrow_orbits",
    "orbits", "orbit_key", "canonical_labels", "decompose_components", "glue_components",
    "classify_minimal", "format_classification", "require_valid", "QuiverError",
]
