"""Extend generator actions to the filtered path basis and check the relations exactly."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .cyclo import format_scalar
from .quiver import AlgebraElement, Path, add_into, enumerate_paths, format_element, mul_terms, split_path


def thread_count():
    try:
        return max(1, int(os.environ.get("HOPFQ_THREADS", "1")))
    except ValueError:
        return 1


class SkewOperator:
    """A linear operator h on kQ with h.(pq) = (left.p)(h.q) + (h.p)(right.q).

    `left` and `right` are grouplike operators (or None for the identity);
    x in T(n) is (1, g)-skew-primitive, so left=None, right=g.
    """

    def __init__(self, quiver, ctx, table, left=None, right=None):
        self.quiver = quiver
        self.ctx = ctx
        self.table = table
        self.left = left
        self.right = right
        self.cache = {}

    def on_path(self, p: Path) -> dict:
        if len(p) <= 1:
            return self.table.get(p, {})
        hit = self.cache.get(p)
        if hit is not None:
            return hit
        a, rest = split_path(self.quiver, p, 1)
        # h.(a rest) = (left.a)(h.rest) + (h.a)(right.rest)
        la = {a: self.ctx.one()} if self.left is None else self.left.on_path(a)
        hr = self.on_path(rest)
        ha = self.table.get(a, {})
        rr = {rest: self.ctx.one()} if self.right is None else self.right.on_path(rest)
        out = mul_terms(la, hr)
        add_into(out, mul_terms(ha, rr))
        self.cache[p] = out
        return out

    def apply(self, terms: dict) -> dict:
        out = {}
        for p, c in terms.items():
            add_into(out, self.on_path(p), c)
        return out


class GroupOperator:
    """A grouplike acting by an automorphism given on generators."""

    def __init__(self, quiver, ctx, vertex_map, arrow_map):
        self.quiver = quiver
        self.ctx = ctx
        self.vertex_map = vertex_map  # v -> v'
        self.arrow_map = arrow_map  # a -> (a', scale)
        self.cache = {}

    def on_path(self, p: Path) -> dict:
        hit = self.cache.get(p)
        if hit is not None:
            return hit
        if p.is_trivial:
            out = {Path.trivial(self.vertex_map[p.src]): self.ctx.one()}
        else:
            ids, c = [], self.ctx.one()
            for a in p.arrows:
                img, s = self.arrow_map[a]
                ids.append(img)
                c = c * s
            out = {Path(self.vertex_map[p.src], self.vertex_map[p.tgt], ids): c}
        self.cache[p] = out
        return out

    def apply(self, terms: dict) -> dict:
        out = {}
        for p, c in terms.items():
            add_into(out, self.on_path(p), c)
        return out


def group_operator(quiver, act):
    return GroupOperator(quiver, act.ctx, act.vertex_perm, act.arrow_map)


class OperatorTable:
    """Sparse columns of G and X on the paths of length <= L."""

    def __init__(self, spec, L):
        self.spec = spec
        self.L = L
        self.basis = enumerate_paths(spec.quiver, L)
        self.g_op = group_operator(spec.quiver, spec.act)
        self.x_op = SkewOperator(spec.quiver, spec.ctx, spec.x_on, None, self.g_op)
        self.G = {p: self.g_op.on_path(p) for p in self.basis}
        self.X = _columns(self.x_op, self.basis)

    def apply_G(self, terms):
        return self.g_op.apply(terms)

    def apply_X(self, terms):
        return self.x_op.apply(terms)


def _columns(op, basis):
    # columns are independent once shorter paths are cached; fill by length
    out = {}
    threads = thread_count()
    by_len = {}
    for p in basis:
        by_len.setdefault(len(p), []).append(p)
    for ell in sorted(by_len):
        layer = by_len[ell]
        if threads > 1 and len(layer) > 64:
            with ThreadPoolExecutor(threads) as ex:
                cols = list(ex.map(op.on_path, layer))
        else:
            cols = [op.on_path(p) for p in layer]
        out.update(zip(layer, cols))
    return out


def extend_operators(spec, L=None) -> OperatorTable:
    if L is None:
        L = default_depth(spec.n)
    if L < 1:
        raise ValueError("depth must be at least 1")
    return OperatorTable(spec, L)


def default_depth(n):
    return min(2 * n, 8)


class VerificationReport:
    SECTIONS = ("relations", "splits", "faithfulness")

    def __init__(self):
        self.sections = {s: [] for s in self.SECTIONS}

    def add(self, section, name, ok, witness=None):
        entry = {"name": name, "status": "pass" if ok else "fail"}
        if not ok and witness is not None:
            entry["witness"] = witness
        self.sections.setdefault(section, []).append(entry)
        return ok

    @property
    def ok(self):
        return all(e["status"] == "pass" for sec in self.sections.values() for e in sec)

    def failures(self):
        return [(s, e) for s, sec in self.sections.items() for e in sec if e["status"] != "pass"]

    def entry(self, name):
        for sec in self.sections.values():
            for e in sec:
                if e["name"] == name:
                    return e
        return None

    def merge(self, other, prefix=""):
        for s, sec in other.sections.items():
            for e in sec:
                e = dict(e)
                e["name"] = prefix + e["name"]
                self.sections.setdefault(s, []).append(e)
        return self

    def to_json(self):
        return {"all_pass": self.ok, **self.sections}


def _witness(quiver, ctx, p, residual):
    return {"path": p.label(), "residual": format_element(AlgebraElement(quiver, ctx, residual))}


def _first_failure(basis, check):
    for p in basis:
        res = check(p)
        if res:
            return p, res
    return None


def compare_on_basis(report, section, name, basis, lhs, rhs, quiver, ctx):
    """Record whether lhs(p) == rhs(p) for every basis path; witness is the first failure."""
    def diff(p):
        d = dict(lhs(p))
        add_into(d, rhs(p), -ctx.one())
        return d
    hit = _first_failure(basis, diff)
    return report.add(section, name, hit is None, None if hit is None else _witness(quiver, ctx, *hit))


def power(apply, k, terms):
    for _ in range(k):
        if not terms:
            break
        terms = apply(terms)
    return terms


def check_relations(table: OperatorTable, report=None) -> VerificationReport:
    spec = table.spec
    ctx, n, q = spec.ctx, spec.n, spec.quiver
    zeta = spec.zeta
    report = report or VerificationReport()
    basis = table.basis
    one = ctx.one()
    G, X = table.apply_G, table.apply_X
    compare_on_basis(report, "relations", "g^n = 1", basis,
                     lambda p: power(G, n, {p: one}), lambda p: {p: one}, q, ctx)
    compare_on_basis(report, "relations", "x^n = 0", basis,
                     lambda p: power(X, n, {p: one}), lambda p: {}, q, ctx)
    compare_on_basis(report, "relations", "xg = zeta gx", basis,
                     lambda p: X(G({p: one})), lambda p: {r: c * zeta for r, c in G(X({p: one})).items()},
                     q, ctx)
    unit = {Path.trivial(v): one for v in q.vertices}
    x1 = X(unit)
    report.add("relations", "x.1 = 0", not x1,
               None if not x1 else {"path": "1", "residual": format_element(AlgebraElement(q, ctx, x1))})
    g1 = G(unit)
    g1d = dict(g1)
    add_into(g1d, unit, -one)
    report.add("relations", "g.1 = 1", not g1d)
    return report


def check_split_consistency(table: OperatorTable, report=None) -> VerificationReport:
    spec = table.spec
    ctx, q = spec.ctx, spec.quiver
    one = ctx.one()
    report = report or VerificationReport()
    xo, go = table.x_op, table.g_op

    def split_residual(p):
        target = table.X[p]
        for k in range(1, len(p)):
            u, v = split_path(q, p, k)
            rhs = mul_terms({u: one}, xo.on_path(v))
            add_into(rhs, mul_terms(xo.on_path(u), go.on_path(v)))
            d = dict(target)
            add_into(d, rhs, -one)
            if d:
                return d
        return None

    long_paths = [p for p in table.basis if len(p) >= 2]
    hit = _first_failure(long_paths, split_residual)
    report.add("splits", "x(uv) = u(x.v) + (x.u)(g.v) at every split", hit is None,
               None if hit is None else _witness(q, ctx, *hit))

    def e_residual(p):
        a = p
        s, t = Path.trivial(a.src), Path.trivial(a.tgt)
        xa = xo.on_path(a)
        left = mul_terms({s: one}, xa)
        add_into(left, mul_terms(xo.on_path(s), go.on_path(a)))
        right = mul_terms({a: one}, xo.on_path(t))
        add_into(right, mul_terms(xa, go.on_path(t)))
        for side in (left, right):
            d = dict(side)
            add_into(d, xa, -one)
            if d:
                return d
        return None

    arrows = [p for p in table.basis if len(p) == 1]
    hit = _first_failure(arrows, e_residual)
    report.add("splits", "x(e_s a) = x(a e_t) = x.a", hit is None,
               None if hit is None else _witness(q, ctx, *hit))

    verts = [Path.trivial(v) for v in q.vertices]

    def idem_residual(e):
        for f in verts:
            prod = mul_terms({e: one}, xo.on_path(f))
            add_into(prod, mul_terms(xo.on_path(e), go.on_path(f)))
            want = xo.on_path(e) if e == f else {}
            d = dict(prod)
            add_into(d, want, -one)
            if d:
                return d
        return None

    hit = _first_failure(verts, idem_residual)
    report.add("splits", "x(e_i e_j) = delta_ij x.e_i", hit is None,
               None if hit is None else _witness(q, ctx, *hit))
    return report


def check_filtration(table: OperatorTable, report=None):
    report = report or VerificationReport()
    q, ctx = table.spec.quiver, table.spec.ctx

    def grow(p):
        for col in (table.G[p], table.X[p]):
            if any(len(r) > len(p) for r in col):
                return col
        return None

    hit = _first_failure(table.basis, grow)
    report.add("splits", "filtration preserved", hit is None,
               None if hit is None else _witness(q, ctx, *hit))
    return report


def verify_all(spec, L=None, require_inner_faithful=False) -> VerificationReport:
    from .taft import is_inner_faithful
    table = extend_operators(spec, L)
    report = VerificationReport()
    check_relations(table, report)
    check_split_consistency(table, report)
    check_filtration(table, report)
    faithful = is_inner_faithful(spec)
    entry = {"name": "inner faithful", "status": "pass", "value": faithful}
    if require_inner_faithful and not faithful:
        entry["status"] = "fail"
        entry["witness"] = {"detail": "x acts by zero on every generator"}
    report.sections["faithfulness"].append(entry)
    return report


def apply_generator(spec, which, element: AlgebraElement) -> AlgebraElement:
    if which == "g":
        op = group_operator(spec.quiver, spec.act)
    elif which == "x":
        op = SkewOperator(spec.quiver, spec.ctx, spec.x_on, None, group_operator(spec.quiver, spec.act))
    else:
        raise ValueError(f"unknown generator {which!r} for a Taft action")
    return AlgebraElement(spec.quiver, spec.ctx, op.apply(element.terms))


def format_terms(quiver, ctx, terms):
    return format_element(AlgebraElement(quiver, ctx, terms))


__all__ = ["SkewOperator", "GroupOperator", "OperatorTable", "VerificationReport", "extend_operators",
           "check_relations", "check_split_consistency", "verify_all", "apply_generator",
           "default_depth", "format_scalar", "power", "compare_on_basis", "group_operator"]
