"""Actions of u_q(sl2) and of the Drinfeld double D(T(n)) built from pairs of Taft actions.

Both algebras are generated by two Taft-type Hopf subalgebras, so every generator
table here comes from the Taft builder with a suitable root of unity:

  u_q(sl2):  K = g, E is x for the root q^-2 = zeta, and K.F is x for the root q^2 = zeta^-1.
  D(T(n)):   (g, x) is T(n); (G, X) is Taft for the root zeta^-1 with its own arrow scales.

With q = z^(2n-1) = z^-1 the root exponents are 2 (for zeta) and -2 (for zeta^-1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cyclo import format_scalar
from .quiver import AlgebraElement, Path, add_into, enumerate_paths, format_element
from .symmetry import ZnAction, decompose_components, orbit_key, validate_action
from .taft import (ActionSpec, ConstraintError, GlueError, TaftParams, build_component_action,
                   check_constraints, parse_params, propagate_lambda, sigma)
from .verifier import GroupOperator, SkewOperator, VerificationReport, compare_on_basis, default_depth, power


class ExtensionError(ValueError):
    pass


class ForcedGaugeError(ExtensionError):
    pass


class RegimeError(ExtensionError):
    """Input lies outside the orbit sizes handled by the builders."""


@dataclass
class UqParams:
    E: TaftParams = field(default_factory=TaftParams)
    F: TaftParams = field(default_factory=TaftParams)

    def to_json(self):
        return {"E": self.E.to_json(), "F": self.F.to_json()}


@dataclass
class DoubleParams:
    x: TaftParams = field(default_factory=TaftParams)
    X: TaftParams = field(default_factory=TaftParams)

    def to_json(self):
        return {"x": self.x.to_json(), "X": self.X.to_json()}


def _parse_pair(data, ctx, names):
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise ValueError("$: expected an object")
    out = []
    for nm in names:
        try:
            out.append(parse_params(data.get(nm, {}), ctx))
        except ValueError as exc:
            raise ValueError(f"$.{nm}{str(exc)[1:]}") from exc
    return out


def parse_uq_params(data, ctx) -> UqParams:
    return UqParams(*_parse_pair(data, ctx, ("E", "F")))


def parse_double_params(data, ctx) -> DoubleParams:
    return DoubleParams(*_parse_pair(data, ctx, ("x", "X")))


# ---------------------------------------------------------------- spec

class ExtendedSpec:
    """Generator tables for a u_q(sl2) or D(T(n)) action.

    groups: name -> ZnAction; skew: name -> (table, left, right) where left/right name
    grouplikes (None for the identity) in the rule h.(pq) = (left.p)(h.q) + (h.p)(right.q).
    This rule is the single place where coproduct conventions enter.
    """

    def __init__(self, kind, quiver, act, groups, tables, params=None, components=None):
        self.kind = kind
        self.quiver = quiver
        self.act = act
        self.ctx = act.ctx
        self.groups = groups
        self.tables = tables
        self.params = params
        self.components = components

    @property
    def n(self):
        return self.act.n

    @property
    def coproducts(self):
        if self.kind == "uq":
            # E is (1,K)-skew-primitive, F is (K^-1,1)-skew-primitive
            return {"E": (None, "K"), "F": ("K^-1", None)}
        return {"x": (None, "g"), "X": (None, "G")}

    def generator_names(self):
        return list(self.groups) + list(self.tables)

    def operators(self):
        ops = {name: GroupOperator(self.quiver, self.ctx, a.vertex_perm, a.arrow_map)
               for name, a in self.groups.items()}
        for name, (left, right) in self.coproducts.items():
            ops[name] = SkewOperator(self.quiver, self.ctx, self.tables[name],
                                     ops[left] if left else None, ops[right] if right else None)
        return ops

    def apply(self, which, element: AlgebraElement) -> AlgebraElement:
        ops = self.operators()
        if which not in ops:
            raise ValueError(f"unknown generator {which!r}; this action has {', '.join(ops)}")
        return AlgebraElement(self.quiver, self.ctx, ops[which].apply(element.terms))

    def taft_restriction(self, which=None) -> ActionSpec:
        """The Taft action of one Borel-type subalgebra, as a plain ActionSpec."""
        if self.kind == "uq":
            return ActionSpec(self.quiver, self.act, self.tables["E"], None, 2, self.components)
        if which == "X":
            return ActionSpec(self.quiver, self.groups["G"], self.tables["X"], None, -2, self.components)
        return ActionSpec(self.quiver, self.act, self.tables["x"], None, 2, self.components)

    def to_json(self):
        out = {"kind": self.kind, "n": self.n}
        for name, tab in self.tables.items():
            out[name] = {p.label(): format_element(AlgebraElement(self.quiver, self.ctx, t))
                         for p, t in tab.items()}
        if self.params is not None:
            out["params"] = self.params.to_json()
        return out


@dataclass
class ExtFragment:
    component: object
    tables: dict  # generator -> {Path: terms}
    gammas: dict  # generator -> {orbit key: value}


def glue_extensions(fragments, kind, quiver, act, groups, params=None) -> ExtendedSpec:
    """Assemble component fragments; shared orbits must agree on every gamma and table entry."""
    tables, gammas = {}, {}
    for f in fragments:
        for gen, gam in f.gammas.items():
            seen = gammas.setdefault(gen, {})
            for k, v in gam.items():
                if k in seen and seen[k] != v:
                    raise GlueError(f"incompatible gamma for {gen} on {k}: "
                                    f"{format_scalar(seen[k])} vs {format_scalar(v)}")
                seen[k] = v
        for gen, tab in f.tables.items():
            acc = tables.setdefault(gen, {})
            for p, t in tab.items():
                if p in acc and acc[p] != t:
                    raise GlueError(f"incompatible {gen}-action on {p.label()}")
                acc[p] = t
    for gen in tables:
        for v in quiver.vertices:
            tables[gen].setdefault(Path.trivial(v), {})
        for a in quiver.arrows:
            tables[gen].setdefault(Path.of_arrow(a), {})
    return ExtendedSpec(kind, quiver, act, groups, tables, params, [f.component for f in fragments])


def _record(out, name, ok, at=None, detail=None):
    r = {"name": name, "status": "pass" if ok else "fail"}
    if at is not None:
        r["at"] = at
    if detail is not None and not ok:
        r["detail"] = detail
    out.append(r)


def _prefixed(records, prefix):
    return [dict(r, name=f"{prefix}:{r['name']}") for r in records]


def _lam_at(c, params: TaftParams, ctx, i, j):
    a = c.arrow_at(i, j)
    return ctx.zero() if a is None else params.l(ctx, a)


def _raise_first(records):
    bad = [r for r in records if r["status"] != "pass"]
    if bad:
        r = bad[0]
        raise ConstraintError(f"constraint {r['name']} fails at {r.get('at')}"
                              + (f" ({r['detail']})" if r.get("detail") else ""))


def _check_regime(quiver, act, comps, allowed_small):
    n = act.n
    rep = validate_action(quiver, act)
    if not rep["valid"]:
        raise ExtensionError(f"invalid group action: {rep['violations'][0]}")
    for c in comps:
        for o in c.orbits:
            m = len(o)
            if m == n:
                continue
            if m not in allowed_small:
                raise RegimeError(f"vertex orbit {orbit_key(o)} has size {m}; "
                                  f"allowed sizes are {sorted(set(allowed_small) | {n})}")
            if c.kind != "isolated":
                raise RegimeError(f"component through {orbit_key(o)} mixes an orbit of size {m} < n "
                                  f"with arrows; only size-n orbits carry arrows here")


def _small_orbit_gamma(c, n, ctx, params_list, names, out):
    for o in c.orbits:
        if len(o) < n:
            for nm, p in zip(names, params_list):
                g = p.g(ctx, orbit_key(o))
                _record(out, f"{nm}:gamma-short-orbit", g.is_zero(), orbit_key(o),
                        f"gamma = {format_scalar(g)}")


def _diagonal_b(c, params: TaftParams, ctx, name, out):
    # read literally for Type B: labels (i, i) carry no lambda
    if c.kind != "B":
        return
    for aid in c.arrows:
        i, j = c.arrow_labels[aid]
        if i == j:
            lam = params.l(ctx, aid)
            _record(out, f"{name}:lambda-diagonal", lam.is_zero(), aid, f"lambda = {format_scalar(lam)}")


# ---------------------------------------------------------------- u_q(sl2)

def uq_vertex_constant(ctx):
    """c with the orbit condition reading gamma^E * gamma^F * c = 1."""
    q = ctx.q()
    return -(q.inverse() * (q * q - ctx.one()) ** 2)


def uq_partner_gamma(ctx, gamma):
    """The gamma on the other Borel forced by the orbit condition (n >= 3)."""
    return (ctx.scalar(gamma) * uq_vertex_constant(ctx)).inverse()


def check_uq_constraints(c, quiver, act, params: UqParams) -> list:
    ctx, n = act.ctx, act.n
    out = []
    if c.kind == "isolated" and len(c.orbits[0]) < n:
        _small_orbit_gamma(c, n, ctx, (params.E, params.F), ("E", "F"), out)
        return out
    if c.kind == "A":
        for aid in c.arrows:
            mu = act.scale(aid)
            _record(out, "mu-forced-one", mu == ctx.one(), aid, f"mu = {format_scalar(mu)}")
    out += _prefixed(check_constraints(c, quiver, act, params.E, 2), "E")
    out += _prefixed(check_constraints(c, quiver, act, params.F, -2), "F")
    _diagonal_b(c, params.E, ctx, "E", out)
    _diagonal_b(c, params.F, ctx, "F", out)
    if n >= 3:
        k = uq_vertex_constant(ctx)
        for o in c.orbits:
            key = orbit_key(o)
            v = params.E.g(ctx, key) * params.F.g(ctx, key) * k
            _record(out, "EF-vertex", v == ctx.one(), key,
                    f"-gE*gF*q^-1*(q^2-1)^2 = {format_scalar(v)}")
    if c.kind != "isolated":
        for aid in c.arrows:
            i, j = c.arrow_labels[aid]
            lhs = _lam_at(c, params.F, ctx, i, j) * _lam_at(c, params.E, ctx, i - 1, j)
            rhs = _lam_at(c, params.E, ctx, i, j) * _lam_at(c, params.F, ctx, i, j + 1)
            _record(out, "EF-lambda-coupling", lhs == rhs, aid,
                    f"{format_scalar(lhs)} != {format_scalar(rhs)}")
    return out


def _apply_group(op, terms):
    out = {}
    for p, c in terms.items():
        add_into(out, op.on_path(p), c)
    return out


def check_uq_gauge(c, act):
    """Loop-type components must carry unit scales."""
    if c.kind != "A":
        return
    for aid in c.arrows:
        if act.scale(aid) != act.ctx.one():
            raise ForcedGaugeError(
                f"arrow {aid} has g-scale {format_scalar(act.scale(aid))}; loop-type components need "
                "every scale equal to 1 (gauge fixed by the a^(i-1)_(j-1) coefficient of EF - FE)")


def build_uq_fragment(c, quiver, act, params: UqParams, strict=True, enforce_gauge=True) -> ExtFragment:
    ctx, n = act.ctx, act.n
    if enforce_gauge:
        check_uq_gauge(c, act)
    if strict:
        _raise_first(check_uq_constraints(c, quiver, act, params))
    small = c.kind == "isolated" and len(c.orbits[0]) < n
    e = build_component_action(c, quiver, act, params.E if not small else TaftParams(), False, 2)
    kf = build_component_action(c, quiver, act, params.F if not small else TaftParams(), False, -2)
    kinv = act.inverse()
    kop = GroupOperator(quiver, ctx, kinv.vertex_perm, kinv.arrow_map)
    f_on = {p: _apply_group(kop, t) for p, t in kf.x_on.items()}
    return ExtFragment(c, {"E": e.x_on, "F": f_on}, {"E": e.gamma, "F": kf.gamma})


def build_uq_action(quiver, act: ZnAction, params: UqParams, strict=True, enforce_gauge=True) -> ExtendedSpec:
    """u_q(sl2) action with K acting as the given Z_n-action.

    strict=False skips the scalar constraints (the verifier then reports any failure);
    enforce_gauge=False also admits non-unit scales on loop-type components.
    """
    n = act.n
    if n < 3:
        raise RegimeError("u_q(sl2) actions are built for n >= 3 only")
    comps = decompose_components(quiver, act)
    _check_regime(quiver, act, comps, (1, 2))
    frags = [build_uq_fragment(c, quiver, act, params, strict, enforce_gauge) for c in comps]
    return glue_extensions(frags, "uq", quiver, act, {"K": act, "K^-1": act.inverse()}, params)


# ---------------------------------------------------------------- D(T(n))

def double_vertex_constant(ctx):
    """c with the orbit condition reading gamma^x * gamma^X * c = 1."""
    return ctx.one() - ctx.zeta().inverse()


def double_partner_gamma(ctx, gamma):
    return (ctx.scalar(gamma) * double_vertex_constant(ctx)).inverse()


def _mu_sigma(act, quiver, aid):
    s = sigma(quiver, act, aid)
    if s is None or s.is_trivial:
        return act.ctx.one()
    return act.scale(s.arrows[0])


def check_double_constraints(c, quiver, act_g, act_G, params: DoubleParams) -> list:
    ctx, n = act_g.ctx, act_g.n
    zeta = ctx.zeta()
    out = []
    out += _prefixed(check_constraints(c, quiver, act_g, params.x, 2), "x")
    # (G, X) is Taft for zeta^-1: lambda^X_{i+1,j+1} mu^G_{ij} = zeta^-1 lambda^X_{ij} mu^G_{i,j+1}
    out += _prefixed(check_constraints(c, quiver, act_G, params.X, -2), "X")
    _diagonal_b(c, params.x, ctx, "x", out)
    _diagonal_b(c, params.X, ctx, "X", out)
    for aid in c.arrows:
        img = act_g.image(aid)
        mg, mG = act_g.scale(aid), act_G.scale(aid)
        ok = mG * act_g.scale(img) == mg * act_G.scale(img)
        _record(out, "gG-commute", ok, aid)
        lX, lx = params.X.l(ctx, aid), params.x.l(ctx, aid)
        lhs, rhs = zeta * mg * params.X.l(ctx, img), _mu_sigma(act_g, quiver, aid) * lX
        _record(out, "gX-lambda", lhs == rhs, aid, f"{format_scalar(lhs)} != {format_scalar(rhs)}")
        lhs, rhs = zeta * _mu_sigma(act_G, quiver, aid) * lx, mG * params.x.l(ctx, img)
        _record(out, "xG-lambda", lhs == rhs, aid, f"{format_scalar(lhs)} != {format_scalar(rhs)}")
        i, j = c.arrow_labels[aid]
        lhs = _lam_at(c, params.X, ctx, i, j) * _lam_at(c, params.x, ctx, i, j + 1)
        rhs = zeta * _lam_at(c, params.x, ctx, i, j) * _lam_at(c, params.X, ctx, i, j + 1)
        _record(out, "xX-lambda-coupling", lhs == rhs, aid, f"{format_scalar(lhs)} != {format_scalar(rhs)}")
    if n >= 3:
        k = double_vertex_constant(ctx)
        for o in c.orbits:
            key = orbit_key(o)
            v = params.x.g(ctx, key) * params.X.g(ctx, key) * k
            _record(out, "xX-vertex", v == ctx.one(), key, f"gx*gX*(1-zeta^-1) = {format_scalar(v)}")
    return out


def build_double_fragment(c, quiver, act_g, act_G, params: DoubleParams, strict=True) -> ExtFragment:
    if strict:
        _raise_first(check_double_constraints(c, quiver, act_g, act_G, params))
    fx = build_component_action(c, quiver, act_g, params.x, False, 2)
    fX = build_component_action(c, quiver, act_G, params.X, False, -2)
    return ExtFragment(c, {"x": fx.x_on, "X": fX.x_on}, {"x": fx.gamma, "X": fX.gamma})


def build_double_action(quiver, act_g: ZnAction, act_G: ZnAction = None, params: DoubleParams = None,
                        strict=True) -> ExtendedSpec:
    """D(T(n)) action; G permutes vertices like g but may scale arrows differently."""
    act_G = act_g if act_G is None else act_G
    params = params or DoubleParams()
    if act_G.n != act_g.n:
        raise ExtensionError(f"g and G have different orders ({act_g.n} vs {act_G.n})")
    if act_G.vertex_perm != act_g.vertex_perm:
        bad = sorted(v for v in act_g.vertex_perm if act_g.vertex_perm[v] != act_G.vertex_perm.get(v))
        raise ExtensionError(f"g and G must permute vertices identically; they differ at {bad[0]}")
    comps = decompose_components(quiver, act_g)
    _check_regime(quiver, act_g, comps, ())
    rep = validate_action(quiver, act_G)
    if not rep["valid"]:
        raise ExtensionError(f"invalid action of G: {rep['violations'][0]}")
    frags = [build_double_fragment(c, quiver, act_g, act_G, params, strict) for c in comps]
    return glue_extensions(frags, "double", quiver, act_g, {"g": act_g, "G": act_G}, params)


def _partner_params(quiver, act, taft: TaftParams, partner):
    from .symmetry import vertex_orbits
    ctx, n = act.ctx, act.n
    gam = {}
    for o in vertex_orbits(quiver, act):
        key = orbit_key(o)
        g = taft.g(ctx, key)
        if len(o) == n and n >= 3 and not g.is_zero():
            gam[key] = partner(ctx, g)
    return TaftParams(gam, {})


def uq_params_from_taft(quiver, act, taft: TaftParams) -> UqParams:
    """E from a Taft action; gamma^F forced by the orbit condition, lambda^F = 0."""
    return UqParams(taft, _partner_params(quiver, act, taft, uq_partner_gamma))


def double_params_from_taft(quiver, act, taft: TaftParams) -> DoubleParams:
    """x from a Taft action; gamma^X forced by the orbit condition (n >= 3), lambda^X = 0."""
    return DoubleParams(taft, _partner_params(quiver, act, taft, double_partner_gamma))


def uq_constraint_report(quiver, act, params: UqParams) -> list:
    out = []
    for c in decompose_components(quiver, act):
        out += check_uq_constraints(c, quiver, act, params)
    return out


def double_constraint_report(quiver, act_g, act_G, params: DoubleParams) -> list:
    out = []
    for c in decompose_components(quiver, act_g):
        out += check_double_constraints(c, quiver, act_g, act_G, params)
    return out


# ---------------------------------------------------------------- verification

def _lincomb(ops, words, p, one):
    """sum of coeff * (op_1 op_2 ... op_k).p, rightmost applied first."""
    out = {}
    for coeff, word in words:
        t = {p: one}
        for name in reversed(word):
            if not t:
                break
            t = ops[name].apply(t)
        add_into(out, t, coeff)
    return out


def _relation(report, name, ops, basis, lhs, rhs, spec):
    one = spec.ctx.one()
    return compare_on_basis(report, "relations", name, basis,
                            lambda p: _lincomb(ops, lhs, p, one), lambda p: _lincomb(ops, rhs, p, one),
                            spec.quiver, spec.ctx)


def _unit_checks(report, spec, ops, skew, grouplike):
    q, ctx = spec.quiver, spec.ctx
    unit = {Path.trivial(v): ctx.one() for v in q.vertices}
    for h in skew:
        r = ops[h].apply(unit)
        report.add("relations", f"{h}.1 = 0", not r,
                   None if not r else {"path": "1", "residual": format_element(AlgebraElement(q, ctx, r))})
    for h in grouplike:
        r = dict(ops[h].apply(unit))
        add_into(r, unit, -ctx.one())
        report.add("relations", f"{h}.1 = 1", not r)


def _power_check(report, name, op, basis, k, want_identity, spec):
    one = spec.ctx.one()
    compare_on_basis(report, "relations", name, basis, lambda p: power(op.apply, k, {p: one}),
                     (lambda p: {p: one}) if want_identity else (lambda p: {}), spec.quiver, spec.ctx)


def verify_uq(spec: ExtendedSpec, L=None) -> VerificationReport:
    ctx, n = spec.ctx, spec.n
    L = default_depth(n) if L is None else L
    basis = enumerate_paths(spec.quiver, L)
    ops = spec.operators()
    one = ctx.one()
    q = ctx.q()
    q2 = q * q
    report = VerificationReport()
    _power_check(report, "K^n = 1", ops["K"], basis, n, True, spec)
    _power_check(report, "E^n = 0", ops["E"], basis, n, False, spec)
    _power_check(report, "F^n = 0", ops["F"], basis, n, False, spec)
    _relation(report, "K K^-1 = 1", ops, basis, [(one, ["K", "K^-1"])], [(one, [])], spec)
    _relation(report, "KE = q^2 EK", ops, basis, [(one, ["K", "E"])], [(q2, ["E", "K"])], spec)
    _relation(report, "KF = q^-2 FK", ops, basis, [(one, ["K", "F"])], [(q2.inverse(), ["F", "K"])], spec)
    c = (q - q.inverse()).inverse()
    _relation(report, "EF - FE = (K - K^-1)/(q - q^-1)", ops, basis,
              [(one, ["E", "F"]), (-one, ["F", "E"])], [(c, ["K"]), (-c, ["K^-1"])], spec)
    _unit_checks(report, spec, ops, ("E", "F"), ("K",))
    return report


def verify_double(spec: ExtendedSpec, L=None) -> VerificationReport:
    ctx, n = spec.ctx, spec.n
    L = default_depth(n) if L is None else L
    basis = enumerate_paths(spec.quiver, L)
    ops = spec.operators()
    one = ctx.one()
    z = ctx.zeta()
    report = VerificationReport()
    _power_check(report, "g^n = 1", ops["g"], basis, n, True, spec)
    _power_check(report, "G^n = 1", ops["G"], basis, n, True, spec)
    _power_check(report, "x^n = 0", ops["x"], basis, n, False, spec)
    _power_check(report, "X^n = 0", ops["X"], basis, n, False, spec)
    for name, (a, b) in (("xg = zeta gx", ("x", "g")), ("GX = zeta XG", ("G", "X")),
                         ("gX = zeta Xg", ("g", "X")), ("xG = zeta Gx", ("x", "G"))):
        lhs = [(one, [a, b])]
        rhs = [(z, [b, a])]
        _relation(report, name, ops, basis, lhs, rhs, spec)
    _relation(report, "gG = Gg", ops, basis, [(one, ["g", "G"])], [(one, ["G", "g"])], spec)
    _relation(report, "xX - zeta Xx = zeta (gG - 1)", ops, basis,
              [(one, ["x", "X"]), (-z, ["X", "x"])], [(z, ["g", "G"]), (-z, [])], spec)
    _unit_checks(report, spec, ops, ("x", "X"), ("g", "G"))
    return report


__all__ = ["ExtensionError", "ForcedGaugeError", "RegimeError", "UqParams", "DoubleParams",
           "parse_uq_params", "parse_double_params", "ExtendedSpec", "ExtFragment", "glue_extensions",
           "uq_vertex_constant", "uq_partner_gamma", "check_uq_constraints", "build_uq_fragment",
           "build_uq_action", "double_vertex_constant", "double_partner_gamma", "check_double_constraints",
           "build_double_fragment", "build_double_action", "verify_uq", "verify_double", "check_uq_gauge",
           "uq_params_from_taft", "double_params_from_taft", "uq_constraint_report",
           "double_constraint_report"]

