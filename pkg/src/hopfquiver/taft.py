"""Taft algebra actions: generator tables, constraints, gluing and parameter families.

Conventions: labels follow g (g.e_i = e_{i+1}); x.e_i = gamma*zeta^i*(e_i - zeta*e_{i+1});
an arrow a with labels (i, j) gets
    x.a = gamma_tgt*zeta^j*a - gamma_src*zeta^(i+1)*(g.a) + lambda_a*sigma(a)
where sigma(a) is the path of length <= 1 from s(a) to g.t(a).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .cyclo import CycContext, format_scalar, nth_root, parse_scalar
from .poly import Poly
from .quiver import Path, Quiver, add_into
from .symmetry import (Component, ZnAction, arrow_orbits, decompose_components, orbit_key,
                       validate_action, vertex_orbits)


class ConstraintError(ValueError):
    pass


class GlueError(ValueError):
    pass


@dataclass
class TaftParams:
    gamma: dict = field(default_factory=dict)  # orbit key -> CycScalar
    lam: dict = field(default_factory=dict)  # arrow id -> CycScalar

    def g(self, ctx, key):
        v = self.gamma.get(key)
        return ctx.zero() if v is None else ctx.scalar(v)

    def l(self, ctx, a):
        v = self.lam.get(a)
        return ctx.zero() if v is None else ctx.scalar(v)

    def to_json(self):
        return {"gamma": {k: format_scalar(v) for k, v in sorted(self.gamma.items())},
                "lambda": {k: format_scalar(v) for k, v in sorted(self.lam.items())}}


def parse_params(data, ctx: CycContext) -> TaftParams:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise ValueError("$: expected an object")
    out = TaftParams()
    for sec, target in (("gamma", out.gamma), ("lambda", out.lam)):
        block = data.get(sec, {})
        if not isinstance(block, dict):
            raise ValueError(f"$.{sec}: expected an object")
        for k, v in block.items():
            try:
                target[k] = parse_scalar(ctx, str(v))
            except ValueError as exc:
                raise ValueError(f"$.{sec}.{k}: {exc}") from exc
    return out


def check_param_keys(quiver: Quiver, act: ZnAction, params: TaftParams):
    keys = {orbit_key(o) for o in vertex_orbits(quiver, act)}
    for k in params.gamma:
        if k not in keys:
            raise ValueError(f"gamma key {k!r} names no vertex orbit (expected one of {sorted(keys)})")
    for a in params.lam:
        if a not in quiver.arrow:
            raise ValueError(f"lambda key {a!r} names no arrow")


# ---------------------------------------------------------------- g action

def g_on_generator(quiver: Quiver, act: ZnAction, gen: Path) -> dict:
    if gen.is_trivial:
        return {Path.trivial(act.vertex_perm[gen.src]): act.ctx.one()}
    a = gen.arrows[0]
    img, s = act.arrow_map[a]
    return {Path.of_arrow(quiver.arrow[img]): s}


def sigma(quiver: Quiver, act: ZnAction, a):
    """Path of length <= 1 from s(a) to g.t(a), or None."""
    arr = quiver.arrow[a] if isinstance(a, str) else a
    end = act.vertex_perm[arr.tgt]
    if end == arr.src:
        return Path.trivial(arr.src)
    b = quiver.arrow_between(arr.src, end)
    return None if b is None else Path.of_arrow(b)


def _sigma_scale(act: ZnAction, p):
    if p is None or p.is_trivial:
        return act.ctx.one()
    return act.scale(p.arrows[0])


# ---------------------------------------------------------------- spec

class ActionSpec:
    """Generator tables for g and x; zeta = z^root_exp (2 unless built as an opposite)."""

    def __init__(self, quiver: Quiver, act: ZnAction, x_on: dict, params=None,
                 root_exp=2, components=None):
        self.quiver = quiver
        self.act = act
        self.ctx = act.ctx
        self.params = params
        self.root_exp = root_exp % (2 * act.n)
        self.components = components
        self.x_on = {}
        for v in quiver.vertices:
            p = Path.trivial(v)
            self.x_on[p] = dict(x_on.get(p, {}))
        for a in quiver.arrows:
            p = Path.of_arrow(a)
            self.x_on[p] = dict(x_on.get(p, {}))

    @property
    def n(self):
        return self.act.n

    @property
    def zeta(self):
        return self.ctx.root_power(self.root_exp)

    def generators(self):
        return list(self.x_on)

    def g_on(self, gen: Path) -> dict:
        return g_on_generator(self.quiver, self.act, gen)

    def __eq__(self, other):
        # params are bookkeeping; two specs are equal when they act identically
        return (isinstance(other, ActionSpec) and self.quiver == other.quiver
                and self.act == other.act and self.root_exp == other.root_exp
                and self.x_on == other.x_on)

    def to_json(self):
        from .quiver import AlgebraElement, format_element
        tab = {}
        for p, t in self.x_on.items():
            tab[p.label()] = format_element(AlgebraElement(self.quiver, self.ctx, t))
        d = {"n": self.n, "zeta": f"z^{self.root_exp}", "x": tab}
        if self.params is not None:
            d["params"] = self.params.to_json()
        return d


@dataclass
class Fragment:
    component: Component
    x_on: dict
    gamma: dict  # orbit key -> value used by this fragment


def vertex_action(orbit, gamma, ctx: CycContext, n, root_exp=2) -> dict:
    """x on the trivial paths of one labeled orbit (orbit[k] has label k+1); root z^root_exp."""
    gamma = ctx.scalar(gamma)
    m = len(orbit)
    if not gamma.is_zero() and m < n:
        raise ConstraintError(f"gamma must vanish on {orbit_key(orbit)}: orbit size {m} < n = {n}")
    out = {}
    zeta = ctx.root_power(root_exp)
    for k, v in enumerate(orbit):
        i = k + 1
        c = gamma * ctx.root_power(root_exp * i)
        nxt = orbit[(k + 1) % m]
        t = {}
        add_into(t, {Path.trivial(v): c})
        add_into(t, {Path.trivial(nxt): -(c * zeta)})
        out[Path.trivial(v)] = t
    return out


def build_component_action(c: Component, quiver: Quiver, act: ZnAction, params: TaftParams,
                           strict=True, root_exp=2) -> Fragment:
    ctx, n = act.ctx, act.n
    if strict:
        rep = check_constraints(c, quiver, act, params, root_exp)
        bad = [r for r in rep if r["status"] != "pass"]
        if bad:
            raise ConstraintError(f"constraint {bad[0]['name']} fails at {bad[0].get('at')}")
    gam = {orbit_key(o): params.g(ctx, orbit_key(o)) for o in c.orbits}
    x_on = {}
    for o in c.orbits:
        g = gam[orbit_key(o)]
        if not g.is_zero() and len(o) < n:
            if strict:
                raise ConstraintError(f"gamma must vanish on {orbit_key(o)}: orbit size {len(o)} < n = {n}")
        x_on.update(vertex_action(o, g if len(o) == n else ctx.zero(), ctx, n, root_exp))
    g_src = gam[orbit_key(c.orbits[0])]
    g_tgt = gam[orbit_key(c.orbits[-1])]
    if len(c.orbits[0]) < n:
        g_src = ctx.zero()
    if len(c.orbits[-1]) < n:
        g_tgt = ctx.zero()
    for aid in c.arrows:
        i, j = c.arrow_labels[aid]
        a = quiver.arrow[aid]
        t = {}
        add_into(t, {Path.of_arrow(a): g_tgt * ctx.root_power(root_exp * j)})
        img, mu = act.arrow_map[aid]
        add_into(t, {Path.of_arrow(quiver.arrow[img]): -(g_src * ctx.root_power(root_exp * (i + 1)) * mu)})
        lam = params.l(ctx, aid)
        if not lam.is_zero():
            s = sigma(quiver, act, aid)
            if s is None:
                if strict:
                    raise ConstraintError(f"lambda[{aid}] must vanish: no path from s(a) to g.t(a)")
            else:
                add_into(t, {s: lam})
        x_on[Path.of_arrow(a)] = t
    return Fragment(c, x_on, gam)


def check_constraints(c: Component, quiver: Quiver, act: ZnAction, params: TaftParams,
                      root_exp=2) -> list:
    """One entry per scalar condition of the component, each with pass/fail."""
    ctx, n = act.ctx, act.n
    zeta = ctx.root_power(root_exp)
    out = []

    def rec(name, ok, at=None, detail=None):
        r = {"name": name, "status": "pass" if ok else "fail"}
        if at is not None:
            r["at"] = at
        if detail is not None and not ok:
            r["detail"] = detail
        out.append(r)

    for o in c.orbits:
        g = params.g(ctx, orbit_key(o))
        if len(o) < n:
            rec("gamma-short-orbit", g.is_zero(), orbit_key(o), f"gamma = {format_scalar(g)}")
    ids = set(c.arrows)
    for orb in arrow_orbits(quiver, act):
        if orb[0] not in ids:
            continue
        prod = ctx.one()
        for a in orb:
            prod = prod * act.scale(a)
        rec("mu-product", prod ** (n // len(orb)) == ctx.one(), orb[0])
    for aid in c.arrows:
        lam = params.l(ctx, aid)
        s = sigma(quiver, act, aid)
        if s is None:
            rec("lambda-absent-target", lam.is_zero(), aid, f"lambda = {format_scalar(lam)}")
        img = act.image(aid)
        lhs = params.l(ctx, img) * act.scale(aid)
        rhs = zeta * lam * _sigma_scale(act, s)
        rec("lambda-recurrence", lhs == rhs, aid,
            f"{format_scalar(lhs)} != {format_scalar(rhs)}")
    if c.kind == "B":
        gp = params.g(ctx, orbit_key(c.orbits[0])) if len(c.orbits[0]) == n else ctx.zero()
        gm = params.g(ctx, orbit_key(c.orbits[1])) if len(c.orbits[1]) == n else ctx.zero()
        for aid in c.arrows:
            i, j = c.arrow_labels[aid]
            prod = ctx.one()
            for ell in range(n):
                b = c.arrow_at(i, j + ell)
                prod = prod * (params.l(ctx, b) if b is not None else ctx.zero())
            lhs, rhs = gp ** n, gm ** n + prod
            rec("power-identity", lhs == rhs, aid, f"{format_scalar(lhs)} != {format_scalar(rhs)}")
    return out


def glue(fragments, quiver: Quiver, act: ZnAction, params=None, root_exp=2) -> ActionSpec:
    gam = {}
    table = {}
    for f in fragments:
        for k, v in f.gamma.items():
            if k in gam and gam[k] != v:
                raise GlueError(f"incompatible gamma on {k}: {format_scalar(gam[k])} vs {format_scalar(v)}")
            gam[k] = v
        for p, t in f.x_on.items():
            if p in table and table[p] != t:
                raise GlueError(f"incompatible x-action on {p.label()}")
            table[p] = t
    return ActionSpec(quiver, act, table, params, root_exp, [f.component for f in fragments])


def build_action(quiver: Quiver, act: ZnAction, params: TaftParams, strict=True) -> ActionSpec:
    rep = validate_action(quiver, act)
    if not rep["valid"]:
        raise ConstraintError(f"invalid group action: {rep['violations'][0]}")
    comps = decompose_components(quiver, act)
    frags = [build_component_action(c, quiver, act, params, strict) for c in comps]
    return glue(frags, quiver, act, params)


def zero_action(quiver: Quiver, act: ZnAction) -> ActionSpec:
    return build_action(quiver, act, TaftParams())


def is_inner_faithful(spec: ActionSpec) -> bool:
    return any(t for t in spec.x_on.values())


def check_span(spec: ActionSpec) -> list:
    """Generators whose x-image leaves span{p, g.p, sigma(p)} (empty when fine)."""
    bad = []
    for p, t in spec.x_on.items():
        allowed = {p} | set(spec.g_on(p))
        if not p.is_trivial:
            s = sigma(spec.quiver, spec.act, p.arrows[0])
            if s is not None:
                allowed.add(s)
        if not set(t) <= allowed:
            bad.append(p.label())
    return bad


def propagate_lambda(quiver, act: ZnAction, seeds: dict, root_exp=2) -> dict:
    """Fill lambda along arrow orbits from one seed per orbit using
    lambda_{g.a} mu_a = xi lambda_a mu_{sigma(a)}, xi = z^root_exp."""
    ctx = act.ctx
    xi = ctx.root_power(root_exp)
    out = {}
    for orb in arrow_orbits(quiver, act):
        seed = next((a for a in orb if a in seeds), None)
        if seed is None:
            continue
        k = orb.index(seed)
        cyc = orb[k:] + orb[:k]
        val = ctx.scalar(seeds[seed])
        for a in cyc:
            out[a] = val
            val = xi * val * _sigma_scale(act, sigma(quiver, act, a)) * act.scale(a).inverse()
        if val != out[seed]:
            raise ConstraintError(f"lambda seeded at {seed} does not close around its orbit")
    return out


# ---------------------------------------------------------------- opposite

def _apply_g_inverse(quiver, inv: ZnAction, terms: dict) -> dict:
    out = {}
    for p, c in terms.items():
        if p.is_trivial:
            add_into(out, {Path.trivial(inv.vertex_perm[p.src]): c})
            continue
        ids, scale = [], c
        for a in p.arrows:
            img, s = inv.arrow_map[a]
            ids.append(img)
            scale = scale * s
        add_into(out, {Path(inv.vertex_perm[p.src], inv.vertex_perm[p.tgt], ids): scale})
    return out


def opposite_action(spec: ActionSpec) -> ActionSpec:
    """g' = g^{-1}, x' = g^{-1}x on the opposite quiver; zeta becomes zeta^{-1}."""
    qop = spec.quiver.opposite()
    inv = spec.act.inverse()
    table = {}
    for p, t in spec.x_on.items():
        moved = _apply_g_inverse(spec.quiver, inv, t)
        table[p.reversed()] = {r.reversed(): c for r, c in moved.items()}
    return ActionSpec(qop, inv, table, None, -spec.root_exp)


# ---------------------------------------------------------------- parameter families

def gamma_symbol(key):
    return f"gamma[{key}]"


def lambda_symbol(a):
    return f"lambda[{a}]"


def mu_symbol(a):
    return f"mu[{a}]"


class ParamReport:
    def __init__(self, quiver, act, components):
        self.quiver = quiver
        self.act = act
        self.components = components
        self.free = []  # symbols
        self.kinds = {}  # symbol -> gamma | lambda | mu
        self.mu_values = {}  # mu symbol -> given scalar
        self.mu_expr = {}  # arrow -> Poly in mu symbols
        self.gamma_expr = {}  # orbit key -> Poly
        self.lambda_expr = {}  # arrow -> Poly
        self.derived = []  # (symbol, Poly, reason)
        self.forced_zero = []  # (symbol, reason)
        self.residual = []  # dicts with lhs, rhs, source, at
        self.identified = {}  # orbit key -> list of component roles
        self.closure = []  # non-symbolic closures checked against the given mu
        self.table = {}  # generator label -> list of (path label, Poly)

    @property
    def ctx(self):
        return self.act.ctx

    def free_of_kind(self, kind):
        return [s for s in self.free if self.kinds[s] == kind]

    def to_json(self):
        return {
            "n": self.act.n,
            "components": [c.to_json() for c in self.components],
            "free": [{"symbol": s, "kind": self.kinds[s]} for s in self.free],
            "mu": {s: format_scalar(v) for s, v in self.mu_values.items()},
            "derived": [{"symbol": s, "value": str(p), "reason": r} for s, p, r in self.derived],
            "forced-zero": [{"symbol": s, "reason": r} for s, r in self.forced_zero],
            "residual-constraints": [
                {"lhs": str(r["lhs"]), "rhs": str(r["rhs"]), "source": r["source"], "at": r["at"]}
                for r in self.residual],
            "identified-gamma": self.identified,
            "closure-checks": self.closure,
            "x-action": {g: [[p, str(c)] for p, c in rows] for g, rows in self.table.items()},
        }


def parametrize(quiver: Quiver, act: ZnAction) -> ParamReport:
    ctx, n = act.ctx, act.n
    zeta = ctx.zeta()
    comps = decompose_components(quiver, act)
    rep = ParamReport(quiver, act, comps)
    one = Poly.const(ctx, 1)

    # mu: the last scale of a length-n orbit is the inverse of the others
    for orb in arrow_orbits(quiver, act):
        for a in orb:
            rep.mu_values[mu_symbol(a)] = act.scale(a)
        if len(orb) == n:
            rest = one
            for a in orb[:-1]:
                rep.mu_expr[a] = Poly.symbol(ctx, mu_symbol(a))
                rest = rest * rep.mu_expr[a]
            rep.mu_expr[orb[-1]] = rest ** -1
            rep.derived.append((mu_symbol(orb[-1]), rep.mu_expr[orb[-1]], "scale product over the orbit is 1"))
        else:
            for a in orb:
                rep.mu_expr[a] = Poly.symbol(ctx, mu_symbol(a))
    for s in rep.mu_values:
        rep.kinds[s] = "mu"

    # gamma, one per vertex orbit
    for o in vertex_orbits(quiver, act):
        key = orbit_key(o)
        sym = gamma_symbol(key)
        rep.kinds[sym] = "gamma"
        if len(o) == n:
            rep.free.append(sym)
            rep.gamma_expr[key] = Poly.symbol(ctx, sym)
        else:
            rep.forced_zero.append((sym, f"orbit size {len(o)} < n"))
            rep.gamma_expr[key] = Poly(ctx)
    for k, c in enumerate(comps):
        roles = ["vertex"] if c.kind != "B" else ["source", "target"]
        for o, role in zip(c.orbits, roles):
            rep.identified.setdefault(orbit_key(o), []).append(
                {"component": k, "kind": c.to_json()["kind"], "role": role})

    # lambda seeds and propagation along g-orbits
    def mu_of_path(p):
        return one if p is None or p.is_trivial else rep.mu_expr[p.arrows[0]]

    for orb in arrow_orbits(quiver, act):
        comp = next(c for c in comps if orb[0] in c.arrow_labels)
        start = min(orb, key=lambda a: (comp.arrow_labels[a][0] != 1, comp.arrow_labels[a]))
        k0 = orb.index(start)
        cyc = orb[k0:] + orb[:k0]
        if sigma(quiver, act, start) is None:
            for a in cyc:
                rep.kinds[lambda_symbol(a)] = "lambda"
                rep.forced_zero.append((lambda_symbol(a), "no path from s(a) to g.t(a)"))
                rep.lambda_expr[a] = Poly(ctx)
            continue
        seed = lambda_symbol(start)
        rep.kinds[seed] = "lambda"
        val = Poly.symbol(ctx, seed)
        vals = {start: val}
        num = ctx.one()
        for a in cyc:
            s = sigma(quiver, act, a)
            factor = mu_of_path(s) * (rep.mu_expr[a] ** -1) * zeta
            val = val * factor
            num = num * zeta * _sigma_scale(act, s) / act.scale(a)
            nxt = act.image(a)
            if nxt != start:
                vals[nxt] = val
        closing = val  # value propagated back onto the seed
        if closing == Poly.symbol(ctx, seed):
            ok = True
        else:
            ok = num == ctx.one()
            rep.closure.append({"orbit": cyc, "factor": str(closing * (Poly.symbol(ctx, seed) ** -1)),
                                "holds-for-given-mu": ok})
        if not ok:
            for a in cyc:
                rep.kinds[lambda_symbol(a)] = "lambda"
                rep.forced_zero.append((lambda_symbol(a), "propagation around the orbit does not close"))
                rep.lambda_expr[a] = Poly(ctx)
            continue
        rep.free.append(seed)
        for a in cyc:
            rep.kinds[lambda_symbol(a)] = "lambda"
            rep.lambda_expr[a] = vals[a]
            if a != start:
                rep.derived.append((lambda_symbol(a), vals[a], "lambda recurrence along the orbit"))

    # power identities, iterated with forced zeros
    while True:
        residual = _power_residuals(rep, comps)
        forced = None
        for r in residual:
            diff = r["lhs"] - r["rhs"]
            if len(diff.terms) == 1:
                (m, _), = diff.terms.items()
                lam = [s for s, _ in m if rep.kinds.get(s) == "lambda"]
                others = [s for s, _ in m if rep.kinds.get(s) == "gamma"]
                if len(lam) == 1 and not others:
                    forced = lam[0]
                    break
        if forced is None:
            break
        rep.free.remove(forced)
        rep.forced_zero.append((forced, "power identity leaves a single lambda power"))
        zero = Poly(ctx)
        for a, p in list(rep.lambda_expr.items()):
            if forced in p.symbols():
                rep.lambda_expr[a] = p.subs({forced: zero})
                if lambda_symbol(a) != forced:
                    rep.forced_zero.append((lambda_symbol(a), f"multiple of {forced}"))
        rep.derived = [d for d in rep.derived if forced not in d[1].symbols()]
    rep.residual = residual

    # symbolic generator table
    for c in comps:
        for o in c.orbits:
            g = rep.gamma_expr[orbit_key(o)]
            m = len(o)
            for k, v in enumerate(o):
                cz = g * ctx.zeta_power(k + 1)
                rows = _rows({f"e[{v}]": cz, f"e[{o[(k + 1) % m]}]": cz * (-zeta)})
                rep.table[f"e[{v}]"] = rows
        gp = rep.gamma_expr[orbit_key(c.orbits[0])]
        gm = rep.gamma_expr[orbit_key(c.orbits[-1])]
        for aid in c.arrows:
            i, j = c.arrow_labels[aid]
            img = act.image(aid)
            parts = {aid: gm * ctx.zeta_power(j)}
            parts[img] = parts.get(img, Poly(ctx)) + gp * ctx.zeta_power(i + 1) * rep.mu_expr[aid] * (-1)
            s = sigma(quiver, act, aid)
            lam = rep.lambda_expr[aid]
            if s is not None and not lam.is_zero():
                lab = s.label()
                parts[lab] = parts.get(lab, Poly(ctx)) + lam
            rep.table[aid] = _rows(parts)
    return rep


def _rows(parts):
    return [(k, v) for k, v in parts.items() if not v.is_zero()]


def _power_residuals(rep: ParamReport, comps):
    ctx, n = rep.ctx, rep.act.n
    out, seen = [], set()
    for c in comps:
        if c.kind != "B":
            continue
        gp = rep.gamma_expr[orbit_key(c.orbits[0])]
        gm = rep.gamma_expr[orbit_key(c.orbits[1])]
        for aid in c.arrows:
            i, j = c.arrow_labels[aid]
            prod = Poly.const(ctx, 1)
            for ell in range(n):
                b = c.arrow_at(i, j + ell)
                prod = prod * (rep.lambda_expr[b] if b is not None else Poly(ctx))
            lhs, rhs = gp ** n, gm ** n + prod
            if lhs == rhs:
                continue
            key = (lhs - rhs)
            if key in seen or (-key) in seen:
                continue
            seen.add(key)
            out.append({"lhs": lhs, "rhs": rhs, "source": "power-identity", "at": aid})
    return out


def params_from_symbols(rep: ParamReport, env: dict) -> TaftParams:
    """Turn values for the free symbols into concrete gamma/lambda tables."""
    ctx = rep.ctx
    full = dict(rep.mu_values)
    full.update(env)
    out = TaftParams()
    for key, p in rep.gamma_expr.items():
        out.gamma[key] = p.evaluate(full)
    for a, p in rep.lambda_expr.items():
        out.lam[a] = p.evaluate(full)
    return out


def residual_holds(rep: ParamReport, env: dict) -> bool:
    full = dict(rep.mu_values)
    full.update(env)
    return all(r["lhs"].evaluate(full) == r["rhs"].evaluate(full) for r in rep.residual)


POOL = ["1", "-1", "2", "-2", "1/2", "-1/2", "z", "z^2", "1+z"]


class SamplingError(RuntimeError):
    pass


def sample_params(rep: ParamReport, seed=0, attempts=32, normalize_mu=False,
                  require_faithful=None) -> TaftParams:
    """Deterministic pseudo-random point of the family; residuals are solved, not hoped for."""
    env = sample_symbols(rep, seed, attempts, normalize_mu, require_faithful)
    return params_from_symbols(rep, env)


def sample_symbols(rep: ParamReport, seed=0, attempts=32, normalize_mu=False,
                   require_faithful=None) -> dict:
    ctx = rep.ctx
    pool = [parse_scalar(ctx, s) for s in POOL]
    if require_faithful is None:
        require_faithful = validate_action(rep.quiver, rep.act)["faithful"]
    rng = random.Random(f"hopfquiver:{seed}")
    mu_env = dict(rep.mu_values)
    if normalize_mu:
        mu_env = {s: ctx.one() for s in mu_env}
    last = None
    for _ in range(attempts):
        env = dict(mu_env)
        for s in rep.free:
            if rep.kinds[s] == "gamma":
                env[s] = rng.choice(pool)
            else:
                env[s] = rng.choice(pool + [ctx.zero()])
        if not _solve_residuals(rep, env, rng):
            continue
        full = {s: v for s, v in env.items() if s in rep.kinds and rep.kinds[s] != "mu"}
        check = dict(rep.mu_values)
        check.update(env)
        if not all(r["lhs"].evaluate(check) == r["rhs"].evaluate(check) for r in rep.residual):
            continue
        last = full
        if require_faithful and rep.free:
            if not any(not env[s].is_zero() for s in rep.free):
                continue
            if rep.free_of_kind("gamma") and all(env[s].is_zero() for s in rep.free_of_kind("gamma")):
                continue
        return full
    if last is not None:
        return last
    raise SamplingError(f"no parameter point found after {attempts} attempts")


def _solve_residuals(rep: ParamReport, env: dict, rng) -> bool:
    ctx = rep.ctx
    used = set()
    residual = rep.residual
    count = {}
    for r in residual:
        for s in (r["lhs"] - r["rhs"]).symbols():
            count[s] = count.get(s, 0) + 1
    for r in residual:
        diff = r["lhs"] - r["rhs"]
        cands = []
        for s in sorted(diff.symbols()):
            if rep.kinds.get(s) == "mu" or s in used or s not in rep.free:
                continue
            hits = [m for m in diff.terms if dict(m).get(s)]
            if len(hits) != 1 or dict(hits[0])[s] < 0:
                continue
            pref = (0 if rep.kinds[s] == "lambda" and count[s] == 1 else
                    1 if rep.kinds[s] == "gamma" else 2)
            cands.append((pref, s))
        cands.sort()
        done = False
        for _, s in cands:
            val = _solve_for(diff, s, env, ctx, rng)
            if val is not None:
                env[s] = val
                done = True
                break
        for s in diff.symbols():
            used.add(s)
        if not done:
            full = dict(env)
            if diff.evaluate(full) != ctx.zero():
                return False
    return True


def _solve_for(diff: Poly, s, env, ctx, rng):
    """Solve diff = 0 for s, where s occurs in exactly one term c*s^k*M."""
    (m, c), = [(m, c) for m, c in diff.terms.items() if dict(m).get(s)]
    k = dict(m)[s]
    rest_mono = tuple((t, e) for t, e in m if t != s)
    others = Poly(ctx, {mm: cc for mm, cc in diff.terms.items() if mm != m})
    # s^k = -others / (c * M)
    denom = Poly(ctx, {rest_mono: c})
    try:
        dval = denom.evaluate(env)
    except ZeroDivisionError:
        return None
    if dval.is_zero():
        return None
    rhs_val = -others.evaluate(env) / dval
    if k == 1:
        return rhs_val
    if rhs_val.is_zero():
        return ctx.zero()
    root = None
    # symbolic root when the right side is one monomial with exponents divisible by k
    sym = (-others) * (denom ** -1) if len(denom.terms) == 1 else None
    if sym is not None and len(sym.terms) == 1:
        (mm, cc), = sym.terms.items()
        r0 = nth_root(cc, k)
        if r0 is not None and all(e % k == 0 for _, e in mm):
            root = r0
            for t, e in mm:
                root = root * (env[t] ** (e // k))
    if root is None:
        root = nth_root(rhs_val, k)
    if root is None:
        return None
    # any k-th root of unity available in the field gives another solution
    N = 2 * ctx.n
    units = [ctx.root_power(N * t // k) for t in range(k) if (N * t) % k == 0]
    root = root * rng.choice(units)
    if root ** k != rhs_val:
        return None
    return root
