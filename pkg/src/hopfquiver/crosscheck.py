"""Compare the closed-form coefficients of x^k with the operator built by the verifier."""

from __future__ import annotations

import random

from .cyclo import make_context
from .oracle import PsiInputs, psi_recursive_all, type_a_inputs, type_b_inputs, xk_cross_check_upto
from .quiver import Path, Quiver
from .symmetry import action_from_perm, arrow_orbits, decompose_components
from .taft import TaftParams, build_action, propagate_lambda
from .verifier import extend_operators

SCALARS = ["1", "-1", "2", "-2", "1/2", "3", "z", "1+z"]


def complete_type_a(n):
    vs = [str(k) for k in range(1, n + 1)]
    perm = {vs[k]: vs[(k + 1) % n] for k in range(n)}
    q = Quiver(vs, [(f"a{s}_{t}", s, t) for s in vs for t in vs if s != t])
    return q, perm


def complete_type_b(n):
    src = [f"s{k}" for k in range(1, n + 1)]
    tgt = [f"t{k}" for k in range(1, n + 1)]
    perm = {**{src[k]: src[(k + 1) % n] for k in range(n)}, **{tgt[k]: tgt[(k + 1) % n] for k in range(n)}}
    q = Quiver(src + tgt, [(f"b{i}_{j}", s, t) for i, s in enumerate(src, 1) for j, t in enumerate(tgt, 1)])
    return q, perm


def random_draw(kind, n, rng, ctx=None):
    """A random Taft-compatible parameter point on K_n (kind "A") or K_{n,n} (kind "B").

    Returns (spec, component, PsiInputs). The power identity is not imposed; the closed
    form describes x^k for every k whether or not x^n vanishes.
    """
    ctx = ctx or make_context(n)
    q, perm = complete_type_a(n) if kind == "A" else complete_type_b(n)
    plain = action_from_perm(q, n, perm, ctx)
    scales = {}
    for orb in arrow_orbits(q, plain):
        vals = [ctx.scalar(_pick(ctx, rng)) for _ in orb[:-1]]
        prod = ctx.one()
        for v in vals:
            prod = prod * v
        scales.update(zip(orb, vals + [prod.inverse()]))
    act = action_from_perm(q, n, perm, ctx, scales)
    comp = decompose_components(q, act)[0]
    seeds = {orb[0]: _pick(ctx, rng, zero=True) for orb in arrow_orbits(q, act)}
    lam = propagate_lambda(q, act, seeds, 2)
    keys = [f"orbit-of:{min(o)}" for o in comp.orbits]
    gam = {k: _pick(ctx, rng, zero=True) for k in keys}
    spec = build_action(q, act, TaftParams(gam, lam), strict=False)
    mu, lab = {}, {}
    for aid, (i, j) in comp.arrow_labels.items():
        mu[(i, j)] = act.scale(aid)
        lab[(i, j)] = lam.get(aid, ctx.zero())
    if kind == "A":
        inp = type_a_inputs(ctx, n, gam[keys[0]], mu, lab)
    else:
        inp = type_b_inputs(ctx, n, n, gam[keys[0]], gam[keys[1]], mu, lab)
    return spec, comp, inp


def _pick(ctx, rng, zero=False):
    pool = SCALARS + (["0"] if zero else [])
    from .cyclo import parse_scalar
    return parse_scalar(ctx, rng.choice(pool))


def basis_function(comp, quiver):
    def basis(i, j):
        if comp.kind == "A" and (i - j) % len(comp.orbits[0]) == 0:
            return Path.trivial(comp.orbits[0][(i - 1) % len(comp.orbits[0])])
        a = comp.arrow_at(i, j)
        return None if a is None else Path.of_arrow(quiver.arrow[a])
    return basis


def cross_check(kind, n, draws=50, seed=0, L=1):
    """Closed form vs k-fold operator application and vs the step-by-step recursion.

    Returns a list of mismatch records (empty when everything agrees).
    """
    rng = random.Random(f"crosscheck:{kind}:{n}:{seed}")
    bad = []
    for d in range(draws):
        spec, comp, inp = random_draw(kind, n, rng)
        table = extend_operators(spec, L)
        basis = basis_function(comp, spec.quiver)
        cache = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                steps = psi_recursive_all(inp, n, i, j)
                for k, res, tab in xk_cross_check_upto(inp, n, i, j, table.apply_X, basis, cache):
                    if not res["equal"]:
                        bad.append({"draw": d, "route": "operator", "k": k, "i": i, "j": j, **res})
                    if tab != steps[k]:
                        bad.append({"draw": d, "route": "recursion", "k": k, "i": i, "j": j})
    return bad


__all__ = ["complete_type_a", "complete_type_b", "random_draw", "basis_function", "cross_check", "PsiInputs"]
