"""Shared builders for the test suite."""

import random

from hopfquiver.cyclo import make_context, parse_scalar
from hopfquiver.quiver import Quiver
from hopfquiver.symmetry import action_from_perm

SCALES = ["1", "-1", "2", "1/2", "-2", "z", "1+z"]


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def random_symmetric_quiver(rng, n=None, max_vertices=12, max_orbit_draws=5, scaled=True):
    """Random loopless Schurian quiver with a Z_n-action; arrow scales have orbit product 1."""
    n = n or rng.randint(2, 6)
    ctx = make_context(n)
    verts, perm = [], {}
    while True:
        m = rng.choice(divisors(n))
        if len(verts) + m > max_vertices:
            break
        cyc = [f"v{len(verts) + k}" for k in range(m)]
        verts += cyc
        perm.update({cyc[k]: cyc[(k + 1) % m] for k in range(m)})
        if rng.random() < 0.35:
            break
    pairs = set()
    orbits = []
    for _ in range(rng.randint(0, max_orbit_draws)):
        u, v = rng.choice(verts), rng.choice(verts)
        if u == v or (u, v) in pairs:
            continue
        orb = []
        while (u, v) not in pairs:
            pairs.add((u, v))
            orb.append((u, v))
            u, v = perm[u], perm[v]
        orbits.append(orb)
    arrows = [(f"a{s}_{t}", s, t) for orb in orbits for s, t in orb]
    q = Quiver(verts, arrows)
    scales = {}
    if scaled:
        for orb in orbits:
            ids = [f"a{s}_{t}" for s, t in orb]
            prod = ctx.one()
            for a in ids[:-1]:
                c = parse_scalar(ctx, rng.choice(SCALES))
                scales[a] = c
                prod = prod * c
            scales[ids[-1]] = prod.inverse()
    return q, action_from_perm(q, n, perm, ctx, scales)


def rescaled(quiver, act, rng, pool=SCALES):
    """Same permutation, fresh scales with orbit product 1 (orbits listed from the action)."""
    from hopfquiver.symmetry import arrow_orbits
    ctx = act.ctx
    scales = {}
    for orb in arrow_orbits(quiver, act):
        prod = ctx.one()
        for a in orb[:-1]:
            c = parse_scalar(ctx, rng.choice(pool))
            scales[a] = c
            prod = prod * c
        scales[orb[-1]] = prod.inverse()
    return action_from_perm(quiver, act.n, act.vertex_perm, ctx, scales)


def cycle_vertices(n, m=None):
    """m vertices permuted cyclically by a generator of Z_n, no arrows."""
    m = m or n
    vs = [str(k) for k in range(1, m + 1)]
    q = Quiver(vs, [])
    return q, action_from_perm(q, n, {vs[k]: vs[(k + 1) % m] for k in range(m)}, make_context(n))


def rng_for(label):
    return random.Random(label)
