"""Bundled quivers with Z_n-actions and parameter points that satisfy every constraint."""

from __future__ import annotations

from .cyclo import make_context, parse_scalar
from .quiver import Quiver
from .symmetry import ZnAction, action_from_perm


def _q(vertices, arrows):
    return Quiver(vertices, arrows)


def _bip(sources, targets, pairs):
    """Arrows named b<i><j> from sources[i-1] to targets[j-1]."""
    return [(f"b{i}{j}", sources[i - 1], targets[j - 1]) for i, j in pairs]


def _act(q, n, perm, scales=None):
    ctx = make_context(n)
    sc = {k: parse_scalar(ctx, v) for k, v in (scales or {}).items()}
    return action_from_perm(q, n, perm, ctx, sc)


def _sweedler(case):
    n = 2
    if case == "I":
        q = _q(["1", "2"], [("a12", "1", "2"), ("a21", "2", "1")])
        act = _act(q, n, {"1": "2", "2": "1"}, {"a12": "2", "a21": "1/2"})
        free = {"gamma[orbit-of:1]": "1", "lambda[a12]": "1/2"}
    elif case == "II":
        q = _q(["1+", "1-"], [("b11", "1+", "1-")])
        act = _act(q, n, {"1+": "1+", "1-": "1-"}, {"b11": "-1"})
        free = {}
    elif case == "III":
        q = _q(["1+", "1-", "2-"], _bip(["1+"], ["1-", "2-"], [(1, 1), (1, 2)]))
        act = _act(q, n, {"1+": "1+", "1-": "2-", "2-": "1-"}, {"b11": "2", "b12": "1/2"})
        free = {"gamma[orbit-of:1-]": "1", "lambda[b11]": "2"}
    elif case == "IV":
        q = _q(["1+", "2+", "1-"], _bip(["1+", "2+"], ["1-"], [(1, 1), (2, 1)]))
        act = _act(q, n, {"1+": "2+", "2+": "1+", "1-": "1-"}, {"b11": "2", "b21": "1/2"})
        free = {"gamma[orbit-of:1+]": "1", "lambda[b11]": "-1"}
    elif case == "V":
        q = _q(["1+", "2+", "1-", "2-"], _bip(["1+", "2+"], ["1-", "2-"], [(1, 1), (2, 2)]))
        act = _act(q, n, {"1+": "2+", "2+": "1+", "1-": "2-", "2-": "1-"}, {"b11": "2", "b22": "1/2"})
        free = {"gamma[orbit-of:1+]": "1", "gamma[orbit-of:1-]": "-1"}
    elif case == "VI":
        q = _q(["1+", "2+", "1-", "2-"],
               _bip(["1+", "2+"], ["1-", "2-"], [(1, 1), (1, 2), (2, 1), (2, 2)]))
        act = _act(q, n, {"1+": "2+", "2+": "1+", "1-": "2-", "2-": "1-"},
                   {"b11": "2", "b22": "1/2", "b12": "z", "b21": "-z"})
        free = {"gamma[orbit-of:1+]": "2", "gamma[orbit-of:1-]": "1",
                "lambda[b11]": "1", "lambda[b12]": "3"}
    else:
        raise KeyError(case)
    return q, act, free


def _k24(n):
    q = _q([str(k) for k in range(1, 7)],
           [(f"f{s}{t}", str(s), str(t)) for s in (1, 2) for t in (3, 4, 5, 6)])
    if n == 4:
        perm = {"1": "2", "2": "1", "3": "4", "4": "5", "5": "6", "6": "3"}
    else:
        perm = {"1": "2", "2": "1", "3": "4", "4": "3", "5": "6", "6": "5"}
    return q, _act(q, n, perm), None


def _six_vertex_z2():
    v = [f"v{k}" for k in range(1, 7)]
    arrows = [("f1", "v1", "v2"), ("f2", "v2", "v1"), ("f3", "v1", "v3"), ("f4", "v2", "v4"),
              ("f5", "v5", "v3"), ("f6", "v6", "v4"), ("f7", "v1", "v5"), ("f8", "v2", "v6"),
              ("f9", "v1", "v6"), ("f10", "v2", "v5")]
    q = _q(v, arrows)
    act = _act(q, 2, {"v1": "v2", "v2": "v1", "v3": "v4", "v4": "v3", "v5": "v6", "v6": "v5"})
    free = {"gamma[orbit-of:v1]": "1", "gamma[orbit-of:v3]": "-1", "gamma[orbit-of:v5]": "1",
            "lambda[f1]": "1/2", "lambda[f7]": "0", "lambda[f9]": "2"}
    return q, act, free


def _five_vertex_z3():
    v = [f"v{k}" for k in range(0, 5)]
    arrows = [("f1", "v0", "v1"), ("f2", "v0", "v2"), ("f3", "v0", "v3"),
              ("f4", "v1", "v4"), ("f5", "v2", "v4"), ("f6", "v3", "v4"),
              ("f7", "v1", "v2"), ("f12", "v2", "v1"), ("f8", "v2", "v3"),
              ("f11", "v3", "v2"), ("f10", "v1", "v3"), ("f9", "v3", "v1")]
    q = _q(v, arrows)
    act = _act(q, 3, {"v0": "v0", "v1": "v2", "v2": "v3", "v3": "v1", "v4": "v4"})
    # the two cubic residuals need lambda[f1]^3 = -gamma^3 and lambda[f4]^3 = gamma^3
    free = {"gamma[orbit-of:v1]": "1", "lambda[f1]": "-1", "lambda[f4]": "1",
            "lambda[f7]": "1", "lambda[f10]": "2"}
    return q, act, free


def _z4k2():
    q = _q(["1", "2"], [("a12", "1", "2"), ("a21", "2", "1")])
    act = _act(q, 4, {"1": "2", "2": "1"}, {"a12": "z^2", "a21": "z^2"})
    return q, act, {"lambda[a12]": "1"}


def _fixed_triangle():
    q = _q(["1", "2", "3"], [("c12", "1", "2"), ("c13", "1", "3"), ("c23", "2", "3")])
    act = _act(q, 3, {"1": "1", "2": "2", "3": "3"}, {"c12": "1", "c13": "z^2", "c23": "z^4"})
    return q, act, {}


def _triangle(which):
    perm = {"1": "3", "3": "2", "2": "1"}
    along = [("a13", "1", "3"), ("a32", "3", "2"), ("a21", "2", "1")]
    against = [("a12", "1", "2"), ("a23", "2", "3"), ("a31", "3", "1")]
    arrows = {"along": along, "against": against, "both": along + against}[which]
    q = _q(["1", "2", "3"], arrows)
    return q, _act(q, 3, perm), None


def _z3_bipartite(which):
    if which == "single":
        q = _q(["1", "2"], [("b11", "1", "2")])
        return q, _act(q, 3, {"1": "1", "2": "2"}), None
    if which == "out":
        q = _q(["1", "2", "3", "4"], [("b12", "1", "2"), ("b13", "1", "3"), ("b14", "1", "4")])
        return q, _act(q, 3, {"1": "1", "2": "3", "3": "4", "4": "2"}), None
    if which == "in":
        q = _q(["1", "2", "3", "4"], [("b21", "2", "1"), ("b31", "3", "1"), ("b41", "4", "1")])
        return q, _act(q, 3, {"1": "1", "2": "3", "3": "4", "4": "2"}), None
    # which = number of arrow orbits kept out of K_{3,3}
    pairs = [(1, 4), (2, 5), (3, 6), (1, 5), (2, 6), (3, 4), (1, 6), (2, 4), (3, 5)][:3 * which]
    q = _q([str(k) for k in range(1, 7)], [(f"b{s}{t}", str(s), str(t)) for s, t in pairs])
    perm = {"1": "2", "2": "3", "3": "1", "4": "5", "5": "6", "6": "4"}
    return q, _act(q, 3, perm), None


FIXTURES = {
    **{f"sweedler-{c}": (lambda c=c: _sweedler(c)) for c in ("I", "II", "III", "IV", "V", "VI")},
    "z3-fixed-triangle": _fixed_triangle,
    "k24-z4": lambda: _k24(4),
    "k24-z2": lambda: _k24(2),
    "z2-six-vertex": _six_vertex_z2,
    "ex-7.8": _five_vertex_z3,
    "z4-K2": _z4k2,
    **{f"triangle-{w}": (lambda w=w: _triangle(w)) for w in ("along", "against", "both")},
    **{name: (lambda w=w: _z3_bipartite(w)) for name, w in (
        ("z3-single-arrow", "single"), ("z3-fan-out", "out"), ("z3-fan-in", "in"),
        ("k33-one-orbit", 1), ("k33-two-orbits", 2), ("k33-three-orbits", 3))},
}


def fixture_names():
    return list(FIXTURES)


def load_fixture(name):
    """(quiver, action, free-symbol values or None)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    q, act, free = FIXTURES[name]()
    if free is not None:
        free = {k: parse_scalar(act.ctx, v) for k, v in free.items()}
    return q, act, free


def fixture_params(name):
    """Concrete parameters for a fixture; sampled deterministically when none are bundled."""
    from .taft import params_from_symbols, parametrize, sample_symbols
    q, act, free = load_fixture(name)
    rep = parametrize(q, act)
    if free is None:
        free = sample_symbols(rep, seed=0)
    env = {s: act.ctx.zero() for s in rep.free}
    env.update(free)
    return q, act, params_from_symbols(rep, env)


def fixture_files(name):
    """JSON documents written by `fixtures NAME`."""
    q, act, params = fixture_params(name)
    return {"quiver.json": q.to_json(), "action.json": act.to_json(), "params.json": params.to_json()}
