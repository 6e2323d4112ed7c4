import pytest
from hypothesis import given, settings, strategies as st

from helpers import cycle_vertices, random_symmetric_quiver, rng_for
from hopfquiver.cyclo import make_context, parse_scalar
from hopfquiver.fixtures import fixture_names, fixture_params, load_fixture
from hopfquiver.poly import Poly
from hopfquiver.quiver import Path, Quiver
from hopfquiver.symmetry import action_from_perm, arrow_orbits, decompose_components
from hopfquiver.taft import (ConstraintError, GlueError, TaftParams, build_action, build_component_action,
                             check_constraints, check_param_keys, check_span, glue, is_inner_faithful,
                             opposite_action, parametrize, parse_params, propagate_lambda, residual_holds,
                             sample_params, sample_symbols, vertex_action, zero_action)
from hopfquiver.verifier import verify_all


@pytest.mark.parametrize("n", [2, 3, 5])
def test_vertex_formula(n):
    ctx = make_context(n)
    zeta = ctx.zeta()
    orbit = [f"v{k}" for k in range(1, n + 1)]
    gamma = parse_scalar(ctx, "2 - z")
    table = vertex_action(orbit, gamma, ctx, n)
    for k, v in enumerate(orbit, 1):
        c = gamma * zeta ** k
        want = {Path.trivial(v): c, Path.trivial(orbit[k % n]): -(c * zeta)}
        assert table[Path.trivial(v)] == want
    with pytest.raises(ConstraintError):
        vertex_action(orbit[:1], gamma, ctx, n)


def test_arrow_formula_on_a_bipartite_component():
    q, act, params = fixture_params("sweedler-VI")
    spec = build_action(q, act, params)
    ctx = act.ctx
    gp, gm = params.gamma["orbit-of:1+"], params.gamma["orbit-of:1-"]
    b11 = Path.of_arrow(q.arrow["b11"])
    # labels (1,1): gamma_- zeta^1 b11 - gamma_+ zeta^2 mu b22 + lambda b12
    want = {b11: gm * ctx.zeta(), Path.of_arrow(q.arrow["b22"]): -(gp * act.scale("b11")),
            Path.of_arrow(q.arrow["b12"]): params.lam["b11"]}
    assert spec.x_on[b11] == {p: c for p, c in want.items() if not c.is_zero()}
    assert check_span(spec) == []


def test_strict_build_rejects_violations():
    q, act, params = fixture_params("sweedler-VI")
    bad = TaftParams(dict(params.gamma), dict(params.lam))
    bad.lam["b22"] = bad.lam["b22"] + act.ctx.one()
    with pytest.raises(ConstraintError, match="lambda-recurrence"):
        build_action(q, act, bad)
    names = {r["name"] for c in decompose_components(q, act)
             for r in check_constraints(c, q, act, bad) if r["status"] == "fail"}
    assert "lambda-recurrence" in names
    assert not verify_all(build_action(q, act, bad, strict=False)).ok


def test_power_identity_is_checked_at_every_arrow():
    q, act, params = fixture_params("k33-three-orbits")
    comp = decompose_components(q, act)[0]
    recs = [r for r in check_constraints(comp, q, act, params) if r["name"] == "power-identity"]
    assert len(recs) == len(q.arrows) == 9


def test_lambda_propagation():
    q, act, _ = load_fixture("sweedler-VI")
    lam = propagate_lambda(q, act, {"b11": 1, "b12": 3})
    assert lam["b22"] == parse_scalar(act.ctx, "-1") * act.scale("b12") * act.scale("b11").inverse()
    q2, act2, _ = load_fixture("sweedler-II")
    with pytest.raises(ConstraintError, match="close"):
        propagate_lambda(q2, act2, {"b11": 1})


def test_glue_detects_incompatible_gamma():
    q, act, params = fixture_params("z2-six-vertex")
    comps = decompose_components(q, act)
    frags = [build_component_action(c, q, act, params, strict=False) for c in comps]
    assert glue(frags, q, act) == build_action(q, act, params, strict=False)
    other = TaftParams(dict(params.gamma), dict(params.lam))
    other.gamma["orbit-of:v1"] = other.gamma["orbit-of:v1"] + act.ctx.one()
    frags[1] = build_component_action(comps[1], q, act, other, strict=False)
    with pytest.raises(GlueError, match="orbit-of:v1"):
        glue(frags, q, act)
    assert glue(frags[:1], q, act).x_on == glue([frags[0]], q, act).x_on


def test_parameter_file_checks():
    q, act, _ = load_fixture("sweedler-I")
    p = parse_params({"gamma": {"orbit-of:1": "1/2"}, "lambda": {"a12": "z"}}, act.ctx)
    check_param_keys(q, act, p)
    with pytest.raises(ValueError, match="orbit-of:9"):
        check_param_keys(q, act, parse_params({"gamma": {"orbit-of:9": "1"}}, act.ctx))
    with pytest.raises(ValueError, match="lambda"):
        parse_params({"lambda": {"a12": "1+"}}, act.ctx)


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_actions_and_opposites_verify(name):
    q, act, params = fixture_params(name)
    spec = build_action(q, act, params)
    assert verify_all(spec, L=4).ok
    op = opposite_action(spec)
    assert op.zeta == act.ctx.zeta().inverse()
    assert verify_all(op, L=4).ok
    assert opposite_action(op) == spec


def test_opposite_exchanges_sweedler_cases_three_and_four():
    q3, a3, p3 = fixture_params("sweedler-III")
    op = opposite_action(build_action(q3, a3, p3))
    assert sorted((a.src, a.tgt) for a in op.quiver.arrows) == [("1-", "1+"), ("2-", "1+")]
    assert verify_all(op).ok


def test_zero_action_and_inner_faithfulness():
    q, act, params = fixture_params("sweedler-I")
    assert not is_inner_faithful(zero_action(q, act))
    assert is_inner_faithful(build_action(q, act, params))


def test_parametrize_report_shape():
    q, act, _ = load_fixture("z2-six-vertex")
    doc = parametrize(q, act).to_json()
    assert {"free", "derived", "forced-zero", "residual-constraints", "x-action"} <= set(doc)
    assert {d["symbol"] for d in doc["forced-zero"]} == {f"lambda[f{k}]" for k in (3, 4, 5, 6)}


def test_six_vertex_family_forces_a_product_to_vanish():
    # the three power identities together give lambda[f7] * lambda[f9] = 0
    q, act, _ = load_fixture("z2-six-vertex")
    rep = parametrize(q, act)
    ctx = act.ctx
    env = {s: ctx.one() for s in rep.free}
    env["lambda[f7]"] = ctx.zero()
    assert residual_holds(rep, env)
    env["lambda[f7]"], env["lambda[f9]"] = ctx.scalar(3), ctx.scalar(0)
    assert residual_holds(rep, env)
    # meets gamma^2 = gamma''^2 + lambda' lambda'' but not the other two identities
    env.update({"gamma[orbit-of:v1]": ctx.scalar(2), "gamma[orbit-of:v3]": ctx.one(),
                "gamma[orbit-of:v5]": ctx.one(), "lambda[f7]": ctx.scalar(3), "lambda[f9]": ctx.one()})
    assert not residual_holds(rep, env)
    params = TaftParams({"orbit-of:v1": ctx.scalar(2), "orbit-of:v3": ctx.one(), "orbit-of:v5": ctx.one()},
                        propagate_lambda(q, act, {"f7": 3, "f9": 1, "f1": 0}))
    assert not verify_all(build_action(q, act, params, strict=False), L=4).ok


def test_five_vertex_family_has_cubic_residuals():
    q, act, _ = load_fixture("ex-7.8")
    rep = parametrize(q, act)
    ctx = act.ctx
    g = Poly.symbol(ctx, "gamma[orbit-of:v1]")
    diffs = {str(r["lhs"] - r["rhs"]) for r in rep.residual}
    assert str(g ** 3 - Poly.symbol(ctx, "lambda[f4]") ** 3) in diffs
    assert len(rep.residual) == 2


def test_sampler_is_deterministic():
    q, act, _ = load_fixture("sweedler-VI")
    rep = parametrize(q, act)
    assert sample_symbols(rep, seed=11) == sample_symbols(rep, seed=11)
    assert sample_params(rep, seed=11) == sample_params(rep, seed=11)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sampled_points_verify(seed):
    q, act = random_symmetric_quiver(rng_for(f"taft:{seed}"), max_vertices=8, max_orbit_draws=4)
    rep = parametrize(q, act)
    env = sample_symbols(rep, seed=seed)
    assert residual_holds(rep, dict(rep.mu_values, **env))
    spec = build_action(q, act, sample_params(rep, seed=seed))
    assert check_span(spec) == []
    assert verify_all(spec, L=3).ok


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_short_orbits_force_gamma_zero(n):
    for m in (d for d in range(1, n) if n % d == 0):
        q, act = cycle_vertices(n, m)
        rep = parametrize(q, act)
        assert rep.free == [] and [s for s, _ in rep.forced_zero] == ["gamma[orbit-of:1]"]
        with pytest.raises(ConstraintError):
            build_action(q, act, TaftParams({"orbit-of:1": act.ctx.one()}))
