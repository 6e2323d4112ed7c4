"""Symmetric-function formulas for powers of x, kept independent of the action code.

Only the scalar type is shared with the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclo import CycContext, CycScalar


class PreconditionError(ValueError):
    pass


def h_complete(a, values, ctx: CycContext = None):
    """Complete homogeneous symmetric polynomial h_a(values)."""
    values = list(values)
    if ctx is None:
        if not values:
            raise ValueError("a context is needed when no values are given")
        ctx = values[0].ctx
    if a < 0:
        return ctx.zero()
    if a == 0:
        return ctx.one()
    if not values:
        return ctx.zero()
    # h_a(x_0..x_b) = h_a(x_0..x_{b-1}) + x_b h_{a-1}(x_0..x_b), built up one variable at a time
    row = [ctx.one()] + [ctx.zero()] * a
    for x in values:
        for d in range(1, a + 1):
            row[d] = row[d] + x * row[d - 1]
    return row[a]


def q_binomial(N, K, at: CycScalar):
    """Gaussian binomial [N choose K] evaluated at `at` via the Pascal recurrence."""
    if not 0 <= K <= N:
        raise ValueError(f"need 0 <= K <= N, got N={N}, K={K}")
    ctx = at.ctx
    row = [ctx.one()]
    for r in range(1, N + 1):
        new = [ctx.one()] * (r + 1)
        for k in range(1, r):
            new[k] = row[k - 1] + (at ** k) * row[k]
        row = new
    return row[K]


@dataclass
class PsiInputs:
    """X v^i_j = eta_j v^i_j + theta_ij v^{i+1}_{j+1} + tau_ij v^i_{j+1}, indices mod (m, mp)."""
    ctx: CycContext
    m: int
    mp: int
    eta: dict  # j -> scalar
    theta: dict  # (i, j) -> scalar
    tau: dict  # (i, j) -> scalar
    zeta: CycScalar = None

    def __post_init__(self):
        if self.zeta is None:
            self.zeta = self.ctx.zeta()

    def _ij(self, i, j):
        return ((i - 1) % self.m + 1, (j - 1) % self.mp + 1)

    def E(self, j):
        return self.eta.get((j - 1) % self.mp + 1, self.ctx.zero())

    def T(self, i, j):
        return self.theta.get(self._ij(i, j), self.ctx.zero())

    def U(self, i, j):
        return self.tau.get(self._ij(i, j), self.ctx.zero())


def tautheta_violations(inp: PsiInputs, pairs=None):
    """Index pairs where tau_{i+1,j+1} theta_ij != zeta theta_{i,j+1} tau_ij."""
    pairs = pairs if pairs is not None else [(i, j) for i in range(1, inp.m + 1) for j in range(1, inp.mp + 1)]
    bad = []
    for i, j in pairs:
        if inp.U(i + 1, j + 1) * inp.T(i, j) != inp.zeta * inp.T(i, j + 1) * inp.U(i, j):
            bad.append((i, j))
    return bad


def psi(inp: PsiInputs, k, s, t, i, j, check=True, cache=None):
    """Closed-form coefficient of v^{i+s}_{j+t} in X^k v^i_j.

    cache, if given, memoizes the pieces that do not depend on k; keep one per PsiInputs.
    """
    if check:
        bad = tautheta_violations(inp)
        if bad:
            raise PreconditionError(f"tau/theta commutation fails at {bad[0]}")
    if not 0 <= s <= t <= k:
        return inp.ctx.zero()
    cache = {} if cache is None else cache
    key = ("prod", i, j, s, t)
    out = cache.get(key)
    if out is None:
        out = inp.ctx.one()
        for ell in range(s):
            out = out * inp.T(i + ell, j + ell + t - s)
        for ell in range(t - s):
            out = out * inp.U(i, j + ell)
        cache[key] = out
    if out.is_zero():
        return out
    key = ("eta", j, t, k - t)
    he = cache.get(key)
    if he is None:
        he = cache[key] = h_complete(k - t, [inp.E(j + ell) for ell in range(t + 1)], inp.ctx)
    key = ("zeta", s, t - s)
    hz = cache.get(key)
    if hz is None:
        hz = cache[key] = h_complete(s, [inp.zeta ** ell for ell in range(t - s + 1)], inp.ctx)
    return out * he * hz


def psi_recursive(inp: PsiInputs, k, i, j):
    """All coefficients of X^k v^i_j by iterating the one-step rule; {(s, t): value}."""
    return psi_recursive_all(inp, k, i, j)[k]


def psi_recursive_all(inp: PsiInputs, kmax, i, j):
    """[X^0 v^i_j, ..., X^kmax v^i_j] as coefficient dicts."""
    ctx = inp.ctx
    cur = {(0, 0): ctx.one()}
    seq = [cur]
    for _ in range(kmax):
        nxt = {}
        for (s, t), c in cur.items():
            a, b = i + s, j + t
            for key, f in (((s, t), inp.E(b)), ((s + 1, t + 1), inp.T(a, b)), ((s, t + 1), inp.U(a, b))):
                v = c * f
                if v.is_zero():
                    continue
                w = nxt.get(key)
                nxt[key] = v if w is None else w + v
        cur = {key: v for key, v in nxt.items() if not v.is_zero()}
        seq.append(cur)
    return seq


def psi_table(inp: PsiInputs, k, i, j, cache=None):
    out = {}
    cache = {} if cache is None else cache
    for t in range(k + 1):
        for s in range(t + 1):
            v = psi(inp, k, s, t, i, j, check=False, cache=cache)
            if not v.is_zero():
                out[(s, t)] = v
    return out


def xk_cross_check(inp: PsiInputs, k, i, j, apply_x, basis):
    """Compare the closed form with k-fold application of an operator.

    apply_x maps {key: scalar} to {key: scalar}; basis(i, j) gives the key of v^i_j or None.
    Returns {"equal": bool, "mismatch": ...}.
    """
    start = basis(i, j)
    if start is None:
        raise ValueError(f"no basis element at ({i}, {j})")
    got = {start: inp.ctx.one()}
    for _ in range(k):
        got = apply_x(got)
    return compare_with_closed_form(inp, psi_table(inp, k, i, j), i, j, got, basis)


def xk_cross_check_upto(inp: PsiInputs, kmax, i, j, apply_x, basis, cache=None):
    """xk_cross_check for k = 1..kmax, applying the operator once per step.

    Returns a list of (k, result, closed-form table).
    """
    start = basis(i, j)
    if start is None:
        raise ValueError(f"no basis element at ({i}, {j})")
    got = {start: inp.ctx.one()}
    out = []
    for k in range(1, kmax + 1):
        got = apply_x(got)
        tab = psi_table(inp, k, i, j, cache)
        out.append((k, compare_with_closed_form(inp, tab, i, j, got, basis), tab))
    return out


def compare_with_closed_form(inp: PsiInputs, table, i, j, got, basis):
    ctx = inp.ctx
    want = {}
    for (s, t), c in table.items():
        key = basis(i + s, j + t)
        if key is None:
            return {"equal": False, "mismatch": {"s": s, "t": t, "detail": "nonzero coefficient on a missing path"}}
        want[key] = want.get(key, ctx.zero()) + c
    want = {key: v for key, v in want.items() if not v.is_zero()}
    got = {key: v for key, v in got.items() if not v.is_zero()}
    if want == got:
        return {"equal": True}
    for key in sorted(set(want) | set(got), key=str):
        if want.get(key, ctx.zero()) != got.get(key, ctx.zero()):
            return {"equal": False, "mismatch": {"key": str(key), "closed_form": want.get(key),
                                                 "operator": got.get(key)}}
    return {"equal": False}


def vanishing_grid(ctx: CycContext, limit, literal=False):
    """Pairs (a, b) <= limit with n | a + b where h_a(1, zeta, ..., zeta^b) fails to vanish.

    By default a and b range over residues that are nonzero mod n. With literal=True
    every a, b >= 1 is tried; then a = b = n already gives [2n choose n]_zeta = 2.
    """
    n = ctx.n
    zeta = ctx.zeta()
    bad = []
    for a in range(1, limit + 1):
        for b in range(1, limit + 1):
            if (a + b) % n or (not literal and a % n == 0):
                continue
            if not h_complete(a, [zeta ** e for e in range(b + 1)], ctx).is_zero():
                bad.append((a, b))
    return bad


def type_a_inputs(ctx, m, gamma, mu, lam):
    """Inputs for a Type A component; mu, lam keyed by (i, j), with mu_ii = 1 and lam_ii = 0."""
    zeta = ctx.zeta()
    eta = {j: gamma * zeta ** j for j in range(1, m + 1)}
    theta, tau = {}, {}
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            mij = ctx.one() if i == j else mu.get((i, j), ctx.one())
            theta[(i, j)] = -(gamma * zeta ** (i + 1) * mij)
            tau[(i, j)] = ctx.zero() if i == j else lam.get((i, j), ctx.zero())
    return PsiInputs(ctx, m, m, eta, theta, tau)


def type_b_inputs(ctx, m, mp, gamma_plus, gamma_minus, mu, lam):
    zeta = ctx.zeta()
    eta = {j: gamma_minus * zeta ** j for j in range(1, mp + 1)}
    theta, tau = {}, {}
    for i in range(1, m + 1):
        for j in range(1, mp + 1):
            theta[(i, j)] = -(gamma_plus * zeta ** (i + 1) * mu.get((i, j), ctx.one()))
            tau[(i, j)] = lam.get((i, j), ctx.zero())
    return PsiInputs(ctx, m, mp, eta, theta, tau)


def vertex_inputs(ctx, m, gamma):
    return type_a_inputs(ctx, m, gamma, {}, {})
