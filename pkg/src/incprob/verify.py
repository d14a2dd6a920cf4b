"""Numerical verification of the ordering relations between the designs.

Every check evaluates one inequality on a concrete drawing-probability
vector and records its numerical slack: the margin by which the
inequality holds, with ``holds`` iff ``slack >= -tolerance``.  The
families covered:

* majorization chains across sample sizes for both designs, the
  rejective-majorized-by-successive relation at fixed size, and the
  uniform/alpha endpoints;
* monotonicity of Shannon entropy along those chains;
* reverse triangle inequalities for the Kullback-Leibler divergence and
  their monotonicity consequences;
* classical max/min and extreme-ratio bounds relating alpha to both
  profiles, and the per-draw successive-majorized-by-alpha relation;
* monotonicity of the profile ratios that drive the chain arguments;
* the exhaustive likelihood-ratio-order check on ordered-sample
  densities, with its implied coordinatewise stochastic dominance.

Populations larger than the exact cutoff get their successive-design
quantities from Monte Carlo profiles; such checks carry
``statistical=True`` and widen their tolerance to four standard errors
(first-order error propagation for entropy and divergence values).

Reports are pure functions of (alpha, parameters, seed); trials of the
randomized suite are independent and may run concurrently.
"""

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .designs import (
    EXACT_CUTOFF,
    DrawingProbabilities,
    ExactComputationLimit,
    as_drawing_probabilities,
    empirical_inclusion,
    _rejective_pi_matrix,
    _successive_pi_matrix,
)
from .orderings import (
    entropy,
    kl_divergence,
    lr_order_check,
    majorizes,
    ordered_density_rejective,
    ordered_density_successive,
)

__all__ = [
    "DEFAULT_TOL",
    "CheckResult",
    "VerificationReport",
    "check_majorization_chains",
    "check_entropy_monotonicity",
    "check_divergence_triangles",
    "check_spread_bounds",
    "check_ratio_monotonicity",
    "check_likelihood_ratio_order",
    "randomized_suite",
]

DEFAULT_TOL = 1e-10
DEFAULT_MC_REPS = 10_000

# enumeration guard for the likelihood-ratio-order check
LR_MAX_UNITS = 10
LR_MAX_SIZE = 6


@dataclass(frozen=True)
class CheckResult:
    """One verified inequality: passes iff slack >= -tolerance."""

    name: str
    statement: str
    holds: bool
    slack: float
    tolerance: float
    statistical: bool = False


@dataclass(frozen=True)
class VerificationReport:
    """Bundle of checks for one population (alpha is None for aggregates)."""

    alpha: tuple[float, ...] | None
    checks: tuple[CheckResult, ...]

    @property
    def overall(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_dict(self) -> dict:
        def num(x: float):
            return x if math.isfinite(x) else repr(x)

        return {
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "overall": self.overall,
            "checks": [
                {
                    "name": c.name,
                    "statement": c.statement,
                    "holds": c.holds,
                    "slack": num(c.slack),
                    "tolerance": num(c.tolerance),
                    "statistical": c.statistical,
                }
                for c in self.checks
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        lines = [
            f"overall: {'PASS' if self.overall else 'FAIL'} ({len(self.checks)} checks)",
            f"{'status':6}  {'mode':5}  {'name':40}  {'slack':>12}  {'tol':>9}  statement",
        ]
        for c in self.checks:
            lines.append(
                f"{'PASS' if c.holds else 'FAIL':6}  "
                f"{'mc' if c.statistical else 'exact':5}  "
                f"{c.name:40}  {c.slack:12.4e}  {c.tolerance:9.1e}  {c.statement}"
            )
        return "\n".join(lines)


def _ge(checks, name, statement, lhs, rhs, tol, statistical=False):
    """Record the check lhs >= rhs; both sides infinite counts as tight."""
    if math.isinf(lhs) and math.isinf(rhs) and lhs == rhs:
        slack = 0.0
    else:
        slack = float(lhs - rhs)
    checks.append(
        CheckResult(name, statement, bool(slack >= -tol), slack, float(tol), statistical)
    )


def _maj(checks, name, statement, small, large, tol, statistical=False):
    """Record the check `small majorized by large`.

    Slack is the tightest bottom-partial-sum margin; a total-sum mismatch
    beyond tolerance fails the check with slack set to -sum_gap.
    """
    v = majorizes(small, large, tol=tol)
    slack = v.min_slack if v.sum_gap <= tol else min(v.min_slack, -v.sum_gap)
    checks.append(
        CheckResult(name, statement, v.holds, float(slack), float(tol), statistical)
    )


def _eq(checks, name, statement, got, expect, tol, statistical=False):
    """Record an equality check; slack is minus the worst deviation."""
    dev = float(np.max(np.abs(np.asarray(got, dtype=float) - expect)))
    checks.append(
        CheckResult(name, statement, bool(dev <= tol), -dev, float(tol), statistical)
    )


# ---------------------------------------------------------------------------
# Profile assembly (exact below the cutoff, Monte Carlo above)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Profiles:
    """Per-size inclusion matrices: row n-1 holds pi(n) over units."""

    alpha: np.ndarray
    rejective: np.ndarray
    successive: np.ndarray
    successive_se: np.ndarray | None  # None when the successive side is exact

    @property
    def statistical(self) -> bool:
        return self.successive_se is not None

    def per_draw(self, design: str, n: int) -> np.ndarray:
        mat = self.rejective if design == "rejective" else self.successive
        return mat[n - 1] / n

    def se(self, n: int) -> np.ndarray:
        if self.successive_se is None:
            return np.zeros_like(self.alpha)
        return self.successive_se[n - 1]


def _profiles(dp: DrawingProbabilities, exact_cutoff, mc_reps, seed) -> _Profiles:
    N = len(dp)
    rej = _rejective_pi_matrix(dp)
    if N <= exact_cutoff:
        return _Profiles(dp.alpha, rej, _successive_pi_matrix(dp), None)
    suc = np.empty((N, N))
    se = np.empty((N, N))
    for n in range(1, N + 1):
        mc = empirical_inclusion("successive", dp, n, mc_reps, seed=(seed, n))
        suc[n - 1] = mc.pi_hat
        se[n - 1] = mc.se
    return _Profiles(dp.alpha, rej, suc, se)


def _sum_noise(se_vec, n):
    """4-sigma bound for partial sums of a per-draw Monte Carlo vector."""
    return 4.0 * float(np.sqrt((se_vec**2).sum())) / n


def _entropy_noise(p, se_vec, n):
    """First-order 4-sigma bound on the entropy of a per-draw estimate."""
    grad = np.abs(np.log(np.maximum(p, 1e-12))) + 1.0
    return 4.0 * float((se_vec / n * grad).sum())


def _divergence_noise(p, q, se_vec, n):
    """First-order 4-sigma bound on D(p||q) when p is a per-draw estimate."""
    grad = np.abs(np.log(np.maximum(p, 1e-12) / q)) + 1.0
    return 4.0 * float((se_vec / n * grad).sum())


# ---------------------------------------------------------------------------
# Check families
# ---------------------------------------------------------------------------


def check_majorization_chains(
    alpha,
    *,
    tol: float = DEFAULT_TOL,
    exact_cutoff: int = EXACT_CUTOFF,
    mc_reps: int = DEFAULT_MC_REPS,
    seed: int = 0,
) -> VerificationReport:
    """Chains p(n+1) majorized by p(n) for both designs, the fixed-size
    rejective-majorized-by-successive relation, and both endpoints."""
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    prof = _profiles(dp, exact_cutoff, mc_reps, seed)
    mc = prof.statistical
    checks: list[CheckResult] = []

    _eq(checks, "uniform_endpoint_rejective", "p_R(N) equals the uniform vector",
        prof.per_draw("rejective", N), 1.0 / N, tol)
    _eq(checks, "alpha_endpoint_rejective", "p_R(1) equals alpha",
        prof.per_draw("rejective", 1) - dp.alpha, 0.0, tol)
    _eq(checks, "uniform_endpoint_successive", "p_S(N) equals the uniform vector",
        prof.per_draw("successive", N), 1.0 / N,
        tol + _sum_noise(prof.se(N), N), mc)
    _eq(checks, "alpha_endpoint_successive", "p_S(1) equals alpha",
        prof.per_draw("successive", 1) - dp.alpha, 0.0,
        tol + _sum_noise(prof.se(1), 1), mc)

    for n in range(1, N):
        _maj(checks, "rejective_chain",
             f"p_R({n + 1}) majorized by p_R({n})",
             prof.per_draw("rejective", n + 1), prof.per_draw("rejective", n), tol)
        noise = _sum_noise(prof.se(n), n) + _sum_noise(prof.se(n + 1), n + 1)
        _maj(checks, "successive_chain",
             f"p_S({n + 1}) majorized by p_S({n})",
             prof.per_draw("successive", n + 1), prof.per_draw("successive", n),
             tol + noise, mc)
    for n in range(1, N + 1):
        _maj(checks, "rejective_majorized_by_successive",
             f"p_R({n}) majorized by p_S({n})",
             prof.per_draw("rejective", n), prof.per_draw("successive", n),
             tol + _sum_noise(prof.se(n), n), mc)
        # redundancy cross-check implied by the two relations above
        _maj(checks, "rejective_majorized_by_alpha",
             f"p_R({n}) majorized by alpha",
             prof.per_draw("rejective", n), dp.alpha, tol)
    return VerificationReport(tuple(dp.alpha), tuple(checks))


def check_entropy_monotonicity(
    alpha,
    *,
    tol: float = DEFAULT_TOL,
    exact_cutoff: int = EXACT_CUTOFF,
    mc_reps: int = DEFAULT_MC_REPS,
    seed: int = 0,
) -> VerificationReport:
    """Entropy grows with sample size for both designs and is larger for
    the rejective design at every fixed size."""
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    prof = _profiles(dp, exact_cutoff, mc_reps, seed)
    mc = prof.statistical
    h_alpha = entropy(dp.alpha)
    hr = []
    hs = []
    noise = []
    for n in range(1, N + 1):
        hr.append(entropy(prof.per_draw("rejective", n)))
        p = prof.per_draw("successive", n)
        hs.append(entropy(p / p.sum()))
        noise.append(_entropy_noise(p, prof.se(n), n) if mc else 0.0)
    checks: list[CheckResult] = []

    _eq(checks, "entropy_endpoint_uniform_rejective", "H(p_R(N)) equals log N",
        hr[-1], math.log(N), tol)
    _eq(checks, "entropy_endpoint_alpha_rejective", "H(p_R(1)) equals H(alpha)",
        hr[0], h_alpha, tol)
    _eq(checks, "entropy_endpoint_uniform_successive", "H(p_S(N)) equals log N",
        hs[-1], math.log(N), tol + noise[-1], mc)
    _eq(checks, "entropy_endpoint_alpha_successive", "H(p_S(1)) equals H(alpha)",
        hs[0], h_alpha, tol + noise[0], mc)

    for n in range(1, N):
        _ge(checks, "entropy_monotone_rejective",
            f"H(p_R({n + 1})) >= H(p_R({n}))", hr[n], hr[n - 1], tol)
        _ge(checks, "entropy_monotone_successive",
            f"H(p_S({n + 1})) >= H(p_S({n}))", hs[n], hs[n - 1],
            tol + noise[n] + noise[n - 1], mc)
    for n in range(1, N + 1):
        _ge(checks, "entropy_rejective_dominates",
            f"H(p_R({n})) >= H(p_S({n}))", hr[n - 1], hs[n - 1],
            tol + noise[n - 1], mc)
    return VerificationReport(tuple(dp.alpha), tuple(checks))


def check_divergence_triangles(
    alpha,
    triple: tuple[int, int, int] | None = None,
    *,
    tol: float = DEFAULT_TOL,
    exact_cutoff: int = EXACT_CUTOFF,
    mc_reps: int = DEFAULT_MC_REPS,
    seed: int = 0,
) -> VerificationReport:
    """Reverse triangle inequalities for the divergence and their
    monotonicity consequences.

    ``triple`` is (l, m, n) with 1 <= l < m < n <= N; None checks every
    valid triple plus the consequence inequalities at every size.
    """
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    if triple is None:
        triples = list(itertools.combinations(range(1, N + 1), 3))
        grow_sizes = range(1, N)
        dominate_sizes = range(1, N + 1)
    else:
        l, m, n = (int(v) for v in triple)
        if not (1 <= l < m < n <= N):
            raise ValueError(f"triple {triple} must satisfy 1 <= l < m < n <= {N}")
        triples = [(l, m, n)]
        grow_sizes = [m]
        dominate_sizes = [n]
    prof = _profiles(dp, exact_cutoff, mc_reps, seed)
    mc = prof.statistical
    a = dp.alpha

    def pR(n):
        return prof.per_draw("rejective", n)

    def pS(n):
        p = prof.per_draw("successive", n)
        return p / p.sum()

    def noise(p, q, n):
        # Monte Carlo error bound for one divergence value D(p||q)
        return _divergence_noise(p, q, prof.se(n), n) if mc else 0.0

    checks: list[CheckResult] = []
    for (l, m, n) in triples:
        _ge(checks, "divergence_triangle_rejective_forward",
            f"D(p_R({l})||p_R({n})) >= D(p_R({l})||p_R({m})) + D(p_R({m})||p_R({n}))",
            kl_divergence(pR(l), pR(n)),
            kl_divergence(pR(l), pR(m)) + kl_divergence(pR(m), pR(n)), tol)
        _ge(checks, "divergence_triangle_rejective_reverse",
            f"D(p_R({n})||p_R({l})) >= D(p_R({m})||p_R({l})) + D(p_R({n})||p_R({m}))",
            kl_divergence(pR(n), pR(l)),
            kl_divergence(pR(m), pR(l)) + kl_divergence(pR(n), pR(m)), tol)
        t_ss = tol + noise(pS(n), a, n) + noise(pS(n), pS(m), n) + noise(pS(m), a, m)
        _ge(checks, "divergence_triangle_successive",
            f"D(p_S({n})||alpha) >= D(p_S({n})||p_S({m})) + D(p_S({m})||alpha)",
            kl_divergence(pS(n), a),
            kl_divergence(pS(n), pS(m)) + kl_divergence(pS(m), a), t_ss, mc)
        t_rs = tol + noise(pR(n), pS(n), n) + noise(pS(n), a, n)
        _ge(checks, "divergence_triangle_cross",
            f"D(p_R({n})||alpha) >= D(p_R({n})||p_S({n})) + D(p_S({n})||alpha)",
            kl_divergence(pR(n), a),
            kl_divergence(pR(n), pS(n)) + kl_divergence(pS(n), a), t_rs, mc)

    for m in grow_sizes:
        _ge(checks, "divergence_grows_rejective",
            f"D(p_R({m + 1})||alpha) >= D(p_R({m})||alpha)",
            kl_divergence(pR(m + 1), a), kl_divergence(pR(m), a), tol)
        _ge(checks, "divergence_grows_rejective_reversed",
            f"D(alpha||p_R({m + 1})) >= D(alpha||p_R({m}))",
            kl_divergence(a, pR(m + 1)), kl_divergence(a, pR(m)), tol)
        _ge(checks, "divergence_grows_successive",
            f"D(p_S({m + 1})||alpha) >= D(p_S({m})||alpha)",
            kl_divergence(pS(m + 1), a), kl_divergence(pS(m), a),
            tol + noise(pS(m + 1), a, m + 1) + noise(pS(m), a, m), mc)
    for n in dominate_sizes:
        _ge(checks, "divergence_rejective_dominates",
            f"D(p_R({n})||alpha) >= D(p_S({n})||alpha)",
            kl_divergence(pR(n), a), kl_divergence(pS(n), a),
            tol + noise(pS(n), a, n), mc)
    return VerificationReport(tuple(dp.alpha), tuple(checks))


def check_spread_bounds(
    alpha,
    n: int | None = None,
    *,
    tol: float = DEFAULT_TOL,
    exact_cutoff: int = EXACT_CUTOFF,
    mc_reps: int = DEFAULT_MC_REPS,
    seed: int = 0,
) -> VerificationReport:
    """Max/min bounds, the extreme-ratio chain, and the per-draw
    successive-majorized-by-alpha relation; n=None checks every size."""
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    sizes = range(1, N + 1) if n is None else [int(n)]
    prof = _profiles(dp, exact_cutoff, mc_reps, seed)
    mc = prof.statistical
    a = dp.alpha
    checks: list[CheckResult] = []
    for k in sizes:
        piR = prof.rejective[k - 1]
        piS = prof.successive[k - 1]
        se = prof.se(k)
        t_ext = tol + 4.0 * float(se.max())
        _ge(checks, "max_bound_successive",
            f"{k}*max(alpha) >= max(pi_S({k}))", k * a.max(), piS.max(), t_ext, mc)
        _ge(checks, "max_successive_vs_rejective",
            f"max(pi_S({k})) >= max(pi_R({k}))", piS.max(), piR.max(), t_ext, mc)
        _ge(checks, "min_bound_successive",
            f"min(pi_S({k})) >= {k}*min(alpha)", piS.min(), k * a.min(), t_ext, mc)
        _ge(checks, "min_successive_vs_rejective",
            f"min(pi_R({k})) >= min(pi_S({k}))", piR.min(), piS.min(), t_ext, mc)
        # extreme-ratio chain compared on the log scale
        lr_a = math.log(a.max()) - math.log(a.min())
        lr_s = math.log(piS.max()) - math.log(piS.min())
        lr_r = math.log(piR.max()) - math.log(piR.min())
        t_log = tol + (4.0 * float((se / np.maximum(piS, 1e-12)).max()) if mc else 0.0)
        _ge(checks, "ratio_chain_alpha_vs_successive",
            f"max/min ratio of alpha >= that of pi_S({k}) (log scale)",
            lr_a, lr_s, t_log, mc)
        _ge(checks, "ratio_chain_successive_vs_rejective",
            f"max/min ratio of pi_S({k}) >= that of pi_R({k}) (log scale)",
            lr_s, lr_r, t_log, mc)
        _maj(checks, "per_draw_successive_majorized_by_alpha",
             f"p_S({k}) majorized by alpha",
             piS / k, a, tol + _sum_noise(se, k), mc)
    return VerificationReport(tuple(dp.alpha), tuple(checks))


def check_ratio_monotonicity(
    alpha,
    n: int | None = None,
    *,
    tol: float = DEFAULT_TOL,
    exact_cutoff: int = EXACT_CUTOFF,
    mc_reps: int = DEFAULT_MC_REPS,
    seed: int = 0,
) -> VerificationReport:
    """With alpha sorted descending: p_S(n)/alpha is non-decreasing across
    units, and pi_R(n)/pi_R(n+1) is non-increasing; n=None checks every
    applicable size."""
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    sizes = range(1, N + 1) if n is None else [int(n)]
    prof = _profiles(dp, exact_cutoff, mc_reps, seed)
    mc = prof.statistical
    order = dp.order
    a_desc = dp.alpha[order]
    checks: list[CheckResult] = []
    for k in sizes:
        pS = prof.successive[k - 1][order] / k
        ratios = pS / a_desc
        t_r = tol + (
            8.0 * float((prof.se(k)[order] / (k * a_desc)).max()) if mc else 0.0
        )
        _ge(checks, "successive_ratio_monotone",
            f"p_S({k})/alpha non-decreasing across units sorted by alpha",
            float(np.min(np.diff(ratios))), 0.0, t_r, mc)
        if k < N:
            rr = prof.rejective[k - 1][order] / prof.rejective[k][order]
            _ge(checks, "rejective_ratio_monotone",
                f"pi_R({k})/pi_R({k + 1}) non-increasing across units sorted by alpha",
                float(np.min(-np.diff(rr))), 0.0, tol)
    return VerificationReport(tuple(dp.alpha), tuple(checks))


def check_likelihood_ratio_order(
    alpha,
    n: int,
    *,
    tol: float = 1e-12,
) -> VerificationReport:
    """Exhaustive likelihood-ratio-order check between the ordered-sample
    densities (alpha sorted descending), plus the implied coordinatewise
    stochastic dominance of the sample positions."""
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    if N > LR_MAX_UNITS or n > LR_MAX_SIZE:
        raise ExactComputationLimit(
            f"likelihood-ratio check limited to N <= {LR_MAX_UNITS}, n <= {LR_MAX_SIZE}"
        )
    a_desc = dp.descending()
    f = ordered_density_rejective(a_desc, n)
    g = ordered_density_successive(a_desc, n)
    res = lr_order_check(f, g, tol=tol)
    checks = [
        CheckResult(
            "likelihood_ratio_order",
            f"f(x)g(y) <= f(max(x,y))g(min(x,y)) over all ordered {n}-tuple pairs",
            res.holds,
            res.min_slack,
            tol,
        )
    ]
    # implied dominance: every rejective position CDF is below the
    # successive one, checked by exhaustive marginalization
    ftot = f.total()
    worst = math.inf
    for j in range(n):
        cdf_f = np.zeros(N)
        cdf_g = np.zeros(N)
        for t, w in f.weights.items():
            cdf_f[t[j]:] += w / ftot
        for t, w in g.weights.items():
            cdf_g[t[j]:] += w
        worst = min(worst, float(np.min(cdf_g - cdf_f)))
    checks.append(
        CheckResult(
            "stochastic_dominance_marginals",
            "each rejective sample position stochastically dominates the successive one",
            worst >= -DEFAULT_TOL,
            worst,
            DEFAULT_TOL,
        )
    )
    return VerificationReport(tuple(dp.alpha), tuple(checks))


# ---------------------------------------------------------------------------
# Randomized aggregate suite
# ---------------------------------------------------------------------------


def _aggregate(checks: list[CheckResult]) -> tuple[CheckResult, ...]:
    grouped: dict[str, list[CheckResult]] = {}
    for c in checks:
        grouped.setdefault(c.name, []).append(c)
    out = []
    for name, group in grouped.items():
        worst = min(group, key=lambda c: c.slack)
        out.append(
            CheckResult(
                name=name,
                statement=f"{len(group)} instances; tightest: {worst.statement}",
                holds=all(c.holds for c in group),
                slack=worst.slack,
                tolerance=worst.tolerance,
                statistical=any(c.statistical for c in group),
            )
        )
    return tuple(out)


def randomized_suite(
    population_sizes=range(2, 11),
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float = DEFAULT_TOL,
    exact_cutoff: int = EXACT_CUTOFF,
    mc_reps: int = DEFAULT_MC_REPS,
    lr_max_units: int = 6,
    lr_max_size: int = 3,
) -> VerificationReport:
    """Run every check family on random simplex-uniform populations.

    ``trials`` populations are generated in total, cycling through
    ``population_sizes``; trial t draws its alpha (normalized
    exponentials) from a generator seeded with spawn key (t,), so the
    suite is deterministic per seed.  The aggregate report keeps, per
    check name, the tightest slack seen and the conjunction of outcomes.
    """
    sizes = list(population_sizes)
    if not sizes or trials < 1:
        raise ValueError("need at least one population size and one trial")
    all_checks: list[CheckResult] = []
    for t in range(trials):
        N = sizes[t % len(sizes)]
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(t,)))
        e = rng.exponential(1.0, size=N)
        alpha = DrawingProbabilities(e / e.sum())
        kw = dict(tol=tol, exact_cutoff=exact_cutoff, mc_reps=mc_reps, seed=seed)
        all_checks.extend(check_majorization_chains(alpha, **kw).checks)
        all_checks.extend(check_entropy_monotonicity(alpha, **kw).checks)
        all_checks.extend(check_divergence_triangles(alpha, **kw).checks)
        all_checks.extend(check_spread_bounds(alpha, **kw).checks)
        all_checks.extend(check_ratio_monotonicity(alpha, **kw).checks)
        if N <= lr_max_units:
            for n in range(1, min(N, lr_max_size) + 1):
                all_checks.extend(check_likelihood_ratio_order(alpha, n).checks)
    return VerificationReport(None, _aggregate(all_checks))
