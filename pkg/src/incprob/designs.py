"""Inclusion probabilities and samplers for two without-replacement designs.

Both designs draw units independently with a fixed vector of drawing
probabilities alpha (positive, summing to 1):

* rejective sampling restarts the whole batch whenever a duplicate
  appears, so a realized sample S of size n has probability proportional
  to the product of its alpha entries;
* successive sampling redraws only the duplicated draw, retaining units
  one by one until n distinct units are collected.

The rejective inclusion probability of unit i at sample size n is

    pi_i(n) = alpha_i * e_{n-1}(alpha_{-i}) / e_n(alpha)

with e_k the elementary symmetric functions from :mod:`incprob.esf`.
The successive design has no closed form; its exact quantities come
from a dynamic program over retained subsets (feasible for populations
up to ``EXACT_CUTOFF`` units) and a Monte Carlo fallback beyond that.

All computations are pure functions; samplers take an explicit seed and
hold no global state.
"""

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .esf import _forward_table

__all__ = [
    "EXACT_CUTOFF",
    "DrawingProbabilities",
    "InclusionProfile",
    "SampleDraw",
    "McEstimate",
    "InvalidDistribution",
    "ExactComputationLimit",
    "as_drawing_probabilities",
    "rejective_inclusion",
    "successive_first_k_set_distribution",
    "successive_inclusion_exact",
    "sample_rejective",
    "sample_successive",
    "empirical_inclusion",
]

# Largest population for which the exact successive-sampling subset DP
# (O(2^N * N^2) work) is attempted by default.
EXACT_CUTOFF = 20

_SUM_TOL = 1e-10          # accepted as-is
_RENORM_TOL = 1e-6        # renormalized with a warning; beyond this, an error


class InvalidDistribution(ValueError):
    """The drawing-probability vector violates a domain invariant."""


class ExactComputationLimit(RuntimeError):
    """Population too large for exact enumeration."""


class DrawingProbabilities:
    """Validated per-draw selection probabilities.

    Entries must be strictly inside (0, 1) and sum to 1.  Sums off by at
    most 1e-6 are renormalized with a warning (benign I/O rounding);
    larger deviations raise :class:`InvalidDistribution`.

    ``order`` maps rank to stored position: ``alpha[order]`` is sorted in
    descending order, ties broken stably by original position.
    """

    __slots__ = ("alpha", "order")

    def __init__(self, alpha):
        a = np.array(alpha, dtype=float)
        if a.ndim != 1:
            raise InvalidDistribution("drawing probabilities must be a 1-d sequence")
        if len(a) < 2:
            raise InvalidDistribution("population must contain at least 2 units")
        if not np.all(np.isfinite(a)):
            raise InvalidDistribution("drawing probabilities must be finite")
        if np.any(a <= 0.0):
            raise InvalidDistribution("every drawing probability must be > 0")
        if np.any(a >= 1.0):
            raise InvalidDistribution("every drawing probability must be < 1")
        s = float(a.sum())
        if abs(s - 1.0) > _RENORM_TOL:
            raise InvalidDistribution(
                f"drawing probabilities sum to {s:.12g}, expected 1 within {_RENORM_TOL:g}"
            )
        if abs(s - 1.0) > _SUM_TOL:
            warnings.warn(
                f"drawing probabilities sum to {s:.12g}; renormalizing", stacklevel=2
            )
            a /= s
        a.flags.writeable = False
        self.alpha = a
        order = np.argsort(-a, kind="stable")
        order.flags.writeable = False
        self.order = order

    def __len__(self) -> int:
        return len(self.alpha)

    def descending(self) -> np.ndarray:
        """Copy of alpha sorted in descending order."""
        return self.alpha[self.order].copy()

    def __repr__(self) -> str:
        return f"DrawingProbabilities({self.alpha.tolist()!r})"


def as_drawing_probabilities(alpha) -> DrawingProbabilities:
    if isinstance(alpha, DrawingProbabilities):
        return alpha
    return DrawingProbabilities(alpha)


def _check_sample_size(n, N: int) -> int:
    n = int(n)
    if not 1 <= n <= N:
        raise ValueError(f"sample size {n} out of range 1..{N}")
    return n


@dataclass(frozen=True)
class InclusionProfile:
    """First-order inclusion probabilities of one design at one sample size."""

    design: str
    n: int
    pi: np.ndarray

    @property
    def per_draw(self) -> np.ndarray:
        """pi / n, a probability vector comparable across sample sizes."""
        return self.pi / self.n


@dataclass(frozen=True)
class SampleDraw:
    """One realized sample; unit indices are 0-based.

    ``retained_order`` records the chronological order in which distinct
    units were retained (successive design only).
    """

    units: tuple[int, ...]
    retained_order: tuple[int, ...] | None = None


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo inclusion-frequency estimate.

    ``counts`` holds per-unit inclusion counts, so ``counts.sum()`` equals
    ``n * reps`` exactly; ``pi_hat = counts / reps``.
    """

    design: str
    n: int
    pi_hat: np.ndarray
    se: np.ndarray
    counts: np.ndarray
    reps: int
    seed: int


# ---------------------------------------------------------------------------
# Exact inclusion probabilities
# ---------------------------------------------------------------------------


def rejective_inclusion(alpha, n) -> InclusionProfile:
    """Exact rejective (conditional Poisson) inclusion probabilities."""
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    n = _check_sample_size(n, N)
    a = dp.alpha
    denom = _forward_table(a, order=n)
    pi = np.empty(N)
    for i in range(N):
        loo = _forward_table(np.delete(a, i), order=n - 1)
        ratio = loo.values[n - 1] / denom.values[n]
        pi[i] = a[i] * ratio * math.exp(loo.log_scale - denom.log_scale)
    return InclusionProfile("rejective", n, np.minimum(pi, 1.0))


def _rejective_pi_matrix(dp: DrawingProbabilities) -> np.ndarray:
    """pi[n-1, i] for all sample sizes n = 1..N at once."""
    a = dp.alpha
    N = len(a)
    denom = _forward_table(a)
    mat = np.empty((N, N))
    for i in range(N):
        loo = _forward_table(np.delete(a, i))
        scale = math.exp(loo.log_scale - denom.log_scale)
        for n in range(1, N + 1):
            mat[n - 1, i] = a[i] * (loo.values[n - 1] / denom.values[n]) * scale
    return np.minimum(mat, 1.0)


def _mask_sums(a: np.ndarray) -> np.ndarray:
    """alpha mass of every subset, indexed by bitmask."""
    N = len(a)
    ms = np.zeros(1 << N)
    for i in range(N):
        lo = 1 << i
        ms[lo : lo << 1] = ms[:lo] + a[i]
    return ms


def _successive_dp(a: np.ndarray, k_max: int):
    """Retained-set chain DP run to level k_max.

    Returns ``(P, firstdraw)``: ``P[mask]`` is the probability that the
    set of the first ``k_max`` retained units equals ``mask``, and
    ``firstdraw[k-1, i]`` is the probability that the k-th distinct
    retained draw is unit i.  The level transition is

        P_{k+1}(S + j) += P_k(S) * alpha_j / (1 - alpha(S)),   j not in S,

    i.e. repeated draws of already-retained units are discarded.
    """
    N = len(a)
    size = 1 << N
    ms = _mask_sums(a)
    idx = np.arange(size)
    without = [(idx >> j) & 1 == 0 for j in range(N)]
    P = np.zeros(size)
    P[0] = 1.0
    firstdraw = np.zeros((k_max, N))
    for k in range(k_max):
        h = np.zeros(size)
        np.divide(P, 1.0 - ms, out=h, where=P > 0)
        nxt = np.zeros(size)
        for j in range(N):
            nb = without[j]
            contrib = h[nb] * a[j]
            firstdraw[k, j] = contrib.sum()
            nxt[idx[nb] + (1 << j)] += contrib
        P = nxt
    return P, firstdraw


def _check_cutoff(N: int, exact_cutoff: int):
    if N > exact_cutoff:
        raise ExactComputationLimit(
            f"population of {N} exceeds the exact cutoff {exact_cutoff}; "
            "use empirical_inclusion for a Monte Carlo estimate"
        )


def successive_first_k_set_distribution(alpha, k, *, exact_cutoff=EXACT_CUTOFF):
    """Distribution of the set formed by the first k retained units.

    Returns a dict mapping each sorted k-tuple of 0-based unit indices to
    its probability; values sum to 1.
    """
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    k = _check_sample_size(k, N)
    _check_cutoff(N, exact_cutoff)
    P, _ = _successive_dp(dp.alpha, k)
    out = {}
    for sub in itertools.combinations(range(N), k):
        mask = 0
        for i in sub:
            mask |= 1 << i
        out[sub] = float(P[mask])
    return out


def successive_inclusion_exact(alpha, n, *, exact_cutoff=EXACT_CUTOFF) -> InclusionProfile:
    """Exact successive-sampling inclusion probabilities via the subset DP.

    Computed two ways and cross-checked: as subset-distribution marginals,
    and as the sum over draw positions of first-draw probabilities.
    """
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    n = _check_sample_size(n, N)
    _check_cutoff(N, exact_cutoff)
    P, firstdraw = _successive_dp(dp.alpha, n)
    idx = np.arange(1 << N)
    pi_sets = np.array([P[(idx >> i) & 1 == 1].sum() for i in range(N)])
    pi_positions = firstdraw.sum(axis=0)
    gap = float(np.max(np.abs(pi_sets - pi_positions)))
    if gap > 1e-11:
        raise ArithmeticError(
            f"successive DP cross-check failed: marginal routes differ by {gap:.3e}"
        )
    return InclusionProfile("successive", n, np.minimum(pi_sets, 1.0))


def _successive_pi_matrix(dp: DrawingProbabilities, *, exact_cutoff=EXACT_CUTOFF) -> np.ndarray:
    """pi[n-1, i] for all n = 1..N from one DP pass (draw-position route)."""
    N = len(dp)
    _check_cutoff(N, exact_cutoff)
    _, firstdraw = _successive_dp(dp.alpha, N)
    return np.minimum(np.cumsum(firstdraw, axis=0), 1.0)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def _rejective_suffix_tables(a: np.ndarray, n: int) -> list[np.ndarray]:
    """T[i][r] = e_r(a[i:]) truncated at r <= n, for i = 0..N."""
    N = len(a)
    tables: list[np.ndarray] = [np.zeros(0)] * (N + 1)
    tables[N] = np.ones(1)
    for i in range(N - 1, -1, -1):
        prev = tables[i + 1]
        top = min(n, N - i)
        cur = np.zeros(top + 1)
        cur[: len(prev)] = prev[: top + 1]
        hi = min(top, len(prev))
        cur[1 : hi + 1] += a[i] * prev[:hi]
        tables[i] = cur
    return tables


def _rejective_dp_draw(a, n, rng, tables) -> list[int]:
    """Unit-by-unit accept/reject giving P(S) proportional to prod(alpha)."""
    N = len(a)
    units: list[int] = []
    r = n
    for i in range(N):
        if r == 0:
            break
        if r == N - i:
            units.extend(range(i, N))
            break
        p_take = a[i] * tables[i + 1][r - 1] / tables[i][r]
        if rng.random() < p_take:
            units.append(i)
            r -= 1
    return units


def _restart_draw(a, n, rng, cum=None) -> list[int]:
    """Literal restart scheme: reject the whole batch on any duplicate."""
    if cum is None:
        cum = np.cumsum(a)
    top = len(a) - 1
    while True:
        draws = np.minimum(np.searchsorted(cum, rng.random(n), side="right"), top)
        distinct = set(draws.tolist())
        if len(distinct) == n:
            return sorted(distinct)


def _successive_draw(a, n, rng) -> list[int]:
    """Renormalized step-by-step retention; returns retained order."""
    remaining = list(range(len(a)))
    weights = list(a)
    order: list[int] = []
    for _ in range(n):
        u = rng.random() * sum(weights)
        acc = 0.0
        j = len(weights) - 1
        for jj, w in enumerate(weights):
            acc += w
            if u < acc:
                j = jj
                break
        order.append(remaining.pop(j))
        weights.pop(j)
    return order


def sample_rejective(alpha, n, seed=None, method: str = "dp") -> SampleDraw:
    """Draw one rejective sample.

    ``method="dp"`` (default) decides unit by unit with conditional
    acceptance probabilities built from suffix symmetric-function tables,
    which never rejects; ``method="restart"`` simulates the literal
    restart scheme.  Both sample the same law.
    """
    dp = as_drawing_probabilities(alpha)
    n = _check_sample_size(n, len(dp))
    rng = np.random.default_rng(seed)
    if method == "dp":
        tables = _rejective_suffix_tables(dp.alpha, n)
        units = _rejective_dp_draw(dp.alpha, n, rng, tables)
    elif method == "restart":
        units = _restart_draw(dp.alpha, n, rng)
    else:
        raise ValueError(f"unknown rejective sampling method {method!r}")
    return SampleDraw(units=tuple(sorted(units)))


def sample_successive(alpha, n, seed=None) -> SampleDraw:
    """Draw one successive sample, recording the retained order."""
    dp = as_drawing_probabilities(alpha)
    n = _check_sample_size(n, len(dp))
    rng = np.random.default_rng(seed)
    order = _successive_draw(dp.alpha, n, rng)
    return SampleDraw(units=tuple(sorted(order)), retained_order=tuple(order))


def _replication_rng(seed: int, rep: int) -> np.random.Generator:
    # Splittable derivation: replication r uses spawn key (r,), so serial
    # and parallel execution schedules produce identical streams.
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(rep,)))


def empirical_inclusion(design, alpha, n, reps, seed=0, *, method="dp") -> McEstimate:
    """Monte Carlo inclusion frequencies over ``reps`` replications.

    Deterministic for fixed (seed, reps); replication r draws from a
    generator seeded with spawn key (r,) off the base seed, so results do
    not depend on execution order.
    """
    dp = as_drawing_probabilities(alpha)
    N = len(dp)
    n = _check_sample_size(n, N)
    reps = int(reps)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    a = dp.alpha
    if design == "rejective":
        if method == "dp":
            tables = _rejective_suffix_tables(a, n)

            def draw(rng):
                return _rejective_dp_draw(a, n, rng, tables)

        elif method == "restart":
            cum = np.cumsum(a)

            def draw(rng):
                return _restart_draw(a, n, rng, cum)

        else:
            raise ValueError(f"unknown rejective sampling method {method!r}")
    elif design == "successive":

        def draw(rng):
            return _successive_draw(a, n, rng)

    else:
        raise ValueError(f"unknown design {design!r}")

    counts = np.zeros(N, dtype=np.int64)
    for r in range(reps):
        counts[draw(_replication_rng(seed, r))] += 1
    pi_hat = counts / reps
    se = np.sqrt(pi_hat * (1.0 - pi_hat) / reps)
    return McEstimate(
        design=design, n=n, pi_hat=pi_hat, se=se, counts=counts, reps=reps, seed=seed
    )
