"""Majorization, entropy, divergence, and the multivariate likelihood-ratio order.

A vector b majorizes a (written a < b here) when both sum to the same
total and, after sorting in increasing order, every bottom partial sum
of a dominates that of b.  Majorization is the spread ordering behind
all comparison results in this package; Shannon entropy reverses it and
the Kullback-Leibler divergence quantifies it.

The likelihood-ratio order on densities over increasing index tuples,
f >=lr g iff f(x) g(y) <= f(x v y) g(x ^ y) for the coordinatewise
max/min, is checked exhaustively: it is a proof-checking oracle, not a
production path.

Natural logarithms throughout.  All functions are pure and thread-safe.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .designs import ExactComputationLimit

__all__ = [
    "MajorizationVerdict",
    "OrderedTupleDensity",
    "LrOrderResult",
    "majorizes",
    "entropy",
    "kl_divergence",
    "ordered_density_rejective",
    "ordered_density_successive",
    "lr_order_check",
]

# Beyond this the n! * C(N, n) permutation sum is no longer desk-scale.
_DENSITY_MAX_UNITS = 10
_DENSITY_MAX_SIZE = 6


def _as_unit_entries(p, name="p") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    if np.any(p < 0) or np.any(p > 1) or not np.all(np.isfinite(p)):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    return p


def _as_prob_vector(p, name="p") -> np.ndarray:
    p = _as_unit_entries(p, name)
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"{name} must sum to 1 (got {p.sum():.12g})")
    return p


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of a majorization comparison a < b.

    ``min_slack`` is the smallest bottom-partial-sum margin
    sum_{i>=k} b_(i) - sum_{i>=k} a_(i) over k = 2..N (0 for N = 1);
    ``sum_gap`` is |sum a - sum b|.  ``holds`` iff min_slack >= -tol and
    sum_gap <= tol.
    """

    holds: bool
    min_slack: float
    sum_gap: float


def majorizes(a, b, tol: float = 1e-10) -> MajorizationVerdict:
    """Does b majorize a (a < b)?  Absolute tolerance on partial sums.

    Entries must lie in [0, 1]; equal totals are part of the verdict
    (``sum_gap``), so inclusion-probability vectors summing to n compare
    directly.
    """
    a = _as_unit_entries(a, "a")
    b = _as_unit_entries(b, "b")
    if len(a) != len(b):
        raise ValueError("majorization requires vectors of equal length")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    sum_gap = abs(float(a_sorted.sum() - b_sorted.sum()))
    # bottom partial sums over k=2..N in the increasing arrangement
    if len(a) > 1:
        tails_a = np.cumsum(a_sorted[::-1])[:-1]
        tails_b = np.cumsum(b_sorted[::-1])[:-1]
        min_slack = float(np.min(tails_b - tails_a))
    else:
        min_slack = 0.0
    holds = bool(min_slack >= -tol and sum_gap <= tol)
    return MajorizationVerdict(holds=holds, min_slack=min_slack, sum_gap=sum_gap)


def entropy(p) -> float:
    """Shannon entropy -sum p_i log p_i with 0 log 0 = 0."""
    p = _as_prob_vector(p)
    pos = p[p > 0]
    return float(-(pos * np.log(pos)).sum())


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum p_i log(p_i / q_i).

    Conventions: x log(x/0) = +inf for x > 0 and 0 log(0/x) = 0, so the
    value is +inf exactly when q has a zero where p has mass.
    """
    p = _as_prob_vector(p, "p")
    q = _as_prob_vector(q, "q")
    if len(p) != len(q):
        raise ValueError("divergence requires vectors of equal length")
    mask = p > 0
    if np.any(q[mask] == 0.0):
        return math.inf
    pm = p[mask]
    return float((pm * np.log(pm / q[mask])).sum())


@dataclass(frozen=True)
class OrderedTupleDensity:
    """Unnormalized density on strictly increasing n-tuples over {0..N-1}."""

    num_units: int
    size: int
    weights: dict[tuple[int, ...], float]

    def domain(self):
        return itertools.combinations(range(self.num_units), self.size)

    def total(self) -> float:
        return sum(self.weights.values())


def ordered_density_rejective(alpha, n) -> OrderedTupleDensity:
    """Weight of each increasing tuple is the product of its alpha entries."""
    alpha = np.asarray(alpha, dtype=float)
    N = len(alpha)
    if not 1 <= n <= N:
        raise ValueError(f"tuple size {n} out of range 1..{N}")
    weights = {
        sub: float(math.prod(alpha[i] for i in sub))
        for sub in itertools.combinations(range(N), n)
    }
    return OrderedTupleDensity(num_units=N, size=n, weights=weights)


def ordered_density_successive(alpha, n) -> OrderedTupleDensity:
    """Retained-tuple density: sum of chain products over all orderings.

    The weight of tuple y is sum over permutations s of y of
    prod_t alpha_{s_t} / (1 - sum_{u<t} alpha_{s_u}); weights sum to 1.
    """
    alpha = np.asarray(alpha, dtype=float)
    N = len(alpha)
    if not 1 <= n <= N:
        raise ValueError(f"tuple size {n} out of range 1..{N}")
    if N > _DENSITY_MAX_UNITS or n > _DENSITY_MAX_SIZE:
        raise ExactComputationLimit(
            f"ordered successive density limited to {_DENSITY_MAX_UNITS} units "
            f"and tuples of size {_DENSITY_MAX_SIZE} (got N={N}, n={n})"
        )
    weights = {}
    for sub in itertools.combinations(range(N), n):
        w = 0.0
        for perm in itertools.permutations(sub):
            chain = 1.0
            used = 0.0
            for j in perm:
                chain *= alpha[j] / (1.0 - used)
                used += alpha[j]
            w += chain
        weights[sub] = w
    return OrderedTupleDensity(num_units=N, size=n, weights=weights)


@dataclass(frozen=True)
class LrOrderResult:
    """Exhaustive likelihood-ratio-order verdict with the tightest pair."""

    holds: bool
    min_slack: float
    worst_pair: tuple[tuple[int, ...], tuple[int, ...]] | None


def lr_order_check(f: OrderedTupleDensity, g: OrderedTupleDensity, tol: float = 1e-12) -> LrOrderResult:
    """Test f >=lr g: f(x) g(y) <= f(x v y) g(x ^ y) for every tuple pair.

    Slack is relative to the larger side of each inequality; the reported
    worst pair is the one with the smallest slack.
    """
    if f.num_units != g.num_units or f.size != g.size:
        raise ValueError("densities must share the same tuple domain")
    tuples = list(f.domain())
    min_slack = math.inf
    worst = None
    for x in tuples:
        fx = f.weights[x]
        for y in tuples:
            lhs = fx * g.weights[y]
            hi = tuple(map(max, x, y))
            lo = tuple(map(min, x, y))
            rhs = f.weights[hi] * g.weights[lo]
            scale = max(lhs, rhs, 1e-300)
            slack = (rhs - lhs) / scale
            if slack < min_slack:
                min_slack = slack
                worst = (x, y)
    return LrOrderResult(holds=min_slack >= -tol, min_slack=min_slack, worst_pair=worst)
