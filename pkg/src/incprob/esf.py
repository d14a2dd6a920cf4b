"""Elementary symmetric functions of a non-negative weight vector.

e_k(w) is the sum of products of w over all k-element subsets of its
coordinates, with e_0 = 1 and e_k = 0 for k < 0 or k > len(w).  The
whole table e_0..e_m is built by the one-weight-at-a-time forward
recurrence

    e_k <- e_k + w_j * e_{k-1},

which involves only additions and multiplications of non-negative
numbers and is therefore free of cancellation.

All functions are pure and hold no shared state; they are safe to call
from any number of threads.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["EsfTable", "esf_all", "esf_leave_one_out", "esf_leave_two_out"]

# Rescale the running table once an entry leaves this window.  The common
# factor is folded into EsfTable.log_scale.
_RESCALE_HI = 1e300
_RESCALE_LO = 1e-300


@dataclass(frozen=True)
class EsfTable:
    """Table of elementary symmetric function values e_0..e_m.

    ``values[k] * exp(log_scale)`` is the true e_k.  ``log_scale`` is 0
    unless an intermediate of the recurrence left the representable
    window, which only happens for unnormalized weight vectors with very
    large or very small entries.

    The single common scale factor cannot stretch the float64 range:
    entries more than ~600 decades below the table maximum underflow to
    zero in the scaled representation.  Use :meth:`log_value` when
    working with such tables.
    """

    values: np.ndarray
    log_scale: float = 0.0

    @property
    def degree(self) -> int:
        """m, the number of weights the table was built from."""
        return len(self.values) - 1

    def value(self, k: int) -> float:
        """True e_k; 0 outside 0..m by convention.  May overflow to inf."""
        if k < 0 or k > self.degree:
            return 0.0
        if self.log_scale == 0.0:
            return float(self.values[k])
        return float(self.values[k]) * math.exp(self.log_scale)

    def log_value(self, k: int) -> float:
        """log e_k, or -inf where e_k = 0."""
        if k < 0 or k > self.degree or self.values[k] == 0.0:
            return -math.inf
        return math.log(self.values[k]) + self.log_scale


def _as_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weight vector must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    if not np.any(w > 0):
        raise ValueError("at least one weight must be positive")
    return w


def _forward_table(w: np.ndarray, order: int | None = None) -> EsfTable:
    """Forward recurrence over w, optionally truncated at degree `order`."""
    m = len(w)
    kmax = m if order is None else min(order, m)
    e = np.zeros(kmax + 1)
    e[0] = 1.0
    log_scale = 0.0
    for j in range(m):
        wj = w[j]
        mx = e.max()
        # rescale ahead of the update: one step grows the table by at most 1+wj
        if mx > _RESCALE_HI / (1.0 + wj):
            e /= mx
            log_scale += math.log(mx)
        top = min(j + 1, kmax)
        e[1 : top + 1] = e[1 : top + 1] + wj * e[0:top]
        mx = e.max()
        if mx < _RESCALE_LO:
            e /= mx
            log_scale += math.log(mx)
    return EsfTable(values=e, log_scale=log_scale)


def esf_all(w) -> EsfTable:
    """Full table e_0..e_m of the weight vector w."""
    return _forward_table(_as_weights(w))


def esf_leave_one_out(w, i: int) -> EsfTable:
    """Table e_0..e_{m-1} of w with entry i removed (0-based).

    Computed by a fresh forward recurrence over the remaining weights.
    The subtraction identity e_k(w_{-i}) = e_k(w) - w_i * e_{k-1}(w_{-i})
    is deliberately avoided: it cancels catastrophically when w_i
    dominates the vector.
    """
    w = _as_weights(w)
    if not 0 <= i < len(w):
        raise ValueError(f"index {i} out of range for {len(w)} weights")
    return _forward_table(np.delete(w, i))


def esf_leave_two_out(w, i: int, j: int) -> EsfTable:
    """Table e_0..e_{m-2} of w with entries i and j removed (0-based)."""
    w = _as_weights(w)
    if i == j:
        raise ValueError("leave-two-out indices must differ")
    for idx in (i, j):
        if not 0 <= idx < len(w):
            raise ValueError(f"index {idx} out of range for {len(w)} weights")
    return _forward_table(np.delete(w, [i, j]))
