"""Brute-force oracles shared by the test modules.

Everything here enumerates subsets or ordered sequences directly from the
definitions, independent of the library's recurrences and dynamic
programs, so it can serve as ground truth at desk scale.
"""

import itertools
import math

import numpy as np


def brute_esf(w, k):
    """e_k as an explicit sum over all k-subsets."""
    w = list(w)
    if k == 0:
        return 1.0
    if k < 0 or k > len(w):
        return 0.0
    return math.fsum(
        math.prod(w[i] for i in sub) for sub in itertools.combinations(range(len(w)), k)
    )


def brute_rejective_pi(alpha, n):
    """Marginals of P(S) proportional to prod(alpha_i, i in S) over n-subsets."""
    alpha = np.asarray(alpha, dtype=float)
    N = len(alpha)
    pi = np.zeros(N)
    total = 0.0
    for sub in itertools.combinations(range(N), n):
        p = math.prod(alpha[i] for i in sub)
        total += p
        for i in sub:
            pi[i] += p
    return pi / total


def brute_successive_seq_prob(alpha, seq):
    """Chain probability of retaining the ordered distinct sequence seq."""
    p = 1.0
    used = 0.0
    for j in seq:
        p *= alpha[j] / (1.0 - used)
        used += alpha[j]
    return p


def brute_successive_pi(alpha, n):
    """Marginals over all ordered distinct length-n retained sequences."""
    alpha = np.asarray(alpha, dtype=float)
    N = len(alpha)
    pi = np.zeros(N)
    for seq in itertools.permutations(range(N), n):
        p = brute_successive_seq_prob(alpha, seq)
        for i in seq:
            pi[i] += p
    return pi


def brute_first_k_sets(alpha, k):
    """P(set of first k retained units = S) for every k-subset S."""
    alpha = np.asarray(alpha, dtype=float)
    N = len(alpha)
    out = {}
    for seq in itertools.permutations(range(N), k):
        key = tuple(sorted(seq))
        out[key] = out.get(key, 0.0) + brute_successive_seq_prob(alpha, seq)
    return out


def random_alpha(rng, N):
    """Uniform point on the simplex via normalized exponentials."""
    e = rng.exponential(1.0, size=N)
    return e / e.sum()
