"""Random instances for property checks.

Probability vectors are normalized vectors of unit-exponential draws
(uniform on the simplex).  ``sparsity`` zeroes a random subset of entries,
always leaving at least one positive, so the zero-term conventions get
exercised.
"""

from __future__ import annotations

import numpy as np

from .dist import Dist, Prior
from .pragmatic import JointEnsemble, MessageEnsemble, Usefulness


def simplex(rng: np.random.Generator, n: int, sparsity: float = 0.0) -> np.ndarray:
    x = rng.exponential(size=n)
    if sparsity > 0 and n > 1:
        drop = rng.random(n) < sparsity
        if drop.all():
            drop[rng.integers(n)] = False
        x[drop] = 0.0
    return x / x.sum()


def random_dist(rng, n, sparsity=0.0) -> Dist:
    return Dist(simplex(rng, n, sparsity))


def random_prior(rng, n) -> Prior:
    # keep entries away from denormals so log2 stays well conditioned
    return Prior(np.maximum(simplex(rng, n), 1e-12))


def random_ensemble(rng, n_outcomes, n_messages, sparsity=0.3) -> MessageEnsemble:
    return MessageEnsemble(
        random_prior(rng, n_outcomes),
        random_dist(rng, n_messages, sparsity / 2),
        tuple(random_dist(rng, n_outcomes, sparsity) for _ in range(n_messages)),
    )


def random_sizes(rng, max_dim, k, low=1):
    return [int(rng.integers(low, max_dim + 1)) for _ in range(k)]


def random_joint(rng, max_dim=4, sparsity=0.3) -> JointEnsemble:
    """A joint ensemble in which the first decision maker's posterior depends on its own message only."""
    M, Mp, N, Np = random_sizes(rng, max_dim, 4)
    q = np.maximum(simplex(rng, N * Np), 1e-12).reshape(N, Np)
    phi = simplex(rng, M * Mp, sparsity / 2).reshape(M, Mp)
    own = [simplex(rng, N, sparsity) for _ in range(M)]
    post = np.empty((M, Mp, N, Np))
    for m, mp in np.ndindex(M, Mp):
        for i in range(N):
            post[m, mp, i] = own[m][i] * simplex(rng, Np, sparsity)
    return JointEnsemble(q / q.sum(), phi, post)


def random_labels(rng, n) -> list[Usefulness]:
    kinds = list(Usefulness)
    return [kinds[int(k)] for k in rng.integers(0, len(kinds), size=n)]


def random_transition(rng, n, sparsity=0.0) -> np.ndarray:
    """A row-stochastic matrix with a positive cyclic backbone (always irreducible)."""
    P = np.vstack([simplex(rng, n, sparsity) for _ in range(n)])
    for s in range(n):
        P[s, (s + 1) % n] += 0.1
    return P / P.sum(axis=1, keepdims=True)
