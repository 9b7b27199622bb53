"""Finite discrete distributions, entropy, KL divergence and code lengths.

All logarithms are base 2, so every quantity here is in bits.  Sums go
through :func:`math.fsum`, which is correctly rounded; that keeps the
1e-12 identity checks elsewhere in the package meaningful.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import (
    DegenerateDistributionError,
    DimensionMismatchError,
    DistributionError,
    ZeroPriorError,
)

#: Absolute tolerance on ``sum(probs) == 1`` accepted at construction.
NORMALIZATION_ATOL = 1e-9


class Dist:
    """An immutable probability vector over ``N`` outcomes.

    Inputs whose sum is within :data:`NORMALIZATION_ATOL` of one are
    renormalized; anything further off is rejected.  Zero entries are
    allowed (posteriors may rule outcomes out).
    """

    __slots__ = ("_probs",)

    def __init__(self, probs: Iterable[float], *, atol: float = NORMALIZATION_ATOL):
        arr = np.array(list(probs) if not isinstance(probs, np.ndarray) else probs, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise DistributionError(f"expected a non-empty 1-d probability vector, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DistributionError("probabilities must be finite")
        negative = np.flatnonzero(arr < 0)
        if negative.size:
            i = int(negative[0])
            raise DistributionError(f"negative probability {arr[i]!r} at index {i}")
        total = math.fsum(arr)
        if abs(total - 1.0) > atol:
            raise DistributionError(f"probabilities sum to {total!r}, not 1 (tolerance {atol})")
        # sums already equal to 1 up to float rounding are left untouched
        if abs(total - 1.0) > arr.size * np.finfo(float).eps:
            arr = arr / total
        arr.setflags(write=False)
        self._probs = arr
        self._check()

    def _check(self) -> None:
        pass

    @property
    def probs(self) -> np.ndarray:
        """Read-only view of the probabilities."""
        return self._probs

    @property
    def n(self) -> int:
        return self._probs.size

    def __len__(self) -> int:
        return self._probs.size

    def __getitem__(self, i):
        return float(self._probs[i])

    def __iter__(self):
        return iter(self._probs.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._probs, dtype=dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dist):
            return NotImplemented
        return self._probs.shape == other._probs.shape and bool(np.array_equal(self._probs, other._probs))

    def __hash__(self) -> int:
        return hash(self._probs.tobytes())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._probs.tolist()!r})"

    def tolist(self) -> list[float]:
        return self._probs.tolist()

    @property
    def support(self) -> np.ndarray:
        """Indices of outcomes with strictly positive probability."""
        return np.flatnonzero(self._probs > 0)

    def is_unit(self, tol: float = 1e-9) -> bool:
        """True if some entry is within ``tol`` of one (a definitive belief)."""
        return bool(np.max(self._probs) >= 1.0 - tol)

    def allclose(self, other: "Dist", atol: float = 1e-9) -> bool:
        other = as_dist(other)
        return self.n == other.n and bool(np.max(np.abs(self._probs - other._probs)) < atol)

    @classmethod
    def uniform(cls, n: int) -> "Dist":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def unit(cls, k: int, n: int) -> "Dist":
        v = np.zeros(n)
        v[k] = 1.0
        return cls(v)


class Prior(Dist):
    """A :class:`Dist` whose entries are all strictly positive."""

    __slots__ = ()

    def _check(self) -> None:
        bad = np.flatnonzero(self._probs <= 0)
        if bad.size:
            i = int(bad[0])
            raise ZeroPriorError(i, self._probs[i])

    @classmethod
    def unit(cls, k, n):
        raise DistributionError("a unit vector has zero entries and cannot be a prior")


def as_dist(p) -> Dist:
    return p if isinstance(p, Dist) else Dist(p)


def as_prior(q) -> Prior:
    if isinstance(q, Prior):
        return q
    return Prior(q.probs if isinstance(q, Dist) else q)


def _same_dim(p: Dist, q: Dist) -> None:
    if p.n != q.n:
        raise DimensionMismatchError(f"dimension mismatch: {p.n} vs {q.n}")


def kl_divergence(p, q) -> float:
    """KL divergence ``D(p || q)`` in bits.

    Terms with ``p_i == 0`` contribute exactly zero and are skipped, never
    evaluated through ``log(0)``.  ``q`` must be a valid :class:`Prior`
    (strictly positive), so the result is always finite.

    >>> kl_divergence([1.0, 0.0], [0.5, 0.5])
    1.0
    """
    p, q = as_dist(p), as_prior(q)
    _same_dim(p, q)
    pp, qq = p.probs, q.probs
    mask = pp > 0
    terms = pp[mask] * np.log2(pp[mask] / qq[mask])
    # true value is >= 0; only rounding can push it below
    return max(math.fsum(terms), 0.0)


def shannon_entropy(p) -> float:
    """Shannon entropy ``-sum p log2 p`` with ``0 log 0 = 0``."""
    pp = as_dist(p).probs
    pp = pp[pp > 0]
    return max(-math.fsum(pp * np.log2(pp)), 0.0)


@dataclass(frozen=True)
class CodeLengths:
    """Per-outcome code lengths in bits.

    ``None`` marks an outcome that is never encoded because it has zero
    probability under the distribution the code was built for.
    """

    lengths: tuple[Optional[float], ...]

    def __len__(self) -> int:
        return len(self.lengths)

    def __getitem__(self, i):
        return self.lengths[i]

    @property
    def is_integer(self) -> bool:
        return all(x is None or float(x).is_integer() for x in self.lengths)

    def kraft_sum(self) -> float:
        return math.fsum(2.0 ** -x for x in self.lengths if x is not None)

    def expected(self, p) -> float:
        """Expected length under ``p``; raises if ``p`` puts mass on an unencoded outcome."""
        p = as_dist(p)
        if p.n != len(self.lengths):
            raise DimensionMismatchError(f"dimension mismatch: {p.n} vs {len(self.lengths)}")
        terms = []
        for pi, li in zip(p.probs.tolist(), self.lengths):
            if pi == 0:
                continue
            if li is None:
                raise DistributionError("distribution puts mass on an outcome the code cannot encode")
            terms.append(pi * li)
        return math.fsum(terms)


def ideal_code_lengths(p) -> CodeLengths:
    """Shannon's ideal (non-integer) lengths ``-log2 p_i``."""
    pp = as_dist(p).probs
    return CodeLengths(tuple(float(-math.log2(x)) if x > 0 else None for x in pp.tolist()))


def huffman_code_lengths(p) -> CodeLengths:
    """Codeword lengths of a binary Huffman code for ``p``.

    Equal-weight merges are broken by the lowest original index, so the
    result is deterministic.  Zero-probability outcomes are left unencoded.

    Raises
    ------
    DegenerateDistributionError
        If fewer than two outcomes have positive probability.
    """
    pp = as_dist(p).probs
    support = [i for i, x in enumerate(pp.tolist()) if x > 0]
    if len(support) < 2:
        raise DegenerateDistributionError(
            f"Huffman coding needs at least 2 outcomes with positive probability, got {len(support)}"
        )
    depth = {i: 0 for i in support}
    # (weight, smallest leaf index, leaves); leaf sets are disjoint so keys never tie fully
    heap = [(float(pp[i]), i, (i,)) for i in support]
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, k1, a = heapq.heappop(heap)
        w2, k2, b = heapq.heappop(heap)
        for leaf in a + b:
            depth[leaf] += 1
        heapq.heappush(heap, (w1 + w2, min(k1, k2), a + b))
    return CodeLengths(tuple(float(depth[i]) if i in depth else None for i in range(pp.size)))


def shannon_code_lengths(p) -> CodeLengths:
    """Integer Shannon-code lengths ``ceil(-log2 p_i)``; these always satisfy Kraft."""
    pp = as_dist(p).probs
    return CodeLengths(tuple(float(math.ceil(-math.log2(x))) if x > 0 else None for x in pp.tolist()))


def _optimal_integer_lengths(p: Dist) -> CodeLengths:
    # a certain outcome needs no bits at all
    if p.support.size == 1:
        return CodeLengths(tuple(0.0 if x > 0 else None for x in p.probs.tolist()))
    return huffman_code_lengths(p)


CODELENGTH_MODES = ("ideal", "integer", "shannon")


def expected_codelength_gap(p_m, q, mode: str = "ideal") -> float:
    """Expected excess length ``E_p[L_q - L_p]`` of coding with the wrong code.

    Modes
    -----
    ``ideal``
        ``L = -log2(prob)``; equals ``kl_divergence(p_m, q)`` up to rounding.
    ``integer``
        Huffman codes for both ``q`` and ``p_m``.
    ``shannon``
        ``ceil(-log2 q_i)`` for the wrong code and a Huffman code for
        ``p_m``.  This gap always lies strictly inside ``(D - 1, D + 1)``.

    A posterior concentrated on a single outcome gets length 0 for that
    outcome in the integer modes.
    """
    p, qq = as_dist(p_m), as_prior(q)
    _same_dim(p, qq)
    if mode == "ideal":
        pv, qv = p.probs, qq.probs
        mask = pv > 0
        return math.fsum(pv[mask] * (-np.log2(qv[mask]) + np.log2(pv[mask])))
    if mode == "integer":
        wrong = huffman_code_lengths(qq)
    elif mode == "shannon":
        wrong = shannon_code_lengths(qq)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {CODELENGTH_MODES}")
    right = _optimal_integer_lengths(p)
    terms = [
        pi * (lq - lp)
        for pi, lq, lp in zip(p.probs.tolist(), wrong.lengths, right.lengths)
        if pi > 0
    ]
    return math.fsum(terms)


def convex_mix(a, b, lam: float) -> Dist:
    """``lam * a + (1 - lam) * b``.  Mixing two priors yields a :class:`Prior`."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {lam!r}")
    a, b = as_dist(a), as_dist(b)
    _same_dim(a, b)
    cls = Prior if isinstance(a, Prior) and isinstance(b, Prior) else Dist
    return cls(lam * a.probs + (1.0 - lam) * b.probs)
