"""Running averages of per-message pragmatic information along sampled message sequences.

Messages are drawn either IID from the ensemble's message law or as a
Markov chain whose stationary law must equal it.  Randomness comes from
numpy's ``PCG64`` bit generator seeded with a 64-bit integer; each message
is chosen by inverse-CDF lookup of one uniform double from
``Generator.random``, so a (seed, source) pair fixes the trajectory.
"""

from __future__ import annotations

from bisect import bisect_right
import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dist import Dist, as_dist
from .errors import ConvergenceError, DimensionMismatchError, DistributionError, StationaryMismatchError
from .pragmatic import MessageEnsemble, ensemble_pragmatic_info

GENERATOR_NAME = "numpy.PCG64"
STATIONARY_TOL = 1e-12
STATIONARY_MATCH_TOL = 1e-9
MAX_POWER_ITERATIONS = 1_000_000


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFF_FFFF_FFFF_FFFF))


def _row_stochastic(matrix) -> np.ndarray:
    P = np.array(matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
        raise DimensionMismatchError(f"transition matrix must be square, got shape {P.shape}")
    rows = [Dist(r).probs for r in P]
    P = np.vstack(rows)
    P.setflags(write=False)
    return P


def is_irreducible(transition) -> bool:
    """Every state reaches every other (transitive closure of the support graph)."""
    P = np.asarray(transition) > 0
    n = P.shape[0]
    reach = P | np.eye(n, dtype=bool)
    for k in range(n):
        reach = reach | (reach[:, [k]] & reach[[k], :])
    return bool(reach.all())


def stationary_distribution(transition, tol: float = STATIONARY_TOL,
                            max_iter: int = MAX_POWER_ITERATIONS) -> Dist:
    """Stationary law of an irreducible chain by damped power iteration.

    Iterates ``x <- (x + x P) / 2`` (the lazy chain has the same stationary
    law and is aperiodic) until successive iterates differ by less than
    ``tol`` in max norm.
    """
    P = _row_stochastic(transition)
    if not is_irreducible(P):
        raise DistributionError("transition matrix is not irreducible")
    n = P.shape[0]
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = 0.5 * x + 0.5 * (x @ P)
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - x)) < tol:
            return Dist(nxt)
        x = nxt
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")


@dataclass(frozen=True, eq=False)
class MessageSource:
    """A seeded generator of message indices.

    Use :meth:`iid` or :meth:`markov` rather than the constructor.
    """

    kind: str
    seed: int
    probs: Optional[Dist] = None
    transition: Optional[np.ndarray] = None
    initial: int = 0

    def __post_init__(self):
        if self.kind == "iid":
            if self.probs is None:
                raise ValueError("an IID source needs a message distribution")
            object.__setattr__(self, "probs", as_dist(self.probs))
        elif self.kind == "markov":
            if self.transition is None:
                raise ValueError("a Markov source needs a transition matrix")
            P = _row_stochastic(self.transition)
            if not is_irreducible(P):
                raise DistributionError(
                    "transition matrix is not irreducible: some message would never be sampled"
                )
            if not 0 <= self.initial < P.shape[0]:
                raise ValueError(f"initial state {self.initial} out of range")
            object.__setattr__(self, "transition", P)
        else:
            raise ValueError(f"unknown source kind {self.kind!r}")

    @classmethod
    def iid(cls, probs, seed: int) -> "MessageSource":
        return cls("iid", int(seed), probs=as_dist(probs))

    @classmethod
    def markov(cls, transition, seed: int, initial: int = 0) -> "MessageSource":
        return cls("markov", int(seed), transition=np.asarray(transition, float), initial=int(initial))

    @property
    def n_messages(self) -> int:
        return self.probs.n if self.kind == "iid" else self.transition.shape[0]

    def sample(self, n: int) -> np.ndarray:
        """``n`` message indices, fully determined by the seed."""
        u = make_rng(self.seed).random(n)
        if self.kind == "iid":
            cdf = np.cumsum(self.probs.probs)
            cdf[-1] = np.inf
            return np.searchsorted(cdf, u, side="right")
        cdfs = np.cumsum(self.transition, axis=1)
        cdfs[:, -1] = np.inf
        rows = [r.tolist() for r in cdfs]
        out = np.empty(n, dtype=np.intp)
        state = self.initial
        for k in range(n):
            out[k] = state
            state = bisect_right(rows[state], u[k])
        return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Running averages ``Phi_N`` for ``N = 1 .. len(running)``."""

    running: np.ndarray
    seed: int
    source_kind: str
    generator: str = GENERATOR_NAME

    @property
    def n(self) -> int:
        return int(self.running.size)

    @property
    def final(self) -> float:
        return float(self.running[-1])

    def at(self, N: int) -> float:
        return float(self.running[N - 1])


def sample_trajectory(e: MessageEnsemble, src: MessageSource, n: int) -> Trajectory:
    """Sample ``n`` messages from ``src`` and track the running mean of ``D(p_m || q)``.

    Raises
    ------
    StationaryMismatchError
        For a Markov source whose stationary law differs from the ensemble's
        message probabilities by ``STATIONARY_MATCH_TOL`` or more.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if src.n_messages != e.n_messages:
        raise DimensionMismatchError(
            f"source emits {src.n_messages} messages, ensemble has {e.n_messages}"
        )
    if src.kind == "markov":
        pi = stationary_distribution(src.transition)
        if np.max(np.abs(pi.probs - e.message_probs.probs)) >= STATIONARY_MATCH_TOL:
            raise StationaryMismatchError(pi.probs, e.message_probs.probs)
    d = e.divergences()
    msgs = src.sample(n)
    onehot = np.zeros((n, e.n_messages))
    onehot[np.arange(n), msgs] = 1.0
    counts = np.cumsum(onehot, axis=0)
    # weights c_m/N: a constant sequence gives exactly that constant
    running = (counts / np.arange(1, n + 1)[:, None]) @ d
    seen = np.maximum.accumulate(d[msgs])
    running = np.clip(running, 0.0, seen)
    running.setflags(write=False)
    return Trajectory(running, src.seed, src.kind)


def divergence_std(e: MessageEnsemble) -> float:
    """Standard deviation of ``D(p_m || q)`` under the message law."""
    d = e.divergences()
    phi = e.message_probs.probs
    mean = ensemble_pragmatic_info(e)
    return math.sqrt(math.fsum(phi * (d - mean) ** 2))


def log_checkpoints(n: int) -> list[int]:
    """1, 2, 5, 10, 20, 50, ... up to ``n``, always ending at ``n``."""
    pts, base = [], 1
    while base <= n:
        for k in (1, 2, 5):
            if k * base <= n:
                pts.append(k * base)
        base *= 10
    if not pts or pts[-1] != n:
        pts.append(n)
    return pts


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    buf.write(f"# seed={traj.seed} source={traj.source_kind} generator={traj.generator}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "phi_running_bits"])
    for N in log_checkpoints(traj.n):
        writer.writerow([N, f"{traj.at(N):.12g}"])
    return buf.getvalue()
