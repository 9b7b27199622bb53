"""Pragmatic information of one more play of a one-armed bandit.

After ``w`` wins in ``T`` plays the payout probability is estimated by
Laplace's rule of succession, ``(w + 1) / (T + 2)``.  The next play is a
two-message ensemble (PAYOUT / NOPAYOUT) over the two-outcome space
``(PAYOUT, NOPAYOUT)``; index 0 is always PAYOUT.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from numbers import Integral, Real
from typing import Iterable, Optional, Sequence

import numpy as np

from .dist import Dist, Prior, kl_divergence
from .pragmatic import MessageEnsemble

OUTCOMES = ("PAYOUT", "NOPAYOUT")
SWEEP_HEADER = ("T", "w", "q1", "d_win", "d_loss", "phi_bits")


def _check_counts(w, T) -> None:
    if not isinstance(w, Real) or not isinstance(T, Real) or isinstance(w, bool) or isinstance(T, bool):
        raise TypeError(f"wins and trials must be numbers, got {w!r}, {T!r}")
    if not (math.isfinite(w) and math.isfinite(T)):
        raise ValueError("wins and trials must be finite")
    if T < 0 or w < 0 or w > T:
        raise ValueError(f"need 0 <= w <= T, got w={w!r}, T={T!r}")


def _check_pi(pi) -> float:
    pi = float(pi)
    if not 0.0 < pi < 1.0:
        raise ValueError(f"payout probability must lie strictly in (0, 1), got {pi!r}")
    return pi


@dataclass(frozen=True)
class BanditState:
    wins: int
    trials: int
    true_payout: float

    def __post_init__(self):
        if not isinstance(self.wins, Integral) or not isinstance(self.trials, Integral):
            raise TypeError("wins and trials must be integers")
        _check_counts(self.wins, self.trials)
        object.__setattr__(self, "true_payout", _check_pi(self.true_payout))

    def after(self, outcome: int) -> "BanditState":
        return BanditState(self.wins + int(bool(outcome)), self.trials + 1, self.true_payout)


def laplace_estimate(w, T) -> float:
    """Rule-of-succession estimate ``(w + 1) / (T + 2)``.

    Real-valued ``w`` is accepted so the closed forms can be evaluated at
    ``w = pi * T``.
    """
    _check_counts(w, T)
    return (w + 1) / (T + 2)


def trial_ensemble(w, T, pi: Optional[float] = None) -> MessageEnsemble:
    """Message ensemble for play ``T + 1`` after ``w`` wins in ``T`` plays.

    Message probabilities are ``(pi, 1 - pi)`` for the true payout
    probability ``pi``; pass ``pi=None`` to use the Laplace estimate instead.
    """
    q1 = laplace_estimate(w, T)
    pi = q1 if pi is None else _check_pi(pi)
    # complements from the counts, not 1 - x, so mirrored cases round identically
    prior = Prior([q1, (T - w + 1) / (T + 2)])
    win = Dist([(w + 2) / (T + 3), (T - w + 1) / (T + 3)])
    loss = Dist([(w + 1) / (T + 3), (T - w + 2) / (T + 3)])
    return MessageEnsemble(
        prior,
        Dist([pi, 1.0 - pi]),
        (win, loss),
        labels=OUTCOMES,
    )


@dataclass(frozen=True)
class SweepRow:
    T: int
    w: float
    q1: float
    d_win: float
    d_loss: float
    phi: float


def trial_pragmatic_info(w, T, pi: float) -> SweepRow:
    """Divergences after a win and a loss, and their ``pi``-weighted mean."""
    e = trial_ensemble(w, T)
    pi = _check_pi(pi)
    d_win = kl_divergence(e.posteriors[0], e.prior)
    d_loss = kl_divergence(e.posteriors[1], e.prior)
    # written so that d_win == d_loss gives exactly that value for every pi
    phi = d_loss + pi * (d_win - d_loss)
    return SweepRow(T=T, w=w, q1=e.prior[0], d_win=d_win, d_loss=d_loss, phi=phi)


def closed_form_phi(w, T, pi: float) -> float:
    """The expanded four-term expression for the per-play information."""
    _check_counts(w, T)
    pi = _check_pi(pi)
    a = T + 3
    c = math.log2((T + 2) / a)
    d_win = (w + 2) / a * math.log2((w + 2) * (T + 2) / (a * (w + 1))) + (T - w + 1) / a * c
    d_loss = (w + 1) / a * c + (T - w + 2) / a * math.log2(
        (T - w + 2) * (T + 2) / (a * (T - w + 1))
    )
    return pi * d_win + (1 - pi) * d_loss


SWEEP_MODES = ("continuous", "integer")


def sweep(pi: float, t_max: int, mode: str = "continuous") -> list[SweepRow]:
    """Per-play information for ``T = 0 .. t_max`` along the most likely win count.

    ``continuous`` evaluates at ``w = pi * T``; ``integer`` at
    ``w = round(pi * T)`` (ties to even).
    """
    pi = _check_pi(pi)
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    if mode not in SWEEP_MODES:
        raise ValueError(f"unknown sweep mode {mode!r}")
    rows = []
    for T in range(int(t_max) + 1):
        w = pi * T if mode == "continuous" else round(pi * T)
        rows.append(trial_pragmatic_info(w, T, pi))
    return rows


def windowed_laplace(history: Sequence[int], k: int) -> float:
    """Laplace estimate computed from the most recent ``k`` outcomes only."""
    if k < 1:
        raise ValueError(f"window must be at least 1, got {k}")
    recent = list(history)[-k:] if history else []
    if any(x not in (0, 1, True, False) for x in recent):
        raise ValueError("history entries must be 0 or 1")
    return laplace_estimate(sum(int(x) for x in recent), len(recent))


def play_history(pi: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Bernoulli(pi) play outcomes (1 = payout)."""
    pi = _check_pi(pi)
    return (rng.random(n) < pi).astype(np.int8)


def realized_sweep(history: Iterable[int], pi: float) -> list[SweepRow]:
    """Per-play information along an actual play history rather than ``w = pi T``."""
    rows, w = [], 0
    for T, outcome in enumerate(history):
        rows.append(trial_pragmatic_info(w, T, pi))
        w += int(outcome)
    return rows


def is_strictly_decreasing(rows: Sequence[SweepRow]) -> bool:
    return all(b.phi < a.phi for a, b in zip(rows, rows[1:]))


def fmt(x) -> str:
    """12 significant digits; integers print as integers."""
    if isinstance(x, Integral):
        return str(int(x))
    return f"{float(x):.12g}"


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow([fmt(r.T), fmt(r.w), fmt(r.q1), fmt(r.d_win), fmt(r.d_loss), fmt(r.phi)])
    return buf.getvalue()
