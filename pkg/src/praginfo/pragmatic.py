"""Pragmatic information of messages and message ensembles.

A decision maker holds a strictly positive prior ``q`` over a finite set of
outcomes.  A message ``m`` moves that belief to a posterior ``p_m``; the
pragmatic information of ``m`` is ``D(p_m || q)``.  An ensemble of messages
sampled with probabilities ``phi_m`` carries the expected value of that
divergence.

Two decision makers (``delta`` and ``delta_prime``) receiving a pair of
messages are described by a :class:`JointEnsemble`; joint and conditional
quantities and the chain rule live here too.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .dist import Dist, Prior, as_dist, as_prior, kl_divergence
from .errors import DimensionMismatchError, DistributionError, SchemaError

#: Tolerance for "equal to the prior" / "unit vector" / factorization checks.
PROB_ATOL = 1e-9
#: Tolerance for identities between information quantities.
IDENTITY_ATOL = 1e-10


# --------------------------------------------------------------------------
# single decision maker
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MessageEnsemble:
    """Prior, message probabilities and one posterior per message."""

    prior: Prior
    message_probs: Dist
    posteriors: tuple[Dist, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        prior = as_prior(self.prior)
        phi = as_dist(self.message_probs)
        posts = tuple(as_dist(p) for p in self.posteriors)
        if len(posts) != phi.n:
            raise DimensionMismatchError(
                f"{phi.n} message probabilities but {len(posts)} posteriors"
            )
        for m, p in enumerate(posts):
            if p.n != prior.n:
                raise DimensionMismatchError(
                    f"posterior {m} has {p.n} outcomes, prior has {prior.n}"
                )
        labels = self.labels
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != phi.n:
                raise DimensionMismatchError(f"{len(labels)} labels for {phi.n} messages")
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "message_probs", phi)
        object.__setattr__(self, "posteriors", posts)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrays(cls, prior, message_probs, posteriors, labels=None) -> "MessageEnsemble":
        return cls(Prior(prior), Dist(message_probs), tuple(Dist(p) for p in posteriors), labels)

    @property
    def n_outcomes(self) -> int:
        return self.prior.n

    @property
    def n_messages(self) -> int:
        return self.message_probs.n

    def posterior_matrix(self) -> np.ndarray:
        """``(n_messages, n_outcomes)`` array of ``p_{i|m}``."""
        return np.vstack([p.probs for p in self.posteriors])

    def joint(self) -> np.ndarray:
        """``p_{i,m} = phi_m p_{i|m}`` as an ``(n_messages, n_outcomes)`` array."""
        return self.message_probs.probs[:, None] * self.posterior_matrix()

    def divergences(self) -> np.ndarray:
        """Per-message pragmatic information ``D(p_m || q)``."""
        return np.array([kl_divergence(p, self.prior) for p in self.posteriors])


def pragmatic_info_single(posterior, prior) -> float:
    """Pragmatic information of one message: ``D(posterior || prior)`` in bits."""
    return kl_divergence(posterior, prior)


def _phi_terms(e: MessageEnsemble, messages: Optional[Sequence[int]] = None) -> list[float]:
    q = e.prior.probs
    phi = e.message_probs.probs
    idx = range(e.n_messages) if messages is None else messages
    terms = []
    for m in idx:
        if phi[m] == 0:
            continue
        p = e.posteriors[m].probs
        mask = p > 0
        terms.extend((phi[m] * p[mask] * np.log2(p[mask] / q[mask])).tolist())
    return terms


def ensemble_pragmatic_info(e: MessageEnsemble) -> float:
    """``Phi(M; Omega) = sum_{i,m} phi_m p_{i|m} log2(p_{i|m} / q_i)``."""
    return max(math.fsum(_phi_terms(e)), 0.0)


def marginal_posterior(e: MessageEnsemble) -> Dist:
    """Average posterior ``pbar_i = sum_m phi_m p_{i|m}``."""
    pm = e.posterior_matrix()
    phi = e.message_probs.probs
    return Dist([math.fsum(phi * pm[:, i]) for i in range(e.n_outcomes)])


def mutual_information(e: MessageEnsemble) -> float:
    """Mutual information ``I(M; Omega)`` between message and outcome, in bits."""
    pbar = marginal_posterior(e).probs
    phi = e.message_probs.probs
    terms = []
    for m, post in enumerate(e.posteriors):
        if phi[m] == 0:
            continue
        p = post.probs
        mask = p > 0
        terms.extend((phi[m] * p[mask] * np.log2(p[mask] / pbar[mask])).tolist())
    return max(math.fsum(terms), 0.0)


@dataclass(frozen=True)
class DecompositionReport:
    """``phi = mutual_info + prior_update``, the free-information split."""

    phi: float
    mutual_info: float
    prior_update: float
    marginal_posterior: Dist

    @property
    def residual(self) -> float:
        return self.phi - self.mutual_info - self.prior_update


def decompose(e: MessageEnsemble) -> DecompositionReport:
    pbar = marginal_posterior(e)
    return DecompositionReport(
        phi=ensemble_pragmatic_info(e),
        mutual_info=mutual_information(e),
        prior_update=kl_divergence(pbar, e.prior),
        marginal_posterior=pbar,
    )


class Definitiveness(NamedTuple):
    messages: tuple[bool, ...]
    ensemble: bool


def is_pragmatically_definitive(e: MessageEnsemble, tol: float = PROB_ATOL) -> Definitiveness:
    """Flag messages whose posterior is a unit vector, and the whole ensemble if all are."""
    flags = tuple(p.is_unit(tol) for p in e.posteriors)
    return Definitiveness(flags, all(flags))


def definitive_upper_bound(prior) -> float:
    """``max_i(-log2 q_i)``: the largest pragmatic information any message can carry."""
    q = as_prior(prior).probs
    return float(-math.log2(float(np.min(q))))


def definitive_phi(e: MessageEnsemble, tol: float = PROB_ATOL) -> float:
    """``-sum_m phi_m log2 q_{k(m)}`` for a pragmatically definitive ensemble."""
    if not is_pragmatically_definitive(e, tol).ensemble:
        raise DistributionError("ensemble is not pragmatically definitive")
    q = e.prior.probs
    phi = e.message_probs.probs
    ks = [int(np.argmax(p.probs)) for p in e.posteriors]
    return -math.fsum(phi[m] * math.log2(q[k]) for m, k in enumerate(ks))


def definitive_ensemble(prior, targets: Sequence[int], message_probs=None) -> MessageEnsemble:
    """Ensemble whose message ``m`` makes the decision maker certain of outcome ``targets[m]``."""
    prior = as_prior(prior)
    phi = message_probs if message_probs is not None else Dist.uniform(len(targets))
    return MessageEnsemble(prior, as_dist(phi), tuple(Dist.unit(k, prior.n) for k in targets))


# --------------------------------------------------------------------------
# usefulness partition
# --------------------------------------------------------------------------


class Usefulness(enum.Enum):
    IRRELEVANT = "irrelevant"
    DISINFORMATIVE = "disinformative"
    USEFUL = "useful"

    @classmethod
    def parse(cls, value) -> "Usefulness":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise SchemaError(
                f"unknown usefulness label {value!r}; expected one of {[x.value for x in cls]}"
            ) from None


class PartitionReport(NamedTuple):
    irrelevant: float
    disinformative: float
    useful: float

    @property
    def total(self) -> float:
        return math.fsum(self)


def partition_pragmatic_info(e: MessageEnsemble, labels: Sequence) -> PartitionReport:
    """Split ``Phi`` over caller-labelled irrelevant / disinformative / useful messages.

    The library never decides which label a message deserves; it only does
    the bookkeeping.  Every message needs a label.
    """
    if len(labels) != e.n_messages:
        raise SchemaError(f"{len(labels)} usefulness labels for {e.n_messages} messages")
    parsed = [Usefulness.parse(x) for x in labels]
    parts = {}
    for kind in Usefulness:
        members = [m for m, lab in enumerate(parsed) if lab is kind]
        parts[kind] = max(math.fsum(_phi_terms(e, members)), 0.0)
    return PartitionReport(
        parts[Usefulness.IRRELEVANT], parts[Usefulness.DISINFORMATIVE], parts[Usefulness.USEFUL]
    )


# --------------------------------------------------------------------------
# two decision makers
# --------------------------------------------------------------------------


def _as_prob_array(x, ndim: int, what: str) -> np.ndarray:
    arr = np.array(x, dtype=float)
    if arr.ndim != ndim:
        raise DimensionMismatchError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DistributionError(f"{what} must be finite and non-negative")
    return arr


def _normalized(arr: np.ndarray, what: str, atol: float = PROB_ATOL) -> np.ndarray:
    total = math.fsum(arr.ravel())
    if abs(total - 1.0) > atol:
        raise DistributionError(f"{what} sums to {total!r}, not 1")
    # same rule as Dist: leave sums that are 1 up to rounding untouched
    out = arr / total if abs(total - 1.0) > arr.size * np.finfo(float).eps else arr.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class JointEnsemble:
    """Joint prior ``q_{i,i'}``, joint message law ``phi_{m,m'}`` and joint posteriors.

    ``posteriors[m, m']`` is the ``(N, N')`` matrix ``p_{i,i'|m,m'}``.  The
    conditional quantities used by the chain rule are derived, never stored.
    """

    joint_prior: np.ndarray
    message_probs: np.ndarray
    posteriors: np.ndarray

    def __post_init__(self):
        q = _normalized(_as_prob_array(self.joint_prior, 2, "joint prior"), "joint prior")
        bad = np.argwhere(q <= 0)
        if bad.size:
            i, ip = (int(x) for x in bad[0])
            raise DistributionError(f"joint prior entry ({i},{ip}) is not strictly positive")
        phi = _normalized(_as_prob_array(self.message_probs, 2, "joint message probabilities"),
                          "joint message probabilities")
        post = _as_prob_array(self.posteriors, 4, "joint posteriors")
        if post.shape[:2] != phi.shape or post.shape[2:] != q.shape:
            raise DimensionMismatchError(
                f"posteriors have shape {post.shape}, expected {phi.shape + q.shape}"
            )
        post = post.copy()
        for m, mp in np.ndindex(*phi.shape):
            post[m, mp] = _normalized(post[m, mp], f"posterior ({m},{mp})")
        post.setflags(write=False)
        object.__setattr__(self, "joint_prior", q)
        object.__setattr__(self, "message_probs", phi)
        object.__setattr__(self, "posteriors", post)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """``(|M|, |M'|, N, N')``."""
        return self.posteriors.shape

    def joint_outcome_message(self) -> np.ndarray:
        """``p_{i,i',m,m'} = phi_{m,m'} p_{i,i'|m,m'}``, indexed ``[m, m', i, i']``."""
        return self.message_probs[:, :, None, None] * self.posteriors

    def prior_delta(self) -> Prior:
        return Prior(self.joint_prior.sum(axis=1))

    def prior_delta_prime(self) -> Prior:
        return Prior(self.joint_prior.sum(axis=0))


def product_joint_ensemble(e: MessageEnsemble, e_prime: MessageEnsemble) -> JointEnsemble:
    """Two decision makers that are independent in prior, messages and posteriors."""
    q = np.outer(e.prior.probs, e_prime.prior.probs)
    phi = np.outer(e.message_probs.probs, e_prime.message_probs.probs)
    pm, pmp = e.posterior_matrix(), e_prime.posterior_matrix()
    post = pm[:, None, :, None] * pmp[None, :, None, :]
    return JointEnsemble(q, phi, post)


def _marginal_ensemble(prior: np.ndarray, phi: np.ndarray, post: np.ndarray) -> MessageEnsemble:
    # phi: (M, K) weights for the other decision maker's message; post: (M, K, N)
    phi_m = phi.sum(axis=1)
    rows = []
    for m in range(phi.shape[0]):
        if phi_m[m] > 0:
            rows.append(np.einsum("k,kn->n", phi[m], post[m]) / phi_m[m])
        else:
            # unreachable message; any valid posterior contributes zero weight
            rows.append(post[m].mean(axis=0))
    return MessageEnsemble(Prior(prior), Dist(phi_m), tuple(Dist(r) for r in rows))


def delta_ensemble(j: JointEnsemble) -> MessageEnsemble:
    """The first decision maker's own ensemble: marginalize over ``i'`` and ``m'``."""
    return _marginal_ensemble(
        j.joint_prior.sum(axis=1), j.message_probs, j.posteriors.sum(axis=3)
    )


def delta_prime_ensemble(j: JointEnsemble) -> MessageEnsemble:
    """The second decision maker's own ensemble: marginalize over ``i`` and ``m``."""
    return _marginal_ensemble(
        j.joint_prior.sum(axis=0),
        j.message_probs.T,
        j.posteriors.sum(axis=2).transpose(1, 0, 2),
    )


def joint_pragmatic_info(j: JointEnsemble) -> float:
    """``sum p_{i,i',m,m'} log2(p_{i,i'|m,m'} / q_{i,i'})``."""
    q = j.joint_prior
    terms = []
    for m, mp in np.ndindex(*j.message_probs.shape):
        w = j.message_probs[m, mp]
        if w == 0:
            continue
        p = j.posteriors[m, mp]
        mask = p > 0
        terms.extend((w * p[mask] * np.log2(p[mask] / q[mask])).tolist())
    return max(math.fsum(terms), 0.0)


def conditional_pragmatic_info(j: JointEnsemble) -> float:
    """``sum p_{i,i',m,m'} log2(p'_{i'|i,m,m'} / q'_{i'|i})``.

    Both conditionals are derived from the joint arrays.  Terms whose
    conditioning event has zero posterior mass contribute zero.
    """
    q = j.joint_prior
    q_cond = q / q.sum(axis=1, keepdims=True)
    terms = []
    for m, mp in np.ndindex(*j.message_probs.shape):
        w = j.message_probs[m, mp]
        if w == 0:
            continue
        p = j.posteriors[m, mp]
        row = p.sum(axis=1, keepdims=True)
        mask = p > 0
        p_cond = np.divide(p, row, out=np.zeros_like(p), where=row > 0)
        terms.extend((w * p[mask] * np.log2(p_cond[mask] / q_cond[mask])).tolist())
    return math.fsum(terms)


def marginal_phi_delta(j: JointEnsemble) -> float:
    return ensemble_pragmatic_info(delta_ensemble(j))


def marginal_phi_delta_prime(j: JointEnsemble) -> float:
    return ensemble_pragmatic_info(delta_prime_ensemble(j))


def chain_rule_residual(j: JointEnsemble) -> float:
    """``Phi_joint - Phi_delta - Phi_cond``.

    Zero (up to rounding) whenever the first decision maker's posterior
    depends on its own message only; see :func:`delta_responds_to_own_message`.
    """
    return joint_pragmatic_info(j) - marginal_phi_delta(j) - conditional_pragmatic_info(j)


def delta_responds_to_own_message(j: JointEnsemble, tol: float = PROB_ATOL) -> bool:
    """True if ``p_{i|m,m'}`` does not depend on ``m'`` (among reachable message pairs)."""
    own = j.posteriors.sum(axis=3)  # (M, M', N)
    for m in range(own.shape[0]):
        reach = np.flatnonzero(j.message_probs[m] > 0)
        if reach.size and np.max(np.abs(own[m, reach] - own[m, reach[0]])) >= tol:
            return False
    return True


class IndependenceVerdict(enum.Enum):
    BOTH = "both"
    HOLDS_BY_SUFFICIENT_CONDITION = "holds_by_sufficient_condition"
    ADDITIVE = "additive"
    NEITHER = "neither"


@dataclass(frozen=True)
class IndependenceReport:
    """Outcome of the pragmatic-independence checks.

    ``sufficient`` is the factorization condition (independent priors and a
    joint law that factors into each decision maker's own joint law);
    ``additive`` is ``Phi_joint == Phi_delta + Phi_delta_prime``.
    """

    sufficient: bool
    additive: bool
    phi_joint: float
    phi_delta: float
    phi_delta_prime: float
    prior_independent: bool = field(default=False)
    joint_factorizes: bool = field(default=False)

    @property
    def additivity_gap(self) -> float:
        return self.phi_joint - self.phi_delta - self.phi_delta_prime

    @property
    def verdict(self) -> IndependenceVerdict:
        if self.sufficient and self.additive:
            return IndependenceVerdict.BOTH
        if self.sufficient:
            return IndependenceVerdict.HOLDS_BY_SUFFICIENT_CONDITION
        if self.additive:
            return IndependenceVerdict.ADDITIVE
        return IndependenceVerdict.NEITHER

    @property
    def sound(self) -> bool:
        """The sufficient condition must imply additivity."""
        return self.additive or not self.sufficient


def check_pragmatic_independence(
    j: JointEnsemble, prob_tol: float = PROB_ATOL, info_tol: float = IDENTITY_ATOL
) -> IndependenceReport:
    q = j.joint_prior
    q_cond = q / q.sum(axis=1, keepdims=True)
    q_prime = q.sum(axis=0)
    prior_independent = bool(np.max(np.abs(q_cond - q_prime[None, :])) < prob_tol)

    full = j.joint_outcome_message()  # [m, m', i, i']
    p_im = full.sum(axis=(1, 3))  # [m, i]
    p_ipmp = full.sum(axis=(0, 2))  # [m', i']
    product = p_im[:, None, :, None] * p_ipmp[None, :, None, :]
    joint_factorizes = bool(np.max(np.abs(full - product)) < prob_tol)

    phi_joint = joint_pragmatic_info(j)
    phi_d = marginal_phi_delta(j)
    phi_dp = marginal_phi_delta_prime(j)
    additive = abs(phi_joint - phi_d - phi_dp) < info_tol
    return IndependenceReport(
        sufficient=prior_independent and joint_factorizes,
        additive=additive,
        phi_joint=phi_joint,
        phi_delta=phi_d,
        phi_delta_prime=phi_dp,
        prior_independent=prior_independent,
        joint_factorizes=joint_factorizes,
    )
