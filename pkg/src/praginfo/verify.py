"""Randomized checks of every identity and inequality the library relies on.

Each check draws one random instance, evaluates the property, and on
failure returns the instance as an ensemble / joint-ensemble document so
it can be fed straight back to the CLI.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import bandit
from .dist import (
    Dist,
    convex_mix,
    expected_codelength_gap,
    huffman_code_lengths,
    kl_divergence,
    shannon_entropy,
)
from .ergodic import stationary_distribution
from .formats import boolean_joint, ensemble_to_dict, joint_to_dict
from .pragmatic import (
    IDENTITY_ATOL,
    MessageEnsemble,
    check_pragmatic_independence,
    chain_rule_residual,
    conditional_pragmatic_info,
    decompose,
    definitive_ensemble,
    definitive_phi,
    definitive_upper_bound,
    ensemble_pragmatic_info,
    joint_pragmatic_info,
    marginal_phi_delta,
    marginal_phi_delta_prime,
    mutual_information,
    partition_pragmatic_info,
    product_joint_ensemble,
)
from .sampling import (
    random_dist,
    random_ensemble,
    random_joint,
    random_labels,
    random_prior,
    random_transition,
)

EXACT_ATOL = 1e-12


@dataclass
class PropertyResult:
    name: str
    passed: int = 0
    failed: int = 0
    informational: bool = False
    counterexample: Optional[dict] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.informational or self.failed == 0


@dataclass
class SuiteResult:
    results: list[PropertyResult] = field(default_factory=list)
    seed: int = 0
    trials: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def first_failure(self) -> Optional[PropertyResult]:
        return next((r for r in self.results if not r.ok), None)


def _pair_doc(p, q) -> dict:
    """A (posterior, prior) pair as a one-message ensemble document."""
    return {"prior": list(q), "messages": [{"label": "m", "prob": 1.0, "posterior": list(p)}]}


def _dims(rng, max_dim, low=2):
    return int(rng.integers(low, max(max_dim, low) + 1))


# each check: (rng, max_dim) -> (ok, instance document, detail)


def check_kl_nonnegativity(rng, max_dim):
    n = _dims(rng, max_dim)
    q = random_prior(rng, n)
    p = q if rng.random() < 0.2 else random_dist(rng, n, 0.3)
    d = kl_divergence(p, q)
    close = float(np.max(np.abs(p.probs - q.probs))) < 1e-9
    ok = d >= 0 and ((d < EXACT_ATOL) == close)
    return ok, _pair_doc(p, q), f"D={d!r}"


def check_convexity(rng, max_dim):
    n = _dims(rng, max_dim)
    p, pp = random_dist(rng, n, 0.3), random_dist(rng, n, 0.3)
    q, qp = random_prior(rng, n), random_prior(rng, n)
    lam = float(rng.random())
    lhs = kl_divergence(convex_mix(p, pp, lam), convex_mix(q, qp, lam))
    rhs = lam * kl_divergence(p, q) + (1 - lam) * kl_divergence(pp, qp)
    doc = {"p": p.tolist(), "p_prime": pp.tolist(), "q": q.tolist(), "q_prime": qp.tolist(), "lambda": lam}
    return lhs <= rhs + IDENTITY_ATOL, doc, f"lhs={lhs!r} rhs={rhs!r}"


def check_wrong_code_identity(rng, max_dim):
    n = _dims(rng, max_dim)
    p, q = random_dist(rng, n, 0.3), random_prior(rng, n)
    gap = expected_codelength_gap(p, q, "ideal")
    d = kl_divergence(p, q)
    return abs(gap - d) < EXACT_ATOL, _pair_doc(p, q), f"gap={gap!r} D={d!r}"


def check_wrong_code_bounds(rng, max_dim):
    n = _dims(rng, max(max_dim, 2) * 4)
    p, q = random_dist(rng, n, 0.3), random_prior(rng, n)
    gap = expected_codelength_gap(p, q, "shannon")
    d = kl_divergence(p, q)
    # a nearly certain p puts the exact gap within rounding of D - 1
    return d - 1 - EXACT_ATOL < gap < d + 1, _pair_doc(p, q), f"gap={gap!r} D={d!r}"


def check_huffman_band(rng, max_dim):
    n = _dims(rng, max(max_dim, 2) * 4)
    p, q = random_dist(rng, n, 0.3), random_prior(rng, n)
    gap = expected_codelength_gap(p, q, "integer")
    d = kl_divergence(p, q)
    return d - 1 < gap < d + 1, _pair_doc(p, q), f"gap={gap!r} D={d!r}"


@lru_cache(maxsize=None)
def _kraft_length_table(n: int) -> np.ndarray:
    rows = [
        ls for ls in itertools.product(range(1, n), repeat=n)
        if sum(2.0 ** -x for x in ls) <= 1.0
    ]
    return np.array(rows, dtype=float)


def optimal_prefix_length(p) -> float:
    """Minimum expected length over every integer length vector satisfying Kraft."""
    pp = np.asarray(p, float)
    pp = pp[pp > 0]
    if pp.size < 2:
        return 0.0
    return float(np.min(_kraft_length_table(pp.size) @ pp))


def check_huffman_optimality(rng, max_dim):
    n = _dims(rng, min(6, max(max_dim, 2)))
    p = random_dist(rng, n)
    got = huffman_code_lengths(p).expected(p)
    best = optimal_prefix_length(p.probs)
    return abs(got - best) < 1e-12, {"p": p.tolist()}, f"huffman={got!r} optimum={best!r}"


def check_entropy_bounds(rng, max_dim):
    n = _dims(rng, max_dim)
    p = random_dist(rng, n, 0.3)
    h = shannon_entropy(p)
    return -EXACT_ATOL <= h <= math.log2(n) + EXACT_ATOL, {"p": p.tolist()}, f"H={h!r}"


def _ens(rng, max_dim):
    return random_ensemble(rng, _dims(rng, max_dim), _dims(rng, max_dim, 1))


def check_ensemble_nonnegativity(rng, max_dim):
    e = _ens(rng, max_dim)
    if rng.random() < 0.2:
        e = MessageEnsemble(e.prior, e.message_probs, tuple(e.prior for _ in e.posteriors))
    phi = ensemble_pragmatic_info(e)
    unchanged = all(
        e.message_probs[m] == 0 or p.allclose(e.prior) for m, p in enumerate(e.posteriors)
    )
    ok = phi >= 0 and ((phi < EXACT_ATOL) == unchanged)
    return ok, ensemble_to_dict(e), f"Phi={phi!r}"


def check_upper_bound(rng, max_dim):
    e = _ens(rng, max_dim)
    phi = ensemble_pragmatic_info(e)
    bound = definitive_upper_bound(e.prior)
    k = int(np.argmin(e.prior.probs))
    attained = ensemble_pragmatic_info(definitive_ensemble(e.prior, [k]))
    ok = phi <= bound + EXACT_ATOL and abs(attained - bound) < EXACT_ATOL
    return ok, ensemble_to_dict(e), f"Phi={phi!r} bound={bound!r} attained={attained!r}"


def check_definitive_formula(rng, max_dim):
    n = _dims(rng, max_dim)
    m = _dims(rng, max_dim, 1)
    prior = random_prior(rng, n)
    targets = [int(k) for k in rng.integers(0, n, size=m)]
    e = definitive_ensemble(prior, targets, random_dist(rng, m))
    phi, formula = ensemble_pragmatic_info(e), definitive_phi(e)
    return abs(phi - formula) < EXACT_ATOL, ensemble_to_dict(e), f"Phi={phi!r} formula={formula!r}"


def check_decomposition(rng, max_dim):
    e = _ens(rng, max_dim)
    if rng.random() < 0.25:
        # re-center the prior on the average posterior: equality case
        pbar = decompose(e).marginal_posterior.probs
        if np.all(pbar > 0):
            e = MessageEnsemble(pbar, e.message_probs, e.posteriors)
    r = decompose(e)
    ok = (
        abs(r.residual) < IDENTITY_ATOL
        and r.phi >= r.mutual_info - IDENTITY_ATOL
        and min(r.phi, r.mutual_info, r.prior_update) >= 0
    )
    return ok, ensemble_to_dict(e), f"Phi={r.phi!r} I={r.mutual_info!r} D={r.prior_update!r}"


def check_chain_rule(rng, max_dim):
    j = random_joint(rng, max(max_dim, 1))
    res = chain_rule_residual(j)
    return abs(res) < IDENTITY_ATOL, joint_to_dict(j), f"residual={res!r}"


def check_independence_soundness(rng, max_dim):
    if rng.random() < 0.5:
        j = product_joint_ensemble(_ens(rng, max_dim), _ens(rng, max_dim))
        rep = check_pragmatic_independence(j)
        ok = rep.sufficient and rep.additive
    else:
        j = random_joint(rng, max(max_dim, 1))
        rep = check_pragmatic_independence(j)
        ok = rep.sound
    return ok, joint_to_dict(j), f"verdict={rep.verdict.value} gap={rep.additivity_gap!r}"


def check_partition(rng, max_dim):
    e = _ens(rng, max_dim)
    labels = random_labels(rng, e.n_messages)
    parts = partition_pragmatic_info(e, labels)
    total = ensemble_pragmatic_info(e)
    ok = abs(parts.total - total) < EXACT_ATOL and all(
        -EXACT_ATOL <= x <= total + EXACT_ATOL for x in parts
    )
    return ok, ensemble_to_dict(e, labels), f"parts={tuple(parts)!r} total={total!r}"


def check_bandit_closed_form(rng, max_dim):
    T = int(rng.integers(0, 2000))
    w = int(rng.integers(0, T + 1))
    pi = float(rng.uniform(0.001, 0.999))
    row = bandit.trial_pragmatic_info(w, T, pi)
    closed = bandit.closed_form_phi(w, T, pi)
    mirrored = bandit.trial_pragmatic_info(T - w, T, 1 - pi).phi
    via_ensemble = ensemble_pragmatic_info(bandit.trial_ensemble(w, T, pi))
    ok = (
        row.phi > 0
        and abs(row.phi - closed) < EXACT_ATOL
        and abs(row.phi - mirrored) < EXACT_ATOL
        and abs(row.phi - via_ensemble) < EXACT_ATOL
    )
    doc = ensemble_to_dict(bandit.trial_ensemble(w, T, pi))
    return ok, doc, f"w={w} T={T} pi={pi!r} phi={row.phi!r} closed={closed!r}"


def check_stationary(rng, max_dim):
    n = _dims(rng, max_dim)
    P = random_transition(rng, n, 0.3)
    x = stationary_distribution(P).probs
    err = float(np.max(np.abs(x @ P - x)))
    return err < 1e-10, {"transition": P.tolist()}, f"max|xP - x|={err!r}"


CHECKS: list[tuple[str, Callable, bool]] = [
    ("kl_nonnegativity", check_kl_nonnegativity, False),
    ("kl_convexity", check_convexity, False),
    ("wrong_code_identity", check_wrong_code_identity, False),
    ("wrong_code_bounds", check_wrong_code_bounds, False),
    ("wrong_code_huffman_band", check_huffman_band, True),
    ("huffman_optimality", check_huffman_optimality, False),
    ("entropy_bounds", check_entropy_bounds, False),
    ("ensemble_nonnegativity", check_ensemble_nonnegativity, False),
    ("upper_bound", check_upper_bound, False),
    ("definitive_formula", check_definitive_formula, False),
    ("decomposition", check_decomposition, False),
    ("chain_rule", check_chain_rule, False),
    ("independence_soundness", check_independence_soundness, False),
    ("partition", check_partition, False),
    ("bandit_closed_form", check_bandit_closed_form, False),
    ("stationary_distribution", check_stationary, False),
]


def _fixed_cases() -> list[PropertyResult]:
    j = boolean_joint()
    values = {
        "phi_joint": (joint_pragmatic_info(j), 2.0),
        "phi_delta": (marginal_phi_delta(j), 1.0),
        "phi_conditional": (conditional_pragmatic_info(j), 1.0),
        "phi_delta_prime": (marginal_phi_delta_prime(j), 0.75),
        "additivity_gap": (check_pragmatic_independence(j).additivity_gap, 0.25),
    }
    out = []
    for name, (got, want) in values.items():
        r = PropertyResult(f"boolean_example.{name}", detail=f"{got!r} (expected {want!r})")
        if abs(got - want) < EXACT_ATOL:
            r.passed = 1
        else:
            r.failed = 1
            r.counterexample = joint_to_dict(j)
        out.append(r)
    row = bandit.trial_pragmatic_info(0, 0, 0.5)
    want = kl_divergence([2 / 3, 1 / 3], [0.5, 0.5])
    r = PropertyResult("bandit_t0", detail=f"{row.phi!r}")
    if abs(row.phi - want) < EXACT_ATOL and row.d_win == row.d_loss:
        r.passed = 1
    else:
        r.failed = 1
        r.counterexample = ensemble_to_dict(bandit.trial_ensemble(0, 0, 0.5))
    out.append(r)
    return out


def run_suite(trials: int = 100, seed: int = 0, max_dim: int = 4) -> SuiteResult:
    """Run every check ``trials`` times on fresh random instances, plus the fixed worked examples."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    suite = SuiteResult(seed=seed, trials=trials)
    suite.results.extend(_fixed_cases())
    for k, (name, check, informational) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, k])
        r = PropertyResult(name, informational=informational)
        for _ in range(trials):
            ok, doc, detail = check(rng, max_dim)
            if ok:
                r.passed += 1
            else:
                r.failed += 1
                if r.counterexample is None:
                    r.counterexample, r.detail = doc, detail
        suite.results.append(r)
    return suite
