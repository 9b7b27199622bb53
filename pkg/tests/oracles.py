"""Reference implementations that share no code path with the library."""

from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpf, log

mp.dps = 50


def _mp(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(float(x))


def kl_mp(p, q):
    """D(p || q) in bits at 50 significant digits; accepts floats or Fractions."""
    return float(sum(_mp(a) * log(_mp(a) / _mp(b), 2) for a, b in zip(p, q) if a != 0))


def entropy_mp(p):
    return float(-sum(_mp(a) * log(_mp(a), 2) for a in p if a != 0))


@lru_cache(maxsize=None)
def _tree_depths(n):
    """Sorted leaf-depth tuples of every full binary tree with ``n`` leaves."""
    if n == 1:
        return frozenset({(0,)})
    out = set()
    for k in range(1, n):
        for left in _tree_depths(k):
            for right in _tree_depths(n - k):
                out.add(tuple(sorted(d + 1 for d in left + right)))
    return frozenset(out)


def optimal_prefix_code_length(p):
    """Best expected length over every binary prefix code (all tree shapes, best assignment)."""
    probs = sorted((x for x in p if x > 0), reverse=True)
    if len(probs) < 2:
        return 0.0
    return min(
        sum(x * d for x, d in zip(probs, depths)) for depths in _tree_depths(len(probs))
    )


def prefix_free(words):
    return not any(a != b and b.startswith(a) for a in words for b in words)


def brute_force_codes(n, max_len):
    """All assignments of distinct prefix-free binary words (length <= max_len) to n symbols."""
    from itertools import permutations, product

    words = ["".join(bits) for L in range(1, max_len + 1) for bits in product("01", repeat=L)]
    for combo in permutations(words, n):
        if prefix_free(combo):
            yield combo


def stationary_two_state(a, b):
    """Stationary law of [[1-a, a], [b, 1-b]] from detailed balance: pi0 * a = pi1 * b."""
    a, b = Fraction(a), Fraction(b)
    return (b / (a + b), a / (a + b))
