import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from praginfo.dist import (
    Dist,
    Prior,
    convex_mix,
    expected_codelength_gap,
    huffman_code_lengths,
    ideal_code_lengths,
    kl_divergence,
    shannon_code_lengths,
    shannon_entropy,
)
from praginfo.errors import (
    DegenerateDistributionError,
    DimensionMismatchError,
    DistributionError,
    ZeroPriorError,
)

from oracles import brute_force_codes, entropy_mp, kl_mp, optimal_prefix_code_length


def simplex_vectors(min_n=2, max_n=8, allow_zero=True):
    lo = 0.0 if allow_zero else 1e-3
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(st.floats(lo, 1.0), min_size=n, max_size=n)
        .filter(lambda xs: sum(xs) > 1e-3)
        .map(lambda xs: [x / math.fsum(xs) for x in xs])
    )


def prior_and_posterior(max_n=8):
    return st.integers(2, max_n).flatmap(
        lambda n: st.tuples(
            st.lists(st.floats(1e-3, 1.0), min_size=n, max_size=n),
            st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n).filter(lambda xs: sum(xs) > 1e-3),
        ).map(lambda t: (Dist([x / math.fsum(t[1]) for x in t[1]]), Prior([x / math.fsum(t[0]) for x in t[0]])))
    )


class TestDist:
    def test_renormalizes_within_tolerance(self):
        d = Dist([0.5, 0.5 + 5e-10])
        assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_far_from_normalized(self):
        with pytest.raises(DistributionError):
            Dist([0.5, 0.6])

    def test_rejects_negative(self):
        with pytest.raises(DistributionError, match="index 1"):
            Dist([1.1, -0.1])

    def test_exact_inputs_untouched(self):
        assert Dist([2 / 3, 1 / 3]).tolist() == [2 / 3, 1 / 3]

    def test_immutable(self):
        d = Dist([0.25, 0.75])
        with pytest.raises(ValueError):
            d.probs[0] = 1.0

    def test_prior_rejects_zero_and_names_index(self):
        with pytest.raises(ZeroPriorError) as info:
            Prior([0.5, 0.0, 0.5])
        assert info.value.index == 1

    def test_posterior_may_hold_zeros(self):
        assert Dist([1.0, 0.0]).support.tolist() == [0]

    def test_single_outcome(self):
        assert Dist([1.0]).n == 1


class TestKL:
    def test_identity(self):
        assert kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0

    def test_definitive_posterior(self):
        assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == 1.0

    def test_bandit_first_play_value(self):
        # 50-digit oracle: 0.0817041659455104852...
        assert kl_divergence([2 / 3, 1 / 3], [0.5, 0.5]) == pytest.approx(0.08170416594551049, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            kl_divergence([1.0, 0.0], [0.2, 0.3, 0.5])

    def test_zero_prior_rejected(self):
        with pytest.raises(ZeroPriorError):
            kl_divergence([0.5, 0.5], [1.0, 0.0])

    @given(prior_and_posterior())
    def test_matches_extended_precision(self, pq):
        p, q = pq
        assert kl_divergence(p, q) == pytest.approx(kl_mp(p.probs, q.probs), rel=1e-12, abs=1e-14)

    @given(prior_and_posterior())
    def test_nonnegative_zero_iff_equal(self, pq):
        p, q = pq
        d = kl_divergence(p, q)
        assert d >= 0
        assert kl_divergence(q, q) == 0.0
        # Pinsker: D >= (2 / ln 2) * TV^2, so a vanishing D forces p == q
        tv = 0.5 * float(np.sum(np.abs(p.probs - q.probs)))
        assert d >= 2 / math.log(2) * tv**2 - 1e-12

    @given(prior_and_posterior(), prior_and_posterior(), st.floats(0, 1))
    def test_convexity(self, a, b, lam):
        (p, q), (pp, qp) = a, b
        if p.n != pp.n:
            return
        lhs = kl_divergence(convex_mix(p, pp, lam), convex_mix(q, qp, lam))
        assert lhs <= lam * kl_divergence(p, q) + (1 - lam) * kl_divergence(pp, qp) + 1e-10


class TestEntropy:
    @pytest.mark.parametrize(
        "p, expected",
        [([0.5, 0.5], 1.0), ([1.0, 0.0], 0.0), ([0.25, 0.75], 0.8112781244591329)],
    )
    def test_examples(self, p, expected):
        assert shannon_entropy(p) == pytest.approx(expected, abs=1e-15)

    @given(simplex_vectors())
    def test_bounds(self, p):
        h = shannon_entropy(p)
        assert -1e-12 <= h <= math.log2(len(p)) + 1e-12
        assert h == pytest.approx(entropy_mp(p), abs=1e-12)

    def test_equality_cases(self):
        for n in range(1, 9):
            assert shannon_entropy(Dist.uniform(n)) == pytest.approx(math.log2(n), abs=1e-12)
            assert shannon_entropy(Dist.unit(0, n)) == 0.0


class TestCodeLengths:
    def test_ideal(self):
        assert ideal_code_lengths([0.5, 0.5]).lengths == (1.0, 1.0)
        L = ideal_code_lengths([0.25, 0.75])
        assert L[0] == 2.0
        assert L[1] == pytest.approx(0.41503749927884381, abs=1e-15)
        assert ideal_code_lengths([1.0, 0.0]).lengths == (0.0, None)

    def test_huffman_small(self):
        assert huffman_code_lengths([0.5, 0.5]).lengths == (1.0, 1.0)
        assert huffman_code_lengths([0.5, 0.25, 0.25]).lengths == (1.0, 2.0, 2.0)

    def test_huffman_small_against_brute_force_codes(self):
        p = [0.5, 0.25, 0.25]
        best = min(sum(pi * len(w) for pi, w in zip(p, code)) for code in brute_force_codes(3, 3))
        assert huffman_code_lengths(p).expected(p) == pytest.approx(best)
        assert best == 1.5

    def test_huffman_four_symbols(self):
        p = [0.4, 0.3, 0.2, 0.1]
        L = huffman_code_lengths(p)
        assert L.expected(p) == pytest.approx(1.9, abs=1e-12)
        assert L.expected(p) == pytest.approx(optimal_prefix_code_length(p), abs=1e-12)

    def test_huffman_ties_deterministic(self):
        # four equal weights: merge order by lowest index yields a balanced tree
        assert huffman_code_lengths([0.25] * 4).lengths == (2.0,) * 4
        a = huffman_code_lengths([0.2] * 5).lengths
        assert a == huffman_code_lengths([0.2] * 5).lengths
        assert sorted(a) == [2.0, 2.0, 2.0, 3.0, 3.0]

    def test_huffman_zero_entries_unencoded(self):
        L = huffman_code_lengths([0.5, 0.0, 0.5])
        assert L.lengths == (1.0, None, 1.0)

    def test_huffman_degenerate(self):
        with pytest.raises(DegenerateDistributionError):
            huffman_code_lengths([1.0, 0.0])

    @given(simplex_vectors(2, 16, allow_zero=False))
    def test_huffman_kraft_and_entropy_band(self, p):
        L = huffman_code_lengths(p)
        assert L.is_integer
        assert L.kraft_sum() <= 1.0 + 1e-12
        h = shannon_entropy(p)
        assert h - 1e-12 <= L.expected(p) < h + 1

    @given(simplex_vectors(2, 6))
    def test_huffman_optimal_against_all_trees(self, p):
        if sum(x > 0 for x in p) < 2:
            return
        assert huffman_code_lengths(p).expected(p) == pytest.approx(optimal_prefix_code_length(p), abs=1e-12)

    def test_shannon_lengths_satisfy_kraft(self, rng):
        for _ in range(200):
            q = rng.exponential(size=int(rng.integers(2, 17)))
            L = shannon_code_lengths(q / q.sum())
            assert L.kraft_sum() <= 1.0


class TestCodelengthGap:
    def test_ideal_examples(self):
        assert expected_codelength_gap([1.0, 0.0], [0.5, 0.5], "ideal") == 1.0

    @given(prior_and_posterior(16))
    def test_ideal_equals_kl(self, pq):
        p, q = pq
        assert abs(expected_codelength_gap(p, q, "ideal") - kl_divergence(p, q)) < 1e-12

    @given(prior_and_posterior(16))
    def test_shannon_mode_band(self, pq):
        p, q = pq
        d = kl_divergence(p, q)
        # strict in exact arithmetic; a nearly certain p can sit on the edge after rounding
        assert d - 1 - 1e-12 < expected_codelength_gap(p, q, "shannon") < d + 1

    def test_integer_mode_skewed_example(self):
        # Both Huffman codes are (1, 1) so the gap is 0, well outside (D - 1, D + 1), D ~ 2.536.
        p, q = [0.9, 0.1], [0.1, 0.9]
        assert huffman_code_lengths(p).lengths == huffman_code_lengths(q).lengths == (1.0, 1.0)
        assert expected_codelength_gap(p, q, "integer") == 0.0
        assert kl_divergence(p, q) == pytest.approx(2.5359400011538499, abs=1e-14)
        d = kl_divergence(p, q)
        # strict in exact arithmetic; a nearly certain p can sit on the edge after rounding
        assert d - 1 - 1e-12 < expected_codelength_gap(p, q, "shannon") < d + 1

    def test_integer_mode_definitive_posterior(self):
        # certain outcome: zero-length code under p; gap is E_p[L_q]
        assert expected_codelength_gap([1.0, 0.0, 0.0], [0.5, 0.25, 0.25], "integer") == 1.0

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            expected_codelength_gap([0.5, 0.5], [0.5, 0.5], "arithmetic")


class TestConvexMix:
    def test_examples(self):
        p = Dist([0.3, 0.7])
        assert convex_mix(p, p, 0.3).allclose(p, 1e-15)
        assert convex_mix([1, 0], [0, 1], 0.5).tolist() == [0.5, 0.5]
        assert convex_mix([0.8, 0.2], [0.2, 0.8], 0.25).allclose([0.35, 0.65], 1e-15)

    def test_priors_mix_to_prior(self):
        assert isinstance(convex_mix(Prior([0.5, 0.5]), Prior([0.1, 0.9]), 0.4), Prior)

    @pytest.mark.parametrize("lam", [-0.1, 1.5])
    def test_lambda_range(self, lam):
        with pytest.raises(ValueError):
            convex_mix([0.5, 0.5], [0.5, 0.5], lam)
