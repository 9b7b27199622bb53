from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from praginfo.bandit import (
    SWEEP_HEADER,
    BanditState,
    closed_form_phi,
    is_strictly_decreasing,
    laplace_estimate,
    play_history,
    realized_sweep,
    sweep,
    sweep_csv,
    trial_ensemble,
    trial_pragmatic_info,
    windowed_laplace,
)
from praginfo.pragmatic import ensemble_pragmatic_info

from oracles import kl_mp


def bandit_oracle(w, T, pi):
    """Direct 50-digit evaluation from exact rational posteriors."""
    w, T = Fraction(w), Fraction(T)
    q = [(w + 1) / (T + 2), (T - w + 1) / (T + 2)]
    win = [(w + 2) / (T + 3), (T - w + 1) / (T + 3)]
    loss = [(w + 1) / (T + 3), (T - w + 2) / (T + 3)]
    d_win, d_loss = kl_mp(win, q), kl_mp(loss, q)
    return d_win, d_loss, pi * d_win + (1 - pi) * d_loss


counts = st.integers(0, 500).flatmap(lambda T: st.tuples(st.integers(0, T), st.just(T)))
payouts = st.floats(0.001, 0.999)


class TestLaplace:
    def test_examples(self):
        assert laplace_estimate(0, 0) == 0.5
        assert laplace_estimate(3, 4) == pytest.approx(2 / 3)
        assert laplace_estimate(2.5, 5) == 0.5

    @pytest.mark.parametrize("w, T", [(3, 2), (-1, 2), (0, -1)])
    def test_rejects_bad_counts(self, w, T):
        with pytest.raises(ValueError):
            laplace_estimate(w, T)

    def test_windowed(self):
        h = [1, 1, 1, 0, 0]
        assert windowed_laplace(h, 2) == 0.25
        assert windowed_laplace(h, 100) == laplace_estimate(3, 5)
        assert windowed_laplace([], 3) == 0.5
        with pytest.raises(ValueError):
            windowed_laplace(h, 0)

    def test_state(self):
        s = BanditState(0, 0, 0.3).after(1).after(0)
        assert (s.wins, s.trials) == (1, 2)
        with pytest.raises(ValueError):
            BanditState(0, 0, 1.0)


class TestTrial:
    def test_first_play(self):
        r = trial_pragmatic_info(0, 0, 0.3)
        assert r.d_win == r.d_loss
        assert r.d_win == pytest.approx(0.081704165945510485, abs=1e-15)
        assert r.phi == r.d_win

    def test_frozen_two_losses(self):
        r = trial_pragmatic_info(0, 2, 0.5)
        assert r.d_win == pytest.approx(0.078071905112637652, abs=1e-15)
        assert r.d_loss == pytest.approx(0.010101904535712707, abs=1e-15)

    def test_ensemble_matches_trial(self):
        e = trial_ensemble(3, 7, 0.4)
        assert ensemble_pragmatic_info(e) == pytest.approx(trial_pragmatic_info(3, 7, 0.4).phi, abs=1e-15)
        assert e.labels == ("PAYOUT", "NOPAYOUT")

    @given(counts, payouts)
    def test_against_oracle_and_closed_form(self, wT, pi):
        w, T = wT
        r = trial_pragmatic_info(w, T, pi)
        d_win, d_loss, phi = bandit_oracle(w, T, pi)
        assert r.d_win == pytest.approx(d_win, rel=1e-9, abs=1e-15)
        assert r.d_loss == pytest.approx(d_loss, rel=1e-9, abs=1e-15)
        assert r.phi == pytest.approx(phi, rel=1e-9, abs=1e-15)
        assert abs(closed_form_phi(w, T, pi) - r.phi) < 1e-12

    @given(counts, payouts)
    def test_mirror_symmetry(self, wT, pi):
        w, T = wT
        a = trial_pragmatic_info(w, T, pi)
        b = trial_pragmatic_info(T - w, T, 1 - pi)
        assert a.d_win == pytest.approx(b.d_loss, abs=1e-15)
        assert a.phi == pytest.approx(b.phi, abs=1e-14)

    def test_less_surprise_when_estimate_matches(self):
        # a lopsided but well-predicted bandit teaches less than an even one
        assert trial_pragmatic_info(5, 10, 0.5).phi > trial_pragmatic_info(9.9, 10, 0.99).phi


class TestSweep:
    @pytest.mark.parametrize("pi", [0.1, 0.25, 0.5])
    @pytest.mark.parametrize("mode", ["continuous", "integer"])
    def test_decreasing(self, pi, mode):
        rows = sweep(pi, 1000, mode)
        assert len(rows) == 1001
        assert rows[0].phi == rows[0].d_win
        assert is_strictly_decreasing(rows[1:])
        assert rows[0].phi >= rows[1].phi

    def test_t0_ties_exact(self):
        first = {sweep(pi, 0)[0].phi for pi in (0.1, 0.25, 0.5)}
        assert len(first) == 1

    def test_vanishes(self):
        assert sweep(0.5, 2000)[-1].phi < 1e-6

    def test_integer_mode_uses_bankers_rounding(self):
        rows = sweep(0.25, 10, "integer")
        assert [r.w for r in rows] == [round(0.25 * T) for T in range(11)]
        assert rows[2].w == 0  # 0.5 rounds to even

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sweep(0.0, 10)
        with pytest.raises(ValueError):
            sweep(0.5, 10, "nearest")

    def test_csv(self):
        text = sweep_csv(sweep(0.5, 2))
        lines = text.split("\n")
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert lines[1].startswith("0,0,0.5,0.0817041659455,")
        assert text.endswith("\n") and "\r" not in text
        assert len(lines) == 5


class TestRealized:
    def test_matches_counts(self):
        rng = np.random.default_rng(3)
        h = play_history(0.3, 200, rng)
        rows = realized_sweep(h, 0.3)
        w = int(h[:150].sum())
        assert rows[150].T == 150 and rows[150].w == w
        assert rows[150].phi == trial_pragmatic_info(w, 150, 0.3).phi

    def test_history_law(self):
        h = play_history(0.25, 20000, np.random.default_rng(11))
        assert abs(h.mean() - 0.25) < 0.015
