import numpy as np
import pytest
from hypothesis import given, strategies as st

from praginfo.verify import CHECKS, optimal_prefix_length, run_suite

from oracles import optimal_prefix_code_length


@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_kraft_table_agrees_with_tree_enumeration(seed, n):
    p = np.random.default_rng(seed).exponential(size=n)
    p /= p.sum()
    assert optimal_prefix_length(p) == pytest.approx(optimal_prefix_code_length(p), abs=1e-12)


def test_suite_passes_and_is_deterministic():
    a = run_suite(trials=30, seed=3)
    b = run_suite(trials=30, seed=3)
    assert a.ok and a.first_failure() is None
    assert [(r.name, r.passed) for r in a.results] == [(r.name, r.passed) for r in b.results]


def test_every_check_runs():
    s = run_suite(trials=2, seed=0)
    names = {r.name for r in s.results}
    assert {name for name, _, _ in CHECKS} <= names
    assert "boolean_example.phi_joint" in names and "bandit_t0" in names


def test_huffman_band_row_is_informational():
    s = run_suite(trials=200, seed=7)
    row = next(r for r in s.results if r.name == "wrong_code_huffman_band")
    assert row.informational and row.failed > 0
    assert s.ok


def test_rejects_zero_trials():
    with pytest.raises(ValueError):
        run_suite(trials=0)
