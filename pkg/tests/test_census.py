import numpy as np
import pytest

from extising.census import all_permutations, permuted_trace_delta, symmetric_column_permutation_census
from extising.fsymbols import sylvester


def test_order2():
    rep = symmetric_column_permutation_census(2)
    assert rep.passed and rep.delta_distribution == {0: 1}


def test_order4_has_both_deltas():
    rep = symmetric_column_permutation_census(4)
    assert rep.passed
    assert set(rep.delta_distribution) <= {0, 4, -4}
    assert rep.delta_distribution.get(4, 0) > 0 and rep.delta_distribution.get(-4, 0) > 0


@pytest.mark.slow
def test_order8_all_zero():
    rep = symmetric_column_permutation_census(8)
    assert rep.passed
    assert set(rep.delta_distribution) == {0}
    assert rep.permutations_per_matrix == 40320


def test_swap_middle_columns():
    sym, delta = permuted_trace_delta(sylvester(2), [0, 2, 1, 3])
    assert sym and delta == 4


def test_identity_perm():
    assert permuted_trace_delta(sylvester(3), list(range(8))) == (True, 0)


def test_brute_force_order4():
    # recount directly against the report
    h = sylvester(2).astype(int)
    counts = {}
    for p in all_permutations(4):
        hp = h[:, p]
        if np.array_equal(hp, hp.T):
            d = int(np.trace(hp) - np.trace(h))
            counts[d] = counts.get(d, 0) + 1
    rep = symmetric_column_permutation_census(4)
    ref = rep.per_matrix[0]["delta_distribution"] if rep.per_matrix else None
    assert sum(counts.values()) == 4
    if ref is not None:
        assert {int(k): v for k, v in ref.items()} == counts


def test_bad_order():
    with pytest.raises(ValueError):
        symmetric_column_permutation_census(16)
