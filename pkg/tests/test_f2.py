import itertools

import numpy as np
from hypothesis import given, strategies as st

from extising import f2


def test_xor_group_exhaustive():
    for n in range(1, 9):
        els = range(1 << n)
        assert all(a ^ a == 0 for a in els)
        for a in range(1 << min(n, 5)):
            for b in range(1 << min(n, 5)):
                assert a ^ b == b ^ a
                for c in range(0, 1 << min(n, 5), 3):
                    assert (a ^ b) ^ c == a ^ (b ^ c)


def test_general_linear_order():
    # |GL(k,2)| = prod (2^k - 2^i)
    for k in (1, 2, 3):
        want = np.prod([2 ** k - 2 ** i for i in range(k)])
        gl = f2.general_linear(k)
        assert len(gl) == want
        assert len({m.tobytes() for m in gl}) == want
        assert all(f2.is_invertible(m) for m in gl)


def test_symmetric_matrices_count():
    for k in (1, 2, 3):
        assert sum(1 for _ in f2.symmetric_matrices(k)) == 2 ** (k * (k + 1) // 2)


@given(st.integers(1, 5), st.data())
def test_rank_and_inverse(n, data):
    m = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n)),
                 dtype=np.uint8).reshape(n, n)
    # brute-force rank: size of the column span
    span = {0}
    for j in range(n):
        col = f2.from_bits(m[:, j])
        span |= {s ^ col for s in span}
    assert 2 ** f2.rank(m) == len(span)
    if f2.is_invertible(m):
        assert np.array_equal(f2.matmul(m, f2.inverse(m)), np.eye(n, dtype=np.uint8))


@given(st.integers(0, 255), st.integers(0, 255))
def test_apply_is_linear(x, y):
    m = f2.general_linear(3)[17]
    x, y = x & 7, y & 7
    assert f2.apply(m, x ^ y) == f2.apply(m, x) ^ f2.apply(m, y)


def test_bits_round_trip():
    for x in range(64):
        assert f2.from_bits(f2.bits(x, 6)) == x
    assert f2.popcount(0b1011) == 3
    assert f2.parity(0b1011) == 1
    assert f2.dot(0b110, 0b011) == 1
    assert list(itertools.islice(f2.symmetric_matrices(1), 2))[1].tolist() == [[1]]
