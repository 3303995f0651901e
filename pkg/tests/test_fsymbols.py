import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extising.cyclo import ONE, CycloNumber
from extising.fsymbols import (Bicharacter, FSymbols, IntegrityError, bicharacter_eval,
                               build_f_symbols, enumerate_bicharacters, f_symbols_from_phi,
                               pentagon_instances, phi_from_bicharacter, phi_violations,
                               sylvester, trace_class, verify_pentagon)
from extising.model import build_extended_ising

DISPLAYED_K2 = [
    [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]],
    [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]],
    [[1, 1, 1, 1], [1, -1, -1, 1], [1, -1, 1, -1], [1, 1, -1, -1]],
    [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]],
]


def test_bicharacter_eval_examples():
    assert bicharacter_eval(np.eye(1, dtype=np.uint8), 1, 1) == -1
    assert bicharacter_eval(np.eye(2, dtype=np.uint8), 3, 3) == 1
    for M in enumerate_bicharacters(2):
        assert all(bicharacter_eval(M.M, 0, j) == 1 for j in range(4))


def test_bicharacter_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        bicharacter_eval(np.eye(2, dtype=np.uint8), 4, 1)


def _count_by_determinant(k):
    # symmetric 0/1 matrices with odd integer determinant
    slots = [(i, j) for i in range(k) for j in range(i, k)]
    n = 0
    for vals in itertools.product((0, 1), repeat=len(slots)):
        m = np.zeros((k, k))
        for (i, j), v in zip(slots, vals):
            m[i, j] = m[j, i] = v
        n += int(round(np.linalg.det(m))) % 2
    return n


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_bicharacter_counts(k):
    bs = enumerate_bicharacters(k)
    assert len(bs) == _count_by_determinant(k)
    assert len({b.M.tobytes() for b in bs}) == len(bs)
    assert np.array_equal(bs[0].M, np.eye(k, dtype=np.uint8))


def test_known_counts():
    assert [len(enumerate_bicharacters(k)) for k in (1, 2, 3)] == [1, 4, 28]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_multiplicativity_exhaustive(k):
    n = 1 << k
    ij = np.arange(n)
    for b in enumerate_bicharacters(k):
        phi = phi_from_bicharacter(b).astype(int)
        x = phi[ij[:, None] ^ ij[None, :]]  # phi[i^j, l]
        assert np.array_equal(x, phi[:, None, :] * phi[None, :, :])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_phi_is_symmetric_normalised_hadamard(k):
    n = 1 << k
    for b in enumerate_bicharacters(k):
        phi = phi_from_bicharacter(b)
        assert phi_violations(phi) == []
        p = phi.astype(int)
        assert np.array_equal(p @ p.T, n * np.eye(n, dtype=int))
        assert trace_class(phi) in (0, n)


def test_k2_matrices_match_display():
    got = sorted(phi_from_bicharacter(b).astype(int).tolist() for b in enumerate_bicharacters(2))
    assert got == sorted(DISPLAYED_K2)
    traces = sorted(int(np.trace(np.array(m))) for m in DISPLAYED_K2)
    assert traces == [0, 0, 0, 4]


def test_sylvester_is_identity_bicharacter():
    for k in (1, 2, 3):
        assert np.array_equal(sylvester(k), phi_from_bicharacter(Bicharacter(np.eye(k, dtype=np.uint8))))
    assert sylvester(2).tolist() == DISPLAYED_K2[1]


def test_trace_class_rejects_bad_phi():
    bad = np.ones((4, 4), dtype=int)
    bad[3, 3] = -1
    with pytest.raises(IntegrityError):
        trace_class(bad)
    assert "hadamard" in phi_violations(np.array([[1, 1], [1, 1]]))


def test_invalid_bicharacter_refused():
    m = build_extended_ising(2)
    with pytest.raises(ValueError):
        build_f_symbols(m, Bicharacter(np.array([[1, 1], [1, 1]], dtype=np.uint8)), 1)
    with pytest.raises(ValueError):
        build_f_symbols(m, enumerate_bicharacters(1)[0], 1)
    with pytest.raises(ValueError):
        build_f_symbols(m, enumerate_bicharacters(2)[0], 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pentagon_instance_count(k):
    # independent count: admissibility of both fusion trees via einsum
    m = build_extended_ising(k)
    N = m.fusion.astype(np.int64)
    count = np.einsum("xya,azb,bwv,zwc,ycd,xdv->", N, N, N, N, N, N)
    assert len(pentagon_instances(m)) == count
    assert count == {1: 136, 2: 1216, 3: 11776}[k]


def test_f_matrix_unitary(fsets):
    for k in (1, 2, 3):
        for f in fsets[k]:
            F = f.matrix()
            n = len(F)
            for i in range(n):
                for j in range(n):
                    s = sum((F[i][t] * F[j][t].conj() for t in range(n)), CycloNumber())
                    assert s == (ONE if i == j else CycloNumber())
                    assert F[i][j].abs2() == CycloNumber.inv_sqrt2_pow(2 * k)


@pytest.mark.parametrize("k", [1, 2])
def test_pentagon_passes_all(fsets, k):
    for f in fsets[k]:
        rep = verify_pentagon(f)
        assert rep.passed
        assert rep.instances_checked + rep.instances_skipped == rep.instances_total


def test_pentagon_sylvester_k3(fsets):
    assert verify_pentagon(fsets[3][0]).passed


def test_python_route_agrees_with_kernel(fsets):
    for f in fsets[1] + fsets[2][:2]:
        a, b = verify_pentagon(f, backend="python"), verify_pentagon(f)
        assert a.passed and b.passed and a.instances_checked == b.instances_checked


@pytest.mark.parametrize("entry", list(itertools.product(range(2), repeat=2)))
def test_k1_mutation_detected(entry):
    m = build_extended_ising(1)
    phi = sylvester(1).copy()
    phi[entry] *= -1
    f = f_symbols_from_phi(m, phi, 1)
    kern, py = verify_pentagon(f), verify_pentagon(f, backend="python")
    assert kern.violation_count >= 1
    assert kern.violation_count == py.violation_count
    v = kern.violations[0]
    assert set(v) >= {"labels", "lhs", "rhs"}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_k2_single_flip_detected(i, j):
    m = build_extended_ising(2)
    phi = sylvester(2).copy()
    phi[i, j] *= -1
    assert not verify_pentagon(f_symbols_from_phi(m, phi, 1)).passed


def test_parallel_report_identical(fsets):
    f = fsets[2][3]
    assert verify_pentagon(f, jobs=1).to_json() == verify_pentagon(f, jobs=3).to_json()


def test_json_round_trip(tmp_path, fsets):
    for f in (fsets[1][1], fsets[2][6]):
        p = tmp_path / "f.json"
        f.save(p)
        g = FSymbols.load(p, f.model)
        assert g.same_values(f)
        assert np.array_equal(g.phi, f.phi)
        assert g.bicharacter == f.bicharacter


def test_ising_values(fsets):
    f = fsets[1][0]
    B = 2
    h = CycloNumber.inv_sqrt2_pow(1)
    assert f.matrix() == [[h, h], [h, -h]]
    assert f(1, B, 1, B, B, B) == -ONE
    assert f(B, 1, B, 1, B, B) == -ONE
    assert f(B, 1, B, 0, B, B) == ONE
    assert f(B, 1, B, 0, 0, 0) == CycloNumber()
