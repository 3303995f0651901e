import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extising import braid as br
from extising.cyclo import I, ONE, CycloNumber
from extising.fsymbols import trace_class


def pairs(fsets, solved, k):
    return [(f, r) for i, f in enumerate(fsets[k]) for r in solved[(k, i)]]


def test_gate_matrix_canonical():
    h = CycloNumber.inv_sqrt2_pow(1)
    g = br.GateMatrix.from_cyclo([[h, h], [h, -h]])
    assert g.e == 1
    assert g @ g == br.GateMatrix.identity(2)
    assert (g @ g).e == 0
    assert g.to_cyclo() == [[h, h], [h, -h]]
    assert br.GateMatrix.from_json(g.to_json()) == g


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=4, max_size=4), st.integers(0, 15))
def test_diagonal_algebra(ms, t):
    d = br.GateMatrix.diagonal([CycloNumber.zeta(m) for m in ms])
    assert d.is_unitary()
    assert d @ d.dagger() == br.GateMatrix.identity(4)
    assert d.times_zeta(t).phase_to(d) == t
    assert np.allclose(d.to_complex(), np.diag(np.exp(1j * np.pi * np.array(ms) / 8)))


def test_matmul_matches_complex():
    rng = random.Random(3)
    rows = [[CycloNumber([rng.randint(-2, 2) for _ in range(8)], rng.randint(0, 3))
             for _ in range(3)] for _ in range(3)]
    a = br.GateMatrix.from_cyclo(rows)
    assert np.allclose((a @ a).to_complex(), a.to_complex() @ a.to_complex())
    assert np.allclose(a.dagger().to_complex(), a.to_complex().conj().T)


def test_k1_sigma1_is_s(fsets, solved):
    names = set()
    for f, r in pairs(fsets, solved, 1):
        g = br.braid_generator(1, f, r)
        nf = br.match_named_gate(g, 1)
        names.add(nf.name)
        assert g.is_diagonal()
    assert names == {"S", "S†"}


def test_k1_literal_phase(fsets, solved):
    z = CycloNumber.zeta
    target = br.GateMatrix.diagonal([ONE, I]).times_zeta(15)
    assert any(br.braid_generator(1, f, r) == target for f, r in pairs(fsets, solved, 1))


def test_k1_monodromy(fsets, solved):
    for f, r in pairs(fsets, solved, 1):
        g = br.braid_word([1, 1], f, r)
        assert g.phase_to(br.GateMatrix.diagonal([ONE, -ONE])) is not None


def test_inverse_and_relations(fsets, solved):
    for k in (1, 2):
        for f, r in pairs(fsets, solved, k)[::3]:
            ident = br.GateMatrix.identity(1 << k)
            assert br.braid_word([1, -1], f, r) == ident
            assert br.braid_word([2, -2], f, r) == ident
            assert br.braid_word([1, 2, 1], f, r) == br.braid_word([2, 1, 2], f, r)
            assert br.braid_word([2, 3, 2], f, r) == br.braid_word([3, 2, 3], f, r)
            assert br.braid_word([1, 3], f, r) == br.braid_word([3, 1], f, r)


def test_trace4_sigma1_is_cz(fsets, solved):
    cz = br.GateMatrix.diagonal([ONE, ONE, ONE, -ONE])
    for i, f in enumerate(fsets[2]):
        if trace_class(f.phi) != 4:
            continue
        for r in solved[(2, i)]:
            nf = br.match_named_gate(br.braid_generator(1, f, r), 2)
            assert nf.name == "CZ"
        assert any(br.braid_generator(1, f, r).phase_to(cz) is not None for r in solved[(2, i)])


def test_f_matrix_names(fsets):
    assert br.match_named_gate(br.f_matrix(fsets[1][0]), 1).name == "H"
    for f in fsets[2]:
        name = br.match_named_gate(br.f_matrix(f), 2).name
        assert name == ("SWAP·(H⊗H)" if trace_class(f.phi) == 4 else "H^⊗2")


def test_s_tensor_s():
    g = br.GateMatrix.diagonal([ONE, I, I, -ONE])
    nf = br.match_named_gate(g, 2)
    assert nf.name == "S^⊗2" and nf.translation == 0 and nf.phase == 0
    assert nf.is_primary


def test_named_form_reconstructs(fsets, solved):
    # g == zeta^phase * P^-1 T P
    targets = dict(br.named_gates(2))
    for f, r in pairs(fsets, solved, 2):
        g = br.braid_generator(1, f, r)
        nf = br.match_named_gate(g, 2)
        A = np.array([[(c >> i) & 1 for c in nf.relabeling] for i in range(2)])
        perm = [int(sum(int(b) << i for i, b in enumerate(A @ [(x >> j) & 1 for j in range(2)] % 2)))
                ^ nf.translation for x in range(4)]
        assert g.permuted(perm) == targets[nf.name].times_zeta(nf.phase)


def test_clifford_examples(fsets):
    assert br.is_clifford(br.f_matrix(fsets[1][0]), 1)
    assert br.is_clifford(br.GateMatrix.diagonal([ONE, I]), 1)
    assert not br.is_clifford(br.GateMatrix.diagonal([ONE, CycloNumber.zeta(2)]), 1)
    assert br.match_named_gate(br.GateMatrix.diagonal([ONE, CycloNumber.zeta(2)]), 1) is None


def test_non_unitary_rejected():
    g = br.GateMatrix.diagonal([ONE, ONE + ONE])
    with pytest.raises(ValueError):
        br.is_clifford(g, 1)
    with pytest.raises(ValueError):
        br.is_clifford(br.GateMatrix.identity(2), 2)


def test_pauli_conjugation_tableau():
    s = br.GateMatrix.diagonal([ONE, I])
    tab = br.clifford_tableau(s, 1)
    assert tab[0] == br.PauliElement(1, 1, 1)  # S X S^dag = Y = i X Z
    assert tab[1] == br.PauliElement(0, 1, 0)
    assert br.PauliElement(1, 1).label(1) == "Y"


def test_random_words_clifford(fsets, solved):
    rng = random.Random(11)
    ps = pairs(fsets, solved, 1) + pairs(fsets, solved, 2)
    for _ in range(40):
        f, r = rng.choice(ps)
        word = [rng.choice((1, 2, 3, -1, -2, -3)) for _ in range(rng.randint(1, 8))]
        assert br.is_clifford(br.braid_word(word, f, r), f.k)


def test_bad_generator_index(fsets, solved):
    f, r = pairs(fsets, solved, 1)[0]
    with pytest.raises(ValueError):
        br.braid_generator(4, f, r)
    with pytest.raises(ValueError):
        br.braid_word([], f, r)
    with pytest.raises(ValueError):
        br.braid_word([0], f, r)


def test_mismatched_models(fsets, solved):
    f2_, _ = pairs(fsets, solved, 2)[0]
    _, r1 = pairs(fsets, solved, 1)[0]
    with pytest.raises(ValueError):
        br.braid_generator(1, f2_, r1)


def test_permutation_fallback_flagged():
    # -1 on |00> only: CZ after moving 0, which no linear relabelling does
    g = br.GateMatrix.diagonal([-ONE, ONE, ONE, ONE])
    assert br.match_named_gate(g, 2, allow_translation=False) is None
    nf = br.match_named_gate(g, 2, allow_translation=False, allow_permutations=True)
    assert nf.name == "CZ" and nf.out_of_contract
    nf = br.match_named_gate(g, 2)
    assert nf.name == "CZ" and nf.translation == 3 and not nf.out_of_contract
