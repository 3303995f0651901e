import numpy as np
import pytest

from extising.cyclo import CycloNumber
from extising.model import (AnyonModel, build_extended_ising, fusion_space_dim, ising_model,
                            toric_code_model, validate_model)


@pytest.mark.parametrize("k,count", [(0, 2), (1, 3), (2, 5), (3, 9), (4, 17)])
def test_hierarchy_valid(k, count):
    m = build_extended_ising(k)
    assert m.n == count
    rep = validate_model(m)
    assert rep.ok, rep.violations
    assert m.qdim[m.beta] == CycloNumber.sqrt2() ** k


def test_k0_has_note():
    assert build_extended_ising(0).notes


def test_negative_k():
    with pytest.raises(ValueError):
        build_extended_ising(-1)


def test_beta_fusion():
    m = build_extended_ising(2)
    b = m.beta
    assert m.outcomes(b, b) == [0, 1, 2, 3]
    assert m.outcomes(3, b) == [b]
    assert m.outcomes(1, 2) == [3]


def test_builtins():
    assert validate_model(toric_code_model()).ok
    ising = ising_model()
    assert validate_model(ising).ok
    assert ising.charges == ("1", "psi", "sigma")
    assert ising.outcomes(2, 2) == [0, 1]


def _mutated(m, a, b, c, value):
    fus = m.fusion.copy()
    fus[a, b, c] = value
    return AnyonModel(m.charges, fus, m.qdim, m.k, m.name)


def test_broken_models_are_reported():
    m = build_extended_ising(1)
    rep = validate_model(_mutated(m, 1, 1, 0, 0))  # psi x psi no longer contains 1
    axioms = {v["axiom"] for v in rep.violations}
    assert "inverse" in axioms and "closure" in axioms
    rep = validate_model(_mutated(m, 1, 2, 1, 1))  # psi x sigma -> psi + sigma
    assert not rep.ok
    rep = validate_model(_mutated(m, 2, 2, 2, 2))
    assert "multiplicity_free" in {v["axiom"] for v in rep.violations}


def test_wrong_qdim_detected():
    m = build_extended_ising(2)
    bad = AnyonModel(m.charges, m.fusion, m.qdim[:-1] + (CycloNumber.from_int(3),), m.k)
    assert "quantum_dimension" in {v["axiom"] for v in validate_model(bad).violations}


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_fusion_space_dim_closed_form(k, n):
    m = build_extended_ising(k)
    if n % 2 == 0:
        assert fusion_space_dim(m, n, 0) == 2 ** (k * (n // 2 - 1))
        assert fusion_space_dim(m, n, "b") == 0
    else:
        assert fusion_space_dim(m, n, "b") == 2 ** (k * (n - 1) // 2)


def test_json_round_trip(tmp_path):
    for k in range(4):
        m = build_extended_ising(k)
        p = tmp_path / f"m{k}.json"
        m.save(p)
        assert AnyonModel.load(p) == m
    d = build_extended_ising(1).to_json()
    d["fusion"] = [[d["charges"][a], d["charges"][b], d["charges"][c]] for a, b, c in d["fusion"]]
    assert AnyonModel.from_json(d) == build_extended_ising(1)


def test_fusion_is_read_only():
    m = build_extended_ising(1)
    with pytest.raises(ValueError):
        m.fusion[0, 0, 0] = 0
    assert isinstance(m.fusion, np.ndarray)
