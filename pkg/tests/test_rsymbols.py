import numpy as np
import pytest

from extising import rsymbols as rs
from extising.cyclo import I, ONE, CycloNumber
from extising.fsymbols import all_f_symbols, enumerate_bicharacters, f_symbols_from_phi, \
    phi_from_bicharacter, sylvester, trace_class
from extising.model import build_extended_ising


def phase_class(diag):
    idx = [x.root_index() for x in diag]
    return min(tuple(sorted((i + m) % 16 for i in idx)) for m in range(16))


def test_solution_counts(solved):
    for (k, _), sols in solved.items():
        assert len(sols) == 2 ** (k + 1)


def test_k1_contains_diag_1_i(solved):
    sols = solved[(1, 0)] + solved[(1, 1)]
    assert phase_class([ONE, I]) in {phase_class(r.beta_beta) for r in sols}
    # e^{-i pi/8} diag(1, i)
    z = CycloNumber.zeta
    assert any(list(r.beta_beta) == [z(15), z(3)] for r in sols)


def test_k2_two_phase_classes(solved):
    got = {phase_class(r.beta_beta) for (k, _), sols in solved.items() if k == 2 for r in sols}
    want = {phase_class([ONE, ONE, ONE, -ONE]), phase_class([ONE, I, I, -ONE])}
    assert got == want


def test_k2_trace_determines_class(solved, fsets):
    for i, f in enumerate(fsets[2]):
        want = [ONE, ONE, ONE, -ONE] if trace_class(f.phi) == 4 else [ONE, I, I, -ONE]
        assert {phase_class(r.beta_beta) for r in solved[(2, i)]} == {phase_class(want)}


def test_every_solution_rechecked(solved):
    for sols in solved.values():
        for r in sols[:3]:
            assert rs.verify_hexagon(r).passed
            assert rs.verify_hexagon(r, backend="python").passed


def test_census_table(solved, fsets):
    for (k, i), sols in solved.items():
        for r in sols:
            assert rs.census_matches_table(r)
            assert rs.trace_constraint_holds(r)


@pytest.mark.slow
def test_census_table_k3_sample(fsets):
    for f in (fsets[3][0], fsets[3][13], fsets[3][55]):
        sols = rs.solve_r(f)
        assert len(sols) == 16
        assert all(rs.census(r).as_tuple() == (3, 1, 3, 1) for r in sols)


def test_table_rows():
    assert rs.table_row(2, 4) in [(3, 1, 0, 0)]
    assert rs.table_row(2, 0) == (2, 0, 1, 1)
    assert rs.table_row(3, 0) == (3, 1, 3, 1)
    assert rs.table_row(1, 0) == (1, 0, 1, 0)
    assert rs.table_row(4, 16) == (10, 6, 0, 0)
    assert rs.table_row(4, 0) == (6, 2, 4, 4)
    with pytest.raises(AssertionError):
        rs.table_row(3, 8)


def test_statistics_examples():
    phi1 = sylvester(1)
    assert rs.statistics(0, phi1) is rs.Statistics.BOSON
    assert rs.statistics(1, phi1) is rs.Statistics.FERMION
    swap = [b for b in enumerate_bicharacters(2) if not np.diag(b.M).any()][0]
    phi = phi_from_bicharacter(swap)
    assert all(rs.statistics(i, phi) is rs.Statistics.BOSON for i in range(4))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_boson_count_formula(k):
    for b in enumerate_bicharacters(k):
        phi = phi_from_bicharacter(b)
        bosons = sum(rs.statistics(i, phi) is rs.Statistics.BOSON for i in range(1 << k))
        assert bosons == (2 ** k + trace_class(phi)) // 2


def test_spin_statistics(solved, fsets):
    # (R_{a_i b}^b)^2 = phi_ii
    for (k, i), sols in solved.items():
        phi = fsets[k][i].phi
        for r in sols:
            for j in range(1 << k):
                assert r.alpha_beta[j] * r.alpha_beta[j] == ONE * int(phi[j, j])


def test_alpha_alpha_is_phi(solved, fsets):
    for (k, i), sols in solved.items():
        phi = fsets[k][i].phi
        r = sols[0]
        for (a, b), v in r.alpha_alpha.items():
            assert v == ONE * int(phi[a, b])


def test_mutated_r_fails_hexagon(solved):
    r = solved[(2, 0)][0]
    bb = list(r.beta_beta)
    bb[1] = -bb[1]
    bad = rs.RSymbols(r.f, tuple(bb), r.alpha_beta, r.beta_alpha, r.alpha_alpha)
    kern, py = rs.verify_hexagon(bad), rs.verify_hexagon(bad, backend="python")
    assert not kern.passed
    assert kern.violation_count == py.violation_count


def test_alpha_beta_sign_only_pinned_by_mirror(solved):
    r = solved[(1, 0)][0]
    ab = tuple(-x if j else x for j, x in enumerate(r.alpha_beta))
    flipped = rs.RSymbols(r.f, r.beta_beta, ab, r.beta_alpha, r.alpha_alpha)
    assert rs.verify_hexagon(flipped).passed
    assert not rs.verify_hexagon(flipped, mirror=True).passed


def test_mirror_survivors(solved):
    for sols in solved.values():
        assert all(rs.verify_hexagon(r, mirror=True).passed for r in sols)


def test_refuses_pentagon_failure():
    m = build_extended_ising(1)
    phi = sylvester(1).copy()
    phi[1, 1] = 1
    with pytest.raises(ValueError):
        rs.solve_r(f_symbols_from_phi(m, phi, 1))


def test_base_phases():
    assert [z.root_index() for z in rs.base_phase_candidates(2)] == list(range(0, 16, 2))
    assert [z.root_index() for z in rs.base_phase_candidates(3)] == list(range(1, 16, 2))


def test_json_round_trip(tmp_path, solved, fsets):
    r = solved[(2, 6)][3]
    p = tmp_path / "r.json"
    r.save(p)
    assert rs.RSymbols.load(p, fsets[2][6]).same_values(r)
    with pytest.raises(ValueError):
        rs.RSymbols.from_json(r.to_json(), fsets[1][0])


@pytest.mark.parametrize("k", range(1, 21))
def test_sum_of_squares(k):
    assert rs.sum_of_squares_check(k) == rs.sum_of_squares_characterization(k)


def test_sum_of_squares_examples():
    assert rs.sum_of_squares_check(2) == sorted([(2, 0), (-2, 0), (0, 2), (0, -2)])
    assert rs.sum_of_squares_check(3) == sorted([(2, 2), (2, -2), (-2, 2), (-2, -2)])
    assert rs.sum_of_squares_check(1) == sorted([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    with pytest.raises(ValueError):
        rs.sum_of_squares_check(21)


def test_solutions_deterministic(fsets):
    a = [r.to_json() for r in rs.solve_r(fsets[2][2])]
    b = [r.to_json() for r in rs.solve_r(all_f_symbols(build_extended_ising(2))[2])]
    assert a == b
