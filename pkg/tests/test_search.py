from collections import Counter

import pytest

from flockgq.errors import DomainError
from flockgq.knarr import LINE_A, LINE_B, incidence_matrix, knarr_autos
from flockgq import linalg as la
from flockgq.search import (
    TacticalSystem,
    essential_orbits,
    exclude,
    export_lp,
    group_action,
    max_intersection,
    orbits,
    solutions_to_jsonl,
    solve_all,
    tactical,
    trivial_orbits,
)
from flockgq.typeone import t_group, typeone_build, verify_hemisystem

TABLE_ELL_Q3 = [(0, 1, 0, 1, 0, 0), (0, 0, 1, 1, 1, 0)]


def _t_action(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    return ell, group_action(gq3, t_group(gq3, ell))


def test_trivial_orbits_shape(gq3):
    po, lo = trivial_orbits(gq3)
    assert len(po.orbits) == 280 and len(lo.orbits) == 112


def test_t_orbits(gq3):
    _, act = _t_action(gq3)
    po, lo = orbits(act)
    sizes = Counter(len(o) for o in lo.orbits)
    assert sizes == {9: 12, 1: 4}
    b_ids = {j for j, t in enumerate(gq3.line_types) if t == LINE_B}
    for orb in lo.orbits:
        if len(orb) == 1:
            assert orb[0] in b_ids


def test_e_orbits_on_affine_points(gq3):
    gens = knarr_autos(gq3)[:5]
    act = group_action(gq3, gens)
    po, _ = orbits(act)
    from flockgq.knarr import POINT_AFFINE

    for orb in po.orbits:
        if gq3.point_types[orb[0]] == POINT_AFFINE:
            assert 3**5 % len(orb) == 0
            assert len(orb) == 3**5  # E is transitive on affine points


def test_tactical_trivial_equals_incidence(gq3):
    po, lo = trivial_orbits(gq3)
    sys = tactical(gq3, po, lo)
    A = incidence_matrix(gq3).toarray()
    for i, row in enumerate(sys.rows):
        assert list(row) == A[i].tolist()
    assert sys.target == 2
    assert all(sum(r) == 4 for r in sys.rows)


def test_tactical_t_system_shape(gq3):
    _, act = _t_action(gq3)
    po, lo = orbits(act)
    sys = tactical(gq3, po, lo)
    assert sys.n_vars == 16  # 108/9 = 12 type (a) orbits + 4 singletons
    assert all(sum(r) == 4 for r in sys.rows)


def test_census_and_oracle(census3, gq3):
    _, res = census3
    assert len(res.solutions) == 648
    assert res.status == "complete"
    assert all(len(s) == 56 for s in res.solutions)


def test_solver_determinism(census3, gq3):
    system, res = census3
    res2 = solve_all(system)
    assert res2.solutions == res.solutions
    assert res2.node_count == res.node_count
    assert solutions_to_jsonl(res2) == solutions_to_jsonl(res)


def test_threads_do_not_change_solutions(gq3, census3):
    system, res = census3
    res4 = solve_all(system, threads=4)
    assert res4.solutions == res.solutions


def test_t_prescribed_solutions_contain_typeone(gq3, census3):
    ell, act = _t_action(gq3)
    po, lo = orbits(act)
    sys = tactical(gq3, po, lo)
    res = solve_all(sys)
    sols = set(res.solutions)
    for S in ({1}, {3}, {4}):
        for orient in ("+", "-"):
            H = typeone_build(gq3, ell, S, orientation=orient)
            assert H.line_indices in sols
    # and they are exactly the T-invariant members of the census
    _, census = census3
    t_perms = act.line_perms
    expected = {
        s
        for s in census.solutions
        if all({p[j] for j in s} == set(s) for p in t_perms)
    }
    assert sols == expected


def test_exclude_semantics(gq3):
    ell, act = _t_action(gq3)
    po, lo = orbits(act)
    sys = tactical(gq3, po, lo)
    res = solve_all(sys)
    sol = res.solutions[0]
    with pytest.raises(DomainError):
        exclude(sys, sol, len(sol))
    narrowed = solve_all(exclude(sys, sol, len(sol) - 1))
    assert sol not in narrowed.solutions
    assert len(narrowed.solutions) == len(res.solutions) - 1


def test_infeasible_toy_system():
    toy = TacticalSystem(rows=((0, 0),), target=1, var_lines=((0,), (1,)))
    assert solve_all(toy).solutions == []


def test_max_intersection_against_brute_force(census3):
    system, res = census3
    ref = res.solutions[0]
    refset = set(ref)
    brute = max(len(refset & set(s)) for s in res.solutions if s != ref)
    mi = max_intersection(system, ref)
    assert mi.exact
    assert mi.value == brute
    assert mi.value < 56
    assert mi.witness in set(res.solutions)


def test_complement_intersects_in_zero(census3, gq3):
    _, res = census3
    ref = set(res.solutions[0])
    comp = tuple(sorted(set(range(gq3.n_lines)) - ref))
    assert comp in set(res.solutions)
    assert not ref & set(comp)


def test_essential_orbits_q3(gq3, census3):
    system, census = census3
    least = 0
    meets = [
        j
        for j in range(1, gq3.n_lines)
        if set(gq3.lines_points[j]) & set(gq3.lines_points[least])
    ]
    disjoint = [
        j for j in range(1, gq3.n_lines) if j not in set(meets)
    ]
    out = dict(essential_orbits(system, [least], [tuple(meets), tuple(disjoint)]))
    # any hemisystem through l1 must contain a line disjoint from l1
    assert out[1] == "essential"
    # zeroing all type-(b) lines: oracle from the census
    b_ids = [j for j, t in enumerate(gq3.line_types) if t == LINE_B]
    avoid_b_exists = any(not (set(s) & set(b_ids)) for s in census.solutions)
    probe = dict(essential_orbits(system, [], [tuple(b_ids)]))
    assert (probe[0] == "inessential") == avoid_b_exists
    # with no fixed lines, single-line orbits are all avoidable; spot-check
    spot = dict(essential_orbits(system, [], [(0,), (5,), (111,)]))
    assert set(spot.values()) == {"inessential"}


def test_export_lp_golden(gq3, tmp_path):
    po, lo = trivial_orbits(gq3)
    sys = tactical(gq3, po, lo)
    p1, p2 = tmp_path / "a.lp", tmp_path / "b.lp"
    export_lp(sys, str(p1))
    export_lp(sys, str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text().splitlines()
    assert text[1] == "Minimize"
    assert sum(1 for t in text if t.startswith(" p")) == 280
    assert sum(1 for t in text if t.strip().startswith("x")) == 112
    assert text[-1] == "End"


def test_solutions_verify_against_full_matrix(gq3, census3):
    _, res = census3
    for sol in res.solutions[::97]:
        assert verify_hemisystem(gq3, sol).ok
