import random

import pytest

from flockgq.blt import blt_make, blt_qclan, w3_ti_lines
from flockgq.errors import DomainError
from flockgq.gf import field_for_order
from flockgq.knarr import lift_w3_vector
from flockgq import linalg as la
from flockgq.typeone import (
    Hemisystem,
    admissible_base_lines,
    blt_partition,
    complement,
    concurrency_graph,
    graph_to_adjacency_list,
    graph_to_dimacs,
    planes_on_base_line,
    projection_lines,
    srg_check,
    t_group,
    typeone_build,
    verify_hemisystem,
    verify_t_group,
)

TABLE_ELL_Q3 = [(0, 1, 0, 1, 0, 0), (0, 0, 1, 1, 1, 0)]
TABLE_ELL_Q5 = [(0, 1, 0, 1, 0, 0), (0, 0, 1, 0, 1, 0)]


def lift(F, lprime):
    return la.canonicalize(F, [lift_w3_vector(u) for u in lprime.rows])


def test_admissible_base_lines_q3():
    B = blt_qclan("linear", 3)
    F = field_for_order(3)
    lines = admissible_base_lines(B)
    for m in lines:
        assert all(la.intersection_dim(F, m, ln) == 0 for ln in B.lines)
    # independent oracle: compare point sets rather than rank computations
    member_pts = [
        {v for v in _proj_points(F, ln)} for ln in B.lines
    ]
    count = 0
    for m in w3_ti_lines(3):
        pts = set(_proj_points(F, m))
        if all(not (pts & s) for s in member_pts):
            count += 1
    assert count == len(lines)
    # the Table ell projection is admissible
    lp = la.canonicalize(F, [(1, 0, 1, 0), (0, 1, 1, 1)])
    assert lp in set(lines)


def _proj_points(F, space):
    seen = set()
    for v in space.vectors(F):
        lead = next((j for j, a in enumerate(v) if a), None)
        if lead is None:
            continue
        w = la.vec_scale(F, F.inv(v[lead]), v)
        seen.add(w)
    return seen


def test_partition_sizes():
    B3 = blt_qclan("linear", 3)
    F3 = field_for_order(3)
    lp = la.canonicalize(F3, [(1, 0, 1, 0), (0, 1, 1, 1)])
    part = blt_partition(B3, lp)
    assert len(part.plus) == 2 and len(part.minus) == 2
    assert 0 in part.plus  # canonically least member labels the plus class

    B5 = blt_qclan("ftwkb", 5)
    F5 = field_for_order(5)
    lp5 = admissible_base_lines(B5)[0]
    part5 = blt_partition(B5, lp5)
    assert len(part5.plus) == 3 and len(part5.minus) == 3


def test_projection_lines_are_distinct():
    B = blt_qclan("linear", 3)
    F = field_for_order(3)
    lp = admissible_base_lines(B)[0]
    for pi in B.lines:
        lines = projection_lines(F, B, pi, lp)
        assert len(lines) == 4  # q+1 distinct t.i. lines


def test_partition_rejects_meeting_line():
    B = blt_qclan("linear", 3)
    with pytest.raises(DomainError):
        blt_partition(B, B.lines[0])


def test_plane_indexing_matches_table(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    planes, pidx = planes_on_base_line(gq3, ell)
    assert len(planes) == 4
    assert pidx == 2  # the paper's S-subsets never contain 2


def test_typeone_q3(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    built = {}
    for S in ({1}, {3}, {4}):
        H = typeone_build(gq3, ell, S)
        assert H.size == 56
        assert verify_hemisystem(gq3, H).ok
        built[frozenset(S)] = H
    # exactly C(q, (q-1)/2) = 3 subsets are available
    with pytest.raises(DomainError):
        typeone_build(gq3, ell, {2})
    with pytest.raises(DomainError):
        typeone_build(gq3, ell, {1, 3})
    # orientation '-' gives the complement
    Hm = typeone_build(gq3, ell, {1}, orientation="-")
    assert set(Hm.line_indices) == set(complement(gq3, built[frozenset({1})]).line_indices)


def test_typeone_rejects_bad_ell(gq3):
    F = gq3.F
    pi = gq3.lines[gq3.blt_plane_line_ids()[0]]
    inner = la.canonicalize(F, pi.rows[:2])
    with pytest.raises(DomainError):
        typeone_build(gq3, inner, {1})


def test_verify_hemisystem_violations_are_symmetric_difference(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    H = typeone_build(gq3, ell, {1})
    ids = list(H.line_indices)
    removed = ids[-1]
    added = next(j for j in range(gq3.n_lines) if j not in set(ids))
    bad = ids[:-1] + [added]
    rep = verify_hemisystem(gq3, bad)
    assert not rep.ok
    expected = set(gq3.lines_points[removed]) ^ set(gq3.lines_points[added])
    assert {i for i, _ in rep.violations} == expected


def test_complement_is_hemisystem(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    H = typeone_build(gq3, ell, {3})
    assert verify_hemisystem(gq3, complement(gq3, H)).ok


def test_t_group_q3(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    gens = t_group(gq3, ell)
    hemis = [typeone_build(gq3, ell, {k}) for k in (1, 3, 4)]
    rep = verify_t_group(gq3, gens, hemis)
    assert rep.group_order == 9
    assert rep.fixes_type_b
    assert rep.type_a_orbit_sizes == {9}
    assert rep.semiregular
    assert rep.fixes_hemisystems
    # T fixes each plane on the base line (the set R of the theorem)
    planes, pidx = planes_on_base_line(gq3, ell)
    for g in gens:
        for s in planes:
            assert g.apply_subspace(F, s) == s


def test_srg_q3(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    H = typeone_build(gq3, ell, {1})
    params, witness = srg_check(concurrency_graph(gq3, H))
    assert witness is None
    assert (params.v, params.k, params.lam, params.mu) == (56, 10, 0, 2)
    assert params.identity_holds()


def test_srg_rejects_random_set(gq3):
    rng = random.Random(2024)
    ids = tuple(sorted(rng.sample(range(gq3.n_lines), 56)))
    assert not verify_hemisystem(gq3, ids).ok
    params, witness = srg_check(concurrency_graph(gq3, Hemisystem(3, ids, {})))
    assert params is None and witness is not None


def test_graph_exports(gq3):
    F = gq3.F
    ell = la.canonicalize(F, TABLE_ELL_Q3)
    H = typeone_build(gq3, ell, {1})
    adj = concurrency_graph(gq3, H)
    d = graph_to_dimacs(adj)
    assert d.splitlines()[0] == "p edge 56 280"  # 56*10/2 edges
    a = graph_to_adjacency_list(adj)
    assert len(a.splitlines()) == 56


def test_fisher_q3_typeone_path():
    """The construction also runs on a transported (non-q-clan) BLT-set."""
    B = blt_make("fisher", 3)
    from flockgq.knarr import knarr_build

    G = knarr_build(B)
    assert G.n_points == 280 and G.n_lines == 112
    lp = admissible_base_lines(B)[0]
    F = G.F
    ell = la.canonicalize(F, [lift_w3_vector(u) for u in lp.rows])
    H = typeone_build(G, ell, {1} if 1 != _p_index(G, ell) else {3})
    assert verify_hemisystem(G, H).ok


def _p_index(G, ell):
    return planes_on_base_line(G, ell)[1]
