from collections import Counter
from types import SimpleNamespace

import numpy as np
import pytest

from flockgq.blt import blt_qclan
from flockgq.errors import DomainError
from flockgq.knarr import (
    LINE_A,
    LINE_B,
    POINT_AFFINE,
    POINT_BASE,
    POINT_SPREAD,
    incidence_matrix,
    knarr_autos,
    knarr_build,
    verify_gq,
    write_matrixmarket,
)
from flockgq.maps import induced_permutations
from flockgq import linalg as la


def test_counts_q3(gq3):
    assert gq3.n_points == 280 and gq3.n_lines == 112
    assert Counter(gq3.point_types) == {POINT_AFFINE: 243, POINT_SPREAD: 36, POINT_BASE: 1}
    assert Counter(gq3.line_types) == {LINE_A: 108, LINE_B: 4}
    assert gq3.order == (9, 3)


def test_gq_axiom_exhaustive_q3(gq3):
    rep = verify_gq(gq3)
    assert rep.axiom_holds and rep.order == (9, 3)


def test_counts_q5_ftwkb():
    G = knarr_build(blt_qclan("ftwkb", 5))
    assert G.n_points == 3276 and G.n_lines == 756
    rep = verify_gq(G, sample_pairs=20000)
    assert rep.axiom_holds
    # 756 lines of 26 points each
    assert sum(len(p) for p in G.lines_points) == 756 * 26


def test_incidence_matrix_q3(gq3, tmp_path):
    A = incidence_matrix(gq3)
    assert A.shape == (280, 112)
    assert set(np.asarray(A.sum(axis=1)).ravel().tolist()) == {4}
    assert set(np.asarray(A.sum(axis=0)).ravel().tolist()) == {10}
    p1, p2 = tmp_path / "a.mtx", tmp_path / "b.mtx"
    write_matrixmarket(gq3, str(p1))
    write_matrixmarket(gq3, str(p2))
    b = p1.read_bytes()
    assert b == p2.read_bytes()
    header = b.decode().splitlines()
    assert header[0].startswith("%%MatrixMarket matrix coordinate integer")
    assert header[1] == "280 112 1120"


def test_missing_line_fails_axiom(gq3):
    lp = gq3.lines_points[1:]
    pl = [[] for _ in range(gq3.n_points)]
    for j, pts in enumerate(lp):
        for i in pts:
            pl[i].append(j)
    broken = SimpleNamespace(
        q=gq3.q,
        n_points=gq3.n_points,
        n_lines=gq3.n_lines - 1,
        lines_points=lp,
        points_lines=[tuple(x) for x in pl],
    )
    rep = verify_gq(broken)
    assert not rep.axiom_holds
    assert rep.witness is not None


def test_autos_q3(gq3):
    gens = knarr_autos(gq3)
    # 5 from E, 1 from Q (sigma only for non-prime q)
    assert len(gens) == 6
    bids = set(gq3.blt_plane_line_ids())
    e_perms = []
    for g in gens[:5]:
        pp, lp = induced_permutations(gq3, g)
        e_perms.append((pp, lp))
        assert all(lp[j] == j for j in bids)
    # E generates a group of order q^5 = 243
    ident = (tuple(range(gq3.n_points)), tuple(range(gq3.n_lines)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for pp, lp in frontier:
            for gp, gl in e_perms:
                cand = (tuple(gp[i] for i in pp), tuple(gl[i] for i in lp))
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    assert len(seen) == 3**5
    # Q fixes P and the BLT planes
    qp, ql = induced_permutations(gq3, gens[5])
    p_index = next(i for i, t in enumerate(gq3.point_types) if t == POINT_BASE)
    assert qp[p_index] == p_index
    assert all(ql[j] == j for j in bids)


def test_autos_sigma_on_nonprime():
    G = knarr_build(blt_qclan("kantor_knuth", 9))
    gens = knarr_autos(G, verify=False)
    assert any(g.frob for g in gens)


def test_r_candidates(gq3):
    F = gq3.F
    ident4 = la.mat_identity(4)
    accept = knarr_autos(gq3, r_candidates=[ident4])
    assert len(accept) == 7
    # a symplectic transvection moving l_inf off the linear BLT-set
    T = [list(r) for r in la.mat_identity(4)]
    J4 = la.symplectic_j4(F).gram
    e1 = (1, 0, 0, 0)
    for i in range(4):
        base = tuple(1 if j == i else 0 for j in range(4))
        coeff = la.beta(F, J4, base, e1)
        T[i] = list(la.vec_add(F, base, la.vec_scale(F, coeff, e1)))
    T = tuple(tuple(r) for r in T)
    with pytest.raises(DomainError):
        knarr_autos(gq3, r_candidates=[T])


def test_gq_wire_golden_roundtrip(gq3):
    from flockgq.wire import dumps, gq_from_wire, gq_to_wire

    w1 = dumps(gq_to_wire(gq3))
    G2 = gq_from_wire(gq_to_wire(gq3))
    w2 = dumps(gq_to_wire(G2))
    assert w1 == w2
    assert [s.rows for s in G2.points] == [s.rows for s in gq3.points]


def test_invalid_blt_rejected():
    from flockgq.blt import BLTSet, w3_ti_lines
    from flockgq.gf import field_for_order

    F = field_for_order(3)
    B = blt_qclan("linear", 3)
    spare = next(
        m
        for m in w3_ti_lines(3)
        if m not in set(B.lines)
        and all(la.intersection_dim(F, m, ln) == 0 for ln in B.lines[1:])
    )
    bad = BLTSet(
        q=3,
        family="custom",
        params={},
        lines=tuple(sorted(list(B.lines[1:]) + [spare], key=lambda s: s.sort_key(F))),
    )
    with pytest.raises(DomainError):
        knarr_build(bad)
