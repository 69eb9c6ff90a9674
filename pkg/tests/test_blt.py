import pytest

from flockgq.blt import (
    BLTSet,
    blt_make,
    blt_q4_points,
    blt_qclan,
    blt_transport,
    minimal_nonsquare,
    parabolic_model_form,
    qclan_form,
    verify_blt,
    w3_ti_lines,
)
from flockgq.errors import ConfigurationError
from flockgq.gf import field_for_order
from flockgq import linalg as la


def test_linear_q3_lines():
    B = blt_qclan("linear", 3)
    assert B.params["n"] == 2  # the unique nonsquare of GF(3)
    F = field_for_order(3)
    expected = {la.canonicalize(F, [(0, 0, 1, 0), (0, 0, 0, 1)])}
    for t in range(3):
        g = F.mul(F.neg(2), t)
        expected.add(la.canonicalize(F, [(1, 0, 0, t), (0, 1, g, 0)]))
    assert set(B.lines) == expected


def test_ftwkb_values():
    B5 = blt_qclan("ftwkb", 5)
    fg = qclan_form(B5)
    # f_t = (3/2) t^2, g_t = 3 t^3 over GF(5); f_2 = 4*4 = 1
    assert fg[2] == (1, 4)
    with pytest.raises(ConfigurationError):
        blt_qclan("ftwkb", 7)


def test_kantor_monomial_conditions():
    for q in (3, 7):
        assert verify_blt(blt_qclan("kantor_monomial", q)).ok
    for q in (9, 11):
        with pytest.raises(ConfigurationError):
            blt_qclan("kantor_monomial", q)


def test_kantor_knuth():
    B = blt_qclan("kantor_knuth", 9)
    assert B.params["sigma"] == 1
    assert verify_blt(B).ok
    with pytest.raises(ConfigurationError):
        blt_qclan("kantor_knuth", 3)
    with pytest.raises(ConfigurationError):
        blt_qclan("kantor_knuth", 9, {"sigma": 0})


def test_penttila_mondello_q11_table():
    B = blt_qclan("penttila_mondello", 11)
    fg = qclan_form(B)
    assert fg[0] == (8, 1)
    assert fg[1] == (0, 8)
    with pytest.raises(ConfigurationError):
        blt_qclan("penttila_mondello", 9)


def test_fisher_points_q3():
    pts = blt_q4_points("fisher", 3)
    assert len(pts) == 4
    form = parabolic_model_form(3)
    F = field_for_order(3)
    assert all(form.evaluate(F, v) == 0 for v in pts)


def test_pm_points_q9():
    pts = blt_q4_points("penttila_mondello", 9)
    assert len(pts) == 10
    form = parabolic_model_form(9)
    F = field_for_order(9)
    assert all(form.evaluate(F, v) == 0 for v in pts)


def test_transport_roundtrip_linear_q3():
    B = blt_qclan("linear", 3)
    F = field_for_order(3)
    pts = [la.w3_line_to_section_point(F, ln) for ln in B.lines]
    # section points lie on the Klein parabolic form, so transporting through
    # the identity similarity route must return the same canonical line set
    back = {la.section_point_to_w3_line(F, v) for v in pts}
    assert back == set(B.lines)


@pytest.mark.parametrize("family,q", [("fisher", 3), ("fisher", 5), ("penttila_mondello", 9)])
def test_transport_passes_both_checks(family, q):
    B = blt_make(family, q)
    rep = verify_blt(B)
    assert rep.direct_ok and rep.anisotropy_ok and rep.agree


def test_pm11_transport_matches_qclan_fingerprint():
    via_table = blt_qclan("penttila_mondello", 11)
    via_transport = blt_make("penttila_mondello", 11)
    # both must be genuine BLT-sets; equivalence is checked by an invariant
    # fingerprint (intersection pattern with all t.i. lines), not full group
    # equivalence
    assert verify_blt(via_table).ok and verify_blt(via_transport).ok

    def fingerprint(B):
        F = B.field()
        counts = []
        for m in w3_ti_lines(B.q):
            counts.append(
                sum(1 for ln in B.lines if ln != m and la.intersection_dim(F, m, ln) >= 1)
            )
        return sorted(counts)

    assert fingerprint(via_table) == fingerprint(via_transport)


def test_verify_blt_detects_corruption():
    B = blt_qclan("linear", 3)
    F = field_for_order(3)
    keep = B.lines[1:]
    spare = next(
        m
        for m in w3_ti_lines(3)
        if m not in set(B.lines)
        and all(la.intersection_dim(F, m, ln) == 0 for ln in keep)
    )
    bad = BLTSet(
        q=3,
        family="custom",
        params={},
        lines=tuple(sorted(list(keep) + [spare], key=lambda s: s.sort_key(F))),
    )
    rep = verify_blt(bad)
    assert not rep.direct_ok
    assert rep.direct_witness is not None
    # the witness line really does meet three members
    m, met = rep.direct_witness
    assert len(met) >= 3
    assert rep.agree in (True, None)


def test_blt_lines_share_no_common_point():
    for family, q in [("linear", 3), ("ftwkb", 5), ("kantor_monomial", 7)]:
        B = blt_qclan(family, q)
        F = field_for_order(q)
        for i, a in enumerate(B.lines):
            for b in B.lines[i + 1 :]:
                assert la.intersection_dim(F, a, b) == 0


def test_minimal_nonsquare_is_primitive_root_for_primes():
    for q in (3, 5, 7, 11):
        F = field_for_order(q)
        assert minimal_nonsquare(F) == F.primitive


def test_blt_wire_roundtrip():
    from flockgq.wire import blt_from_wire, blt_to_wire

    B = blt_qclan("linear", 5)
    assert blt_from_wire(blt_to_wire(B)) == B
