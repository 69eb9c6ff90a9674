import random

import pytest

from flockgq.conway import (
    CONWAY_POLYNOMIALS,
    conway_polynomial,
    is_irreducible,
    is_norm_compatible,
    root_is_primitive,
)
from flockgq.errors import ConfigurationError, DomainError
from flockgq.gf import element_from_wire, element_to_wire, field_for_order, field_make


def test_bundled_conway_rederives_from_definition():
    known = {}
    for (p, f) in sorted(CONWAY_POLYNOMIALS):
        got = conway_polynomial(p, f, known)
        assert got == CONWAY_POLYNOMIALS[(p, f)], (p, f)
        known[(p, f)] = got


def test_bundled_conway_properties():
    for (p, f), coeffs in CONWAY_POLYNOMIALS.items():
        assert is_irreducible(coeffs, p)
        assert root_is_primitive(coeffs, p)
        assert is_norm_compatible(coeffs, p, CONWAY_POLYNOMIALS)


def test_field_make_examples():
    assert field_make(3, 1).primitive == 2
    assert field_make(3, 2).modulus == (2, 2, 1)
    assert field_make(11, 1).primitive == 2
    assert field_make(5, 1).primitive == 2
    assert field_make(7, 1).primitive == 3


def test_field_make_rejects_unsupported():
    with pytest.raises(ConfigurationError):
        field_make(2, 4)
    with pytest.raises(ConfigurationError):
        field_make(13, 1)
    with pytest.raises(ConfigurationError):
        field_for_order(12)


@pytest.mark.parametrize("p,f", [(3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (3, 4)])
def test_field_axioms_exhaustive(p, f):
    F = field_make(p, f)
    if F.order > 121:
        pytest.skip("exhaustive range is <= 121")
    for x in range(F.order):
        assert F.add(x, 0) == x
        assert F.mul(x, 1) == x
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
        for y in range(F.order):
            assert F.add(x, y) == F.add(y, x)
            assert F.mul(x, y) == F.mul(y, x)
            # Frobenius additivity
            assert F.pow(F.add(x, y), p) == F.add(F.pow(x, p), F.pow(y, p))


@pytest.mark.parametrize("p,f", [(3, 6), (5, 3), (7, 2), (11, 2), (5, 6)])
def test_field_axioms_sampled(p, f):
    F = field_make(p, f)
    rng = random.Random(7)
    for _ in range(500):
        x, y, z = (rng.randrange(F.order) for _ in range(3))
        assert F.pow(F.add(x, y), p) == F.add(F.pow(x, p), F.pow(y, p))
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        assert F.pow(x, F.order) == x


def test_gap_rank_small_fields():
    F3 = field_make(3, 1)
    assert [F3.gap_rank(a) for a in (0, 1, 2)] == [0, 1, 2]
    F9 = field_make(3, 2)
    # 0, then GF(3) = {1, 2}, then the six proper GF(9) elements by log
    order = sorted(range(9), key=F9.gap_rank)
    assert order[:3] == [0, 1, 2]
    logs = [F9.log[a] for a in order[3:]]
    assert logs == [1, 2, 3, 5, 6, 7]


@pytest.mark.parametrize("p,f", [(3, 2), (5, 2), (3, 4), (7, 2)])
def test_gap_rank_bijection(p, f):
    F = field_make(p, f)
    ranks = {F.gap_rank(a) for a in range(F.order)}
    assert ranks == set(range(F.order))
    for a in range(F.order):
        assert F.from_rank(F.gap_rank(a)) == a


def test_poly_roots_examples():
    F9 = field_make(3, 2)
    assert F9.poly_roots([F9.neg(1), 1]) == [1]  # X - 1
    F729 = field_make(3, 6)
    roots = F729.poly_roots([1, 1, 0, 0, 1])  # X^4 + X + 1, q = 3
    assert len(roots) == 4
    F3 = field_make(3, 1)
    assert F3.poly_roots([1, 0, 1]) == []  # X^2 + 1
    with pytest.raises(DomainError):
        F3.poly_roots([1])


def test_poly_roots_multiplicative():
    F = field_make(5, 1)
    rng = random.Random(3)
    for _ in range(30):
        f = [rng.randrange(5) for _ in range(3)] + [1]
        g = [rng.randrange(5) for _ in range(2)] + [1]
        prod = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                prod[i + j] = F.add(prod[i + j], F.mul(a, b))
        assert set(F.poly_roots(prod)) == set(F.poly_roots(f)) | set(F.poly_roots(g))


def test_relative_trace_and_norm():
    F = field_make(3, 6)
    assert F.trace_to(3, 0) == 0
    assert F.trace_to(3, 1) == 0  # extension degree 6 = 0 mod 3
    rng = random.Random(11)
    for _ in range(50):
        x = rng.randrange(F.order)
        assert F.trace_to(3, F.pow(x, 3)) == F.trace_to(3, x)
        assert F.in_subfield(F.trace_to(3, x), 3)
        assert F.in_subfield(F.norm_to(3, x), 3)
        y = rng.randrange(F.order)
        assert F.norm_to(3, F.mul(x, y)) == F.mul(F.norm_to(3, x), F.norm_to(3, y))
    # GF(q)-linearity and surjectivity, exhaustive for q=3 over GF(3^2) scalars
    F2 = field_make(3, 2)
    hit = {F2.trace_to(3, x) for x in range(9)}
    assert hit == {0, 1, 2}
    for lam in (0, 1, 2):
        for x in range(9):
            assert F2.trace_to(3, F2.mul(lam, x)) == F2.mul(lam, F2.trace_to(3, x))


def test_trace_rejects_non_subfield():
    F = field_make(3, 6)
    with pytest.raises(DomainError):
        F.trace_to(9**2, 1)  # GF(81) is not inside GF(3^6)
    with pytest.raises(DomainError):
        F.trace_to(5, 1)


def test_element_wire_roundtrip():
    F9 = field_make(3, 2)
    w = element_to_wire(F9, 0)
    assert w == {"field": "3^2", "log": "zero"}
    for a in range(9):
        F2, b = element_from_wire(element_to_wire(F9, a))
        assert F2 is F9 and b == a
    F3 = field_make(3, 1)
    assert element_to_wire(F3, 2)["field"] == "3"
