import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pckit.coeffring import (GF, RingElem, RingSpec, Zmod, defining_polynomial, dual_numbers,
                             embed_codes, embed_extension, invert, teichmueller)
from pckit.errors import InvalidRingSpec, NonUnit, RingMismatch, ZeroResidue

SMALL_RINGS = [GF(2), GF(3), GF(2, 2), GF(5), GF(2, 3), GF(3, 2), Zmod(2, 3), Zmod(3, 2), Zmod(5, 2),
               dual_numbers(2), dual_numbers(3), dual_numbers(2, 2)]


def test_invert_examples():
    assert invert(GF(5)(2)) == GF(5)(3)
    with pytest.raises(NonUnit):
        invert(Zmod(3, 2)(3))
    D = dual_numbers(3)
    assert invert(D.dual(1, 1)) == D.dual(1, 2)


def test_teichmueller_examples():
    assert teichmueller(Zmod(3, 2), 2).code == 8
    assert teichmueller(Zmod(3, 2), 1).code == 1
    assert teichmueller(Zmod(5, 2), GF(5)(2)).code == 7
    with pytest.raises(ZeroResidue):
        teichmueller(Zmod(3, 2), 0)
    with pytest.raises(RingMismatch):
        teichmueller(Zmod(3, 2), GF(5)(2))
    with pytest.raises(InvalidRingSpec):
        teichmueller(GF(3, 2), 2)


def test_embed_examples():
    assert embed_extension(GF(2)(0), 2) == GF(2, 2)(0)
    assert embed_extension(GF(3)(1), 2) == GF(3, 2)(1)
    two = embed_extension(GF(3)(2), 2)
    assert two.spec == GF(3, 2)
    assert two ** 3 == two and two == GF(3, 2)(2)


def test_invalid_specs():
    for bad in [("Fq", 4, 1, 1), ("Fq", 3, 0, 1), ("ZmodPr", 3, 2, 1), ("Fq", 3, 1, 2), ("Zp", 3, 1, 1)]:
        with pytest.raises(InvalidRingSpec):
            RingSpec(*bad)


def test_defining_polynomial_is_least_irreducible():
    # x^2 + 1 is irreducible over F_3 and is the least monic quadratic without roots
    assert defining_polynomial(3, 2) == (1, 0, 1)
    # x^2 + x + 1 over F_2
    assert defining_polynomial(2, 2) == (1, 1, 1)


def test_json_roundtrip():
    for R in SMALL_RINGS:
        assert RingSpec.from_json(R.to_json()) == R
        for c in R.elements():
            assert R.elem(R.payload(int(c))).code == c
    assert GF(3, 2).to_json() == {"kind": "Fq", "p": 3, "f": 2}
    assert Zmod(3, 2).to_json() == {"kind": "ZmodPr", "p": 3, "r": 2}
    assert dual_numbers(3).to_json() == {"kind": "Dual", "p": 3, "f": 1}


@pytest.mark.parametrize("R", SMALL_RINGS, ids=repr)
def test_ring_axioms_exhaustive(R):
    x = R.elements()
    a, b, c = np.meshgrid(x, x, x, indexing="ij")
    assert np.array_equal(R.add(R.add(a, b), c), R.add(a, R.add(b, c)))
    assert np.array_equal(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
    assert np.array_equal(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))
    assert np.array_equal(R.mul(a, b), R.mul(b, a))
    assert np.array_equal(R.add(a, R.neg(a)), np.zeros_like(a))
    assert np.array_equal(R.mul(x, np.ones_like(x)), x)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=repr)
def test_invert_involution_exhaustive(R):
    units = [int(c) for c in R.elements() if R.is_unit(c)]
    for u in units:
        x = RingElem(R, u)
        y = invert(x)
        assert x * y == R(1)
        assert invert(y) == x
    # non-units are exactly the elements whose residue is zero
    n_units = len(units)
    expected = R.size - R.size // R.q
    assert n_units == expected


def test_dual_numbers_eps_squared():
    for p in (2, 3, 5):
        D = dual_numbers(p)
        eps = D.dual(0, 1)
        assert eps * eps == D(0)


@pytest.mark.parametrize("p,r", [(p, r) for p in (2, 3, 5, 7) for r in (1, 2, 3) if p**r <= 343])
def test_teichmueller_torsion_and_reduction(p, r):
    R = Zmod(p, r)
    for a in range(1, p):
        w = teichmueller(R, a)
        assert w ** (p - 1) == R(1)
        assert w.code % p == a
    for a in range(1, p):
        for b in range(1, p):
            assert teichmueller(R, a * b % p) == teichmueller(R, a) * teichmueller(R, b)


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
@pytest.mark.parametrize("k", [1, 2])
def test_embedding_is_ring_homomorphism(p, f, k):
    R = GF(p, f)
    S = GF(p, f * k)
    x = R.elements()
    a, b = np.meshgrid(x, x, indexing="ij")
    e = lambda c: embed_codes(R, c, k)  # noqa: E731
    assert np.array_equal(e(R.add(a, b)), S.add(e(a), e(b)))
    assert np.array_equal(e(R.mul(a, b)), S.mul(e(a), e(b)))
    assert len(set(e(x).tolist())) == R.size


@given(st.sampled_from(SMALL_RINGS), st.data())
def test_power_matches_repeated_multiplication(R, data):
    a = RingElem(R, data.draw(st.integers(0, R.size - 1)))
    e = data.draw(st.integers(0, 12))
    acc = R(1)
    for _ in range(e):
        acc = acc * a
    assert a ** e == acc


def test_no_cross_ring_arithmetic():
    with pytest.raises(RingMismatch):
        GF(3)(1) + GF(5)(1)
    assert isinstance(GF(3)(1) + 1, RingElem)


def test_elements_are_canonical():
    for R in SMALL_RINGS:
        codes = R.elements()
        assert sorted(codes.tolist()) == list(range(R.size))
        for a, b in itertools.islice(itertools.product(codes, codes), 200):
            assert 0 <= int(R.add(a, b)) < R.size
