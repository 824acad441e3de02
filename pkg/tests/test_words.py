import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pckit.errors import RankMismatch
from pckit.groups import FiniteGroup
from pckit.words import (Factor, FreeHom, Word, compose, decompose_invgen, factor_is_valid,
                         substitute, type1, type2)

S3 = FiniteGroup.symmetric(3)
Q8 = FiniteGroup.quaternion()


def tuples_agree(alpha, beta, G):
    """alpha and beta induce the same map G^n -> G^m (checked on all tuples)."""
    assert alpha.n == beta.n and alpha.m == beta.m
    n = alpha.n
    grids = np.meshgrid(*([np.arange(G.order)] * n), indexing="ij") if n else []
    vals = [g.ravel() for g in grids]
    for wa, wb in zip(alpha.images, beta.images):
        if n == 0:
            continue
        if not np.array_equal(np.broadcast_to(wa.evaluate(vals, G), vals[0].shape),
                              np.broadcast_to(wb.evaluate(vals, G), vals[0].shape)):
            return False
    return True


def test_substitute_examples():
    G = S3
    a, b = 1, 2
    alpha = FreeHom.from_strings(["x1*x2", "x1"])
    assert substitute(alpha, (a, b), G) == (G.mul(a, b), a)
    assert substitute(FreeHom.from_strings(["x1^-1"]), (a,), G) == (G.inv(a),)
    assert substitute(FreeHom.from_strings(["x1", "x1"]), (a,), G) == (a, a)
    with pytest.raises(RankMismatch):
        substitute(alpha, (a,), G)


def test_pair_inverse_factorisation():
    # (x, y^-1) = (x y^-1, y) o (x y, x) o (x, x^-1 y)
    lhs = FreeHom.from_strings(["x1", "x2^-1"])
    rhs = (FreeHom.from_strings(["x1*x2^-1", "x2"]) @ FreeHom.from_strings(["x1*x2", "x1"])
           @ FreeHom.from_strings(["x1", "x1^-1*x2"]))
    assert lhs == rhs
    # the outer and inner factors are inverses of (x y, y) and (x, x y)
    ident = FreeHom.identity(2)
    assert FreeHom.from_strings(["x1*x2^-1", "x2"]) @ FreeHom.from_strings(["x1*x2", "x2"]) == ident
    assert FreeHom.from_strings(["x1", "x1^-1*x2"]) @ FreeHom.from_strings(["x1", "x1*x2"]) == ident
    for G in (S3, Q8):
        assert tuples_agree(lhs, rhs, G)


def test_rank_one_inverse_factorisation():
    # (x^-1) = (1, x) o (x, y^-1) o (y)
    lhs = FreeHom.from_strings(["x1^-1"])
    rhs = (FreeHom(2, 1, (Word(), Word.letter(1))) @ FreeHom.from_strings(["x1", "x2^-1"])
           @ FreeHom(1, 2, (Word.letter(2),)))
    assert lhs == rhs
    for G in (S3, Q8):
        assert tuples_agree(lhs, rhs, G)


def test_decompose_pair_example_shape():
    alpha = FreeHom.from_strings(["x1", "x2^-1"])
    factors = decompose_invgen(alpha)
    assert [f.kind for f in factors][0] == "inverse" and factors[-1].kind == "inverse"
    assert factors[0].hom == FreeHom.from_strings(["x1*x2^-1", "x2"])
    assert factors[-1].hom == FreeHom.from_strings(["x1", "x1^-1*x2"])
    assert compose(factors) == alpha


def test_single_factor_cases():
    for alpha in (type2(1), type2(3), type1([2, 1], 2), type1([1, 1, 0], 1)):
        fs = decompose_invgen(alpha)
        assert len(fs) == 1 and fs[0].hom == alpha and factor_is_valid(fs[0])


def test_rank_one_inverse_decomposes():
    alpha = FreeHom.from_strings(["x1^-1"])
    fs = decompose_invgen(alpha)
    assert compose(fs) == alpha
    assert all(factor_is_valid(f) for f in fs)


def test_composition_contravariance():
    alpha = FreeHom.from_strings(["x1*x2", "x2^-1"])
    beta = FreeHom.from_strings(["x2", "x1*x1"])
    for g in itertools.product(range(S3.order), repeat=2):
        assert substitute(alpha @ beta, g, S3) == substitute(beta, substitute(alpha, g, S3), S3)


def test_word_parsing_and_reduction():
    assert str(Word.parse("x1*x2*x2^-1*x3")) == "x1*x3"
    assert Word.parse("x1^3") == Word.parse("x1*x1*x1")
    assert len(Word.parse("1")) == 0
    with pytest.raises(ValueError):
        Word.parse("y1")
    h = FreeHom.from_strings(["x1*x2^-1", "1"], n=3)
    assert FreeHom.from_json(h.to_json()) == h


# -- random homomorphisms ------------------------------------------------------------------


@st.composite
def free_homs(draw, max_rank=3, max_len=4):
    m = draw(st.integers(1, max_rank))
    n = draw(st.integers(1, max_rank))
    images = []
    for _ in range(m):
        length = draw(st.integers(0, max_len))
        letters = [(draw(st.integers(1, n)), draw(st.sampled_from([1, -1]))) for _ in range(length)]
        images.append(Word(tuple(letters)))
    return FreeHom(m, n, tuple(images))


@given(free_homs())
def test_decomposition_composes_back(alpha):
    factors = decompose_invgen(alpha)
    assert compose(factors) == alpha
    assert all(factor_is_valid(f) for f in factors)


@given(free_homs(max_rank=2, max_len=3))
def test_decomposition_agrees_on_tuples(alpha):
    factors = decompose_invgen(alpha)
    composite = compose(factors)
    for G in (S3, Q8):
        assert tuples_agree(alpha, composite, G)


@given(free_homs(), st.data())
def test_substitute_respects_free_reduction(alpha, data):
    # inserting a cancelling pair anywhere leaves the induced map unchanged
    i = data.draw(st.integers(0, alpha.m - 1))
    w = alpha.images[i]
    pos = data.draw(st.integers(0, len(w)))
    k = data.draw(st.integers(1, alpha.n))
    s = data.draw(st.sampled_from([1, -1]))
    padded = list(w.letters[:pos]) + [(k, s), (k, -s)] + list(w.letters[pos:])
    # build the evaluation by hand, without the automatic reduction
    g = tuple(data.draw(st.integers(0, S3.order - 1)) for _ in range(alpha.n))
    acc = S3.identity
    for idx, sign in padded:
        v = g[idx - 1] if sign == 1 else S3.inv(g[idx - 1])
        acc = S3.mul(acc, v)
    assert substitute(alpha, g, S3)[i] == acc


def test_factor_str():
    f = decompose_invgen(FreeHom.from_strings(["x1", "x2^-1"]))[0]
    assert isinstance(f, Factor) and str(f).startswith("inverse[")
