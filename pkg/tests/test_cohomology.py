import numpy as np
import pytest

from conftest import rank_mod_p
from pckit import (GF, FiniteGroup, GModule, Representation, ad_module, centralizer_points,
                   cohomology_dims, gl1_pseudo_tangent, named_group, rep_tangent_dim,
                   sp_projection)
from pckit import linalg as la
from pckit.cohomology import centralizer_algebra_dim, differential, lie_algebra_dim
from pckit.corpus import (CORPUS_GROUPS, corpus_group, corpus_items, matrix_group, q8_symplectic,
                          s3_standard)
from pckit.errors import BudgetExceeded, CharTwo, WrongKind
from pckit.groups import check_homomorphism
from pckit.matgroups import GroupKind, J_matrix, all_matrices

F3, F5 = GF(3), GF(5)


# -- the sp projection ------------------------------------------------------------


def test_projection_examples():
    assert not sp_projection(F5, np.eye(2, dtype=np.int64), 1).any()
    H = np.array([[1, 0], [0, 4]])
    assert np.array_equal(sp_projection(F5, H, 1), H)
    assert lie_algebra_dim(F5, 2, "sp") == 3
    assert lie_algebra_dim(F5, 4, "sp") == 10
    assert lie_algebra_dim(F5, 3, "sl") == 8


def test_projection_properties_exhaustive():
    R = F3
    J = J_matrix(R, 1)
    mats = all_matrices(R, 2)
    pi = sp_projection(R, mats, 1)
    assert np.array_equal(sp_projection(R, pi, 1), pi)
    # image lies in sp: X^T J + J X = 0
    check = R.add(la.matmul(R, la.transpose(pi), J), la.matmul(R, J, pi))
    assert not check.any()
    in_sp = ~np.any(R.add(la.matmul(R, la.transpose(mats), J), la.matmul(R, J, mats)), axis=(-1, -2))
    assert np.array_equal(pi[in_sp], mats[in_sp])
    G = matrix_group("Sp", 1, 3).elements
    Ginv = la.inverse(R, G)
    for M in np.eye(4, dtype=np.int64).reshape(4, 2, 2):
        conj = la.matmul(R, la.matmul(R, G, M), Ginv)
        lhs = sp_projection(R, conj, 1)
        rhs = la.matmul(R, la.matmul(R, G, sp_projection(R, M, 1)), Ginv)
        assert np.array_equal(lhs, rhs)


def test_projection_char_two():
    with pytest.raises(CharTwo):
        sp_projection(GF(2), np.eye(2, dtype=np.int64), 1)


# -- adjoint modules ----------------------------------------------------------------


def test_ad_module_shapes_and_errors():
    q8 = q8_symplectic(F3)
    assert ad_module(q8, "gl").dim == 4
    assert ad_module(q8, "sl").dim == 3
    M = ad_module(q8, "sp")
    assert M.dim == 3
    check_homomorphism(M.group, F3, M.action)
    with pytest.raises(WrongKind):
        ad_module(s3_standard(F3), "sp")
    with pytest.raises(CharTwo):
        ad_module(Representation.trivial(q8.group, GroupKind("Sp", 1), GF(2)), "sp")


# -- cohomology ----------------------------------------------------------------------


def test_cohomology_examples():
    T = FiniteGroup.trivial()
    assert cohomology_dims(GModule.trivial(T, F5, 3)).dims == (3, 0, 0)
    assert cohomology_dims(GModule.trivial(FiniteGroup.cyclic(3), F3)).dims == (1, 1, 1)
    assert cohomology_dims(GModule.trivial(FiniteGroup.cyclic(2), F3)).dims == (1, 0, 0)


def test_differentials_compose_to_zero():
    M = ad_module(s3_standard(F3))
    for k in range(2):
        assert not la.matmul(F3, differential(M, k + 1), differential(M, k)).any()


def _cyclic_oracle(T, n, p):
    """Cohomology of Z/n on F_p^k with generator acting by T, from the norm and T - 1."""
    k = len(T)
    Tm = np.array(T) % p
    powers = [np.eye(k, dtype=np.int64)]
    for _ in range(n - 1):
        powers.append(powers[-1] @ Tm % p)
    norm = sum(powers) % p
    delta = (Tm - np.eye(k, dtype=np.int64)) % p
    rn, rd = rank_mod_p(norm, p), rank_mod_p(delta, p)
    return (k - rd, k - rn - rd, k - rd - rn)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_trivial_exhaustive(p):
    R = GF(p)
    for n in range(1, 13):
        dims = cohomology_dims(GModule.trivial(FiniteGroup.cyclic(n), R)).dims
        assert dims == _cyclic_oracle([[1]], n, p)
        assert dims == (1, int(n % p == 0), int(n % p == 0))


@pytest.mark.parametrize("p", [3, 5])
def test_cyclic_nontrivial_modules(p):
    R = GF(p)
    for n in range(2, 9):
        G = FiniteGroup.cyclic(n)
        # a unit a with a^n = 1, and the rotation on F_p^n (the regular module)
        for a in range(1, p):
            if pow(a, n, p) == 1:
                M = GModule(G, R, [[[pow(a, g, p)]] for g in range(n)])
                assert cohomology_dims(M).dims == _cyclic_oracle([[a]], n, p)
        rot = np.roll(np.eye(n, dtype=np.int64), 1, axis=0)
        acts = [np.linalg.matrix_power(rot, g) for g in range(n)]
        if n <= 6:
            assert cohomology_dims(GModule(G, R, acts)).dims == _cyclic_oracle(rot, n, p)


def test_budget():
    with pytest.raises(BudgetExceeded):
        cohomology_dims(GModule.trivial(named_group("S4"), F3, 4), budget=1000)


def test_rep_tangent_examples():
    assert rep_tangent_dim(s3_standard(F5)) == 0
    assert rep_tangent_dim(Representation.trivial(FiniteGroup.cyclic(3), GroupKind("GL", 1), F3)) == 1
    for name in ("Z2", "Z4", "Q8", "S3"):
        for item in corpus_items(name, "GL", 2, 3) + corpus_items(name, "GL", 2, 5):
            if corpus_group(name).order % item.ring.p:
                assert cohomology_dims(ad_module(item.rep)).dims[1:] == (0, 0)


def test_h0_is_centralizer_dimension():
    for name in CORPUS_GROUPS:
        for flavor, n, q in [("GL", 2, 2), ("GL", 2, 3), ("Sp", 1, 3)]:
            for item in corpus_items(name, flavor, n, q):
                h0 = cohomology_dims(ad_module(item.rep), max_degree=0).h0
                assert h0 == centralizer_algebra_dim(item.rep)
                # count commuting matrices directly: the centralizer has q^h0 points
                R = item.ring
                mats = all_matrices(R, 2)
                ok = np.ones(len(mats), dtype=bool)
                for g in item.rep.group.generators:
                    A = item.rep.images[g]
                    ok &= np.all(la.matmul(R, mats, A) == la.matmul(R, A, mats), axis=(-1, -2))
                assert ok.sum() == q ** h0


# -- centralizers ---------------------------------------------------------------------


def test_centralizer_examples():
    Z2 = FiniteGroup.cyclic(2)
    triv = Representation.trivial(Z2, GroupKind("GL", 2), F3)
    assert centralizer_points(triv).count == 48
    irr = next(it.rep for it in corpus_items("Q8", "GL", 2, 3) if it.semisimple
               and centralizer_algebra_dim(it.rep) == 1)
    rep = centralizer_points(irr)
    assert rep.count == 2 and rep.adjoint_trivial
    q8 = centralizer_points(q8_symplectic(F3))
    assert q8.count == 2 and q8.adjoint_trivial
    assert sorted(x.tolist() for x in q8.elements) == [[[1, 0], [0, 1]], [[2, 0], [0, 2]]]


# -- rank one pseudo-deformations ---------------------------------------------------


def test_gl1_examples():
    assert gl1_pseudo_tangent(FiniteGroup.trivial(), 5) == 0
    assert gl1_pseudo_tangent(FiniteGroup.cyclic(3), 3) == 1
    assert gl1_pseudo_tangent(FiniteGroup.cyclic(2), 3) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_gl1_matches_h1(p):
    groups = [corpus_group(n) for n in CORPUS_GROUPS] + [named_group("D4"), FiniteGroup.cyclic(6)]
    for G in groups:
        h1 = cohomology_dims(GModule.trivial(G, GF(p)), max_degree=1).h1
        assert gl1_pseudo_tangent(G, p) == h1


def test_gl1_count_is_hom_count():
    # characters into 1 + eps F_p are homomorphisms to (F_p, +): p^(rank of the p-part of G^ab)
    for G, p, expected in [(named_group("Q8"), 2, 2), (named_group("S3"), 2, 1), (named_group("S3"), 3, 0),
                           (FiniteGroup.cyclic(4).direct_product(FiniteGroup.cyclic(2)), 2, 2)]:
        assert gl1_pseudo_tangent(G, p) == expected


def test_module_json():
    M = ad_module(q8_symplectic(F3), "sp")
    data = M.to_json()
    assert data["dim"] == 3 and len(data["generators"]) == 2
    assert all(len(row) == 3 for g in data["generators"] for row in g)


def test_invariants_basis():
    M = ad_module(s3_standard(F5))
    inv = M.invariants()
    assert inv.shape[1] == 1
    for g in range(6):
        assert np.array_equal(la.matmul(F5, M.action[g], inv), inv)
