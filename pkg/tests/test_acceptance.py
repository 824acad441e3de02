"""Acceptance criteria, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line with its running time.  The file can
also be run directly: ``python3 tests/test_acceptance.py``.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import leibniz_det  # noqa: E402
from pckit import (GF, FiniteGroup, GModule, RawTable, Representation, Zmod, ad_module,  # noqa: E402
                   brute_conjugacy, cohomology_dims, det_law_eval, emerson_lambda, equals,
                   from_rep, gl1_pseudo_tangent, semisimplify, sp_projection,
                   symplectic_decompose, teichmueller, verify_axioms)
from pckit import linalg as la  # noqa: E402
from pckit.cohomology import centralizer_algebra_dim, lie_algebra_dim  # noqa: E402
from pckit.corpus import (CORPUS_GROUPS, CORPUS_TARGETS, corpus_group, corpus_items,  # noqa: E402
                          full_corpus, matrix_group, permutation_rep, q8_symplectic, regular_rep)
from pckit.matgroups import GroupKind, J_matrix, all_matrices, member_mask  # noqa: E402
from pckit.pseudochar import group_algebra_mul, mutate, sp_interleave  # noqa: E402
from pckit.reconstruct import IRREDUCIBLE_SYMPLECTIC, PAIR_TYPE  # noqa: E402
from pckit.words import FreeHom, Word, compose, decompose_invgen, factor_is_valid  # noqa: E402

CRITERIA = []


def criterion(number, title):
    def register(fn):
        CRITERIA.append((number, title, fn))
        return fn
    return register


def _gl(rho):
    return rho.with_kind(GroupKind("GL", rho.d), check=False)


# -- 1 --------------------------------------------------------------------------------


@criterion(1, "fingerprint equality <=> conjugacy within extension degree 2")
def reconstruction_equivalence():
    pairs = mismatches = merged = 0
    for name in CORPUS_GROUPS:
        for flavor, n, q in CORPUS_TARGETS:
            items = [it for it in corpus_items(name, flavor, n, q) if it.semisimple]
            for i, a in enumerate(items):
                for b in items[i:]:
                    eq = equals(from_rep(a.rep), from_rep(b.rep))
                    res = brute_conjugacy(a.rep, b.rep, ext_degree=2)
                    conj = bool(res)
                    pairs += 1
                    merged += conj and a is not b
                    if eq != conj:
                        mismatches += 1
                        print(f"  mismatch: {a.label} vs {b.label}: equal={eq} conjugate={conj}")
    return mismatches == 0, (f"{pairs} pairs, {mismatches} mismatches; "
                             f"{merged} distinct classes conjugate after extension")


# -- 2 --------------------------------------------------------------------------------


@criterion(2, "from_rep(rho) = from_rep(semisimplify(rho)) on the whole corpus")
def semisimplification_invariance():
    items = full_corpus()
    bad = [it.label for it in items if not equals(from_rep(_gl(it.rep)), from_rep(semisimplify(it.rep)))]
    n_non = sum(not it.semisimple for it in items)
    return not bad, f"{len(items)} representations ({n_non} not semisimple), {len(bad)} failures"


# -- 3 --------------------------------------------------------------------------------


def _audit_reps():
    reps = [it.rep for it in full_corpus()]
    reps.append(regular_rep(FiniteGroup.cyclic(3), GF(2)))
    reps.append(permutation_rep(FiniteGroup.symmetric(3), GF(5)))
    reps.append(q8_symplectic(GF(5)))
    return reps


@criterion(3, "axioms pass on representation tables (M, L <= 3) and catch 500 mutations")
def axiom_audit():
    rng = np.random.default_rng(2024)
    tables = []
    failures = 0
    for rho in _audit_reps():
        for M in (1, 2, 3):
            for L in (1, 2, 3):
                T = RawTable.build(rho, M=M, L=L)
                if not verify_axioms(T):
                    failures += 1
                if M == 3 and L == 3:
                    tables.append(T)
    missed = 0
    for _ in range(500):
        T = tables[int(rng.integers(len(tables)))]
        bad = mutate(T, int(rng.integers(T.entry_count())), rng)
        if verify_axioms(bad):
            missed += 1
    return failures == 0 and missed == 0, (
        f"{len(tables) * 9} tables, {failures} false alarms; 500 mutations, {missed} undetected")


# -- 4 --------------------------------------------------------------------------------


@criterion(4, "Lambda_1 = trace, Lambda_d = det, determinant law multiplicative and homogeneous")
def emerson_bridge():
    rng = np.random.default_rng(7)
    bad = 0
    count = 0
    for it in full_corpus():
        theta = from_rep(_gl(it.rep))
        R, d, N = theta.ring, theta.d, theta.group.order
        q = R.size
        for g in range(N):
            M = it.rep.images[g]
            if emerson_lambda(theta, 1, g).code != int(np.trace(M)) % q:
                bad += 1
            if emerson_lambda(theta, d, g).code != leibniz_det(M.tolist(), q):
                bad += 1
        r = rng.integers(0, q, size=(200, N))
        s = rng.integers(0, q, size=(200, N))
        c = rng.integers(0, q, size=200)
        rs = group_algebra_mul(theta.group, R, r, s)
        Dr, Ds, Drs = (det_law_eval(theta, x) for x in (r, s, rs))
        Dcr = det_law_eval(theta, R.mul(c[:, None], r))
        bad += int(np.sum(Drs != R.mul(Dr, Ds)))
        bad += int(np.sum(Dcr != R.mul(R.power(c, d), Dr)))
        count += 1
    return bad == 0, f"{count} representations, 200 pairs each, {bad} failures"


# -- 5 --------------------------------------------------------------------------------


def _agree_on_tuples(alpha, beta, G):
    n = alpha.n
    vals = [g.ravel() for g in np.meshgrid(*([np.arange(G.order)] * n), indexing="ij")]
    for wa, wb in zip(alpha.images, beta.images):
        a = np.broadcast_to(wa.evaluate(vals, G), vals[0].shape)
        b = np.broadcast_to(wb.evaluate(vals, G), vals[0].shape)
        if not np.array_equal(a, b):
            return False
    return True


def _random_freehom(rng, max_rank=3, max_len=4):
    m, n = (int(x) for x in rng.integers(1, max_rank + 1, size=2))
    images = []
    for _ in range(m):
        length = int(rng.integers(0, max_len + 1))
        letters = tuple((int(rng.integers(1, n + 1)), int(rng.choice([1, -1]))) for _ in range(length))
        images.append(Word(letters))
    return FreeHom(m, n, tuple(images))


@criterion(5, "word identities and 100 random decompositions agree on all tuples")
def word_calculus():
    groups = (FiniteGroup.symmetric(3), FiniteGroup.quaternion())
    lhs = FreeHom.from_strings(["x1", "x2^-1"])
    rhs = (FreeHom.from_strings(["x1*x2^-1", "x2"]) @ FreeHom.from_strings(["x1*x2", "x1"])
           @ FreeHom.from_strings(["x1", "x1^-1*x2"]))
    inv_lhs = FreeHom.from_strings(["x1^-1"])
    inv_rhs = (FreeHom(2, 1, (Word(), Word.letter(1))) @ lhs @ FreeHom(1, 2, (Word.letter(2),)))
    ok = lhs == rhs and inv_lhs == inv_rhs
    ok &= all(_agree_on_tuples(a, b, G) for G in groups for a, b in ((lhs, rhs), (inv_lhs, inv_rhs)))
    rng = np.random.default_rng(5)
    bad = 0
    for _ in range(100):
        alpha = _random_freehom(rng)
        factors = decompose_invgen(alpha)
        comp = compose(factors)
        if not (comp == alpha and all(factor_is_valid(f) for f in factors)
                and all(_agree_on_tuples(alpha, comp, G) for G in groups)):
            bad += 1
    return ok and bad == 0, f"identities {'hold' if ok else 'FAIL'}; 100 random, {bad} failures"


# -- 6 --------------------------------------------------------------------------------


@criterion(6, "dim sp_2 = 3, dim sp_4 = 10; projection idempotent, equivariant, identity on sp")
def lie_projection():
    R = GF(3)
    dims = (lie_algebra_dim(GF(5), 2, "sp"), lie_algebra_dim(GF(5), 4, "sp"))
    J = J_matrix(R, 1)
    mats = all_matrices(R, 2)
    pi = sp_projection(R, mats, 1)
    idem = np.array_equal(sp_projection(R, pi, 1), pi)
    in_sp = ~np.any(R.add(la.matmul(R, la.transpose(mats), J), la.matmul(R, J, mats)), axis=(-1, -2))
    fixes = np.array_equal(pi[in_sp], mats[in_sp]) and int(in_sp.sum()) == 3 ** 3
    G = matrix_group("Sp", 1, 3).elements
    Ginv = la.inverse(R, G)
    lhs = sp_projection(R, la.matmul(R, la.matmul(R, G[:, None], mats[None]), Ginv[:, None]), 1)
    rhs = la.matmul(R, la.matmul(R, G[:, None], pi[None]), Ginv[:, None])
    equi = np.array_equal(lhs, rhs)
    ok = dims == (3, 10) and idem and fixes and equi
    return ok, (f"dims {dims}; idempotent={idem} identity-on-sp={fixes} "
                f"equivariant={equi} over {len(G)} x {len(mats)}")


# -- 7 --------------------------------------------------------------------------------


@criterion(7, "cohomology values and h0 = centralizer dimension on the corpus")
def cohomology_values():
    F3 = GF(3)
    vals = (
        cohomology_dims(GModule.trivial(FiniteGroup.cyclic(3), F3)).dims == (1, 1, 1),
        cohomology_dims(GModule.trivial(FiniteGroup.cyclic(2), F3)).dims == (1, 0, 0),
        all(cohomology_dims(GModule.trivial(FiniteGroup.trivial(), GF(p), k)).dims == (k, 0, 0)
            for p in (2, 3, 5) for k in (1, 2, 4)),
    )
    items = full_corpus()
    bad = sum(cohomology_dims(ad_module(it.rep), max_degree=0).h0 != centralizer_algebra_dim(it.rep)
              for it in items)
    return all(vals) and bad == 0, f"values {'match' if all(vals) else 'DIFFER'}; h0 on {len(items)} reps, {bad} failures"


# -- 8 --------------------------------------------------------------------------------


@criterion(8, "rank-1 pseudo-deformation tangent = h1 for corpus groups, p in {2,3,5}")
def rank_one_tangent():
    rows = []
    for name in CORPUS_GROUPS:
        G = corpus_group(name)
        for p in (2, 3, 5):
            enum = gl1_pseudo_tangent(G, p)
            h1 = cohomology_dims(GModule.trivial(G, GF(p)), max_degree=1).h1
            rows.append((name, p, enum, h1))
    bad = [r for r in rows if r[2] != r[3]]
    return not bad, f"{len(rows)} cases, {len(bad)} mismatches"


# -- 9 --------------------------------------------------------------------------------


def _q8_with_pair():
    """Orthogonal sum of the Q_8 representation and diag(chi, chi^-1) for chi of order 3,
    as a representation of Q_8 x Z/3 into Sp_4(F_7)."""
    F7 = GF(7)
    Q8, Z3 = FiniteGroup.quaternion(), FiniteGroup.cyclic(3)
    G = Q8.direct_product(Z3)
    left, right = G.projections(Q8, Z3)
    q8 = q8_symplectic(F7).pullback(G, left)
    pair = Representation.from_generators(Z3, GroupKind("Sp", 1), F7, [[[2, 0], [0, 4]]]).pullback(G, right)
    imgs = sp_interleave(q8.images, pair.images, 1, 1)
    return Representation(G, GroupKind("Sp", 2), F7, imgs)


@criterion(9, "symplectic decomposition of the three examples, reassembly Sp-conjugate")
def symplectic_structure():
    F7 = GF(7)
    cases = [
        ("pair", Representation.from_generators(FiniteGroup.cyclic(3), GroupKind("Sp", 1), F7,
                                                [[[2, 0], [0, 4]]]), [PAIR_TYPE]),
        ("Q8", q8_symplectic(GF(3)), [IRREDUCIBLE_SYMPLECTIC]),
        ("sum", _q8_with_pair(), sorted([PAIR_TYPE, IRREDUCIBLE_SYMPLECTIC])),
    ]
    out = []
    ok = True
    for label, rho, expected in cases:
        dec = symplectic_decompose(rho)
        back = dec.reassemble()
        tags_ok = sorted(dec.tags) == expected
        member = bool(member_mask(back.kind, back.ring, back.images)[0].all())
        conj = bool(brute_conjugacy(rho, back, ext_degree=2))
        ok &= tags_ok and member and conj
        out.append(f"{label}: {'+'.join(dec.tags)} conj={conj}")
    return ok, "; ".join(out)


# -- 10 -------------------------------------------------------------------------------


def _prime_powers(limit):
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
              83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167,
              173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263,
              269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331, 337):
        r = 1
        while p ** r <= limit:
            yield p, r
            r += 1


@criterion(10, "Teichmueller lifts: w(2) = 8 in Z/9, w(2) = 7 in Z/25, multiplicative torsion")
def teichmueller_lifts():
    values = (teichmueller(Zmod(3, 2), 2).code, teichmueller(Zmod(5, 2), 2).code)
    bad = 0
    rings = 0
    for p, r in _prime_powers(343):
        R = Zmod(p, r)
        rings += 1
        lifts = {a: teichmueller(R, a) for a in range(1, p)}
        for a, w in lifts.items():
            if w ** (p - 1) != R(1) or w.code % p != a:
                bad += 1
        for a in range(1, p):
            for b in range(1, p):
                if lifts[a * b % p] != lifts[a] * lifts[b]:
                    bad += 1
    return values == (8, 7) and bad == 0, f"values {values}; {rings} rings, {bad} failures"


# -- runner ---------------------------------------------------------------------------


def _run(number, title, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash counts as a failure
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    secs = time.perf_counter() - t0
    line = f"{'PASS' if ok else 'FAIL'}  {number:>2}. {title} [{detail}] ({secs:.1f}s)"
    return ok, line


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, line = _run(number, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_run(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
