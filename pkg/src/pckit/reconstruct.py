"""Brute-force reconstruction at desk scale.

Conjugacy of representations is decided by searching ``G^0(F_{q^k})``;
semisimplification is computed from Jordan-Hölder factors found by exhaustive
subspace enumeration; symplectic representations are split into orthogonal
summands of irreducible or pair type.

Representations act on column vectors.  A subspace is stored as the rows of
a matrix in reduced row echelon form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .coeffring import RingSpec, embed_codes, extension_spec
from .errors import (
    BudgetExceeded,
    CharTwo,
    IncompatibleContexts,
    NotSemisimple,
    SearchSpaceTooLarge,
    UnsupportedFlavor,
    WrongKind,
)
from .groups import Representation
from .matgroups import GroupKind, J_matrix, MatElem, enumerate_group, member_mask
from .pseudochar import sp_interleave

DEFAULT_SEARCH_CAP = 10**6
DEFAULT_SUBSPACE_BUDGET = 10**6
_CHUNK = 1 << 15


def _coeff_digits(Q: int, r: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, r), dtype=np.int64)
    for k in range(r - 1, -1, -1):
        out[:, k] = idx % Q
        idx //= Q
    return out


# -- conjugacy ------------------------------------------------------------------------


@dataclass
class ConjugacyResult:
    conjugator: MatElem | None
    ext_degree: int | None
    searched_ext_degree: int
    candidates: int = 0

    def __bool__(self):
        return self.conjugator is not None

    def to_json(self) -> dict:
        out = {"conjugate": bool(self), "searched_ext_degree": self.searched_ext_degree,
               "candidates": self.candidates}
        if self:
            out["ext_degree"] = self.ext_degree
            out["conjugator"] = self.conjugator.to_json()
        return out


def _gen_images(rho: Representation, k: int):
    gens = rho.group.generators
    imgs = rho.images[gens] if gens else rho.images[:1]
    if k > 1:
        imgs = embed_codes(rho.ring, imgs, k)
    return imgs


def intertwiner_space(R: RingSpec, A, B) -> np.ndarray:
    """Basis of ``{X : X A_s = B_s X for all s}`` as rows of flattened ``d x d`` matrices."""
    A = la.asmat(A)
    B = la.asmat(B)
    d = A.shape[-1]
    eye = np.eye(d, dtype=np.int64)
    blocks = []
    for a, b in zip(A, B):
        # row-major vec: vec(XA) = (I kron A^T) vec X, vec(BX) = (B kron I) vec X
        blocks.append(R.sub(la.kron(R, eye, a.T), la.kron(R, b, eye)))
    return la.nullspace(R, np.concatenate(blocks, axis=0)).T


def _same_context(rho: Representation, rho2: Representation) -> int:
    """Check compatibility; return ``j`` with ``rho2`` defined over ``F_{q^j}``."""
    if rho.group != rho2.group:
        raise IncompatibleContexts("representations of different groups")
    if rho.d != rho2.d:
        raise IncompatibleContexts("representations of different sizes")
    if rho.ring == rho2.ring:
        return 1
    R, R2 = rho.ring, rho2.ring
    if R.is_field and R2.is_field and R2.p == R.p and R2.f % R.f == 0:
        j = R2.f // R.f
        if extension_spec(R, j) == R2:
            return j
    raise IncompatibleContexts(f"{R2!r} is not an extension of {R!r}")


def _images_at(rho: Representation, base: RingSpec, j: int, k: int):
    """Generator images of ``rho`` (defined over ``F_{q^j}``) embedded in ``F_{q^k}``."""
    imgs = _gen_images(rho, 1)
    if k == j:
        return imgs
    if j == 1:
        return embed_codes(base, imgs, k)
    return embed_codes(rho.ring, imgs, k // j)


def brute_conjugacy(rho: Representation, rho2: Representation, ext_degree: int = 2,
                    kind: GroupKind | None = None, cap: int = DEFAULT_SEARCH_CAP,
                    rng=None) -> ConjugacyResult:
    """Find ``g`` in ``G^0(F_{q^k})`` with ``g rho g^-1 = rho2`` for the least ``k <= ext_degree``.

    The search runs over the space of intertwiners ``g rho(s) = rho2(s) g``
    (a linear condition) and keeps the members of ``G^0``.  When that space has
    more than ``cap`` points, ``cap`` random points are tried instead and
    :class:`SearchSpaceTooLarge` is raised if none works.
    """
    j = _same_context(rho, rho2)
    kind = kind or rho.kind
    g0 = kind.identity_component
    R = rho.ring
    if not R.is_field:
        return naive_conjugacy(rho, rho2, kind=kind, cap=cap)
    rng = rng if rng is not None else np.random.default_rng(0)
    d = rho.d
    total = 0
    for k in range(1, ext_degree + 1):
        if k % j:
            continue  # rho2 is not defined over F_{q^k}
        Rk = extension_spec(R, k) if k > 1 else R
        A, B = _images_at(rho, R, 1, k), _images_at(rho2, R, j, k)
        basis = intertwiner_space(Rk, A, B)
        r = basis.shape[0]
        if r == 0:
            continue
        if np.array_equal(A, B):
            total += 1
            return ConjugacyResult(MatElem(Rk, np.eye(d, dtype=np.int64)), k, ext_degree, total)
        Q = Rk.size
        space = Q ** r
        sampled = space > cap
        n_cand = cap if sampled else space
        for start in range(0, n_cand, _CHUNK):
            stop = min(start + _CHUNK, n_cand)
            if sampled:
                coeffs = rng.integers(0, Q, size=(stop - start, r))
            else:
                coeffs = _coeff_digits(Q, r, start, stop)
            X = la.span_combinations(Rk, basis, coeffs).reshape(-1, d, d)
            mask, _ = member_mask(g0, Rk, X)
            total += stop - start
            if mask.any():
                g = X[int(np.flatnonzero(mask)[0])]
                return ConjugacyResult(MatElem(Rk, g), k, ext_degree, total)
        if sampled:
            raise SearchSpaceTooLarge(
                f"intertwiner space of size {Q}^{r} over {Rk!r}: {cap} samples found no conjugator")
    return ConjugacyResult(None, None, ext_degree, total)


def naive_conjugacy(rho: Representation, rho2: Representation, ext_degree: int = 1,
                    kind: GroupKind | None = None, cap: int = DEFAULT_SEARCH_CAP) -> ConjugacyResult:
    """Reference search: scan every element of ``G^0(F_{q^k})``."""
    j = _same_context(rho, rho2)
    kind = kind or rho.kind
    g0 = kind.identity_component
    total = 0
    for k in range(1, ext_degree + 1):
        if k % j:
            continue
        Rk = extension_spec(rho.ring, k) if k > 1 else rho.ring
        A, B = _images_at(rho, rho.ring, 1, k), _images_at(rho2, rho.ring, j, k)
        elems = enumerate_group(g0, Rk, cap)
        total += len(elems)
        lhs = la.matmul(Rk, elems[:, None], A[None])
        rhs = la.matmul(Rk, B[None], elems[:, None])
        ok = np.all(lhs == rhs, axis=(-1, -2, -3))
        if ok.any():
            return ConjugacyResult(MatElem(Rk, elems[int(np.flatnonzero(ok)[0])]), k, ext_degree, total)
    return ConjugacyResult(None, None, ext_degree, total)


# -- subspaces ---------------------------------------------------------------------------


def gaussian_binomial(q: int, n: int, k: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def iter_subspaces(R: RingSpec, d: int, k: int, rng=None):
    """Yield ``(pivots, batch)`` where ``batch`` is ``(C, k, d)`` of RREF bases.

    Every ``k``-dimensional subspace of ``R^d`` appears exactly once.  With
    ``rng`` the visiting order is shuffled.
    """
    patterns = list(itertools.combinations(range(d), k))
    if rng is not None:
        rng.shuffle(patterns)
    Q = R.size
    for pivots in patterns:
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, d) if j not in pivots]
        count = Q ** len(free)
        order = range(0, count, _CHUNK)
        starts = list(order)
        if rng is not None:
            rng.shuffle(starts)
        for start in starts:
            stop = min(start + _CHUNK, count)
            coeffs = _coeff_digits(Q, len(free), start, stop)
            if rng is not None:
                coeffs = coeffs[rng.permutation(coeffs.shape[0])]
            batch = np.zeros((coeffs.shape[0], k, d), dtype=np.int64)
            for i, p in enumerate(pivots):
                batch[:, i, p] = 1
            for c, (i, j) in enumerate(free):
                batch[:, i, j] = coeffs[:, c]
            yield pivots, batch


def invariant_mask(R: RingSpec, batch, pivots, gens) -> np.ndarray:
    """Which RREF bases span subspaces stable under every matrix in ``gens``."""
    pivots = list(pivots)
    ok = np.ones(batch.shape[0], dtype=bool)
    for A in gens:
        U = la.matmul(R, batch, la.transpose(A))  # rows are A b_i
        resid = R.sub(U, la.matmul(R, U[:, :, pivots], batch))
        ok &= ~np.any(resid, axis=(-1, -2))
    return ok


def _check_budget(R: RingSpec, d: int, dims, budget: int):
    total = sum(gaussian_binomial(R.size, d, k) for k in dims)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces of {R!r}^{d} exceed the budget {budget}")


def invariant_subspaces(rho: Representation, k: int, budget: int = DEFAULT_SUBSPACE_BUDGET):
    """All ``k``-dimensional invariant subspaces, as an ``(C, k, d)`` RREF array."""
    R = rho.ring
    la._require_field(R)
    _check_budget(R, rho.d, [k], budget)
    gens = _gen_images(rho, 1)
    found = []
    for pivots, batch in iter_subspaces(R, rho.d, k):
        mask = invariant_mask(R, batch, pivots, gens)
        if mask.any():
            found.append(batch[mask])
    if not found:
        return np.zeros((0, k, rho.d), dtype=np.int64)
    return np.concatenate(found)


def find_invariant_subspace(rho: Representation, dims=None, rng=None,
                            budget: int = DEFAULT_SUBSPACE_BUDGET):
    """First invariant subspace with dimension in ``dims`` (default: all proper ones)."""
    R = rho.ring
    la._require_field(R)
    d = rho.d
    dims = list(range(1, d)) if dims is None else list(dims)
    _check_budget(R, d, dims, budget)
    gens = _gen_images(rho, 1)
    if rng is not None:
        rng.shuffle(dims)
    for k in dims:
        for pivots, batch in iter_subspaces(R, d, k, rng):
            mask = invariant_mask(R, batch, pivots, gens)
            if mask.any():
                hits = np.flatnonzero(mask)
                pick = hits[0] if rng is None else hits[int(rng.integers(hits.size))]
                return batch[pick], list(pivots)
    return None


# -- Jordan-Hölder --------------------------------------------------------------------------


def _gl(rho: Representation) -> Representation:
    if rho.kind.flavor == "GL":
        return rho
    return rho.with_kind(GroupKind("GL", rho.d), check=False)


def split_by_subspace(rho: Representation, basis, pivots):
    """``(sub, quotient)`` representations for the invariant subspace spanned by ``basis`` rows."""
    R = rho.ring
    d = rho.d
    k = len(pivots)
    P = np.zeros((d, d), dtype=np.int64)
    P[:, :k] = basis.T
    rest = [j for j in range(d) if j not in pivots]
    for c, j in enumerate(rest):
        P[j, k + c] = 1
    conj = la.matmul(R, la.matmul(R, la.inverse(R, P), rho.images), P)
    if np.any(conj[:, k:, :k]):
        raise ValueError("subspace is not invariant")
    sub = Representation(rho.group, GroupKind("GL", k), R, conj[:, :k, :k], check=False)
    quo = Representation(rho.group, GroupKind("GL", d - k), R, conj[:, k:, k:], check=False)
    return sub, quo


def jordan_holder(rho: Representation, rng=None, budget: int = DEFAULT_SUBSPACE_BUDGET) -> list:
    """Composition factors of ``rho`` (as GL representations), with multiplicity."""
    rho = _gl(rho)
    found = find_invariant_subspace(rho, rng=rng, budget=budget)
    if found is None:
        return [rho]
    sub, quo = split_by_subspace(rho, *found)
    return jordan_holder(sub, rng, budget) + jordan_holder(quo, rng, budget)


def factor_key(rho: Representation) -> bytes:
    """Isomorphism-class key for an irreducible factor: its characteristic polynomials."""
    return bytes([rho.d]) + la.sigma(rho.ring, rho.images).tobytes()


def semisimplify(rho: Representation, rng=None, budget: int = DEFAULT_SUBSPACE_BUDGET) -> Representation:
    """Block-diagonal sum of the Jordan-Hölder factors (a GL representation)."""
    factors = jordan_holder(rho, rng, budget)
    imgs = la.block_diag(*(f.images for f in factors))
    return Representation(rho.group, GroupKind("GL", rho.d), rho.ring, imgs, check=False)


def _check_flavor(rho: Representation, kind: GroupKind):
    if kind.flavor in ("O", "SO", "GO"):
        raise UnsupportedFlavor(f"complete reducibility for {kind} is not implemented")
    if kind.flavor in ("Sp", "GSp") and rho.ring.p == 2:
        raise UnsupportedFlavor("the symplectic criterion needs odd characteristic")


def is_completely_reducible(rho: Representation, kind: GroupKind | None = None,
                            budget: int = DEFAULT_SUBSPACE_BUDGET,
                            cap: int = DEFAULT_SEARCH_CAP) -> bool:
    """GL-semisimplicity: ``rho`` is GL-conjugate to its semisimplification.

    For Sp and GSp in odd characteristic this is also the symplectic notion.
    """
    kind = kind or rho.kind
    _check_flavor(rho, kind)
    g = _gl(rho)
    ss = semisimplify(g, budget=budget)
    return bool(brute_conjugacy(g, ss, ext_degree=1, cap=cap))


def is_semisimple_by_complements(rho: Representation, budget: int = DEFAULT_SUBSPACE_BUDGET) -> bool:
    """Independent test: every invariant subspace has an invariant complement."""
    R = rho.ring
    d = rho.d
    for k in range(1, d):
        subs = invariant_subspaces(rho, k, budget)
        if subs.shape[0] == 0:
            continue
        comps = invariant_subspaces(rho, d - k, budget)
        for W in subs:
            stacked = np.concatenate([np.broadcast_to(W, (comps.shape[0], k, d)), comps], axis=1)
            if not any(la.rank(R, s) == d for s in stacked):
                return False
    return True


# -- symplectic decomposition ---------------------------------------------------------------

IRREDUCIBLE_SYMPLECTIC = "irreducible-symplectic"
PAIR_TYPE = "pair-type"


@dataclass
class Summand:
    tag: str
    rep: Representation  # Sp_2k representation in a symplectic basis of the summand
    basis: np.ndarray  # ambient columns (2n x 2k), a symplectic basis
    W: Representation | None = None  # the isotropic irreducible piece for pair type

    def to_json(self) -> dict:
        R = self.rep.ring
        out = {"tag": self.tag, "dim": self.rep.d,
               "basis": [[R.payload(x) for x in row] for row in self.basis]}
        if self.W is not None:
            out["W_dim"] = self.W.d
        return out


@dataclass
class SymplecticDecomposition:
    summands: list
    basis: np.ndarray  # symplectic change of basis P with P^-1 rho P = reassemble()
    source: Representation = field(repr=False)

    @property
    def tags(self) -> list:
        return [s.tag for s in self.summands]

    def reassemble(self) -> Representation:
        return reassemble(self.summands)


def _omega(R: RingSpec, J, x, y):
    return la.dot(R, x, la.matvec(R, J, y))


def symplectic_basis(R: RingSpec, vectors, J) -> tuple[np.ndarray, np.ndarray]:
    """Symplectic Gram-Schmidt: ``(E, F)`` column blocks with ``<e_i, f_j> = delta_ij``.

    ``vectors`` are columns spanning a subspace on which the form is nondegenerate.
    """
    vecs = [v.copy() for v in la.asmat(vectors).T]
    es, fs = [], []
    while vecs:
        e = vecs.pop(0)
        if not e.any():
            continue
        partner = None
        for idx, v in enumerate(vecs):
            w = _omega(R, J, e, v)
            if w:
                partner = idx
                break
        if partner is None:
            raise ValueError("form is degenerate on the given span")
        f = R.mul(R.inv(w), vecs.pop(partner))
        es.append(e)
        fs.append(f)
        # x -> x + <x, e> f - <x, f> e
        for idx, x in enumerate(vecs):
            a = _omega(R, J, x, e)
            b = _omega(R, J, x, f)
            vecs[idx] = R.sub(R.add(x, R.mul(a, f)), R.mul(b, e))
    d = J.shape[0]
    if not es:
        return np.zeros((d, 0), dtype=np.int64), np.zeros((d, 0), dtype=np.int64)
    return np.stack(es, axis=1), np.stack(fs, axis=1)


def _restrict_to_basis(R: RingSpec, images, S, n_sub: int) -> np.ndarray:
    """Matrices of ``rho`` on the span of the symplectic basis ``S``: ``J_k^-1 S^T J rho S``."""
    d = S.shape[0]
    J = J_matrix(R, d // 2)
    Jk_inv = R.neg(J_matrix(R, n_sub))
    left = la.matmul(R, Jk_inv, la.matmul(R, S.T, J))
    out = la.matmul(R, left, la.matmul(R, images, S))
    if not np.array_equal(la.matmul(R, images, S), la.matmul(R, S, out)):
        raise ValueError("basis does not span an invariant subspace")
    return out


def _decompose(rho: Representation, budget: int) -> list:
    R = rho.ring
    n = rho.d // 2
    if n == 0:
        return []
    J = J_matrix(R, n)
    # an invariant subspace of least dimension is irreducible
    hit = None
    for k in range(1, 2 * n):
        hit = find_invariant_subspace(rho, dims=[k], budget=budget)
        if hit is not None:
            break
    if hit is None:
        return [Summand(IRREDUCIBLE_SYMPLECTIC, rho, np.eye(2 * n, dtype=np.int64))]
    B, _ = hit
    gram = la.matmul(R, la.matmul(R, B, J), B.T)
    if la.rank(R, gram) == k:
        E, F = symplectic_basis(R, B.T, J)
        S = np.concatenate([E, F], axis=1)
        sub = Representation(rho.group, GroupKind("Sp", k // 2), R,
                             _restrict_to_basis(R, rho.images, S, k // 2), check=False)
        first = Summand(IRREDUCIBLE_SYMPLECTIC, sub, S)
        perp_rows = B
    else:
        if np.any(gram):
            raise ValueError("irreducible invariant subspace with degenerate, nonzero form")
        partner = None
        for B2 in invariant_subspaces(rho, k, budget):
            if np.any(la.matmul(R, la.matmul(R, B2, J), B2.T)):
                continue
            pairing = la.matmul(R, la.matmul(R, B, J), B2.T)
            if la.rank(R, pairing) == k:
                partner = (B2, pairing)
                break
        if partner is None:
            raise NotSemisimple("isotropic invariant subspace without an isotropic invariant partner")
        B2, pairing = partner
        E = B.T
        F = la.matmul(R, B2.T, la.inverse(R, pairing))
        S = np.concatenate([E, F], axis=1)
        sub_imgs = _restrict_to_basis(R, rho.images, S, k)
        W = Representation(rho.group, GroupKind("GL", k), R, sub_imgs[:, :k, :k], check=False)
        sub = Representation(rho.group, GroupKind("Sp", k), R, sub_imgs, check=False)
        first = Summand(PAIR_TYPE, sub, S, W)
        perp_rows = np.concatenate([B, B2], axis=0)
    rest = []
    m = n - first.rep.d // 2
    if m:
        perp = la.nullspace(R, la.matmul(R, perp_rows, J))
        E, F = symplectic_basis(R, perp, J)
        C = np.concatenate([E, F], axis=1)
        sub_imgs = _restrict_to_basis(R, rho.images, C, m)
        comp = Representation(rho.group, GroupKind("Sp", m), R, sub_imgs, check=False)
        for s in _decompose(comp, budget):
            rest.append(Summand(s.tag, s.rep, la.matmul(R, C, s.basis), s.W))
    return [first] + rest


def reassemble(summands) -> Representation:
    """Orthogonal sum of the summand representations in the global J-basis."""
    rep = summands[0].rep
    imgs, n = rep.images, rep.d // 2
    for s in summands[1:]:
        b = s.rep.d // 2
        imgs = sp_interleave(imgs, s.rep.images, n, b)
        n += b
    return Representation(rep.group, GroupKind("Sp", n), rep.ring, imgs, check=False)


def symplectic_decompose(rho: Representation, budget: int = DEFAULT_SUBSPACE_BUDGET,
                         check_semisimple: bool = True) -> SymplecticDecomposition:
    """Split a semisimple ``Sp_2n`` representation into orthogonal summands."""
    if rho.kind.flavor != "Sp":
        raise WrongKind(f"symplectic_decompose needs an Sp representation, got {rho.kind}")
    R = rho.ring
    if R.p == 2:
        raise CharTwo("symplectic decomposition needs odd characteristic")
    if check_semisimple and not is_completely_reducible(rho, budget=budget):
        raise NotSemisimple("representation is not semisimple")
    summands = _decompose(rho, budget)
    es = [s.basis[:, : s.rep.d // 2] for s in summands]
    fs = [s.basis[:, s.rep.d // 2:] for s in summands]
    P = np.concatenate(es + fs, axis=1)
    return SymplecticDecomposition(summands, P, rho)
