"""The desk-scale corpus: all representations of a few small groups into small
classical groups, up to conjugacy, plus a handful of named representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg as la
from .coeffring import GF, RingSpec
from .groups import FiniteGroup, Representation
from .matgroups import GroupKind, enumerate_group
from .reconstruct import is_completely_reducible

CORPUS_GROUPS = ("Z2", "Z3", "Z4", "S3", "Q8")
CORPUS_TARGETS = (("GL", 2, 2), ("GL", 2, 3), ("GL", 2, 5), ("Sp", 1, 3))


@lru_cache(maxsize=None)
def corpus_group(name: str) -> FiniteGroup:
    if name == "Q8":
        return FiniteGroup.quaternion()
    if name == "S3":
        return FiniteGroup.symmetric(3)
    if name.startswith("Z"):
        return FiniteGroup.cyclic(int(name[1:]))
    raise ValueError(f"{name!r} is not a corpus group")


class MatrixGroup:
    """``kind(R)`` enumerated as a :class:`FiniteGroup` on its elements."""

    def __init__(self, kind: GroupKind, R: RingSpec, cap: int = 10**6):
        self.kind = kind
        self.ring = R
        elems = enumerate_group(kind, R, cap)
        # code order, except that the identity moves to the front
        eye = np.eye(kind.d, dtype=np.int64)
        at = int(np.flatnonzero(np.all(elems == eye, axis=(-1, -2)))[0])
        self.elements = np.concatenate([elems[at:at + 1], elems[:at], elems[at + 1:]])
        keys = self._keys(self.elements)
        self._order = np.argsort(keys)
        self._sorted = keys[self._order]
        prod = la.matmul(R, self.elements[:, None], self.elements[None, :])
        self.group = FiniteGroup(self.index_of(prod), check=False)
        self.size = len(self.elements)

    def _keys(self, mats) -> np.ndarray:
        flat = mats.reshape(mats.shape[:-2] + (-1,))
        out = np.zeros(flat.shape[:-1], dtype=np.int64)
        for k in range(flat.shape[-1]):
            out = out * self.ring.size + flat[..., k]
        return out

    def index_of(self, mats) -> np.ndarray:
        keys = self._keys(la.asmat(mats))
        pos = np.searchsorted(self._sorted, keys)
        pos = np.minimum(pos, len(self._sorted) - 1)
        if not np.all(self._sorted[pos] == keys):
            raise ValueError("matrix is not in the group")
        return self._order[pos]


def _element_orders(G: FiniteGroup) -> np.ndarray:
    n = G.order
    orders = np.zeros(n, dtype=np.int64)
    cur = np.arange(n)
    for k in range(1, n + 1):
        done = (cur == 0) & (orders == 0)
        orders[done] = k
        if np.all(orders):
            break
        cur = G.table[cur, np.arange(n)]
    return orders


def enumerate_homs(group: FiniteGroup, target: MatrixGroup) -> np.ndarray:
    """Every homomorphism ``group -> target`` as an ``(H, order)`` array of target indices."""
    T = target.group
    gens = group.generators
    words = group.word_for_elements()
    torders = _element_orders(T)
    cands = []
    for g in gens:
        o = group.element_order(g)
        cands.append(np.flatnonzero(o % torders == 0))
    if not gens:
        return np.zeros((1, group.order), dtype=np.int64)
    grids = np.meshgrid(*cands, indexing="ij")
    gen_imgs = np.stack([x.ravel() for x in grids], axis=1)  # (C, k)
    img = np.zeros((gen_imgs.shape[0], group.order), dtype=np.int64)
    for e, w in enumerate(words):
        x = np.zeros(gen_imgs.shape[0], dtype=np.int64)
        for k in w:
            x = T.table[x, gen_imgs[:, k]]
        img[:, e] = x
    ok = np.ones(img.shape[0], dtype=bool)
    for x in range(group.order):
        lhs = T.table[img[:, x][:, None], img]  # img(x) img(y)
        rhs = img[:, group.table[x]]
        ok &= np.all(lhs == rhs, axis=1)
    return img[ok]


def orbit_representatives(homs: np.ndarray, conj_group: MatrixGroup, target: MatrixGroup,
                          gens) -> np.ndarray:
    """One homomorphism per conjugacy class (the least under generator-image codes)."""
    if homs.shape[0] == 0:
        return homs
    R = target.ring
    g = conj_group.elements
    ginv = la.inverse(R, g)
    gen_imgs = homs[:, gens]  # (H, k)
    n = target.size
    best = None
    for start in range(0, len(g), 64):
        gs, gi = g[start:start + 64], ginv[start:start + 64]
        mats = target.elements[gen_imgs]  # (H, k, d, d)
        conj = la.matmul(R, la.matmul(R, gs[:, None, None], mats[None]), gi[:, None, None])
        idx = target.index_of(conj)  # (B, H, k)
        code = np.zeros(idx.shape[:2], dtype=np.int64)
        for k in range(idx.shape[2]):
            code = code * n + idx[:, :, k]
        m = code.min(axis=0)
        best = m if best is None else np.minimum(best, m)
    _, first = np.unique(best, return_index=True)
    return homs[np.sort(first)]


@dataclass
class CorpusItem:
    group_name: str
    kind: GroupKind
    ring: RingSpec
    rep: Representation
    semisimple: bool

    @property
    def label(self) -> str:
        gens = self.rep.generator_images()
        return f"{self.group_name}->{self.kind}({self.ring!r}) " + " ".join(
            str(g.entries.tolist()) for g in gens)


@lru_cache(maxsize=None)
def matrix_group(flavor: str, n: int, q: int) -> MatrixGroup:
    return MatrixGroup(GroupKind(flavor, n), GF(q))


@lru_cache(maxsize=None)
def corpus_items(group_name: str, flavor: str, n: int, q: int) -> tuple:
    """Conjugacy-class representatives of homomorphisms ``group -> flavor_n(F_q)``."""
    group = corpus_group(group_name)
    target = matrix_group(flavor, n, q)
    kind = target.kind
    homs = enumerate_homs(group, target)
    g0 = kind.identity_component.flavor
    reps = orbit_representatives(homs, matrix_group(g0, n, q), target, group.generators)
    out = []
    for h in reps:
        rho = Representation(group, kind, target.ring, target.elements[h], check=False)
        out.append(CorpusItem(group_name, kind, target.ring, rho, is_completely_reducible(rho)))
    return tuple(out)


def full_corpus(groups=CORPUS_GROUPS, targets=CORPUS_TARGETS) -> list:
    items = []
    for name in groups:
        for flavor, n, q in targets:
            items.extend(corpus_items(name, flavor, n, q))
    return items


# -- named representations ------------------------------------------------------------------


def regular_rep(group: FiniteGroup, R: RingSpec) -> Representation:
    """Left regular representation: ``g e_h = e_{gh}``."""
    N = group.order
    imgs = np.zeros((N, N, N), dtype=np.int64)
    for g in range(N):
        imgs[g, group.table[g], np.arange(N)] = 1
    return Representation(group, GroupKind("GL", N), R, imgs, check=False)


def permutation_rep(group: FiniteGroup, R: RingSpec) -> Representation:
    """Permutation matrices of a group built by :meth:`FiniteGroup.from_permutations`."""
    perms = group.permutations
    k = len(perms[0])
    imgs = np.zeros((group.order, k, k), dtype=np.int64)
    for g, p in enumerate(perms):
        imgs[g, list(p), np.arange(k)] = 1
    return Representation(group, GroupKind("GL", k), R, imgs, check=False)


def s3_standard(R: RingSpec) -> Representation:
    """The 2-dimensional sum-zero piece of the permutation representation of S_3,
    in the basis ``e1 - e2, e2 - e3``."""
    S3 = corpus_group("S3")
    perm = permutation_rep(S3, R)
    one, neg = 1, int(R.neg(1))
    basis = np.array([[one, 0], [neg, one], [0, neg]], dtype=np.int64)  # columns
    # coordinates of P v in the basis: first two entries determine them
    coords_map = la.inverse(R, np.array([[one, 0], [neg, one]], dtype=np.int64))
    imgs = la.matmul(R, coords_map, la.matmul(R, perm.images, basis)[:, :2, :])
    return Representation(S3, GroupKind("GL", 2), R, imgs)


def s3_sign(R: RingSpec) -> Representation:
    S3 = corpus_group("S3")
    sign = []
    for p in S3.permutations:
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        sign.append(1 if inv % 2 == 0 else int(R.neg(1)))
    return Representation(S3, GroupKind("GL", 1), R, np.array(sign).reshape(6, 1, 1), check=False)


def q8_symplectic(R: RingSpec) -> Representation:
    """Faithful 2-dimensional representation of Q_8 in ``Sp_2 = SL_2`` for odd ``p``.

    ``i -> [[0, 1], [-1, 0]]`` and ``j -> [[a, b], [b, -a]]`` with ``a^2 + b^2 = -1``.
    """
    Q8 = corpus_group("Q8")
    if R.p == 2:
        raise ValueError("Q_8 has no faithful 2-dimensional representation in characteristic 2")
    els = R.elements()
    minus_one = int(R.neg(1))
    sq = R.mul(els, els)
    total = R.add(sq[:, None], sq[None, :])
    a, b = (int(x) for x in np.argwhere(total == minus_one)[0])
    a, b = int(els[a]), int(els[b])
    i = [[0, 1], [minus_one, 0]]
    j = [[a, b], [b, int(R.neg(a))]]
    return Representation.from_generators(Q8, GroupKind("Sp", 1), R, [i, j])
