"""Cohomology of finite groups with coefficients in small modules over a field.

Cochains are inhomogeneous: ``C^k`` is the space of maps ``Gamma^k -> M`` laid
out as ``(tuple index, module coordinate)`` with the first group slot most
significant.  Differentials are assembled as dense matrices and their ranks
taken by row reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .coeffring import RingSpec, dual_numbers
from .errors import BudgetExceeded, CharTwo, NotAHomomorphism, WrongKind
from .groups import FiniteGroup, Representation, check_homomorphism
from .matgroups import GroupKind, J_matrix, enumerate_group
from .pseudochar import tuple_digits, tuple_index

DEFAULT_COLUMN_BUDGET = 2 * 10**5


class GModule:
    """A finite-dimensional module: ``action[g]`` is the matrix of ``g``."""

    def __init__(self, group: FiniteGroup, ring: RingSpec, action, check: bool = True,
                 name: str | None = None):
        la._require_field(ring)
        action = np.array(action, dtype=np.int64)
        if action.ndim != 3 or action.shape[0] != group.order or action.shape[1] != action.shape[2]:
            raise ValueError("action must be an (order, dim, dim) array")
        action.setflags(write=False)
        self.group = group
        self.ring = ring
        self.action = action
        self.name = name
        if check:
            check_homomorphism(group, ring, action)

    @property
    def dim(self) -> int:
        return self.action.shape[-1]

    @classmethod
    def trivial(cls, group: FiniteGroup, ring: RingSpec, dim: int = 1) -> GModule:
        eye = np.eye(dim, dtype=np.int64)
        return cls(group, ring, np.broadcast_to(eye, (group.order, dim, dim)), check=False,
                   name="trivial")

    @classmethod
    def from_rep(cls, rho: Representation) -> GModule:
        return cls(rho.group, rho.ring, rho.images, check=False, name="standard")

    def invariants(self) -> np.ndarray:
        """Basis (columns) of the fixed vectors."""
        R = self.ring
        eye = np.eye(self.dim, dtype=np.int64)
        gens = self.group.generators or [0]
        eqs = np.concatenate([R.sub(self.action[g], eye) for g in gens], axis=0)
        return la.nullspace(R, eqs)

    def to_json(self) -> dict:
        R = self.ring
        return {
            "ring": R.to_json(),
            "dim": self.dim,
            "name": self.name,
            "generators": [[[R.payload(x) for x in row] for row in self.action[g]]
                           for g in self.group.generators],
        }


# -- adjoint modules -----------------------------------------------------------------------


def sp_projection(R: RingSpec, M, n: int) -> np.ndarray:
    """``pi(M) = a(MJ) J^-1`` with ``a(X) = (X + X^T)/2``; batched."""
    if R.p == 2:
        raise CharTwo("the sp projection needs 2 to be invertible")
    J = J_matrix(R, n)
    Jinv = R.neg(J)
    MJ = la.matmul(R, M, J)
    half = R.inv(R.from_int(2))
    sym = R.mul(half, R.add(MJ, la.transpose(MJ)))
    return la.matmul(R, sym, Jinv)


def _subspace_coords(R: RingSpec, vectors):
    """RREF row basis of the span of ``vectors`` (rows) and its pivot columns."""
    E, piv = la.rref(R, vectors)
    return E[: len(piv)], piv


def _restricted_action(R: RingSpec, act, basis, pivots) -> np.ndarray:
    """Matrices of ``act`` (acting on row-vector coordinates) on the span of ``basis`` rows.

    ``basis`` is in RREF, so the coordinates of a vector ``v`` in the span are
    ``v[pivots]``.
    """
    images = la.matmul(R, act, basis.T)  # columns: act * b_j
    coords = images[:, pivots, :]  # (N, k, k): column j holds coords of act*b_j
    check = la.matmul(R, la.transpose(coords), basis)  # rows: sum_i coords * b_i
    if not np.array_equal(check, la.transpose(images)):
        raise ValueError("subspace is not invariant")
    return coords


def lie_algebra_basis(R: RingSpec, d: int, flavor: str) -> np.ndarray:
    """RREF basis (rows of flattened ``d x d`` matrices) of gl, sl or sp."""
    if flavor == "gl":
        return np.eye(d * d, dtype=np.int64)
    if flavor == "sl":
        trace_row = np.eye(d, dtype=np.int64).reshape(1, d * d)
        return la.nullspace(R, trace_row).T
    if flavor == "sp":
        if d % 2:
            raise WrongKind("sp needs even matrix size")
        units = np.eye(d * d, dtype=np.int64).reshape(d * d, d, d)
        images = sp_projection(R, units, d // 2).reshape(d * d, d * d)
        return _subspace_coords(R, images)[0]
    raise ValueError(f"unknown Lie algebra flavor {flavor!r}")


def ad_module(rho: Representation, flavor: str = "gl") -> GModule:
    """Conjugation action ``M -> rho(g) M rho(g)^-1`` on gl, sl or sp."""
    R = rho.ring
    la._require_field(R)
    if flavor == "sp":
        if rho.kind.flavor not in ("Sp", "GSp"):
            raise WrongKind(f"the sp adjoint module needs an Sp or GSp representation, got {rho.kind}")
        if R.p == 2:
            raise CharTwo("the sp adjoint module needs odd characteristic")
    d = rho.d
    # row-major vec(A M B) = (A kron B^T) vec(M)
    full = la.kron(R, rho.images, la.transpose(rho.inverse_images()))
    if flavor == "gl":
        return GModule(rho.group, R, full, check=False, name="gl")
    basis, piv = _subspace_coords(R, lie_algebra_basis(R, d, flavor))
    act = _restricted_action(R, full, basis, piv)
    return GModule(rho.group, R, act, check=False, name=flavor)


def lie_algebra_dim(R: RingSpec, d: int, flavor: str) -> int:
    return lie_algebra_basis(R, d, flavor).shape[0]


# -- cochain complex ------------------------------------------------------------------------


def _block_add(R: RingSpec, D, rows, cols, blocks, dim):
    """``D[row block, col block] += block`` for disjoint (row, col) pairs."""
    ii = rows[:, None, None] * dim + np.arange(dim)[None, :, None]
    jj = cols[:, None, None] * dim + np.arange(dim)[None, None, :]
    D[ii, jj] = R.add(D[ii, jj], blocks)


def differential(M: GModule, k: int) -> np.ndarray:
    """Matrix of ``d: C^k -> C^{k+1}`` for ``k`` in ``0, 1, 2``."""
    R = M.ring
    G = M.group
    N, dim = G.order, M.dim
    t = G.table
    eye = np.broadcast_to(np.eye(dim, dtype=np.int64), (N ** (k + 1), dim, dim))
    neye = R.neg(eye)
    D = np.zeros((N ** (k + 1) * dim, N ** k * dim), dtype=np.int64)
    digits = tuple_digits(N, k + 1)
    rows = np.arange(N ** (k + 1))
    # g_1 . f(g_2, ..., g_{k+1})
    _block_add(R, D, rows, tuple_index(N, digits[:, 1:]), M.action[digits[:, 0]], dim)
    # sum_i (-1)^i f(..., g_i g_{i+1}, ...)
    for i in range(k):
        merged = np.concatenate(
            [digits[:, :i], t[digits[:, i], digits[:, i + 1]][:, None], digits[:, i + 2:]], axis=1)
        _block_add(R, D, rows, tuple_index(N, merged), neye if i % 2 == 0 else eye, dim)
    # (-1)^{k+1} f(g_1, ..., g_k)
    _block_add(R, D, rows, tuple_index(N, digits[:, :k]), neye if k % 2 == 0 else eye, dim)
    return D


@dataclass
class CohomologyReport:
    dims: tuple
    cochain_dims: tuple
    ranks: tuple

    @property
    def h0(self) -> int:
        return self.dims[0]

    @property
    def h1(self) -> int:
        return self.dims[1]

    @property
    def h2(self) -> int:
        return self.dims[2]

    def to_json(self) -> dict:
        out = {f"h{i}": h for i, h in enumerate(self.dims)}
        out["cochain_dims"] = list(self.cochain_dims)
        out["differential_ranks"] = list(self.ranks)
        return out


def cohomology_dims(M: GModule, max_degree: int = 2,
                    budget: int = DEFAULT_COLUMN_BUDGET) -> CohomologyReport:
    """``(h^0, ..., h^max_degree)`` from ranks of the cochain differentials."""
    if not 0 <= max_degree <= 2:
        raise ValueError("max_degree must be 0, 1 or 2")
    N, dim = M.group.order, M.dim
    cdims = tuple(N ** k * dim for k in range(max_degree + 2))
    if cdims[max_degree] > budget:
        raise BudgetExceeded(f"C^{max_degree} has {cdims[max_degree]} columns, budget {budget}")
    ranks = [la.rank(M.ring, differential(M, k)) for k in range(max_degree + 1)]
    dims = []
    for k in range(max_degree + 1):
        prev = ranks[k - 1] if k else 0
        dims.append(cdims[k] - ranks[k] - prev)
    return CohomologyReport(tuple(dims), cdims, tuple(ranks))


def rep_tangent_dim(rho: Representation, flavor: str = "gl",
                    budget: int = DEFAULT_COLUMN_BUDGET) -> int:
    """``h^1`` of the adjoint module."""
    return cohomology_dims(ad_module(rho, flavor), 1, budget).h1


def centralizer_algebra_dim(rho: Representation, flavor: str = "gl") -> int:
    """``dim {X in lie : rho(s) X = X rho(s)}`` by direct linear algebra."""
    R = rho.ring
    d = rho.d
    basis = lie_algebra_basis(R, d, flavor)  # rows of flattened matrices
    mats = basis.reshape(-1, d, d)
    gens = rho.group.generators or [0]
    eqs = []
    for g in gens:
        A = rho.images[g]
        comm = R.sub(la.matmul(R, A, mats), la.matmul(R, mats, A))  # (k, d, d)
        eqs.append(comm.reshape(mats.shape[0], d * d).T)
    return int(la.nullspace(R, np.concatenate(eqs, axis=0)).shape[1])


@dataclass
class CentralizerReport:
    elements: np.ndarray
    scalars: int
    adjoint_trivial: bool

    @property
    def count(self) -> int:
        return int(self.elements.shape[0])

    def to_json(self) -> dict:
        return {"count": self.count, "scalar_count": self.scalars,
                "adjoint_image_size": self.count // max(self.scalars, 1),
                "adjoint_trivial": self.adjoint_trivial}


def centralizer_points(rho: Representation, kind: GroupKind | None = None,
                       cap: int = 10**6) -> CentralizerReport:
    """Elements of ``G(F_q)`` commuting with the image of ``rho``."""
    kind = kind or rho.kind
    R = rho.ring
    elems = enumerate_group(kind, R, cap)
    gens = rho.group.generators or [0]
    ok = np.ones(len(elems), dtype=bool)
    for g in gens:
        A = rho.images[g]
        ok &= np.all(la.matmul(R, elems, A) == la.matmul(R, A, elems), axis=(-1, -2))
    cent = elems[ok]
    d = rho.d
    off = cent.copy()
    off[:, np.arange(d), np.arange(d)] = 0
    diag = cent[:, np.arange(d), np.arange(d)]
    is_scalar = ~np.any(off, axis=(-1, -2)) & np.all(diag == diag[:, :1], axis=1)
    n_scalar = int(is_scalar.sum())
    return CentralizerReport(cent, n_scalar, bool(is_scalar.all()))


# -- rank one deformations --------------------------------------------------------------------


def gl1_deformations(group: FiniteGroup, p: int) -> np.ndarray:
    """All characters ``Gamma -> 1 + eps F_p`` as ``(count, order)`` dual-number codes."""
    D = dual_numbers(p)
    gens = group.generators
    found = []
    for eps in np.ndindex(*([p] * len(gens))):
        images = [[[1 + p * e]] for e in eps]  # code a + p*b for a + b eps
        try:
            rho = Representation.from_generators(group, GroupKind("GL", 1), D, images)
        except NotAHomomorphism:
            continue
        found.append(rho.images[:, 0, 0])
    return np.array(found, dtype=np.int64).reshape(len(found), group.order)


def gl1_pseudo_tangent(group: FiniteGroup, p: int) -> int:
    """``log_p`` of the number of lifts of the trivial character to ``F_p[eps]``."""
    count = gl1_deformations(group, p).shape[0]
    e = round(math.log(count, p))
    if p ** e != count:
        raise ArithmeticError(f"{count} lifts is not a power of {p}")
    return e
