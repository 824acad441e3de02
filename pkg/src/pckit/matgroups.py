"""Classical matrix groups over finite coefficient rings.

A :class:`GroupKind` names one of GL, SL, Sp, GSp, O, SO, GO together with its
rank parameter.  The symplectic form is always ``J = (0, I_n; -I_n, 0)`` and the
orthogonal form is the identity Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg as la
from .coeffring import RingElem, RingSpec
from .errors import (
    CharTwoOrthogonal,
    IncompatibleContexts,
    NonInvertible,
    NotSimilitudeGroup,
    SearchSpaceTooLarge,
)

FLAVORS = ("GL", "SL", "Sp", "GSp", "O", "SO", "GO")
ORTHOGONAL = ("O", "SO", "GO")
SYMPLECTIC = ("Sp", "GSp")
SIMILITUDE = ("GSp", "GO")


@dataclass(frozen=True)
class GroupKind:
    flavor: str
    n: int

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.n < 1:
            raise ValueError("rank parameter must be >= 1")

    @property
    def d(self) -> int:
        """Size of the matrices in the standard representation."""
        return 2 * self.n if self.flavor in SYMPLECTIC else self.n

    @property
    def identity_component(self) -> GroupKind:
        if self.flavor in ("O", "GO"):
            return GroupKind("SO", self.n)
        return self

    @property
    def is_orthogonal(self) -> bool:
        return self.flavor in ORTHOGONAL

    @property
    def is_symplectic(self) -> bool:
        return self.flavor in SYMPLECTIC

    @property
    def has_similitude(self) -> bool:
        return self.flavor in SIMILITUDE

    def check_ring(self, R: RingSpec):
        if self.is_orthogonal and R.p == 2:
            raise CharTwoOrthogonal(f"{self} needs odd characteristic")

    def __str__(self):
        if self.is_symplectic:
            return f"{self.flavor}_{self.d}"
        return f"{self.flavor}_{self.n}"

    def to_json(self) -> dict:
        return {"flavor": self.flavor, "n": self.n}

    @classmethod
    def from_json(cls, data: dict) -> GroupKind:
        return cls(data["flavor"], int(data["n"]))


def GL(n):
    return GroupKind("GL", n)


def SL(n):
    return GroupKind("SL", n)


def Sp(two_n):
    """``Sp(2n)`` in matrix-size notation, so ``Sp(2)`` is Sp_2 = SL_2."""
    if two_n % 2:
        raise ValueError("symplectic groups need even matrix size")
    return GroupKind("Sp", two_n // 2)


def GSp(two_n):
    if two_n % 2:
        raise ValueError("symplectic groups need even matrix size")
    return GroupKind("GSp", two_n // 2)


def O(n):
    return GroupKind("O", n)


def SO(n):
    return GroupKind("SO", n)


def GO(n):
    return GroupKind("GO", n)


def J_matrix(R: RingSpec, n: int) -> np.ndarray:
    """The standard symplectic form ``(0, I_n; -I_n, 0)`` as a code array."""
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    J[:n, n:] = np.eye(n, dtype=np.int64)
    J[n:, :n] = R.neg(np.eye(n, dtype=np.int64))
    return J


def gram_matrix(kind: GroupKind, R: RingSpec) -> np.ndarray:
    if kind.is_symplectic:
        return J_matrix(R, kind.n)
    return np.eye(kind.d, dtype=np.int64)


class MatElem:
    """A square matrix over a coefficient ring."""

    __slots__ = ("spec", "entries")

    def __init__(self, spec: RingSpec, entries):
        entries = np.array(entries, dtype=np.int64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("matrices must be square")
        if entries.size and (entries.min() < 0 or entries.max() >= spec.size):
            raise ValueError(f"entries out of range for {spec!r}")
        entries.setflags(write=False)
        self.spec = spec
        self.entries = entries

    @classmethod
    def from_payload(cls, spec: RingSpec, rows) -> MatElem:
        return cls(spec, [[spec.code_from_payload(x) for x in row] for row in rows])

    @classmethod
    def identity(cls, spec: RingSpec, d: int) -> MatElem:
        return cls(spec, np.eye(d, dtype=np.int64))

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx) -> RingElem:
        return RingElem(self.spec, self.entries[idx])

    def _check(self, other):
        if not isinstance(other, MatElem):
            return NotImplemented
        if other.spec != self.spec or other.d != self.d:
            raise IncompatibleContexts("matrices over different rings or sizes")
        return other

    def __matmul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return MatElem(self.spec, la.matmul(self.spec, self.entries, other.entries))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return MatElem(self.spec, self.spec.add(self.entries, other.entries))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return MatElem(self.spec, self.spec.sub(self.entries, other.entries))

    def scaled(self, c) -> MatElem:
        code = self.spec.code_from_payload(c)
        return MatElem(self.spec, self.spec.mul(code, self.entries))

    @property
    def T(self) -> MatElem:
        return MatElem(self.spec, self.entries.T)

    def inverse(self) -> MatElem:
        return MatElem(self.spec, la.inverse(self.spec, self.entries))

    def det(self) -> RingElem:
        return RingElem(self.spec, la.det(self.spec, self.entries))

    def trace(self) -> RingElem:
        return RingElem(self.spec, la.trace(self.spec, self.entries))

    def __eq__(self, other):
        if not isinstance(other, MatElem):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.spec, self.entries.tobytes(), self.d))

    def to_json(self) -> dict:
        return {
            "ring": self.spec.to_json(),
            "rows": [[self.spec.payload(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> MatElem:
        spec = RingSpec.from_json(data["ring"])
        return cls.from_payload(spec, data["rows"])

    def __repr__(self):
        rows = [[self.spec.payload(x) for x in row] for row in self.entries]
        return f"MatElem({self.spec!r}, {rows})"


class Membership(NamedTuple):
    member: bool
    nu: RingElem | None = None

    def __bool__(self):
        return self.member


def member_mask(kind: GroupKind, R: RingSpec, mats):
    """Vectorised membership test.

    Returns ``(mask, nu)`` where ``nu`` holds the similitude codes for
    GSp/GO (and is ``None`` otherwise).  Non-invertible matrices are simply
    not members here; :func:`membership` raises for them instead.
    """
    kind.check_ring(R)
    mats = la.asmat(mats)
    d = kind.d
    if mats.shape[-1] != d or mats.shape[-2] != d:
        raise IncompatibleContexts(f"expected {d}x{d} matrices for {kind}")
    batch = mats.shape[:-2]
    dets = la.det(R, mats)
    mask = R.is_unit(dets)
    nu = None
    f = kind.flavor
    if f == "GL":
        pass
    elif f == "SL":
        mask = mask & (dets == 1)
    else:
        gram = gram_matrix(kind, R)
        form = la.matmul(R, la.matmul(R, la.transpose(mats), gram), mats)
        if f in ("Sp", "O", "SO"):
            mask = mask & np.all(form == gram, axis=(-1, -2))
            if f == "SO":
                mask = mask & (dets == 1)
        else:
            # M^T G M = nu G: read nu off a nonzero entry of G
            i, j = (0, kind.n) if f == "GSp" else (0, 0)
            nu = form[..., i, j]
            expected = R.mul(nu[..., None, None], np.broadcast_to(gram, batch + (d, d)))
            mask = mask & np.all(form == expected, axis=(-1, -2)) & R.is_unit(nu)
    return np.asarray(mask), nu


def membership(kind: GroupKind, M: MatElem) -> Membership:
    """Does ``M`` satisfy the defining equations of ``kind``?"""
    kind.check_ring(M.spec)
    if M.d != kind.d:
        raise IncompatibleContexts(f"{kind} needs {kind.d}x{kind.d} matrices")
    if not M.det().is_unit():
        raise NonInvertible(f"{M!r} is not invertible")
    mask, nu = member_mask(kind, M.spec, M.entries)
    ok = bool(mask)
    if kind.has_similitude and ok:
        return Membership(True, RingElem(M.spec, int(nu)))
    return Membership(ok, None)


def char_poly_coeffs(M: MatElem) -> tuple[RingElem, ...]:
    """``(sigma_1, ..., sigma_d)`` with ``det(tI - M) = sum (-1)^i sigma_i t^(d-i)``."""
    s = la.sigma(M.spec, M.entries)
    return tuple(RingElem(M.spec, x) for x in s)


def similitude(kind: GroupKind, M: MatElem) -> RingElem:
    if not kind.has_similitude:
        raise NotSimilitudeGroup(f"{kind} has no similitude character")
    res = membership(kind, M)
    if not res:
        raise ValueError(f"matrix is not in {kind}")
    return res.nu


def similitude_codes(kind: GroupKind, R: RingSpec, mats) -> np.ndarray:
    if not kind.has_similitude:
        raise NotSimilitudeGroup(f"{kind} has no similitude character")
    mask, nu = member_mask(kind, R, mats)
    if not np.all(mask):
        raise ValueError(f"matrices are not in {kind}")
    return nu


def symplectic_transpose_codes(R: RingSpec, mats, n: int) -> np.ndarray:
    J = J_matrix(R, n)
    Jinv = R.neg(J)  # J^-1 = -J
    return la.matmul(R, la.matmul(R, J, la.transpose(mats)), Jinv)


def symplectic_transpose(M: MatElem, n: int) -> MatElem:
    """``J M^T J^-1``; equals ``M^-1`` on Sp_2n."""
    if M.d != 2 * n:
        raise IncompatibleContexts("symplectic transpose needs a 2n x 2n matrix")
    return MatElem(M.spec, symplectic_transpose_codes(M.spec, M.entries, n))


def all_matrices(R: RingSpec, d: int, cap: int = 10**6) -> np.ndarray:
    total = R.size ** (d * d)
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} candidate {d}x{d} matrices over {R!r}")
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, d * d), dtype=np.int64)
    for k in range(d * d - 1, -1, -1):
        digits[:, k] = idx % R.size
        idx //= R.size
    return digits.reshape(total, d, d)


def enumerate_group(kind: GroupKind, R: RingSpec, cap: int = 10**6) -> np.ndarray:
    """All elements of ``kind(R)`` as a ``(N, d, d)`` code array, in code order."""
    kind.check_ring(R)
    cands = all_matrices(R, kind.d, cap)
    mask, _ = member_mask(kind, R, cands)
    return cands[mask]
