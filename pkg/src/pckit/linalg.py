"""Exact matrix kernels over :class:`~pckit.coeffring.RingSpec` code arrays.

Matrices are numpy ``int64`` arrays of ring codes with shape ``(..., n, m)``;
leading axes are batch axes and every routine broadcasts over them.  Nothing
here divides unless the routine says so, so the characteristic polynomial,
determinant and matrix product are valid over ``Z/p^r`` as well.
"""

from __future__ import annotations

import numpy as np

from .coeffring import RingSpec
from .errors import InvalidRingSpec, NonInvertible


def asmat(a) -> np.ndarray:
    return np.asarray(a, dtype=np.int64)


def identity(R: RingSpec, d: int, batch=()) -> np.ndarray:
    eye = np.eye(d, dtype=np.int64)
    return np.broadcast_to(eye, tuple(batch) + (d, d)).copy()


def matmul(R: RingSpec, A, B) -> np.ndarray:
    A = asmat(A)
    B = asmat(B)
    if R._cyclic:
        # entries < 2**20 and inner dimension small: no int64 overflow
        return np.matmul(A, B) % R.modulus
    prod = R.mul(A[..., :, :, None], B[..., None, :, :])
    return R.sum(prod, axis=-2)


def matvec(R: RingSpec, A, v) -> np.ndarray:
    return R.sum(R.mul(asmat(A), asmat(v)[..., None, :]), axis=-1)


def dot(R: RingSpec, u, v) -> np.ndarray:
    return R.sum(R.mul(asmat(u), asmat(v)), axis=-1)


def scale(R: RingSpec, c, A) -> np.ndarray:
    c = asmat(c)
    return R.mul(c[..., None, None], asmat(A))


def transpose(A) -> np.ndarray:
    return np.swapaxes(asmat(A), -1, -2)


def charpoly(R: RingSpec, A) -> np.ndarray:
    """Coefficients ``(1, c_1, ..., c_d)`` of ``det(t I - A)``, highest power first.

    Samuelson-Berkowitz recursion: division free, so valid over any
    commutative ring.
    """
    A = asmat(A)
    d = A.shape[-1]
    batch = A.shape[:-2]
    one = np.ones(batch, dtype=np.int64)
    poly = [one]
    for k in range(d - 1, -1, -1):
        m = d - k - 1
        a = A[..., k, k]
        row = A[..., k, k + 1:]
        col = A[..., k + 1:, k]
        sub = A[..., k + 1:, k + 1:]
        toeplitz = [one, R.neg(a)]
        v = col
        for _ in range(m):
            toeplitz.append(R.neg(dot(R, row, v)))
            v = matvec(R, sub, v)
        new = []
        for i in range(m + 2):
            acc = np.zeros(batch, dtype=np.int64)
            for j in range(min(i, m) + 1):
                acc = R.add(acc, R.mul(toeplitz[i - j], poly[j]))
            new.append(acc)
        poly = new
    return np.stack(poly, axis=-1)


def sigma(R: RingSpec, A) -> np.ndarray:
    """Signed coefficients ``(sigma_1, ..., sigma_d)``: trace first, determinant last."""
    c = charpoly(R, A)[..., 1:]
    d = c.shape[-1]
    signs = np.array([(i + 1) % 2 == 1 for i in range(d)])
    return np.where(signs, R.neg(c), c)


def poly_from_sigma(R: RingSpec, s) -> np.ndarray:
    """Inverse of :func:`sigma`: full coefficient vector with leading 1."""
    s = asmat(s)
    d = s.shape[-1]
    signs = np.array([(i + 1) % 2 == 1 for i in range(d)])
    c = np.where(signs, R.neg(s), s)
    one = np.ones(s.shape[:-1] + (1,), dtype=np.int64)
    return np.concatenate([one, c], axis=-1)


def sigma_from_poly(R: RingSpec, c) -> np.ndarray:
    c = asmat(c)[..., 1:]
    d = c.shape[-1]
    signs = np.array([(i + 1) % 2 == 1 for i in range(d)])
    return np.where(signs, R.neg(c), c)


def poly_mul(R: RingSpec, a, b) -> np.ndarray:
    """Product of coefficient vectors (highest power first), batched."""
    a = asmat(a)
    b = asmat(b)
    n = a.shape[-1] + b.shape[-1] - 1
    batch = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.zeros(batch + (n,), dtype=np.int64)
    for i in range(a.shape[-1]):
        for j in range(b.shape[-1]):
            out[..., i + j] = R.add(out[..., i + j], R.mul(a[..., i], b[..., j]))
    return out


def det(R: RingSpec, A) -> np.ndarray:
    return sigma(R, A)[..., -1]


def trace(R: RingSpec, A) -> np.ndarray:
    return R.sum(np.diagonal(asmat(A), axis1=-2, axis2=-1), axis=-1)


def inverse(R: RingSpec, A) -> np.ndarray:
    """Batched matrix inverse via Cayley-Hamilton (no division except by det)."""
    A = asmat(A)
    d = A.shape[-1]
    c = charpoly(R, A)
    cd = c[..., d]
    if not np.all(R.is_unit(cd)):
        raise NonInvertible("matrix with non-unit determinant")
    # A^-1 = -c_d^-1 (A^{d-1} + c_1 A^{d-2} + ... + c_{d-1} I)
    eye = identity(R, d, A.shape[:-2])
    acc = eye
    for i in range(1, d):
        acc = R.add(matmul(R, acc, A), scale(R, c[..., i], eye))
    return scale(R, R.neg(R.inv(cd)), acc)


def kron(R: RingSpec, A, B) -> np.ndarray:
    A = asmat(A)
    B = asmat(B)
    a, b = A.shape[-1], B.shape[-1]
    prod = R.mul(A[..., :, None, :, None], B[..., None, :, None, :])
    return prod.reshape(prod.shape[:-4] + (a * b, a * b))


def block_diag(*mats) -> np.ndarray:
    mats = [asmat(m) for m in mats]
    batch = np.broadcast_shapes(*(m.shape[:-2] for m in mats))
    n = sum(m.shape[-1] for m in mats)
    out = np.zeros(batch + (n, n), dtype=np.int64)
    pos = 0
    for m in mats:
        k = m.shape[-1]
        out[..., pos:pos + k, pos:pos + k] = m
        pos += k
    return out


# -- linear algebra over fields --------------------------------------------


def _require_field(R: RingSpec):
    if not R.is_field:
        raise InvalidRingSpec(f"{R!r} is not a field")


def rref(R: RingSpec, A):
    """Reduced row echelon form over a field; returns ``(matrix, pivot_columns)``."""
    _require_field(R)
    A = asmat(A).copy()
    m, n = A.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(A[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            A[[row, piv]] = A[[piv, row]]
        A[row] = R.mul(A[row], R.inv(A[row, col]))
        factors = A[:, col].copy()
        factors[row] = 0
        rows = np.flatnonzero(factors)
        if rows.size:
            A[rows] = R.sub(A[rows], R.mul(factors[rows, None], A[row][None, :]))
        pivots.append(col)
        row += 1
    return A, pivots


def rank(R: RingSpec, A) -> int:
    A = asmat(A)
    if A.size == 0:
        return 0
    return len(rref(R, A)[1])


def nullspace(R: RingSpec, A) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as the columns of an ``(n, r)`` matrix."""
    A = asmat(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return identity(R, n)
    E, pivots = rref(R, A)
    free = [j for j in range(n) if j not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, fcol in enumerate(free):
        basis[fcol, k] = 1
        for i, pcol in enumerate(pivots):
            basis[pcol, k] = R.neg(E[i, fcol])
    return basis


def solve(R: RingSpec, A, b):
    """One solution ``x`` of ``A x = b`` over a field, or ``None``."""
    A = asmat(A)
    b = asmat(b)
    aug = np.concatenate([A, b[:, None]], axis=1)
    E, pivots = rref(R, aug)
    n = A.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pcol in enumerate(pivots):
        x[pcol] = E[i, n]
    return x


def span_combinations(R: RingSpec, basis, coeffs) -> np.ndarray:
    """All combinations ``sum_k coeffs[:, k] * basis[k]`` for a stack of coefficient rows."""
    basis = asmat(basis)
    coeffs = asmat(coeffs)
    out = np.zeros((coeffs.shape[0],) + basis.shape[1:], dtype=np.int64)
    extra = (None,) * (basis.ndim - 1)
    for k in range(basis.shape[0]):
        out = R.add(out, R.mul(coeffs[(slice(None), k) + extra], basis[k]))
    return out
