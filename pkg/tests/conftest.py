import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "pckit", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("pckit")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- small independent reference implementations used as oracles ---------------------


def leibniz_det(M, mod):
    """Determinant by the permutation expansion, over Z/mod."""
    d = len(M)
    total = 0
    for perm in itertools.permutations(range(d)):
        inversions = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(d):
            term *= int(M[i][perm[i]])
        total += term
    return total % mod


def principal_minor_sigmas(M, mod):
    """sigma_i as the sum of the i x i principal minors (valid over any commutative ring)."""
    d = len(M)
    out = []
    for i in range(1, d + 1):
        s = 0
        for rows in itertools.combinations(range(d), i):
            sub = [[M[r][c] for c in rows] for r in rows]
            s += leibniz_det(sub, mod)
        out.append(s % mod)
    return out


def rank_mod_p(A, p):
    """Rank of an integer matrix over F_p by plain Gaussian elimination."""
    A = [[int(x) % p for x in row] for row in A]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r
