"""Pseudocharacters forget extensions but remember semisimple representations.

Run: python3 demos/reconstruction.py
"""

import numpy as np

from pckit import (GF, FiniteGroup, Representation, brute_conjugacy, equals, from_rep,
                   jordan_holder, semisimplify)
from pckit.corpus import s3_standard
from pckit.matgroups import GroupKind


def show(title, theta):
    print(title)
    for g in range(theta.group.order):
        print(f"  {g}: sigma = {theta.fingerprint[g].tolist()}")


F3 = GF(3)
std = s3_standard(F3)
show("S3 on the sum-zero plane over F_3", from_rep(std))

factors = jordan_holder(std)
print("composition factors:", [f.images[:, 0, 0].tolist() for f in factors])
ss = semisimplify(std)
print("same pseudocharacter as its semisimplification:", equals(from_rep(std), from_rep(ss)))
print("conjugate to it over F_3:", bool(brute_conjugacy(std, ss, ext_degree=1)))

# x -> [[0, 1], [-1, 0]] has eigenvalues +-i, which live in F_9 only
Z4 = FiniteGroup.cyclic(4)
rot = Representation.from_generators(Z4, GroupKind("GL", 2), F3, [[[0, 1], [2, 0]]])
F9 = GF(3, 2)
i = next(x for x in range(9) if F9.mul(x, x) == F9.neg(1))
diag = Representation.from_generators(Z4, GroupKind("GL", 2), F9, [[[i, 0], [0, int(F9.neg(i))]]])
res = brute_conjugacy(rot, diag, ext_degree=2)
print(f"rotation vs diag(i, -i): conjugate over F_{3 ** res.ext_degree}")
print("conjugator:", np.asarray(res.conjugator.entries).tolist())
