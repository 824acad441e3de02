"""Splitting a symplectic representation into irreducible and pair-type pieces.

Run: python3 demos/symplectic.py
"""

from pckit import GF, FiniteGroup, Representation, brute_conjugacy, symplectic_decompose
from pckit.corpus import q8_symplectic
from pckit.matgroups import GroupKind
from pckit.pseudochar import sp_interleave

F7 = GF(7)
Q8, Z3 = FiniteGroup.quaternion(), FiniteGroup.cyclic(3)
G = Q8.direct_product(Z3)
left, right = G.projections(Q8, Z3)

q8 = q8_symplectic(F7).pullback(G, left)
chi = Representation.from_generators(Z3, GroupKind("Sp", 1), F7, [[[2, 0], [0, 4]]])
rho = Representation(G, GroupKind("Sp", 2), F7,
                     sp_interleave(q8.images, chi.pullback(G, right).images, 1, 1))

dec = symplectic_decompose(rho)
for s in dec.summands:
    print(f"{s.tag:<24} dim {s.rep.d}, symplectic basis columns {s.basis.T.tolist()}")
back = dec.reassemble()
print("reassembled sum is Sp-conjugate to the input:", bool(brute_conjugacy(rho, back)))
