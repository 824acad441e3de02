"""Tangent dimensions: cochain cohomology next to direct enumeration.

Run: python3 demos/deformations.py
"""

from pckit import (GF, GModule, ad_module, cohomology_dims, gl1_pseudo_tangent, named_group,
                   rep_tangent_dim)
from pckit.corpus import q8_symplectic, s3_standard

print(f"{'group':<6} {'p':>2}  h^0 h^1 h^2  rank-1 lifts")
for name in ("Z2", "Z3", "Z4", "S3", "Q8", "D4"):
    G = named_group(name)
    for p in (2, 3, 5):
        dims = cohomology_dims(GModule.trivial(G, GF(p))).dims
        print(f"{name:<6} {p:>2}  {dims[0]:>3} {dims[1]:>3} {dims[2]:>3}  {gl1_pseudo_tangent(G, p):>5}")

print()
for label, rho in (("S3 std / F_3", s3_standard(GF(3))), ("S3 std / F_5", s3_standard(GF(5))),
                   ("Q8 / F_3", q8_symplectic(GF(3)))):
    flavors = ["gl", "sl"] + (["sp"] if rho.kind.flavor == "Sp" else [])
    h = {f: cohomology_dims(ad_module(rho, f)).dims for f in flavors}
    print(f"{label:<14}", "  ".join(f"{f}: {h[f]}" for f in flavors),
          f" tangent(gl) = {rep_tangent_dim(rho)}")
