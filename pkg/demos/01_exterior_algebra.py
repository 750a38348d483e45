"""Exterior algebra on R^7: the G2 3-form, its Hodge dual and its stabilizer."""

import numpy as np

from flattorsion.g2 import PHI, g2_bilinear, genericity_check, stabilizer_algebra
from flattorsion.multilinear import hodge, inner, interior, volume_form, wedge

terms = [f"{'+' if v > 0 else '-'} e{''.join(map(str, I))}" for I, v in sorted(PHI.coeffs.items())]
print("phi =", " ".join(terms).lstrip("+ "))
print("|phi|^2 =", inner(PHI, PHI))

# phi ^ *phi = |phi|^2 vol
top = wedge(PHI, hodge(PHI))
print("phi ^ *phi = 7 vol:", top.allclose(volume_form(7) * 7.0))

# e_0 _| phi is a 2-form; as a skew matrix it is a complex structure on e_0^perp
beta = interior(np.eye(7)[0], PHI)
print("e_0 _| phi =", dict(beta.coeffs))

print("dim Stab(phi) in so(7):", stabilizer_algebra(PHI).dim)
print("B_phi = Id:", np.allclose(g2_bilinear(PHI), np.eye(7)))
print("-phi generic for the standard orientation:", genericity_check(-PHI))
print("-phi generic for the reversed orientation:", genericity_check(-PHI, orientation=-1))
