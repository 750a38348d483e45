"""The flat connection on S^7 defined by octonionic Killing fields."""

import numpy as np

from flattorsion import clifford as cl
from flattorsion.g2 import PHI
from flattorsion.lie import generated_algebra, is_irreducible
from flattorsion.torsion import ricci_from_torsion, scalar_from_torsion, sigma_contraction

rep = cl.build_clifford7()
print("Clifford relations, max error:", rep.anticommutator_defect())

x0 = cl.north_pole()
print("T(x0) = 2 phi:", cl.torsion_at(rep, x0).allclose(PHI * 2.0))

for x in cl.sample_sphere(3, 1):
    T = cl.torsion_at(rep, x)
    print(f"|T|^2 = {T.norm() ** 2:.12f}, Scal = {scalar_from_torsion(T):.12f}, "
          f"Ric = 6 Id: {np.allclose(ricci_from_torsion(T), 6 * np.eye(7))}")

x = cl.sample_sphere(1, 2)[0]
T = cl.torsion_at(rep, x)
D = cl.coefficient_derivative_array(rep, x)
print("closed-form vs finite-difference derivative:",
      f"{np.abs(D - cl.fd_coefficient_derivative_array(rep, x)).max():.1e}")
print("nabla T = -1/3 (V _| sigma):",
      np.allclose(D[0], -sigma_contraction(T).to_array()[0] / 3))
print("Levi-Civita check:", f"{cl.levi_civita_check(rep, x):.1e}")

span = generated_algebra(T)
print("dim g_T =", span.dim, "irreducible:", is_irreducible(span).irreducible)
