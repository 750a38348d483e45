"""Skew torsion of Lie groups: Jacobi, sigma_T and the generated holonomy algebra."""

import numpy as np

from flattorsion.lie import catalog, frame_curvature_check, generated_algebra, is_irreducible, jacobi_defect
from flattorsion.multilinear import AltForm
from flattorsion.torsion import riemann_from_torsion, sigma_contraction

for name in ("su2", "su3", "so4"):
    T = catalog(name).torsion()
    span = generated_algebra(T)
    cert = is_irreducible(span)
    print(f"{name}: Jacobi defect {jacobi_defect(T):.1e}, |sigma_T| {sigma_contraction(T).norm():.1e}, "
          f"dim g_T {span.dim}, irreducible {cert.irreducible}, "
          f"R^g + 1/4[[.,.],.] {frame_curvature_check(catalog(name)):.1e}")

# su(2) is the unit 3-sphere
R = riemann_from_torsion(catalog("su2").torsion())
print("su2 sectional curvature:", R.sectional(np.eye(3)[0], np.eye(3)[1]))

# a perturbed bracket fails Jacobi and sigma_T at the same time
rng = np.random.default_rng(0)
T = AltForm(5, 3, {(0, 1, 2): -2.0}) + AltForm.from_vector(5, 3, 0.1 * rng.standard_normal(10))
print(f"perturbed: Jacobi defect {jacobi_defect(T):.3f}, |sigma_T| {sigma_contraction(T).norm():.3f}")
