"""Characteristic torsion of G2 structures that are parallel for the S^7 connection."""

import numpy as np

from flattorsion import clifford as cl
from flattorsion import g2

rep = cl.build_clifford7()
forms = [g2.PHI] + g2.random_generic_forms(3, seed=0)
for x in cl.sample_sphere(3, 5):
    T = cl.torsion_at(rep, x)
    for i, w in enumerate(forms):
        Tc = g2.characteristic_torsion(w, T)
        r = g2.fg_type_residuals(w, g2.frame_d(w, T), g2.codifferential(w, T))
        print(f"form {i}: |T^c - T| = {(Tc - T).max_abs():.1e}, residuals "
              f"np {r.r_nearly_parallel:.2f}, cocal {r.r_cocalibrated:.2f}, lcp {r.r_lcp:.2f}")

# at the north pole d phi = 12 *phi and delta phi = 0: the structure is cocalibrated there
T0 = cl.torsion_at(rep, cl.north_pole())
r0 = g2.fg_type_residuals(g2.PHI, g2.frame_d(g2.PHI, T0), g2.codifferential(g2.PHI, T0))
print("north pole residuals:", r0.to_json())

bad = g2.characteristic_torsion(g2.PHI, T0, scalar_sign=-1.0)
print("with -1/6 instead of +1/6 the formula misses by", (bad - T0).max_abs())
