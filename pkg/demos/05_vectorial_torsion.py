"""Vectorial torsion on coordinate patches: parallel fields, the Gauss criterion and Weyl."""

from flattorsion import vectorial as vt

H2 = vt.builtin_patch("hyperbolic2")
S2 = vt.builtin_patch("sphere2")
p = [0.1, 1.3]

down = vt.vertical_field(2, -1.0)
chk = vt.parallel_V_check(H2, down, p)
print(f"V = -y d_y on H^2: |nabla V| {chk.defect:.1e}, predicted K {chk.predicted_curvature}, "
      f"deviation {chk.max_curvature_deviation:.1e}")
print(f"  flatness defect {vt.flatness_defect(H2, down, p):.1e}, "
      f"Gauss criterion {vt.gauss_divergence_criterion(H2, down, p):.1e}")

up = vt.vertical_field(2, 1.0)
for c in (1, -1):
    print(f"V = +y d_y, convention {c:+d}: Gauss {vt.gauss_divergence_criterion(H2, up, p, c):.2f}, "
          f"curvature formula {vt.vectorial_curvature_residual(H2, up, p, c):.2f}")

print(f"S^2, V = 0: Gauss criterion {vt.gauss_divergence_criterion(S2, vt.zero_field(2), [1.0, 0.5]):.3f}")

V = vt.random_smooth_field(2, seed=1)
print(f"Weyl relation on S^2 with a random field: {vt.weyl_relation_residual(S2, V, [1.2, 2.0]):.1e}")
print(f"  with the unflipped Weyl connection: {vt.weyl_relation_residual(S2, V, [1.2, 2.0], weyl_sign=1.0):.2f}")
