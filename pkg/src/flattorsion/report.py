"""Check registry, suite runner and deterministic report emission."""

from __future__ import annotations

import csv
import io
import json
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from . import __version__
from . import clifford as cl
from . import g2
from . import lie
from . import torsion as tor
from . import vectorial as vt
from .errors import InvalidInputError
from .multilinear import AltForm, form_action, multi_indices, skew_from_two_form

SUITES = ("liegroup", "s7", "g2", "vectorial")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    samples: int = 50
    seed: int = 0
    tol_exact: float = 1e-10
    tol_fd: float = 1e-6

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise InvalidInputError(f"unknown suite {self.suite!r}")
        if int(self.samples) < 1:
            raise InvalidInputError("samples must be at least 1")
        if not (self.tol_exact > 0 and self.tol_fd > 0):
            raise InvalidInputError("tolerances must be positive")
        if not -2 ** 63 <= int(self.seed) < 2 ** 64:
            raise InvalidInputError("seed must fit in 64 bits")


@dataclass
class CheckResult:
    check_id: str
    anchor: str
    points_tested: int
    max_residual: float
    tolerance: float
    comparison: str = "<="

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.max_residual):
            return False
        if self.comparison == ">":
            return self.max_residual > self.tolerance
        return self.max_residual <= self.tolerance

    def to_json(self) -> dict:
        d = asdict(self)
        d["max_residual"] = float(d["max_residual"])
        d["tolerance"] = float(d["tolerance"])
        d["pass"] = self.passed
        return d


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    anchor: str
    run: Callable[[SuiteConfig, np.random.Generator], tuple]
    comparison: str = "<="

    def execute(self, cfg: SuiteConfig) -> CheckResult:
        rng = np.random.default_rng([int(cfg.seed) % 2 ** 64, zlib.crc32(self.check_id.encode())])
        points, residual, tol = self.run(cfg, rng)
        return CheckResult(self.check_id, self.anchor, int(points), float(residual), float(tol),
                           self.comparison)


REGISTRY: dict[str, Check] = {}


def check(check_id: str, suite: str, anchor: str, comparison: str = "<="):
    def deco(fn):
        if check_id in REGISTRY:
            raise ValueError(f"duplicate check id {check_id}")
        REGISTRY[check_id] = Check(check_id, suite, anchor, fn, comparison)
        return fn
    return deco


@dataclass
class VerificationReport:
    suite: str
    config: SuiteConfig
    checks: list[CheckResult] = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "version": self.version, "config": asdict(self.config),
                "pass": self.passed, "checks": [c.to_json() for c in self.checks]}


def checks_for(suite: str) -> list[Check]:
    if suite not in SUITES + ("all",):
        raise InvalidInputError(f"unknown suite {suite!r}")
    return sorted((c for c in REGISTRY.values() if suite == "all" or c.suite == suite),
                  key=lambda c: c.check_id)


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    return VerificationReport(cfg.suite, cfg, [c.execute(cfg) for c in checks_for(cfg.suite)])


def render_report(report: VerificationReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        cols = ["check_id", "anchor", "points_tested", "max_residual", "tolerance", "comparison", "pass"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for c in report.checks:
            w.writerow({k: v for k, v in c.to_json().items() if k in cols})
        return buf.getvalue()
    raise InvalidInputError(f"unknown format {fmt!r}")


def emit_report(report: VerificationReport, path, fmt: str = "json") -> None:
    """Write the rendered report; ``OSError`` propagates for unwritable paths."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_report(report, fmt))


# ---------------------------------------------------------------------------
# shared fixtures
# ---------------------------------------------------------------------------

CATALOG = ("su2", "su3", "so4", "abelian4")
REP = cl.build_clifford7()


def _random_form(rng, n, k=3) -> AltForm:
    return AltForm.from_vector(n, k, rng.standard_normal(len(multi_indices(n, k))))


def _perturbed_su2(rng, eps=0.1) -> AltForm:
    """su(2) torsion placed in R^5 plus a small random 3-form."""
    base = AltForm(5, 3, {(0, 1, 2): -2.0})
    return base + _random_form(rng, 5) * eps


def _sphere_points(cfg, rng):
    return cl.sample_sphere(cfg.samples, int(rng.integers(2 ** 32)))


def _rotated_stab(rng, omega, scale=1.0):
    span = g2.stabilizer_algebra(omega)
    a = sum(c * B for c, B in zip(rng.standard_normal(span.dim), span.basis))
    return scipy.linalg.expm(scale * a)


# ---------------------------------------------------------------------------
# liegroup
# ---------------------------------------------------------------------------

@check("catalog-jacobi-zero", "liegroup", "[[X,Y],Z] + cyclic = 0 for [X,Y] = -T(X,Y)")
def _(cfg, rng):
    return len(CATALOG), max(lie.jacobi_defect(lie.catalog(n).torsion()) for n in CATALOG), cfg.tol_exact


@check("catalog-sigma-zero", "liegroup", "sigma_T = 0 for Lie algebra torsion")
def _(cfg, rng):
    return len(CATALOG), max(tor.sigma_contraction(lie.catalog(n).torsion()).max_abs()
                             for n in CATALOG), cfg.tol_exact


@check("jacobi-iff-sigma", "liegroup", "jacobi defect = 0 iff sigma_T = 0 (mismatch count)")
def _(cfg, rng):
    forms = [lie.catalog(n).torsion() for n in CATALOG]
    forms += [_perturbed_su2(rng) for _ in range(cfg.samples)]
    forms += [_random_form(rng, int(rng.integers(4, 8))) for _ in range(cfg.samples)]
    bad = 0
    for T in forms:
        a = lie.jacobi_defect(T) > 1e-6
        b = tor.sigma_contraction(T).max_abs() > 1e-6
        zero_a = lie.jacobi_defect(T) <= cfg.tol_exact
        zero_b = tor.sigma_contraction(T).max_abs() <= cfg.tol_exact
        bad += not ((a and b) or (zero_a and zero_b))
    return len(forms), bad, 0


@check("sigma-definitions-agree", "liegroup", "1/2 sum (e_i _| T)^2 = cyclic <T(X,Y),T(Z,V)>")
def _(cfg, rng):
    worst, count = 0.0, 0
    for n in range(4, 8):
        for _ in range(max(1, cfg.samples // 4)):
            T = _random_form(rng, n)
            diff = tor.sigma_contraction(T).to_array() - tor.sigma_array(T)
            worst = max(worst, float(np.abs(diff).max()))
            count += 1
    return count, worst, 1e-12


@check("su2-algebra-dim-3", "liegroup", "dim Lie{X _| T} = 3 for su(2)")
def _(cfg, rng):
    return 1, abs(lie.generated_algebra(lie.catalog("su2").torsion()).dim - 3), 0


@check("so4-reducible", "liegroup", "Lie{X _| T} acts reducibly for so(4) = su(2)+su(2)")
def _(cfg, rng):
    span = lie.generated_algebra(lie.catalog("so4").torsion())
    cert = lie.is_irreducible(span, seed=int(rng.integers(2 ** 31)))
    if cert.irreducible:
        return 1, 1.0, 0
    # the certificate must be one of the two 3-dimensional blocks
    return 1, float(cert.invariant_subspace.shape[1] != 3), 0


@check("su3-irreducible", "liegroup", "Lie{X _| T} acts irreducibly for su(3)")
def _(cfg, rng):
    cert = lie.is_irreducible(lie.generated_algebra(lie.catalog("su3").torsion()),
                              seed=int(rng.integers(2 ** 31)))
    return 1, float(not cert.irreducible), 0


@check("bracket-closure-idempotent", "liegroup", "closing Lie{X _| T} again adds nothing")
def _(cfg, rng):
    worst = 0
    forms = [lie.catalog(n).torsion() for n in CATALOG] + [_random_form(rng, 4)]
    for T in forms:
        span = lie.generated_algebra(T)
        if span.dim:
            worst = max(worst, abs(lie.bracket_closure(span.basis).dim - span.dim))
    return len(forms), worst, 0


@check("frame-curvature-su2", "liegroup", "R^g(e_i,e_j)e_k = -1/4 [[e_i,e_j],e_k]")
def _(cfg, rng):
    return 1, lie.frame_curvature_check(lie.catalog("su2")), cfg.tol_exact


@check("frame-curvature-su3", "liegroup", "R^g(e_i,e_j)e_k = -1/4 [[e_i,e_j],e_k]")
def _(cfg, rng):
    return 1, lie.frame_curvature_check(lie.catalog("su3")), cfg.tol_exact


@check("catalog-ricci-einstein", "liegroup", "Ric^g = Scal^g / n on simple factors")
def _(cfg, rng):
    worst = 0.0
    for name in ("su2", "su3"):
        ric = tor.ricci_from_torsion(lie.catalog(name).torsion())
        n = ric.shape[0]
        worst = max(worst, float(np.abs(ric - np.trace(ric) / n * np.eye(n)).max()))
    return 2, worst, cfg.tol_exact


@check("curvature-commutator-catalog", "liegroup", "[X _| T, R^g] = 0")
def _(cfg, rng):
    worst = 0.0
    for name in CATALOG:
        T = lie.catalog(name).torsion()
        for e in np.eye(T.dim):
            worst = max(worst, tor.curvature_commutator_residual(T, e))
    return len(CATALOG), worst, 1e-9


@check("curvature-commutator-random-control", "liegroup", "[X _| T, R^g] != 0 for random T",
       comparison=">")
def _(cfg, rng):
    worst = np.inf
    for _ in range(cfg.samples):
        T = _random_form(rng, 6)
        worst = min(worst, max(tor.curvature_commutator_residual(T, e) for e in np.eye(6)))
    return cfg.samples, worst, 1e-3


@check("s7-algebra-so7", "liegroup", "Lie{X _| T} = so(7), irreducible, for the S^7 torsion")
def _(cfg, rng):
    span = lie.generated_algebra(cl.torsion_at(REP, cl.north_pole()))
    cert = lie.is_irreducible(span, seed=int(rng.integers(2 ** 31)))
    return 1, abs(span.dim - 21) + float(not cert.irreducible), 0


# ---------------------------------------------------------------------------
# s7
# ---------------------------------------------------------------------------

@check("clifford-relations", "s7", "kappa_i kappa_j + kappa_j kappa_i = -2 delta_ij")
def _(cfg, rng):
    return 49, REP.anticommutator_defect() + REP.skew_defect(), 0


@check("killing-frame-orthonormal", "s7", "<V_i, V_j> = delta_ij, <V_i, x> = 0")
def _(cfg, rng):
    worst = 0.0
    X = _sphere_points(cfg, rng)
    for x in X:
        V = cl.killing_frame(REP, x)
        worst = max(worst, float(np.abs(V @ V.T - np.eye(7)).max()), float(np.abs(V @ x).max()))
    return len(X), worst, 1e-12


def _s7_each(cfg, rng, fn):
    X = _sphere_points(cfg, rng)
    return len(X), max(fn(x) for x in X)


@check("torsion-norm-28", "s7", "|T|^2 = 28")
def _(cfg, rng):
    return (*_s7_each(cfg, rng, lambda x: abs(cl.torsion_at(REP, x).norm() ** 2 - 28)), cfg.tol_exact)


@check("scal-42", "s7", "Scal^g = 3/2 |T|^2 = 42")
def _(cfg, rng):
    return (*_s7_each(cfg, rng, lambda x: abs(tor.scalar_from_torsion(cl.torsion_at(REP, x)) - 42)),
            cfg.tol_exact)


@check("ricci-6", "s7", "Ric^g = 1/4 sum T_aim T_bim = 6 Id")
def _(cfg, rng):
    return (*_s7_each(cfg, rng, lambda x: float(np.abs(
        tor.ricci_from_torsion(cl.torsion_at(REP, x)) - 6 * np.eye(7)).max())), cfg.tol_exact)


@check("sectional-1", "s7", "K(X,Y) = |T(X,Y)|^2 / 4 = 1 on frame pairs")
def _(cfg, rng):
    def one(x):
        T = cl.torsion_at(REP, x)
        E = np.eye(7)
        return max(abs(tor.sectional_from_torsion(T, E[i], E[j]) - 1) for i, j in multi_indices(7, 2))
    return (*_s7_each(cfg, rng, one), cfg.tol_exact)


@check("sigma-nonzero", "s7", "sigma_T != 0 on S^7", comparison=">")
def _(cfg, rng):
    X = _sphere_points(cfg, rng)
    return len(X), min(tor.sigma_contraction(cl.torsion_at(REP, x)).norm() for x in X), 0.1


@check("nabla-T-nonzero", "s7", "T is not nabla-parallel", comparison=">")
def _(cfg, rng):
    X = _sphere_points(cfg, rng)
    return len(X), min(float(np.abs(cl.coefficient_derivative_array(REP, x)).max()) for x in X), 0.1


@check("coefficient-derivative-fd", "s7", "V_k(T_ijl) closed form = finite difference along flow")
def _(cfg, rng):
    return (*_s7_each(cfg, rng, lambda x: float(np.abs(
        cl.coefficient_derivative_array(REP, x) - cl.fd_coefficient_derivative_array(REP, x)).max())),
        cfg.tol_fd)


@check("nabla-T-third-sigma", "s7", "nabla_V T = -1/3 (V _| sigma_T)")
def _(cfg, rng):
    def one(x):
        T = cl.torsion_at(REP, x)
        sigma = tor.sigma_contraction(T)
        D = cl.coefficient_derivative_array(REP, x)
        return max(float(np.abs(D[k] - tor.nabla_T(T, sigma, e).to_array()).max())
                   for k, e in enumerate(np.eye(7)))
    return (*_s7_each(cfg, rng, one), cfg.tol_exact)


def nabla_g_T_from_derivatives(T: AltForm, D: np.ndarray, k: int) -> AltForm:
    """``nabla^g_{e_k} T = nabla_{e_k} T - 1/2 (e_k _| T) . T`` with parallel-frame derivative ``D[k]``."""
    from .multilinear import interior
    M = skew_from_two_form(interior(np.eye(T.dim)[k], T))
    return AltForm.from_array(D[k]) - form_action(M, T) * 0.5


@check("nabla-g-T-sixth-sigma", "s7", "nabla^g_V T = +1/6 (V _| sigma_T) = -1/2 nabla_V T")
def _(cfg, rng):
    def one(x):
        T = cl.torsion_at(REP, x)
        sigma = tor.sigma_contraction(T)
        D = cl.coefficient_derivative_array(REP, x)
        worst = 0.0
        for k, e in enumerate(np.eye(7)):
            ng = nabla_g_T_from_derivatives(T, D, k)
            worst = max(worst, (ng - tor.nabla_g_T(T, sigma, e)).max_abs(),
                        float(np.abs(D[k] + 2 * ng.to_array()).max()))
        return worst
    return (*_s7_each(cfg, rng, one), cfg.tol_exact)


@check("dT-equals-two-thirds-sigma", "s7", "dT = 2/3 sigma_T (finite differences along flows)")
def _(cfg, rng):
    def one(x):
        T = cl.torsion_at(REP, x)
        D = cl.fd_coefficient_derivative_array(REP, x)
        Dv = np.array([AltForm.from_array(D[k]).vector() for k in range(7)])
        return (g2.frame_d(T, T, Dv) - tor.sigma_contraction(T) * (2.0 / 3.0)).max_abs()
    return (*_s7_each(cfg, rng, one), cfg.tol_fd)


@check("codifferential-T-zero", "s7", "delta T = 0")
def _(cfg, rng):
    def one(x):
        T = cl.torsion_at(REP, x)
        D = cl.coefficient_derivative_array(REP, x)
        Dv = np.array([AltForm.from_array(D[k]).vector() for k in range(7)])
        return g2.codifferential(T, T, Dv).max_abs()
    return (*_s7_each(cfg, rng, one), 1e-8)


@check("bianchi-residual", "s7", "dT - sigma_T + nabla_V T(X,Y,Z) = 0")
def _(cfg, rng):
    return (*_s7_each(cfg, rng, lambda x: tor.bianchi_residual(cl.torsion_at(REP, x))), cfg.tol_exact)


@check("levi-civita-fd", "s7", "nabla^g_{V_i} V_j = -1/2 T(V_i, V_j)")
def _(cfg, rng):
    return (*_s7_each(cfg, rng, lambda x: cl.levi_civita_check(REP, x)), 1e-8)


@check("curvature-commutator-s7", "s7", "[V _| T, R^g] = 0")
def _(cfg, rng):
    def one(x):
        T = cl.torsion_at(REP, x)
        return max(tor.curvature_commutator_residual(T, e) for e in np.eye(7))
    return (*_s7_each(cfg, rng, one), 1e-9)


@check("frame-family-stabilizer", "s7", "A in Stab T(x) leaves the torsion at x unchanged")
def _(cfg, rng):
    X = np.vstack([cl.north_pole(), _sphere_points(cfg, rng)])
    worst = 0.0
    for x in X:
        T = cl.torsion_at(REP, x)
        A = _rotated_stab(rng, T)
        worst = max(worst, (cl.frame_family(REP, A, x) - T).max_abs(),
                    abs(g2.stabilizer_algebra(T).dim - 14))
    return len(X), worst, 1e-8


@check("frame-family-transform", "s7", "torsion of A.V = A applied to torsion of V")
def _(cfg, rng):
    X = _sphere_points(cfg, rng)
    worst = 0.0
    for x in X:
        A = g2.random_rotation(rng)
        worst = max(worst, (cl.frame_family(REP, A, x)
                            - cl.transform_form(A, cl.torsion_at(REP, x))).max_abs())
    return len(X), worst, 1e-10


@check("frame-family-random-control", "s7", "generic A in SO(7) changes the torsion", comparison=">")
def _(cfg, rng):
    X = _sphere_points(cfg, rng)
    return len(X), min((cl.frame_family(REP, g2.random_rotation(rng), x)
                        - cl.torsion_at(REP, x)).max_abs() for x in X), 1e-3


# ---------------------------------------------------------------------------
# g2
# ---------------------------------------------------------------------------

G2_FORMS = 20


def _g2_forms(rng):
    return [g2.PHI] + g2.random_generic_forms(G2_FORMS, int(rng.integers(2 ** 32)))


@check("phi-generic", "g2", "dim Stab(phi) = 14 and B_phi positive definite")
def _(cfg, rng):
    ok = g2.genericity_check(g2.PHI) and not g2.genericity_check(AltForm.basis(7, (0, 1, 2)))
    return 2, float(not ok), 0


@check("generic-forms-stabilizer-14", "g2", "dim Stab(omega) = 14 for generic omega")
def _(cfg, rng):
    forms = _g2_forms(rng)
    return len(forms), max(abs(g2.stabilizer_algebra(w).dim - 14) for w in forms), 0


@check("stabilizer-closed", "g2", "Stab(phi) is a Lie algebra annihilating phi")
def _(cfg, rng):
    span = g2.stabilizer_algebra(g2.PHI)
    ann = max(form_action(B, g2.PHI).max_abs() for B in span.basis)
    return span.dim, max(span.closure_residual(), ann), 1e-12


@check("theta-roundtrip", "g2", "theta recovered from delta omega = -(theta _| omega)")
def _(cfg, rng):
    from .multilinear import interior
    worst = 0.0
    for w in _g2_forms(rng)[:5]:
        th = rng.standard_normal(7)
        got, _ = g2.theta_from_delta(w, -interior(th, w))
        worst = max(worst, float(np.abs(got - th).max()))
    return 5, worst, cfg.tol_exact


def _g2_points(cfg, rng):
    return cl.sample_sphere(cfg.samples, int(rng.integers(2 ** 32)))


@check("characteristic-torsion-matches", "g2",
       "T^c = -*d omega + 1/6 <d omega, *omega> omega + *(theta ^ omega) = T(x)")
def _(cfg, rng):
    forms = _g2_forms(rng)
    X = _g2_points(cfg, rng)
    worst = 0.0
    for x in X:
        T = cl.torsion_at(REP, x)
        for w in forms:
            worst = max(worst, (g2.characteristic_torsion(w, T) - T).max_abs())
    return len(X) * len(forms), worst, 1e-6


@check("characteristic-torsion-flipped-scalar-control", "g2",
       "-1/6 <d omega, *omega> omega variant misses T(x)", comparison=">")
def _(cfg, rng):
    X = _g2_points(cfg, rng)
    return len(X), max((g2.characteristic_torsion(g2.PHI, cl.torsion_at(REP, x), scalar_sign=-1.0)
                        - cl.torsion_at(REP, x)).max_abs() for x in X), 0.1


def _fg_table(cfg, rng) -> np.ndarray:
    """Residuals ``R[form, point, kind]`` for kinds (nearly parallel, cocalibrated, lcp)."""
    forms = _g2_forms(rng)
    X = _g2_points(cfg, rng)
    R = np.empty((len(forms), len(X), 3))
    for b, x in enumerate(X):
        T = cl.torsion_at(REP, x)
        for a, w in enumerate(forms):
            r = g2.fg_type_residuals(w, g2.frame_d(w, T), g2.codifferential(w, T))
            R[a, b] = (r.r_nearly_parallel, r.r_cocalibrated, r.r_lcp)
    return R


@check("fg-general-type", "g2",
       "each structure leaves X1, X1+X3 (cocalibrated) and X4: sup residuals > 0.1", comparison=">")
def _(cfg, rng):
    R = _fg_table(cfg, rng)
    return R.shape[0] * R.shape[1], float(R.max(axis=1).min()), 0.1


@check("fg-np-lcp-pointwise", "g2", "r_np and r_lcp > 0.1 at every sampled point", comparison=">")
def _(cfg, rng):
    R = _fg_table(cfg, rng)
    return R.shape[0] * R.shape[1], float(R[:, :, [0, 2]].min()), 0.1


@check("fg-residuals-stabilizer-invariant", "g2", "FG residuals invariant under Stab(omega)")
def _(cfg, rng):
    X = _g2_points(cfg, rng)
    worst = 0.0
    for x in X:
        T = cl.torsion_at(REP, x)
        A = _rotated_stab(rng, g2.PHI)
        T2 = cl.transform_form(A, T)
        r1 = g2.fg_type_residuals(g2.PHI, g2.frame_d(g2.PHI, T), g2.codifferential(g2.PHI, T))
        r2 = g2.fg_type_residuals(g2.PHI, g2.frame_d(g2.PHI, T2), g2.codifferential(g2.PHI, T2))
        worst = max(worst, float(np.abs(np.subtract(list(r1.to_json().values()),
                                                    list(r2.to_json().values()))).max()))
    return len(X), worst, 1e-8


@check("codifferential-squares-zero", "g2", "delta delta omega = 0")
def _(cfg, rng):
    X = _g2_points(cfg, rng)
    worst = 0.0
    for x in X:
        T = cl.torsion_at(REP, x)
        D = cl.coefficient_derivative_array(REP, x)
        delta = g2.codifferential(g2.PHI, T)
        # delta(omega) is linear in T for constant omega, so its derivatives are delta along D[k]
        dd = np.array([g2.codifferential(g2.PHI, AltForm.from_array(D[k])).vector() for k in range(7)])
        worst = max(worst, g2.codifferential(delta, T, dd).max_abs())
    return len(X), worst, cfg.tol_exact


@check("flat-parallel-control", "g2", "T = 0, constant omega: T^c = 0 and residuals 0")
def _(cfg, rng):
    T = AltForm.zero(7, 3)
    r = g2.fg_type_residuals(g2.PHI, g2.frame_d(g2.PHI, T), g2.codifferential(g2.PHI, T))
    return 1, max(g2.characteristic_torsion(g2.PHI, T).max_abs(), *r.to_json().values()), cfg.tol_exact


# ---------------------------------------------------------------------------
# vectorial
# ---------------------------------------------------------------------------

def _pts(patch, cfg, rng):
    return patch.sample_points(cfg.samples, int(rng.integers(2 ** 32)))


def _max_over(patch, V, cfg, rng, fn):
    P = _pts(patch, cfg, rng)
    return len(P), max(fn(patch, V, p) for p in P)


def _min_over(patch, V, cfg, rng, fn):
    P = _pts(patch, cfg, rng)
    return len(P), min(fn(patch, V, p) for p in P)


H2 = vt.builtin_patch("hyperbolic2")
H3 = vt.builtin_patch("hyperbolic3")
S2 = vt.builtin_patch("sphere2")
E2 = vt.builtin_patch("euclidean2")
E3 = vt.builtin_patch("euclidean3")
TORUS = vt.builtin_patch("flat_torus")
DOWN2 = vt.vertical_field(2, -1.0)
UP2 = vt.vertical_field(2, 1.0)


@check("christoffel-h2-closed-form", "vectorial", "Gamma^x_xy = -1/y on the half-plane")
def _(cfg, rng):
    P = _pts(H2, cfg, rng)
    return len(P), max(abs(vt.christoffels(H2, p)[0, 0, 1] + 1 / p[1]) for p in P), 1e-6


@check("christoffel-s2-closed-form", "vectorial", "Gamma^theta_phiphi = -sin cos on S^2")
def _(cfg, rng):
    P = _pts(S2, cfg, rng)
    return len(P), max(abs(vt.christoffels(S2, p)[0, 1, 1] + np.sin(p[0]) * np.cos(p[0])) for p in P), 1e-6


@check("h2-parallel-field", "vectorial", "nabla V = 0 for V = -y d_y; K = -|V|^2 = -1")
def _(cfg, rng):
    def one(patch, V, p):
        r = vt.parallel_V_check(patch, V, p)
        return max(r.defect, r.max_curvature_deviation, abs(r.predicted_curvature + 1))
    return (*_max_over(H2, DOWN2, cfg, rng, one), 1e-4)


@check("h2-antiparallel-control", "vectorial", "nabla V != 0 for V = +y d_y", comparison=">")
def _(cfg, rng):
    return (*_min_over(H2, UP2, cfg, rng, lambda a, b, p: vt.parallel_V_check(a, b, p).defect), 1.0)


@check("h2-flat-gauss-criterion", "vectorial", "G = delta^g V for flat nabla (V = -y d_y)")
def _(cfg, rng):
    return (*_max_over(H2, DOWN2, cfg, rng, vt.gauss_divergence_criterion), 1e-5)


@check("h2-flat-curvature-formula", "vectorial", "R^g in terms of V and nabla V (V = -y d_y)")
def _(cfg, rng):
    return (*_max_over(H2, DOWN2, cfg, rng, vt.vectorial_curvature_residual), 1e-5)


@check("h2-flatness-defect", "vectorial", "dV = 0 and R^nabla = 0 (V = -y d_y)")
def _(cfg, rng):
    return (*_max_over(H2, DOWN2, cfg, rng, vt.flatness_defect), 1e-4)


@check("h2-up-not-flat-control", "vectorial", "V = +y d_y: G != delta^g V and R^nabla != 0",
       comparison=">")
def _(cfg, rng):
    def one(patch, V, p):
        return min(vt.gauss_divergence_criterion(patch, V, p), vt.flatness_defect(patch, V, p),
                   vt.vectorial_curvature_residual(patch, V, p))
    return (*_min_over(H2, UP2, cfg, rng, one), 0.5)


@check("h3-parallel-flat", "vectorial", "V = -z d_z on hyperbolic space: parallel, flat, K = -1")
def _(cfg, rng):
    V = vt.vertical_field(3, -1.0)

    def one(patch, V, p):
        r = vt.parallel_V_check(patch, V, p)
        return max(r.defect, r.max_curvature_deviation, vt.flatness_defect(patch, V, p),
                   vt.vectorial_curvature_residual(patch, V, p))
    return (*_max_over(H3, V, cfg, rng, one), 1e-4)


@check("euclidean-zero-field", "vectorial", "V = 0 on flat space: every residual vanishes")
def _(cfg, rng):
    def one(patch, V, p):
        out = [vt.flatness_defect(patch, V, p), vt.vectorial_curvature_residual(patch, V, p),
               vt.parallel_V_check(patch, V, p).defect]
        if patch.dim == 2:
            out.append(vt.gauss_divergence_criterion(patch, V, p))
        return max(out)
    n1, r1 = _max_over(E2, vt.zero_field(2), cfg, rng, one)
    n2, r2 = _max_over(TORUS, vt.zero_field(2), cfg, rng, one)
    n3, r3 = _max_over(E3, vt.zero_field(3), cfg, rng, one)
    return n1 + n2 + n3, max(r1, r2, r3), cfg.tol_exact


@check("euclidean-vertical-not-flat-control", "vectorial", "V = y d_y on the plane is not flat",
       comparison=">")
def _(cfg, rng):
    return (*_min_over(E2, UP2, cfg, rng, vt.flatness_defect), 0.5)


@check("s2-not-flat-control", "vectorial", "S^2, V = 0: G = 1 != 0 = delta^g V", comparison=">")
def _(cfg, rng):
    def one(patch, V, p):
        return min(vt.gauss_divergence_criterion(patch, V, p), vt.flatness_defect(patch, V, p),
                   vt.vectorial_curvature_residual(patch, V, p))
    return (*_min_over(S2, vt.zero_field(2), cfg, rng, one), 0.5)


def _weyl_fixtures(rng):
    seed = int(rng.integers(2 ** 31))
    return [(H2, UP2), (H2, DOWN2), (S2, vt.zero_field(2)), (S2, vt.random_smooth_field(2, seed)),
            (E2, vt.random_smooth_field(2, seed + 1)), (TORUS, vt.zero_field(2)),
            (E3, vt.random_smooth_field(3, seed + 2)), (H3, vt.random_smooth_field(3, seed + 3))]


@check("weyl-relation", "vectorial", "R^nabla = R^w + dV (x) Id, nabla^w = nabla - V (x) Id")
def _(cfg, rng):
    worst, count = 0.0, 0
    for patch, V in _weyl_fixtures(rng):
        n, r = _max_over(patch, V, cfg, rng, vt.weyl_relation_residual)
        worst, count = max(worst, r), count + n
    return count, worst, 1e-4


@check("weyl-unflipped-control", "vectorial", "nabla^g + (<X,V>Y + <Y,V>X - <X,Y>V) misses the relation",
       comparison=">")
def _(cfg, rng):
    return (*_min_over(H2, UP2, cfg, rng,
                       lambda a, b, p: vt.weyl_relation_residual(a, b, p, weyl_sign=1.0)), 0.5)


@check("dV-symmetry", "vectorial", "dV(X,Y) = <nabla^g_X V, Y> - <nabla^g_Y V, X>")
def _(cfg, rng):
    worst, count = 0.0, 0
    for patch in (H2, S2, H3):
        V = vt.random_smooth_field(patch.dim, int(rng.integers(2 ** 31)))

        def one(patch, V, p):
            N = patch.metric(p) @ vt.nabla_g_V(patch, V, p)    # N[y, x] = <nabla_x V, d_y>
            return float(np.abs(vt.dV(patch, V, p) - (N.T - N)).max())
        n, r = _max_over(patch, V, cfg, rng, one)
        worst, count = max(worst, r), count + n
    return count, worst, 1e-8


@check("gauss-iff-flat", "vectorial", "G = delta^g V iff nabla flat on surfaces (mismatch count)")
def _(cfg, rng):
    cases = [(H2, DOWN2), (H2, UP2), (S2, vt.zero_field(2)), (E2, vt.zero_field(2)),
             (E2, UP2), (TORUS, vt.zero_field(2)), (S2, vt.random_smooth_field(2, 3))]
    bad, count = 0, 0
    for patch, V in cases:
        for p in _pts(patch, cfg, rng):
            a = vt.gauss_divergence_criterion(patch, V, p) < 1e-5
            b = vt.flatness_defect(patch, V, p) < 1e-4
            bad += a != b
            count += 1
    return count, bad, 0


def manifest() -> list[str]:
    return sorted(REGISTRY)
