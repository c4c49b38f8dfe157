"""Named verification suites (used by ``wrtkit check`` and the acceptance tests).

Each suite returns a :class:`CheckResult`; ``passed`` includes the time budget.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import abelian, asymptotics as asy, resurgence as rs, surgery as sg
from .mtc import check_modular, fusion, mtc_su2, mtc_u1, verlinde_dim
from .numeric import numeric_mtc, rt_invariant_numeric
from .rootsys import alcove_weights, kac_peterson_s, root_system_a


@dataclass
class CheckResult:
    name: str
    passed: bool
    elapsed: float
    budget: float
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({len(self.warnings)} warning(s))" if self.warnings else ""
        why = f" -- {self.failures[0]}" if self.failures and not self.passed else ""
        return f"[{status}] {self.name}: {self.elapsed:.2f}s / {self.budget:g}s{extra}{why}"


class _Run:
    def __init__(self, name: str, budget: float):
        self.res = CheckResult(name, True, 0.0, budget)
        self.t0 = time.perf_counter()

    def require(self, cond: bool, msg: str):
        if not cond:
            self.res.passed = False
            self.res.failures.append(msg)

    def done(self) -> CheckResult:
        self.res.elapsed = time.perf_counter() - self.t0
        if self.res.elapsed > self.res.budget:
            self.res.passed = False
            self.res.failures.append(f"time budget exceeded ({self.res.elapsed:.1f}s)")
        return self.res


# ---------------------------------------------------------------------------


def clebsch_gordan(k: int, i: int, j: int, l: int) -> int:
    """Truncated Clebsch-Gordan multiplicity in integer-label convention."""
    return int(abs(i - j) <= l <= min(i + j, 2 * k - i - j) and (i + j + l) % 2 == 0)


def check_verlinde(precision: int = 30) -> CheckResult:
    run = _Run("verlinde", 1.0)
    for k in range(1, 17):
        m = mtc_su2(k)
        run.require(verlinde_dim(m, 0, precision) == 1, f"su2 k={k} g=0")
        run.require(verlinde_dim(m, 1, precision) == k + 1, f"su2 k={k} g=1")
    run.require(verlinde_dim(mtc_su2(1), 2, precision) == 4, "su2 k=1 g=2")
    for k in range(2, 13, 2):
        for g in range(5):
            run.require(verlinde_dim(mtc_u1(k), g, precision) == k ** g, f"u1 k={k} g={g}")
    return run.done()


def check_fusion(precision: int = 30) -> CheckResult:
    run = _Run("fusion", 5.0)
    for k in range(1, 13):
        N = fusion(mtc_su2(k), precision)
        bad = [(i, j, l) for i in range(k + 1) for j in range(k + 1) for l in range(k + 1)
               if N[i][j][l] != clebsch_gordan(k, i, j, l)]
        run.require(not bad, f"su2 k={k} mismatches {bad[:3]}")
    for k in range(2, 13, 2):
        N = fusion(mtc_u1(k), precision)
        bad = [(a, b, c) for a in range(k) for b in range(k) for c in range(k)
               if N[a][b][c] != int((a + b - c) % k == 0)]
        run.require(not bad, f"u1 k={k} mismatches {bad[:3]}")
    return run.done()


def check_modular_suite(k_values=range(1, 17), precision: int = 30) -> CheckResult:
    run = _Run("modular", 5.0)
    rows = {}
    for k in k_values:
        r = check_modular(mtc_su2(k), precision)
        rows[k] = r
        run.require(r.unitarity_dev < 1e-9 and r.symmetry_dev < 1e-9, f"k={k} S not unitary/symmetric")
        run.require(r.s4_dev < 1e-10, f"k={k} S^4 != 1")
        run.require(r.st3_residual < 1e-10 and r.st3_lambda_unimodular_dev < 1e-10, f"k={k} (ST)^3 != lambda S^2")
        run.require(r.kappa_abs_dev < 1e-10, f"k={k} |kappa| != 1")
        run.require(r.kappa_arg_dev < 1e-9, f"k={k} arg kappa != 2 pi c/8")
    if 1 in rows:
        run.require(abs(rows[1].st3_lambda - (-1j)) < 1e-10, f"lambda(k=1) = {rows[1].st3_lambda}")
    run.res.details["table"] = {k: asdict(r) for k, r in rows.items()}
    run.res.details["max_residual"] = max(max(r.unitarity_dev, r.s4_dev, r.st3_residual) for r in rows.values())
    return run.done()


def su2_closed_form_s(k: int, precision: int = 30) -> mpmath.matrix:
    with mpmath.workdps(precision + 5):
        K = k + 2
        return mpmath.matrix([[mpmath.sqrt(mpmath.mpf(2) / K) * mpmath.sin((i + 1) * (j + 1) * mpmath.pi / K)
                               for j in range(k + 1)] for i in range(k + 1)])


def check_kac_peterson(precision: int = 30) -> CheckResult:
    run = _Run("kac-peterson", 10.0)
    a1 = root_system_a(1)
    scalars = {}
    for k in range(1, 11):
        S = kac_peterson_s(a1, k, precision)
        C = su2_closed_form_s(k, precision)
        c = S[0, 0] / C[0, 0]
        dev = max(abs(S[i, j] - c * C[i, j]) for i in range(k + 1) for j in range(k + 1))
        scalars[k] = complex(c)
        run.require(dev < 1e-10 and abs(abs(c) - 1) < 1e-10, f"A1 k={k} deviation {float(dev):.2e}")
    vals = list(scalars.values())
    run.require(max(abs(v - vals[0]) for v in vals) < 1e-10, "A1 scalar varies with k")
    a2 = root_system_a(2)
    for k in range(1, 7):
        S = kac_peterson_s(a2, k, precision)
        n = len(alcove_weights(a2, k))
        P = S * S.H
        dev = max(abs(P[i, j] - (1 if i == j else 0)) for i in range(n) for j in range(n))
        run.require(dev < 1e-9, f"A2 k={k} unitarity {float(dev):.2e}")
    run.res.details["a1_scalar"] = vals[0]
    return run.done()


def random_forest(rng: random.Random, max_vertices: int = 5, max_framing: int = 5) -> sg.PlumbingGraph:
    n = rng.randint(1, max_vertices)
    verts = tuple((i, rng.randint(-max_framing, max_framing)) for i in range(n))
    edges = tuple((rng.randrange(i), i) for i in range(1, n) if rng.random() < 0.8)
    return sg.PlumbingGraph(verts, edges)


def check_kirby(n_graphs: int = 50, k_max: int = 8, seed: int = 2024, precision: int = 30) -> CheckResult:
    run = _Run("kirby", 60.0)
    rng = random.Random(seed)
    graphs = [random_forest(rng) for _ in range(n_graphs)]
    n_stab = n_blow = 0
    worst = 0.0
    for k in range(1, k_max + 1):
        m = mtc_su2(k)
        for g in graphs:
            F = sg.colored_sum_F(m, g)
            Z = sg.rt_invariant(m, g, precision)
            for sign, kt in ((1, m.kappa_unnorm), (-1, m.kappa_unnorm_minus)):
                g2 = sg.stabilize(g, sign)
                run.require(sg.colored_sum_F(m, g2) == kt * F, f"stabilization law k={k} {g}")
                worst = max(worst, float(abs(sg.rt_invariant(m, g2, precision) - Z)))
                n_stab += 1
            for v, f in g.vertices:
                if f in (1, -1) and g.degree(v) <= 2:
                    d = float(abs(sg.rt_invariant(m, sg.blow_down(g, v), precision) - Z))
                    worst = max(worst, d)
                    run.require(d < 1e-10, f"blow-down k={k} v={v} {g}: {d:.2e}")
                    n_blow += 1
    run.require(worst < 1e-10, f"max |Z' - Z| = {worst:.2e}")
    run.res.details.update(stabilizations=n_stab, blow_downs=n_blow, max_dev=worst)
    return run.done()


def lens_closed_form(p: int, k: int, precision: int = 30):
    """sqrt(2/(p K)) sum_j sin^2((j+1) pi/K) exp(-pi i j(j+2) p/(2K))."""
    with mpmath.workdps(precision + 5):
        K = k + 2
        s = mpmath.fsum(mpmath.sin((j + 1) * mpmath.pi / K) ** 2
                        * mpmath.expjpi(-mpmath.mpf(j * (j + 2) * p) / (2 * K)) for j in range(k + 1))
        return mpmath.sqrt(mpmath.mpf(2) / (p * K)) * s


def check_canonical(precision: int = 30) -> CheckResult:
    run = _Run("canonical", 1.0)
    for k in range(1, 17):
        m = mtc_su2(k)
        K = k + 2
        with mpmath.workdps(precision):
            s3 = mpmath.sqrt(mpmath.mpf(2) / K) * mpmath.sin(mpmath.pi / K)
        run.require(abs(sg.rt_invariant(m, sg.PlumbingGraph(), precision) - s3) < 1e-12, f"S3 k={k}")
        run.require(abs(sg.rt_invariant(m, sg.PlumbingGraph(((0, 0),)), precision) - 1) < 1e-12, f"S1xS2 k={k}")
    run.require(abs(sg.rt_invariant(mtc_su2(1), sg.lens_graph(2, 1), precision)) < 1e-12, "RP3 surgery")
    run.require(abs(lens_closed_form(2, 1, precision)) < 1e-12, "RP3 closed form")
    return run.done()


def check_lens_closed_form(p_max: int = 7, k_max: int = 12, precision: int = 30) -> CheckResult:
    run = _Run("lens-closed-form", 30.0)
    phases, zeros, worst = {}, [], 0.0
    for k in range(1, k_max + 1):
        m = mtc_su2(k)
        K = k + 2
        for p in range(1, p_max + 1):
            z = sg.rt_invariant(m, sg.lens_graph(p, 1), precision)
            zp = lens_closed_form(p, k, precision)
            with mpmath.workdps(precision):
                dev = float(abs(abs(zp) - abs(z) * mpmath.sqrt(mpmath.mpf(K) / (2 * p))))
            worst = max(worst, dev)
            run.require(dev < 1e-9, f"|Z| calibration p={p} k={k}: {dev:.2e}")
            if abs(z) < 1e-12:
                zeros.append((p, k))
                run.require(abs(zp) < 1e-9, f"closed form nonzero where Z vanishes p={p} k={k}")
                continue
            x = mpmath.arg(zp / z) / (2 * mpmath.pi) * 8 * K
            n = int(mpmath.nint(x)) % (8 * K)
            phases[(p, k)] = Fraction(n, 8 * K)
            run.require(abs(x - mpmath.nint(x)) < 1e-8 * 8 * K, f"phase p={p} k={k} not a root of unity")
    run.res.details.update(phases=phases, zeros=zeros, max_modulus_dev=worst)
    return run.done()


def lens_ratio_sweep(p: int, k_min: int = 20, k_max: int = 276) -> asy.KSweep:
    return asy.k_sweep("su2", sg.lens_graph(p, 1), k_min, k_max, normalization="divided-by-S3")


def check_spectrum(ps=(2, 3, 5, 7), k_min: int = 20, k_max: int = 276, shift: int = 16) -> CheckResult:
    run = _Run("flat-spectrum", 300.0)
    out = {}
    for p in ps:
        a = asy.phase_spectrum(lens_ratio_sweep(p, k_min, k_max), 0.05, snap_denominator=4 * p)
        b = asy.phase_spectrum(lens_ratio_sweep(p, k_min + shift, k_max + shift), 0.05, snap_denominator=4 * p)
        bound = p // 2 + 1
        run.require(len(a.peaks) <= bound, f"p={p}: {len(a.peaks)} peaks > {bound}")
        bin_w = 1.0 / (k_max - k_min)
        moved = [la for la in a.locations()
                 if min(asy._circ_dist(la, lb) for lb in b.locations()) > bin_w]
        run.require(len(a.peaks) == len(b.peaks) and not moved, f"p={p}: peaks moved under translation")
        out[p] = {"peaks": [(str(l), amp) for l, amp in a.peaks],
                  "shifted": [(str(l), amp) for l, amp in b.peaks]}
    run.res.details["spectra"] = out
    return run.done()


def check_torsion(ps=(2, 3, 5, 7), k_min: int = 20, k_max: int = 276, tol: float = 0.05) -> CheckResult:
    """c0(p) sqrt(p) constant across p within ``tol`` (relative spread)."""
    run = _Run("torsion-scaling", 300.0)
    c0 = {}
    for p in ps:
        _, vals = asy.trivial_coeff(lens_ratio_sweep(p, k_min, k_max))
        c0[p] = abs(vals[0])
    scaled = {p: c * math.sqrt(p) for p, c in c0.items()}
    spread = (max(scaled.values()) - min(scaled.values())) / np.mean(list(scaled.values()))
    run.require(spread <= tol, f"c0*sqrt(p) spread {spread:.3f} > {tol}")
    alt = {p: c * p ** 1.5 for p, c in c0.items()}
    run.res.details.update(c0=c0, c0_sqrt_p=scaled, spread=spread, c0_p32=alt,
                           spread_p32=(max(alt.values()) - min(alt.values())) / np.mean(list(alt.values())))
    return run.done()


ABELIAN_MANIFOLDS = {
    "L(2,1)": [[2]],
    "L(3,1)": [[3]],
    "L(5,2)": [[3, 1], [1, 2]],
}


def abelian_c0_fit(B, k_max: int = 400, window: int = 60):
    g = sg.PlumbingGraph(tuple((i, B[i][i]) for i in range(len(B))),
                         tuple((i, j) for i in range(len(B)) for j in range(i + 1, len(B)) if B[i][j]))
    sw = asy.k_sweep("u1", g, 2, k_max, normalization="divided-by-S3")
    ks, c0 = asy.trivial_coeff(sw, window=window, taper="rect")
    return asy.perturbative_fit(ks, c0, 2)


def calibrate_abelian(k: int = 4, domain: str = "flat"):
    """(alpha, beta, gamma) from S3, S1xS2 and L(2,1) at level k."""
    D = math.sqrt(k)
    kappa = complex(mpmath.expjpi(0.25))
    r_s3 = complex(abelian.linking_form_invariant([], k, domain) / abelian.u1_surgery_invariant([], k))
    r_s1 = complex(abelian.linking_form_invariant([[0]], k, domain) / abelian.u1_surgery_invariant([[0]], k))
    r_l2 = complex(abelian.linking_form_invariant([[2]], k, domain) / abelian.u1_surgery_invariant([[2]], k))
    beta = math.log(abs(r_s3)) / math.log(D)
    alpha = math.log(abs(r_s1)) / math.log(D) - beta
    g = (np.angle(r_l2 / D ** beta) / (math.pi / 4)) % 8
    return alpha, beta, g, [r_s3, r_s1, r_l2]


def check_abelian(domain: str = "flat") -> CheckResult:
    run = _Run("abelian", 60.0)
    fits = {}
    for name, B in ABELIAN_MANIFOLDS.items():
        f = abelian_c0_fit(B)
        fits[name] = f
        run.require(all(abs(a) < 1e-6 for a in f.coeffs), f"{name}: a = {f.coeffs}")
    alpha, beta, gamma, raw = calibrate_abelian(4, domain)
    table = []
    for p in range(1, 9):
        for k in (2, 4, 6, 8):
            zl = complex(abelian.linking_form_invariant([[p]], k, domain))
            zs = complex(abelian.u1_surgery_invariant([[p]], k))
            pred = math.sqrt(k) ** beta * np.exp(1j * math.pi / 4 * gamma) * zs  # b1 = 0, sigma = 1
            dev = abs(zl - pred)
            table.append((p, k, zl, zs, dev))
            run.require(dev < 1e-9, f"L({p},1) k={k}: {dev:.2e}")
    run.res.details.update(triple=(alpha, beta, gamma), calibration_ratios=raw,
                           fits={n: f.coeffs for n, f in fits.items()}, table=table)
    return run.done()


def check_borel(precision: int = 40) -> CheckResult:
    run = _Run("borel", 10.0)
    for kind, target in (("factorial", 1.0), ("alternating", -1.0), ("planted", complex(0.3, 0.4))):
        r = rs.borel_poles(rs.synthetic_series(kind, 20, target), precision=precision)
        ok = any(abs(z - target) < 1e-5 for z, _ in r.poles)
        run.require(ok, f"{kind}: poles {[complex(z) for z, _ in r.poles]}")
    # exact Pade recovery of rational functions
    cases = [
        ([1 - Fraction(1, 2 ** (n + 1)) for n in range(20)], 1, 2, [Fraction(1, 2)], [1, Fraction(-3, 2), Fraction(1, 2)]),
        ([1] * 20, 0, 1, [1], [1, -1]),
        ([1, 2, 3] + [0] * 5, 2, 0, [1, 2, 3], [1]),
    ]
    for coeffs, L, M, num, den in cases:
        r = rs.pade(rs.FormalSeries(coeffs), L, M)
        n_ok = [x for x in r.numerator if x != 0] == [Fraction(x) for x in num if x != 0]
        run.require(r.exact and n_ok and [Fraction(x) for x in r.denominator] == [Fraction(x) for x in den],
                    f"Pade [{L}/{M}] mismatch")
    return run.done()


def check_poincare(k_max: int = 200, precision: int = 40, cfg=None) -> CheckResult:
    from .pipeline import PipelineConfig, run_pipeline

    run = _Run("poincare", 600.0)
    worst = 0.0
    for k in range(1, 9):
        m = mtc_su2(k)
        worst = max(worst, float(abs(sg.rt_invariant(m, sg.poincare_sphere(), precision)
                                     - sg.rt_invariant(m, sg.poincare_star(), precision))))
    run.require(worst < 1e-9, f"E8 vs star {worst:.2e}")
    rep = run_pipeline(cfg=cfg or PipelineConfig(k_max=k_max, precision=precision))
    n_phases = len(rep.phases_dft)
    if n_phases < 2:
        run.res.warnings.append(f"DFT found {n_phases} phase(s)")
    run.res.warnings.extend(rep.warnings)
    run.res.details.update(e8_star_dev=worst, n_phases=n_phases, report=rep.to_dict())
    return run.done()


SUITES = {
    "verlinde": check_verlinde,
    "fusion": check_fusion,
    "modular": check_modular_suite,
    "kac-peterson": check_kac_peterson,
    "kirby": check_kirby,
    "canonical": check_canonical,
    "lens": check_lens_closed_form,
    "spectrum": check_spectrum,
    "torsion": check_torsion,
    "abelian": check_abelian,
    "borel": check_borel,
    "poincare": check_poincare,
}
