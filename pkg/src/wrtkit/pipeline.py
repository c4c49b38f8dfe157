"""End-to-end probe: level sweep -> phases -> trivial-sector series -> Borel poles."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import minimize

from . import asymptotics as asy
from .resurgence import borel_poles, stokes_location_check, to_instanton_variable
from .surgery import PlumbingGraph, poincare_star

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    k_min: int = 20
    k_max: int = 200
    fit_k_min: int = 100
    precision: int = 40
    n_trivial: int = 8
    trivial_power: float = -1.5
    shift: int = 2
    threshold: float = 0.05
    snap_den: int = 1000
    snap_tol: float = 1e-9
    stokes_tol: float = 0.02
    workers: int = 1


@dataclass
class PipelineReport:
    phases_dft: list
    phases: list  # refined (Fraction when snapped)
    alpha: object
    alpha_over_pi: Fraction | None
    sector_amplitudes: dict
    fit_residual: float
    trivial_series: list
    poles: list
    matches: list
    warnings: list = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return any(m.matched for m in self.matches)

    def to_dict(self) -> dict:
        c = lambda z: [float(mpmath.re(z)), float(mpmath.im(z))]
        return {
            "phases_dft": [float(x) for x in self.phases_dft],
            "phases": [str(x) for x in self.phases],
            "alpha": float(self.alpha),
            "alpha_over_pi": str(self.alpha_over_pi) if self.alpha_over_pi is not None else None,
            "sector_amplitudes": {str(k): c(v) for k, v in self.sector_amplitudes.items()},
            "fit_residual": float(self.fit_residual),
            "trivial_series": [c(a) for a in self.trivial_series],
            "poles": [{"loc": c(z), "residue": c(r)} for z, r in self.poles],
            "matches": [m.to_dict() for m in self.matches],
            "warnings": self.warnings,
        }


def _float_residual(ks, z, params, n, shift, power):
    alpha, *nus = params
    K = ks + shift
    K0 = K.max()
    cols = [(K / K0) ** power * (K0 / K) ** j for j in range(n + 1)]
    cols += [np.exp(2j * np.pi * nu * ks) for nu in nus]
    X = np.stack(cols, axis=1)
    y = z * np.exp(-1j * alpha / K)
    sol = np.linalg.lstsq(X, y, rcond=None)[0]
    return np.linalg.norm(X @ sol - y) / np.linalg.norm(y)


def refine_phases(ks, z, nus, n: int = 6, shift: int = 2, power: float = -1.5,
                  alpha_range=(-40.0, 40.0), starts: int = 17):
    """Jointly refine the common slow phase alpha and the sector frequencies.

    Multi-start Nelder-Mead on the log residual of the float trans-series fit.
    """
    ks = np.asarray(ks, dtype=float)
    z = np.asarray(z, dtype=complex)
    f = lambda p: np.log(_float_residual(ks, z, p, n, shift, power) + 1e-300)
    best = None
    for a0 in np.linspace(*alpha_range, starts):
        r = minimize(f, [a0, *nus], method="Nelder-Mead",
                     options={"xatol": 1e-13, "fatol": 1e-13, "maxiter": 6000})
        if best is None or r.fun < best.fun:
            best = r
    return float(best.x[0]), [float(x) % 1 for x in best.x[1:]], float(np.exp(best.fun))


def run_pipeline(graph: PlumbingGraph | None = None, cfg: PipelineConfig | None = None,
                 sweep: asy.KSweep | None = None) -> PipelineReport:
    cfg = cfg or PipelineConfig()
    graph = graph if graph is not None else poincare_star()
    warnings = []
    if sweep is None:
        sweep = asy.k_sweep("su2", graph, min(cfg.k_min, cfg.fit_k_min), cfg.k_max,
                            precision=cfg.precision, workers=cfg.workers)
    spec = asy.phase_spectrum(sweep.window(cfg.k_min, cfg.k_max), threshold=cfg.threshold)
    nus0 = spec.locations()
    fit_sw = sweep.window(cfg.fit_k_min, cfg.k_max)
    alpha, nus, _ = refine_phases(fit_sw.k_values, fit_sw.as_array(), nus0,
                                  shift=cfg.shift, power=cfg.trivial_power)
    phases = [asy.snap_frequency(nu, cfg.snap_den, cfg.snap_tol) for nu in nus]
    alpha_mp, alpha_frac = asy.snap_to_pi_rational(mpmath.mpf(alpha), cfg.snap_den, 1e-7)
    if alpha_frac is None:
        warnings.append(f"common phase alpha={alpha:.10g} not snapped")
    with mpmath.workdps(cfg.precision):
        mp_phases = [mpmath.mpf(p.numerator) / p.denominator if isinstance(p, Fraction) else mpmath.mpf(p)
                     for p in phases]
        fit = asy.transseries_fit(fit_sw.k_values, fit_sw.values, mp_phases, cfg.n_trivial, 0,
                                  power=mpmath.mpf(cfg.trivial_power), shift=cfg.shift,
                                  alpha=alpha_mp, precision=cfg.precision)
        series = fit.trivial_series()
        b = to_instanton_variable(series)
    report = borel_poles(b, precision=cfg.precision)
    cs = [Fraction(0)] + [p for p in phases]
    matches = stokes_location_check(report, cs, cfg.stokes_tol)
    if not any(m.matched for m in matches):
        warnings.append("no stable Borel pole within tolerance of a phase gap")
    amps = {p: fit.sectors[mp][0] for p, mp in zip(phases, mp_phases)}
    return PipelineReport(nus0, phases, alpha_mp, alpha_frac, amps, fit.residual, series,
                          report.poles, matches, warnings)
