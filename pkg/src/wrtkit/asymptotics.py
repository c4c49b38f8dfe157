"""Level sweeps, DFT phase spectra and large-k fits of RT invariants.

Frequencies follow Z(k) ~ exp(2 pi i k nu), so a flat connection with action
CS shows up at nu = CS mod 1.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .numeric import numeric_mtc, rt_invariant_numeric, to_mpc
from .surgery import PlumbingGraph

DUAL_COXETER = {"su2": 2, "u1": 0}


@dataclass(frozen=True)
class KSweep:
    """Invariant values Z(k) over increasing levels.

    ``values`` are Python complex numbers, or mpmath mpc when the sweep was
    run at extended precision.
    """

    manifold: PlumbingGraph | None
    family: str
    k_values: tuple[int, ...]
    values: tuple
    normalization: str = "raw"
    precision: int | None = None

    def __post_init__(self):
        if len(self.k_values) != len(self.values):
            raise ValueError("k_values and values differ in length")
        if any(b <= a for a, b in zip(self.k_values, self.k_values[1:])):
            raise ValueError("k_values must be strictly increasing")

    def __len__(self):
        return len(self.k_values)

    @property
    def step(self) -> int:
        steps = {b - a for a, b in zip(self.k_values, self.k_values[1:])}
        if len(steps) != 1:
            raise ValueError("levels are not uniformly spaced")
        return steps.pop()

    def as_array(self) -> np.ndarray:
        return np.array([complex(v) for v in self.values])

    def window(self, k_min: int, k_max: int) -> "KSweep":
        idx = [i for i, k in enumerate(self.k_values) if k_min <= k <= k_max]
        return KSweep(self.manifold, self.family, tuple(self.k_values[i] for i in idx),
                      tuple(self.values[i] for i in idx), self.normalization, self.precision)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "re", "im"])
        for k, z in zip(self.k_values, self.values):
            if isinstance(z, mpmath.mpc):
                w.writerow([k, mpmath.nstr(z.real, self.precision, min_fixed=1, max_fixed=0),
                            mpmath.nstr(z.imag, self.precision, min_fixed=1, max_fixed=0)])
            else:
                z = complex(z)
                w.writerow([k, repr(z.real), repr(z.imag)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, family: str = "su2", normalization: str = "raw",
                 precision: int | None = None, manifold: PlumbingGraph | None = None) -> "KSweep":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip().lower() for c in rows[0]] != ["k", "re", "im"]:
            raise ValueError("sweep CSV must have header k,re,im")
        ks, vals = [], []
        for row in rows[1:]:
            if not row:
                continue
            ks.append(int(row[0]))
            if precision is None:
                vals.append(complex(float(row[1]), float(row[2])))
            else:
                with mpmath.workdps(precision):
                    vals.append(mpmath.mpc(row[1], row[2]))
        return cls(manifold, family, tuple(ks), tuple(vals), normalization, precision)


def _eval_level(args):
    family, k, graph_dict, precision, normalization = args
    g = PlumbingGraph.from_dict(graph_dict)
    nm = numeric_mtc(family, k, precision)
    z = rt_invariant_numeric(nm, g)
    if normalization == "divided-by-S3":
        z = z * nm.total_dim
    if precision is None:
        return complex(z)
    # strings survive pickling between processes without precision loss
    w = to_mpc(z)
    return (mpmath.nstr(w.real, precision + 5), mpmath.nstr(w.imag, precision + 5))


def k_sweep(family: str, graph: PlumbingGraph, k_min: int, k_max: int,
            normalization: str = "raw", precision: int | None = None,
            workers: int = 1) -> KSweep:
    """Evaluate Z(k) for k_min <= k <= k_max (even k only for U(1)).

    ``precision=None`` uses complex128; an integer runs at that many digits.
    ``normalization="divided-by-S3"`` divides by Z(S^3) = 1/D.
    """
    if normalization not in ("raw", "divided-by-S3"):
        raise ValueError(f"unknown normalization {normalization!r}")
    if k_min < 1 or k_max < k_min:
        raise ValueError("need 1 <= k_min <= k_max")
    ks = [k for k in range(k_min, k_max + 1) if family != "u1" or k % 2 == 0]
    jobs = [(family, k, graph.to_dict(), precision, normalization) for k in ks]
    if workers == 1 or len(jobs) < 8:
        out = [_eval_level(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers or None) as pool:
            out = list(pool.map(_eval_level, jobs, chunksize=4))
    if precision is not None:
        with mpmath.workdps(precision + 5):
            out = [mpmath.mpc(re, im) for re, im in out]
    return KSweep(graph, family, tuple(ks), tuple(out), normalization, precision)


# ---------------------------------------------------------------------------
# spectra


def dft(sweep: KSweep) -> np.ndarray:
    """X_j = (1/W) sum_n z_n exp(-2 pi i j n / W), so sum |X_j|^2 = mean |z|^2."""
    z = sweep.as_array()
    return np.fft.fft(z) / len(z)


@dataclass(frozen=True)
class PhaseSpectrum:
    peaks: tuple  # (location, amplitude), location a Fraction when snapped
    window: tuple[int, int]
    threshold: float
    resolution: float = 0.0

    def locations(self) -> list[float]:
        return [float(loc) for loc, _ in self.peaks]

    def to_json(self) -> str:
        return json.dumps({"peaks": [{"loc": str(loc), "amp": float(a)} for loc, a in self.peaks],
                           "window": list(self.window), "threshold": self.threshold})

    @classmethod
    def from_json(cls, text: str) -> "PhaseSpectrum":
        d = json.loads(text)
        peaks = []
        for p in d["peaks"]:
            loc = p["loc"]
            peaks.append((Fraction(loc) if "/" in loc or loc.lstrip("-").isdigit() else float(loc),
                          float(p["amp"])))
        return cls(tuple(peaks), tuple(d["window"]), float(d.get("threshold", 0.05)))


def _circ_dist(a: float, b: float, period: float = 1.0) -> float:
    d = (a - b) % period
    return min(d, period - d)


def snap_frequency(nu: float, max_den: int, tol: float):
    """Nearest rational with denominator <= max_den if within tol (mod 1), else nu."""
    best = None
    for q in range(1, max_den + 1):
        p = round(nu * q)
        cand = Fraction(p, q)
        d = abs(nu - p / q)
        if best is None or d < best[1] - 1e-15:
            best = (cand, d)
    if best[1] <= tol:
        return best[0] % 1
    return nu


def _taper(name: str, n: int) -> np.ndarray:
    if name == "blackman":
        return np.blackman(n)
    if name in ("rect", "none"):
        return np.ones(n)
    if name == "hann":
        return np.hanning(n)
    raise ValueError(f"unknown taper {name!r}")


def phase_spectrum(sweep: KSweep, threshold: float = 0.05, snap_denominator: int | None = None,
                   pad: int = 1 << 14, taper: str = "blackman") -> PhaseSpectrum:
    """Peaks of the tapered, zero-padded DFT of k -> Z(k).

    Amplitudes are normalised so a pure exp(2 pi i k nu) of modulus A reads A.
    Peaks below ``threshold`` times the largest are dropped; peaks closer than
    the resolution 1/(k_max - k_min) are merged.
    """
    W = len(sweep)
    if W < 32:
        raise ValueError(f"window too short for a spectrum ({W} < 32 samples)")
    s = sweep.step
    z = sweep.as_array()
    w = _taper(taper, W)
    P = max(pad, 1 << int(math.ceil(math.log2(4 * W))))
    amp = np.abs(np.fft.fft(z * w, P)) / w.sum()
    # index n = (k - k0)/s, so bin f corresponds to nu = f/s (mod 1/s)
    top = amp.max()
    is_max = (amp >= np.roll(amp, 1)) & (amp >= np.roll(amp, -1)) & (amp > threshold * top)
    res = 1.0 / (sweep.k_values[-1] - sweep.k_values[0])
    cands = []
    for i in np.flatnonzero(is_max):
        nu = (i / P) / s
        cands.append((nu % (1.0 / s), float(amp[i])))
    cands.sort(key=lambda t: -t[1])
    kept = []
    for nu, a in cands:
        if all(_circ_dist(nu, m, 1.0 / s) >= res for m, _ in kept):
            kept.append((nu, a))
    peaks = []
    for nu, a in kept:
        loc = snap_frequency(nu, snap_denominator, res) if snap_denominator else nu
        peaks.append((loc, a))
    return PhaseSpectrum(tuple(peaks), (sweep.k_values[0], sweep.k_values[-1]), threshold, res)


def component_amplitude(sweep: KSweep, nu: float, taper: str = "blackman") -> complex:
    """Tapered average of Z(k) exp(-2 pi i k nu) over the sweep."""
    z = sweep.as_array()
    k = np.array(sweep.k_values, dtype=float)
    w = _taper(taper, len(z))
    return complex(np.sum(z * w * np.exp(-2j * np.pi * k * nu)) / w.sum())


def trivial_coeff(sweep: KSweep, window: int | None = None, taper: str = "blackman",
                  stride: int = 1) -> tuple[list[float], list[complex]]:
    """Zero-frequency component c0 over sliding windows.

    Returns (centre levels, c0 values).  With ``window=None`` a single window
    covering the whole sweep is used.
    """
    W = window or len(sweep)
    if W > len(sweep):
        raise ValueError("window longer than the sweep")
    z = sweep.as_array()
    w = _taper(taper, W)
    ks = np.array(sweep.k_values, dtype=float)
    centres, vals = [], []
    for start in range(0, len(z) - W + 1, stride):
        seg = z[start:start + W]
        vals.append(complex(np.sum(seg * w) / w.sum()))
        centres.append(float(ks[start:start + W].mean()))
    return centres, vals


# ---------------------------------------------------------------------------
# fits


@dataclass
class FitResult:
    amplitude: complex
    coeffs: list  # a_1 .. a_n
    residual: float
    condition: float
    shift: int = 0
    d: float | None = None
    drift: list = field(default_factory=list)
    stable: bool = True

    def to_dict(self) -> dict:
        c = lambda z: [float(complex(z).real), float(complex(z).imag)]
        return {"amplitude": c(self.amplitude), "coeffs": [c(a) for a in self.coeffs],
                "residual": self.residual, "condition": self.condition, "shift": self.shift,
                "d": self.d, "drift": self.drift, "stable": self.stable}


def _lstsq(ks, values, n_max, shift, d):
    ks = np.asarray(ks, dtype=float)
    K = ks + shift
    pref = K ** (d / 2) if d is not None else np.ones_like(K)
    scale = K.max()
    X = np.stack([pref * (scale / K) ** n for n in range(n_max + 1)], axis=1)
    y = np.asarray([complex(v) for v in values])
    sol, *_ = np.linalg.lstsq(X.astype(complex), y, rcond=None)
    resid = float(np.linalg.norm(X @ sol - y) / max(np.linalg.norm(y), 1e-300))
    cond = float(np.linalg.cond(X))
    coef = sol * scale ** np.arange(n_max + 1)
    A = coef[0]
    a = list(coef[1:] / A) if A != 0 else [complex("nan")] * n_max
    return complex(A), [complex(x) for x in a], resid, cond


def perturbative_fit(ks: Sequence[float], values: Sequence, n_max: int, shift: int = 0,
                     d: float | None = None, drift_tol: float = 0.02, atol: float = 1e-8,
                     max_condition: float = 1e14) -> FitResult:
    """Least-squares fit c(k) = (k+s)^(d/2) A (1 + sum_n a_n (k+s)^-n).

    The fit is repeated on both halves of the data; any a_n moving by more than
    ``drift_tol`` (relative, with absolute floor ``atol``) marks the result
    unstable.
    """
    if len(ks) < 3 * n_max or len(ks) < 2:
        raise ValueError(f"need at least 3*n_max = {3 * n_max} points, got {len(ks)}")
    A, a, resid, cond = _lstsq(ks, values, n_max, shift, d)
    if cond > max_condition:
        raise np.linalg.LinAlgError(f"ill-conditioned fit (condition number {cond:.3g})")
    h = len(ks) // 2
    drift, stable = [], True
    if n_max and h >= max(2, n_max + 1):
        _, a1, _, _ = _lstsq(ks[:h], values[:h], n_max, shift, d)
        _, a2, _, _ = _lstsq(ks[h:], values[h:], n_max, shift, d)
        for x, y in zip(a1, a2):
            gap = abs(x - y)
            drift.append(gap / max(abs(x), abs(y), 1e-300))
            if gap > drift_tol * max(abs(x), abs(y)) + atol:
                stable = False
    return FitResult(A, a, resid, cond, shift, d, drift, stable)


def compare_shifts(ks, values, n_max: int, family: str = "su2", d: float | None = None) -> dict:
    """Fit with k and with k + h (dual Coxeter number) and report the better residual."""
    out = {}
    for s in sorted({0, DUAL_COXETER.get(family, 0)}):
        out[s] = perturbative_fit(ks, values, n_max, shift=s, d=d)
    best = min(out, key=lambda s: out[s].residual)
    return {"fits": out, "best_shift": best}


@dataclass
class TransseriesFit:
    """Coefficients of Z(k) exp(-i alpha/K) = K^p sum_n t_n K^-n + sum_A e^{2 pi i k nu_A} sum_n c_{A,n} K^-n."""

    trivial: list  # t_0..t_N (mpmath mpc)
    sectors: dict  # nu -> [c_0..]
    residual: object
    shift: int
    power: object
    alpha: object

    def trivial_series(self) -> list:
        """t_n / t_0, the normalised series in 1/K."""
        return [t / self.trivial[0] for t in self.trivial]


def transseries_fit(ks: Sequence[int], values: Sequence, phases: Sequence, n_trivial: int,
                    n_sector: int = 0, power=mpmath.mpf(-3) / 2, shift: int = 2,
                    alpha=0, precision: int = 40) -> TransseriesFit:
    """Linear least squares for the trans-series ansatz with fixed phases.

    Columns are rescaled by K_max so the system stays well conditioned.
    """
    with mpmath.workdps(precision):
        K0 = mpmath.mpf(max(ks) + shift)
        p = mpmath.mpf(power)
        rows, rhs = [], []
        for k, z in zip(ks, values):
            K = mpmath.mpf(k + shift)
            row = [(K / K0) ** p * (K0 / K) ** n for n in range(n_trivial + 1)]
            for nu in phases:
                e = mpmath.expjpi(2 * mpmath.mpf(nu) * k)
                row += [e * (K0 / K) ** n for n in range(n_sector + 1)]
            rows.append(row)
            rhs.append(mpmath.mpc(z) * mpmath.expj(-mpmath.mpf(alpha) / K))
        x, res = mpmath.qr_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        norm = mpmath.sqrt(sum(abs(r) ** 2 for r in rhs))
        triv = [x[n] * K0 ** (-p) * K0 ** n for n in range(n_trivial + 1)]
        sectors = {}
        off = n_trivial + 1
        for nu in phases:
            sectors[nu] = [x[off + n] * K0 ** n for n in range(n_sector + 1)]
            off += n_sector + 1
        return TransseriesFit(triv, sectors, res / norm, shift, p, alpha)


def snap_to_pi_rational(x, max_den: int = 240, tol: float = 1e-6):
    """Write x as (p/q) pi when possible; returns (value, Fraction or None)."""
    r = Fraction(float(x / mpmath.pi)).limit_denominator(max_den)
    if abs(float(x / mpmath.pi) - float(r)) < tol:
        return mpmath.pi * mpmath.mpf(r.numerator) / r.denominator, r
    return x, None


def bohr_sommerfeld_orbits(k: int) -> list[float]:
    """Quantised pillowcase orbits alpha_j = j pi/(k+2), j = 1..k+1."""
    if k < 1:
        raise ValueError("level must be positive")
    return [j * math.pi / (k + 2) for j in range(1, k + 2)]
