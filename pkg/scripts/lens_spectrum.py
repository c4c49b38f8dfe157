"""Phase spectra and zero-frequency amplitudes of Z(L(p,1))/Z(S^3) over a level window.

    python scripts/lens_spectrum.py --p 2 3 5 7 --k 20..276 --out runs/lens
"""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from wrtkit import asymptotics as asy
from wrtkit.cli import parse_range
from wrtkit.surgery import lens_graph


@dataclass
class LensRun:
    ps: list = field(default_factory=lambda: [2, 3, 5, 7])
    k_min: int = 20
    k_max: int = 276
    threshold: float = 0.05
    out: Path | None = None


def run(cfg: LensRun) -> dict:
    summary = {}
    for p in cfg.ps:
        sw = asy.k_sweep("su2", lens_graph(p, 1), cfg.k_min, cfg.k_max, normalization="divided-by-S3")
        spec = asy.phase_spectrum(sw, cfg.threshold, snap_denominator=4 * p)
        c0 = abs(asy.trivial_coeff(sw)[1][0])
        summary[p] = {"peaks": [(str(l), a) for l, a in spec.peaks], "c0": c0,
                      "c0_sqrt_p": c0 * p ** 0.5, "c0_p32": c0 * p ** 1.5}
        print(f"p={p}: peaks {[str(l) for l, _ in spec.peaks]} (bound {p // 2 + 1}), "
              f"c0={c0:.5f}, c0*sqrt(p)={c0 * p ** 0.5:.5f}, c0*p^1.5={c0 * p ** 1.5:.5f}")
        if cfg.out:
            cfg.out.mkdir(parents=True, exist_ok=True)
            (cfg.out / f"lens_{p}_1.csv").write_text(sw.to_csv())
    if cfg.out:
        (cfg.out / "summary.json").write_text(json.dumps(summary, indent=1))
    return summary


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", type=int, nargs="+", default=[2, 3, 5, 7])
    ap.add_argument("--k", default="20..276")
    ap.add_argument("--threshold", type=float, default=0.05)
    ap.add_argument("--out", type=Path)
    a = ap.parse_args()
    lo, hi = parse_range(a.k)
    run(LensRun(a.p, lo, hi, a.threshold, a.out))
