"""Sweep the Poincare sphere, extract phases, fit the trivial-sector series and look for Borel poles.

    python scripts/poincare_pipeline.py --k-max 200
    python scripts/poincare_pipeline.py --k-max 400 --fit-k-min 200 --n-trivial 14 --precision 50
"""

import argparse
import dataclasses
import json
import logging
from pathlib import Path

from wrtkit.pipeline import PipelineConfig, run_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in dataclasses.fields(PipelineConfig):
        ap.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    ap.add_argument("--out", type=Path)
    args = vars(ap.parse_args())
    out = args.pop("out")
    logging.basicConfig(level=logging.INFO)
    rep = run_pipeline(cfg=PipelineConfig(**args))
    d = rep.to_dict()
    print(f"DFT phases  : {[round(x, 5) for x in d['phases_dft']]}")
    print(f"refined     : {d['phases']}  alpha/pi = {d['alpha_over_pi']}  residual {d['fit_residual']:.2e}")
    print("series 1/K  : " + ", ".join(f"{re:+.4g}{im:+.4g}i" for re, im in d["trivial_series"][:6]))
    print(f"Borel poles : {d['poles']}")
    for w in d["warnings"]:
        print(f"warning     : {w}")
    if out:
        out.write_text(json.dumps(d, indent=1))


if __name__ == "__main__":
    main()
