"""Regenerate ``ml_reference.json``: Mittag-Leffler values from the mpmath series.

Run from the repository root:  python3 tests/data/make_ml_reference.py
"""

import json
import math
from pathlib import Path

import numpy as np

from hpfrac.mlf import MLParams, ml_reference

PAIRS = [(0.5, 0.5), (0.6, 1.0), (0.75, 0.75), (math.sqrt(2) / 2, math.sqrt(2) / 2)]
N_POINTS = 1000
R_MAX = 50.0
SEED = 20240611


def sample_points(rng, n):
    """Half log-uniform, half area-uniform moduli; |Arg w| uniform in [3pi/4, pi]."""
    n_log = n // 2
    r = np.concatenate(
        [
            np.exp(rng.uniform(math.log(1e-3), math.log(R_MAX), n_log)),
            R_MAX * np.sqrt(rng.uniform(0.0, 1.0, n - n_log)),
        ]
    )
    theta = rng.uniform(0.75 * math.pi, math.pi, n) * rng.choice([-1.0, 1.0], n)
    return r * np.exp(1j * theta)


def main():
    rng = np.random.default_rng(SEED)
    out = []
    for gamma, mu in PAIRS:
        pts = sample_points(rng, N_POINTS)
        params = MLParams(gamma, mu)
        vals = {}
        # largest modulus first so the cached 1/Gamma table is built once
        for i in np.argsort(-np.abs(pts)):
            vals[i] = complex(ml_reference(params, complex(pts[i])))
        for i, w in enumerate(pts):
            out.append([gamma, mu, w.real, w.imag, vals[i].real, vals[i].imag])
    path = Path(__file__).with_name("ml_reference.json")
    path.write_text(json.dumps({"seed": SEED, "r_max": R_MAX, "rows": out}))
    print(f"wrote {len(out)} rows to {path}")


if __name__ == "__main__":
    main()
