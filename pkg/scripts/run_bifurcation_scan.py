#!/usr/bin/env python3
"""Mass scan of the circle-waveguide solver around the instability threshold.

Runs the 12-point grid spanning [0.3, 1.5] x rho_tr_upper at (alpha, L) =
(2.5, 2 pi) on the 512 x 64 grid, then writes out/bifurcation.csv and
out/bifurcation_summary.json.  Below the threshold the rows converge onto the
closed-form trivial level; above it they leave the trivial branch (energy
strictly below the level, first circle harmonic grown) and, uncapped, run into
the supercritical collapse channel, which the solver flags as diverged.
"""

import json
import math
import pathlib
import sys
import time

import numpy as np

from waveguide_nls import field_solver as fs, ground_state as g, thresholds as th

ALPHA = 2.5
L = 2.0 * math.pi


def main():
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "out"
    out_dir.mkdir(exist_ok=True)
    params = g.ProblemParams(N=1, k=1, alpha=ALPHA)
    gs = g.ground_state_data(ALPHA, 1)
    upper = th.rho_tr_upper(params, (2.0 * math.pi / L) ** 2, gs, vol=L)
    rho_grid = list(np.linspace(0.3, 1.5, 12) * upper)
    config = fs.ScanConfig(L=L, nx=512, ny=64)

    started = time.perf_counter()
    result = fs.bifurcation_scan(rho_grid, params, config)
    elapsed = time.perf_counter() - started

    csv_path = out_dir / "bifurcation.csv"
    with csv_path.open("w", encoding="utf-8") as handle:
        handle.write("rho,m_numeric,I_closed,y_nontriviality,t_ratio,iterations,status\n")
        for r in result.rows:
            handle.write(
                f"{r.rho:.12g},{r.m_numeric:.12g},{r.I_closed:.12g},"
                f"{r.y_nontriviality:.12g},{r.t_ratio:.12g},{r.iterations},{r.status}\n"
            )
    summary = {
        "schema": 1,
        "alpha": ALPHA,
        "L": L,
        "epsilon": config.epsilon,
        "rho_tr_upper": result.rho_tr_upper,
        "rho_tr_estimate": result.rho_tr_estimate,
        "runtime_seconds": round(elapsed, 2),
    }
    json_path = out_dir / "bifurcation_summary.json"
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", "utf-8")

    print(f"wrote {csv_path} and {json_path} ({elapsed:.0f}s)")
    print(f"rho_tr_upper = {result.rho_tr_upper:.6f}")
    print(f"rho_tr_estimate = {result.rho_tr_estimate}")
    for r in result.rows:
        gap = (r.m_numeric - r.I_closed) / abs(r.I_closed)
        print(
            f"rho/upper={r.rho / result.rho_tr_upper:5.3f}  {r.status:12s} "
            f"(m-I)/|I|={gap:+.2e}  ynt={r.y_nontriviality:.2e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
