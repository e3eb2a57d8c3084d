#!/usr/bin/env python3
"""Reproduce the full sphere criterion table and print the headline verdicts.

Writes out/sphere_scan.csv (same columns as `waveguide-nls sphere-scan`) and a
short console summary: per k, whether the exact condition holds across the
alpha window, the mass-critical verdict, and the improved-criterion pattern.
"""

import io
import pathlib
import sys

from waveguide_nls import cli, sphere_criteria as sc

K_MIN, K_MAX = 2, 12
ALPHA_STEP = 0.01


def main():
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "out"
    out_dir.mkdir(exist_ok=True)
    stream = io.StringIO()
    code = cli.main(
        [
            "sphere-scan",
            "--k-min",
            str(K_MIN),
            "--k-max",
            str(K_MAX),
            "--alpha-step",
            str(ALPHA_STEP),
            "--out",
            "csv",
        ],
        stream=stream,
    )
    if code != 0:
        return code
    path = out_dir / "sphere_scan.csv"
    path.write_text(stream.getvalue(), encoding="utf-8")
    print(f"wrote {path}")

    rows = sc.sphere_scan(range(K_MIN, K_MAX + 1), alpha_step=ALPHA_STEP)
    for k in range(K_MIN, K_MAX + 1):
        mine = [r for r in rows if r.k == k]
        exact_all = all(r.exact_holds for r in mine)
        improved = [r.improved_holds for r in mine]
        if all(improved):
            pattern = "improved: all alpha"
        elif not any(improved):
            pattern = "improved: never"
        else:
            first_false = mine[improved.index(False)].alpha
            pattern = f"improved: prefix up to alpha < {first_false:.2f}"
        print(
            f"k={k:2d}  exact_all={str(exact_all):5s}  "
            f"mass_critical={str(sc.sphere_mass_critical(k)):5s}  "
            f"coarse(k>=11)={str(sc.rough_bound_coarse(k)):5s}  "
            f"refined(k>=9)={str(sc.rough_bound_refined(k)):5s}  {pattern}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
