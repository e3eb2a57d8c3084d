"""Command-line front end.

Subcommands:
    ground-state   closed-form soliton data (rho0, G, I_rho, omega_rho) + identity checks
    thresholds     full threshold report for a (params, manifold) instance
    sphere-scan    criterion table over k and alpha on R x S^k
    bifurcation    mass scan of the circle-waveguide solver (CSV rows + JSON summary)
    selftest       fast invariant suite, exit 0 iff everything passes

Common flags: --N --k --alpha --manifold {sphere:k | torus:L1[,L2...] |
generic:vol,mu1[,A,B]} --rho --rho-grid lo:hi:n --out {text|json|csv}
--config FILE --seed INT.  A config file holds key=value lines; explicit
flags win.  Exit codes: 0 ok, 1 numeric failure, 2 usage or domain error.

Every numeric field in JSON/CSV output carries a formula tag (a stable
identifier of the defining expression) so scans can be audited downstream.
Identical inputs and seeds produce byte-identical output.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import field_solver, gn_constants, ground_state, sphere_criteria, thresholds
from .errors import DomainError, NumericError
from .selftest import run_selftest

SCHEMA_VERSION = 1

FORMULA_TAGS = {
    "rho0": "soliton-mass(alpha,N)",
    "G": "energy-constant(alpha,N)",
    "I_rho": "ground-state-level(rho)",
    "omega_rho": "frequency-scaling(rho)",
    "grad_norm_sq": "gradient-identity(I_rho)",
    "lp_norm_pow": "potential-identity(I_rho)",
    "t_star": "gradient-cap(B,theta)",
    "rho_ex_basic": "existence-mass-basic(A,B,theta)",
    "rho_ex_improved": "existence-mass-improved(f-tilde-zero)",
    "rho_tr_upper": "nontriviality-upper(mu1,G,vol)",
    "lambda_ex": "anisotropy-weight(rho_ex_basic)",
    "criterion_basic": "strict-compare(rho_tr_upper,rho_ex_basic)",
    "criterion_improved": "f-tilde-sign-slope(R)",
    "T1": "beta-ratio-term",
    "T2": "rational-term",
    "T3": "power-term",
    "T4": "linear-term",
    "m_numeric": "flow-minimum-energy",
    "I_closed": "trivial-branch-level(L,rho)",
    "y_nontriviality": "nonzero-mode-mass-fraction",
    "t_ratio": "gradient-mass-ratio",
}


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "+inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def _json_safe(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "+inf" if value > 0 else "-inf"
    return value


def _emit_json(payload, stream):
    json.dump(payload, stream, indent=2, sort_keys=True)
    stream.write("\n")


def parse_manifold(text, k=None):
    """Parse --manifold grammar into a ManifoldSpec."""
    try:
        kind, _, rest = text.partition(":")
        if kind == "sphere":
            return gn_constants.ManifoldSpec.sphere(int(rest))
        if kind == "torus":
            lengths = [float(v) for v in rest.split(",") if v]
            return gn_constants.ManifoldSpec.flat_torus(lengths)
        if kind == "generic":
            parts = [float(v) for v in rest.split(",") if v]
            if len(parts) < 2:
                raise ValueError("generic needs at least vol,mu1")
            vol, mu1 = parts[0], parts[1]
            A = parts[2] if len(parts) > 2 else None
            B = parts[3] if len(parts) > 3 else None
            if k is None:
                raise ValueError("generic manifolds need --k for the dimension")
            return gn_constants.ManifoldSpec.generic(dim=k, vol=vol, mu1=mu1, A=A, B=B)
    except (ValueError, TypeError) as exc:
        raise DomainError(f"cannot parse manifold {text!r}: {exc}") from exc
    raise DomainError(f"unknown manifold kind in {text!r}")


def parse_rho_grid(text):
    try:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise DomainError(f"cannot parse rho grid {text!r}, expected lo:hi:n") from exc
    if not (0.0 < lo < hi and n >= 2):
        raise DomainError(f"rho grid needs 0 < lo < hi and n >= 2, got {text!r}")
    return list(np.linspace(lo, hi, n))


def _read_config_file(path):
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_ground_state(args, stream):
    alpha, N, rho = args.alpha, args.N, args.rho
    if alpha is None or rho is None:
        raise DomainError("ground-state needs --alpha and --rho")
    gs = ground_state.ground_state_data(alpha, N)
    level = ground_state.i_rho(alpha, N, rho)
    grad_sq, lp = ground_state.ground_state_identities(alpha, N, rho)
    omega = ground_state.omega_rho(alpha, N, rho)
    defect = abs(0.5 * grad_sq - lp / (2.0 + alpha) - level)
    record = {
        "schema": SCHEMA_VERSION,
        "alpha": alpha,
        "N": N,
        "rho": rho,
        "rho0": gs.rho0,
        "G": gs.G,
        "I_rho": level,
        "omega_rho": omega,
        "grad_norm_sq": grad_sq,
        "lp_norm_pow": lp,
        "energy_identity_defect": defect,
        "tags": {k: FORMULA_TAGS[k] for k in
                 ("rho0", "G", "I_rho", "omega_rho", "grad_norm_sq", "lp_norm_pow")},
    }
    if args.out == "json":
        _emit_json({k: _json_safe(v) for k, v in record.items()}, stream)
    else:
        for key in ("rho0", "G", "I_rho", "omega_rho", "grad_norm_sq", "lp_norm_pow"):
            stream.write(f"{key:15s} {_fmt(record[key]):>22s}   [{FORMULA_TAGS[key]}]\n")
        stream.write(f"{'identity-defect':15s} {_fmt(defect):>22s}\n")
    return 0


def _report_payload(params, manifold, report):
    body = {
        "schema": SCHEMA_VERSION,
        "N": params.N,
        "k": params.k,
        "alpha": params.alpha,
        "manifold": {
            "kind": manifold.kind,
            "dim": manifold.dim,
            "vol": manifold.vol,
            "mu1": manifold.mu1,
        },
        "t_star": _json_safe(report.t_star),
        "rho_ex_basic": report.rho_ex_basic,
        "rho_ex_improved": (
            report.rho_ex_improved
            if report.rho_ex_improved is not None
            else report.rho_ex_improved_status
        ),
        "rho_ex_improved_status": report.rho_ex_improved_status,
        "rho_tr_upper": report.rho_tr_upper,
        "lambda_ex": report.lambda_ex,
        "criterion_basic": report.criterion_basic,
        "criterion_improved": report.criterion_improved,
        "conditional_on_B": report.conditional_on_B,
        "tags": {
            k: FORMULA_TAGS[k]
            for k in (
                "t_star",
                "rho_ex_basic",
                "rho_ex_improved",
                "rho_tr_upper",
                "lambda_ex",
                "criterion_basic",
                "criterion_improved",
            )
        },
    }
    return body


def cmd_thresholds(args, stream):
    if args.alpha is None or args.manifold is None:
        raise DomainError("thresholds needs --alpha and --manifold")
    manifold = parse_manifold(args.manifold, k=args.k)
    params = ground_state.ProblemParams(N=args.N, k=manifold.dim, alpha=args.alpha)
    report = thresholds.threshold_report(params, manifold)
    payload = _report_payload(params, manifold, report)
    if args.out == "json":
        _emit_json(payload, stream)
    else:
        if report.conditional_on_B:
            stream.write(
                "WARNING: inequality constants for this manifold are configured, "
                "not derived; every value below is conditional on them.\n"
            )
        for key in (
            "t_star",
            "rho_ex_basic",
            "rho_ex_improved",
            "rho_tr_upper",
            "lambda_ex",
            "criterion_basic",
            "criterion_improved",
        ):
            stream.write(f"{key:18s} {_fmt(payload[key]):>22s}   [{FORMULA_TAGS[key]}]\n")
    return 0


_SCAN_COLUMNS = (
    "k",
    "alpha",
    "T1",
    "T2",
    "T3",
    "T4",
    "exact_holds",
    "mass_critical_holds",
    "rough11",
    "rough9",
    "improved_holds",
)


def cmd_sphere_scan(args, stream):
    k_values = range(args.k_min, args.k_max + 1)
    rows = sphere_criteria.sphere_scan(k_values, alpha_step=args.alpha_step)
    if args.out == "json":
        payload = {
            "schema": SCHEMA_VERSION,
            "alpha_step": args.alpha_step,
            "tags": {k: FORMULA_TAGS[k] for k in ("T1", "T2", "T3", "T4")},
            "rows": [
                {c: _json_safe(getattr(r, c)) for c in _SCAN_COLUMNS} for r in rows
            ],
        }
        _emit_json(payload, stream)
    else:
        stream.write("# formula tags: " + "; ".join(
            f"{k}={FORMULA_TAGS[k]}" for k in ("T1", "T2", "T3", "T4")) + "\n")
        stream.write(",".join(_SCAN_COLUMNS) + "\n")
        for r in rows:
            cells = []
            for c in _SCAN_COLUMNS:
                v = getattr(r, c)
                cells.append("" if v is None else _fmt(v))
            stream.write(",".join(cells) + "\n")
    return 0


_BIF_COLUMNS = (
    "rho",
    "m_numeric",
    "I_closed",
    "y_nontriviality",
    "t_ratio",
    "iterations",
    "status",
)


def cmd_bifurcation(args, stream):
    if args.alpha is None or args.rho_grid is None:
        raise DomainError("bifurcation needs --alpha and --rho-grid")
    manifold = parse_manifold(args.manifold or "torus:6.283185307179586", k=1)
    if manifold.kind != gn_constants.FLAT_TORUS or manifold.dim != 1:
        raise DomainError("the bifurcation solver runs on a single circle (torus:L)")
    params = ground_state.ProblemParams(N=args.N, k=1, alpha=args.alpha)
    config = field_solver.ScanConfig(
        L=manifold.vol,
        nx=args.nx,
        ny=args.ny,
        epsilon=args.epsilon,
        flow=field_solver.FlowConfig(max_iters=args.max_iters),
    )
    result = field_solver.bifurcation_scan(args.rho_grid, params, config)
    summary = {
        "schema": SCHEMA_VERSION,
        "alpha": params.alpha,
        "L": manifold.vol,
        "epsilon": config.epsilon,
        "rho_tr_estimate": _json_safe(
            result.rho_tr_estimate if result.rho_tr_estimate is not None else math.nan
        ),
        "rho_tr_upper": result.rho_tr_upper,
        "tags": {
            "rho_tr_estimate": "first-nontrivial-scan-row",
            "rho_tr_upper": FORMULA_TAGS["rho_tr_upper"],
            "m_numeric": FORMULA_TAGS["m_numeric"],
            "I_closed": FORMULA_TAGS["I_closed"],
        },
    }
    if args.out == "json":
        payload = dict(summary)
        payload["rows"] = [
            {c: _json_safe(getattr(r, c)) for c in _BIF_COLUMNS} for r in result.rows
        ]
        _emit_json(payload, stream)
    else:
        stream.write(",".join(_BIF_COLUMNS) + "\n")
        for r in result.rows:
            stream.write(",".join(_fmt(getattr(r, c)) for c in _BIF_COLUMNS) + "\n")
        stream.write("# summary: " + json.dumps(
            {k: summary[k] for k in ("rho_tr_estimate", "rho_tr_upper")},
            sort_keys=True) + "\n")
    # physics-diverged rows are honest scan output; only row-level errors are
    # a numeric failure of the run itself
    if any(str(r.status).startswith("error:") for r in result.rows):
        return 1
    return 0


def cmd_selftest(args, stream):
    ok, results = run_selftest(seed=args.seed)
    for name, passed, elapsed in results:
        stream.write(f"{name:14s} {'PASS' if passed else 'FAIL'}  {elapsed:8.3f}s\n")
    stream.write("selftest: " + ("PASS" if ok else "FAIL") + "\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="waveguide-nls",
        description="thresholds and bifurcation numerics for constrained NLS "
        "on product domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--N", type=int, default=1)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--manifold", type=str, default=None)
        p.add_argument("--rho", type=float, default=None)
        p.add_argument("--rho-grid", dest="rho_grid", type=parse_rho_grid, default=None)
        p.add_argument("--out", choices=("text", "json", "csv"), default="text")
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--seed", type=int, default=1234)

    p = sub.add_parser("ground-state", help="closed-form soliton data")
    common(p)
    p = sub.add_parser("thresholds", help="threshold report")
    common(p)
    p = sub.add_parser("sphere-scan", help="criterion table on R x S^k")
    common(p)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--alpha-step", type=float, default=0.01)
    p = sub.add_parser("bifurcation", help="circle-waveguide mass scan")
    common(p)
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--ny", type=int, default=64)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=400_000)
    p = sub.add_parser("selftest", help="run the invariant suite")
    common(p)
    return parser


_CONFIG_TYPES = {
    "N": int,
    "k": int,
    "alpha": float,
    "manifold": str,
    "rho": float,
    "rho_grid": parse_rho_grid,
    "out": str,
    "seed": int,
    "k_min": int,
    "k_max": int,
    "alpha_step": float,
    "nx": int,
    "ny": int,
    "epsilon": float,
    "max_iters": int,
}


def _apply_config_file(args, argv):
    if not args.config:
        return args
    file_values = _read_config_file(args.config)
    explicit = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
                for tok in argv if tok.startswith("--")}
    for key, raw in file_values.items():
        if key not in _CONFIG_TYPES:
            raise DomainError(f"unknown config key {key!r}")
        if key in explicit or not hasattr(args, key):
            continue
        setattr(args, key, _CONFIG_TYPES[key](raw))
    return args


COMMANDS = {
    "ground-state": cmd_ground_state,
    "thresholds": cmd_thresholds,
    "sphere-scan": cmd_sphere_scan,
    "bifurcation": cmd_bifurcation,
    "selftest": cmd_selftest,
}


def main(argv=None, stream=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config_file(args, argv)
        return COMMANDS[args.command](args, stream)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return int(exc.code) if exc.code is not None else 0


if __name__ == "__main__":
    sys.exit(main())
