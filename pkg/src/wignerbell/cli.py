"""Command-line front end.

Every subcommand prints a table (CSV, default) or a JSON document and
exits 0 on success, 1 when a verification fails and 2 on usage errors.
"""
import argparse
import io
import json
import math
import sys

import numpy as np

from . import bell, logical_model, phase_space
from .errors import InvalidArgument

VERIFY_TOL = 1e-12
MC_Z_LIMIT = 5.0
PAIR_LABELS = ("11", "12", "21", "22")


def _floats(text, count, what):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} must be {count} comma-separated numbers")
    if len(vals) != count:
        raise argparse.ArgumentTypeError(f"{what} must be {count} comma-separated numbers")
    return vals


def parse_alpha(text):
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError("alpha must be 're' or 're,im'")
    try:
        vals = [float(v) for v in parts]
    except ValueError:
        raise argparse.ArgumentTypeError("alpha must be 're' or 're,im'")
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def parse_settings(text):
    return _floats(text, 4, "--settings")


def parse_grid(text):
    lo, hi, steps = _floats(text, 3, "--grid")
    if steps != int(steps):
        raise argparse.ArgumentTypeError("--grid steps must be an integer")
    try:
        return phase_space.GridSpec(lo, hi, int(steps))
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--alpha", type=parse_alpha, default=complex(2.0),
                   help="coherent amplitude as re[,im] (default 2). Correlations at "
                        "x-measurements depend on Re(alpha) only; Im(alpha) shifts momentum means")
    g.add_argument("--variance", type=float, default=phase_space.DEFAULT_VARIANCE,
                   help="per-quadrature variance of each coherent mode (default 0.5)")
    g.add_argument("--settings", type=parse_settings, default=None, metavar="T1,T2,P1,P2",
                   help="transformation angles (default 0,pi/4,pi/8,-pi/8); use --settings=... when the first is negative")
    for name in ("theta1", "theta2", "phi1", "phi2"):
        g.add_argument(f"--{name}", type=float, default=None, help=f"override {name}")
    g.add_argument("--degrees", action="store_true", help="angles are given in degrees")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--samples", type=int, default=1_000_000)
    g.add_argument("--grid", type=parse_grid, default=phase_space.GridSpec(-4.0, 4.0, 101),
                   metavar="MIN,MAX,STEPS", help="phase-space grid per axis (default -4,4,101); write --grid=-4,4,101 when min is negative")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--output", default=None, metavar="PATH", help="write here instead of stdout")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wignerbell",
        description="Bell violation with positive Wigner functions under operationally local transformations.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common()

    def add(name, help_, epilog):
        return sub.add_parser(name, parents=[common], help=help_, description=help_, epilog=epilog,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    add("chsh", "transformed-state CHSH value at fixed x-measurements",
        "CSV columns: quantity,value (corr_11..corr_22, chsh, chsh_mixtures, classical_bound, violation)")
    add("threshold", "amplitude Re(alpha) above which the optimal settings violate CHSH",
        "CSV columns: alpha_r_threshold")
    g = add("wigner-grid", "momentum-marginalised W11, W12, W21, W22 on an (x1, x2) grid",
            "CSV columns: x1,x2,w11,w12,w21,w22 (row-major, x1 slowest)")
    g.add_argument("--p-slice", action="store_true", help="emit the p1 = p2 = 0 slice instead of the marginal")
    v = add("verify-protocol", "check the entangled-ancilla protocol against the target states",
            "CSV columns: theta,phi,trace_distance")
    v.add_argument("--angles", type=int, default=5, help="angles k*pi/N per axis (default 5)")
    v.add_argument("--inject-sign-error", action="store_true", help=argparse.SUPPRESS)
    n = add("nogo", "gap between product bit-flip channels and the target states",
            "CSV columns: theta,phi,gap,closed_form,abs_diff")
    n.add_argument("--angles", type=int, default=5, help="angles k*pi/N per axis (default 5)")
    add("mc", "Monte Carlo vs analytic correlations for the four transformed states",
        "CSV columns: pair,analytic,monte_carlo,stderr,z")
    s = add("scan", "grid search of the transformed CHSH value over the four angles",
            "CSV columns: theta1,theta2,phi1,phi2,chsh")
    s.add_argument("--resolution", type=int, default=16)
    l = add("lhv-check", "sup-distances of W12, W21, W22 from W11",
            "CSV columns: d12,d21,d22,contradiction")
    l.add_argument("--full", action="store_true", help="compare full 4D densities (grid applied to all axes)")
    return parser


def resolve_settings(args):
    scale = math.pi / 180.0 if args.degrees else 1.0
    vals = list(bell.OPTIMAL_SETTINGS)
    if args.settings is not None:
        vals = [v * scale for v in args.settings]
    for k, name in enumerate(("theta1", "theta2", "phi1", "phi2")):
        override = getattr(args, name)
        if override is not None:
            vals[k] = override * scale
    return bell.TransformationSettings(*vals)


def _num(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    # shortest round-trip repr
    return repr(float(v))


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(v if isinstance(v, str) else _num(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_chsh(args):
    s = resolve_settings(args)
    ar = args.alpha.real
    corr = {lbl: bell.correlation_closed_form(s.thetas[i], s.phis[j], ar)
            for lbl, (i, j, _) in zip(PAIR_LABELS, bell.CHSH_PAIRS)}
    c = bell.chsh_transformed(s, ar)
    c_mix = bell.chsh_from_mixtures(bell.transformed_mixtures(s, args.alpha, args.variance))
    violation = c > bell.CLASSICAL_BOUND
    if args.format == "json":
        return 0, _json({"settings": dict(zip(("theta1", "theta2", "phi1", "phi2"), s.as_tuple())),
                         "alpha_r": ar, "correlations": corr, "chsh": c, "chsh_mixtures": c_mix,
                         "classical_bound": bell.CLASSICAL_BOUND, "violation": violation})
    rows = [(f"corr_{k}", v) for k, v in corr.items()]
    rows += [("chsh", c), ("chsh_mixtures", c_mix), ("classical_bound", bell.CLASSICAL_BOUND),
             ("violation", violation)]
    return 0, _csv(("quantity", "value"), rows)


def cmd_threshold(args):
    a = bell.threshold_alpha()
    if args.format == "json":
        return 0, _json({"alpha_r_threshold": round(a, 6)})
    return 0, f"alpha_r_threshold\n{a:.6f}\n"


def cmd_wigner_grid(args):
    mixtures = bell.transformed_mixtures(resolve_settings(args), args.alpha, args.variance)
    table = phase_space.grid_table(mixtures, args.grid, p_slice=args.p_slice)
    if args.format == "json":
        return 0, _json({"columns": list(phase_space.GRID_COLUMNS),
                         "rows": [[float(f"{v:.9g}") for v in row] for row in table]})
    buf = io.StringIO()
    phase_space.write_grid_csv(buf, table)
    return 0, buf.getvalue()


def _angle_grid(n):
    if n < 1:
        raise InvalidArgument("--angles must be positive")
    return [k * math.pi / n for k in range(n)]


def _flipped_unitary(theta):
    # every sin entry negated; still unitary, but rotates the wrong way
    m = np.array(logical_model.ancilla_unitary(theta).matrix)
    for i, j in ((3, 0), (0, 1), (1, 2), (2, 3)):
        m[i, j] = -m[i, j]
    return logical_model.AncillaUnitary(m)


def cmd_verify_protocol(args):
    # the sign error goes on Alice's side only; flipping both sides cancels
    unitary = _flipped_unitary if args.inject_sign_error else logical_model.ancilla_unitary
    rows = []
    for t in _angle_grid(args.angles):
        for p in _angle_grid(args.angles):
            got = logical_model.ancilla_protocol(t, p, unitary=unitary,
                                                 unitary_b=logical_model.ancilla_unitary)
            rows.append((t, p, logical_model.trace_distance(got, logical_model.rho_target(t, p))))
    worst = max(rows, key=lambda r: r[2])
    ok = worst[2] <= VERIFY_TOL
    if args.format == "json":
        out = _json({"rows": [dict(zip(("theta", "phi", "trace_distance"), r)) for r in rows],
                     "max_trace_distance": worst[2], "worst": {"theta": worst[0], "phi": worst[1]},
                     "tolerance": VERIFY_TOL, "verified": ok})
    else:
        out = _csv(("theta", "phi", "trace_distance"), rows)
        out += f"# max_trace_distance={worst[2]:.3g} worst_theta={worst[0]:.12g} worst_phi={worst[1]:.12g} verified={_num(ok)}\n"
    return (0 if ok else 1), out


def cmd_nogo(args):
    points = [(t, p) for t in _angle_grid(args.angles) for p in _angle_grid(args.angles)]
    points.append((math.pi / 4, math.pi / 4))
    rows = []
    for t, p in points:
        gap = logical_model.nogo_gap(t, p)
        closed = 0.5 * abs(math.sin(2 * t) * math.sin(2 * p))
        rows.append((t, p, gap, closed, abs(gap - closed)))
    ok = all(r[4] <= VERIFY_TOL for r in rows)
    if args.format == "json":
        keys = ("theta", "phi", "gap", "closed_form", "abs_diff")
        return (0 if ok else 1), _json({"rows": [dict(zip(keys, r)) for r in rows], "verified": ok})
    out = _csv(("theta", "phi", "gap", "closed_form", "abs_diff"), rows)
    out += f"# verified={_num(ok)}\n"
    return (0 if ok else 1), out


def cmd_mc(args):
    if args.samples < bell.MIN_MC_SAMPLES:
        raise InvalidArgument(f"--samples must be at least {bell.MIN_MC_SAMPLES}")
    mixtures = bell.transformed_mixtures(resolve_settings(args), args.alpha, args.variance)
    rows = []
    for k, (lbl, w) in enumerate(zip(PAIR_LABELS, mixtures)):
        exact = bell.correlation_analytic(w, 0.0, 0.0).value
        # one deterministic sub-seed per pair
        est = bell.correlation_mc(w, 0.0, 0.0, seed=args.seed * 4 + k, n=args.samples)
        z = (est.value - exact) / est.stderr if est.stderr > 0 else 0.0
        rows.append((lbl, exact, est.value, est.stderr, z))
    ok = all(abs(r[4]) <= MC_Z_LIMIT for r in rows)
    if args.format == "json":
        keys = ("pair", "analytic", "monte_carlo", "stderr", "z")
        return (0 if ok else 1), _json({"samples": args.samples, "seed": args.seed,
                                        "rows": [dict(zip(keys, r)) for r in rows], "verified": ok})
    return (0 if ok else 1), _csv(("pair", "analytic", "monte_carlo", "stderr", "z"), rows)


def cmd_scan(args):
    s, best = bell.scan_settings(args.alpha.real, args.resolution)
    if args.format == "json":
        return 0, _json({**dict(zip(("theta1", "theta2", "phi1", "phi2"), s.as_tuple())), "chsh": best})
    return 0, _csv(("theta1", "theta2", "phi1", "phi2", "chsh"), [(*s.as_tuple(), best)])


def cmd_lhv_check(args):
    r = bell.lhv_identity_check(resolve_settings(args), args.alpha, args.variance, args.grid, full=args.full)
    if args.format == "json":
        return 0, _json({"d12": r.d12, "d21": r.d21, "d22": r.d22, "contradiction": r.contradiction()})
    return 0, _csv(("d12", "d21", "d22", "contradiction"), [(r.d12, r.d21, r.d22, r.contradiction())])


COMMANDS = {
    "chsh": cmd_chsh,
    "threshold": cmd_threshold,
    "wigner-grid": cmd_wigner_grid,
    "verify-protocol": cmd_verify_protocol,
    "nogo": cmd_nogo,
    "mc": cmd_mc,
    "scan": cmd_scan,
    "lhv-check": cmd_lhv_check,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = COMMANDS[args.command](args)
    except InvalidArgument as exc:
        parser.print_usage(sys.stderr)
        print(f"wignerbell {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stdout = None
    return code


if __name__ == "__main__":
    sys.exit(main())
