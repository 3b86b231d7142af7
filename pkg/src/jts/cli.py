"""Command-line interface.

Exit codes: 0 success, 2 unreadable or invalid input, 3 numerical failure,
4 a characterization condition fails, 5 a round-trip trial exceeds tolerance.
"""

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import core, forward, inverse, precision, trials
from .core import JTSError, Mode

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_CONDITION = 4
EXIT_ROUNDTRIP = 5


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _read_json(path):
    try:
        with open(path) if path != "-" else sys.stdin as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(EXIT_INPUT, f"{path}: expected a JSON object")
    return data


def _numbers(values, extended):
    if not isinstance(values, list):
        raise CliError(EXIT_INPUT, "expected a list of numbers")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise CliError(EXIT_INPUT, f"not a number: {v!r}")
    if extended:
        return [precision.to_extended(v) for v in values]
    return [float(v) for v in values]


def _scalar(value, extended):
    return precision.to_extended(value) if extended else float(value)


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_matrix(path, extended):
    d = _read_json(path)
    try:
        d = dict(d, q=_numbers(d["q"], extended), b=_numbers(d.get("b", []), extended))
        return core.matrix_from_dict(d)
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"{path}: missing field {exc}") from exc
    except core.InvalidInstance as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from exc


def _load_spectra(path, extended):
    d = _read_json(path)
    try:
        return core.InterlacedSpectra.unchecked(
            _numbers(d["lambdas"], extended), _numbers(d["mus"], extended),
            Mode(d.get("mode", "rank_one")))
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"{path}: missing field {exc}") from exc
    except (core.InvalidInstance, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from exc


def cmd_forward(args, extended):
    J = _load_matrix(args.matrix, extended)
    if not args.dn:
        if args.h1 is None or args.h2 is None:
            raise CliError(EXIT_INPUT, "forward needs --h1 and --h2, or --dn")
        if not args.h1 < args.h2:
            raise CliError(EXIT_INPUT, "--h1 must be below --h2")
    try:
        if args.dn:
            s = forward.dirichlet_neumann_spectra(J)
        else:
            s = forward.rank_one_spectra(J, _scalar(args.h1, extended), _scalar(args.h2, extended))
    except core.InvalidInstance as exc:
        # a valid matrix whose two spectra are not separated at this precision
        raise CliError(EXIT_NUMERIC, f"spectra not resolved at this precision, try a larger "
                                     f"--precision: {exc}") from exc
    _write(core.dumps(core.to_dict(s)), args.output)
    return EXIT_OK


def _check_mode(s, dn):
    want = Mode.DIRICHLET_NEUMANN if dn else Mode.RANK_ONE
    if s.mode is not want:
        raise CliError(EXIT_INPUT, f"spectra file is {s.mode.value}, command asked for {want.value}")


def cmd_inverse(args, extended):
    s = _load_spectra(args.spectra, extended)
    _check_mode(s, args.dn)
    if not args.dn and args.h1 is None:
        raise CliError(EXIT_INPUT, "inverse needs --h1 or --dn")
    h1 = None if args.dn else _scalar(args.h1, extended)
    res = inverse.recover(s, h1)
    _write(core.dumps(core.to_dict(res)), args.output)
    return EXIT_OK


def cmd_check(args, extended):
    s = _load_spectra(args.spectra, extended)
    try:
        report = inverse.check_conditions(s).to_dict()
    except core.IndeterminateInterlacing as exc:
        report = {"mode": s.mode.value, "passed": False, "failed": ["a"],
                  "verdicts": {"a": {"passed": False, "detail": str(exc)}}}
    sys.stdout.write(core.dumps(report))
    return EXIT_OK if report["passed"] else EXIT_CONDITION


def _trial_job(job):
    inst, mode, bits = job
    return trials.run_trial(inst, mode, bits)


CSV_FIELDS = ["trial", "n", "h1", "h2", "matrix_residual", "h2_residual", "trace_residual", "status"]


def cmd_roundtrip(args, bits):
    if args.n is not None and args.n < 1:
        raise CliError(EXIT_INPUT, "--n must be at least 1")
    if args.trials < 1:
        raise CliError(EXIT_INPUT, "--trials must be at least 1")
    mode = Mode.RANK_ONE if args.mode == "rank-one" else Mode.DIRICHLET_NEUMANN
    insts = trials.draw_instances(args.seed, args.trials, args.n)
    jobs = [(inst, mode, bits) for inst in insts]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_trial_job, jobs))
    else:
        rows = [_trial_job(j) for j in jobs]
    with open(args.csv, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if row[k] is None else
                            precision.format_number(row[k]) if isinstance(row[k], float) else row[k])
                        for k in CSV_FIELDS})

    def worst(key):
        vals = [r[key] for r in rows if r[key] is not None]
        return max(vals) if vals else None

    failures = sum(r["status"] != "ok" for r in rows)
    summary = {
        "mode": mode.value,
        "n": args.n,
        "trials": args.trials,
        "seed": args.seed,
        "precision_bits": bits,
        "max_matrix_residual": worst("matrix_residual"),
        "max_h2_residual": worst("h2_residual"),
        "max_trace_residual": worst("trace_residual"),
        "failures": failures,
        "csv": args.csv,
    }
    sys.stdout.write(core.dumps(summary))
    return EXIT_OK if failures == 0 else EXIT_ROUNDTRIP


def _predicted(J, h):
    a = float(J.q[0]) - h
    if J.n == 1:
        return -1.0, -a, -a * a
    jf = core.JacobiMatrix(precision.to_float(J.q), precision.to_float(J.b))
    return forward.asymptotic_coeffs(jf, h)


def cmd_mtrace(args, extended):
    J = _load_matrix(args.matrix, extended)
    if not 0 < args.start < args.stop:
        raise CliError(EXIT_INPUT, "need 0 < --from < --to")
    if args.points < 2:
        raise CliError(EXIT_INPUT, "--points must be at least 2")
    measure = forward.normalizing_constants(forward.perturb(J, _scalar(args.h, extended)))
    c1, c2, c3 = _predicted(J, args.h)
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["xi", "re_m", "im_m", "re_pred_o2", "im_pred_o3"])
        for xi in np.geomspace(args.start, args.stop, args.points):
            xi = float(xi)
            m = forward.weyl_m(measure, 1j * xi)
            # c1/z + c2/z^2 + c3/z^3 at z = i xi
            re_pred = -c2 / xi ** 2
            im_pred = -c1 / xi + c3 / xi ** 3
            w.writerow([precision.format_number(v) for v in (xi, m.real, m.imag, re_pred, im_pred)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="jts", description="Two-spectra inverse problem for finite Jacobi matrices.")
    p.add_argument("--precision", type=int, default=None, metavar="BITS",
                   help="mantissa bits; above 53 uses gmpy2 arithmetic "
                        "(default 53, and 256 for roundtrip)")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", help="spectra of a matrix under two boundary conditions")
    f.add_argument("matrix")
    f.add_argument("--h1", type=float)
    f.add_argument("--h2", type=float)
    f.add_argument("--dn", action="store_true", help="Dirichlet-Neumann pair instead of two couplings")
    f.add_argument("-o", "--output")

    i = sub.add_parser("inverse", help="recover the matrix from two spectra")
    i.add_argument("spectra")
    i.add_argument("--h1", type=float)
    i.add_argument("--dn", action="store_true")
    i.add_argument("-o", "--output")

    c = sub.add_parser("check", help="check the characterization conditions")
    c.add_argument("spectra")

    r = sub.add_parser("roundtrip", help="random forward/inverse round trips")
    r.add_argument("--n", type=int, default=None, help="fixed dimension (default: uniform on 1..30)")
    r.add_argument("--trials", type=int, default=100)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--mode", choices=["rank-one", "dn"], default="rank-one")
    r.add_argument("--csv", default="roundtrip.csv")
    r.add_argument("--jobs", type=int, default=1)

    t = sub.add_parser("mtrace", help="m-function along the imaginary axis, as CSV")
    t.add_argument("matrix")
    t.add_argument("--h", type=float, default=0.0)
    t.add_argument("--axis", choices=["imag"], default="imag")
    t.add_argument("--from", dest="start", type=float, default=10.0)
    t.add_argument("--to", dest="stop", type=float, default=1e4)
    t.add_argument("--points", type=int, default=50)
    t.add_argument("-o", "--output")
    return p


COMMANDS = {
    "forward": cmd_forward,
    "inverse": cmd_inverse,
    "check": cmd_check,
    "mtrace": cmd_mtrace,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    bits = args.precision
    if bits is None:
        bits = trials.EXTENDED_BITS if args.command == "roundtrip" else precision.DOUBLE_BITS
    if bits < 2:
        print("jts: --precision must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "roundtrip":
            return cmd_roundtrip(args, bits)
        extended = bits > precision.DOUBLE_BITS
        if extended:
            with precision.extended_precision(bits):
                return COMMANDS[args.command](args, extended)
        return COMMANDS[args.command](args, extended)
    except CliError as exc:
        print(f"jts: {exc}", file=sys.stderr)
        return exc.code
    except core.ConditionFailure as exc:
        print(f"jts: {exc}", file=sys.stderr)
        return EXIT_CONDITION
    except core.IndeterminateInterlacing as exc:
        print(f"jts: condition a) failed: {exc}", file=sys.stderr)
        return EXIT_CONDITION
    except core.InvalidInstance as exc:
        print(f"jts: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (JTSError, ArithmeticError) as exc:
        print(f"jts: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
