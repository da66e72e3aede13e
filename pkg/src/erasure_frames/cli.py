"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 unreadable or malformed files,
4 simulation produced no accepted trials.  The default seed comes from the
``ERASURE_FRAMES_SEED`` environment variable when set; ``--seed`` wins.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .comparison import compare_models
from .errors import ConsistencyError, InvalidInputError, StatisticalError
from .frames import (
    Frame,
    certify_parseval,
    construct_parseval_with_norms,
    frame_from_dict,
    frame_to_dict,
    harmonic_frame,
)
from .metrics import d_p_r, harmonic_two_erasure_sweep, monte_carlo_error
from .probability import ErasureDistribution, rpm_design

SEED_ENV = "ERASURE_FRAMES_SEED"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_STATS = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    return values


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"{SEED_ENV}={raw!r} is not an integer", EXIT_INPUT)


def _clean(obj):
    """Replace non-finite floats with None so the output is strict JSON."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _distribution(args) -> ErasureDistribution:
    if args.p is not None and args.uniform_p is not None:
        raise CliError("give either --p or --uniform-p, not both", EXIT_INPUT)
    if args.p is not None:
        return ErasureDistribution(args.p)
    if args.uniform_p is not None:
        if args.m is None:
            raise CliError("--uniform-p needs --m", EXIT_INPUT)
        if args.m < 2:
            raise CliError(f"need at least 2 channels, got m={args.m}", EXIT_INPUT)
        return ErasureDistribution([args.uniform_p] * args.m)
    raise CliError("missing distribution: give --p or --uniform-p with --m", EXIT_INPUT)


def _require_n(args) -> int:
    if args.n is None:
        raise CliError("missing --n", EXIT_INPUT)
    return args.n


def _design_frame(dist: ErasureDistribution, n: int) -> Frame:
    design = rpm_design(dist, n)
    return construct_parseval_with_norms(design.norms_sq_user_order, n, label="rpm")


def _load_frame(path: str) -> Frame:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read frame file {path}: {exc.strerror}", EXIT_IO)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CliError(f"frame file {path} is not valid JSON: {exc}", EXIT_IO)
    if isinstance(doc, dict) and isinstance(doc.get("frame"), dict):
        doc = doc["frame"]
    try:
        return frame_from_dict(doc)
    except (InvalidInputError, TypeError, ValueError) as exc:
        raise CliError(f"frame file {path} is malformed: {exc}", EXIT_IO)


def _frame_for(args, dist: ErasureDistribution) -> Frame:
    sources = [args.frame is not None, args.from_design, getattr(args, "harmonic", False)]
    if sum(sources) != 1:
        raise CliError("give exactly one of --frame, --from-design or --harmonic", EXIT_INPUT)
    if args.frame is not None:
        f = _load_frame(args.frame)
    elif args.from_design:
        f = _design_frame(dist, _require_n(args))
    else:
        f = harmonic_frame(dist.m, _require_n(args))
    if f.m != dist.m:
        raise CliError(f"frame has m={f.m} vectors but {dist.m} probabilities were given", EXIT_INPUT)
    return f


def cmd_design(args):
    dist = _distribution(args)
    n = _require_n(args)
    design = rpm_design(dist, n)
    frame = construct_parseval_with_norms(design.norms_sq_user_order, n, label="rpm")
    cert = certify_parseval(frame, tol=args.tol)
    doc = {
        "n": n,
        "m": dist.m,
        "probs": dist.user_order_probs,
        "sorted_probs": dist.probs,
        "permutation": [int(i) + 1 for i in dist.permutation],
        "holds_H": design.holds_H,
        "index": design.index,
        "e_p1": design.e_p1,
        "tilde_p": design.weights.singles,
        "norms_sq": design.norms_sq,
        "norms_sq_user_order": design.norms_sq_user_order,
        "frame": frame_to_dict(frame),
        "certificate": {"residual": cert.residual, "is_parseval": cert.is_parseval},
    }
    rows = zip(range(1, dist.m + 1), dist.user_order_probs, design.norms_sq_user_order)
    return doc, (["channel", "p", "norm_sq"], rows)


def cmd_erasure(args):
    dist = _distribution(args)
    if args.r is None:
        raise CliError("missing --r", EXIT_INPUT)
    f = _frame_for(args, dist)
    report = d_p_r(f, dist, args.r)
    doc = report.to_dict()
    row = [doc["r"], doc["d_p_r"], " ".join(map(str, doc["argmax"])),
           doc["cond_expectation"] if doc["cond_expectation"] is not None else "",
           doc["prob_N_eq_r"]]
    return doc, (["r", "d_p_r", "argmax", "cond_expectation", "prob_N_eq_r"], [row])


def cmd_compare(args):
    dist = _distribution(args)
    n = _require_n(args)
    report = compare_models(dist, n)
    doc = report.to_dict()
    doc["permutation"] = [int(i) + 1 for i in dist.permutation]
    rows = [("cm", report.e_cm), ("pm", report.e_pm), ("rpm", report.e_rpm)]
    return doc, (["model", "expected_error"], rows)


def cmd_simulate(args):
    dist = _distribution(args)
    f = _frame_for(args, dist)
    if args.trials < 1:
        raise CliError(f"--trials={args.trials} must be at least 1", EXIT_INPUT)
    est = monte_carlo_error(
        f, dist, args.trials, seed=args.seed, condition_on_r=args.r, workers=args.workers
    )
    doc = est.to_dict()
    doc["r"] = args.r
    keys = ["estimate", "std_error", "trials", "accepted", "seed"]
    return doc, (keys, [[doc[k] for k in keys]])


def cmd_sweep(args):
    if args.uniform_p is None:
        raise CliError("sweep needs --uniform-p", EXIT_INPUT)
    if not args.m:
        raise CliError("sweep needs a non-empty --m list", EXIT_INPUT)
    n = _require_n(args)
    p = args.uniform_p
    if not 0.0 < p < 1.0:
        raise CliError(f"p={p!r} outside (0,1)", EXIT_INPUT)
    rows = harmonic_two_erasure_sweep(p, n, args.m)
    doc = {"p": p, "n": n, "rows": rows}
    keys = ["m", "d_p2", "reference", "ratio"]
    return doc, (keys, [[row[k] for k in keys] for row in rows])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="ambient dimension")
    common.add_argument("--p", type=_float_list, help="comma-separated loss probabilities")
    common.add_argument("--uniform-p", type=float, help="one loss probability for every channel")
    common.add_argument("--tol", type=float, default=1e-10, help="Parseval tolerance (default 1e-10)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the document here instead of stdout")

    frame_src = argparse.ArgumentParser(add_help=False)
    frame_src.add_argument("--frame", help="frame JSON file (a design document also works)")
    frame_src.add_argument("--from-design", action="store_true", help="use the optimal frame for --p/--n")
    frame_src.add_argument("--harmonic", action="store_true", help="use the harmonic frame for m, n")
    frame_src.add_argument("--r", type=int, help="erasure count")

    parser = argparse.ArgumentParser(
        prog="erasure-frames",
        description="Optimal Parseval frames for independent Bernoulli erasure channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", parents=[common], help="optimal norm profile and a frame realizing it")
    p.add_argument("--m", type=int, help="channel count for --uniform-p")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("erasure", parents=[common, frame_src], help="exact r-erasure risk of a frame")
    p.add_argument("--m", type=int, help="channel count for --uniform-p")
    p.set_defaults(func=cmd_erasure)

    p = sub.add_parser("compare", parents=[common], help="expected one-erasure error of CM, PM, RPM")
    p.add_argument("--m", type=int, help="channel count for --uniform-p")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", parents=[common, frame_src], help="Monte Carlo reconstruction error")
    p.add_argument("--m", type=int, help="channel count for --uniform-p")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common], help="two-erasure risk of harmonic frames over m")
    p.add_argument("--m", type=_int_list, help="comma-separated channel counts")
    p.set_defaults(func=cmd_sweep)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror}", EXIT_IO)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        doc, (header, rows) = args.func(args)
        if args.format == "csv":
            text = _csv_text(header, rows)
        else:
            text = json.dumps(_clean(doc), indent=2) + "\n"
        _emit(text, args.out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StatisticalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATS
    except ConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
