"""Command-line front end: sample, fit, simulate, eval.

Each command writes its outputs plus a manifest.json into the --out
directory, so a run is fully reproducible from the manifest.  Algorithmic
non-convergence is reported as data (exit 0, converged=false); only
malformed inputs and numerical breakdown exit nonzero.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from ._jsonutil import read_json, write_json
from .aaa import aaa_fit
from .barycentric import (
    BarycentricLqo,
    ConstantModel,
    eval_r1_grid,
    eval_r2_grid,
    load_bary,
    realize,
    save_bary,
)
from .driver import AaaLqoConfig, run
from .errors import AaalqoError, DivergenceError, FormatError, PoleError
from .lqo import LqoStateSpace, load_model, random_lqo, save_model
from .sampling import (
    SampleSet,
    conjugate_close,
    load_sampleset,
    log_space_axis,
    sample_lqo,
    save_sampleset,
    write_h1_csv,
    write_h2_csv,
)
from .sim import Signal, output_error, save_trace, simulate_lqo


@dataclass
class RunManifest:
    """Everything needed to reproduce one command invocation."""

    command: str
    inputs: dict
    config: dict
    out_dir: str
    seed: int | None = None

    def save(self, path):
        write_json(asdict(self), path)


def _fmt(x):
    return f"{x:.17g}"


def _outpath(args, name):
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _load_any_model(path):
    """State-space or barycentric JSON, told apart by their schema fields."""
    doc = read_json(path)
    if isinstance(doc, dict) and "dim" in doc:
        return load_model(path)
    if isinstance(doc, dict) and "xi" in doc:
        return load_bary(path)
    raise FormatError(f"{path}: neither a state-space nor a barycentric model")


def _as_state_space(model, path):
    if isinstance(model, LqoStateSpace):
        return model
    if isinstance(model, BarycentricLqo):
        return realize(model)
    raise FormatError(f"{path}: an order-zero model cannot be simulated")


def _parse_synthetic(spec):
    fields = {}
    for item in spec:
        key, sep, value = item.partition("=")
        if not sep or key not in ("order", "seed"):
            raise ValueError(
                f"--synthetic takes order=K seed=S, got {item!r}"
            )
        fields[key] = int(value)
    if "order" not in fields or "seed" not in fields:
        raise ValueError("--synthetic needs both order=K and seed=S")
    return fields["order"], fields["seed"]


# ---------------------------------------------------------------------------
# sample

def cmd_sample(args):
    if (args.model is None) == (args.synthetic is None):
        raise ValueError("provide exactly one of MODEL or --synthetic")
    seed = None
    if args.synthetic is not None:
        order, seed = _parse_synthetic(args.synthetic)
        model = random_lqo(order, seed)
        source = f"synthetic(order={order}, seed={seed})"
        # keep the generating system next to its samples so a fit can be
        # validated against the ground truth later (simulate full vs reduced)
        save_model(model, _outpath(args, "model.json"))
    else:
        model = load_model(args.model)
        source = args.model
    lo, hi, m = args.log_axis
    points = log_space_axis(float(lo), float(hi), int(float(m)))
    pairing = None
    if args.conjugate:
        points, pairing = conjugate_close(points)
    samples = sample_lqo(model, points, pairing=pairing)
    out = _outpath(args, "samples.json")
    save_sampleset(samples, out)
    RunManifest(
        command="sample",
        inputs={"model": source},
        config={
            "log_axis": [float(lo), float(hi), int(float(m))],
            "conjugate": bool(args.conjugate),
        },
        out_dir=args.out,
        seed=seed,
    ).save(_outpath(args, "manifest.json"))
    print(f"wrote {out} (ns={samples.ns})")
    return 0


# ---------------------------------------------------------------------------
# fit

def _pair_mode_value(text):
    return {"auto": None, "on": True, "off": False}[text]


def _tol_tag(tol):
    return f"{tol:g}"


def _fit_one(samples, tol, args, tag):
    suffix = f"_{tag}" if tag else ""
    if args.linear_only:
        pair_mode = _pair_mode_value(args.pair_mode)
        if pair_mode is None:
            pair_mode = samples.conjugate_closed
        pairing = samples.pairing if pair_mode else None
        fit = aaa_fit(samples.points, samples.h1, tol=tol, nmax=args.nmax,
                      pairing=pairing)
        if fit.n == 0:
            model = ConstantModel(fit.const, 0.0)
        else:
            model = BarycentricLqo(
                fit.xi, fit.w, fit.h, np.zeros((fit.n, fit.n))
            )
        m1 = samples.m1
        eps1_rel = fit.history[-1][1] / m1 if m1 > 0 else 0.0
        rows = [
            (n, math.nan, math.nan, err / m1 if m1 > 0 else 0.0, math.nan, math.nan)
            for n, err in fit.history
        ]
        n_final, converged, eps2_rel = fit.n, fit.converged, math.nan
    else:
        config = AaaLqoConfig(
            nmax=args.nmax,
            eps=tol,
            pair_mode=_pair_mode_value(args.pair_mode),
            rho_mode=args.rho_mode,
            greedy_n=args.greedy_N,
            dump_blocks=(
                os.path.join(args.dump_blocks, tag) if args.dump_blocks and tag
                else args.dump_blocks
            ),
        )
        model, report = run(samples, config)
        rec = report.records[-1]
        rows = None
        report.to_csv(_outpath(args, f"report{suffix}.csv"))
        n_final, converged = rec.n, report.converged
        eps1_rel, eps2_rel = rec.eps1_rel, rec.eps2_rel
    if rows is not None:
        with open(_outpath(args, f"report{suffix}.csv"), "w", encoding="utf-8") as f:
            f.write("n,xi_re,xi_im,eps1_rel,eps2_rel,relaxed_obj\n")
            for row in rows:
                f.write(",".join(str(r) if isinstance(r, int) else _fmt(r)
                                 for r in row) + "\n")
    save_bary(model, _outpath(args, f"bary{suffix}.json"))
    if isinstance(model, ConstantModel):
        print(
            f"note: final model is the order-zero constant; no state-space"
            f" file written for tol={tol:g}",
            file=sys.stderr,
        )
    else:
        save_model(realize(model), _outpath(args, f"model{suffix}.json"))
    print(
        f"converged={'true' if converged else 'false'} n={n_final}"
        f" eps1={_fmt(eps1_rel)} eps2={_fmt(eps2_rel)}"
    )
    return n_final, converged


def cmd_fit(args):
    samples = load_sampleset(args.samples)
    tols = args.tol
    results = []
    for tol in tols:
        tag = _tol_tag(tol) if len(tols) > 1 else ""
        results.append((tol, *_fit_one(samples, tol, args, tag)))
    if len(tols) > 1:
        print("tol n converged")
        for tol, n, conv in results:
            print(f"{tol:g} {n} {'true' if conv else 'false'}")
    RunManifest(
        command="fit",
        inputs={"samples": args.samples},
        config={
            "tol": [float(t) for t in tols],
            "nmax": args.nmax,
            "linear_only": bool(args.linear_only),
            "pair_mode": args.pair_mode,
            "rho_mode": args.rho_mode,
            "greedy_N": args.greedy_N,
            "dump_blocks": args.dump_blocks,
        },
        out_dir=args.out,
    ).save(_outpath(args, "manifest.json"))
    return 0


# ---------------------------------------------------------------------------
# simulate

def _parse_input(spec, dt):
    kind = spec[0]
    if kind in ("cos", "sin"):
        if len(spec) != 3:
            raise ValueError(f"--input {kind} takes amplitude and omega")
        a, w = float(spec[1]), float(spec[2])
        signal = Signal.cosine(a, w) if kind == "cos" else Signal.sine(a, w)
        if dt is None:
            if w == 0:
                raise ValueError("--dt is required when omega is zero")
            dt = (2.0 * np.pi / w) / 50.0
        return signal, dt
    if kind == "sampled":
        if len(spec) != 2:
            raise ValueError("--input sampled takes a CSV path")
        # tolerate a header line so our own trace CSVs can be fed back in
        with open(spec[1]) as fh:
            first = fh.readline()
        skip = 0 if first and first.lstrip()[:1] in "0123456789+-." else 1
        rows = np.loadtxt(spec[1], delimiter=",", ndmin=2, skiprows=skip)
        if rows.shape[1] == 2:
            values = rows[:, 1]
        elif rows.shape[1] == 3:
            values = rows[:, 1] + 1j * rows[:, 2]
        else:
            raise FormatError(f"{spec[1]}: expected columns (t, u) or (t, re, im)")
        if dt is None:
            raise ValueError("--dt is required with a sampled input")
        return Signal.sampled(rows[:, 0], values), dt
    raise ValueError(f"unknown input kind {kind!r}; use cos, sin or sampled")


def cmd_simulate(args):
    full = _as_state_space(_load_any_model(args.full), args.full)
    reduced = _as_state_space(_load_any_model(args.reduced), args.reduced)
    signal, dt = _parse_input(args.input, args.dt)
    traces = []
    for name, model in (("full", full), ("reduced", reduced)):
        try:
            traces.append(simulate_lqo(model, signal, args.tend, dt))
        except DivergenceError as exc:
            print(f"error: {name} model diverged: {exc}", file=sys.stderr)
            return 2
    max_err, series = output_error(traces[0], traces[1])
    save_trace(traces[0], _outpath(args, "full_trace.csv"))
    save_trace(traces[1], _outpath(args, "reduced_trace.csv"))
    with open(_outpath(args, "error.csv"), "w", encoding="utf-8") as f:
        f.write("t,abs_err\n")
        for tk, ek in zip(traces[0].t, series):
            f.write(f"{tk:.17g},{ek:.17g}\n")
    RunManifest(
        command="simulate",
        inputs={"full": args.full, "reduced": args.reduced},
        config={"input": list(args.input), "tend": args.tend, "dt": dt},
        out_dir=args.out,
    ).save(_outpath(args, "manifest.json"))
    print(f"max_error={_fmt(max_err)}")
    return 0


# ---------------------------------------------------------------------------
# eval

def _eval_points(args):
    if args.points is not None:
        doc = read_json(args.points)
        if isinstance(doc, dict):
            if "points" not in doc:
                raise FormatError(f"{args.points}: no 'points' field")
            doc = doc["points"]
        arr = np.asarray(doc, dtype=float)
        if arr.size == 0:
            return np.zeros(0, dtype=complex)
        if arr.ndim == 2 and arr.shape[1] == 2:
            return arr[:, 0] + 1j * arr[:, 1]
        if arr.ndim == 1:
            return arr.astype(complex)
        raise FormatError(f"{args.points}: expected a list of [re, im] pairs")
    lo, hi, m = args.grid
    points = log_space_axis(float(lo), float(hi), int(float(m)))
    if args.conjugate:
        points, _ = conjugate_close(points)
    return points


def _eval_state_space(model, points):
    from .lqo import _resolvent

    dim = model.dim
    us = np.zeros((dim, points.size), dtype=complex)
    ok = np.ones(points.size, dtype=bool)
    for i, s in enumerate(points):
        try:
            us[:, i] = _resolvent(model, s)
        except PoleError:
            ok[i] = False
    h1 = np.where(ok, model.c @ us, complex(np.nan, np.nan))
    h2 = us.T @ (model.M @ us)
    h2[~ok, :] = complex(np.nan, np.nan)
    h2[:, ~ok] = complex(np.nan, np.nan)
    return h1, h2, np.flatnonzero(~ok)


def _eval_bary(model, points):
    h1 = eval_r1_grid(model, points, on_pole="inf")
    h2 = eval_r2_grid(model, points, on_pole="inf")
    flagged = np.flatnonzero(~np.isfinite(h1))
    return h1, h2, flagged


def cmd_eval(args):
    model = _load_any_model(args.model)
    points = _eval_points(args)
    if points.size == 0:
        h1 = np.zeros(0, dtype=complex)
        h2 = np.zeros((0, 0), dtype=complex)
        flagged = np.zeros(0, dtype=int)
    elif isinstance(model, LqoStateSpace):
        h1, h2, flagged = _eval_state_space(model, points)
    else:
        h1, h2, flagged = _eval_bary(model, points)
    write_h1_csv(_outpath(args, "h1.csv"), points, h1)
    write_h2_csv(_outpath(args, "h2.csv"), h2)
    for i in flagged:
        print(
            f"warning: evaluation failed at point {complex(points[i])} (row {i})",
            file=sys.stderr,
        )
    RunManifest(
        command="eval",
        inputs={"model": args.model, "points": args.points},
        config={
            "grid": None if args.grid is None else [float(v) for v in args.grid],
            "conjugate": bool(args.conjugate),
        },
        out_dir=args.out,
    ).save(_outpath(args, "manifest.json"))
    print(f"wrote h1.csv and h2.csv ({points.size} points)")
    return 0


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="aaalqo",
        description=(
            "Data-driven reduced models of linear systems with quadratic"
            " output, from frequency samples of their two transfer functions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="measure a model on a sampling axis")
    p.add_argument("model", nargs="?", default=None, help="state-space JSON file")
    p.add_argument("--synthetic", nargs="+", metavar="KEY=VAL",
                   help="random stable system: order=K seed=S")
    p.add_argument("--log-axis", nargs=3, required=True,
                   metavar=("LO", "HI", "M"),
                   help="M points i*10^e, e from LO to HI")
    p.add_argument("--conjugate", action="store_true",
                   help="close the axis under conjugation")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit", help="fit a reduced model to a sample set")
    p.add_argument("samples", help="SampleSet JSON file")
    p.add_argument("--tol", nargs="+", type=float, default=[1e-2],
                   help="relative tolerance(s); several run a sweep")
    p.add_argument("--nmax", type=int, default=30, help="maximum order")
    p.add_argument("--linear-only", action="store_true",
                   help="classical AAA on the h1 samples only")
    p.add_argument("--pair-mode", choices=("auto", "on", "off"), default="auto",
                   help="promote conjugate pairs together")
    p.add_argument("--rho-mode", choices=("sqrt_both", "matrix_only"),
                   default="sqrt_both", help="normalization placement in the LS stack")
    p.add_argument("--greedy-N", type=float, default=None,
                   help="override the greedy comparison constant")
    p.add_argument("--dump-blocks", default=None, metavar="DIR",
                   help="write per-iteration Matrix Market block dumps")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="time-domain comparison of two models")
    p.add_argument("full", help="full model JSON file")
    p.add_argument("reduced", help="reduced model JSON file")
    p.add_argument("--input", nargs="+", required=True,
                   metavar="KIND ...",
                   help="cos A W | sin A W | sampled FILE.csv")
    p.add_argument("--tend", type=float, required=True, help="end time")
    p.add_argument("--dt", type=float, default=None,
                   help="step size (default: input period / 50)")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("eval", help="tabulate H1 and H2 of a model")
    p.add_argument("model", help="state-space or barycentric JSON file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--points", default=None,
                   help="JSON file with points ([re,im] pairs or a SampleSet)")
    g.add_argument("--grid", nargs=3, default=None, metavar=("LO", "HI", "M"),
                   help="log axis as in sample")
    p.add_argument("--conjugate", action="store_true",
                   help="close the grid under conjugation")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AaalqoError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
