"""Command-line front end.

JSON goes to stdout; ``--verbose`` adds human-readable notes on stderr.
Exit status is 0 on success, 1 on domain errors (a JSON error object is
written to stderr) and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import fibers, orbits, polytope, qstate, slocc
from .qstate import LocalSpectra, PureState

PRESETS = ("ghz", "w", "b1", "b2", "b3", "sep", "w4", "w5", "random")


class InputError(Exception):
    """Malformed command-line input or input file (exit status 2)."""


def resolve_state(text: str, seed: int | None = None) -> PureState:
    name = text.lower()
    if name == "ghz":
        return qstate.ghz_state()
    if name == "w":
        return qstate.w_state(3)
    if name in ("w4", "w5"):
        return qstate.w_state(int(name[1]))
    if name in ("b1", "b2", "b3"):
        return qstate.bell_pair_state(int(name[1]))
    if name == "sep":
        return qstate.product_state(3)
    if name == "random":
        if seed is None:
            raise InputError("preset 'random' requires --seed")
        return qstate.haar_random_state(3, seed)
    path = Path(text)
    if not path.is_file():
        raise InputError(f"{text!r} is neither a preset ({', '.join(PRESETS)}) nor a file")
    try:
        return qstate.load_state(path)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"malformed state file {text}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"malformed state file {text}: {exc}") from exc


def parse_reals(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated reals, got {text!r}") from exc


def lambdas_arg(args) -> LocalSpectra:
    values = parse_reals(args.lambdas)
    if args.min_eigenvalues:
        return LocalSpectra.from_min_eigenvalues(values)
    return LocalSpectra(tuple(values))


def _emit(obj, out=None) -> None:
    text = json.dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _note(args, msg: str) -> None:
    if args.verbose:
        print(msg, file=sys.stderr)


# ------------------------------------------------------------------ commands

def cmd_spectra(args):
    state = resolve_state(args.state, args.seed)
    lam = qstate.psi(state)
    _note(args, f"{state.num_qubits}-qubit state, lambda = {lam.lambdas}")
    _emit({"lambdas": list(lam.lambdas), "min_eigenvalues": list(lam.min_eigenvalues)}, args.out)


def cmd_classify(args):
    state = resolve_state(args.state, args.seed)
    label = slocc.classify(state, args.det_tol, args.rank_tol)
    _emit(
        {
            "class": label.value,
            "abs_det": abs(slocc.hyperdeterminant(state)),
            "local_ranks": list(slocc.local_ranks(state, args.rank_tol)),
        },
        args.out,
    )


def cmd_polytope_check(args):
    if args.state:
        lam = qstate.psi(resolve_state(args.state, args.seed))
    elif args.lambdas:
        lam = lambdas_arg(args)
    else:
        raise InputError("polytope-check needs --lambdas or --state")
    report = polytope.higuchi_check(lam, args.tol)
    out = report.to_json()
    if lam.num_qubits == 3:
        out["in_w_polytope"] = polytope.in_w_polytope(lam, args.tol)
    _emit(out, args.out)


def cmd_vertices(args):
    verts = polytope.three_qubit_vertices()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "lambda1", "lambda2", "lambda3"])
        for name, v in verts.items():
            w.writerow([name, *v])
        text = buf.getvalue()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return
    counts = polytope.face_lattice_counts([v for k, v in verts.items() if k != "W"])
    _emit({"vertices": {k: list(v) for k, v in verts.items()}, "face_counts": counts}, args.out)


def _sample_record(sample: fibers.FiberSample, target) -> dict:
    rec = {"target": list(target), "seed": sample.seed, "trial": sample.trial, "residual": sample.residual}
    rec.update(sample.state.to_json())
    return rec


def cmd_fiber_sample(args):
    target = lambdas_arg(args)
    run = fibers.sample_fiber(target, args.count, args.seed, args.tol)
    out = Path(args.out or "fiber_samples.jsonl")
    with out.open("w") as fh:
        for s in run:
            fh.write(json.dumps(_sample_record(s, run.target)) + "\n")
    cloud = Path(args.cloud) if args.cloud else out.with_suffix(".csv")
    coords = fibers.fiber_cloud(run.samples) if len(run) else np.empty((0, 2))
    with cloud.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "I4", "I5"])
        for s, (i4, i5) in zip(run, coords):
            w.writerow([s.trial, repr(float(i4)), repr(float(i5))])
    _note(args, f"accepted {len(run)} of {run.restarts} restarts")
    print(
        json.dumps(
            {
                "target": list(run.target),
                "accepted": len(run),
                "restarts": run.restarts,
                "acceptance_rate": run.acceptance_rate,
                "partial": run.partial,
                "samples_file": str(out),
                "cloud_file": str(cloud),
            }
        )
    )


def read_samples(path: str) -> tuple[list[PureState], list[float] | None]:
    states, target = [], None
    try:
        for line in Path(path).read_text().splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            states.append(PureState.from_json(rec))
            target = rec.get("target", target)
    except FileNotFoundError as exc:
        raise InputError(f"no such samples file: {path}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed samples file {path}: {exc}") from exc
    return states, target


def cmd_fiber_dim(args):
    states, target = read_samples(args.samples)
    if args.lambdas:
        target = list(lambdas_arg(args).lambdas)
    samples = [fibers.FiberSample(s, float("nan"), -1, k) for k, s in enumerate(states)]
    report = fibers.fiber_dimension(target, samples)
    out = report.to_json()
    out["target"] = target
    _emit(out, args.out)


def cmd_lu_check(args):
    a = resolve_state(args.a, args.seed)
    b = resolve_state(args.b, args.seed)
    best = fibers.lu_overlap_max(a, b, args.restarts, args.iters, args.seed)
    _emit(
        {"overlap": best, "threshold": fibers.LU_VERDICT, "lu_equivalent": best >= fibers.LU_VERDICT},
        args.out,
    )


def cmd_orbit_dims(args):
    state = resolve_state(args.state, args.seed)
    out = orbits.orbit_report(state, args.tol).to_json()
    out["num_qubits"] = state.num_qubits
    _emit(out, args.out)


def cmd_spherical(args):
    out = orbits.w_sphericality_certificate(args.w, args.tol).to_json()
    out["num_qubits"] = args.w
    _emit(out, args.out)


def cmd_flow(args):
    state = resolve_state(args.state, args.seed)
    trace = slocc.kirwan_flow(state, args.step, args.max_iter, args.tol)
    text = trace.to_jsonl() + json.dumps(
        {
            "converged": trace.converged,
            "limit_spectra": list(trace.limit_spectra),
            "diagnostic": trace.diagnostic,
        }
    ) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    _note(args, f"{len(trace.iterates) - 1} steps, converged={trace.converged}")


def cmd_haar_density(args):
    hist = fibers.boundary_shell_histogram(args.samples, args.bins, args.seed)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["shell_low", "shell_high", "count", "density"])
        for lo, hi, c, d in zip(hist.edges[:-1], hist.edges[1:], hist.counts, hist.density):
            w.writerow([repr(float(lo)), repr(float(hi)), int(c), repr(float(d))])
        text = buf.getvalue()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return
    _emit(hist.to_json(), args.out)


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="marginalscope", description=__doc__.splitlines()[0])
    p.add_argument("--verbose", action="store_true", help="human-readable notes on stderr")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
        return sp

    def state_opts(sp, required=True):
        sp.add_argument("--state", required=required, help=f"preset ({', '.join(PRESETS)}) or state JSON file")
        sp.add_argument("--seed", type=int, help="needed by the 'random' preset")

    def lambda_opts(sp, required):
        sp.add_argument("--lambdas", required=required, help="comma-separated local spectra")
        sp.add_argument(
            "--min-eigenvalues", action="store_true", help="read the values as minimal eigenvalues p_i"
        )

    sp = add("spectra", cmd_spectra, "local spectra of a state")
    state_opts(sp)

    sp = add("classify", cmd_classify, "SLOCC class of a three-qubit state")
    state_opts(sp)
    sp.add_argument("--det-tol", type=float, default=slocc.DET_TOL)
    sp.add_argument("--rank-tol", type=float, default=slocc.RANK_TOL)

    sp = add("polytope-check", cmd_polytope_check, "Kirwan polytope membership and active faces")
    lambda_opts(sp, required=False)
    state_opts(sp, required=False)
    sp.add_argument("--tol", type=float, default=polytope.FACE_TOL)

    sp = add("vertices", cmd_vertices, "three-qubit polytope vertices")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = add("fiber-sample", cmd_fiber_sample, "sample the fiber over a target spectrum")
    sp.add_argument("--target", dest="lambdas", required=True, help="comma-separated target spectra")
    sp.add_argument("--min-eigenvalues", action="store_true")
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--tol", type=float, default=fibers.FIBER_ACCEPT)
    sp.add_argument("--cloud", help="CSV path for the (I4, I5) cloud (default: OUT with .csv)")

    sp = add("fiber-dim", cmd_fiber_dim, "dimension estimate of a sampled fiber")
    sp.add_argument("--samples", required=True, help="JSON-lines file from fiber-sample")
    lambda_opts(sp, required=False)

    sp = add("lu-check", cmd_lu_check, "best local-unitary overlap of two states")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--iters", type=int, default=300)

    sp = add("orbit-dims", cmd_orbit_dims, "K-, G- and Borel-orbit dimensions")
    state_opts(sp)
    sp.add_argument("--tol", type=float, default=orbits.RANK_TOL)

    sp = add("spherical", cmd_spherical, "sphericality certificate of the L-qubit W class")
    sp.add_argument("--w", type=int, required=True, metavar="L")
    sp.add_argument("--tol", type=float, default=orbits.RANK_TOL)

    sp = add("flow", cmd_flow, "norm-square gradient flow, one JSON line per iterate")
    state_opts(sp)
    sp.add_argument("--step", type=float, default=slocc.FLOW_STEP)
    sp.add_argument("--max-iter", type=int, default=20000)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("haar-density", cmd_haar_density, "density of Haar spectra by distance to the boundary")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--bins", type=int, default=20)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except InputError as exc:
        print(json.dumps({"error": "malformed input", "detail": str(exc)}), file=sys.stderr)
        return 2
    except (ValueError, IndexError, slocc.ClassificationError) as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
