"""Command-line interface.

Subcommands: sweep (pump-parameter scan to CSV), pn (single-point photon
distribution to CSV), verify (self-check suites).  Every CSV is written
with LF line endings, UTF-8, and 17-significant-digit floats so outputs are
byte-reproducible, and gets a <out>.manifest.txt sidecar recording the exact
invocation.  Exit codes: 0 success, 1 failed verification, 2 bad flags,
3 sweep finished with failed points.
"""

import argparse
import math
import shlex
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .backend import default_backend, make_backend
from .gain import build_kernel, kernel_closed_form, kernel_one_atom, kernel_unitary
from .generator import assemble
from .model import (DICKE_PAIR, ONE_ATOM, TWO_PHOTON, ConfigurationError,
                    ModelSpec)
from .oracle import (TrajectoryConfig, monte_carlo, one_atom_detailed_balance,
                     ode_relax, thermal_distribution)
from .steady import (NonConvergenceError, SolverFailure, solve_adaptive,
                     sweep)

MODEL_FLAGS = {"dicke": DICKE_PAIR, "one-atom": ONE_ATOM, "two-photon": TWO_PHOTON}
PN_FLOOR = 1e-15


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_manifest(path: str, args: argparse.Namespace, argv: list[str],
                    backend_name: str, extra: dict) -> None:
    lines = [
        f"tool=micromaser {__version__}",
        f"timestamp={datetime.now(timezone.utc).isoformat()}",
        f"command={shlex.join(['micromaser'] + argv)}",
        f"backend={backend_name}",
    ]
    for key in ("model", "N", "nbar", "delta", "tol", "nmax0", "seed", "threads"):
        if hasattr(args, key.replace("-", "_")):
            lines.append(f"{key}={getattr(args, key.replace('-', '_'))}")
    for key, val in extra.items():
        lines.append(f"{key}={val}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _spec_from_args(parser: argparse.ArgumentParser,
                    args: argparse.Namespace) -> ModelSpec:
    try:
        return ModelSpec(variant=MODEL_FLAGS[args.model], N=args.N,
                         nbar_th=args.nbar, gtau=0.0, delta=args.delta)
    except ConfigurationError as exc:
        parser.error(str(exc))


def _d_grid(parser: argparse.ArgumentParser, args: argparse.Namespace) -> list[float]:
    grid_flags = args.D_from is not None or args.D_to is not None or args.D_step is not None
    single_flags = args.D is not None
    if args.gtau is not None and (grid_flags or single_flags):
        parser.error("--gtau is mutually exclusive with --D/--D-from/--D-to/--D-step")
    if args.gtau is not None:
        return [math.sqrt(args.N) * args.gtau]
    if single_flags:
        if grid_flags:
            parser.error("--D is mutually exclusive with --D-from/--D-to/--D-step")
        return [args.D]
    if not grid_flags:
        parser.error("need --D, --gtau, or --D-from/--D-to/--D-step")
    if args.D_from is None or args.D_to is None or args.D_step is None:
        parser.error("--D-from, --D-to and --D-step must be given together")
    if args.D_step <= 0 or args.D_to < args.D_from:
        parser.error("need --D-step > 0 and --D-to >= --D-from")
    count = int(math.floor((args.D_to - args.D_from) / args.D_step + 1e-9)) + 1
    return [args.D_from + i * args.D_step for i in range(count)]


def cmd_sweep(parser, args, argv) -> int:
    spec = _spec_from_args(parser, args)
    grid = _d_grid(parser, args)
    backend = make_backend(args.backend) if args.backend else default_backend()
    rows = sweep(spec, grid, tol=args.tol, n_max0=args.nmax0,
                 threads=args.threads, backend=backend)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("D,mean_n,v,n_max,residual,status\n")
        for r in rows:
            fh.write(f"{_fmt(r.D)},{_fmt(r.mean_n)},{_fmt(r.v)},"
                     f"{r.n_max_used},{_fmt(r.residual)},{r.status}\n")
    _write_manifest(args.out + ".manifest.txt", args, argv, backend.name,
                    {"rows": len(rows), "out": args.out})
    n_failed = sum(1 for r in rows if r.status != "ok")
    if n_failed:
        print(f"{n_failed}/{len(rows)} points failed", file=sys.stderr)
        return 3
    return 0


def cmd_pn(parser, args, argv) -> int:
    spec = _spec_from_args(parser, args)
    if args.gtau is not None:
        if args.D is not None:
            parser.error("--gtau is mutually exclusive with --D")
        point = ModelSpec(spec.variant, spec.N, spec.nbar_th,
                          args.gtau, spec.delta)
    elif args.D is not None:
        point = spec.with_pump_parameter(args.D)
    else:
        parser.error("need --D or --gtau")
    backend = make_backend(args.backend) if args.backend else default_backend()
    try:
        dist, mom = solve_adaptive(point, tol=args.tol, n_max0=args.nmax0,
                                   backend=backend)
    except (SolverFailure, NonConvergenceError) as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return 1
    last = int(np.max(np.nonzero(dist.p > PN_FLOOR))) if np.any(dist.p > PN_FLOOR) else 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# D={_fmt(point.D)} mean_n={_fmt(mom.mean_n)} v={_fmt(mom.v)} "
                 f"n_max={mom.n_max_used} residual={_fmt(mom.residual)}\n")
        fh.write("n,P\n")
        for n in range(last + 1):
            fh.write(f"{n},{_fmt(dist.p[n])}\n")
    _write_manifest(args.out + ".manifest.txt", args, argv, backend.name,
                    {"D": _fmt(point.D), "gtau": _fmt(point.gtau), "out": args.out})
    return 0


class _Report:
    def __init__(self):
        self.failed = 0

    def check(self, name: str, value: float, bound: float, ok=None) -> None:
        passed = (value <= bound) if ok is None else ok
        if not passed:
            self.failed += 1
        print(f"{'PASS' if passed else 'FAIL'} {name} value={value:.6g} "
              f"bound={bound:.6g}")


def _verify_kernel(rep: _Report) -> None:
    worst_cons = 0.0
    for delta in (0.0, 100.0, 150.0, 300.0):
        for gtau in (0.5, 2.5, 40.0):
            spec = ModelSpec(TWO_PHOTON if delta else DICKE_PAIR, 1.0,
                             gtau=gtau, delta=delta)
            k = build_kernel(spec, 200)
            worst_cons = max(worst_cons, np.abs(k.p0 + k.p1 + k.p2 - 1.0).max())
    rep.check("kernel.conservation", worst_cons, 1e-12)

    worst_cf = 0.0
    for gtau in (0.1, 0.5, 1.0, 2.5, 4.0, 40.0):
        for k in range(0, 101, 7):
            cf = kernel_closed_form(k, gtau)
            un = kernel_unitary(k, gtau)
            worst_cf = max(worst_cf, max(abs(a - b) for a, b in zip(cf, un)))
    rep.check("kernel.closed_form_vs_unitary", worst_cf, 1e-10)

    p = kernel_unitary(0, math.pi / math.sqrt(6.0))
    err = max(abs(p[0] - 1 / 9), abs(p[1]), abs(p[2] - 8 / 9))
    rep.check("kernel.analytic_point", err, 1e-12)

    _, p1 = kernel_one_atom(3, math.pi / 2.0)
    rep.check("kernel.one_atom_trapping_zero", p1, 1e-12)

    spec = ModelSpec(DICKE_PAIR, 1.0, gtau=0.0)
    k = build_kernel(spec, 100)
    rep.check("kernel.identity_at_zero_time", np.abs(k.p0 - 1.0).max(), 1e-15)


def _verify_oracle(rep: _Report, backend) -> None:
    spec = ModelSpec(ONE_ATOM, 200.0, nbar_th=0.1).with_pump_parameter(25.0)
    dist, _ = solve_adaptive(spec, backend=backend)
    ref = one_atom_detailed_balance(spec, dist.n_max)
    mask = ref.p > 1e-14
    rel = np.abs(dist.p[mask] - ref.p[mask]) / ref.p[mask]
    rep.check("oracle.one_atom_detailed_balance", float(rel.max()), 1e-8)

    spec = ModelSpec(DICKE_PAIR, 100.0, nbar_th=0.1).with_pump_parameter(25.0)
    dist, _ = solve_adaptive(spec, backend=backend)
    gen = assemble(spec, dist.n_max)
    relaxed = ode_relax(gen, tol=1e-11, backend=backend)
    tv = 0.5 * float(np.abs(relaxed.p - dist.p).sum())
    rep.check("oracle.ode_relaxation_tv", tv, 1e-6)

    spec = ModelSpec(DICKE_PAIR, 0.0, nbar_th=0.1, gtau=2.5)
    dist, mom = solve_adaptive(spec, backend=backend)
    ref = thermal_distribution(0.1, dist.n_max)
    tv = 0.5 * float(np.abs(dist.p - ref.p).sum())
    rep.check("oracle.thermal_limit_tv", tv, 1e-10)
    rep.check("oracle.thermal_mean", abs(mom.mean_n - 0.1), 1e-6)


def _verify_mc(rep: _Report, backend, seed: int, t_end: float) -> None:
    cases = [
        ModelSpec(DICKE_PAIR, 50.0, nbar_th=0.2, gtau=0.5),
        ModelSpec(ONE_ATOM, 40.0, nbar_th=0.1, gtau=0.8),
        ModelSpec(TWO_PHOTON, 100.0, nbar_th=0.1, gtau=1.0, delta=300.0),
    ]
    for i, spec in enumerate(cases):
        _, mom = solve_adaptive(spec, backend=backend)
        res = monte_carlo(TrajectoryConfig(spec=spec, seed=seed + i,
                                           t_end=t_end), backend=backend)
        zm = abs(res.mean_n - mom.mean_n) / res.mean_stderr
        zv = abs(res.v - mom.v) / res.v_stderr
        rep.check(f"mc.case{i}_mean_3sigma", zm, 3.0)
        rep.check(f"mc.case{i}_v_3sigma", zv, 3.0)
    spec = ModelSpec(DICKE_PAIR, 30.0, nbar_th=0.15, gtau=0.0)
    res = monte_carlo(TrajectoryConfig(spec=spec, seed=seed + 99, t_end=t_end),
                      backend=backend)
    rep.check("mc.thermal_mean_3sigma",
              abs(res.mean_n - 0.15) / res.mean_stderr, 3.0)


def cmd_verify(parser, args, argv) -> int:
    backend = make_backend(args.backend) if args.backend else default_backend()
    rep = _Report()
    if args.suite in ("kernel", "all"):
        _verify_kernel(rep)
    if args.suite in ("oracle", "all"):
        _verify_oracle(rep, backend)
    if args.suite in ("mc", "all"):
        _verify_mc(rep, backend, args.seed, args.t_end)
    print(f"{'FAIL' if rep.failed else 'OK'} checks_failed={rep.failed}")
    return 1 if rep.failed else 0


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", required=True, choices=sorted(MODEL_FLAGS))
    sub.add_argument("--N", type=float, required=True,
                     help="injection events per photon lifetime")
    sub.add_argument("--nbar", type=float, default=0.0,
                     help="thermal photon number")
    sub.add_argument("--delta", type=float, default=0.0,
                     help="one-photon detuning in units of g (two-photon only)")
    sub.add_argument("--tol", type=float, default=1e-8)
    sub.add_argument("--nmax0", type=int, default=None,
                     help="initial truncation (default 4N)")
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--backend", choices=("numba", "numpy"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="micromaser",
        description="Steady-state photon statistics of pair-pumped, one-atom "
                    "and two-photon micromasers")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sw = subs.add_parser("sweep", help="scan the pump parameter D, emit CSV")
    _add_model_flags(sw)
    sw.add_argument("--D", type=float, default=None)
    sw.add_argument("--D-from", dest="D_from", type=float, default=None)
    sw.add_argument("--D-to", dest="D_to", type=float, default=None)
    sw.add_argument("--D-step", dest="D_step", type=float, default=None)
    sw.add_argument("--gtau", type=float, default=None,
                    help="fixed interaction time instead of a D grid")

    pn = subs.add_parser("pn", help="photon distribution at one point, emit CSV")
    _add_model_flags(pn)
    pn.add_argument("--D", type=float, default=None)
    pn.add_argument("--gtau", type=float, default=None)

    ver = subs.add_parser("verify", help="run self-check suites")
    ver.add_argument("--suite", choices=("kernel", "oracle", "mc", "all"),
                     default="kernel")
    ver.add_argument("--seed", type=int, default=12345)
    ver.add_argument("--t-end", dest="t_end", type=float, default=2.0e4,
                     help="Monte Carlo trajectory length in photon lifetimes")
    ver.add_argument("--backend", choices=("numba", "numpy"), default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        return cmd_sweep(parser, args, argv)
    if args.command == "pn":
        return cmd_pn(parser, args, argv)
    return cmd_verify(parser, args, argv)


if __name__ == "__main__":
    sys.exit(main())
