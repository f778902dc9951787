"""Command-line front door.

Subcommands: sample-spine (print a seeded spine permutation), run (execute
a config-driven experiment), verify (oracle/property suites), bench (basis
timing table).  Exit codes: 0 success, 1 runtime failure, 2 usage or
validation error.  SWITCHGRAPH_THREADS caps numba's thread pool;
SWITCHGRAPH_NO_NUMBA=1 selects the pure-numpy kernels.
"""

from __future__ import annotations

import argparse
import os
import statistics
import subprocess
import sys
import time
from pathlib import Path

import numpy as np


def _apply_thread_cap():
    cap = os.environ.get("SWITCHGRAPH_THREADS")
    if not cap:
        return
    os.environ.setdefault("NUMBA_NUM_THREADS", cap)
    os.environ.setdefault("OMP_NUM_THREADS", cap)


def cmd_sample_spine(args):
    from .graphs import GraphFormatError, load_graph
    from .spine import sample_spine

    try:
        g = load_graph(Path(args.graph).read_text())
    except (OSError, GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _, spine = sample_spine(g, args.seed)
    print(" ".join(str(v) for v in spine.order.tolist()))
    return 0


def cmd_run(args):
    from .harness import ConfigError, parse_config, run_experiment, write_outputs

    try:
        config = parse_config(Path(args.config).read_text())
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows, meta = run_experiment(config)
    csv_path, meta_path = write_outputs(config, rows, meta)
    print(f"wrote {csv_path} and {meta_path}")
    print("final mistakes:")
    for key, value in sorted(meta["final"].items()):
        print(f"  {key:>12}  {value}")
    return 0


def cmd_verify(args):
    from .verify import SUITES, run_suite

    known = sorted(SUITES) + ["all"]
    if args.suite not in known:
        print(
            f"error: unknown suite {args.suite!r}; choose from {', '.join(known)}",
            file=sys.stderr,
        )
        return 2
    checks = run_suite(args.suite)
    failed = 0
    for check in checks:
        status = "PASS" if check.ok else "FAIL"
        print(f"{status}  {check.name}: {check.detail}")
        failed += not check.ok
    return 0 if failed == 0 else 1


def _bench_once(kind, ns, trials, seed, allow_quadratic):
    """Median per-trial predict+update microseconds per n, current backend."""
    from .bases import BinaryTreeBasis, FullBasis
    from .scs import ScsEngine

    out = []
    rng = np.random.default_rng(seed)
    for n in ns:
        if kind == "full":
            basis = FullBasis(n, allow_quadratic=allow_quadratic)
        else:
            basis = BinaryTreeBasis(n)
        engine = ScsEngine(basis, 0.1)
        vs = rng.integers(1, n + 1, size=trials + 100)
        ys = rng.choice(np.array([-1, 1]), size=trials + 100)
        times = []
        for i in range(trials + 100):
            v, y = int(vs[i]), int(ys[i])
            t0 = time.perf_counter()
            engine.predict(v)
            engine.update(v, y)
            if i >= 100:  # warm-up excluded
                times.append((time.perf_counter() - t0) * 1e6)
        out.append((n, statistics.median(times)))
    return out


def cmd_bench(args):
    from ._accel import USE_NUMBA

    ns = []
    n = args.nmin
    while n <= args.nmax:
        if n & (n - 1):
            print("error: n values must be powers of two", file=sys.stderr)
            return 2
        ns.append(n)
        n *= 2
    if args.basis == "full" and args.nmax > 4096 and not args.allow_quadratic:
        print(
            "error: full basis above n=4096 needs --allow-quadratic",
            file=sys.stderr,
        )
        return 2
    rows = _bench_once(args.basis, ns, args.trials, args.seed, args.allow_quadratic)
    backend = "numba" if USE_NUMBA else "numpy"
    other = None
    if args.compare_backends:
        env = dict(os.environ)
        if USE_NUMBA:
            env["SWITCHGRAPH_NO_NUMBA"] = "1"
        else:
            env.pop("SWITCHGRAPH_NO_NUMBA", None)
        proc = subprocess.run(
            [
                sys.executable, "-m", "switchgraph", "bench",
                "--basis", args.basis,
                "--nmin", str(args.nmin), "--nmax", str(args.nmax),
                "--trials", str(args.trials), "--seed", str(args.seed),
            ]
            + (["--allow-quadratic"] if args.allow_quadratic else []),
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        other = {}
        for line in proc.stdout.splitlines()[1:]:
            parts = line.split(",")
            other[int(parts[1])] = float(parts[2])
    if other is None:
        print("basis,n,median_usec,backend")
        for n, med in rows:
            print(f"{args.basis},{n},{med:.2f},{backend}")
    else:
        flip = "numpy" if backend == "numba" else "numba"
        print(f"basis,n,median_usec_{backend},median_usec_{flip}")
        for n, med in rows:
            print(f"{args.basis},{n},{med:.2f},{other[n]:.2f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="switchgraph",
        description="Online prediction of switching graph labelings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-spine", help="sample a spanning tree and print its spine")
    p.add_argument("--graph", required=True, help="edge-list file (n=<int> header)")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(fn=cmd_sample_spine)

    p = sub.add_parser("run", help="run a config-driven experiment")
    p.add_argument("--config", required=True, help="key = value config file")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("verify", help="run an oracle/property suite")
    p.add_argument("--suite", required=True, help="suite name, or 'all'")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="per-trial timing table over basis sizes")
    p.add_argument("--basis", choices=("btree", "full"), required=True)
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-quadratic", action="store_true")
    p.add_argument(
        "--compare-backends",
        action="store_true",
        help="also time the other kernel backend in a subprocess",
    )
    p.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None):
    _apply_thread_cap()
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # runtime failure -> exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
