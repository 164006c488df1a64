"""Command-line interface: analyze, simulate, diagnose, replay.

Exit codes: 0 success, 1 data or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap, confidence_bands, unique_fraction
from .complexes import get_builder, verify_complex_conditions
from .errors import TdaBootError
from .parallel import STAGE_DIAGNOSE, resolve_threads, substream
from .pointcloud import PointCloud, load_csv
from .simulate import REFERENCE_PAIRS, DIMENSIONS, coverage_csv, coverage_experiment, true_mean_estimate
from .statistics import StatisticSpec, empirical_stabilization_radius, sample_homogeneous_poisson

STAT_NAMES = {
    "pbn": "persistent_betti",
    "betti": "betti",
    "euler": "euler",
    "truncated-euler": "truncated_euler",
    "bounded-pbn": "bounded_persistent_betti",
    "knn": "knn_length",
}


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    version: str = __version__
    wall_clock: float = 0.0
    outputs: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# argument helpers


def _pairs(text: str) -> tuple:
    out = []
    for chunk in text.split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected r:s pairs, got {chunk!r}")
        out.append((float(parts[0]), float(parts[1])))
    return tuple(out)


def _grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) == 3:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise argparse.ArgumentTypeError("grid count must be >= 1")
        return tuple(float(x) for x in np.linspace(lo, hi, count))
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:count or a comma list, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_stat_args(p, default_convention="radius"):
    p.add_argument("--complex", choices=["vr", "cech"], default="vr")
    p.add_argument("--stat", choices=sorted(STAT_NAMES), default="pbn")
    p.add_argument("--q", type=int)
    p.add_argument("--pairs", type=_pairs, help="r:s[,r:s...] for pbn and bounded-pbn")
    p.add_argument("--grid", type=_grid, help="lo:hi:count or r1,r2,... for betti/euler/truncated-euler")
    p.add_argument("--bound", type=float, help="diameter bound B for bounded-pbn")
    p.add_argument("--k", type=int, help="neighbour count for knn")
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--scale-by-n", action="store_true")
    p.add_argument("--convention", choices=["radius", "diameter"], default=default_convention)


def _add_boot_args(p):
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--bandwidth", choices=["silverman", "adaptive"], default="silverman")
    p.add_argument("--method", choices=["smoothed", "standard"], default="smoothed")
    p.add_argument("--interval", choices=["basic", "percentile"], default="basic")


def _spec_from_args(args) -> StatisticSpec:
    family = STAT_NAMES[args.stat]
    if family in ("persistent_betti", "bounded_persistent_betti"):
        if not args.pairs:
            raise UsageError(f"--stat {args.stat} needs --pairs")
        query = args.pairs
    elif family == "knn_length":
        query = ()
        if args.k is None:
            raise UsageError("--stat knn needs --k")
    else:
        if not args.grid:
            raise UsageError(f"--stat {args.stat} needs --grid")
        query = args.grid
    if family in ("persistent_betti", "betti", "truncated_euler", "bounded_persistent_betti") and args.q is None:
        raise UsageError(f"--stat {args.stat} needs --q")
    if family == "bounded_persistent_betti" and args.bound is None:
        raise UsageError("--stat bounded-pbn needs --bound")
    return StatisticSpec(
        family,
        args.complex,
        q=args.q,
        pairs=query,
        B=args.bound if family == "bounded_persistent_betti" else None,
        k=args.k if family == "knn_length" else None,
        directed=not args.undirected,
        scale_by_n=args.scale_by_n,
        convention=args.convention,
    )


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, threads: int) -> list:
    spec = _spec_from_args(args)
    cloud = load_csv(args.input)
    config = BootstrapConfig(
        replicates=args.replicates,
        method=args.method,
        bandwidth=args.bandwidth,
        level=args.level,
        band="both" if args.replicates >= 20 else "pointwise",
        interval=args.interval,
        seed=args.seed,
    )
    dist = bootstrap(cloud, spec, config, threads=threads)
    bands = confidence_bands(dist, cloud.n, config)
    probs = [(1 - args.level) / 2, 0.5, 1 - (1 - args.level) / 2]
    result = {
        "spec": spec.to_dict(),
        "config": config.to_dict(),
        "point_estimate": dist.point_estimate.tolist(),
        "replicate_quantiles": {
            repr(p): np.quantile(dist.values, p, axis=0).tolist() for p in probs
        },
        "bands": {k: bands[k].to_list() if k in bands else None for k in ("pointwise", "simultaneous")},
        "seed": args.seed,
    }
    out = Path(args.output_dir)
    json_path = out / "result.json"
    _write(json_path, json.dumps(result, indent=2) + "\n")
    rows = ["r,estimate,pw_lo,pw_hi,sim_lo,sim_hi"]
    pw, sim = bands["pointwise"], bands.get("simultaneous")
    for j, label in enumerate(spec.labels()):
        cells = [label, _fmt(dist.point_estimate[j]), _fmt(pw.lower[j]), _fmt(pw.upper[j])]
        cells += [_fmt(sim.lower[j]), _fmt(sim.upper[j])] if sim is not None else ["", ""]
        rows.append(",".join(cells))
    csv_path = out / "curve.csv"
    _write(csv_path, "\n".join(rows) + "\n")
    return [str(json_path), str(csv_path)]


def cmd_simulate(args, threads: int) -> list:
    if args.pairs is None and args.stat == "pbn":
        key = (args.dist, args.q if args.q is not None else 1)
        if key not in REFERENCE_PAIRS:
            raise UsageError(f"no tabulated pair for {args.dist}, q={key[1]}; pass --pairs")
        args.pairs = (REFERENCE_PAIRS[key],)
        args.q = key[1]
        args.scale_by_n = True
    spec = _spec_from_args(args)
    config = BootstrapConfig(
        replicates=args.boot, method=args.method, bandwidth=args.bandwidth, level=args.level,
        band="pointwise", interval=args.interval, seed=args.seed,
    )
    truth = true_mean_estimate(args.dist, args.n, spec, args.truth_n, seed=args.seed, threads=threads)
    result = coverage_experiment(args.dist, spec, args.n, args.reps, config, truth, threads=threads)
    text = coverage_csv([result])
    if args.output == "-":
        sys.stdout.write(text)
        return []
    _write(Path(args.output), text)
    return [args.output]


def _diag_radii(args, rng_seed):
    family = STAT_NAMES[args.stat]
    if family == "bounded_persistent_betti":
        if args.bound is None:
            raise UsageError("--check radii with bounded-pbn needs --bound")
        B = args.bound
        q = 1 if args.q is None else args.q
        pairs = args.pairs or ((B / 2, B / 2),)
        spec = StatisticSpec(family, args.complex, q=q, pairs=pairs, B=B)
        limit = 2 * B
    elif family == "truncated_euler":
        q = 1 if args.q is None else args.q
        grid = args.grid or (0.5,)
        spec = StatisticSpec(family, args.complex, q=q, pairs=grid)
        limit = 2 * max(grid)
    else:
        raise UsageError("--check radii supports --stat bounded-pbn or truncated-euler")
    side = args.window
    d = args.dim
    l_grid = np.unique(np.r_[np.linspace(0, side * np.sqrt(d), 41), limit])
    radii = []
    for t in range(args.trials):
        rng = substream(rng_seed, STAGE_DIAGNOSE, t)
        S = sample_homogeneous_poisson((np.zeros(d), np.full(d, side)), args.intensity, rng)
        z = rng.random(d) * side
        radii.append(empirical_stabilization_radius(spec, S, z, l_grid))
    radii = np.asarray(radii)
    return {
        "check": "radii",
        "spec": spec.to_dict(),
        "limit": limit,
        "max_radius": float(radii.max()),
        "all_within": bool(np.all(radii <= limit)),
        "radii": radii.tolist(),
    }


def cmd_diagnose(args, threads: int) -> list:
    if args.check == "unique-fraction":
        n = args.n
        vals = []
        base = PointCloud(np.arange(n, dtype=np.float64).reshape(-1, 1))
        for t in range(args.trials):
            idx = substream(args.seed, STAGE_DIAGNOSE, t).integers(0, n, size=n)
            vals.append(unique_fraction(base.subset(idx), base))
        report = {
            "check": "unique-fraction",
            "n": n,
            "mean": float(np.mean(vals)),
            "expected": 1 - (1 - 1 / n) ** n,
            "values": vals,
        }
    elif args.check == "radii":
        report = _diag_radii(args, args.seed)
    else:
        clouds = []
        for t in range(args.trials):
            rng = substream(args.seed, STAGE_DIAGNOSE, t)
            clouds.append(PointCloud(rng.random((args.n, args.dim))))
        grid = args.grid or tuple(np.linspace(0.05, 0.6, 12))
        rep = verify_complex_conditions(get_builder(args.complex), clouds, grid, q_max=2)
        report = {"check": "conditions", "complex": args.complex, **rep.to_dict()}
    text = json.dumps(report, indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
        return []
    _write(Path(args.output), text)
    return [args.output]


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "diagnose": cmd_diagnose}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdaboot", description="Smoothed bootstrap for persistent homology.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="bootstrap bands for a statistic of a point cloud")
    a.add_argument("--input", required=True)
    _add_stat_args(a)
    _add_boot_args(a)
    a.add_argument("--replicates", type=_positive, default=200)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--output-dir", default="tdaboot-out")
    a.add_argument("--threads", type=_positive)

    s = sub.add_parser("simulate", help="coverage of bootstrap intervals on a test distribution")
    s.add_argument("--dist", required=True, choices=sorted(DIMENSIONS))
    _add_stat_args(s, default_convention="diameter")
    _add_boot_args(s)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--reps", type=_positive, default=150)
    s.add_argument("--boot", type=_positive, default=200)
    s.add_argument("--truth-n", type=int, default=2000)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--output", default="-")
    s.add_argument("--threads", type=_positive)

    d = sub.add_parser("diagnose", help="stabilization radii, complex conditions, unique fraction")
    d.add_argument("--check", required=True, choices=["radii", "conditions", "unique-fraction"])
    _add_stat_args(d)
    d.add_argument("--n", type=_positive, default=10000)
    d.add_argument("--trials", type=_positive, default=50)
    d.add_argument("--dim", type=_positive, default=2)
    d.add_argument("--window", type=float, default=3.0)
    d.add_argument("--intensity", type=float, default=3.0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--output", default="-")
    d.add_argument("--threads", type=_positive)

    r = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    r.add_argument("manifest")
    return parser


def _manifest_path(args) -> Path | None:
    if args.command == "analyze":
        return Path(args.output_dir) / "manifest.json"
    if args.output != "-":
        return Path(args.output + ".manifest.json")
    return None


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("command", "threads")}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        try:
            m = RunManifest.read(args.manifest)
        except (OSError, ValueError, TypeError) as exc:
            print(f"error: cannot read manifest: {exc}", file=sys.stderr)
            return 1
        params = dict(m.parameters)
        args = argparse.Namespace(command=m.command, threads=None, **params)
        for key in ("pairs", "grid"):
            if args.__dict__.get(key) is not None:
                v = args.__dict__[key]
                args.__dict__[key] = tuple(tuple(p) if isinstance(p, list) else p for p in v)
    try:
        threads = resolve_threads(args.threads)
        start = time.perf_counter()
        params = _params(args)
        outputs = COMMANDS[args.command](args, threads)
        manifest = _manifest_path(args)
        if manifest is not None:
            m = RunManifest(args.command, params, args.seed, __version__, time.perf_counter() - start, outputs)
            _write(manifest, m.to_json())
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tdaboot: error: {exc}", file=sys.stderr)
        return 2
    except (TdaBootError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
