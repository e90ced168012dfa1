"""Command line entry point: ``geocensus <subcommand> [options]``.

Exit codes: 0 success, 1 failed verification or computation error, 2 bad usage or config.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .artifacts import ArtifactWriter
from .config import ENV_OUT, ExperimentConfig
from .errors import ConfigError, GeocensusError
from .words import CurveClass, self_intersection

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; command line flags take precedence")
    common.add_argument("--out", help=f"output directory (default: ${ENV_OUT} or ./geocensus-out)")
    common.add_argument("--workers", type=int, help="worker processes for histograms")
    common.add_argument("--plot", action="store_true", default=None,
                        help="also render PNG figures next to the CSV files")

    surf = argparse.ArgumentParser(add_help=False)
    surf.add_argument("--surface", help="'modular' or 'x,y' trace coordinates")

    census = argparse.ArgumentParser(add_help=False)
    census.add_argument("--seed", help="seed word over a, A, b, B")
    census.add_argument("--L", type=float, help="length cutoff")
    census.add_argument("--mode", choices=("auto", "simple-exact", "orbit-bfs", "all-primitive"))
    census.add_argument("--margin", type=float, help="orbit search margin")

    p = _Parser(prog="geocensus", description="Censuses of closed geodesics on cusped tori.")
    p.add_argument("--version", action="version", version=f"geocensus {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("surface", parents=[common, surf], help="build a structure and describe it")
    sub.add_parser("census", parents=[common, surf, census], help="write a curve census")
    ps = sub.add_parser("stats", parents=[common, surf, census], help="counting statistics")
    ps.add_argument("--grid-step", dest="grid_step", type=float)
    ps.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    ph = sub.add_parser("histogram", parents=[common, surf, census], help="phase-space histogram")
    ph.add_argument("--delta", type=float, help="arc-length sampling step")
    ph.add_argument("--bins", type=int, nargs=3, metavar=("NU", "NV", "NTHETA"))
    pc = sub.add_parser("compare", parents=[common, surf, census], help="compare two structures")
    pc.add_argument("--target", help="second structure, 'modular' or 'x,y'")
    pc.add_argument("--tol", type=float)
    pv = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    pv.add_argument("--profile", choices=("desk",))
    pv.add_argument("--type-seed", dest="type_seed", help="seed of the non-simple type")
    pv.add_argument("--bowen-L", dest="bowen_L", type=float,
                    help="cutoff for the all-primitive census")
    return p


def _overrides(ns: argparse.Namespace) -> dict:
    skip = {"command", "config"}
    return {k: v for k, v in vars(ns).items() if k not in skip}


def _resolve_mode(cfg: ExperimentConfig) -> str:
    if cfg.mode != "auto":
        return cfg.mode
    return "simple-exact" if self_intersection(cfg.seed) == 0 else "orbit-bfs"


def _census(cfg: ExperimentConfig, S, L: float | None = None):
    from .orbits import enumerate_all_primitive, enumerate_simple, enumerate_type

    L = cfg.L if L is None else L
    mode = _resolve_mode(cfg)
    if mode == "simple-exact":
        if self_intersection(cfg.seed) != 0:
            raise ConfigError(f"seed {cfg.seed} is not simple; use --mode orbit-bfs")
        return enumerate_simple(S, L)
    if mode == "orbit-bfs":
        return enumerate_type(S, cfg.seed, L, cfg.margin)
    return enumerate_all_primitive(S, L)


def _tag(census) -> str:
    seed = "primitive" if census.mode == "all-primitive" else str(census.seed)
    return f"{census.surface_label}_{seed}_L{census.cutoff:g}"


def cmd_surface(cfg, w):
    S = cfg.resolve("surface")
    from .hyperbolic import length_from_trace

    info = {
        "label": S.label, "x": S.x, "y": S.y, "z": S.z,
        "commutator_trace": S.commutator_trace(),
        "systole_candidates": {g: length_from_trace(S.trace_of(CurveClass.of(g).letters))
                               for g in ("a", "b", "aB")},
        "domain": S.domain.describe(),
        "d": S.d,
    }
    w.json(f"surface_{S.label}.json", info)
    print(f"{S.label}: traces ({S.x:g}, {S.y:g}, {S.z:.12g}), tr[A,B] = {info['commutator_trace']:.12g}")
    print(f"Dirichlet polygon at i: {info['domain']}")
    return 0


def cmd_census(cfg, w):
    S = cfg.resolve("surface")
    census = _census(cfg, S)
    path = w.csv(f"census_{_tag(census)}.csv", census.to_csv())
    print(f"{len(census)} classes of length <= {cfg.L:g} ({census.mode}) -> {path}")
    return 0


def cmd_stats(cfg, w):
    from .stats import counting_curve, default_grid, fit_exponent, stats_csv, stats_table

    S = cfg.resolve("surface")
    census = _census(cfg, S)
    grid = default_grid(cfg.L, cfg.grid_step, cfg.grid_step)
    rows = stats_table(S, census, grid)
    tag = _tag(census)
    w.csv(f"stats_{tag}.csv", stats_csv(rows))
    cc = counting_curve(census, grid, S.d)
    summary = {"surface": S.label, "mode": census.mode, "L": cfg.L, "N": len(census),
               "window": list(cfg.window), "d": S.d}
    try:
        slope, r2 = fit_exponent(cc, tuple(cfg.window))
        summary.update(slope=slope, r2=r2, slope_range=[1.85, 2.15], min_r2=0.99)
    except GeocensusError as exc:
        slope = math.nan
        summary["fit_error"] = str(exc)
    last = rows[-1]
    summary.update({k: last[k] for k in ("ratio", "C_estimate") if not math.isnan(last[k])})
    summary["ratio_target"] = S.d / (S.d + 1)
    w.json(f"stats_{tag}.json", summary)
    if cfg.plot and not math.isnan(slope):
        from .plots import counting_figure

        w.figure(f"stats_{tag}.png",
                 lambda p, s: counting_figure(rows, tuple(cfg.window), slope, p, s, S.d))
    print(f"N({cfg.L:g}) = {len(census)}, slope {summary.get('slope', math.nan):.4f}, "
          f"r2 {summary.get('r2', math.nan):.4f}, ratio {summary.get('ratio', math.nan):.4f}")
    return 0


def cmd_histogram(cfg, w):
    from .phase import Binning, build_histogram

    S = cfg.resolve("surface")
    census = _census(cfg, S)
    H = build_histogram(S, census, cfg.delta, Binning(*cfg.bins), cfg.workers)
    tag = _tag(census)
    w.csv(f"hist_{tag}.csv", H.to_csv())
    w.json_text(f"hist_{tag}.json", H.sidecar())
    w.csv(f"hist_{tag}_theta.csv", H.theta_marginal_csv())
    w.csv(f"hist_{tag}_position.csv", H.position_marginal_csv())
    if cfg.plot:
        from .plots import histogram_figure

        w.figure(f"hist_{tag}.png", lambda p, s: histogram_figure(H, p, s, tag))
    print(f"{len(census)} curves, total mass {H.total_mass:.10g}, {H.occupied()} occupied cells")
    return 0


def cmd_compare(cfg, w):
    from .compare import compare

    S = cfg.resolve("surface")
    T = cfg.resolve("target")
    census = _census(cfg, S)
    report = compare(S, T, census, cfg.tol)
    tag = f"{S.label}_vs_{T.label}_L{cfg.L:g}"
    w.json_text(f"compare_{tag}.json", report.to_json())
    w.csv(f"compare_{tag}.csv", report.rows_csv())
    if cfg.plot:
        from .plots import compare_figure

        w.figure(f"compare_{tag}.png", lambda p, s: compare_figure(report, p, s))
    print(f"ratios [{report.ratio_inf:.6f}, {report.ratio_sup:.6f}] over {len(report.rows)} "
          f"curves: {report.verdict}")
    return 0


def cmd_verify(cfg, w):
    from .acceptance import Verifier

    v = Verifier(type_seed=cfg.type_seed, bowen_L=cfg.bowen_L, delta=cfg.delta, bins=cfg.bins,
                 margin=cfg.margin, workers=cfg.workers, writer=w, plot=cfg.plot)
    results = v.run_all()
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


COMMANDS = {
    "surface": cmd_surface,
    "census": cmd_census,
    "stats": cmd_stats,
    "histogram": cmd_histogram,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = ExperimentConfig.load(ns.config, _overrides(ns))
        writer = ArtifactWriter(cfg.out_dir(), cfg.hash(), __version__)
        return COMMANDS[ns.command](cfg, writer)
    except ConfigError as exc:
        print(f"geocensus: config error: {exc}", file=sys.stderr)
        return 2
    except GeocensusError as exc:
        print(f"geocensus: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
