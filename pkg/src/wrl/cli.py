"""Command-line front end.

Machine-readable results go to stdout (or ``--out``) as CSV; human-oriented
summaries and warnings go to stderr. Exit codes: 0 success, 2 usage or
parse error, 3 resource guard exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import capacity, jamming, randomness, wiretap
from .guards import ResourceLimitError
from .info import DiscreteDistribution, entropy, renyi2, simplex_grid
from .specfiles import SpecError, load_channel, load_source

EXIT_USAGE = 2
EXIT_RESOURCE = 3

SIMULATE_COLUMNS = [
    "n", "R0", "R", "Rr", "renyi2_rate", "entropy_rate", "seed", "codebooks",
    "mean_vd", "ci_halfwidth", "mean_leakage_bits", "pe", "pe_ci",
]


class UsageError(Exception):
    pass


def _num(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _dist(p: DiscreteDistribution) -> str:
    return " ".join(_num(v) for v in p.probs)


def _write_csv(rows, header, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _num(v) for v in row])


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "unlimited"):
        return math.inf
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be a number or 'inf', got {text!r}") from None
    if v < 0 or math.isnan(v):
        raise argparse.ArgumentTypeError("budget must be nonnegative")
    return v


def _grid(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be an integer, got {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError("grid resolution must be at least 2")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _rates(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--rates takes R0,R,Rr")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate list {text!r}") from None
    if any(v < 0 or math.isnan(v) for v in vals):
        raise argparse.ArgumentTypeError("rates must be nonnegative")
    return vals


def _decoder(text: str) -> tuple[str, float]:
    if text == "ml":
        return "ml", 0.0
    if text.startswith("typ:"):
        try:
            eps = float(text[4:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad typicality epsilon in {text!r}") from None
        if not eps > 0:
            raise argparse.ArgumentTypeError("typicality epsilon must be positive")
        return "typicality", eps
    raise argparse.ArgumentTypeError("decoder must be 'ml' or 'typ:EPS'")


# -- commands -----------------------------------------------------------------------


def cmd_capacity(args) -> int:
    ch = load_channel(args.channel)
    res = capacity.secrecy_capacity(ch, args.budget, args.grid)
    buf = io.StringIO()
    _write_csv(
        [[res.rate, res.lam, _dist(res.inputs[0]), _dist(res.inputs[1]),
          res.randomness_used, res.constraint_active,
          "inf" if math.isinf(args.budget) else args.budget, args.grid]],
        ["rate", "lambda", "p_x_given_u0", "p_x_given_u1", "randomness_used",
         "constraint_active", "budget", "grid"],
        buf,
    )
    sys.stdout.write(buf.getvalue())
    err = sys.stderr
    print(f"secrecy rate        {res.rate:.6f} bits/use", file=err)
    print(f"time share lambda   {res.lam:.6f}", file=err)
    print(f"p(x|u=0)            {_dist(res.inputs[0])}", file=err)
    print(f"p(x|u=1)            {_dist(res.inputs[1])}", file=err)
    print(f"randomness used     {res.randomness_used:.6f} bits/use", file=err)
    print(f"constraint active   {'yes' if res.constraint_active else 'no'}", file=err)
    return 0


def cmd_curve(args) -> int:
    ch = load_channel(args.channel)
    points = capacity.rate_curve(ch, args.grid)
    x = np.array([p.randomness_cost for p in points])
    y = np.array([p.secrecy_gain for p in points])
    on_env = np.zeros(len(points), dtype=bool)
    on_env[capacity._upper_hull(x, y)] = True
    buf = io.StringIO()
    _write_csv(zip(x, y, on_env), ["cost_bits", "gain_bits", "on_envelope"], buf)
    _emit(buf.getvalue(), args.out)
    print(f"{len(points)} curve points, {int(on_env.sum())} envelope vertices", file=sys.stderr)
    return 0


def _input_distribution(text: str, nx: int) -> DiscreteDistribution:
    if text == "uniform":
        return DiscreteDistribution.uniform(nx)
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--input must be 'uniform' or comma-separated probabilities, got {text!r}") from None
    if len(vals) != nx:
        raise UsageError(f"--input has {len(vals)} entries, channel input alphabet has {nx}")
    try:
        return DiscreteDistribution(vals)
    except ValueError as exc:
        raise UsageError(f"--input: {exc}") from None


def cmd_simulate(args) -> int:
    ch = load_channel(args.channel)
    r0, r, rr = args.rates
    kr = randomness.code_count(args.n, rr)
    if args.source == "uniform":
        p_ur = DiscreteDistribution.uniform(kr)
    else:
        p_ur = load_source(args.source).distribution(n=args.n, rate=rr)
        if p_ur.size != kr:
            raise UsageError(
                f"source has {p_ur.size} symbols but Rr = {rr} at n = {args.n} gives "
                f"K_r = {kr} randomization indices"
            )
    p_x = _input_distribution(args.input, ch.nx)
    p_u = DiscreteDistribution([1.0])
    decoder, eps = args.decoder
    base = wiretap.CodeParams.from_rates(args.n, r0, r, rr, 0)
    seeds = [wiretap.derive_seed(args.seed, c) for c in range(args.codebooks)]

    def one(s: int) -> wiretap.SimulationReport:
        params = wiretap.CodeParams(base.n, base.m0, base.m, base.kr, s)
        code = wiretap.build_random_code(ch, p_u, [p_x], params)
        return wiretap.simulate_code(code, p_ur, decoder, eps, args.trials, s)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(one, seeds))
    else:
        reports = [one(s) for s in seeds]

    r2_rate, h_rate = renyi2(p_ur) / args.n, entropy(p_ur) / args.n
    rows = []
    for rep in reports:
        rows.append([args.n, r0, r, rr, r2_rate, h_rate, rep.seed, 1, rep.vd, "",
                     rep.leakage_bits, rep.pe, rep.pe_ci])
    vd_mean, vd_ci = wiretap.mean_ci([rep.vd for rep in reports])
    pe_mean, pe_ci = wiretap.mean_ci([rep.pe for rep in reports])
    leak_mean = float(np.mean([rep.leakage_bits for rep in reports]))
    rows.append([args.n, r0, r, rr, r2_rate, h_rate, args.seed, args.codebooks,
                 vd_mean, vd_ci, leak_mean, pe_mean, pe_ci])
    buf = io.StringIO()
    _write_csv(rows, SIMULATE_COLUMNS, buf)
    _emit(buf.getvalue(), args.out)
    print(
        f"n={args.n} M0={base.m0} M={base.m} K_r={base.kr}: mean vd {vd_mean:.6f} "
        f"+/- {vd_ci:.6f}, mean leakage {leak_mean:.6f} bits, mean pe {pe_mean:.6f} "
        f"({reports[0].mode})",
        file=sys.stderr,
    )
    return 0


def cmd_uniformize(args) -> int:
    spec = load_source(args.source)
    p = spec.distribution(n=args.n, rate=args.rr)
    src = randomness.RandomnessSource(p)
    h = src.entropy
    if args.rr >= h:
        print(
            f"warning: rr = {args.rr} is not below H(R) = {h:.6f}; the extractor "
            "cannot approach uniform output",
            file=sys.stderr,
        )
    ex = randomness.build_extractor(src, args.n, args.rr)
    if args.export:
        randomness.save_extractor(ex, args.export)
    buf = io.StringIO()
    _write_csv([[args.n, ex.num_bins, args.rr, h, ex.achieved_distance]],
               ["n", "K", "rr", "entropy_bits", "distance"], buf)
    sys.stdout.write(buf.getvalue())
    print(f"{src.alphabet_size}^{args.n} blocks into {ex.num_bins} bins, "
          f"distance to uniform {ex.achieved_distance:.6g}", file=sys.stderr)
    return 0


def _simulate_spec(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--simulate takes n,rate,samples,seed")
    try:
        return _positive_int(parts[0]), float(parts[1]), _positive_int(parts[2]), _seed(parts[3])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --simulate value {text!r}") from None


def cmd_jamming(args) -> int:
    if not args.sigma2 > 0:
        raise UsageError("--sigma2 must be positive")
    if args.hr < 0:
        raise UsageError("--hr must be nonnegative")
    rho = jamming.max_jamming_power(args.sigma2, args.hr)
    buf = io.StringIO()
    _write_csv([[args.sigma2, args.hr, rho]], ["sigma2", "H_R", "rho_max"], buf)
    if args.simulate:
        n, rate, samples, seed = args.simulate
        sim = jamming.simulate_jamming(args.sigma2, rho, n, rate, samples, seed)
        buf.write("\n")
        _write_csv([[args.sigma2, rho, n, rate, samples, seed, sim.ks_stat]],
                   ["sigma2", "rho", "n", "code_rate", "samples", "seed", "ks_stat"], buf)
    sys.stdout.write(buf.getvalue())
    alt = jamming.displayed_bound(args.sigma2, args.hr)
    gap = jamming.formula_discrepancy(args.sigma2, args.hr)
    print(f"rho_max = sigma2 (2^(2 H_R) - 1) = {rho:.12g}", file=sys.stderr)
    if gap is not None:
        print(
            f"note: the alternative closed form sigma2 2^(2 H_R - 1) = {alt:.12g} "
            f"differs by {100 * gap:.1f}%; the value above inverts the resolvability "
            "rate 1/2 log2(1 + rho/sigma2) = H_R",
            file=sys.stderr,
        )
    return 0


# -- parser -----------------------------------------------------------------------------


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wrl", description="Wiretap secrecy under rate-limited randomization."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="worker cap; output does not depend on it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", parents=[common], help="rate-limited secrecy capacity")
    p.add_argument("--channel", required=True)
    p.add_argument("--budget", type=_budget, default=math.inf, help="bits per use, or 'inf'")
    p.add_argument("--grid", type=_grid, default=200)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("curve", parents=[common], help="rate curve and envelope vertices")
    p.add_argument("--channel", required=True)
    p.add_argument("--grid", type=_grid, default=200)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", parents=[common], help="random wiretap code experiment")
    p.add_argument("--channel", required=True)
    p.add_argument("--source", default="uniform", help="source file or 'uniform'")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--rates", type=_rates, required=True, help="R0,R,Rr")
    p.add_argument("--codebooks", type=_positive_int, default=10)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--decoder", type=_decoder, default=("ml", 0.0), help="ml or typ:EPS")
    p.add_argument("--input", default="uniform", help="codeword letter distribution p_X")
    p.add_argument("--trials", type=_positive_int, default=10_000,
                   help="Monte Carlo trials when |Y|^n is too large to enumerate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("uniformize", parents=[common], help="build a uniformizing extractor")
    p.add_argument("--source", required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--rr", type=float, required=True)
    p.add_argument("--export")
    p.set_defaults(func=cmd_uniformize)

    p = sub.add_parser("jamming", parents=[common], help="cooperative jamming power limit")
    p.add_argument("--sigma2", type=float, required=True)
    p.add_argument("--hr", type=float, required=True)
    p.add_argument("--simulate", type=_simulate_spec, help="n,rate,samples,seed")
    p.set_defaults(func=cmd_jamming)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"error: resource guard: {exc} (raise WRL_MAX_ENUM to allow it)", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
