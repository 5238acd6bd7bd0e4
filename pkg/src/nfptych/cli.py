"""Command-line entry point: ``nfptych <subcommand> [options]``.

Subcommands
-----------
alg1-sweep    block recovery error over delta and SNR
compare       block recovery against Wirtinger flow with local masks
wf-global     Wirtinger flow with a globally supported mask over K and SNR
conditioning  condition numbers of the lifted operator over delta
"""

import argparse
import sys

from . import harness, io, lift, masks
from .errors import NFPError

DEFAULT_SNRS = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0]


def _common(p, d, snr=True):
    p.add_argument("--d", type=int, default=d, help="signal length")
    if snr:
        p.add_argument("--snr", type=float, nargs="+", default=DEFAULT_SNRS,
                       help="SNR levels in dB (inf for noiseless)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--workers", type=int, default=1, help="threads across trials")
    p.add_argument("--timing", action="store_true",
                   help="record mean runtimes (output is then not reproducible byte for byte)")


def build_parser():
    parser = argparse.ArgumentParser(prog="nfptych", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alg1-sweep", help="block recovery error vs delta and SNR")
    _common(p, 945)
    p.add_argument("--delta", type=int, nargs="+", default=[8, 14, 23])

    p = sub.add_parser("compare", help="block recovery vs Wirtinger flow (local masks)")
    _common(p, 102)
    p.add_argument("--delta", type=int, nargs="+", default=[26])
    p.add_argument("--iters", type=int, nargs="+", default=[100, 500, 2000])

    p = sub.add_parser("wf-global", help="Wirtinger flow with a global Gaussian mask")
    _common(p, 102)
    p.add_argument("--K", type=int, nargs="+", default=[2, 4, 6, 8, 10, 12])
    p.add_argument("--iters", type=int, nargs="+", default=[2000])

    p = sub.add_parser("conditioning", help="lifted-operator condition numbers")
    p.add_argument("--delta", type=int, nargs="+", default=list(range(2, 14)))
    p.add_argument("--d", type=int, default=None,
                   help="signal length (default 3(2 delta - 1) per delta)")
    p.add_argument("--mask", choices=("fpr", "admissible"), default="fpr")
    p.add_argument("--out", required=True)
    return parser


def _conditioning(args):
    reports = []
    for delta in args.delta:
        d = args.d if args.d is not None else 3 * (2 * delta - 1)
        if args.mask == "fpr":
            family = masks.build_fpr_family(d, delta)
        else:
            psf, mask = masks.build_admissible_pair(d, delta)
            family = masks.derive_masks(psf, mask, 2 * delta - 1)
        reports.append(lift.conditioning(lift.assemble_lifted(family, d, delta)))
    io.write_conditioning(args.out, reports)
    return reports


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "conditioning":
            _conditioning(args)
            return 0
        if args.command == "alg1-sweep":
            cfg = harness.ExperimentConfig("alg1_delta_sweep", args.d, deltas=tuple(args.delta),
                                           snrs=tuple(args.snr), trials=args.trials, seed=args.seed)
        elif args.command == "compare":
            cfg = harness.ExperimentConfig("alg1_vs_alg2", args.d, deltas=tuple(args.delta),
                                           snrs=tuple(args.snr), trials=args.trials,
                                           Ts=tuple(args.iters), seed=args.seed)
        else:
            cfg = harness.ExperimentConfig("wf_global_mask", args.d, Ks=tuple(args.K),
                                           snrs=tuple(args.snr), trials=args.trials,
                                           Ts=tuple(args.iters), seed=args.seed)
        harness.run_sweep(cfg, args.out, workers=args.workers, timing=args.timing)
    except (NFPError, OSError) as exc:
        print(f"nfptych: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
