"""``frame-forge`` command-line interface.

Exit status: 0 success, 1 usage or I/O error (including invalid parameters),
2 search failure (random flipping found no pattern), 3 numerical failure
(non-convergence or an ill-conditioned least-squares selection).
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import constructions as cons
from .coherence import average_coherence, bound_table, scp_check, worst_case_coherence
from .designs import affine_plane_system, pair_system
from .equivalence import linear_flip, random_flip_search
from .errors import ConvergenceError, FrameForgeError, IllConditionedSelection, SearchFailure
from .fileio import bound_table_csv, format_table, load_frame, save_frame, save_report
from .gf2m import FieldContext
from .report import analysis_report
from .sparse import recovery_experiment, weak_rip_test

EXIT_OK, EXIT_USAGE, EXIT_SEARCH, EXIT_NUMERIC = 0, 1, 2, 3

FAMILIES = (
    "gaussian",
    "harmonic",
    "harmonic-fixed",
    "gabor-alltop",
    "gabor-steinhaus",
    "chirp",
    "sph2design",
    "steiner-pair",
    "steiner-affine",
    "code",
)

# Required flags per family; checked after parsing so the message names them.
_REQUIRED = {
    "gaussian": ("m", "n", "seed"),
    "harmonic": ("m", "n", "seed"),
    "harmonic-fixed": ("n", "indices"),
    "gabor-alltop": ("m",),
    "gabor-steinhaus": ("m", "seed"),
    "chirp": ("m",),
    "sph2design": ("n", "indices"),
    "steiner-pair": ("v",),
    "steiner-affine": ("q",),
    "code": ("m", "t"),
}


class UsageError(FrameForgeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _indices(text):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _build(args):
    missing = [f"--{k}" for k in _REQUIRED[args.family] if getattr(args, k) is None]
    if missing:
        raise UsageError(f"family {args.family} requires {', '.join(missing)}")
    fam = args.family
    if fam == "gaussian":
        return cons.gaussian_normalized(args.m, args.n, args.seed)
    if fam == "harmonic":
        return cons.random_harmonic(args.m, args.n, args.seed)[0]
    if fam == "harmonic-fixed":
        return cons.harmonic_from_indices(cons.HarmonicSelection(args.n, args.indices))
    if fam == "gabor-alltop":
        return cons.alltop_gabor(args.m)
    if fam == "gabor-steinhaus":
        return cons.steinhaus_gabor(args.m, args.seed)
    if fam == "chirp":
        return cons.chirp(args.m)
    if fam == "sph2design":
        return cons.spherical_2design(cons.HarmonicSelection(args.n, args.indices))
    if fam == "steiner-pair":
        return cons.steiner_etf(pair_system(args.v))
    if fam == "steiner-affine":
        return cons.steiner_etf(affine_plane_system(args.q))
    return cons.code_frame(FieldContext(args.m, args.poly), args.t)


def cmd_construct(args):
    frame = _build(args)
    save_frame(frame, args.out)
    print(f"{frame.family}: {frame.m} x {frame.n} -> {args.out}")
    return EXIT_OK


def cmd_analyze(args):
    frame = load_frame(args.frame)
    rep = analysis_report(frame, args.constant)
    rows = [
        ("family", rep["family"]),
        ("m", rep["m"]),
        ("n", rep["n"]),
        ("mu", rep["mu"]),
        ("nu", rep["nu"]),
        ("spectral_norm", rep["spectral_norm"]),
        ("spectral_norm^2", rep["spectral_norm"] ** 2),
        ("tightness_defect", rep["tightness_defect"]),
        ("welch", rep["welch"]),
        (f"scp1 (c={rep['scp1_constant']:g})", rep["scp1"]),
        ("coherence_property", rep["coherence_property"]),
        ("scp2", rep["scp2"]),
        ("sufficient (i,ii,iii)", rep["sufficient_conditions"]),
    ]
    for e in rep["expectations"]:
        status = "pass" if e["holds"] else "FAIL"
        if not e["applicable"]:
            status += " (outside restrictions)"
        rows.append((f"expect {e['quantity']} {e['relation']} {e['bound']:.6g}", status))
    print(format_table(rows))
    if args.out:
        save_report(rep, args.out)
    return EXIT_OK


def cmd_bounds(args):
    lo, hi = args.n
    text = bound_table_csv(bound_table(args.m, lo, hi))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _summary(frame):
    return worst_case_coherence(frame), average_coherence(frame), scp_check(frame).scp2


def cmd_flip(args):
    frame = load_frame(args.frame)
    mu0, nu0, ok0 = _summary(frame)
    if args.mode == "linear":
        out, pattern = linear_flip(frame)
    else:
        found = random_flip_search(frame, args.trials, args.seed)
        if found is None:
            raise SearchFailure(f"no flip pattern with nu <= mu/sqrt(m) in {args.trials} trials")
        out, pattern = found
    mu1, nu1, ok1 = _summary(out)
    print(f"pattern: {pattern}")
    print(format_table([("mu", mu0, mu1), ("nu", nu0, nu1), ("scp2", ok0, ok1)], ("", "before", "after")))
    if args.out:
        save_frame(out, args.out)
    return EXIT_OK


def cmd_ost(args):
    frame = load_frame(args.frame)
    summary = recovery_experiment(
        frame,
        k=args.k,
        beta=args.beta,
        alpha_multiple=args.alpha_mult,
        sigma=args.sigma,
        t=args.t,
        trials=args.trials,
        seed=args.seed,
        lam=args.lam,
    )
    d = summary.as_dict()
    print(format_table(sorted(d.items())))
    if args.out:
        save_report(d, args.out)
    return EXIT_OK


def cmd_wrip(args):
    frame = load_frame(args.frame)
    rep = weak_rip_test(frame, np.ones(args.k), args.delta, args.trials, args.seed)
    print(format_table(list(rep.as_dict().items())))
    if args.out:
        save_report(rep.as_dict(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frame-forge", description="Construct and analyze unit-norm frames.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a frame and write it to a frame file")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("--m", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--v", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--indices", type=_indices, help="comma-separated DFT row indices")
    c.add_argument("--poly", type=int, help="irreducible polynomial bitmask for code frames")
    c.add_argument("--out", "-o", required=True)
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="coherence report for a frame file")
    a.add_argument("frame")
    a.add_argument("--constant", type=float, default=164.0)
    a.add_argument("--out", "-o")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bounds", help="CSV table of coherence lower bounds")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=_range, required=True, metavar="LO:HI")
    b.add_argument("--out", "-o")
    b.set_defaults(func=cmd_bounds)

    f = sub.add_parser("flip", help="sign-flip a frame to lower its average coherence")
    f.add_argument("frame")
    f.add_argument("--mode", choices=("linear", "random"), default="linear")
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", "-o")
    f.set_defaults(func=cmd_flip)

    o = sub.add_parser("ost", help="one-step thresholding recovery experiment")
    o.add_argument("frame")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--sigma", type=float, default=1.0)
    o.add_argument("--t", type=float, default=0.5)
    o.add_argument("--beta", type=float, default=1.0)
    o.add_argument("--alpha-mult", type=float, default=10.0)
    o.add_argument("--lambda", dest="lam", type=float, help="fixed threshold instead of the SNR-based one")
    o.add_argument("--trials", type=int, default=200)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out", "-o")
    o.set_defaults(func=cmd_ost)

    w = sub.add_parser("wrip", help="Monte-Carlo Weak-RIP test with all-ones values")
    w.add_argument("frame")
    w.add_argument("--k", type=int, required=True)
    w.add_argument("--delta", type=float, required=True)
    w.add_argument("--trials", type=int, default=10000)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out", "-o")
    w.set_defaults(func=cmd_wrip)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; report its code instead.
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except SearchFailure as exc:
        print(f"frame-forge: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except (ConvergenceError, IllConditionedSelection) as exc:
        print(f"frame-forge: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FrameForgeError, ValueError, OSError) as exc:
        print(f"frame-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
