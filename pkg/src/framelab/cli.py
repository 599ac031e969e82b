"""Command-line interface.

Subcommands ingest frames (or series families) from text files or built-in
generators, run the library analyses, and print a report: human-readable
key = value lines by default, a single JSON document with --json. All
vector indices cross the CLI boundary 1-based; numeric values are rounded
to 12 significant digits before printing, identically in both output modes.

Exit codes: 0 success, 2 input/usage errors, 3 precondition violations.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .extraction import STRATEGIES, extract
from .frames import (
    Frame,
    excess,
    frame_bounds,
    frame_operator,
    frame_to_text,
    is_riesz_basis,
    parse_frame_text,
    write_frame_file,
)
from .gallery import perturbed_onb_family, random_frame, standard_frames
from .numkernel import TolerancePolicy, sym_eigen
from .series import (
    EXHAUSTIVE_CAP,
    NORM_MODES,
    parse_family_text,
    sign_sup_bounds,
    subset_sup,
    tail_decay_profile,
)
from .subfamilies import (
    DEFAULT_BUDGET,
    common_bound_decay,
    riesz_frame_constant,
    tail_localization,
)

GALLERY_KINDS = ("perturbed_onb", "onb", "mercedes", "duplicated_onb", "random")
DECAY_FAMILIES = ("perturbed_onb", "onb", "duplicated_onb")


class _InputError(Exception):
    """File or argument-content problem: maps to exit code 2."""


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from None


def _load_frame(path: str) -> tuple[Frame, str]:
    text = _read_text(path)
    try:
        frame = parse_frame_text(text)
    except ValueError as exc:
        raise _InputError(f"{path}: {exc}") from None
    return frame, _digest(text.encode())


def _load_family(path: str, mode: str):
    text = _read_text(path)
    try:
        fam = parse_family_text(text, norm_mode=mode)
    except ValueError as exc:
        raise _InputError(f"{path}: {exc}") from None
    return fam, _digest(text.encode())


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _parse_indices(text: str) -> list[int]:
    """Comma-separated 1-based indices -> 0-based list."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i = int(tok)
        except ValueError:
            raise _InputError(f"bad index {tok!r}: expected an integer") from None
        if i < 1:
            raise _InputError(f"bad index {i}: command-line indices are 1-based")
        out.append(i - 1)
    if not out:
        raise _InputError("no indices given")
    return out


def _one_based(indices) -> list[int]:
    return [int(i) + 1 for i in indices]


def _round12(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (list, tuple)):
        return [_round12(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [_round12(x) for x in obj.tolist()]
    raise TypeError(f"cannot render {type(obj)!r}")


def _emit(args, command: str, fingerprint: str, pol: TolerancePolicy, results: dict, t0: float) -> int:
    doc = {
        "command": command,
        "fingerprint": fingerprint,
        "tolerances": {"rank_rel": pol.rank_rel, "residual_abs": pol.residual_abs},
        "results": results,
        "duration_s": time.perf_counter() - t0,
    }
    doc = _round12(doc)
    if args.json:
        print(json.dumps(doc))
        return 0
    print(f"command: {doc['command']}")
    print(f"fingerprint: {doc['fingerprint']}")
    for k, v in doc["tolerances"].items():
        print(f"{k} = {json.dumps(v)}")
    for k, v in doc["results"].items():
        print(f"{k} = {json.dumps(v)}")
    print(f"duration_s = {json.dumps(doc['duration_s'])}")
    return 0


# --- subcommand handlers ---------------------------------------------------


def _cmd_analyze(args, pol):
    frame, fp = _load_frame(args.frame_file)
    spectrum = sym_eigen(frame_operator(frame), pol).values
    bounds = frame_bounds(frame, pol)
    check = is_riesz_basis(frame, pol)
    results = {
        "count": frame.count,
        "dim": frame.ambient_dim,
        "spectrum": list(spectrum),
        "lower": bounds.lower,
        "upper": bounds.upper,
        "span_rank": bounds.span_rank,
        "excess": excess(frame, pol),
        "riesz_basis": check.is_riesz,
        "riesz_lower": check.riesz_lower,
        "riesz_upper": check.riesz_upper,
    }
    return results, fp


def _cmd_subsets(args, pol):
    frame, fp = _load_frame(args.frame_file)
    cert = riesz_frame_constant(frame, pol, budget=args.budget, seed=args.seed)
    results = {
        "constant": cert.constant,
        "witness": _one_based(cert.witness),
        "subsets_examined": cert.subsets_examined,
        "method": cert.method,
    }
    return results, fp


def _cmd_localize(args, pol):
    frame, fp = _load_frame(args.frame_file)
    seed = _parse_indices(args.seed_indices)
    res = tail_localization(frame, seed, args.eps, pol)
    results = {
        "seed": _one_based(sorted(seed)),
        "eps": args.eps,
        "extended": _one_based(res.extended),
        "achieved": res.achieved,
        "span_dim": res.span_dim,
    }
    return results, fp


def _cmd_extract(args, pol):
    frame, fp = _load_frame(args.frame_file)
    res = extract(frame, args.strategy, pol, seed_size=args.seed_size)
    results = {
        "selected": _one_based(res.selected),
        "riesz_lower": res.riesz_lower,
        "riesz_upper": res.riesz_upper,
        "strategy": res.strategy,
        "completed_with": _one_based(res.completed_with),
    }
    return results, fp


def _cmd_series(args, pol):
    fam, fp = _load_family(args.family_file, args.mode)
    profile = tail_decay_profile(fam, seed=args.seed, samples=args.samples)
    terms = fam.terms()
    if fam.norm_mode == "coordinate_max" or fam.count <= EXHAUSTIVE_CAP:
        sup = subset_sup(terms, fam.norm_mode)
    else:
        sup = None  # euclidean enumeration infeasible at this count
    results = {
        "count": fam.count,
        "dim": fam.ambient_dim,
        "mode": fam.norm_mode,
        "tail_starts": list(profile.tail_starts),
        "values": list(profile.values),
        "method": profile.method,
        "subset_sup": sup,
    }
    if profile.triangle_upper is not None:
        results["triangle_upper"] = list(profile.triangle_upper)
    if args.tail_start is not None:
        b = sign_sup_bounds(fam, args.tail_start, seed=args.seed, samples=args.samples)
        results["sign_sup"] = b.lower
        results["sign_sup_upper"] = b.upper
        results["sign_sup_exact"] = b.exact
    return results, fp


def _build_gallery_frame(args) -> tuple[Frame, str]:
    kind = args.kind
    if kind == "perturbed_onb":
        frame = perturbed_onb_family(args.n)
        source_key = f"gallery:{kind}:n={args.n}"
    elif kind == "mercedes":
        frame = standard_frames(kind, 2)
        source_key = f"gallery:{kind}:d=2"
    elif kind in ("onb", "duplicated_onb"):
        frame = standard_frames(kind, args.d)
        source_key = f"gallery:{kind}:d={args.d}"
    else:
        count = args.count if args.count is not None else 2 * args.d
        frame = random_frame(args.d, count, seed=args.seed, spectrum_hint=args.spectrum_hint)
        source_key = (
            f"gallery:random:d={args.d}:count={count}:seed={args.seed}"
            f":hint={args.spectrum_hint}"
        )
    return frame, _digest(source_key.encode())


def _cmd_gallery(args, pol):
    frame, fp = _build_gallery_frame(args)
    results = {
        "kind": args.kind,
        "count": frame.count,
        "dim": frame.ambient_dim,
    }
    if args.out:
        try:
            write_frame_file(frame, args.out)
        except OSError as exc:
            raise _InputError(f"cannot write {args.out}: {exc}") from None
        results["out"] = args.out
    else:
        results["frame_text"] = frame_to_text(frame)
    return results, fp


def _cmd_decay(args, pol):
    if args.n_from < 3 or args.n_to < args.n_from:
        raise ValueError(
            f"need 3 <= n-from <= n-to, got {args.n_from}..{args.n_to}"
        )
    sizes = range(args.n_from, args.n_to + 1)
    rows = common_bound_decay(sizes, args.family, pol, budget=args.budget)
    results = {
        "family": args.family,
        "rows": [
            {
                "n": n,
                "constant": cert.constant,
                "witness": _one_based(cert.witness),
                "method": cert.method,
            }
            for n, cert in rows
        ],
    }
    source_key = f"decay:{args.family}:{args.n_from}:{args.n_to}:budget={args.budget}"
    return results, _digest(source_key.encode())


# --- parser ----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument(
        "--rank-rel", type=float, default=1e-12, metavar="X",
        help="relative eigenvalue cutoff for rank decisions (default 1e-12)",
    )
    common.add_argument(
        "--residual-abs", type=float, default=1e-10, metavar="X",
        help="absolute residual tolerance (default 1e-10)",
    )

    parser = argparse.ArgumentParser(
        prog="framelab",
        description="Finite frame analysis: bounds, duals, subfamily scans, "
        "Riesz basis extraction, and series diagnostics.",
        epilog="Vector indices are 1-based on the command line.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="frame operator spectrum, bounds, excess, Riesz-basis check")
    p.add_argument("frame_file")

    p = sub.add_parser("subsets", parents=[common],
                       help="minimum subfamily lower bound with witness subset")
    p.add_argument("frame_file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="max subsets to examine (default 2^20)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled mode")

    p = sub.add_parser("localize", parents=[common],
                       help="extend a subset until the rest barely sees its span")
    p.add_argument("frame_file")
    p.add_argument("--seed-indices", required=True, metavar="I,J,...",
                   help="1-based indices of the seed subset")
    p.add_argument("--eps", type=float, required=True, help="tail energy target")

    p = sub.add_parser("extract", parents=[common],
                       help="select an independent spanning subfamily")
    p.add_argument("frame_file")
    p.add_argument("--strategy", choices=STRATEGIES, default="exhaustive")
    p.add_argument("--seed-size", type=int, default=None,
                   help="projection strategy: seed size (default min(2, rank))")

    p = sub.add_parser("series", parents=[common],
                       help="sign-supremum tail profile and subset supremum")
    p.add_argument("family_file", help="lines of 'coefficient | vector entries'")
    p.add_argument("--mode", choices=NORM_MODES, default="euclidean")
    p.add_argument("--tail-start", type=int, default=None, metavar="M",
                   help="also report sign_sup for the tail starting at M (1-based)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled bounds")
    p.add_argument("--samples", type=int, default=4096,
                   help="sample count for tails beyond the exhaustive cap")

    p = sub.add_parser("gallery", parents=[common], help="emit a built-in frame")
    p.add_argument("kind", choices=GALLERY_KINDS)
    p.add_argument("--n", type=int, default=6,
                   help="truncation size for perturbed_onb (default 6)")
    p.add_argument("--d", type=int, default=3,
                   help="ambient dimension for onb/duplicated_onb/random (default 3)")
    p.add_argument("--count", type=int, default=None,
                   help="vector count for random (default 2*d)")
    p.add_argument("--seed", type=int, default=0, help="seed for random")
    p.add_argument("--spectrum-hint", type=float, default=None,
                   help="target frame-operator condition number for random")
    p.add_argument("--out", default=None, help="write the frame file here")

    p = sub.add_parser("decay", parents=[common],
                       help="common-lower-bound constants along growing truncations")
    p.add_argument("--family", choices=DECAY_FAMILIES, default="perturbed_onb")
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    return parser


_HANDLERS = {
    "analyze": _cmd_analyze,
    "subsets": _cmd_subsets,
    "localize": _cmd_localize,
    "extract": _cmd_extract,
    "series": _cmd_series,
    "gallery": _cmd_gallery,
    "decay": _cmd_decay,
}


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    t0 = time.perf_counter()
    try:
        pol = TolerancePolicy(rank_rel=args.rank_rel, residual_abs=args.residual_abs)
        results, fingerprint = _HANDLERS[args.subcommand](args, pol)
    except _InputError as exc:
        print(f"framelab: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"framelab: error: {exc}", file=sys.stderr)
        return 3
    command = "framelab " + " ".join(argv)
    return _emit(args, command, fingerprint, pol, results, t0)


if __name__ == "__main__":
    sys.exit(main())
