"""Command-line entry point.

Structured results go to stdout as one JSON object; logs go to stderr.
Exit codes: 0 completed (negative verdicts included), 1 usage error,
2 malformed input, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .audit import exact_min_density, palette_density, sampled_min_density, triad_product_check
from .colorability import (
    DEFAULT_EXHAUSTIVE_CAP,
    check_fixed_ordering,
    search_colorable,
    verify_certificate,
)
from .constructions import (
    affine_lines,
    fan_expansion,
    greedy_linear,
    growth_and_union_bound,
    phi3_witness,
    random_palette_hypergraph,
)
from .core import PHI3, as_fraction, covers_every_pair_once, is_linear
from .errors import CapExceededError, DegenerateSubsetError, MalformedInputError
from .formats import (
    FORMAT_VERSIONS,
    atomic_write,
    certificate_from_json,
    certificate_to_json,
    decimal_str,
    dumps,
    embedding_from_json,
    embedding_to_json,
    format_choices,
    format_hypergraph,
    format_partitioned,
    fraction_json,
    parse_choices,
    parse_hypergraph,
    parse_partitioned,
    report_to_json,
    resolve_palette,
    witness_to_json,
)
from .partitioned import (
    embed_search,
    extract_phi3_skeleton,
    min_density,
    palette_role_host,
    random_partitioned_from_palette,
    verify_embedding,
)
from .rng import SeededRng

log = logging.getLogger("uniform_turan")

EXIT_OK, EXIT_USAGE, EXIT_MALFORMED, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc.msg})") from None


def _hypergraph(args, k: int | None = None):
    h = parse_hypergraph(_read_text(args.input), normalize=args.normalize)
    if k is not None and h.k != k:
        raise MalformedInputError(f"{args.input}: expected a {k}-uniform hypergraph, got k={h.k}")
    return h


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _fraction(text: str):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


# -- gen ------------------------------------------------------------------


def cmd_gen_palette_random(args) -> dict:
    _require(args.n >= 0, "--n must be nonnegative")
    palette = resolve_palette(args.palette)
    h, cert = random_palette_hypergraph(palette, args.n, SeededRng(args.seed))
    atomic_write(args.output, format_hypergraph(h))
    if args.emit_certificate:
        atomic_write(args.emit_certificate, dumps(certificate_to_json(cert)))
    return {"output": args.output, "k": 3, "n": h.n, "m": h.m, "palette": args.palette, "seed": args.seed}


def cmd_gen_affine(args) -> dict:
    _require(1 <= args.dim <= 5, "--dim must lie in 1..5")
    h = affine_lines(args.dim)
    atomic_write(args.output, format_hypergraph(h))
    return {"output": args.output, "k": 5, "n": h.n, "m": h.m, "dim": args.dim}


def cmd_gen_greedy_linear(args) -> dict:
    _require(args.n >= 5, "--n must be at least 5")
    h = greedy_linear(args.n, SeededRng(args.seed))
    atomic_write(args.output, format_hypergraph(h))
    return {"output": args.output, "k": 5, "n": h.n, "m": h.m, "seed": args.seed}


def cmd_gen_fan_expand(args) -> dict:
    h5 = _hypergraph(args, 5)
    choice = parse_choices(_read_text(args.choices)) if args.choices else None
    h3, used = fan_expansion(h5, choice, SeededRng(args.seed))
    atomic_write(args.output, format_hypergraph(h3))
    if args.emit_choices:
        atomic_write(args.emit_choices, format_choices(used))
    out = {"output": args.output, "k": 3, "n": h3.n, "m": h3.m, "source_edges": h5.m, "seed": args.seed}
    if args.emit_certificate:
        cert = phi3_witness(h5, used)
        atomic_write(args.emit_certificate, dumps(certificate_to_json(cert)))
        out["phi3_certificate_valid"] = verify_certificate(h3, PHI3, cert).ok
    return out


def cmd_gen_partitioned_random(args) -> dict:
    _require(args.parts >= 3, "--parts must be at least 3")
    palette = resolve_palette(args.palette)
    if args.roles:
        ph = palette_role_host(palette, args.parts)
    else:
        _require(args.part_size is not None and args.part_size >= 1, "--part-size must be at least 1")
        ph = random_partitioned_from_palette(palette, args.parts, args.part_size, SeededRng(args.seed))
    atomic_write(args.output, format_partitioned(ph))
    d = min_density(ph)
    return {
        "output": args.output,
        "N": ph.N,
        "s": ph.s,
        "edges": ph.edge_count,
        "min_density": fraction_json(d),
        "min_density_decimal": decimal_str(d),
        "palette_density": fraction_json(palette_density(palette)),
    }


# -- check ----------------------------------------------------------------


def cmd_check_colorable(args) -> dict:
    h = _hypergraph(args, 3)
    palette = resolve_palette(args.palette)
    _require(args.threads >= 1, "--threads must be at least 1")
    if args.ordering is not None:
        ordering = [int(x) for x in args.ordering.split(",")]
        result = check_fixed_ordering(h, palette, ordering)
        out = {"colorable": result.feasible, "mode": "fixed-ordering", "ordering": ordering}
        out["witness"] = witness_to_json(result, palette)
        cert = result.certificate
    else:
        threads = 1 if args.deterministic else args.threads
        cap = None if args.no_cap else args.cap
        result = search_colorable(
            h, palette, args.mode, args.budget, cap=cap, seed=args.seed, threads=threads, deterministic=args.deterministic
        )
        out = {"colorable": result.colorable, "status": result.status, "mode": args.mode, "nodes": result.nodes}
        cert = result.certificate
    if cert is not None:
        out["ordering"] = list(cert.ordering)
        if args.emit_certificate:
            atomic_write(args.emit_certificate, dumps(certificate_to_json(cert)))
    out["palette"] = args.palette
    return out


def cmd_check_certificate(args) -> dict:
    h = _hypergraph(args, 3)
    palette = resolve_palette(args.palette)
    cert = certificate_from_json(_load_json(args.certificate))
    if cert.n != h.n:
        raise MalformedInputError(f"certificate has n={cert.n}, hypergraph has n={h.n}")
    result = verify_certificate(h, palette, cert)
    return {
        "valid": result.ok,
        "violating_edge": None if result.violating_edge is None else list(result.violating_edge),
        "palette": args.palette,
    }


def cmd_check_growth(args) -> dict:
    _require(args.n >= 0 and args.m >= 0, "--n and --m must be nonnegative")
    g = growth_and_union_bound(args.n, args.m)
    return {"n": args.n, "m": args.m, "holds": g.holds, "log_margin": round(g.log_margin, 6)}


def cmd_check_linear(args) -> dict:
    h = _hypergraph(args)
    return {"k": h.k, "n": h.n, "m": h.m, "linear": is_linear(h), "every_pair_once": covers_every_pair_once(h)}


def cmd_check_embedding(args) -> dict:
    ph = parse_partitioned(_read_text(args.host), normalize=args.normalize)
    guest = parse_hypergraph(_read_text(args.guest), normalize=args.normalize)
    emb = embedding_from_json(_load_json(args.embedding))
    return {"valid": verify_embedding(ph, guest, emb)}


# -- audit ----------------------------------------------------------------


def cmd_audit_density(args) -> dict:
    h = _hypergraph(args, 3)
    eps = args.epsilon
    _require(0 < eps <= 1, "--epsilon must lie in (0, 1]")
    if args.exact:
        report = exact_min_density(h, eps, cap=None if args.no_cap else args.cap)
    else:
        _require(args.samples >= 1, "--samples must be at least 1")
        report = sampled_min_density(h, eps, args.samples, SeededRng(args.seed))
    return report_to_json(report)


def cmd_audit_triads(args) -> dict:
    ph = parse_partitioned(_read_text(args.input), normalize=args.normalize)
    _require(0 < args.epsilon < 1, "--epsilon must lie in (0, 1)")
    rows = triad_product_check(ph, args.epsilon)
    violations = [r for r in rows if not r.ok]
    return {
        "epsilon": decimal_str(args.epsilon),
        "triads": len(rows),
        "violations": [list(r.triad) for r in violations],
        "min_slack": decimal_str(min(r.slack for r in rows)) if rows else None,
    }


# -- embed / skeleton -----------------------------------------------------


def cmd_embed(args) -> dict:
    ph = parse_partitioned(_read_text(args.host), normalize=args.normalize)
    guest = parse_hypergraph(_read_text(args.guest), normalize=args.normalize)
    emb = embed_search(ph, guest)
    out = {"embeds": emb is not None}
    if emb is not None:
        data = embedding_to_json(emb)
        out.update(data)
        out["verified"] = verify_embedding(ph, guest, emb)
        if args.output:
            atomic_write(args.output, dumps(data))
    return out


def cmd_extract_skeleton(args) -> dict:
    ph = parse_partitioned(_read_text(args.input), normalize=args.normalize)
    _require(0 < args.delta < 1, "--delta must lie in (0, 1)")
    _require(args.target >= 1, "--target must be positive")
    result = extract_phi3_skeleton(ph, args.delta, args.target, profile_mode=args.profile_mode)
    out = {
        "success": result.success,
        "stage": result.stage,
        "epsilon": decimal_str(result.eps),
        "trail": [[name, size] for name, size in result.trail],
    }
    if result.window is not None:
        w = result.window
        out["window"] = {
            "indices": list(w.indices),
            "a": decimal_str(w.a),
            "b": decimal_str(w.b),
            "c": decimal_str(w.c),
            "surplus": decimal_str(result.surplus),
        }
    if result.skeleton is not None:
        sk = result.skeleton
        out["indices"] = list(sk.indices)
        out["roles"] = {
            role: {f"{i},{j}": v for (i, j), v in sorted(table.items())} for role, table in sk.roles.items()
        }
    return out


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uniform-turan", description="Palette colorability and uniform density toolkit.")
    parser.add_argument(
        "--version", action="version", version=f"uniform-turan {__version__} ({' '.join(FORMAT_VERSIONS)})"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def io_flags(p, *, output: bool = False):
        p.add_argument("--normalize", action="store_true", help="canonicalize inputs instead of rejecting them")
        p.add_argument("--threads", type=int, default=1, help="worker cap for parallel searches")
        if output:
            p.add_argument("-o", "--output", required=True)

    gen = groups.add_parser("gen", help="generate hypergraphs").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = gen.add_parser("palette-random")
    p.add_argument("--palette", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-certificate")
    io_flags(p, output=True)
    p.set_defaults(func=cmd_gen_palette_random)

    p = gen.add_parser("affine")
    p.add_argument("--dim", type=int, required=True)
    io_flags(p, output=True)
    p.set_defaults(func=cmd_gen_affine)

    p = gen.add_parser("greedy-linear")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    io_flags(p, output=True)
    p.set_defaults(func=cmd_gen_greedy_linear)

    p = gen.add_parser("fan-expand")
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--choices", help="read chosen pairs instead of drawing them")
    p.add_argument("--emit-choices")
    p.add_argument("--emit-certificate", help="write the Phi_3 coloring (identity ordering)")
    io_flags(p, output=True)
    p.set_defaults(func=cmd_gen_fan_expand)

    p = gen.add_parser("partitioned-random")
    p.add_argument("--palette", required=True)
    p.add_argument("--parts", type=int, required=True, help="N")
    p.add_argument("--part-size", type=int, help="s")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--roles", action="store_true", help="one vertex per color in every part")
    io_flags(p, output=True)
    p.set_defaults(func=cmd_gen_partitioned_random)

    check = groups.add_parser("check", help="decide and verify").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = check.add_parser("colorable")
    p.add_argument("--palette", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("exhaustive", "heuristic"), default="exhaustive")
    p.add_argument("--budget", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP)
    p.add_argument("--no-cap", action="store_true", help="lift the exhaustive size cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deterministic", action="store_true", help="sequential canonical search order")
    p.add_argument("--ordering", help="comma-separated vertex ordering to test alone")
    p.add_argument("--emit-certificate")
    io_flags(p)
    p.set_defaults(func=cmd_check_colorable)

    p = check.add_parser("certificate")
    p.add_argument("--palette", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--certificate", required=True)
    io_flags(p)
    p.set_defaults(func=cmd_check_certificate)

    p = check.add_parser("growth")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_check_growth)

    p = check.add_parser("linear")
    p.add_argument("--input", required=True)
    io_flags(p)
    p.set_defaults(func=cmd_check_linear)

    p = check.add_parser("embedding")
    p.add_argument("--host", required=True)
    p.add_argument("--guest", required=True)
    p.add_argument("--embedding", required=True)
    io_flags(p)
    p.set_defaults(func=cmd_check_embedding)

    audit = groups.add_parser("audit", help="density audits").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = audit.add_parser("density")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=_fraction, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--no-cap", action="store_true")
    io_flags(p)
    p.set_defaults(func=cmd_audit_density)

    p = audit.add_parser("triads")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=_fraction, required=True)
    io_flags(p)
    p.set_defaults(func=cmd_audit_triads)

    p = groups.add_parser("embed", help="embed a guest into a partitioned host")
    p.add_argument("--host", required=True)
    p.add_argument("--guest", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = groups.add_parser("extract-skeleton", help="run the Phi_3 skeleton pipeline")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--target", type=int, default=3)
    p.add_argument("--profile-mode", choices=("greedy", "exhaustive"), default="greedy")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_extract_skeleton)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        result = args.func(args)
    except MalformedInputError as exc:
        log.error("malformed input: %s", exc)
        return EXIT_MALFORMED
    except CapExceededError as exc:
        log.error("%s", exc)
        return EXIT_CAP
    except (UsageError, DegenerateSubsetError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    sys.stdout.write(dumps(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
