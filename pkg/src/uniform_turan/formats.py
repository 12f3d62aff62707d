"""Text and JSON formats.

``hg`` files::

    hg <k> <n> <m>
    <k ascending vertex indices>      (m lines, canonical order)

``palette`` files::

    palette <k> <t>
    <x> <y> <z>                       (t lines)

``phg`` files::

    phg <N> <s>
    <i> <j> <k> <a> <b> <c>           (one line per triad edge, sorted)

Lines starting with ``#`` and blank lines are ignored when reading.
"""

from __future__ import annotations

import json
import os
import tempfile
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .audit import DensityReport
from .colorability import FixedOrderingResult
from .constructions import FanChoice
from .core import (
    BUILTIN_PALETTES,
    ColoringCertificate,
    Hypergraph,
    Palette,
    canonicalize,
)
from .errors import MalformedCertificateError, MalformedInputError
from .partitioned import Embedding, PartitionedHypergraph

FORMAT_VERSIONS = ("hg/1", "phg/1", "cert/1")

_DECIMAL = Context(prec=12, rounding=ROUND_HALF_EVEN)


def decimal_str(x: Fraction) -> str:
    """Decimal rendering with 12 significant digits, half-even rounding."""
    x = Fraction(x)
    return str(_DECIMAL.divide(Decimal(x.numerator), Decimal(x.denominator)))


def fraction_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise MalformedInputError(f"line {lineno}: expected integers, got {line!r}") from None


def _header(lines, keyword: str, arity: int) -> list[int]:
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise MalformedInputError(f"empty input, expected '{keyword}' header") from None
    tokens = line.split()
    if not tokens or tokens[0] != keyword or len(tokens) != arity + 1:
        raise MalformedInputError(f"line {lineno}: expected '{keyword}' header with {arity} fields")
    return _ints(" ".join(tokens[1:]), lineno)


# -- hypergraphs ---------------------------------------------------------------


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"hg {h.k} {h.n} {h.m}"]
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str, *, normalize: bool = False) -> Hypergraph:
    """Read the ``hg`` format.

    Strict by default: edges must be ascending, in lexicographic order,
    without duplicates, and exactly ``m`` of them. ``normalize=True``
    canonicalizes instead of rejecting.
    """
    lines = _content_lines(text)
    k, n, m = _header(lines, "hg", 3)
    edges = []
    for lineno, line in lines:
        edge = tuple(_ints(line, lineno))
        if len(edge) != k:
            raise MalformedInputError(f"line {lineno}: expected {k} vertices, got {len(edge)}")
        if not normalize:
            if any(a >= b for a, b in zip(edge, edge[1:])):
                raise MalformedInputError(f"line {lineno}: edge {edge} is not strictly ascending")
            if edges and edge <= edges[-1]:
                raise MalformedInputError(f"line {lineno}: edge {edge} out of canonical order")
        edges.append(edge)
    if not normalize and len(edges) != m:
        raise MalformedInputError(f"header announces {m} edges, file has {len(edges)}")
    return canonicalize(Hypergraph(k, n, tuple(edges)))


# -- palettes ----------------------------------------------------------------


def format_palette(p: Palette) -> str:
    lines = [f"palette {p.color_count} {len(p.triples)}"]
    lines.extend(" ".join(map(str, t)) for t in p.sorted_triples)
    return "\n".join(lines) + "\n"


def parse_palette(text: str, name: str | None = None) -> Palette:
    lines = _content_lines(text)
    k, t = _header(lines, "palette", 2)
    triples = []
    for lineno, line in lines:
        triple = tuple(_ints(line, lineno))
        if len(triple) != 3:
            raise MalformedInputError(f"line {lineno}: a palette triple has three colors")
        triples.append(triple)
    if len(triples) != t:
        raise MalformedInputError(f"header announces {t} triples, file has {len(triples)}")
    return Palette(k, frozenset(triples), name)


def resolve_palette(name_or_path: str) -> Palette:
    """Built-in palette name, or else a path to a palette file."""
    if name_or_path in BUILTIN_PALETTES:
        return BUILTIN_PALETTES[name_or_path]
    path = Path(name_or_path)
    if not path.is_file():
        raise MalformedInputError(f"no built-in palette or file named {name_or_path!r}")
    return parse_palette(path.read_text(encoding="utf-8"), path.stem)


# -- certificates --------------------------------------------------------------


def certificate_to_json(cert: ColoringCertificate) -> dict:
    return {
        "n": cert.n,
        "ordering": list(cert.ordering),
        "pair_colors": {f"{u},{v}": c for (u, v), c in sorted(cert.pair_colors.items())},
    }


def certificate_from_json(data: dict) -> ColoringCertificate:
    try:
        n = int(data["n"])
        ordering = tuple(int(v) for v in data["ordering"])
        colors = {}
        for key, c in data["pair_colors"].items():
            u, v = (int(x) for x in key.split(","))
            if u >= v:
                raise MalformedCertificateError(f"pair key {key!r} must list the smaller label first")
            colors[(u, v)] = int(c)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, MalformedCertificateError):
            raise
        raise MalformedCertificateError(f"bad certificate JSON: {exc}") from None
    if len(ordering) != n:
        raise MalformedCertificateError(f"ordering has {len(ordering)} entries, n is {n}")
    return ColoringCertificate(ordering, colors)


def witness_to_json(result: FixedOrderingResult, palette: Palette) -> dict | None:
    w = result.witness
    if w is None:
        return None
    return {
        "pair": list(w.pair),
        "edges": [list(e) for e in w.edges],
        "domains": [sorted(palette.label(c) for c in d) for d in w.domains],
    }


# -- fan choices ---------------------------------------------------------------


def format_choices(choice: FanChoice) -> str:
    return "".join(f"{t} {v} {w}\n" for t, (v, w) in enumerate(choice.pairs))


def parse_choices(text: str) -> FanChoice:
    pairs = []
    for lineno, line in _content_lines(text):
        vals = _ints(line, lineno)
        if len(vals) != 3 or vals[0] != len(pairs):
            raise MalformedInputError(f"line {lineno}: expected '<edge-index> <v> <v'>' in order")
        pairs.append((vals[1], vals[2]))
    return FanChoice(tuple(pairs))


# -- partitioned hypergraphs ---------------------------------------------------


def format_partitioned(ph: PartitionedHypergraph) -> str:
    lines = [f"phg {ph.N} {ph.s}"]
    lines.extend(" ".join(map(str, row)) for row in ph.edge_rows())
    return "\n".join(lines) + "\n"


def parse_partitioned(text: str, *, normalize: bool = False) -> PartitionedHypergraph:
    lines = _content_lines(text)
    N, s = _header(lines, "phg", 2)
    rows = []
    for lineno, line in lines:
        row = tuple(_ints(line, lineno))
        if len(row) != 6:
            raise MalformedInputError(f"line {lineno}: expected 'i j k a b c'")
        i, j, k = row[:3]
        if not 1 <= i < j < k <= N:
            raise MalformedInputError(f"line {lineno}: need 1 <= i < j < k <= {N}")
        if any(not 0 <= x < s for x in row[3:]):
            raise MalformedInputError(f"line {lineno}: part vertex outside [0, {s})")
        if not normalize and rows and row <= rows[-1]:
            raise MalformedInputError(f"line {lineno}: edge out of canonical order")
        rows.append(row)
    return PartitionedHypergraph.from_edges(N, s, rows)


def embedding_to_json(emb: Embedding) -> dict:
    return {
        "indices": list(emb.indices),
        "witnesses": {f"{u},{v}": w for (u, v), w in sorted(emb.witnesses.items())},
    }


def embedding_from_json(data: dict) -> Embedding:
    try:
        indices = tuple(int(a) for a in data["indices"])
        witnesses = {}
        for key, w in data["witnesses"].items():
            u, v = (int(x) for x in key.split(","))
            witnesses[(u, v)] = int(w)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInputError(f"bad embedding JSON: {exc}") from None
    return Embedding(indices, witnesses)


# -- reports -------------------------------------------------------------------


def report_to_json(report: DensityReport) -> dict:
    return {
        "mode": report.mode,
        "epsilon": decimal_str(report.epsilon),
        "samples": report.sample_count,
        "seed": report.seed,
        "min_density": fraction_json(report.min_density),
        "min_density_decimal": decimal_str(report.min_density),
        "argmin_subset": list(report.argmin_subset),
    }


def dumps(data) -> str:
    """Deterministic JSON text (sorted keys, trailing newline)."""
    return json.dumps(data, sort_keys=True) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
