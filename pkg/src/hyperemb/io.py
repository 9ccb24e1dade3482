"""Plain-text coordinate files, JSON reports and CSV series.

A coordinate file starts with ``# id r theta``, followed by optional
``# key value`` metadata lines and one ``label r theta [color]`` row per node.
Floats are written with 17 significant digits, so a read after a write gives
back the same doubles.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DataError, ParseError
from .graph import Graph
from .likelihood import Embedding
from .params import EpsoParams

HEADER = "# id r theta"
_PARAM_KEYS = ("zeta", "N", "m", "L", "beta", "T")


@dataclass
class CoordinateFile:
    labels: list
    r: np.ndarray
    theta: np.ndarray
    colors: Optional[list] = None
    meta: dict = field(default_factory=dict)

    @property
    def params(self) -> Optional[EpsoParams]:
        raw = self.meta.get("params")
        if raw is None:
            return None
        return EpsoParams(zeta=raw["zeta"], n_nodes=int(raw["N"]), m=raw["m"], ell=raw["L"],
                          beta=raw["beta"], temperature=raw["T"])


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _read_text(src) -> str:
    if hasattr(src, "read"):
        src = src.read()
    if isinstance(src, bytes):
        src = src.decode("utf-8")
    return src


def emit_coordinates(cf: CoordinateFile) -> str:
    out = [HEADER]
    for key, value in cf.meta.items():
        if key == "params":
            value = " ".join(f"{k}={_fmt(value[k])}" for k in _PARAM_KEYS)
        out.append(f"# {key} {value}")
    for k, label in enumerate(cf.labels):
        row = f"{label} {_fmt(cf.r[k])} {_fmt(cf.theta[k])}"
        if cf.colors is not None:
            row += f" {cf.colors[k]}"
        out.append(row)
    return "\n".join(out) + "\n"


def _parse_meta(key: str, value: str, lineno: int):
    if key == "params":
        try:
            items = dict(tok.split("=", 1) for tok in value.split())
            return {k: float(items[k]) for k in _PARAM_KEYS}
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad params line: {exc}", lineno) from None
    if key in ("seed", "rounds"):
        return None if value == "None" else int(value)
    return value


def parse_coordinates(src) -> CoordinateFile:
    text = _read_text(src)
    labels, r, theta, colors, meta = [], [], [], [], {}
    seen_header = False
    for lineno, line in enumerate(io.StringIO(text), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body == "id r theta":
                seen_header = True
                continue
            key, _, value = body.partition(" ")
            if key:
                meta[key] = _parse_meta(key, value.strip(), lineno)
            continue
        tok = s.split()
        if len(tok) not in (3, 4):
            raise ParseError(f"expected 'id r theta [color]', got {len(tok)} fields", lineno)
        try:
            ri, ti = float(tok[1]), float(tok[2])
        except ValueError:
            raise ParseError("radius and angle must be numbers", lineno) from None
        if not (math.isfinite(ri) and math.isfinite(ti)):
            raise ParseError("non-finite coordinate", lineno)
        if tok[0] in labels:
            raise ParseError(f"duplicate node {tok[0]!r}", lineno)
        labels.append(tok[0])
        r.append(ri)
        theta.append(ti)
        colors.append(tok[3] if len(tok) == 4 else None)
    if not seen_header:
        raise ParseError("missing '# id r theta' header", 1)
    has_color = any(c is not None for c in colors)
    if has_color and any(c is None for c in colors):
        raise ParseError("color column must be given for every node or none", None)
    return CoordinateFile(labels, np.array(r), np.array(theta), colors if has_color else None, meta)


def coordinates_from_embedding(g: Graph, emb: Embedding, **meta) -> CoordinateFile:
    info = {k: v for k, v in emb.meta.items() if k in ("method", "tie_seed", "rounds", "degree_kind")}
    info.update(meta)
    info["params"] = emb.params.as_dict()
    return CoordinateFile([g.label(u) for u in range(g.n_nodes)], emb.r.copy(), emb.theta.copy(),
                          meta=info)


def embedding_from_coordinates(g: Graph, cf: CoordinateFile,
                               params: Optional[EpsoParams] = None) -> Embedding:
    """Align a coordinate file with the nodes of ``g``.

    ``params`` defaults to the file's own ``params`` line. The radial order is
    read off the radii (ties by node id).
    """
    index = {lab: k for k, lab in enumerate(cf.labels)}
    n = g.n_nodes
    pos = np.empty(n, dtype=np.int64)
    for u in range(n):
        lab = g.label(u)
        if lab not in index:
            raise DataError(f"coordinate file has no entry for node {lab!r}")
        pos[u] = index[lab]
    p = params or cf.params
    if p is None:
        raise DataError("no model parameters given and none stored in the file")
    if p.n_nodes != n:
        p = p.with_(n_nodes=n)
    r, theta = cf.r[pos], cf.theta[pos]
    order = np.lexsort((np.arange(n), r))
    meta = {k: cf.meta[k] for k in ("method", "tie_seed", "rounds", "degree_kind") if k in cf.meta}
    # angles are taken verbatim: re-normalising could change the last bit
    return Embedding(r, theta, order, p, meta)


# --- CSV series ---------------------------------------------------------------

SERIES_COLUMNS = ("n_s", "best_ll", "best_gr", "pred_ll", "pred_gr")


def emit_series(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SERIES_COLUMNS)
    for row in rows:
        w.writerow([int(row[0])] + ["" if v is None else _fmt(v) for v in row[1:]])
    return buf.getvalue()


def parse_series(src) -> list:
    rows = list(csv.reader(io.StringIO(_read_text(src))))
    if not rows or tuple(rows[0]) != SERIES_COLUMNS:
        raise ParseError("missing series header", 1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(SERIES_COLUMNS):
            raise ParseError(f"expected {len(SERIES_COLUMNS)} columns", lineno)
        out.append((int(row[0]), *[None if v == "" else float(v) for v in row[1:]]))
    return out
