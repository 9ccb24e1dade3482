"""Command line entry point: ``hyperemb {generate,embed,evaluate,repeat,render}``."""
from __future__ import annotations

import argparse
import io
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from . import io as hio
from .angular import OptimizerSchedule
from .errors import HyperembError, ParameterError
from .graph import Graph, largest_component, load_edge_list, write_edge_list
from .models import epso_generate, gpso_generate, pso_generate
from .params import EpsoParams
from .pipeline import METHODS, embed, fit_params
from .quality import evaluate, fit_best_of_n, repeat_embeddings


# --- argument groups ----------------------------------------------------------


def _add_params(p, need_n=False):
    g = p.add_argument_group("model parameters")
    if need_n:
        g.add_argument("-N", "--nodes", type=int, required=True, help="number of nodes")
    g.add_argument("--m", "-m", type=float, default=None)
    g.add_argument("--L", type=float, default=None, help="net internal links per step")
    g.add_argument("--beta", type=float, default=None)
    g.add_argument("-T", "--temperature", type=float, default=None)
    g.add_argument("--zeta", type=float, default=1.0)


def _add_graph_input(p):
    p.add_argument("graph", type=Path, help="edge list")
    p.add_argument("--directed", action="store_true", help="keep edge direction for in/out degree")


def _add_embed_opts(p):
    p.add_argument("--degree-kind", choices=("total", "in", "out"), default="total")
    p.add_argument("--estimate-params", action="store_true",
                   help="fit m, beta and T on an ncMCE layout even if some are given")
    p.add_argument("--step-factor", type=float, default=0.1)
    p.add_argument("--swap-rounds", type=int, default=5)
    p.add_argument("--noswap-rounds", type=int, default=3)
    p.add_argument("-q", type=int, default=6, help="candidate angles per node")
    p.add_argument("--stop-tol", type=float, default=None,
                   help="stop when a round improves the loss by less than this fraction")
    p.add_argument("--angle-grid", type=int, default=360)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperemb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="grow a PSO, gPSO or E-PSO network")
    p.add_argument("model", choices=("pso", "gpso", "epso"))
    _add_params(p, need_n=True)
    p.add_argument("--l-plus", type=int, default=None, help="gPSO links inserted per step")
    p.add_argument("--l-minus", type=int, default=0, help="gPSO links deleted per step")
    p.add_argument("--negative-m", choices=("raise", "clip"), default="raise",
                   help="E-PSO: what to do when m + L_i < 0 at early steps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", type=Path, help="edge list (default: stdout)")
    p.add_argument("--truth", type=Path, help="write the generating coordinates here")
    p.add_argument("--largest-component", action="store_true",
                   help="keep only the largest connected component (original labels kept)")

    p = sub.add_parser("embed", help="embed a network")
    p.add_argument("method", choices=METHODS)
    _add_graph_input(p)
    _add_params(p)
    _add_embed_opts(p)
    p.add_argument("--seed", type=int, default=None, help="tie permutation seed")
    p.add_argument("-o", "--out", type=Path, help="coordinate file (default: stdout)")
    p.add_argument("--report", type=Path, help="write the JSON report here (default: stderr)")

    p = sub.add_parser("evaluate", help="score a coordinate file")
    _add_graph_input(p)
    p.add_argument("coords", type=Path)
    _add_params(p)

    p = sub.add_parser("repeat", help="best-of-n study over tie permutations")
    p.add_argument("method", choices=METHODS)
    _add_graph_input(p)
    _add_params(p)
    _add_embed_opts(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", type=Path, help="CSV series (default: stdout)")
    p.add_argument("--reports", type=Path, help="per-trial JSON lines")

    p = sub.add_parser("render", help="draw a coordinate file as SVG")
    p.add_argument("coords", type=Path)
    p.add_argument("out", type=Path)
    p.add_argument("--graph", type=Path, help="edge list for drawing links")
    p.add_argument("--size", type=float, default=800.0, help="picture width in pixels")
    p.add_argument("--disk-radius", type=float, default=None,
                   help="radius mapped to the picture border (default: largest r)")
    return parser


# --- helpers --------------------------------------------------------------------


def _load_graph(path: Path, directed: bool) -> Graph:
    return load_edge_list(path.read_bytes(), directed=directed)


def _given_params(args, n: int, base: EpsoParams | None = None) -> EpsoParams | None:
    vals = {"m": args.m, "ell": args.L, "beta": args.beta, "temperature": args.temperature}
    if base is None and all(v is None for v in vals.values()):
        return None
    base = base or EpsoParams()
    changes = {k: v for k, v in vals.items() if v is not None}
    return base.with_(zeta=args.zeta, n_nodes=n, **changes)


def _resolve_params(args, g: Graph) -> EpsoParams:
    given = _given_params(args, g.n_nodes)
    if given is not None and not args.estimate_params:
        return given
    mean_k = 2.0 * g.n_edges / g.n_nodes
    start = (
        args.m if args.m is not None else mean_k / 2.0,
        args.beta if args.beta is not None else 0.5,
        args.temperature if args.temperature is not None else 0.5,
    )
    return fit_params(g, kind=args.degree_kind, tie_seed=args.seed, start=start, zeta=args.zeta,
                      step_factor=args.step_factor)


def _schedule(args) -> OptimizerSchedule:
    return OptimizerSchedule(args.swap_rounds, args.noswap_rounds, args.q, args.stop_tol)


def _write(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- commands -------------------------------------------------------------------


def cmd_generate(args) -> int:
    p = EpsoParams(
        zeta=args.zeta,
        n_nodes=args.nodes,
        m=2.0 if args.m is None else args.m,
        ell=0.0 if args.L is None else args.L,
        beta=2.0 / 3.0 if args.beta is None else args.beta,
        temperature=0.3 if args.temperature is None else args.temperature,
    )
    if args.model == "pso":
        net = pso_generate(p, args.seed)
    elif args.model == "gpso":
        l_plus = args.l_plus if args.l_plus is not None else int(max(p.ell, 0)) + args.l_minus
        net = gpso_generate(p.with_(ell=0.0), l_plus, args.l_minus, args.seed)
    else:
        net = epso_generate(p, args.seed, negative_m=args.negative_m)
    g, keep = net.graph, np.arange(p.n_nodes)
    if args.largest_component:
        g, keep = largest_component(g)
    buf = io.StringIO()
    buf.write(f"# model {args.model} seed {args.seed}\n")
    write_edge_list(g, buf)
    _write(args.out, buf.getvalue())
    if args.truth is not None:
        cf = hio.CoordinateFile([g.label(u) for u in range(g.n_nodes)], net.r[keep], net.theta[keep],
                                meta={"method": f"{args.model}-truth", "seed": args.seed,
                                      "params": net.params.as_dict()})
        args.truth.write_text(hio.emit_coordinates(cf))
    return 0


def cmd_embed(args) -> int:
    g = _load_graph(args.graph, args.directed)
    p = _resolve_params(args, g)
    emb = embed(g, args.method, p, kind=args.degree_kind, tie_seed=args.seed,
                schedule=_schedule(args), angle_grid=args.angle_grid)
    report = evaluate(g, emb, method=args.method, seed=args.seed,
                      rounds=emb.meta.get("rounds", 0))
    cf = hio.coordinates_from_embedding(g, emb, method=args.method, seed=args.seed,
                                        rounds=report.rounds)
    _write(args.out, hio.emit_coordinates(cf))
    if args.report is not None:
        args.report.write_text(report.to_json() + "\n")
    else:
        sys.stderr.write(report.to_json() + "\n")
    return 0


def cmd_evaluate(args) -> int:
    g = _load_graph(args.graph, args.directed)
    cf = hio.parse_coordinates(args.coords.read_bytes())
    p = _given_params(args, g.n_nodes, base=cf.params)
    emb = hio.embedding_from_coordinates(g, cf, p)
    report = evaluate(g, emb, method=cf.meta.get("method"), seed=cf.meta.get("seed"),
                      rounds=cf.meta.get("rounds") or 0)
    sys.stdout.write(report.to_json() + "\n")
    return 0


def cmd_repeat(args) -> int:
    if args.trials < 1:
        raise ParameterError("--trials must be >= 1")
    g = _load_graph(args.graph, args.directed)
    p = _resolve_params(args, g)
    res = repeat_embeddings(g, args.method, p, args.trials, seed=args.seed, kind=args.degree_kind,
                            schedule=_schedule(args), angle_grid=args.angle_grid)
    pred_ll = pred_gr = None
    if args.trials >= 4:  # the fit needs three points with n_s >= 2
        pred_ll = fit_best_of_n(res.series("ll"), "min")
        pred_gr = fit_best_of_n(res.series("gr"), "max")
    rows = []
    for k in range(args.trials):
        n_s = k + 1
        pl = pred_ll.predict(n_s) if pred_ll is not None and n_s >= 2 else None
        pg = pred_gr.predict(n_s) if pred_gr is not None and n_s >= 2 else None
        rows.append((n_s, float(res.best_ll[k]), float(res.best_gr[k]), pl, pg))
    _write(args.out, hio.emit_series(rows))
    if args.reports is not None:
        args.reports.write_text("".join(r.to_json() + "\n" for r in res.reports))
    return 0


def render_svg(cf: hio.CoordinateFile, edges=(), size: float = 800.0,
               disk_radius: float | None = None) -> ET.Element:
    """SVG picture of a native-disk layout: nodes at ``(r cos theta, r sin theta)``."""
    if size <= 0:
        raise ParameterError("size must be positive")
    rmax = disk_radius if disk_radius is not None else (float(cf.r.max()) if cf.r.size else 1.0)
    if not rmax > 0:
        rmax = 1.0
    half = size / 2.0
    scale = 0.95 * half / rmax
    x = half + scale * cf.r * np.cos(cf.theta)
    y = half - scale * cf.r * np.sin(cf.theta)
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=f"{size:g}",
                     height=f"{size:g}", viewBox=f"0 0 {size:g} {size:g}")
    ET.SubElement(svg, "circle", cx=f"{half:g}", cy=f"{half:g}", r=f"{scale * rmax:.3f}",
                  fill="none", stroke="#bbbbbb")
    links = ET.SubElement(svg, "g", stroke="#999999", attrib={"stroke-width": "0.5"})
    for u, v in edges:
        ET.SubElement(links, "line", x1=f"{x[u]:.3f}", y1=f"{y[u]:.3f}", x2=f"{x[v]:.3f}",
                      y2=f"{y[v]:.3f}")
    nodes = ET.SubElement(svg, "g", attrib={"class": "nodes"})
    for k, label in enumerate(cf.labels):
        color = cf.colors[k] if cf.colors is not None else "#1f77b4"
        c = ET.SubElement(nodes, "circle", cx=f"{x[k]:.3f}", cy=f"{y[k]:.3f}", r="3", fill=color)
        ET.SubElement(c, "title").text = str(label)
    return svg


def cmd_render(args) -> int:
    cf = hio.parse_coordinates(args.coords.read_bytes())
    edges = []
    if args.graph is not None:
        g = load_edge_list(args.graph.read_bytes())
        index = {lab: k for k, lab in enumerate(cf.labels)}
        for u, v in g.edges:
            a, b = g.label(u), g.label(v)
            if a in index and b in index:
                edges.append((index[a], index[b]))
    svg = render_svg(cf, edges, args.size, args.disk_radius)
    ET.ElementTree(svg).write(args.out, encoding="utf-8", xml_declaration=True)
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "embed": cmd_embed,
    "evaluate": cmd_evaluate,
    "repeat": cmd_repeat,
    "render": cmd_render,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HyperembError as exc:
        print(f"hyperemb {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hyperemb {args.command}: error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
