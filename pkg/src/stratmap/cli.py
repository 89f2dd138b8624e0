"""
Command-line entry point.

Subcommands: ``run`` (one clustering/layout pass), ``decompose`` (the full
recursive pipeline), ``stats``, ``compare`` and ``gen``.  Exit status is 0
on success, 1 for data errors and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .compare import compare, format_report, format_tsv, read_labeled_clustering, set_overlap
from .clustering import ClusterParams
from .decompose import DEFAULT_URL_TEMPLATE, DecomposeParams, decompose, emit_index, emit_tree, run_level
from .graph import from_pajek, largest_component, network_stats, remove_isolates, symmetrize, to_pajek
from .layout import LayoutParams
from .pajek import PajekParseError, parse_pajek, write_pajek
from .synthgen import PlantedSpec, planted_partition, ring_of_cliques

log = logging.getLogger("stratmap")

SEED_ENV = "STRATMAP_SEED"


class UsageError(Exception):
    pass


def _bool(text):
    value = text.strip().lower()
    if value in ("true", "1", "yes", "on"):
        return True
    if value in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _algorithm_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--min-cluster-size", type=int, default=2)
    p.add_argument("--merge-small-clusters", type=_bool, default=True, metavar="true|false")
    p.add_argument("--attraction", type=int, default=2)
    p.add_argument("--repulsion", type=int, default=0)
    p.add_argument("--max-layout-iterations", type=int, default=1000)
    return p


def build_parser():
    common = _common_parser()
    algo = _algorithm_parser()
    parser = argparse.ArgumentParser(prog="stratmap", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common, algo], help="one clustering and layout pass")
    run.add_argument("--pajek-network", required=True)
    run.add_argument("--save-map")
    run.add_argument("--save-network")
    run.add_argument("--run-layout", action="store_true")
    run.add_argument("--run-clustering", action="store_true")

    dec = sub.add_parser("decompose", parents=[common, algo], help="recursive hierarchical decomposition")
    dec.add_argument("--input", required=True)
    dec.add_argument("--levels", type=int, default=4)
    dec.add_argument("--out-dir", default="out")
    dec.add_argument("--min-recurse-nodes", type=int, default=4)
    dec.add_argument("--url-template", default=DEFAULT_URL_TEMPLATE)
    dec.add_argument("--largest-component", action="store_true", help="keep only the largest component")

    st = sub.add_parser("stats", parents=[common], help="network characteristics")
    st.add_argument("--input", required=True)
    st.add_argument("--json", action="store_true", help="print JSON instead of aligned text")
    st.add_argument("--out-json")

    cp = sub.add_parser("compare", parents=[common], help="compare two classifications")
    cp.add_argument("--a")
    cp.add_argument("--b")
    cp.add_argument("--lists", nargs="+", metavar="FILE", help="2 or 3 label lists for an overlap report")
    cp.add_argument("--json", action="store_true", help="print JSON instead of aligned text")
    cp.add_argument("--out-tsv")
    cp.add_argument("--out-json")

    gen = sub.add_parser("gen", parents=[common], help="synthetic networks")
    gen.add_argument("kind", choices=["planted", "ring"])
    gen.add_argument("--sizes", type=_int_list, default=[25, 25, 25, 25])
    gen.add_argument("--p-in", type=float, default=0.5)
    gen.add_argument("--p-out", type=float, default=0.01)
    gen.add_argument("--k", type=int, default=4)
    gen.add_argument("--clique-size", type=int, default=6)
    gen.add_argument("--open", action="store_true", help="ring: omit the closing bridge")
    gen.add_argument("--out-dir", default=".")
    gen.add_argument("--name", default=None, help="file stem (default: the generator kind)")
    return parser


def _read(path):
    if not os.path.exists(path):
        raise UsageError(f"input file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_sym(path):
    g = symmetrize(from_pajek(parse_pajek(_read(path))))
    g, removed = remove_isolates(g)
    if removed:
        log.warning("excluded %d unconnected node(s): %s", len(removed), ", ".join(removed[:10]))
    if g.n_nodes == 0:
        raise ValueError("network has no links")
    return g


def _params(args):
    cp = ClusterParams(
        resolution=args.resolution,
        seed=args.seed,
        restarts=args.restarts,
        iterations_per_restart=args.iterations,
        min_cluster_size=args.min_cluster_size,
        merge_small=args.merge_small_clusters,
    )
    lp = LayoutParams(
        attraction=args.attraction,
        repulsion=args.repulsion,
        seed=args.seed,
        max_iterations=args.max_layout_iterations,
    )
    return cp, lp


def cmd_run(args):
    g = _load_sym(args.pajek_network)
    cp, lp = _params(args)
    map_file, clustering = run_level(
        g,
        cp,
        lp,
        map_path=args.save_map,
        network_path=args.save_network,
        run_clustering=args.run_clustering,
        run_layout=args.run_layout,
    )
    print(f"{g.n_nodes} nodes, {g.n_edges} edges, {clustering.n_clusters} clusters")
    return 0


def cmd_decompose(args):
    g = _load_sym(args.input)
    if args.largest_component:
        g = largest_component(g)
    cp, lp = _params(args)
    if "{map}" not in args.url_template:
        raise UsageError("--url-template must contain {map}")
    params = DecomposeParams(
        levels=args.levels,
        cluster_params=cp,
        layout_params=lp,
        min_recurse_nodes=args.min_recurse_nodes,
        out_dir=args.out_dir,
        url_template=args.url_template,
    )
    tree = decompose(g, params)
    emit_tree(tree, args.out_dir)
    emit_index(tree, args.url_template, args.out_dir)
    print(f"{'level':>5}  {'path':<16}  {'size':>7}  map")
    for node in tree.walk():
        print(f"{node.level:>5}  {node.path or '-':<16}  {node.size:>7}  {node.map_filename or ''}")
    return 0


def cmd_stats(args):
    stats = network_stats(from_pajek(parse_pajek(_read(args.input))))
    text, js = format_report(stats)
    sys.stdout.write(js if args.json else text)
    if args.out_json:
        _write(args.out_json, js)
    return 0


def _read_list(path):
    return [line.strip() for line in _read(path).splitlines() if line.strip()]


def cmd_compare(args):
    if args.lists:
        if len(args.lists) not in (2, 3):
            raise UsageError("--lists takes two or three files")
        report = set_overlap([_read_list(p) for p in args.lists])
    else:
        if not (args.a and args.b):
            raise UsageError("compare needs --a and --b (or --lists)")
        a = read_labeled_clustering(_read(args.a))
        b = read_labeled_clustering(_read(args.b))
        report = compare(a, b)
    text, js = format_report(report)
    sys.stdout.write(js if args.json else text)
    if args.out_json:
        _write(args.out_json, js)
    if args.out_tsv:
        _write(args.out_tsv, format_tsv(report))
    return 0


def cmd_gen(args):
    os.makedirs(args.out_dir, exist_ok=True)
    if args.kind == "planted":
        g, truth = planted_partition(PlantedSpec(args.sizes, args.p_in, args.p_out, args.seed))
    else:
        g, truth = ring_of_cliques(args.k, args.clique_size, ring=not args.open)
    stem = os.path.join(args.out_dir, args.name or args.kind)
    _write(stem + ".net", write_pajek(to_pajek(g)))
    _write(stem + "_truth.tsv", "".join(f"{label}\t{c}\n" for label, c in zip(g.labels, truth.tolist())))
    print(f"wrote {stem}.net and {stem}_truth.tsv ({g.n_nodes} nodes, {g.arcs.nnz} arcs)")
    return 0


COMMANDS = {
    "run": cmd_run,
    "decompose": cmd_decompose,
    "stats": cmd_stats,
    "compare": cmd_compare,
    "gen": cmd_gen,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"stratmap {args.command}: {exc}", file=sys.stderr)
        return 2
    except (PajekParseError, ValueError, KeyError) as exc:
        print(f"stratmap {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
