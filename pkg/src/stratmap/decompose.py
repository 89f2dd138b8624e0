"""
Recursive decomposition of a network into a tree of clustered maps.

Every clustering pass writes a map file and a network file.  The top
level is ``m0.txt``/``n0.txt``; cluster ``c`` of the top level is written
as ``m<c>.txt``, its sub-cluster ``d`` as ``m<c>_<d>.txt`` and so on.
"""

from __future__ import annotations

import html
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from .clustering import ClusterParams, Clustering, association_strength, cluster
from .graph import induced_subgraph, to_pajek
from .layout import LayoutParams, layout
from .pajek import MapFile, MapRow, write_map_file, write_network_file, write_pajek

__all__ = [
    "TreeNode",
    "DecompositionTree",
    "DecomposeParams",
    "run_level",
    "decompose",
    "emit_tree",
    "emit_index",
    "map_filename",
    "network_filename",
    "pajek_filename",
    "DEFAULT_URL_TEMPLATE",
]

log = logging.getLogger(__name__)

DEFAULT_URL_TEMPLATE = "https://www.vosviewer.com/vosviewer.php?map={map}&network={network}"


def map_filename(path):
    return f"m{path or 0}.txt"


def network_filename(path):
    return f"n{path or 0}.txt"


def pajek_filename(path, level):
    return "level0.net" if not path else f"level{level}_{path}.net"


@dataclass
class TreeNode:
    path: str
    level: int
    members: list
    children: list = field(default_factory=list)
    map_filename: str | None = None
    network_filename: str | None = None

    @property
    def size(self):
        return len(self.members)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self):
        d = {
            "path": self.path,
            "level": self.level,
            "size": self.size,
            "map": self.map_filename,
            "network": self.network_filename,
        }
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        else:
            d["members"] = list(self.members)
        return d


@dataclass
class DecompositionTree:
    root: TreeNode

    def walk(self):
        return self.root.walk()

    def leaves(self):
        return [node for node in self.walk() if not node.children]

    def filenames(self):
        """Every file a decomposition of this tree writes, sorted."""
        names = set()
        for node in self.walk():
            if node.map_filename:
                names |= {node.map_filename, node.network_filename, pajek_filename(node.path, node.level)}
        return sorted(names)

    def label_paths(self):
        """Map each label to ``(deepest path, deepest node with files)``."""
        out = {}

        def visit(node, with_files):
            if node.map_filename:
                with_files = node
            if not node.children:
                for label in node.members:
                    out[label] = (node.path, with_files)
            for child in node.children:
                visit(child, with_files)

        visit(self.root, self.root)
        return out


@dataclass
class DecomposeParams:
    levels: int = 4
    cluster_params: ClusterParams = field(default_factory=ClusterParams)
    layout_params: LayoutParams = field(default_factory=LayoutParams)
    min_recurse_nodes: int = 4
    out_dir: str = "."
    url_template: str = DEFAULT_URL_TEMPLATE

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be >= 1")


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run_level(
    g,
    cluster_params=ClusterParams(),
    layout_params=LayoutParams(),
    map_path=None,
    network_path=None,
    run_clustering=True,
    run_layout=True,
):
    """One clustering + layout pass over ``g``.

    Writes the map and network files when paths are given and returns the
    in-memory ``(MapFile, Clustering)``.  Without clustering every node is
    in cluster 1; without layout all coordinates are zero.
    """
    n = g.n_nodes
    if n == 0:
        raise ValueError("cannot run a level on an empty graph")
    ng = association_strength(g, allow_isolates=True)
    if run_clustering and n > 1:
        clustering = cluster(ng, cluster_params)
    else:
        clustering = Clustering(np.ones(n, dtype=np.int64), 0.0)
    pos = layout(ng, layout_params) if run_layout else np.zeros((n, 2))
    degree = g.degree
    strength = g.node_strength
    rows = [
        MapRow(
            id=i + 1,
            label=g.labels[i],
            x=float(pos[i, 0]),
            y=float(pos[i, 1]),
            cluster=int(clustering.assignment[i]),
            links=int(degree[i]),
            total_link_strength=float(strength[i]),
        )
        for i in range(n)
    ]
    map_file = MapFile(rows)
    if map_path is not None:
        _write(map_path, write_map_file(map_file))
    if network_path is not None:
        _write(network_path, write_network_file(g))
    return map_file, clustering


def decompose(g, params=DecomposeParams()):
    """Cluster ``g``, then recursively re-cluster each cluster.

    A tree node is re-clustered (and gets its own files) while its level
    does not exceed ``params.levels`` and it has at least
    ``params.min_recurse_nodes`` members.  A pass that yields a single
    cluster makes the node a leaf.
    """
    if g.n_nodes == 0:
        raise ValueError("cannot decompose an empty graph")
    os.makedirs(params.out_dir, exist_ok=True)
    root = TreeNode(path="", level=1, members=list(g.labels))
    _expand(root, g, params)
    return DecompositionTree(root)


def _expand(node, g, params):
    out = params.out_dir
    node.map_filename = map_filename(node.path)
    node.network_filename = network_filename(node.path)
    _write(os.path.join(out, pajek_filename(node.path, node.level)), write_pajek(to_pajek(g)))
    _, clustering = run_level(
        g,
        params.cluster_params,
        params.layout_params,
        os.path.join(out, node.map_filename),
        os.path.join(out, node.network_filename),
    )
    log.info("level %d path %r: %d nodes, %d clusters", node.level, node.path, g.n_nodes, clustering.n_clusters)
    if clustering.n_clusters < 2:
        return
    labels = np.asarray(g.labels, dtype=object)
    for c in range(1, clustering.n_clusters + 1):
        members = labels[clustering.assignment == c].tolist()
        path = f"{node.path}_{c}" if node.path else str(c)
        child = TreeNode(path=path, level=node.level + 1, members=members)
        node.children.append(child)
        if child.level <= params.levels and child.size >= params.min_recurse_nodes:
            _expand(child, induced_subgraph(g, members), params)


def _tree_html(node, depth=0):
    pad = "  " * depth
    name = "all" if not node.path else node.path
    text = f"{html.escape(name)} ({node.size})"
    if node.map_filename:
        text = f'<a href="{html.escape(node.map_filename)}">{text}</a>'
    lines = [f"{pad}<li>{text}"]
    if node.children:
        lines.append(f"{pad}<ul>")
        for child in node.children:
            lines += _tree_html(child, depth + 1)
        lines.append(f"{pad}</ul>")
    elif node.path:
        lines.append(f"{pad}<ul class=\"members\">")
        lines += [f"{pad}  <li>{html.escape(m)}</li>" for m in node.members]
        lines.append(f"{pad}</ul>")
    lines.append(f"{pad}</li>")
    return lines


def emit_tree(tree, out_dir):
    """Write ``tree.json`` and ``tree.html``; returns their paths."""
    json_path = os.path.join(out_dir, "tree.json")
    html_path = os.path.join(out_dir, "tree.html")
    _write(json_path, json.dumps(tree.root.to_dict(), indent=1, ensure_ascii=False) + "\n")
    body = "\n".join(["<ul>"] + _tree_html(tree.root, 1) + ["</ul>"])
    _write(
        html_path,
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>Decomposition tree</title></head>\n"
        f"<body>\n{body}\n</body>\n</html>\n",
    )
    return json_path, html_path


def _link(template, node):
    return template.replace("{map}", node.map_filename).replace("{network}", node.network_filename)


def emit_index(tree, url_template, out_dir):
    """Write ``index.html``: one row per label with its path and map link.

    ``url_template`` must contain ``{map}`` and may contain ``{network}``;
    they are replaced by the deepest map/network files holding the label.
    """
    if "{map}" not in url_template:
        raise ValueError("url template must contain a {map} placeholder")
    rows = []
    for label, (path, node) in sorted(tree.label_paths().items()):
        href = html.escape(_link(url_template, node), quote=True)
        rows.append(
            f"<tr><td><a href=\"{href}\">{html.escape(label)}</a></td><td>{html.escape(path)}</td></tr>"
        )
    path = os.path.join(out_dir, "index.html")
    _write(
        path,
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>Index</title></head>\n<body>\n"
        "<table>\n<tr><th>label</th><th>path</th></tr>\n" + "\n".join(rows) + "\n</table>\n</body>\n</html>\n",
    )
    return path
