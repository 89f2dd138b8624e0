"""
Readers and writers for Pajek ``.net`` networks and the tab-separated
map/network files consumed by bibliometric map viewers.

All writers are deterministic: the same input always produces the same
bytes.  Text is UTF-8 with ``\\n`` line endings.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PajekParseError",
    "PajekDocument",
    "MapRow",
    "MapFile",
    "NetworkFile",
    "parse_pajek",
    "write_pajek",
    "read_pajek",
    "parse_map_file",
    "write_map_file",
    "parse_network_file",
    "write_network_file",
    "format_number",
    "MAP_HEADER",
]

MAP_HEADER = (
    "id",
    "label",
    "x",
    "y",
    "cluster",
    "weight<Links>",
    "weight<Total link strength>",
)


class PajekParseError(ValueError):
    """Raised on malformed input; ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message, lineno=0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def format_number(value):
    """Shortest decimal text that reads back to exactly ``value``."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {value!r}")
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _format_coord(value):
    text = f"{float(value):.4f}"
    if text == "-0.0000":
        text = "0.0000"
    return text


# ---------------------------------------------------------------- Pajek


@dataclass
class PajekDocument:
    """A parsed ``.net`` file.

    ``arcs`` are directed ``(src, dst, weight)`` triples and ``edges``
    undirected ``(a, b, weight)`` triples with ``a <= b``.  Vertex ids are
    1-based and dense.
    """

    vertices: list = field(default_factory=list)
    arcs: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def labels(self):
        return [label for _, label in sorted(self.vertices)]

    def validate(self):
        ids = sorted(v for v, _ in self.vertices)
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("vertex ids must be dense in 1..N")
        n = len(ids)
        for kind, triples in (("arc", self.arcs), ("edge", self.edges)):
            for a, b, w in triples:
                if not (1 <= a <= n and 1 <= b <= n):
                    raise ValueError(f"{kind} ({a}, {b}) references an undeclared vertex")
                if not math.isfinite(w) or w < 0:
                    raise ValueError(f"{kind} ({a}, {b}) has invalid weight {w!r}")
        return self


_TOKEN = re.compile(r'"((?:[^"]|"")*)"|(\S+)')


def _tokenize(line, lineno):
    tokens = []
    for m in _TOKEN.finditer(line):
        if m.group(1) is not None:
            tokens.append(m.group(1).replace('""', '"'))
        elif m.group(2).startswith('"'):
            raise PajekParseError("unterminated quoted label", lineno)
        else:
            tokens.append(m.group(2))
    return tokens


def _parse_int(token, lineno, what):
    try:
        return int(token)
    except ValueError:
        raise PajekParseError(f"{what} {token!r} is not an integer", lineno) from None


def _parse_weight(token, lineno):
    try:
        w = float(token)
    except ValueError:
        raise PajekParseError(f"non-numeric weight {token!r}", lineno) from None
    if not math.isfinite(w) or w < 0:
        raise PajekParseError(f"weight {token!r} must be finite and non-negative", lineno)
    return w


def parse_pajek(text):
    """Parse the text of a Pajek ``.net`` file.

    Supports a ``*Vertices N`` header, quoted or bare labels, and
    ``*Arcs``/``*Edges`` sections.  Lines starting with ``%`` are comments.
    Repeated arcs between the same ordered pair (edges: unordered pair)
    have their weights summed; an absent weight counts as 1.

    Raises
    ------
    PajekParseError
        With the offending line number.
    """
    n = None
    vertices = {}
    order = []
    arcs = {}
    edges = {}
    section = None
    last_vertex_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            key = head[0].lower()
            if key == "*vertices":
                if n is not None:
                    raise PajekParseError("duplicate *Vertices header", lineno)
                if len(head) < 2:
                    raise PajekParseError("*Vertices header lacks a count", lineno)
                n = _parse_int(head[1], lineno, "vertex count")
                if n < 0:
                    raise PajekParseError("negative vertex count", lineno)
                section = "vertices"
                last_vertex_line = lineno
            elif key in ("*arcs", "*edges"):
                if n is None:
                    raise PajekParseError(f"{head[0]} before *Vertices", lineno)
                section = key[1:]
            elif key == "*network":
                continue
            else:
                raise PajekParseError(f"unsupported section {head[0]!r}", lineno)
            continue
        if section is None:
            raise PajekParseError("data before *Vertices header", lineno)
        tokens = _tokenize(line, lineno)
        if section == "vertices":
            vid = _parse_int(tokens[0], lineno, "vertex id")
            if not 1 <= vid <= n:
                raise PajekParseError(f"vertex id {vid} out of range 1..{n}", lineno)
            if vid in vertices:
                raise PajekParseError(f"duplicate vertex id {vid}", lineno)
            vertices[vid] = tokens[1] if len(tokens) > 1 else str(vid)
            order.append(vid)
            last_vertex_line = lineno
        else:
            if len(tokens) < 2:
                raise PajekParseError("link line needs two vertex ids", lineno)
            a = _parse_int(tokens[0], lineno, "vertex id")
            b = _parse_int(tokens[1], lineno, "vertex id")
            for v in (a, b):
                if not 1 <= v <= n:
                    raise PajekParseError(f"vertex id {v} out of range 1..{n}", lineno)
            w = _parse_weight(tokens[2], lineno) if len(tokens) > 2 else 1.0
            if section == "arcs":
                arcs[(a, b)] = arcs.get((a, b), 0.0) + w
            else:
                key = (min(a, b), max(a, b))
                edges[key] = edges.get(key, 0.0) + w
    if n is None:
        raise PajekParseError("missing *Vertices header", 1)
    if len(vertices) != n:
        raise PajekParseError(
            f"*Vertices declares {n} vertices but {len(vertices)} were listed",
            last_vertex_line,
        )
    return PajekDocument(
        vertices=[(v, vertices[v]) for v in order],
        arcs=[(a, b, w) for (a, b), w in arcs.items()],
        edges=[(a, b, w) for (a, b), w in edges.items()],
    )


def _quote(label):
    return '"' + str(label).replace('"', '""') + '"'


def write_pajek(doc):
    """Serialize a :class:`PajekDocument`; empty link sections are omitted."""
    doc.validate()
    lines = [f"*Vertices {doc.vertex_count}"]
    lines += [f"{vid} {_quote(label)}" for vid, label in doc.vertices]
    if doc.arcs:
        lines.append("*Arcs")
        lines += [f"{a} {b} {format_number(w)}" for a, b, w in doc.arcs]
    if doc.edges:
        lines.append("*Edges")
        lines += [f"{a} {b} {format_number(w)}" for a, b, w in doc.edges]
    return "\n".join(lines) + "\n"


def read_pajek(path):
    with open(path, encoding="utf-8") as fh:
        return parse_pajek(fh.read())


# ---------------------------------------------------------------- map files


@dataclass(frozen=True)
class MapRow:
    id: int
    label: str
    x: float
    y: float
    cluster: int
    links: int
    total_link_strength: float


@dataclass
class MapFile:
    rows: list = field(default_factory=list)

    def validate(self):
        ids = [r.id for r in self.rows]
        if len(set(ids)) != len(ids):
            raise ValueError("map ids must be unique")
        clusters = {r.cluster for r in self.rows}
        if clusters and clusters != set(range(1, max(clusters) + 1)):
            raise ValueError("cluster numbers must form a contiguous 1..K range")
        for r in self.rows:
            if not (math.isfinite(r.x) and math.isfinite(r.y)):
                raise ValueError(f"row {r.id}: non-finite coordinate")
            if r.links < 0 or r.total_link_strength < 0:
                raise ValueError(f"row {r.id}: negative weight column")
        return self

    def labels(self):
        return [r.label for r in self.rows]

    def clusters(self):
        return {r.label: r.cluster for r in self.rows}


def _check_label(label):
    if any(c in label for c in "\t\r\n"):
        raise ValueError(f"label {label!r} contains a tab or newline")
    return label


def write_map_file(map_file):
    map_file.validate()
    lines = ["\t".join(MAP_HEADER)]
    for r in map_file.rows:
        lines.append(
            "\t".join(
                [
                    str(r.id),
                    _check_label(r.label),
                    _format_coord(r.x),
                    _format_coord(r.y),
                    str(r.cluster),
                    str(r.links),
                    format_number(r.total_link_strength),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def parse_map_file(text):
    lines = text.splitlines()
    if not lines:
        raise PajekParseError("empty map file", 1)
    header = lines[0].split("\t")
    missing = [c for c in MAP_HEADER if c not in header]
    if missing:
        raise PajekParseError(f"map header lacks column(s) {missing}", 1)
    col = {name: header.index(name) for name in MAP_HEADER}
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < len(header):
            raise PajekParseError("too few columns", lineno)
        try:
            cluster = int(parts[col["cluster"]])
        except ValueError:
            raise PajekParseError(
                f"cluster {parts[col['cluster']]!r} is not an integer", lineno
            ) from None
        try:
            row = MapRow(
                id=int(parts[col["id"]]),
                label=parts[col["label"]],
                x=float(parts[col["x"]]),
                y=float(parts[col["y"]]),
                cluster=cluster,
                links=int(parts[col["weight<Links>"]]),
                total_link_strength=float(parts[col["weight<Total link strength>"]]),
            )
        except ValueError as exc:
            raise PajekParseError(str(exc), lineno) from None
        rows.append(row)
    try:
        return MapFile(rows).validate()
    except ValueError as exc:
        raise PajekParseError(str(exc)) from None


# ---------------------------------------------------------------- network files


@dataclass
class NetworkFile:
    rows: list = field(default_factory=list)


def write_network_file(g):
    """Headerless ``i<TAB>j<TAB>strength`` rows of a symmetric graph, ``i < j``.

    Ids are 1-based positions in ``g.labels``.
    """
    upper = g.adjacency.tocoo()
    mask = upper.row < upper.col
    i, j, w = upper.row[mask], upper.col[mask], upper.data[mask]
    if np.any(upper.row == upper.col):
        raise ValueError("network files cannot hold loops")
    idx = np.lexsort((j, i))
    return "".join(
        f"{a + 1}\t{b + 1}\t{format_number(s)}\n" for a, b, s in zip(i[idx], j[idx], w[idx])
    )


def parse_network_file(text):
    rows = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise PajekParseError("expected three tab-separated columns", lineno)
        try:
            i, j, s = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise PajekParseError(str(exc), lineno) from None
        if i == j:
            raise PajekParseError(f"loop {i}-{j} not allowed in a network file", lineno)
        if i > j:
            raise PajekParseError(f"row ({i}, {j}) must have i < j", lineno)
        if (i, j) in seen:
            raise PajekParseError(f"duplicate row ({i}, {j})", lineno)
        if not math.isfinite(s) or s <= 0:
            raise PajekParseError(f"strength {parts[2]!r} must be positive", lineno)
        seen.add((i, j))
        rows.append((i, j, s))
    return NetworkFile(rows)
