"""Plain-text readers and writers for graphs, complexes and vertex maps.

Graph files::

    # comment
    p 8            vertex count
    e 0 1          one undirected edge per line

Complex files hold one maximal face per line as space-separated vertex ids,
after optional ``# dim D`` and ``# vertices V`` header lines.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .complexes import SimplicialComplex
from .errors import DomainError
from .graphs import Graph, custom_graph
from .persistence import VertexMap


def parse_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "p" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise DomainError(f"graph file line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise DomainError("graph file has no 'p <count>' line")
    return custom_graph(n, edges)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def format_graph(G: Graph) -> str:
    lines = [f"p {G.n_vertices}"]
    lines += [f"e {u} {w}" for u, w in sorted(G.edges)]
    return "\n".join(lines) + "\n"


def format_complex(K: SimplicialComplex) -> str:
    lines = [f"# dim {K.dim}", f"# vertices {K.n_vertices}"]
    lines += [" ".join(map(str, f)) for f in K.maximal_faces]
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> SimplicialComplex:
    faces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            faces.append(tuple(int(x) for x in line.split()))
        except ValueError:
            raise DomainError(f"complex file line {lineno}: cannot parse {raw!r}") from None
    return SimplicialComplex(faces)


def read_complex(path: str | Path) -> SimplicialComplex:
    return parse_complex(Path(path).read_text())


def vertex_map_from_json(text: str, name: str = "") -> VertexMap:
    table = json.loads(text)
    if not isinstance(table, list) or not all(isinstance(v, int) and v >= 0 for v in table):
        raise DomainError("vertex map JSON must be a list of nonnegative integers")
    return VertexMap(tuple(table), name)


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()
