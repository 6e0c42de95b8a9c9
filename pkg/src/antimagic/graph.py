"""Graph substrate: simple undirected graphs with stable edge ids, breadth-first
layerings, and per-layer bipartite views.

Everything downstream depends on two determinism guarantees made here: edge ids
follow input order, and every adjacency list is sorted by (neighbor, edge id).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GraphFormatError, GraphShapeError


class Graph:
    """Immutable simple undirected graph on dense vertex ids 0..n-1.

    Edges carry stable ids 0..m-1 in construction order; endpoints are stored
    normalized as (min, max).
    """

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: list[tuple[int, int]]):
        if n < 1:
            raise GraphShapeError("graph needs at least one vertex")
        normalized: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphShapeError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise GraphShapeError(f"loop edge at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphShapeError(f"duplicate edge ({e[0]}, {e[1]})")
            seen.add(e)
            normalized.append(e)
        self.n = n
        self.edges = tuple(normalized)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        for lst in adj:
            lst.sort()
        self._adj = tuple(tuple(lst) for lst in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbor, edge id) pairs at v, sorted."""
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self._adj[v]]

    def other_end(self, eid: int, v: int) -> int:
        u, w = self.edges[eid]
        if v == u:
            return w
        if v == w:
            return u
        raise ValueError(f"vertex {v} is not an endpoint of edge {eid}")

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = bytearray(self.n)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for w, _ in self._adj[v]:
                if not seen[w]:
                    seen[w] = 1
                    count += 1
                    stack.append(w)
        return count == self.n


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: one edge per line as two whitespace-separated
    non-negative integers, '#' lines ignored, vertex count = max id + 1."""
    edges: list[tuple[int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop edge at vertex {u}")
        max_id = max(max_id, u, v)
        edges.append((u, v))
    if max_id < 0:
        raise GraphFormatError("no edges in input")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise GraphFormatError(f"duplicate edge ({e[0]}, {e[1]})")
        seen.add(e)
    return Graph(max_id + 1, edges)


def format_edge_list(graph: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in graph.edges)


def validate_even_regular(graph: Graph) -> int:
    """Check the graph is connected and (2k+2)-regular for some k >= 1; return k."""
    degrees = {graph.degree(v) for v in range(graph.n)}
    if len(degrees) != 1:
        raise GraphShapeError(f"graph is not regular (degrees {sorted(degrees)})")
    d = degrees.pop()
    if d % 2 != 0:
        raise GraphShapeError(f"degree {d} is odd; an even degree >= 4 is required")
    if d < 4:
        raise GraphShapeError(f"degree {d} out of scope; the construction needs degree 2k+2 with k >= 1")
    if not graph.is_connected():
        raise GraphShapeError("graph is disconnected")
    return (d - 2) // 2


@dataclass(frozen=True)
class Layering:
    """Breadth-first distance classes from a root, plus per-edge classes.

    Edge class i means the edge joins two layer-i vertices or a layer-i vertex
    to a layer-(i-1) vertex.
    """

    root: int
    layers: tuple[tuple[int, ...], ...]
    layer_of: tuple[int, ...]
    edge_class: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.layers) - 1


def bfs_layering(graph: Graph, root: int) -> Layering:
    if not (0 <= root < graph.n):
        raise GraphShapeError(f"root {root} is not a vertex of the graph")
    dist = [-1] * graph.n
    dist[root] = 0
    queue = [root]
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for w, _ in graph.incident(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    if any(d < 0 for d in dist):
        raise GraphShapeError("graph is disconnected")
    depth = max(dist)
    layers: list[list[int]] = [[] for _ in range(depth + 1)]
    for v in range(graph.n):
        layers[dist[v]].append(v)
    edge_class = []
    for u, v in graph.edges:
        edge_class.append(max(dist[u], dist[v]))
    return Layering(
        root=root,
        layers=tuple(tuple(layer) for layer in layers),
        layer_of=tuple(dist),
        edge_class=tuple(edge_class),
    )


@dataclass(frozen=True)
class BipartiteView:
    """The bipartite graph of cross edges between two consecutive layers.

    Inner vertices sit in the layer closer to the root; outer vertices in the
    layer farther out. Edge ids are the ids of the underlying graph.
    """

    index: int
    inner: tuple[int, ...]
    outer: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (inner vertex, outer vertex, edge id)
    _side: dict[int, str] = field(repr=False, default_factory=dict)
    _adj: dict[int, tuple[tuple[int, int], ...]] = field(repr=False, default_factory=dict)
    _ends: dict[int, tuple[int, int]] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        side = {v: "inner" for v in self.inner}
        for v in self.outer:
            if v in side:
                raise GraphShapeError(f"vertex {v} on both sides of a bipartite view")
            side[v] = "outer"
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in side}
        ends: dict[int, tuple[int, int]] = {}
        for x, y, eid in self.edges:
            if side.get(x) != "inner" or side.get(y) != "outer":
                raise GraphShapeError(f"view edge ({x}, {y}) does not cross the two sides")
            adj[x].append((y, eid))
            adj[y].append((x, eid))
            ends[eid] = (x, y)
        for lst in adj.values():
            lst.sort()
        object.__setattr__(self, "_side", side)
        object.__setattr__(self, "_adj", {v: tuple(lst) for v, lst in adj.items()})
        object.__setattr__(self, "_ends", ends)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def side(self, v: int) -> str:
        return self._side[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbor, edge id) pairs at v in the view, sorted."""
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self._adj[v]]

    def ends_of(self, eid: int) -> tuple[int, int]:
        """(inner, outer) endpoints of a view edge."""
        return self._ends[eid]

    def edge_between(self, u: int, v: int) -> int | None:
        for w, eid in self._adj[u]:
            if w == v:
                return eid
        return None

    def edge_ids(self) -> list[int]:
        return [eid for _, _, eid in self.edges]


def layer_view(graph: Graph, layering: Layering, index: int) -> BipartiteView:
    """Bipartite view between layers index-1 and index; inner side may include
    vertices with no cross edges, the outer side never does (by BFS)."""
    if not (1 <= index <= layering.depth):
        raise GraphShapeError(f"layer index {index} out of range 1..{layering.depth}")
    inner = layering.layers[index - 1]
    outer = layering.layers[index]
    edges = []
    for eid, (u, v) in enumerate(graph.edges):
        du, dv = layering.layer_of[u], layering.layer_of[v]
        if du == index - 1 and dv == index:
            edges.append((u, v, eid))
        elif dv == index - 1 and du == index:
            edges.append((v, u, eid))
    return BipartiteView(index=index, inner=inner, outer=outer, edges=tuple(edges))
