"""Residual graphs and their decomposition into closed and open trails.

For each layer the cross edges minus parent edges form the residual graph;
removing link edges as well leaves the trail graph.  Every component of the
trail graph splits into edge-disjoint trails: one closed trail if all degrees
are even, otherwise one open trail per pair of odd-degree vertices, obtained
by pairing them with dummy edges, walking an Euler circuit, and cutting at the
dummies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .covering import CoveringPair, Link
from .errors import InternalInvariantError
from .graph import BipartiteView


@dataclass(frozen=True)
class Trail:
    """Walk without repeated edges; vertices has one entry more than edges,
    and a closed trail starts and ends at the same vertex."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    closed: bool

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise InternalInvariantError("trail vertex/edge lengths disagree")
        if self.closed and self.vertices[0] != self.vertices[-1]:
            raise InternalInvariantError("closed trail does not return to its start")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def ends(self) -> tuple[int, int]:
        return (self.vertices[0], self.vertices[-1])

    def reverse(self) -> "Trail":
        return Trail(tuple(reversed(self.vertices)), tuple(reversed(self.edges)), self.closed)


@dataclass(frozen=True)
class Component:
    cid: int
    vertices: frozenset[int]
    edge_count: int
    degrees: dict[int, int] = field(hash=False)


@dataclass(frozen=True)
class TrailFamily:
    """All trails of one layer's trail graph, classified by end layers:
    closed trails (one per even-degree component, tagged with their component),
    open trails with both ends inner, both ends outer, or one of each."""

    components: tuple[Component, ...]
    closed: tuple[tuple[int, Trail], ...]
    open_inner: tuple[Trail, ...]
    open_outer: tuple[Trail, ...]
    open_mixed: tuple[Trail, ...]

    @property
    def edge_total(self) -> int:
        return sum(c.edge_count for c in self.components)

    def all_trails(self):
        for _, t in self.closed:
            yield t
        yield from self.open_inner
        yield from self.open_outer
        yield from self.open_mixed


def residual_edge_sets(view: BipartiteView, pair: CoveringPair,
                       parent_edge: dict[int, int]) -> tuple[frozenset[int], frozenset[int]]:
    """(residual edge ids, trail edge ids) after removing parent edges and,
    for the second set, link edges as well."""
    all_eids = {eid for _, _, eid in view.edges}
    missing = set(view.outer) - set(parent_edge)
    if missing:
        raise InternalInvariantError(f"outer vertices without a parent edge: {sorted(missing)}")
    sigma_eids = set()
    for u, eid in parent_edge.items():
        if eid not in all_eids or view.ends_of(eid)[1] != u:
            raise InternalInvariantError(f"parent edge {eid} is not a view edge at vertex {u}")
        sigma_eids.add(eid)
    if len(sigma_eids) != len(parent_edge):
        raise InternalInvariantError("parent edges collide")
    if sigma_eids & pair.link_edge_ids:
        raise InternalInvariantError("a parent edge is also a link edge")
    residual = all_eids - sigma_eids
    return frozenset(residual), frozenset(residual - pair.link_edge_ids)


def _euler_circuit(adj: dict[int, list[tuple[int, int]]], start: int) -> tuple[list[int], list[int]]:
    """Iterative Hierholzer walk over an even-degree connected edge set;
    adjacency lists must be sorted for determinism."""
    ptr = {v: 0 for v in adj}
    used: set[int] = set()
    stack_v = [start]
    stack_e: list[int] = []
    out_v: list[int] = []
    out_e: list[int] = []
    while stack_v:
        v = stack_v[-1]
        advanced = False
        while ptr[v] < len(adj[v]):
            w, eid = adj[v][ptr[v]]
            if eid in used:
                ptr[v] += 1
                continue
            used.add(eid)
            stack_v.append(w)
            stack_e.append(eid)
            advanced = True
            break
        if not advanced:
            out_v.append(stack_v.pop())
            if stack_e:
                out_e.append(stack_e.pop())
    out_v.reverse()
    out_e.reverse()
    if out_v[0] != out_v[-1] or len(out_v) != len(out_e) + 1:
        raise InternalInvariantError("Euler walk did not close into a circuit")
    return out_v, out_e


def _split_at_dummies(verts: list[int], eids: list[int]) -> list[Trail]:
    """Cut a circuit at negative (dummy) edge ids into open trails."""
    length = len(eids)
    cyc = verts[:length]
    dummy_pos = [i for i, eid in enumerate(eids) if eid < 0]
    trails = []
    for idx, j in enumerate(dummy_pos):
        nj = dummy_pos[(idx + 1) % len(dummy_pos)]
        seg_len = (nj - j - 1) % length
        if seg_len == 0:
            raise InternalInvariantError("dummy edges are adjacent in the Euler circuit")
        seg_e = []
        seg_v = [cyc[(j + 1) % length]]
        for step in range(seg_len):
            pos = (j + 1 + step) % length
            seg_e.append(eids[pos])
            seg_v.append(cyc[(pos + 1) % length])
        trails.append(Trail(tuple(seg_v), tuple(seg_e), closed=False))
    return trails


def decompose_trails(view: BipartiteView, trail_eids: frozenset[int]) -> TrailFamily:
    """Split the trail graph into components and decompose each into trails."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for x, y, eid in view.edges:
        if eid in trail_eids:
            adj.setdefault(x, []).append((y, eid))
            adj.setdefault(y, []).append((x, eid))
    for lst in adj.values():
        lst.sort()

    comp_members: list[list[int]] = []
    comp_of: dict[int, int] = {}
    for v in sorted(adj):
        if v in comp_of:
            continue
        cid = len(comp_members)
        stack = [v]
        comp_of[v] = cid
        members = []
        while stack:
            u = stack.pop()
            members.append(u)
            for w, _eid in adj[u]:
                if w not in comp_of:
                    comp_of[w] = cid
                    stack.append(w)
        comp_members.append(sorted(members))

    components: list[Component] = []
    closed: list[tuple[int, Trail]] = []
    open_inner: list[Trail] = []
    open_outer: list[Trail] = []
    open_mixed: list[Trail] = []
    dummy_next = -1
    covered: list[int] = []

    for cid, members in enumerate(comp_members):
        degrees = {v: len(adj[v]) for v in members}
        edge_count = sum(degrees.values()) // 2
        components.append(Component(cid, frozenset(members), edge_count, degrees))
        odd = sorted(v for v in members if degrees[v] % 2)
        if not odd:
            verts, eids = _euler_circuit({v: adj[v] for v in members}, min(members))
            trail = Trail(tuple(verts), tuple(eids), closed=True)
            closed.append((cid, trail))
            covered.extend(eids)
            continue
        aug = {v: list(adj[v]) for v in members}
        for i in range(0, len(odd), 2):
            a, b = odd[i], odd[i + 1]
            aug[a].append((b, dummy_next))
            aug[b].append((a, dummy_next))
            dummy_next -= 1
        for lst in aug.values():
            lst.sort()
        verts, eids = _euler_circuit(aug, min(members))
        segments = _split_at_dummies(verts, eids)
        end_seen: dict[int, int] = {}
        for seg in segments:
            for end in seg.ends:
                end_seen[end] = end_seen.get(end, 0) + 1
            covered.extend(seg.edges)
            sides = {view.side(seg.vertices[0]), view.side(seg.vertices[-1])}
            if sides == {"inner"}:
                _require_parity(seg, even=True)
                open_inner.append(seg)
            elif sides == {"outer"}:
                _require_parity(seg, even=True)
                open_outer.append(seg)
            else:
                _require_parity(seg, even=False)
                open_mixed.append(seg)
        if sorted(end_seen) != odd or any(cnt != 1 for cnt in end_seen.values()):
            raise InternalInvariantError(
                f"odd-degree vertices of component {cid} are not trail ends exactly once")

    if sorted(covered) != sorted(trail_eids):
        raise InternalInvariantError("trails do not cover the trail graph exactly once")

    return TrailFamily(
        components=tuple(components),
        closed=tuple(closed),
        open_inner=tuple(open_inner),
        open_outer=tuple(open_outer),
        open_mixed=tuple(open_mixed),
    )


def _require_parity(trail: Trail, even: bool) -> None:
    if (trail.edge_count % 2 == 0) != even:
        kind = "even" if even else "odd"
        raise InternalInvariantError(
            f"trail between {trail.ends} should have an {kind} number of edges, has {trail.edge_count}")


def detect_bad_components(family: TrailFamily, view: BipartiteView,
                          pair: CoveringPair, k: int) -> frozenset[int]:
    """Component ids that are 2k-regular with every outer vertex a link end."""
    bad = set()
    for comp in family.components:
        if any(deg != 2 * k for deg in comp.degrees.values()):
            continue
        outer = [v for v in comp.vertices if view.side(v) == "outer"]
        if outer and all(v in pair.link_ends for v in outer):
            bad.add(comp.cid)
    return frozenset(bad)


@dataclass(frozen=True)
class BadAnalysis:
    """Trail family plus bad-component bookkeeping for one layer."""

    family: TrailFamily
    bad_cids: frozenset[int]
    bad_vertices: frozenset[int]
    free_links: tuple[Link, ...]
    free_count: int


def analyze_bad_components(view: BipartiteView, pair: CoveringPair,
                           parent_edge: dict[int, int], k: int) -> BadAnalysis:
    """Decompose the trail graph and work out which links are free (at least
    one end outside every bad component)."""
    _, trail_eids = residual_edge_sets(view, pair, parent_edge)
    family = decompose_trails(view, trail_eids)
    bad_cids = detect_bad_components(family, view, pair, k)
    bad_vertices: set[int] = set()
    for cid in bad_cids:
        bad_vertices.update(family.components[cid].vertices)
    free = tuple(l for l in pair.links
                 if l.end_a not in bad_vertices or l.end_b not in bad_vertices)
    return BadAnalysis(family, bad_cids, frozenset(bad_vertices), free, len(free))


def choose_closed_start(trail: Trail, component: Component, bad: bool,
                        pair: CoveringPair, view: BipartiteView, k: int) -> tuple[int, str]:
    """Start vertex and labeling case for a closed trail.

    Bad components start at their lowest outer vertex ("bad", low labels
    first).  Otherwise prefer an outer vertex of low degree or one that is not
    a link end ("outer-high"), falling back to a low-degree inner vertex
    ("inner-low"); one of the two always exists in a non-bad component.
    """
    verts = set(trail.vertices)
    outer_verts = sorted(v for v in verts if view.side(v) == "outer")
    if bad:
        return outer_verts[0], "bad"
    for v in outer_verts:
        if component.degrees[v] <= 2 * k - 1 or v not in pair.link_ends:
            return v, "outer-high"
    for v in sorted(verts - set(outer_verts)):
        if component.degrees[v] <= 2 * k - 1:
            return v, "inner-low"
    raise InternalInvariantError(
        f"no valid start vertex for the closed trail of component {component.cid}")


def rotate_closed(trail: Trail, start: int) -> Trail:
    """Rotate a closed trail to begin at `start` (first occurrence), directed
    so the first edge id is below the last."""
    if not trail.closed:
        raise InternalInvariantError("cannot rotate an open trail")
    q = trail.edge_count
    cyc = trail.vertices[:q]
    j = cyc.index(start)
    verts = cyc[j:] + cyc[:j] + (start,)
    eids = trail.edges[j:] + trail.edges[:j]
    rotated = Trail(verts, eids, closed=True)
    if rotated.edges[0] > rotated.edges[-1]:
        rotated = rotated.reverse()
    return rotated


def orient_open(trail: Trail, start: int) -> Trail:
    """Return the trail running from the given end vertex."""
    if trail.vertices[0] == start:
        return trail
    if trail.vertices[-1] == start:
        return trail.reverse()
    raise InternalInvariantError(f"vertex {start} is not an end of the trail")
