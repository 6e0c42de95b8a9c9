"""The labeling engine: interval plan, parent-edge map, and label assignment.

Layers are prepared from the root outward (covering pair, parent edges, trail
decomposition), then labeled from the outermost layer inward.  Within a layer
the order is: edges inside the layer, trail edges, link edges, parent edges.
Trail labels are drawn from both ends of the layer's trail interval so that
consecutive trail edges meeting at an inner vertex sum high and those meeting
at an outer vertex sum low; parent edges are labeled in increasing order of
the partial sums they complete, which is what makes all vertex sums distinct.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .covering import CoveringPair, Link, build_covering_pair, maximize_free_links
from .errors import InternalInvariantError
from .graph import BipartiteView, Graph, Layering, bfs_layering, layer_view, validate_even_regular
from .trails import (
    BadAnalysis,
    Trail,
    analyze_bad_components,
    choose_closed_start,
    orient_open,
    rotate_closed,
)


@dataclass(frozen=True)
class LayerPlan:
    """Label budget of one layer: counts of within-layer, trail, link, and
    parent edges, plus the offset below which outer layers' labels live."""

    index: int
    layer_size: int
    inner_count: int
    trail_count: int
    link_count: int
    offset: int

    @property
    def inner_interval(self) -> tuple[int, int]:
        return (self.offset + 1, self.offset + self.inner_count)

    @property
    def trail_interval(self) -> tuple[int, int]:
        lo = self.offset + self.inner_count
        return (lo + 1, lo + self.trail_count)

    @property
    def link_interval(self) -> tuple[int, int]:
        lo = self.offset + self.inner_count + self.trail_count
        return (lo + 1, lo + self.link_count)

    @property
    def parent_interval(self) -> tuple[int, int]:
        lo = self.offset + self.inner_count + self.trail_count + self.link_count
        return (lo + 1, lo + self.layer_size)

    @property
    def upper(self) -> int:
        return self.parent_interval[1]

    @property
    def target_pair_sum(self) -> int:
        """Invariant value of low-cursor + high-cursor while trail labels are dealt."""
        return 2 * (self.offset + self.inner_count) + self.trail_count + 1

    def partial_sum_bound(self, k: int) -> int:
        """Upper bound on outer partial sums, lower bound on the next-inner
        layer's; separates consecutive layers' vertex sums."""
        return ((2 * k + 1) * (self.offset + self.inner_count)
                + (k + 1) * self.trail_count + self.link_count + k)


@dataclass
class LayerRecord:
    """Everything built for one layer, filled across the two passes."""

    view: BipartiteView
    pair: CoveringPair
    parent_edge: dict[int, int]
    analysis: BadAnalysis
    events: tuple["TrailEvent", ...] = ()
    link_order: tuple[Link, ...] = ()
    link_low_end: dict[Link, int] = field(default_factory=dict)
    parent_order: tuple[int, ...] = ()


@dataclass(frozen=True)
class TrailEvent:
    """One labeling unit: a single trail or a pair of mixed trails, with the
    oriented trails, the labels in trail order, and the cursor around it."""

    kind: str  # closed | open-inner | open-outer | mixed-pair | mixed-last
    trails: tuple[Trail, ...]
    case: str | None
    start_vertex: int | None
    labels: tuple[int, ...]
    cursor_before: tuple[int, int]
    cursor_after: tuple[int, int]
    bad: bool
    cid: int | None


@dataclass(frozen=True)
class Labeling:
    """Final per-edge labels with per-vertex partial and full sums; the root's
    partial sum equals its vertex sum because it has no parent edge."""

    labels: tuple[int, ...]
    partial_sums: tuple[int, ...]
    vertex_sums: tuple[int, ...]


@dataclass(frozen=True)
class LabelingResult:
    graph: Graph
    root: int
    k: int
    layering: Layering
    plans: dict[int, LayerPlan]
    layers: dict[int, LayerRecord]
    labeling: Labeling


class _Cursor:
    """Two-ended label dispenser over one trail interval."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: int, hi: int):
        self.lo = lo
        self.hi = hi

    def take(self, n: int, high_first: bool) -> list[int]:
        out = []
        for t in range(n):
            if (t % 2 == 0) == high_first:
                out.append(self.hi)
                self.hi -= 1
            else:
                out.append(self.lo)
                self.lo += 1
            if self.lo > self.hi + 1:
                raise InternalInvariantError("trail label interval overrun")
        return out


def assign_parent_edges(view: BipartiteView, pair: CoveringPair) -> dict[int, int]:
    """Pick each outer vertex's parent edge: its matching edge when matched,
    otherwise its lowest-id cross edge that is not a link edge."""
    parent: dict[int, int] = {}
    for u in view.outer:
        eid = pair.matching_edge(u)
        if eid is None:
            candidates = [e for _, e in view.incident(u) if e not in pair.link_edge_ids]
            if not candidates:
                raise InternalInvariantError(f"outer vertex {u} has no usable parent edge")
            eid = min(candidates)
        parent[u] = eid
    return parent


def compute_interval_plan(graph: Graph, layering: Layering,
                          trail_counts: dict[int, int],
                          link_counts: dict[int, int]) -> dict[int, LayerPlan]:
    """Stack the per-layer intervals from the outermost layer down and check
    they partition the whole label range."""
    p = layering.depth
    within = {i: 0 for i in range(0, p + 1)}
    for u, v in graph.edges:
        if layering.layer_of[u] == layering.layer_of[v]:
            within[layering.layer_of[u]] += 1
    if within.get(0):
        raise InternalInvariantError("edges inside the root layer")

    plans: dict[int, LayerPlan] = {}
    offset = 0
    for i in range(p, 0, -1):
        plans[i] = LayerPlan(
            index=i,
            layer_size=len(layering.layers[i]),
            inner_count=within[i],
            trail_count=trail_counts[i],
            link_count=link_counts[i],
            offset=offset,
        )
        offset = plans[i].upper
    if offset != graph.m:
        raise InternalInvariantError(
            f"interval plan covers {offset} labels for {graph.m} edges")

    expected = 1
    for i in range(p, 0, -1):
        for lo, hi in (plans[i].inner_interval, plans[i].trail_interval,
                       plans[i].link_interval, plans[i].parent_interval):
            if lo != expected:
                raise InternalInvariantError("interval plan leaves a gap")
            expected = hi + 1
    if expected != graph.m + 1:
        raise InternalInvariantError("interval plan leaves a tail gap")
    return plans


def _assign_inner_labels(graph: Graph, layering: Layering, index: int,
                         plan: LayerPlan, labels: dict[int, int]) -> None:
    eids = [eid for eid, (u, v) in enumerate(graph.edges)
            if layering.layer_of[u] == index and layering.layer_of[v] == index]
    eids.sort(key=lambda e: graph.edges[e])
    if len(eids) != plan.inner_count:
        raise InternalInvariantError("within-layer edge count disagrees with the plan")
    lab = plan.inner_interval[0]
    for eid in eids:
        labels[eid] = lab
        lab += 1


def _inner_start(view: BipartiteView, trail: Trail) -> int:
    ends = [v for v in trail.ends if view.side(v) == "inner"]
    if len(ends) != 1:
        raise InternalInvariantError(f"mixed trail with ends {trail.ends} lacks a unique inner end")
    return ends[0]


def _outer_start(view: BipartiteView, trail: Trail) -> int:
    ends = [v for v in trail.ends if view.side(v) == "outer"]
    if len(ends) != 1:
        raise InternalInvariantError(f"mixed trail with ends {trail.ends} lacks a unique outer end")
    return ends[0]


def _assign_trail_labels(rec: LayerRecord, plan: LayerPlan, labels: dict[int, int],
                         k: int) -> None:
    view = rec.view
    family = rec.analysis.family
    cursor = _Cursor(*plan.trail_interval)
    target = plan.target_pair_sum
    events: list[TrailEvent] = []

    def emit(kind: str, trails: tuple[Trail, ...], case: str | None, start: int | None,
             high_first: bool, bad: bool, cid: int | None) -> None:
        before = (cursor.lo, cursor.hi)
        count = sum(t.edge_count for t in trails)
        labs = cursor.take(count, high_first)
        pos = 0
        for t in trails:
            for eid in t.edges:
                labels[eid] = labs[pos]
                pos += 1
        after = (cursor.lo, cursor.hi)
        events.append(TrailEvent(kind, trails, case, start, tuple(labs), before, after, bad, cid))
        balanced = count % 2 == 0
        want = target if balanced else target + 1
        if cursor.lo + cursor.hi != want:
            raise InternalInvariantError(
                f"cursor identity broken after a {kind} unit in layer {plan.index}")

    for cid, trail in sorted(family.closed, key=lambda ct: min(ct[1].edges)):
        bad = cid in rec.analysis.bad_cids
        comp = family.components[cid]
        start, case = choose_closed_start(trail, comp, bad, rec.pair, view, k)
        oriented = rotate_closed(trail, start)
        emit("closed", (oriented,), case, start, case == "outer-high", bad, cid)

    for trail in family.open_inner:
        start = min(trail.ends)
        emit("open-inner", (orient_open(trail, start),), None, start, False, False, None)

    for trail in family.open_outer:
        start = min(trail.ends)
        emit("open-outer", (orient_open(trail, start),), None, start, True, False, None)

    mixed = list(family.open_mixed)
    for first, second in zip(mixed[0::2], mixed[1::2]):
        a = orient_open(first, _inner_start(view, first))
        b = orient_open(second, _outer_start(view, second))
        emit("mixed-pair", (a, b), None, None, False, False, None)
    if len(mixed) % 2:
        last = mixed[-1]
        emit("mixed-last", (orient_open(last, _inner_start(view, last)),), None, None,
             False, False, None)

    if cursor.lo != cursor.hi + 1:
        raise InternalInvariantError(f"trail interval of layer {plan.index} not exactly consumed")
    rec.events = tuple(events)


def _assign_link_labels(rec: LayerRecord, plan: LayerPlan, labels: dict[int, int],
                        k: int) -> None:
    pair = rec.pair
    analysis = rec.analysis
    base = plan.offset + plan.inner_count + plan.trail_count
    c = plan.link_count
    free_set = set(analysis.free_links)
    ordered = list(analysis.free_links) + [l for l in pair.links if l not in free_set]
    if len(ordered) != len(pair.links) or 2 * len(ordered) != c:
        raise InternalInvariantError("link ordering lost links")

    low_end: dict[Link, int] = {}
    for idx, link in enumerate(ordered, start=1):
        in_bad = [e for e in link.ends if e in analysis.bad_vertices]
        if link in free_set and len(in_bad) == 1:
            u_low = in_bad[0]
        else:
            u_low = min(link.ends)
        u_high = link.end_b if u_low == link.end_a else link.end_a
        e_low = pair.view.edge_between(link.center, u_low)
        e_high = pair.view.edge_between(link.center, u_high)
        labels[e_low] = base + idx
        labels[e_high] = base + c - idx + 1
        low_end[link] = u_low

    if analysis.bad_cids:
        # low labels on edges into bad components keep those vertex sums small
        for link in ordered:
            for end in link.ends:
                if end in analysis.bad_vertices:
                    lab = labels[pair.view.edge_between(link.center, end)]
                    if lab > base + c - k:
                        raise InternalInvariantError(
                            f"link edge into a bad component got label {lab}, "
                            f"above the bound {base + c - k}")
    rec.link_order = tuple(ordered)
    rec.link_low_end = low_end


def label_graph(graph: Graph, root: int = 0) -> LabelingResult:
    """Produce an antimagic labeling of a connected even-regular graph of
    degree at least four, deterministically for a fixed input and root."""
    k = validate_even_regular(graph)
    d = 2 * k + 1
    layering = bfs_layering(graph, root)
    p = layering.depth

    records: dict[int, LayerRecord] = {}
    trail_counts: dict[int, int] = {}
    link_counts: dict[int, int] = {}
    for i in range(1, p + 1):
        view = layer_view(graph, layering, i)
        pair = build_covering_pair(view, d)
        parent = assign_parent_edges(view, pair)

        def analyze(pr: CoveringPair, _view: BipartiteView = view,
                    _parent: dict[int, int] = parent) -> BadAnalysis:
            return analyze_bad_components(_view, pr, _parent, k)

        pair, analysis = maximize_free_links(pair, parent, analyze, k)
        records[i] = LayerRecord(view=view, pair=pair, parent_edge=parent, analysis=analysis)
        trail_counts[i] = analysis.family.edge_total
        link_counts[i] = 2 * len(pair.links)
        if len(view.edges) != len(view.outer) + trail_counts[i] + link_counts[i]:
            raise InternalInvariantError(
                f"cross edges of layer {i} do not split into parent, trail, and link edges")

    plans = compute_interval_plan(graph, layering, trail_counts, link_counts)

    labels: dict[int, int] = {}
    partial: dict[int, int] = {}
    for i in range(p, 0, -1):
        rec, plan = records[i], plans[i]
        _assign_inner_labels(graph, layering, i, plan, labels)
        _assign_trail_labels(rec, plan, labels, k)
        _assign_link_labels(rec, plan, labels, k)

        bound = plan.partial_sum_bound(k)
        for u in layering.layers[i]:
            s = 0
            for _, eid in graph.incident(u):
                if eid == rec.parent_edge[u]:
                    continue
                if eid not in labels:
                    raise InternalInvariantError(
                        f"edge {eid} at vertex {u} unlabeled when its partial sum is needed")
                s += labels[eid]
            partial[u] = s
            if s > bound:
                raise InternalInvariantError(
                    f"partial sum {s} of vertex {u} exceeds its layer bound {bound}")
        if i < p:
            lower = plans[i + 1].partial_sum_bound(k)
            for u in layering.layers[i]:
                if partial[u] < lower:
                    raise InternalInvariantError(
                        f"partial sum {partial[u]} of vertex {u} falls below the outer "
                        f"layer bound {lower}")

        order = sorted(layering.layers[i], key=lambda u: (partial[u], u))
        lab = plan.parent_interval[0]
        for u in order:
            labels[rec.parent_edge[u]] = lab
            lab += 1
        if lab != plan.parent_interval[1] + 1:
            raise InternalInvariantError("parent interval not exactly consumed")
        rec.parent_order = tuple(order)

    if len(labels) != graph.m or sorted(labels.values()) != list(range(1, graph.m + 1)):
        raise InternalInvariantError("labels do not form a bijection onto the label range")

    label_seq = tuple(labels[eid] for eid in range(graph.m))
    partial[root] = sum(labels[eid] for _, eid in graph.incident(root))
    sums = []
    for v in range(graph.n):
        if v == root:
            sums.append(partial[v])
        else:
            rec = records[layering.layer_of[v]]
            sums.append(partial[v] + labels[rec.parent_edge[v]])
    labeling = Labeling(
        labels=label_seq,
        partial_sums=tuple(partial[v] for v in range(graph.n)),
        vertex_sums=tuple(sums),
    )
    result = LabelingResult(graph, root, k, layering, plans, records, labeling)

    from .verify import verify_antimagic

    report = verify_antimagic(graph, label_seq, layering=layering)
    if not report.passed:
        raise InternalInvariantError(f"final verification failed: {report.first_failure}")
    return result
