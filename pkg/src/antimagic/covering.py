"""Covering pairs on bipartite layer views.

A covering pair is a family of vertex-disjoint links (outer-center-outer paths
of length two) plus a matching, such that every inner vertex of full degree d
is covered by exactly one of them.  The construction pads the view to
(d, d+1)-biregular, grows a link family until every uncovered outer vertex is
blocked, covers the remaining inner vertices by an augmenting-path matching,
and finally restricts back to the original view and reduces to the irreducible
form the labeling stage relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import GraphShapeError, InternalInvariantError
from .graph import BipartiteView


@dataclass(frozen=True, order=True)
class Link:
    """Length-two path end_a - center - end_b; the center is an inner vertex,
    both ends are outer, and end_a < end_b."""

    center: int
    end_a: int
    end_b: int

    @staticmethod
    def of(center: int, e1: int, e2: int) -> "Link":
        if e1 == e2:
            raise InternalInvariantError(f"link at center {center} with equal ends {e1}")
        a, b = (e1, e2) if e1 < e2 else (e2, e1)
        return Link(center, a, b)

    @property
    def ends(self) -> tuple[int, int]:
        return (self.end_a, self.end_b)


class CoveringPair:
    """Immutable covering pair: links, matching edge ids, and derived lookups."""

    def __init__(self, view: BipartiteView, d: int, links: Iterable[Link], matching: Iterable[int]):
        self.view = view
        self.d = d
        self.links = tuple(sorted(links))
        self.matching = frozenset(matching)

        self.centers = frozenset(l.center for l in self.links)
        link_of: dict[int, Link] = {}
        for l in self.links:
            for end in l.ends:
                if end in link_of:
                    raise InternalInvariantError(f"outer vertex {end} is an end of two links")
            link_of[l.end_a] = l
            link_of[l.end_b] = l
        self._link_of = link_of
        self.link_ends = frozenset(link_of)

        match_of: dict[int, int] = {}
        for eid in sorted(self.matching):
            x, y = view.ends_of(eid)
            if x in match_of or y in match_of:
                raise InternalInvariantError(f"matching edges share a vertex at edge {eid}")
            match_of[x] = eid
            match_of[y] = eid
        self._match_of = match_of

        eids = set()
        for l in self.links:
            for end in l.ends:
                eid = view.edge_between(l.center, end)
                if eid is None:
                    raise InternalInvariantError(
                        f"link edge ({l.center}, {end}) is not an edge of the view")
                eids.add(eid)
        self.link_edge_ids = frozenset(eids)

    def is_matched(self, v: int) -> bool:
        return v in self._match_of

    def matching_edge(self, v: int) -> int | None:
        return self._match_of.get(v)

    def link_of_end(self, y: int) -> Link | None:
        return self._link_of.get(y)

    def describe(self) -> str:
        lines = [f"links {len(self.links)} matching {len(self.matching)}"]
        for l in self.links:
            lines.append(f"link {l.end_a} {l.center} {l.end_b}")
        for eid in sorted(self.matching):
            x, y = self.view.ends_of(eid)
            lines.append(f"match {x} {y}")
        return "\n".join(lines) + "\n"


def validate_covering_pair(pair: CoveringPair) -> None:
    """Check every structural invariant of the irreducible form; raise on any gap."""
    view, d = pair.view, pair.d
    seen: set[int] = set()
    for l in pair.links:
        if view.side(l.center) != "inner":
            raise InternalInvariantError(f"link center {l.center} is not an inner vertex")
        for end in l.ends:
            if view.side(end) != "outer":
                raise InternalInvariantError(f"link end {end} is not an outer vertex")
            if view.edge_between(l.center, end) is None:
                raise InternalInvariantError(f"link edge ({l.center}, {end}) missing from the view")
        for v in (l.center, l.end_a, l.end_b):
            if v in seen:
                raise InternalInvariantError(f"links share vertex {v}")
            seen.add(v)
        if view.degree(l.center) != d:
            raise InternalInvariantError(
                f"link center {l.center} has degree {view.degree(l.center)}, expected {d}")
        if pair.is_matched(l.center):
            raise InternalInvariantError(f"link center {l.center} is also matched")
        for end in l.ends:
            if not pair.is_matched(end):
                raise InternalInvariantError(f"link end {end} is unmatched")
        # every neighbor of a center must be usable as a parent edge elsewhere
        for w in view.neighbors(l.center):
            if not pair.is_matched(w) and w not in pair.link_ends:
                raise InternalInvariantError(
                    f"neighbor {w} of center {l.center} is neither matched nor a link end")
    if pair.matching & pair.link_edge_ids:
        raise InternalInvariantError("matching and link edges overlap")
    for x in pair.view.inner:
        if view.degree(x) != d:
            continue
        if not (pair.is_matched(x) or x in pair.centers):
            raise InternalInvariantError(f"full-degree inner vertex {x} is uncovered")
    _check_component_shapes(pair)


def _check_component_shapes(pair: CoveringPair) -> None:
    """Components of matching + links must be single edges or W-shapes
    (one link whose two ends carry one matching edge each)."""
    adj: dict[int, list[int]] = {}
    kind: dict[tuple[int, int], str] = {}

    def add(u: int, v: int, what: str) -> None:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
        kind[(min(u, v), max(u, v))] = what

    for eid in pair.matching:
        x, y = pair.view.ends_of(eid)
        add(x, y, "match")
    for l in pair.links:
        add(l.center, l.end_a, "link")
        add(l.center, l.end_b, "link")

    visited: set[int] = set()
    for start in sorted(adj):
        if start in visited:
            continue
        stack, comp = [start], []
        visited.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in visited:
                    visited.add(w)
                    stack.append(w)
        edges = {(min(u, v), max(u, v)) for u in comp for v in adj[u]}
        kinds = sorted(kind[e] for e in edges)
        if kinds == ["match"] and len(comp) == 2:
            continue
        if kinds == ["link", "link", "match", "match"] and len(comp) == 5:
            continue
        raise InternalInvariantError(
            f"component on vertices {sorted(comp)} is neither a single matching edge nor a W-shape")


def _coverage(view: BipartiteView, centers: set[int]) -> dict[int, int]:
    """Outer vertex -> number of neighboring centers."""
    covered: dict[int, int] = {}
    for c in centers:
        for y in view.neighbors(c):
            covered[y] = covered.get(y, 0) + 1
    return covered


def _frontier(view: BipartiteView, centers: set[int], covered: dict[int, int]) -> set[int]:
    """Non-center inner vertices adjacent to a multiply covered outer vertex."""
    multi = {y for y, cnt in covered.items() if cnt >= 2}
    out = set()
    for x in view.inner:
        if x in centers:
            continue
        if any(y in multi for y in view.neighbors(x)):
            out.add(x)
    return out


def _potential(view: BipartiteView, centers: set[int]) -> tuple[int, int]:
    covered = _coverage(view, centers)
    return (len(covered), len(_frontier(view, centers, covered)))


class _LinkSearch:
    """Mutable link-family state: a center set plus a feasible assignment of two
    distinct outer ends per center, maintained by augmenting paths."""

    def __init__(self, view: BipartiteView):
        self.view = view
        self.centers: set[int] = set()
        self.ends: dict[int, list[int]] = {}
        self.owner: dict[int, int] = {}

    def snapshot(self):
        return (
            set(self.centers),
            {c: list(e) for c, e in self.ends.items()},
            dict(self.owner),
        )

    def restore(self, snap) -> None:
        self.centers, self.ends, self.owner = snap[0], snap[1], snap[2]

    def _augment(self, c: int, visited: set[int]) -> bool:
        for y in self.view.neighbors(c):
            if y in visited or y in self.ends[c]:
                continue
            visited.add(y)
            o = self.owner.get(y)
            if o is None or self._augment(o, visited):
                if o is not None:
                    self.ends[o].remove(y)
                self.ends[c].append(y)
                self.owner[y] = c
                return True
        return False

    def apply(self, add: int | None = None, remove: int | None = None) -> bool:
        """Mutate the center set; True if two ends per center remain assignable.
        On False the state is partially mutated; callers must restore."""
        if remove is not None:
            self.centers.discard(remove)
            for y in self.ends.pop(remove, []):
                del self.owner[y]
        if add is not None:
            self.centers.add(add)
            self.ends[add] = []
            for _ in range(2):
                if not self._augment(add, set()):
                    return False
        return True

    def links(self) -> list[Link]:
        out = []
        for c in sorted(self.centers):
            if len(self.ends[c]) != 2:
                raise InternalInvariantError(f"center {c} has {len(self.ends[c])} assigned ends")
            out.append(Link.of(c, *self.ends[c]))
        return out


def maximize_link_family(view: BipartiteView, d: int) -> list[Link]:
    """Grow a vertex-disjoint link family on a (d, d+1)-biregular view until
    every outer vertex not covered by a center has all its neighbors blocked
    (adjacent to a multiply covered outer vertex via the frontier), and no
    single added center could cover more outer vertices.

    Moves are add-center and swap-center, accepted only when the pair
    (covered outer count, frontier size) strictly increases lexicographically;
    the pair depends on the center set alone, so candidate moves are scored
    before checking that disjoint ends can still be assigned.
    """
    for x in view.inner:
        if view.degree(x) != d:
            raise GraphShapeError(f"inner vertex {x} has degree {view.degree(x)}, expected {d}")
    for y in view.outer:
        if view.degree(y) != d + 1:
            raise GraphShapeError(f"outer vertex {y} has degree {view.degree(y)}, expected {d + 1}")

    st = _LinkSearch(view)
    pot = (0, 0)
    guard = (len(view.outer) + 1) * (len(view.inner) + 1) + 1
    for _ in range(guard):
        w = _find_witness(view, st.centers)
        if w is None:
            new_pot = _gaining_add(view, st, pot)
            if new_pot is None:
                break
            pot = new_pot
            continue
        pot = _escape_witness(view, st, pot, w)
    else:
        raise InternalInvariantError("link family search exceeded its move budget")
    return st.links()


def _find_witness(view: BipartiteView, centers: set[int]) -> tuple[int, int] | None:
    """Lowest (uncovered outer, neighbor outside the frontier) pair, if any."""
    covered = _coverage(view, centers)
    frontier = _frontier(view, centers, covered)
    for y in view.outer:
        if y in covered:
            continue
        for x in view.neighbors(y):
            if x not in frontier:
                return (y, x)
    return None


def _candidate_moves(view: BipartiteView, centers: set[int], x_w: int) -> list[tuple[int, int | None]]:
    """Move order: add the witness neighbor, swaps into it, then generic adds
    and swaps.  Returns (add, remove) pairs, built up front because the search
    state mutates while candidates are tried."""
    frozen = sorted(centers)
    others = [x for x in view.inner if x not in centers and x != x_w]
    moves: list[tuple[int, int | None]] = [(x_w, None)]
    moves.extend((x_w, c) for c in frozen)
    moves.extend((x, None) for x in others)
    moves.extend((x, c) for c in frozen for x in others)
    return moves


def _escape_witness(view: BipartiteView, st: _LinkSearch, pot: tuple[int, int],
                    witness: tuple[int, int]) -> tuple[int, int]:
    y_w, x_w = witness
    for add, remove in _candidate_moves(view, st.centers, x_w):
        cand = set(st.centers)
        if remove is not None:
            cand.discard(remove)
        cand.add(add)
        new_pot = _potential(view, cand)
        if new_pot <= pot:
            continue
        snap = st.snapshot()
        if st.apply(add=add, remove=remove):
            return new_pot
        st.restore(snap)
    raise InternalInvariantError(
        f"no improving move for uncovered outer vertex {y_w} (blocked at inner vertex {x_w})")


def _gaining_add(view: BipartiteView, st: _LinkSearch, pot: tuple[int, int]) -> tuple[int, int] | None:
    """Apply one feasible add-center move that strictly grows the covered outer
    set, if one exists.  Running these to exhaustion gives the family the
    maximality the matching step depends on."""
    for x in view.inner:
        if x in st.centers:
            continue
        cand = set(st.centers)
        cand.add(x)
        new_pot = _potential(view, cand)
        if new_pot[0] <= pot[0]:
            continue
        snap = st.snapshot()
        if st.apply(add=x):
            return new_pot
        st.restore(snap)
    return None


def hall_matching(view: BipartiteView, d: int, forbidden: frozenset[int] = frozenset()) -> frozenset[int]:
    """Matching covering every degree-d inner vertex outside `forbidden`,
    found by augmenting paths; raises if some target cannot be covered."""
    targets = [x for x in view.inner if view.degree(x) == d and x not in forbidden]
    match_x: dict[int, int] = {}

    def try_assign(x: int, visited: set[int]) -> bool:
        for y, _eid in view.incident(x):
            if y in visited:
                continue
            visited.add(y)
            o = match_x.get(y)
            if o is None or try_assign(o, visited):
                match_x[y] = x
                return True
        return False

    for x in targets:
        if not try_assign(x, set()):
            raise InternalInvariantError(f"no matching covers full-degree inner vertex {x}")
    eids = set()
    for y, x in match_x.items():
        eid = view.edge_between(x, y)
        if eid is None:
            raise InternalInvariantError(f"matched pair ({x}, {y}) has no view edge")
        eids.add(eid)
    return frozenset(eids)


def pad_to_biregular(view: BipartiteView, d: int) -> tuple[BipartiteView, dict[int, int]]:
    """Embed the view into a (d, d+1)-biregular host as an induced subgraph.

    Fresh outer vertices absorb inner deficiencies round-robin; the remaining
    outer-side demand, topped up by filler outer vertices until it is divisible
    by d and large enough, is realized against fresh inner vertices by the
    greedy largest-demand-to-largest-capacity rule.  All fresh vertices and
    edges receive ids above the existing ones, so the embedding is the identity.
    """
    if d < 3:
        raise GraphShapeError(f"padding requires degree bound >= 3, got {d}")
    for x in view.inner:
        if view.degree(x) > d:
            raise GraphShapeError(f"inner vertex {x} has degree {view.degree(x)} > {d}")
    for y in view.outer:
        if view.degree(y) > d + 1:
            raise GraphShapeError(f"outer vertex {y} has degree {view.degree(y)} > {d + 1}")

    identity = {v: v for v in list(view.inner) + list(view.outer)}
    if not view.inner and not view.outer:
        gadget_inner = tuple(range(d + 1))
        gadget_outer = tuple(range(d + 1, 2 * d + 1))
        edges = []
        eid = 0
        for x in gadget_inner:
            for y in gadget_outer:
                edges.append((x, y, eid))
                eid += 1
        return BipartiteView(view.index, gadget_inner, gadget_outer, tuple(edges)), identity

    inner_def = {x: d - view.degree(x) for x in view.inner if view.degree(x) < d}
    outer_def = {y: d + 1 - view.degree(y) for y in view.outer if view.degree(y) < d + 1}
    if not inner_def and not outer_def:
        return view, identity

    next_v = max(list(view.inner) + list(view.outer)) + 1
    next_e = max((eid for _, _, eid in view.edges), default=-1) + 1
    new_edges: list[tuple[int, int, int]] = []

    privates: list[int] = []
    load: dict[int, int] = {}
    total_inner_def = sum(inner_def.values())
    if total_inner_def:
        b1 = max(max(inner_def.values()), -(-total_inner_def // (d + 1)))
        privates = list(range(next_v, next_v + b1))
        next_v += b1
        load = {pv: 0 for pv in privates}
        t = 0
        for x in sorted(inner_def):
            for _ in range(inner_def[x]):
                pv = privates[t % b1]
                new_edges.append((x, pv, next_e))
                next_e += 1
                load[pv] += 1
                t += 1

    demands: list[list[int]] = []
    for y in sorted(outer_def):
        demands.append([y, outer_def[y]])
    for pv in privates:
        need = d + 1 - load[pv]
        if need < 0:
            raise InternalInvariantError(f"padding overloaded fresh outer vertex {pv}")
        if need:
            demands.append([pv, need])

    total = sum(amount for _, amount in demands)
    fillers: list[int] = []
    fresh_inner: list[int] = []
    if total:
        j = (-total) % d
        while (total + j * (d + 1)) // d < d + 1:
            j += d
        fillers = list(range(next_v, next_v + j))
        next_v += j
        for f in fillers:
            demands.append([f, d + 1])
        m_fresh = (total + j * (d + 1)) // d
        fresh_inner = list(range(next_v, next_v + m_fresh))
        next_v += m_fresh
        cap = {x: d for x in fresh_inner}
        while demands:
            demands.sort(key=lambda item: (-item[1], item[0]))
            y, need = demands.pop(0)
            donors = sorted(cap, key=lambda x: (-cap[x], x))[:need]
            if len(donors) < need or any(cap[x] == 0 for x in donors):
                raise InternalInvariantError("padding demand exceeds remaining fresh capacity")
            for x in donors:
                new_edges.append((x, y, next_e))
                next_e += 1
                cap[x] -= 1
        if any(cap.values()):
            raise InternalInvariantError("padding left unused fresh inner capacity")

    padded = BipartiteView(
        index=view.index,
        inner=tuple(view.inner) + tuple(fresh_inner),
        outer=tuple(view.outer) + tuple(privates) + tuple(fillers),
        edges=tuple(view.edges) + tuple(new_edges),
    )
    for x in padded.inner:
        if padded.degree(x) != d:
            raise InternalInvariantError(f"padded inner vertex {x} has degree {padded.degree(x)}")
    for y in padded.outer:
        if padded.degree(y) != d + 1:
            raise InternalInvariantError(f"padded outer vertex {y} has degree {padded.degree(y)}")
    return padded, identity


def restrict_and_reduce(view: BipartiteView, d: int, links: Iterable[Link],
                        matching: Iterable[int]) -> CoveringPair:
    """Restrict a covering pair from a padded host back to the view, then apply
    the reduction rules to a fixpoint:

    R1 drop a link whose center is not full degree in the view;
    R2 drop a link whose center is already matched;
    R3 replace a link having an unmatched end by the matching edge to that end;
    R4 replace a link whose center has an unmatched neighbor that is no link
       end by the matching edge to that neighbor.

    Each rule removes a link, so the loop terminates.  R4 guarantees that every
    neighbor of a center is matched or a link end, which later link exchanges
    depend on.
    """
    vids = set(view.inner) | set(view.outer)
    view_eids = {eid for _, _, eid in view.edges}
    m_set = {eid for eid in matching if eid in view_eids}
    f_list = sorted(l for l in links
                    if l.center in vids and l.end_a in vids and l.end_b in vids)

    while True:
        matched: set[int] = set()
        for eid in m_set:
            matched.update(view.ends_of(eid))
        link_ends = {end for l in f_list for end in l.ends}
        action = None
        for l in f_list:
            if view.degree(l.center) < d:
                action = ("drop", l, None)
                break
            if l.center in matched:
                action = ("drop", l, None)
                break
            unmatched_ends = [end for end in l.ends if end not in matched]
            if unmatched_ends:
                action = ("rewire", l, min(unmatched_ends))
                break
            loose = [w for w in view.neighbors(l.center)
                     if w not in matched and w not in link_ends]
            if loose:
                action = ("rewire", l, min(loose))
                break
        if action is None:
            break
        what, l, target = action
        f_list.remove(l)
        if what == "rewire":
            eid = view.edge_between(l.center, target)
            if eid is None:
                raise InternalInvariantError(
                    f"reduction target edge ({l.center}, {target}) missing from the view")
            m_set.add(eid)

    return CoveringPair(view, d, f_list, m_set)


def build_covering_pair(view: BipartiteView, d: int) -> CoveringPair:
    """Full pipeline: pad, grow the link family, match, restrict, reduce, validate."""
    if d < 3:
        raise GraphShapeError(f"covering pairs need degree bound >= 3, got {d}")
    if len(view.inner) == 1 and view.degree(view.inner[0]) > d:
        # root layer: the single inner vertex exceeds the bound and needs no cover
        pair = CoveringPair(view, d, [], frozenset())
        validate_covering_pair(pair)
        return pair
    padded, _ = pad_to_biregular(view, d)
    links = maximize_link_family(padded, d)
    centers = frozenset(l.center for l in links)
    matching = hall_matching(padded, d, forbidden=centers)
    pair = restrict_and_reduce(view, d, links, matching)
    validate_covering_pair(pair)
    return pair


def maximize_free_links(pair: CoveringPair, parent_edge: dict[int, int],
                        analyze: Callable[[CoveringPair], "object"], k: int):
    """Exchange link ends to raise the number of free links while bad components
    exist.

    An exchange moves one link end to another neighbor of its center that is
    not currently a link end; by R4 that neighbor is matched, so the parent-edge
    map stays valid unchanged.  Exchanges are accepted only when the recomputed
    free-link count strictly increases.  At a local optimum with bad components
    still present, fewer than k free links is an implementation bug.
    """
    analysis = analyze(pair)
    guard = len(pair.links) + 1
    for _ in range(guard):
        if not analysis.bad_cids:
            break
        improved = None
        for link in pair.links:
            for out_end in sorted(link.ends):
                keep = link.end_b if out_end == link.end_a else link.end_a
                for w in pair.view.neighbors(link.center):
                    if w == keep or w == out_end or w in pair.link_ends:
                        continue
                    new_links = [Link.of(l.center, keep, w) if l == link else l
                                 for l in pair.links]
                    cand = CoveringPair(pair.view, pair.d, new_links, pair.matching)
                    validate_covering_pair(cand)
                    cand_analysis = analyze(cand)
                    if cand_analysis.free_count > analysis.free_count:
                        improved = (cand, cand_analysis)
                        break
                if improved:
                    break
            if improved:
                break
        if improved is None:
            break
        pair, analysis = improved
    if analysis.bad_cids and analysis.free_count < k:
        raise InternalInvariantError(
            f"bad components remain with {analysis.free_count} free links, need at least {k}")
    if set(parent_edge.values()) & pair.link_edge_ids:
        raise InternalInvariantError("a parent edge became a link edge during exchanges")
    return pair, analysis
