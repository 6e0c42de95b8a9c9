"""Trail decomposition: Euler circuits, dummy splitting, classification,
bad components, and trail orientation helpers."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from antimagic import BipartiteView, InternalInvariantError
from antimagic.covering import CoveringPair
from antimagic.trails import (Trail, analyze_bad_components, choose_closed_start,
                              decompose_trails, detect_bad_components, orient_open,
                              residual_edge_sets, rotate_closed)
from corpus import free_link_gadget, random_bounded_bipartite


def make_view(inner, outer, pairs):
    triples = tuple((x, y, eid) for eid, (x, y) in enumerate(pairs))
    return BipartiteView(1, tuple(inner), tuple(outer), triples)


def assert_valid_walk(view, trail):
    assert len(trail.vertices) == trail.edge_count + 1
    for pos, eid in enumerate(trail.edges):
        assert set(view.ends_of(eid)) == {trail.vertices[pos], trail.vertices[pos + 1]}
    assert len(set(trail.edges)) == trail.edge_count
    if trail.closed:
        assert trail.vertices[0] == trail.vertices[-1]


class TestDecompose:
    def test_single_cycle(self):
        view = make_view([0, 1], [2, 3], [(0, 2), (0, 3), (1, 2), (1, 3)])
        fam = decompose_trails(view, frozenset(range(4)))
        assert len(fam.closed) == 1
        assert not fam.open_inner and not fam.open_outer and not fam.open_mixed
        cid, trail = fam.closed[0]
        assert trail.closed and trail.edge_count == 4
        assert trail.vertices[0] == 0
        assert_valid_walk(view, trail)

    def test_single_path_is_mixed(self):
        view = make_view([0], [1], [(0, 1)])
        fam = decompose_trails(view, frozenset([0]))
        assert len(fam.open_mixed) == 1
        assert fam.open_mixed[0].ends in ((0, 1), (1, 0))

    def test_inner_ended_path(self):
        # 0 - 2 - 1: both odd-degree ends inner, two edges
        view = make_view([0, 1], [2], [(0, 2), (1, 2)])
        fam = decompose_trails(view, frozenset([0, 1]))
        assert len(fam.open_inner) == 1
        assert set(fam.open_inner[0].ends) == {0, 1}

    def test_outer_ended_path(self):
        view = make_view([0], [1, 2], [(0, 1), (0, 2)])
        fam = decompose_trails(view, frozenset([0, 1]))
        assert len(fam.open_outer) == 1
        assert set(fam.open_outer[0].ends) == {1, 2}

    def test_two_components(self):
        view = make_view([0, 1], [2, 3], [(0, 2), (1, 3)])
        fam = decompose_trails(view, frozenset([0, 1]))
        assert len(fam.components) == 2
        assert len(fam.open_mixed) == 2

    def test_empty(self):
        view = make_view([0], [1], [(0, 1)])
        fam = decompose_trails(view, frozenset())
        assert fam.components == () and fam.edge_total == 0

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 100_000))
    def test_random_views_cover_exactly_once(self, seed):
        view = random_bounded_bipartite(random.Random(seed), 3)
        eids = frozenset(eid for _, _, eid in view.edges)
        fam = decompose_trails(view, eids)
        seen = []
        for trail in fam.all_trails():
            assert_valid_walk(view, trail)
            seen.extend(trail.edges)
        assert sorted(seen) == sorted(eids)
        for trail in fam.open_inner:
            assert trail.edge_count % 2 == 0
            assert all(view.side(v) == "inner" for v in trail.ends)
        for trail in fam.open_outer:
            assert trail.edge_count % 2 == 0
            assert all(view.side(v) == "outer" for v in trail.ends)
        for trail in fam.open_mixed:
            assert trail.edge_count % 2 == 1
        # odd-degree vertices are trail ends exactly once
        degree = {}
        for x, y, eid in view.edges:
            degree[x] = degree.get(x, 0) + 1
            degree[y] = degree.get(y, 0) + 1
        end_count = {}
        for trail in fam.all_trails():
            if not trail.closed:
                for v in trail.ends:
                    end_count[v] = end_count.get(v, 0) + 1
        for v, deg in degree.items():
            assert end_count.get(v, 0) == deg % 2

    def test_determinism(self):
        view = random_bounded_bipartite(random.Random(17), 3)
        eids = frozenset(eid for _, _, eid in view.edges)
        fam1 = decompose_trails(view, eids)
        fam2 = decompose_trails(view, eids)
        assert [t.edges for t in fam1.all_trails()] == [t.edges for t in fam2.all_trails()]


class TestResidual:
    def test_gadget_split(self):
        view, pair, parent = free_link_gadget()
        residual, trail = residual_edge_sets(view, pair, parent)
        assert len(residual) == view.edge_count - len(view.outer)
        assert trail == residual - pair.link_edge_ids

    def test_missing_parent_rejected(self):
        view, pair, parent = free_link_gadget()
        incomplete = dict(parent)
        incomplete.popitem()
        with pytest.raises(InternalInvariantError, match="without a parent edge"):
            residual_edge_sets(view, pair, incomplete)

    def test_link_parent_overlap_rejected(self):
        view, pair, parent = free_link_gadget()
        broken = dict(parent)
        # point one outer vertex's parent at a link edge
        link = pair.links[0]
        end = link.end_a
        broken[end] = pair.view.edge_between(link.center, end)
        with pytest.raises(InternalInvariantError):
            residual_edge_sets(view, pair, broken)


class TestBadComponents:
    def test_gadget_has_two_bad_cycles(self):
        view, pair, parent = free_link_gadget()
        analysis = analyze_bad_components(view, pair, parent, 1)
        assert len(analysis.bad_cids) == 2
        for cid in analysis.bad_cids:
            comp = analysis.family.components[cid]
            assert all(deg == 2 for deg in comp.degrees.values())
            assert all(v in pair.link_ends for v in comp.vertices
                       if view.side(v) == "outer")

    def test_cycle_with_non_link_outer_is_not_bad(self):
        view = make_view([0, 1], [2, 3], [(0, 2), (0, 3), (1, 2), (1, 3)])
        pair = CoveringPair(view, 3, [], [])
        fam = decompose_trails(view, frozenset(range(4)))
        assert detect_bad_components(fam, view, pair, 1) == frozenset()


class TestOrientation:
    def test_rotate_to_start(self):
        view = make_view([0, 1], [2, 3], [(0, 2), (0, 3), (1, 2), (1, 3)])
        fam = decompose_trails(view, frozenset(range(4)))
        _, trail = fam.closed[0]
        for start in (0, 1, 2, 3):
            rot = rotate_closed(trail, start)
            assert rot.vertices[0] == start and rot.vertices[-1] == start
            assert rot.edges[0] < rot.edges[-1]
            assert sorted(rot.edges) == sorted(trail.edges)
            assert_valid_walk(view, rot)

    def test_rotate_open_rejected(self):
        with pytest.raises(InternalInvariantError):
            rotate_closed(Trail((0, 1), (5,), closed=False), 0)

    def test_orient_open(self):
        t = Trail((0, 5, 1), (3, 4), closed=False)
        assert orient_open(t, 0) is t
        rev = orient_open(t, 1)
        assert rev.vertices == (1, 5, 0) and rev.edges == (4, 3)
        with pytest.raises(InternalInvariantError):
            orient_open(t, 5)


class TestClosedStart:
    def test_bad_component_starts_at_lowest_outer(self):
        view, pair, parent = free_link_gadget()
        analysis = analyze_bad_components(view, pair, parent, 1)
        for cid in sorted(analysis.bad_cids):
            comp = analysis.family.components[cid]
            trail = dict(analysis.family.closed)[cid]
            start, case = choose_closed_start(trail, comp, True, pair, view, 1)
            assert case == "bad"
            assert start == min(v for v in comp.vertices if view.side(v) == "outer")

    def test_non_link_outer_gives_outer_high(self):
        view = make_view([0, 1], [2, 3], [(0, 2), (0, 3), (1, 2), (1, 3)])
        pair = CoveringPair(view, 3, [], [])
        fam = decompose_trails(view, frozenset(range(4)))
        cid, trail = fam.closed[0]
        start, case = choose_closed_start(trail, fam.components[cid], False, pair, view, 1)
        assert case == "outer-high"
        assert start == 2
