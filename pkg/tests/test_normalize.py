from __future__ import annotations

import pytest

from conftest import load_fixture, unit_square
from orthocompact.compact import FF, compact_step
from orthocompact.io import generate
from orthocompact.model import (
    Edge,
    OrthoDrawing,
    Point,
    compute_embedding,
    metrics,
    star_geometry,
    validate,
)
from orthocompact.normalize import (
    NormalizedDrawing,
    denormalize,
    normalize,
    strip_empty_grid_lines,
)


class TestNormalize:
    def test_l_shaped_edge(self):
        d = OrthoDrawing(
            {"a": Point(0, 0), "b": Point(2, 2)},
            [Edge("e", "a", "b", (Point(2, 0),))],
        )
        nd = normalize(d)
        assert len(nd.drawing.edges) == 2
        dummies = [v for v in nd.drawing.vertices if v in nd.bend_origin]
        assert len(dummies) == 1
        assert nd.drawing.vertices[dummies[0]] == Point(2, 0)
        assert nd.bend_origin[dummies[0]] == ("e", 0)

    def test_bend_free_drawing_is_identity(self, square):
        nd = normalize(square)
        assert nd.bend_origin == {}
        assert nd.drawing == square
        assert set(nd.pieces) == {e.id for e in square.edges}

    def test_fig3b_gets_two_dummies(self, fig3a):
        fig3b = compact_step(fig3a, FF, "vertical")
        nd = normalize(fig3b)
        positions = {nd.drawing.vertices[v] for v in nd.bend_origin}
        assert positions == {Point(1, 1), Point(1, 2)}

    def test_every_piece_is_a_single_segment(self, fig4):
        nd = normalize(fig4)
        for e in nd.drawing.edges:
            a = nd.drawing.vertices[e.u]
            b = nd.drawing.vertices[e.v]
            assert (a.x == b.x) != (a.y == b.y)
        assert validate(nd.drawing).ok

    def test_dummy_degree_two_perpendicular(self, fig4):
        nd = normalize(fig4)
        for did in nd.bend_origin:
            incident = nd.drawing.incident_edges(did)
            assert len(incident) == 2
            dirs = set()
            for e in incident:
                other = e.v if e.u == did else e.u
                a, b = nd.drawing.vertices[did], nd.drawing.vertices[other]
                dirs.add("H" if a.y == b.y else "V")
            assert dirs == {"H", "V"}

    @pytest.mark.parametrize(
        "drawing",
        [
            unit_square(),
            load_fixture("fig4.ogd"),
            generate("comb", 4),
            generate("random", 15, 1),
        ],
    )
    def test_metrics_preserved(self, drawing):
        nd = normalize(drawing)
        before = metrics(drawing)
        after = metrics(nd.drawing)
        assert after.total_edge_length == before.total_edge_length
        assert after.area == before.area
        assert after.bend_count == 0
        assert len(nd.bend_origin) == before.bend_count


class TestDenormalize:
    @pytest.mark.parametrize(
        "drawing",
        [
            unit_square(),
            load_fixture("fig3a.ogd"),
            load_fixture("fig4.ogd"),
            generate("staircase", 3),
            generate("random", 12, 5),
        ],
    )
    def test_roundtrip_identity(self, drawing):
        assert denormalize(normalize(drawing)) == drawing

    def test_collinear_dummy_removed(self):
        nd = NormalizedDrawing(
            drawing=OrthoDrawing(
                {"a": Point(0, 0), "d": Point(1, 0), "b": Point(2, 0)},
                [Edge("e~0", "a", "d"), Edge("e~1", "d", "b")],
            ),
            bend_origin={"d": ("e", 0)},
            chains={"e": ["a", "d", "b"]},
            pieces={"e~0": ("e", 0), "e~1": ("e", 1)},
        )
        out = denormalize(nd)
        assert out.edges == [Edge("e", "a", "b")]
        assert "d" not in out.vertices

    def test_overlapping_dummy_segments_rejected(self):
        nd = NormalizedDrawing(
            drawing=OrthoDrawing(
                {"a": Point(0, 0), "d": Point(2, 0), "b": Point(1, 0)},
                [Edge("e~0", "a", "d"), Edge("e~1", "d", "b")],
            ),
            bend_origin={"d": ("e", 0)},
            chains={"e": ["a", "d", "b"]},
            pieces={"e~0": ("e", 0), "e~1": ("e", 1)},
        )
        with pytest.raises(ValueError):
            denormalize(nd)


class TestStripEmptyGridLines:
    def test_translated_square_reanchored(self, square):
        moved = square.translated(100, 100)
        assert strip_empty_grid_lines(moved) == square

    def test_hollow_square_collapses_to_unit(self):
        d = OrthoDrawing(
            {"a": Point(0, 0), "b": Point(3, 0), "c": Point(3, 3), "d": Point(0, 3)},
            [
                Edge("e0", "a", "b"),
                Edge("e1", "b", "c"),
                Edge("e2", "c", "d"),
                Edge("e3", "d", "a"),
            ],
        )
        out = strip_empty_grid_lines(d)
        assert metrics(out).area == 1

    @pytest.mark.parametrize("seed", range(100))
    def test_extent_bounded_by_occupied_points(self, seed):
        d = generate("random", 10, seed)
        stripped = strip_empty_grid_lines(d)
        m = metrics(stripped)
        n_points = len(list(stripped.all_points()))
        assert m.width <= n_points
        assert m.height <= n_points

    @pytest.mark.parametrize("seed", range(10))
    def test_never_increases_metrics_and_preserves_structure(self, seed):
        d = generate("random", 14, seed)
        out = strip_empty_grid_lines(d)
        before, after = metrics(d), metrics(out)
        assert after.total_edge_length <= before.total_edge_length
        assert after.area <= before.area
        assert after.bend_count == before.bend_count
        assert validate(out).ok
        assert star_geometry(out) == star_geometry(d)
        assert len(compute_embedding(out).faces) == len(compute_embedding(d).faces)

    def test_single_axis_strip(self):
        d = unit_square().translated(3, 5)
        y_only = strip_empty_grid_lines(d, axes=("y",))
        assert {p.x for p in y_only.all_points()} == {3, 4}
        assert {p.y for p in y_only.all_points()} == {0, 1}
