from __future__ import annotations

import pytest

from conftest import load_fixture, unit_square
from orthocompact.dissect import (
    dissection_size,
    insert_bend_vertices,
    vertical_dissect,
)
from orthocompact.io import generate
from orthocompact.model import (
    Edge,
    OrthoDrawing,
    Point,
    compute_embedding,
    turn_angle,
    validate,
)
from orthocompact.normalize import normalize


def ff_dissect(drawing):
    nd, bvs = insert_bend_vertices(normalize(drawing))
    return vertical_dissect(nd, treat_bend_vertices_as_reflex=True, bend_vertices=bvs)


def vis_coordinates(dd):
    out = set()
    for e in dd.visibility_edges():
        a = tuple(dd.drawing.vertices[e.u])
        b = tuple(dd.drawing.vertices[e.v])
        out.add(tuple(sorted((a, b))))
    return out


class TestInsertBendVertices:
    def test_length_three_run_gets_two(self):
        d = OrthoDrawing(
            {"a": Point(0, 0), "b": Point(3, 0)}, [Edge("e", "a", "b")]
        )
        nd, bvs = insert_bend_vertices(normalize(d))
        assert [(bv.edge_id, bv.x) for bv in bvs] == [("e", 1), ("e", 2)]
        assert {tuple(nd.drawing.vertices[bv.vertex_id]) for bv in bvs} == {
            (1, 0),
            (2, 0),
        }
        assert len(nd.drawing.edges) == 3

    def test_unit_run_gets_none(self):
        d = OrthoDrawing(
            {"a": Point(0, 0), "b": Point(1, 0)}, [Edge("e", "a", "b")]
        )
        _, bvs = insert_bend_vertices(normalize(d))
        assert bvs == []

    def test_vertical_run_gets_none(self):
        d = OrthoDrawing(
            {"a": Point(0, 0), "b": Point(0, 5)}, [Edge("e", "a", "b")]
        )
        _, bvs = insert_bend_vertices(normalize(d))
        assert bvs == []

    def test_spacing_thins_the_grid(self):
        d = OrthoDrawing(
            {"a": Point(0, 0), "b": Point(7, 0)}, [Edge("e", "a", "b")]
        )
        _, bvs = insert_bend_vertices(normalize(d), spacing=3)
        assert [bv.x for bv in bvs] == [3, 6]

    def test_spacing_must_be_positive(self):
        with pytest.raises(ValueError):
            insert_bend_vertices(normalize(unit_square()), spacing=0)

    def test_bend_host_is_the_original_edge(self, fig4):
        _, bvs = insert_bend_vertices(normalize(fig4))
        hosts = {(bv.edge_id, bv.x) for bv in bvs}
        assert hosts == {("t0", 1), ("t1", 3), ("tp", 1), ("tp", 2), ("tp", 3)}


class TestVerticalDissect:
    def test_unit_square_needs_nothing(self, square):
        dd = vertical_dissect(normalize(square))
        assert dd.visibility_edges() == []
        assert dissection_size(dd) == (4, 4)

    def test_fig2a_five_visibility_edges(self, fig2a):
        dd = vertical_dissect(normalize(fig2a))
        assert vis_coordinates(dd) == {
            ((1, 0), (1, 1)),
            ((2, 3), (2, 4)),
            ((4, 3), (4, 4)),
            ((5, 4), (5, 6)),
            ((6, 1), (6, 4)),
        }

    def test_fig4_ff_stripes_at_columns_1_2_3(self, fig4):
        dd = ff_dissect(fig4)
        assert vis_coordinates(dd) == {
            ((1, 0), (1, 3)),
            ((1, 3), (1, 5)),
            ((2, 3), (2, 5)),
            ((3, 0), (3, 3)),
            ((3, 3), (3, 5)),
        }

    def test_pendant_tip_and_bend_dummy_rays(self):
        # a hook hanging between two long horizontals: the tip shoots down,
        # its bend dummy shoots up, and the two loose corners see each other
        d = OrthoDrawing(
            {
                "a": Point(0, 0),
                "b": Point(4, 0),
                "c": Point(0, 4),
                "d": Point(4, 4),
                "l": Point(0, 2),
                "n": Point(2, 1),
            },
            [
                Edge("bot", "a", "b"),
                Edge("top", "c", "d"),
                Edge("post0", "a", "l"),
                Edge("post1", "l", "c"),
                Edge("arm", "l", "n", (Point(2, 2),)),
            ],
        )
        dd = vertical_dissect(normalize(d))
        coords = vis_coordinates(dd)
        assert ((2, 2), (2, 4)) in coords  # ray up from the bend dummy
        assert ((2, 0), (2, 1)) in coords  # ray down from the pendant tip
        assert ((4, 0), (4, 4)) in coords  # the two degree-one corners

    @pytest.mark.parametrize(
        "drawing",
        [
            unit_square(),
            load_fixture("fig2a.ogd"),
            load_fixture("fig3a.ogd"),
            load_fixture("fig4.ogd"),
            generate("comb", 5),
            generate("staircase", 4),
            generate("random", 16, 2),
            generate("random", 16, 7),
        ],
    )
    def test_dissected_drawing_is_valid_with_rectangular_faces(self, drawing):
        for dd in (vertical_dissect(normalize(drawing)), ff_dissect(drawing)):
            assert validate(dd.drawing).ok
            emb = compute_embedding(dd.drawing)
            for face in emb.internal_faces:
                turns = _face_turns(dd.drawing, emb, face)
                assert turns.count(90) == 4
                assert set(turns) <= {0, 90}

    def test_ladder_counts_scale_linearly(self):
        for k in range(2, 11):
            d = OrthoDrawing(
                {
                    "a": Point(0, 0),
                    "b": Point(k, 0),
                    "c": Point(0, 1),
                    "d": Point(k, 1),
                },
                [
                    Edge("bot", "a", "b"),
                    Edge("top", "c", "d"),
                    Edge("l", "a", "c"),
                    Edge("r", "b", "d"),
                ],
            )
            dd = ff_dissect(d)
            assert len(dd.bend_vertices) == 2 * (k - 1)
            assert len(dd.visibility_edges()) == k - 1

    def test_split_dummies_created_when_ray_hits_segment_interior(self, fig2a):
        dd = vertical_dissect(normalize(fig2a))
        splits = [v for v, k in dd.vertex_kind.items() if k == "split_dummy"]
        assert len(splits) == 5  # every fig2a ray lands inside a segment

    def test_chains_still_walk_every_original_edge(self, fig4):
        dd = ff_dissect(fig4)
        for orig in fig4.edges:
            chain = dd.chains[orig.id]
            assert chain[0] == orig.u and chain[-1] == orig.v
            for a, b in zip(chain, chain[1:]):
                assert dd.piece_between(a, b)


def _face_turns(drawing, emb, face):
    from orthocompact.model import (
        _dart_final_direction,
        _dart_initial_direction,
        _dart_turns,
    )

    turns = []
    boundary = face.boundary
    for i, dart in enumerate(boundary):
        nxt = boundary[(i + 1) % len(boundary)]
        turns.append(
            turn_angle(
                _dart_final_direction(drawing, dart),
                _dart_initial_direction(drawing, nxt),
            )
        )
    return turns


class TestDissectionSize:
    def test_unit_square(self, square):
        assert dissection_size(vertical_dissect(normalize(square))) == (4, 4)

    @pytest.mark.parametrize("seed", range(20))
    def test_quadratic_area_bound(self, seed):
        from orthocompact.model import metrics
        from orthocompact.normalize import strip_empty_grid_lines

        d = strip_empty_grid_lines(generate("random", 20, seed))
        m = metrics(d)
        area = max(1, m.width * m.height)
        v, e = dissection_size(ff_dissect(d))
        assert v + e <= 8 * area * area
