from __future__ import annotations

from pathlib import Path

import pytest

from orthocompact.io import parse
from orthocompact.model import Edge, OrthoDrawing, Point

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> OrthoDrawing:
    return parse((FIXTURES / name).read_text(encoding="utf-8"))


def unit_square() -> OrthoDrawing:
    return OrthoDrawing(
        {"a": Point(0, 0), "b": Point(1, 0), "c": Point(1, 1), "d": Point(0, 1)},
        [
            Edge("e0", "a", "b"),
            Edge("e1", "b", "c"),
            Edge("e2", "c", "d"),
            Edge("e3", "d", "a"),
        ],
    )


@pytest.fixture
def square() -> OrthoDrawing:
    return unit_square()


@pytest.fixture
def fig3a() -> OrthoDrawing:
    return load_fixture("fig3a.ogd")


@pytest.fixture
def fig2a() -> OrthoDrawing:
    return load_fixture("fig2a.ogd")


@pytest.fixture
def fig4() -> OrthoDrawing:
    return load_fixture("fig4.ogd")
