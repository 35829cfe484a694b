from __future__ import annotations

import pytest

from cetcs.modelfile import ModelFile, parse_model

STANDARD_MODEL = """\
object X = {x0, x1, x2}
object Y = {y0, y1}
object I = {i0}
morphism f : X -> Y = { x0 |-> y0, x1 |-> y0, x2 |-> y1 }
morphism g : Y -> X = { y0 |-> x0, y1 |-> x2 }
morphism t : X -> I = { x0 |-> i0, x1 |-> i0, x2 |-> i0 }
relation r <| (X) = { x0, x1 }
relation s <| (X) = { x1, x2 }
relation m <| (X, Y) = { (x0, y0), (x0, y1), (x2, y0) }
"""


@pytest.fixture
def std_model() -> ModelFile:
    return parse_model(STANDARD_MODEL)
