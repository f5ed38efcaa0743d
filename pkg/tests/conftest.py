import numpy as np
import pytest

from unicanon.numcore import Tolerance
from unicanon.mbm import MarkedBlockMatrix
from unicanon.quiverrep import Quiver


@pytest.fixture
def tol():
    return Tolerance()


def example_8x12():
    """The 8x12 marked block matrix whose reduction has ten zones."""
    i = 1j
    E = np.array(
        [
            [i, 0, 0, 0, 2, 0, 0, 0, 3, 0, 2, i],
            [0, i, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0],
            [0, 0, i, 0, 0, 0, 2, 0, 0, 0, i, 4],
            [0, 0, 0, i, 0, 0, 0, 0, 0, 0, 0, 4],
            [0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3],
        ],
        dtype=complex,
    )
    return MarkedBlockMatrix((8,), (8, 4), E, frozenset({(0, 0)}))


@pytest.fixture
def M8x12():
    return example_8x12()


LOOP = Quiver(1, [("a", 1, 1)])
KRONECKER = Quiver(2, [("a", 1, 2), ("b", 1, 2)])
SINGLE_ARROW = Quiver(2, [("a", 1, 2)])
TWO_ARROWS_IN = Quiver(3, [("a", 1, 2), ("b", 3, 2)])
FOUR_ARROWS = Quiver(
    3,
    [("l", 1, 1), ("m", 2, 1), ("n", 3, 1), ("x", 2, 3)],
)


def random_mbm(rng, max_strips=3, max_size=4):
    """Random marked block matrix with a tie-respecting mark set."""
    nr = int(rng.integers(1, max_strips + 1))
    nc = int(rng.integers(1, max_strips + 1))
    rows = tuple(int(rng.integers(1, max_size + 1)) for _ in range(nr))
    cols = tuple(int(rng.integers(1, max_size + 1)) for _ in range(nc))
    marked = set()
    for i in range(nr):
        for j in range(nc):
            if rows[i] == cols[j] and rng.random() < 0.3:
                marked.add((i, j))
    E = rng.standard_normal((sum(rows), sum(cols))) + 1j * rng.standard_normal(
        (sum(rows), sum(cols))
    )
    return MarkedBlockMatrix(rows, cols, E, frozenset(marked))
