import numpy as np
import pytest

from beq.errors import RootFindFailure
from beq.roots import aberth, horner


def test_horner_matches_polyval():
    c = np.array([1 + 2j, -3, 0.5j, 4])
    z = np.array([0.3 - 0.2j, 1.5, -2j])
    assert np.allclose(horner(c, z), np.polyval(c, z))


@pytest.mark.parametrize("roots", [
    [1, 2, 3],
    [0.5j, -0.5j, 0.25 + 0.1j, -0.9],
    [1e-3, -2, 3 + 4j],
])
def test_aberth_recovers_simple_roots(roots):
    got = aberth(np.poly(roots))
    assert np.allclose(np.sort_complex(got), np.sort_complex(np.array(roots, dtype=complex)), atol=1e-10)


def test_aberth_double_root_at_origin():
    got = aberth(np.array([1.0, -1.0, 0.0, 0.0]))
    assert np.sort(np.abs(got))[:2] == pytest.approx([0, 0], abs=1e-7)
    assert np.max(np.abs(got)) == pytest.approx(1.0)


def test_aberth_strips_leading_zeros():
    got = aberth(np.array([0.0, 0.0, 1.0, -3.0]))
    assert got.size == 1 and got[0] == pytest.approx(3.0)


def test_aberth_random_matches_numpy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        c = rng.normal(size=9) + 1j * rng.normal(size=9)
        got = np.sort_complex(aberth(c))
        ref = np.sort_complex(np.roots(c))
        assert np.allclose(got, ref, atol=1e-8)


def test_aberth_budget_exhausted():
    with pytest.raises(RootFindFailure):
        aberth(np.poly([1, 2, 3, 4, 5, 6]), max_iter=1)
