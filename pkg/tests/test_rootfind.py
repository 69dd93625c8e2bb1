import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stokes_edge.errors import ContourThroughZero
from stokes_edge.rootfind import Rect, find_zeros, polish_mp, winding_number


def _poly(roots):
    def f(z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r in roots:
            out = out * (z - r)
        return out

    def f_mp(z):
        out = mpmath.mpc(1)
        for r in roots:
            out *= z - r
        return out
    return f, f_mp


def test_winding_counts_roots():
    f, _ = _poly([0.3 + 0.2j, 1.1, 2.5 - 0.4j])
    assert winding_number(f, Rect(0, 2, -1, 1)) == 2
    assert winding_number(f, Rect(0, 3, -1, 1)) == 3
    assert winding_number(f, Rect(-2, -1, -1, 1)) == 0


def test_contour_through_zero_raises():
    f, _ = _poly([0.5])
    with pytest.raises(ContourThroughZero):
        winding_number(f, Rect(0.5, 1, -1, 1))


def test_simple_and_double_roots():
    roots = [0.5, 1.2 + 0.7j, 2.0, 2.0]
    f, f_mp = _poly(roots)
    zs = find_zeros(f, Rect(0.013, 3.1, -0.49, 1.3), f_mp)
    got = sorted((round(z.z.real, 8), round(z.z.imag, 8), z.multiplicity) for z in zs)
    assert got == [(0.5, 0.0, 1), (1.2, 0.7, 1), (2.0, 0.0, 2)]


def test_transcendental_roots():
    # zeros of sin(pi z) in the box are the integers 1, 2, 3
    zs = find_zeros(lambda z: np.sin(np.pi * z), Rect(0.5, 3.5, -1, 1), lambda z: mpmath.sin(mpmath.pi * z))
    assert np.allclose([z.z for z in zs], [1, 2, 3], atol=1e-12)


def test_polish_mp_double_root():
    z = polish_mp(lambda z: (z - mpmath.mpf(1) / 3) ** 2 * (z + 2), 0.3334, multiplicity=2)
    assert abs(z - 1 / 3) < 1e-12


@given(st.lists(st.tuples(st.floats(0.1, 2.9), st.floats(-0.9, 0.9)), min_size=1, max_size=4, unique=True))
def test_property_roots_recovered(pts):
    roots = [complex(a, b) for a, b in pts]
    if min((abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]), default=1) < 1e-2:
        return
    f, f_mp = _poly(roots)
    zs = find_zeros(f, Rect(0.0137, 3.02, -1.013, 1.021), f_mp)
    assert sum(z.multiplicity for z in zs) == len(roots)
    for r in roots:
        assert min(abs(z.z - r) for z in zs) < 1e-9
