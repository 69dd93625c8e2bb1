import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stokes_edge.core import (
    BcType,
    MultiIndex,
    NumericConfig,
    Vec3,
    check_angle,
    reflect,
    wedge_geometry,
)
from stokes_edge.errors import DomainError, OrderTooHigh

finite = st.floats(-1e6, 1e6, allow_nan=False)
angles = st.floats(1e-3, 2 * math.pi)


def test_vec3_rejects_non_finite():
    with pytest.raises(DomainError):
        Vec3(0.0, math.nan, 1.0)
    with pytest.raises(DomainError):
        Vec3(math.inf, 0.0, 1.0)


@given(finite, finite, finite)
def test_reflect_is_an_involution(a, b, c):
    p = Vec3(a, b, c)
    assert reflect(reflect(p)) == p
    assert reflect(p).x3 == -p.x3 and reflect(p).x1 == p.x1


def test_bc_parse_aliases():
    assert BcType.parse("dirichlet") == BcType.DIRICHLET
    assert BcType.parse("mixed-normal") == BcType.MIXED_NORMAL
    assert BcType.parse("free-surface") == BcType.FREE_SURFACE
    assert BcType.parse("slip") == BcType.FREE_SURFACE
    assert BcType.parse(3) == BcType.NEUMANN
    assert BcType.parse("2") == BcType.FREE_SURFACE
    for bad in ("robin", 4, -1):
        with pytest.raises(DomainError):
            BcType.parse(bad)
    assert BcType.NEUMANN.cli_name == "neumann"


def test_multi_index():
    assert MultiIndex.of((1, 0, 2)).order == 3
    with pytest.raises(DomainError):
        MultiIndex(-1, 0, 0)
    with pytest.raises(OrderTooHigh):
        MultiIndex(2, 1, 0).check(2)


def test_numeric_config_validation():
    NumericConfig()
    with pytest.raises(DomainError):
        NumericConfig(fd_step_base=0.0)
    with pytest.raises(DomainError):
        NumericConfig(epsilon_exponent=0.5)
    with pytest.raises(DomainError):
        NumericConfig(quadrature_order=0)


def test_check_angle():
    assert check_angle(2 * math.pi) == 2 * math.pi
    for bad in (0.0, -1.0, 7.0, math.nan):
        with pytest.raises(DomainError):
            check_angle(bad)


@given(angles)
def test_wedge_geometry_orthonormal_frames(theta):
    g = wedge_geometry(theta)
    for n, t in ((g.n_plus, g.tau_plus), (g.n_minus, g.tau_minus)):
        n, t = np.array(n), np.array(t)
        assert abs(np.linalg.norm(n) - 1) < 1e-14
        assert abs(np.linalg.norm(t) - 1) < 1e-14
        assert abs(n @ t) < 1e-14
    # sides meet at the opening angle
    assert math.isclose(math.acos(np.clip(np.dot(g.tau_plus, g.tau_minus), -1, 1)),
                        min(theta, 2 * math.pi - theta), abs_tol=1e-7)


def test_wedge_geometry_examples():
    g = wedge_geometry(math.pi)
    # half-plane: both outward normals point the same way
    assert np.allclose(g.n_plus, (-1, 0, 0), atol=1e-15)
    assert np.allclose(g.n_minus, (-1, 0, 0), atol=1e-15)
    g = wedge_geometry(2 * math.pi)
    # crack: the two faces have opposite normals
    assert np.allclose(g.n_plus, (0, -1, 0), atol=1e-15)
    assert np.allclose(g.n_minus, (0, 1, 0), atol=1e-15)


@given(st.floats(1e-3, 2 * math.pi - 1e-3))
def test_normals_point_out_of_the_wedge(theta):
    g = wedge_geometry(theta)
    bisector = np.array([1.0, 0.0, 0.0])
    assert np.dot(g.n_plus, bisector) < 0 and np.dot(g.n_minus, bisector) < 0
