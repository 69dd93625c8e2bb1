"""Edge pencil: bases, determinants, catalogue and classification."""
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stokes_edge.errors import DegenerateLambda, DomainError, SpectrumEmptyInRegion
from stokes_edge.pencil import (
    Region,
    WedgeConfig,
    classify,
    closed_form_spectrum,
    laplace_basis,
    one_in_spectrum,
    one_in_spectrum_dedicated,
    pencil_determinant,
    scan_spectrum,
    stokes_basis,
    sweep,
    zero_condition_list,
    zero_eigenvector_dimension,
)

PI = math.pi
CASES = [(a, b) for a in range(4) for b in range(a, 4)]


def _fields(lam, pts):
    """Cartesian (u1, u2, p) of the four basis solutions at planar points."""
    r = np.hypot(pts[:, 0], pts[:, 1])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    b = stokes_basis(lam, phi)
    u = b["U"] * r ** lam
    p = b["P"] * r ** (lam - 1)
    return u, p


@given(st.floats(0.05, 3.0), st.floats(-2.5, 2.5))
def test_stokes_basis_solves_stokes(lam, phi0):
    if min(abs(lam - c) for c in (-1, 0, 1)) < 0.01:
        return
    x0 = np.array([math.cos(phi0), math.sin(phi0)])
    h = 1e-3
    e = np.eye(2) * h
    pts = np.array([x0, x0 + e[0], x0 - e[0], x0 + e[1], x0 - e[1]])
    u, p = _fields(lam, pts)
    lap = (u[..., 1] + u[..., 2] + u[..., 3] + u[..., 4] - 4 * u[..., 0]) / h**2
    gp = np.stack([(p[:, 1] - p[:, 2]) / (2 * h), (p[:, 3] - p[:, 4]) / (2 * h)], axis=1)
    div = (u[:, 0, 1] - u[:, 0, 2] + u[:, 1, 3] - u[:, 1, 4]) / (2 * h)
    scale = max(1.0, float(np.abs(lap).max()))
    assert np.abs(-lap + gp).max() / scale < 1e-4
    assert np.abs(div).max() < 1e-5


def test_laplace_basis_is_harmonic():
    lam = 1.37
    b = laplace_basis(lam, np.array([0.3]))
    # r^lam cos(lam phi): the angular part satisfies V'' = -lam^2 V
    h = 1e-4
    v = [laplace_basis(lam, np.array([0.3 + s]))["V"] for s in (-h, 0, h)]
    assert np.allclose((v[0] - 2 * v[1] + v[2]) / h**2, -lam**2 * b["V"], rtol=1e-6)


def test_degenerate_lambda():
    with pytest.raises(DegenerateLambda):
        stokes_basis(1.0 + 1e-5, 0.0)
    with pytest.raises(DegenerateLambda):
        pencil_determinant(WedgeConfig(PI, 0, 0), 1e-4)
    pencil_determinant(WedgeConfig(PI, 0, 0), 1.0)


def test_wedge_config_validation():
    with pytest.raises(DomainError):
        WedgeConfig(0.0, 0, 0)
    with pytest.raises(DomainError):
        WedgeConfig(1.0, 0, 4)
    assert WedgeConfig(1.0, 3, 1).case == (1, 3)


def _dirichlet_oracle(theta, re_max=3.0):
    """Real and complex roots of sin(lam theta) = -+ lam sin(theta), by mpmath from a seed grid."""
    roots = []
    for s in (1, -1):
        f = lambda z: mpmath.sin(z * theta) + s * z * mpmath.sin(theta)
        for a in np.linspace(0.05, re_max + 0.5, 40):
            for b in np.linspace(0.0, 3.0, 13):
                try:
                    z = complex(mpmath.findroot(f, mpmath.mpc(a, b)))
                except (ValueError, ZeroDivisionError):
                    continue
                if 0.01 < z.real <= re_max and abs(z - 1) > 1e-3 and z.imag >= -1e-12 and abs(z.imag) <= 5:
                    z = complex(z.real, 0.0) if abs(z.imag) < 1e-10 else z
                    if all(abs(z - w) > 1e-8 for w in roots):
                        roots.append(z)
    return roots


@pytest.mark.parametrize("theta", [PI / 3, 2 * PI / 3, 1.5 * PI, 2 * PI - 0.1])
def test_dirichlet_stokes_roots_match_classical_equation(theta):
    lap = [j * PI / theta for j in range(1, 20) if j * PI / theta <= 3.0]
    spec = closed_form_spectrum(WedgeConfig(theta, 0, 0), Region(3.0, 5.0), disks=False).values()
    expected = _dirichlet_oracle(theta) + lap
    for z in expected:
        assert np.min(np.abs(spec - z)) < 1e-9, z
    for z in spec:
        assert min(abs(z - w) for w in expected) < 1e-9, z


def test_dirichlet_known_lambda1():
    assert abs(classify(WedgeConfig(2 * PI, 0, 0)).lambda1 - 0.5) < 1e-10
    assert abs(classify(WedgeConfig(PI, 0, 0)).lambda1 - 1.0) < 1e-10


def test_neumann_laplace_lattice():
    # u3 with Neumann data on both sides: lam = j pi / theta
    spec = closed_form_spectrum(WedgeConfig(1.3, 3, 3), Region(3.0, 5.0), disks=False).values()
    for j in (1,):
        assert np.min(np.abs(spec - j * PI / 1.3)) < 1e-12


@given(st.floats(0.2, 2 * PI), st.sampled_from(CASES))
def test_side_swap_symmetry(theta, case):
    a = pencil_determinant(WedgeConfig(theta, *case), 1.7 + 0.3j)
    b = pencil_determinant(WedgeConfig(theta, case[1], case[0]), 1.7 + 0.3j)
    assert abs(abs(a[0]) - abs(b[0])) <= 1e-10 * max(1.0, abs(a[0]))
    assert abs(abs(a[1]) - abs(b[1])) <= 1e-10 * max(1.0, abs(a[1]))


@pytest.mark.parametrize("case", [(0, 1), (1, 3), (2, 3), (0, 3)])
@pytest.mark.parametrize("theta", [PI / 2, 4 * PI / 3])
def test_catalogue_matches_determinant(case, theta):
    cfg = WedgeConfig(theta, *case)
    a = closed_form_spectrum(cfg).values()
    b = scan_spectrum(cfg).values()
    assert len(a) == len(b)
    for z in a:
        assert np.min(np.abs(b - z)) < 1e-9


def test_literal_lattice_has_values_the_determinant_rejects():
    cfg = WedgeConfig(PI / 3, 0, 2)
    lit = closed_form_spectrum(cfg, literal=True).values()
    cor = closed_form_spectrum(cfg).values()
    extra = [z for z in lit if np.min(np.abs(cor - z)) > 1e-9]
    assert extra and all(abs(z - 3) < 1e-12 for z in extra)
    ds, dl = pencil_determinant(cfg, 3.0)
    assert abs(ds) > 1e-3 and abs(dl) > 1e-3


@given(st.floats(0.1, 2 * PI), st.sampled_from(CASES))
def test_lambda_one_catalogue_equals_dedicated(theta, case):
    cfg = WedgeConfig(theta, *case)
    assert one_in_spectrum(cfg) == one_in_spectrum_dedicated(cfg)


@given(st.floats(0.1, 2 * PI))
def test_lambda_one_even_cases(theta):
    for case in ((0, 0), (1, 1), (0, 2), (1, 3), (2, 2), (3, 3)):
        assert one_in_spectrum_dedicated(WedgeConfig(theta, *case))


def test_zero_eigenvectors():
    assert zero_eigenvector_dimension(WedgeConfig(1.0, 0, 0)) == 0
    assert zero_eigenvector_dimension(WedgeConfig(1.0, 3, 3)) == 3
    # slip walls always admit the constant along the edge
    assert zero_eigenvector_dimension(WedgeConfig(1.0, 2, 2)) == 1
    assert zero_eigenvector_dimension(WedgeConfig(PI, 2, 2)) == 2
    assert zero_condition_list(WedgeConfig(PI, 2, 2))
    assert not zero_condition_list(WedgeConfig(1.0, 2, 2))


@given(st.floats(0.8, 2 * PI), st.sampled_from(CASES))
def test_classification_invariants(theta, case):
    c = classify(WedgeConfig(theta, *case))
    assert c.lambda1.real > 0
    assert c.lambda2.real > 1
    assert c.mu >= c.lambda1.real - 1e-12


def test_small_angles_leave_the_search_region():
    with pytest.raises(SpectrumEmptyInRegion):
        classify(WedgeConfig(0.5, 0, 0))


def test_mu_upgrade_for_small_even_angles():
    c = classify(WedgeConfig(PI / 3, 0, 0))
    assert c.mu == pytest.approx(c.lambda2.real)
    c = classify(WedgeConfig(1.5 * PI, 0, 0))
    assert c.mu == pytest.approx(c.lambda1.real)


def test_sweep_records_bound_when_empty():
    pts = sweep(0, 1, [0.1, PI])
    assert pts[0].lambda1 is None and pts[0].lower_bound == 5.0
    assert abs(pts[1].lower_bound - 0.5) < 1e-8
