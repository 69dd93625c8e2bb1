"""Free-space and half-space Green's matrices of the Stokes system.

Index convention: rows/columns 1..3 are velocity components, 4 is pressure.
Arrays returned by the vectorised helpers are 0-based, so entry (i, j) of the
mathematical matrix lives at ``[..., i - 1, j - 1]``.

The half-space is ``x3 > 0``; ``xi*`` is the mirror image of the source.
Only the regular (function) part of each entry is evaluated numerically; the
``-delta(x - xi)`` carried by entry (4, 4) is tracked symbolically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .core import DEFAULT_CONFIG, BcType, MultiIndex, NumericConfig, Vec3
from .errors import DomainError, EvaluationInsideSupport, SingularPoint, UnsupportedBc

FREE_SPACE = "free-space"

_PI4 = 4.0 * math.pi
_PI8 = 8.0 * math.pi

# column sign of the mirrored source: tangential force/sources keep their sign,
# the normal force flips
_MIRROR = np.array([1.0, 1.0, -1.0, 1.0])
_D = np.array([1.0, 1.0, -1.0])


@dataclass(frozen=True)
class GreenEntry:
    value: float
    has_delta: bool = False
    delta_coefficient: float = 0.0

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class GreenMatrix:
    entries: tuple
    bc: Union[BcType, str]
    x: Vec3
    xi: Vec3

    def __getitem__(self, ij) -> GreenEntry:
        """1-based access, ``G[i, j]``."""
        i, j = ij
        return self.entries[i - 1][j - 1]

    def values(self) -> np.ndarray:
        return np.array([[e.value for e in row] for row in self.entries])


@dataclass(frozen=True)
class PressurePotential:
    p_vec: tuple
    tail: float = 0.0


@dataclass(frozen=True)
class SourceField:
    """Body force ``f`` and divergence datum ``g`` with compact support.

    ``f`` and ``g`` are called with an ``(N, 3)`` array of points and must
    return arrays of shape ``(N, 3)`` and ``(N,)``.
    """

    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    support_box: tuple

    def __post_init__(self):
        box = tuple(tuple(float(v) for v in side) for side in self.support_box)
        if len(box) != 3 or any(lo >= hi for lo, hi in box):
            raise DomainError("support_box must be ((lo, hi),) * 3 with lo < hi")
        if box[2][0] <= 0:
            raise DomainError("support_box must lie strictly inside x3 > 0")
        object.__setattr__(self, "support_box", box)

    def contains(self, x) -> bool:
        return all(lo <= v <= hi for v, (lo, hi) in zip(x, self.support_box))


def _norm(v):
    return np.sqrt(np.einsum("...k,...k->...", v, v))


def parse_bc(bc):
    if isinstance(bc, str) and bc.strip().lower().replace("_", "-") in (FREE_SPACE, "freespace"):
        return FREE_SPACE
    return BcType.parse(bc)


# --------------------------------------------------------------------------
# vectorised kernels


def freespace_array(v: np.ndarray) -> np.ndarray:
    """Regular part of the free-space matrix as a function of ``v = x - xi``."""
    v = np.asarray(v, dtype=float)
    r = _norm(v)[..., None, None]
    out = np.zeros(v.shape[:-1] + (4, 4))
    vv = v[..., :, None] * v[..., None, :]
    out[..., :3, :3] = (np.eye(3) / r + vv / r**3) / _PI8
    p = v / (_PI4 * r[..., 0] ** 3)
    out[..., 3, :3] = p
    out[..., :3, 3] = -p
    return out


def _dirichlet(x, xi):
    r = x - xi
    R = x.copy()
    R[..., :2] -= xi[..., :2]
    R[..., 2] += xi[..., 2]
    h = xi[..., 2][..., None, None]
    x3 = x[..., 2][..., None]
    Rn = _norm(R)[..., None, None]
    out = freespace_array(r) - freespace_array(R)
    # image system: Stokes doublet and potential dipole at xi*
    eye = np.eye(3)
    Ri = R[..., :, None]
    Rk = R[..., None, :]
    R3 = R[..., 2][..., None, None]
    dT = (
        h * (eye / Rn**3 - 3 * Ri * Rk / Rn**5)
        + eye[2][:, None] * Rk / Rn**3
        - (eye * R3 + Ri * eye[2][None, :]) / Rn**3
        + 3 * Ri * R3 * Rk / Rn**5
    )
    out[..., :3, :3] += 2 * h * _D * dT / _PI8
    Rn1 = Rn[..., 0]
    R31 = R3[..., 0]
    dq = eye[2] / Rn1**3 - 3 * R31 * R / Rn1**5
    out[..., 3, :3] = (r / _norm(r)[..., None] ** 3 - R / Rn1**3 - 2 * h[..., 0] * _D * dq) / _PI4
    # column 4: source at xi, image sink/doublet, and a harmonic correction -2 x3 grad d3(1/R)
    col = -r / _norm(r)[..., None] ** 3 + _MIRROR[:3] * R / Rn1**3
    grad_d3 = np.concatenate(
        [3 * R31 * R[..., :2] / Rn1**5, (-1 / Rn1**3 + 3 * R31**2 / Rn1**5)], axis=-1
    )
    out[..., :3, 3] = (col - 2 * x3 * grad_d3) / _PI4
    out[..., 3, 3] = (1 / Rn1[..., 0] ** 3 - 3 * R31[..., 0] ** 2 / Rn1[..., 0] ** 5) / math.pi
    return out


def _mirror_images(x, xi, sign):
    R = x - xi * np.array([1.0, 1.0, -1.0])
    out = freespace_array(x - xi) + sign * _MIRROR * freespace_array(R)
    out[..., 3, 3] = 0.0
    return out


def _neumann_upper(x, xi):
    """Entries given explicitly for the traction problem; the rest follows by symmetry."""
    r = x - xi
    R = x - xi * np.array([1.0, 1.0, -1.0])
    G = freespace_array(r)
    Gs = freespace_array(R)
    rho = _norm(R)
    a = R  # a1, a2 = x' - xi', a3 = x3 + xi3
    x3, y3 = x[..., 2], xi[..., 2]
    out = np.zeros_like(G)
    for i in range(2):
        for j in range(2):
            out[..., i, j] = G[..., i, j] + Gs[..., i, j] + x3 * y3 / _PI4 * (
                (i == j) / rho**3 - 3 * a[..., i] * a[..., j] / rho**5
            )
        out[..., i, 2] = G[..., i, 2] - Gs[..., i, 2] + x3 * a[..., i] / _PI4 * (
            1 / rho**3 + 3 * y3 * a[..., 2] / rho**5
        )
        out[..., i, 3] = G[..., i, 3] + Gs[..., i, 3] + 3 * x3 * a[..., 2] * a[..., i] / (2 * math.pi * rho**5)
    a3 = a[..., 2]
    out[..., 2, 2] = G[..., 2, 2] - Gs[..., 2, 2] + (
        1 / rho + a3**2 / rho**3 - x3 * y3 / rho**3 + 3 * x3 * y3 * a3**2 / rho**5
    ) / _PI4
    out[..., 2, 3] = G[..., 2, 3] + Gs[..., 2, 3] - (
        -a3 / rho**3 + x3 / rho**3 - 3 * x3 * a3**2 / rho**5
    ) / (2 * math.pi)
    out[..., 3, 3] = (-1 / rho**3 + 3 * a3**2 / rho**5) / math.pi
    return out


def _neumann(x, xi):
    out = _neumann_upper(x, xi)
    swapped = _neumann_upper(xi, x)
    for i, j in ((2, 0), (2, 1), (3, 0), (3, 1), (3, 2)):
        out[..., i, j] = swapped[..., j, i]
    return out


def green_array(bc, x, xi) -> np.ndarray:
    """Regular parts of the 4x4 Green matrix, broadcasting over leading axes."""
    bc = parse_bc(bc)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    x, xi = np.broadcast_arrays(x, xi)
    if bc == FREE_SPACE:
        return freespace_array(x - xi)
    if bc == BcType.DIRICHLET:
        return _dirichlet(x.copy(), xi)
    if bc == BcType.MIXED_NORMAL:
        return _mirror_images(x, xi, -1.0)
    if bc == BcType.FREE_SURFACE:
        return _mirror_images(x, xi, 1.0)
    return _neumann(x, xi)


# --------------------------------------------------------------------------
# public scalar API


def _check_pair(x, xi, config, halfspace):
    x, xi = Vec3.of(x), Vec3.of(xi)
    if halfspace:
        if xi.x3 <= 0:
            raise DomainError(f"source point must satisfy xi3 > 0, got {xi.x3}")
        if x.x3 < 0:
            raise DomainError(f"field point must satisfy x3 >= 0, got {x.x3}")
    if (x - xi).norm() < config.singularity_guard:
        raise SingularPoint("x coincides with xi")
    return x, xi


def _wrap(values, bc, x, xi):
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            if i == 3 and j == 3:
                row.append(GreenEntry(float(values[i, j]), True, -1.0))
            else:
                row.append(GreenEntry(float(values[i, j])))
        rows.append(tuple(row))
    return GreenMatrix(tuple(rows), bc, x, xi)


def freespace_green(x, xi, config: NumericConfig = DEFAULT_CONFIG) -> GreenMatrix:
    x, xi = _check_pair(x, xi, config, halfspace=False)
    return _wrap(freespace_array(x.as_array() - xi.as_array()), FREE_SPACE, x, xi)


def halfspace_green(bc, x, xi, config: NumericConfig = DEFAULT_CONFIG) -> GreenMatrix:
    bc = BcType.parse(bc)
    x, xi = _check_pair(x, xi, config, halfspace=True)
    return _wrap(green_array(bc, x.as_array(), xi.as_array()), bc, x, xi)


def green(bc, x, xi, config: NumericConfig = DEFAULT_CONFIG) -> GreenMatrix:
    """Dispatch on ``bc``, accepting the free-space marker."""
    bc = parse_bc(bc)
    if bc == FREE_SPACE:
        return freespace_green(x, xi, config)
    return halfspace_green(bc, x, xi, config)


# --------------------------------------------------------------------------
# finite-difference derivatives


def central_weights(order: int) -> tuple:
    """Offsets and weights (for unit step) of the narrowest second-order central stencil."""
    if order == 0:
        return np.array([0]), np.array([1.0])
    p = (order + 1) // 2
    offsets = np.arange(-p, p + 1)
    A = np.vander(offsets.astype(float), increasing=True).T
    b = np.zeros(len(offsets))
    b[order] = math.factorial(order)
    return offsets, np.linalg.solve(A, b)


def mixed_partial(func, z0: np.ndarray, orders, h: float) -> float:
    """Tensor-product central difference of ``func`` at ``z0``.

    ``func`` maps an ``(N, d)`` array to ``(N,)`` values; ``orders[k]`` is the
    derivative order in coordinate ``k``.
    """
    z0 = np.asarray(z0, dtype=float)
    axes = [(k, *central_weights(n)) for k, n in enumerate(orders) if n]
    if not axes:
        return float(func(z0[None, :])[0])
    grids = np.meshgrid(*[off for _, off, _ in axes], indexing="ij")
    wgrid = np.ones_like(grids[0], dtype=float)
    for g, (_, off, w) in zip(np.meshgrid(*[np.arange(len(o)) for _, o, _ in axes], indexing="ij"), axes):
        wgrid = wgrid * w[g]
    pts = np.repeat(z0[None, :], wgrid.size, axis=0)
    for (k, _, _), g in zip(axes, grids):
        pts[:, k] += h * g.ravel()
    total = sum(n for n in orders)
    return float(np.dot(func(pts), wgrid.ravel()) / h**total)


def richardson(func, z0, orders, h: float) -> float:
    coarse = mixed_partial(func, z0, orders, h)
    fine = mixed_partial(func, z0, orders, h / 2)
    return (4 * fine - coarse) / 3


def halfspace_green_derivative(
    bc, i: int, j: int, alpha=None, gamma=None, x=None, xi=None, config: NumericConfig = DEFAULT_CONFIG
) -> float:
    """``d_x^alpha d_xi^gamma`` of the regular part of entry (i, j), 1-based indices."""
    bc = parse_bc(bc)
    alpha = MultiIndex.of(alpha)
    gamma = MultiIndex.of(gamma)
    if alpha.order + gamma.order > config.max_derivative_order:
        MultiIndex(alpha.order + gamma.order).check(config.max_derivative_order)
    x, xi = _check_pair(x, xi, config, halfspace=bc != FREE_SPACE)
    if not (1 <= i <= 4 and 1 <= j <= 4):
        raise DomainError("row/col indices are 1..4")
    z0 = np.concatenate([x.as_array(), xi.as_array()])
    orders = list(alpha) + list(gamma)
    h = config.fd_step_base * (x - xi).norm()

    def entry(z):
        return green_array(bc, z[:, :3], z[:, 3:])[:, i - 1, j - 1]

    if sum(orders) == 0:
        return float(entry(z0[None, :])[0])
    return richardson(entry, z0, orders, h)


# --------------------------------------------------------------------------
# pressure-row potentials


def _pressure_potential_array(bc, j, x, xi):
    r = x - xi
    R = x - xi * np.array([1.0, 1.0, -1.0])
    rn, Rn = _norm(r), _norm(R)
    c, d = r[..., 2], R[..., 2]
    P = np.zeros(x.shape)
    if bc == BcType.MIXED_NORMAL:
        if j in (1, 2):
            P[..., j - 1] = (1 / rn - 1 / Rn) / _PI4
        elif j == 3:
            for k in range(2):
                P[..., k] = -(r[..., k] * c / rn**3 + r[..., k] * c / Rn**3) / _PI4
            P[..., 2] = -(c**2 / rn**3 + (x[..., 2] ** 2 - xi[..., 2] ** 2) / Rn**3) / _PI4
        else:
            for k in range(2):
                P[..., k] = (r[..., k] / rn**3 + R[..., k] / Rn**3) / _PI4
            P[..., 2] = (c / rn**3 + d / Rn**3) / _PI4
    else:
        if j in (1, 2):
            P[..., j - 1] = (1 / rn + 1 / Rn) / _PI4 - xi[..., 2] * d / (2 * math.pi * Rn**3)
        elif j == 3:
            for k in range(2):
                P[..., k] = -R[..., k] * d / (2 * math.pi * Rn**3)
            P[..., 2] = (1 / rn - 1 / Rn - 2 * x[..., 2] * d / Rn**3) / _PI4
        else:
            for k in range(2):
                P[..., k] = (r[..., k] / rn**3 - 3 * R[..., k] / Rn**3) / _PI4
            P[..., 2] = (c / rn**3 + d / Rn**3) / _PI4
    return P


def pressure_potential_array(bc, j: int, x, xi) -> np.ndarray:
    bc = BcType.parse(bc)
    if bc not in (BcType.MIXED_NORMAL, BcType.NEUMANN):
        raise UnsupportedBc("pressure-row potentials are provided for bc 1 and 3 only")
    if j not in (1, 2, 3, 4):
        raise DomainError("column index must be 1..4")
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    x, xi = np.broadcast_arrays(x, xi)
    return _pressure_potential_array(bc, j, x, xi)


def pressure_row_decomposition(bc, j: int, x, xi, config: NumericConfig = DEFAULT_CONFIG) -> PressurePotential:
    """Vector field ``P_j`` with ``-div_x P_j`` equal to the regular part of ``G+_{4,j}``.

    Its normal component vanishes on the wall.
    """
    bc = BcType.parse(bc)
    if bc not in (BcType.MIXED_NORMAL, BcType.NEUMANN):
        raise UnsupportedBc("pressure-row potentials are provided for bc 1 and 3 only")
    x, xi = _check_pair(x, xi, config, halfspace=True)
    P = pressure_potential_array(bc, j, x.as_array(), xi.as_array())
    return PressurePotential(tuple(float(v) for v in P), 0.0)


# --------------------------------------------------------------------------
# representation formula


def gauss_box(box, order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    axes, weights = [], []
    for lo, hi in box:
        axes.append(0.5 * (hi - lo) * t + 0.5 * (hi + lo))
        weights.append(0.5 * (hi - lo) * w)
    X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    W = np.einsum("i,j,k->ijk", *weights).ravel()
    return X, W


def representation_solution(bc, src: SourceField, x, config: NumericConfig = DEFAULT_CONFIG,
                            nodes: Optional[tuple] = None):
    """Velocity and pressure at ``x`` from the Green representation of the solution.

    The delta part of entry (4, 4) contributes ``-g(x)`` to the pressure; it is
    added analytically and vanishes at the exterior points accepted here.
    """
    bc = parse_bc(bc)
    x = Vec3.of(x)
    if src.contains(x):
        raise EvaluationInsideSupport(f"{x} lies in the support box {src.support_box}")
    if nodes is None:
        nodes = gauss_box(src.support_box, config.quadrature_order)
    X, W = nodes
    f = np.asarray(src.f(X), dtype=float).reshape(-1, 3)
    g = np.asarray(src.g(X), dtype=float).reshape(-1)
    G = green_array(bc, x.as_array()[None, :], X)
    u = np.einsum("n,nij,nj->i", W, G[:, :3, :3], f) + np.einsum("n,ni,n->i", W, G[:, :3, 3], g)
    p = np.einsum("n,nj,nj->", W, G[:, 3, :3], f) + np.einsum("n,n,n->", W, G[:, 3, 3], g)
    gx = float(np.asarray(src.g(x.as_array()[None, :])).reshape(-1)[0])
    return Vec3(*u), float(p - gx)
