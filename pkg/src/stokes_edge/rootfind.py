"""Zeros of an analytic function inside a rectangle.

Zeros are counted with the argument principle. The winding number of ``f``
along the rectangle boundary is taken from the unwrapped phase of ``f`` on an
adaptively refined sampling of each edge, so only ratios ``f(z_k+1)/f(z_k)``
are needed and any positive rescaling of ``f`` is harmless. Rectangles are
bisected until each holds a single zero (polished by Newton's method) or has
shrunk below ``min_cell`` (a cluster, polished at extended precision with the
multiplicity-corrected Newton step).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import mpmath
import numpy as np

from .errors import ContourThroughZero, NonConvergence

MAX_PHASE_STEP = 0.5
# deterministic, irrational-looking offsets for the split points
_JITTER = (0.0137, -0.0291, 0.0419, -0.0073, 0.0233, -0.0359)


@dataclass(frozen=True)
class Rect:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    @property
    def width(self):
        return self.re_hi - self.re_lo

    @property
    def height(self):
        return self.im_hi - self.im_lo

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    def corners(self):
        a, b, c, d = self.re_lo, self.re_hi, self.im_lo, self.im_hi
        return [complex(a, c), complex(b, c), complex(b, d), complex(a, d)]

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.re_lo - margin <= z.real <= self.re_hi + margin
                and self.im_lo - margin <= z.imag <= self.im_hi + margin)

    def split(self, k: int):
        """Two halves across the longer side, cut slightly off-centre."""
        frac = 0.5 + _JITTER[k % len(_JITTER)]
        if self.width >= self.height:
            m = self.re_lo + frac * self.width
            return Rect(self.re_lo, m, self.im_lo, self.im_hi), Rect(m, self.re_hi, self.im_lo, self.im_hi)
        m = self.im_lo + frac * self.height
        return Rect(self.re_lo, self.re_hi, self.im_lo, m), Rect(self.re_lo, self.re_hi, m, self.im_hi)


@dataclass(frozen=True)
class Zero:
    z: complex
    multiplicity: int
    residual: float


def _edge_phase(f, a: complex, b: complex, density: float) -> float:
    """Total change of arg f along the segment a -> b."""
    n = max(16, int(math.ceil(density * abs(b - a))))
    t = np.linspace(0.0, 1.0, n + 1)
    vals = f(a + (b - a) * t)
    for _ in range(40):
        if not np.all(np.isfinite(vals)):
            raise ContourThroughZero("non-finite function value on contour")
        if np.any(vals == 0):
            raise ContourThroughZero(f"|f| nearly vanishes on segment {a} -> {b}")
        d = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(d) > MAX_PHASE_STEP
        if not bad.any():
            return float(d.sum())
        if np.min(np.diff(t)[bad]) < 1e-13:
            raise ContourThroughZero(f"phase jump not resolved on segment {a} -> {b}")
        mids = 0.5 * (t[:-1] + t[1:])[bad]
        t_new = np.concatenate([t, mids])
        v_new = np.concatenate([vals, f(a + (b - a) * mids)])
        order = np.argsort(t_new, kind="stable")
        t, vals = t_new[order], v_new[order]
    raise ContourThroughZero("edge refinement did not settle")


def winding_number(f, rect: Rect, density: float = 64.0) -> int:
    c = rect.corners()
    total = sum(_edge_phase(f, c[k], c[(k + 1) % 4], density) for k in range(4))
    w = total / (2 * math.pi)
    n = int(round(w))
    if abs(w - n) > 0.05 or n < 0:
        raise ContourThroughZero(f"winding number {w:.4f} is not a non-negative integer")
    return n


def newton(f, z0: complex, tol: float, maxiter: int = 60) -> Optional[complex]:
    """Newton iteration with a central-difference derivative; None if it stalls."""
    z = complex(z0)
    for _ in range(maxiter):
        h = 1e-6 * max(1.0, abs(z))
        fz, fp, fm = f(np.array([z, z + h, z - h]))
        df = (fp - fm) / (2 * h)
        if df == 0 or not np.isfinite(df):
            return None
        step = fz / df
        z -= step
        if abs(step) < tol * max(1.0, abs(z)):
            return z
    return None


def polish_mp(f_mp, z0: complex, multiplicity: int = 1, dps: int = 40, maxiter: int = 80) -> complex:
    """Modified Newton step ``z -= m f/f'`` in extended precision.

    A zero of multiplicity m is only resolved to about ``10^(-dps/m)``, which
    sets the stopping tolerance.
    """
    with mpmath.workdps(dps):
        z = mpmath.mpc(z0)
        tol = mpmath.mpf(10) ** (-(dps // multiplicity - 4))
        best, best_f, min_step = z, abs(f_mp(z)), mpmath.inf
        for _ in range(maxiter):
            fz = f_mp(z)
            if fz == 0:
                return complex(z)
            if abs(fz) < best_f:
                best, best_f = z, abs(fz)
            df = mpmath.diff(f_mp, z)
            if df == 0:
                break
            step = multiplicity * fz / df
            z -= step
            min_step = min(min_step, abs(step))
            if abs(step) < tol * max(1, abs(z)):
                return complex(z)
        # iterates circling the round-off floor of f: keep the best one
        if min_step < 1e-9 * max(1, abs(best)):
            return complex(best)
        raise NonConvergence(f"extended-precision Newton stalled near {z0}")


def find_zeros(
    f: Callable[[np.ndarray], np.ndarray],
    rect: Rect,
    f_mp: Optional[Callable] = None,
    newton_tol: float = 1e-12,
    min_cell: float = 1e-4,
    newton_cell: float = 0.25,
    density: float = 64.0,
    max_cells: int = 20000,
) -> List[Zero]:
    """All zeros of ``f`` inside ``rect`` with multiplicities.

    ``f`` must accept a complex numpy array. ``f_mp`` (scalar, mpmath) is used
    to polish clusters; without it clusters are returned at the cell centre.
    """
    out: List[Zero] = []
    stack = [(rect, winding_number(f, rect, density), 0)]
    visited = 0
    while stack:
        cell, n, depth = stack.pop()
        visited += 1
        if visited > max_cells:
            raise NonConvergence("rectangle subdivision exceeded max_cells")
        if n == 0:
            continue
        if n == 1 and cell.diameter <= newton_cell:
            z = newton(f, cell.center, newton_tol)
            if z is not None and cell.contains(z, 1e-9 * max(1.0, abs(z))):
                out.append(Zero(z, 1, float(abs(f(np.array([z]))[0]))))
                continue
        if cell.diameter < min_cell:
            z = cell.center
            if f_mp is not None:
                z = polish_mp(f_mp, z, n)
            out.append(Zero(z, n, float(abs(f(np.array([z]))[0]))))
            continue
        halves = None
        for attempt in range(len(_JITTER)):
            try:
                a, b = cell.split(depth + attempt)
                na = winding_number(f, a, density)
                nb = winding_number(f, b, density)
            except ContourThroughZero:
                continue
            if na + nb == n:
                halves = ((a, na), (b, nb))
                break
            # counts disagree: resample the parent more densely and retry
            density *= 2
            n = winding_number(f, cell, density)
        if halves is None:
            raise ContourThroughZero(f"could not split cell {cell} cleanly")
        for sub, m in halves:
            stack.append((sub, m, depth + 1))
    out.sort(key=lambda zz: (zz.z.real, zz.z.imag))
    return out
