"""Geometric primitives, boundary-condition codes and numeric configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import DomainError, OrderTooHigh

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Vec3:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for name in ("x1", "x2", "x3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"non-finite coordinate {name}={v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def of(cls, p) -> "Vec3":
        if isinstance(p, Vec3):
            return p
        a, b, c = p
        return cls(a, b, c)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3))

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x1 - other.x1, self.x2 - other.x2, self.x3 - other.x3)

    def scaled(self, t: float) -> "Vec3":
        return Vec3(t * self.x1, t * self.x2, t * self.x3)

    def norm(self) -> float:
        return math.sqrt(self.x1**2 + self.x2**2 + self.x3**2)


class BcType(IntEnum):
    """Boundary-condition codes on one face.

    0 Dirichlet (u = 0), 1 mixed-normal (tangential velocity and normal
    stress), 2 free surface / slip (normal velocity and tangential stress),
    3 Neumann (full traction).
    """

    DIRICHLET = 0
    MIXED_NORMAL = 1
    FREE_SURFACE = 2
    NEUMANN = 3

    @classmethod
    def parse(cls, value) -> "BcType":
        if isinstance(value, BcType):
            return value
        if isinstance(value, str):
            key = value.strip().lower().replace("-", "_")
            aliases = {"dirichlet": 0, "mixed_normal": 1, "free_surface": 2, "slip": 2, "neumann": 3}
            if key in aliases:
                return cls(aliases[key])
            if key.isdigit():
                value = int(key)
        try:
            return cls(int(value))
        except (ValueError, TypeError):
            raise DomainError(f"boundary condition code must be 0..3, got {value!r}") from None

    @property
    def cli_name(self) -> str:
        return self.name.lower().replace("_", "-")


@dataclass(frozen=True)
class MultiIndex:
    a1: int = 0
    a2: int = 0
    a3: int = 0

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise DomainError(f"multi-index entries must be non-negative integers, got {v!r}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def of(cls, m) -> "MultiIndex":
        if m is None:
            return cls()
        if isinstance(m, MultiIndex):
            return m
        return cls(*m)

    @property
    def order(self) -> int:
        return self.a1 + self.a2 + self.a3

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3))

    def check(self, max_order: int) -> "MultiIndex":
        if self.order > max_order:
            raise OrderTooHigh(f"|alpha|={self.order} exceeds max_derivative_order={max_order}")
        return self


@dataclass(frozen=True)
class WedgeGeometry:
    theta: float
    n_plus: tuple
    n_minus: tuple
    tau_plus: tuple
    tau_minus: tuple


@dataclass(frozen=True)
class NumericConfig:
    fd_step_base: float = 1e-3
    newton_tol: float = 1e-12
    scan_rect: tuple = (3.0, 5.0)
    epsilon_exponent: float = 0.01
    quadrature_order: int = 24
    singularity_guard: float = 1e-14
    max_derivative_order: int = 2
    merge_tol: float = 1e-8
    exclusion_radius: float = 1e-3
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("fd_step_base", "newton_tol", "singularity_guard", "merge_tol", "exclusion_radius"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")
        if not (0 < self.epsilon_exponent <= 0.1):
            raise DomainError("epsilon_exponent must lie in (0, 0.1]")
        if self.quadrature_order < 1:
            raise DomainError("quadrature_order must be >= 1")
        re_max, im_max = self.scan_rect
        if not (re_max > 0 and im_max > 0):
            raise DomainError("scan_rect entries must be positive")


DEFAULT_CONFIG = NumericConfig()


def reflect(p) -> Vec3:
    """Mirror image across the wall x3 = 0."""
    p = Vec3.of(p)
    return Vec3(p.x1, p.x2, -p.x3)


def check_angle(theta: float) -> float:
    theta = float(theta)
    if not (math.isfinite(theta) and 0.0 < theta <= TWO_PI * (1 + 1e-12)):
        raise DomainError(f"opening angle must lie in (0, 2*pi] radians, got {theta!r}")
    return min(theta, TWO_PI)


def wedge_geometry(theta: float) -> WedgeGeometry:
    """Unit normals and ray tangents of the wedge with sides at phi = +-theta/2."""
    theta = check_angle(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return WedgeGeometry(
        theta=theta,
        n_plus=(-s, c, 0.0),
        n_minus=(-s, -c, 0.0),
        tau_plus=(c, s, 0.0),
        tau_minus=(c, -s, 0.0),
    )
