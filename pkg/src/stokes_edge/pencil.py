"""Spectrum of the wedge operator pencil A(lambda).

On the wedge ``-theta/2 < phi < theta/2`` the ansatz ``u = r^lambda U(phi)``,
``p = r^(lambda-1) P(phi)`` splits into a planar Stokes problem for
``(u_r, u_phi, p)`` and a scalar Laplace problem for ``u_3``. The spectrum is
the union of the zeros of the two boundary determinants.

Two independent routes are provided: a closed-form catalogue (lattice
families plus roots of scalar transcendental equations) and a direct scan of
the boundary determinants. Membership of the degenerate points 0 and 1 is
decided separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from .core import DEFAULT_CONFIG, BcType, NumericConfig, check_angle, wedge_geometry
from .errors import ContourThroughZero, DegenerateLambda, DomainError, SpectrumEmptyInRegion
from .rootfind import Rect, find_zeros

SOURCES = ("lattice", "eq00+", "eq00-", "eq01", "eq02", "eq03+", "eq03-", "determinant", "dedicated")
_SUP_SAMPLES = 65
_EXACT = 1e-12


@dataclass(frozen=True)
class WedgeConfig:
    theta: float
    d_minus: BcType
    d_plus: BcType

    def __post_init__(self):
        object.__setattr__(self, "theta", check_angle(self.theta))
        object.__setattr__(self, "d_minus", BcType.parse(self.d_minus))
        object.__setattr__(self, "d_plus", BcType.parse(self.d_plus))

    @property
    def case(self) -> Tuple[int, int]:
        """Boundary codes sorted so that d- <= d+ (the pencil is symmetric in the sides)."""
        a, b = int(self.d_minus), int(self.d_plus)
        return (a, b) if a <= b else (b, a)

    @property
    def parity_even(self) -> bool:
        return (int(self.d_minus) + int(self.d_plus)) % 2 == 0

    @property
    def m(self) -> int:
        return 1 if self.d_minus == self.d_plus else 2


@dataclass(frozen=True)
class Region:
    re_max: float = 3.0
    im_max: float = 5.0
    re_min: float = 0.0

    @classmethod
    def default(cls, config: NumericConfig = DEFAULT_CONFIG) -> "Region":
        return cls(float(config.scan_rect[0]), float(config.scan_rect[1]))


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    source: str
    refined: bool = True

    def __post_init__(self):
        if self.source not in SOURCES:
            raise DomainError(f"unknown eigenvalue source {self.source!r}")


@dataclass
class Spectrum:
    config: WedgeConfig
    region: Region
    eigenvalues: List[Eigenvalue] = field(default_factory=list)

    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.eigenvalues], dtype=complex)


@dataclass(frozen=True)
class PencilClassification:
    lambda1: Optional[complex]
    lambda2: Optional[complex]
    zero_is_eigenvalue: bool
    one_in_spectrum: bool
    mu: Optional[float]
    zero_in_condition_list: bool = False
    region_re_max: float = 3.0


# --------------------------------------------------------------------------
# bases


def _check_lambda(lam, radius, allow_one=False):
    for c in (-1.0, 0.0, 1.0):
        if allow_one and c == 1.0 and lam == 1:
            continue
        if abs(lam - c) < radius:
            raise DegenerateLambda(f"lambda={lam} lies within {radius} of {c:g}")


def _stokes_polar(lam, phi, xp=np):
    """Polar fields of the four planar Stokes solutions of degree lambda (r = 1).

    Returns a list of dicts with u_r, u_phi, p, eps_pp (eps_phiphi), eps_rp
    (eps_rphi) and the phi-derivatives of u_r, u_phi, p.
    """
    a, b = lam + 1, lam - 1
    out = []
    trig = [
        (xp.cos(a * phi), -a * xp.sin(a * phi), -a * a * xp.cos(a * phi), 0 * phi, 0 * phi),
        (xp.sin(a * phi), a * xp.cos(a * phi), -a * a * xp.sin(a * phi), 0 * phi, 0 * phi),
        (xp.cos(b * phi), -b * xp.sin(b * phi), -b * b * xp.cos(b * phi),
         -4 * lam * xp.sin(b * phi), -4 * lam * b * xp.cos(b * phi)),
        (xp.sin(b * phi), b * xp.cos(b * phi), -b * b * xp.sin(b * phi),
         4 * lam * xp.cos(b * phi), -4 * lam * b * xp.sin(b * phi)),
    ]
    for F, F1, F2, P, P1 in trig:
        out.append(dict(
            u_r=F1, u_phi=-a * F, p=P, eps_pp=-lam * F1, eps_rp=0.5 * (F2 - (lam * lam - 1) * F),
            du_r=F2, du_phi=-a * F1, dp=P1,
        ))
    return out


def stokes_basis(lam: complex, phi, config: NumericConfig = DEFAULT_CONFIG) -> dict:
    """Four planar Stokes solutions ``u = r^lam U(phi)``, ``p = r^(lam-1) P(phi)``.

    Stream functions ``r^(lam+1) F`` with ``F`` in cos/sin of ``(lam+1) phi`` and
    ``(lam-1) phi``; the second pair carries the harmonic pressure
    ``-+4 lam r^(lam-1) {sin, cos}((lam-1) phi)``. Returns Cartesian ``U``
    (shape ``(4, 2, ...)``), ``dU`` (phi-derivative), ``P`` and ``dP``.
    """
    _check_lambda(lam, config.exclusion_radius)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    U, dU, P, dP = [], [], [], []
    for e in _stokes_polar(complex(lam), phi):
        ux = e["u_r"] * c - e["u_phi"] * s
        uy = e["u_r"] * s + e["u_phi"] * c
        dux = e["du_r"] * c - e["u_r"] * s - e["du_phi"] * s - e["u_phi"] * c
        duy = e["du_r"] * s + e["u_r"] * c + e["du_phi"] * c - e["u_phi"] * s
        U.append(np.stack([ux, uy]))
        dU.append(np.stack([dux, duy]))
        P.append(e["p"])
        dP.append(e["dp"])
    return dict(U=np.array(U), dU=np.array(dU), P=np.array(P), dP=np.array(dP))


def laplace_basis(lam: complex, phi) -> dict:
    """Harmonic pair ``{cos(lam phi), sin(lam phi)}``; ``{1, phi}`` at lam = 0."""
    phi = np.asarray(phi, dtype=float)
    if lam == 0:
        v = np.stack([np.ones_like(phi), phi])
        d = np.stack([np.zeros_like(phi), np.ones_like(phi)])
        return dict(V=v, dV=d)
    lam = complex(lam)
    v = np.stack([np.cos(lam * phi), np.sin(lam * phi)])
    d = np.stack([-lam * np.sin(lam * phi), lam * np.cos(lam * phi)])
    if lam.imag == 0:
        v, d = v.real, d.real
    return dict(V=v, dV=d)


# --------------------------------------------------------------------------
# boundary determinants

_ROWS = {0: ("u_r", "u_phi"), 1: ("u_r", "nn"), 2: ("u_phi", "eps_rp"), 3: ("nn", "eps_rp")}


def _side_rows(lam, phi, d, xp):
    rows = []
    basis = _stokes_polar(lam, phi, xp)
    for key in _ROWS[d]:
        if key == "nn":
            rows.append([-e["p"] + 2 * e["eps_pp"] for e in basis])
        else:
            rows.append([e[key] for e in basis])
    return rows


def stokes_matrix(config: WedgeConfig, lam, xp=np):
    """4x4 boundary matrix (list of rows) of the planar Stokes problem."""
    h = config.theta / 2
    return _side_rows(lam, -h, int(config.d_minus), xp) + _side_rows(lam, h, int(config.d_plus), xp)


def _det_stokes_np(config: WedgeConfig, lam):
    lam = np.asarray(lam, dtype=complex)
    rows = stokes_matrix(config, lam)
    M = np.empty(lam.shape + (4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            M[..., i, j] = rows[i][j]
    return np.linalg.det(M)


def _det_stokes_mp(config: WedgeConfig, lam):
    rows = stokes_matrix(config, mpmath.mpc(lam), mpmath)
    return mpmath.det(mpmath.matrix(rows))


def _laplace_rows(lam, config: WedgeConfig, xp):
    h = config.theta / 2
    rows = []
    for phi, d in ((-h, int(config.d_minus)), (h, int(config.d_plus))):
        if d <= 1:
            rows.append([xp.cos(lam * phi), xp.sin(lam * phi)])
        else:
            rows.append([-lam * xp.sin(lam * phi), lam * xp.cos(lam * phi)])
    return rows


def _det_laplace_np(config: WedgeConfig, lam):
    lam = np.asarray(lam, dtype=complex)
    (a, b), (c, d) = _laplace_rows(lam, config, np)
    return a * d - b * c


def _det_laplace_mp(config: WedgeConfig, lam):
    (a, b), (c, d) = _laplace_rows(mpmath.mpc(lam), config, mpmath)
    return a * d - b * c


def _stokes_column_norms(config: WedgeConfig, lam):
    phi = np.linspace(-config.theta / 2, config.theta / 2, _SUP_SAMPLES)
    norms = []
    for e in _stokes_polar(complex(lam), phi):
        # |(u_r, u_phi)| equals the Cartesian velocity norm
        vel = np.sqrt(np.abs(e["u_r"]) ** 2 + np.abs(e["u_phi"]) ** 2)
        norms.append(max(vel.max(), np.abs(e["p"]).max()))
    return np.array(norms)


def _laplace_column_norms(config: WedgeConfig, lam):
    phi = np.linspace(-config.theta / 2, config.theta / 2, _SUP_SAMPLES)
    return np.array([np.abs(np.cos(lam * phi)).max(), np.abs(np.sin(lam * phi)).max()])


def pencil_determinant(config: WedgeConfig, lam: complex, normalized: bool = True,
                       numeric: NumericConfig = DEFAULT_CONFIG) -> Tuple[complex, complex]:
    """``(det_stokes, det_laplace)`` at ``lam``.

    With ``normalized`` each basis column is divided by its sup-norm on the
    angular interval, making absolute thresholds meaningful. ``lam = 1`` is
    accepted and uses the explicit degree-one basis (the pressure-only element
    ``(U, P) = (0, 4)`` is the limit of the fourth column); other points in
    the exclusion disks raise ``DegenerateLambda``.
    """
    lam = complex(lam)
    _check_lambda(lam, numeric.exclusion_radius, allow_one=True)
    ds = complex(_det_stokes_np(config, np.array([lam]))[0])
    dl = complex(_det_laplace_np(config, np.array([lam]))[0])
    if normalized:
        ds /= float(np.prod(_stokes_column_norms(config, lam)))
        dl /= float(np.prod(_laplace_column_norms(config, lam)))
    return ds, dl


# --------------------------------------------------------------------------
# closed-form catalogue


def _eq(name, theta, xp):
    st, s2 = math.sin(theta), math.sin(2 * theta)
    if name == "eq00+":
        return lambda z: z * st + xp.sin(z * theta)
    if name == "eq00-":
        return lambda z: z * st - xp.sin(z * theta)
    if name == "eq01":
        return lambda z: z * s2 + xp.sin(2 * z * theta)
    if name == "eq02":
        return lambda z: z * s2 - xp.sin(2 * z * theta)
    if name == "eq03+":
        return lambda z: z * st + xp.cos(z * theta)
    if name == "eq03-":
        return lambda z: z * st - xp.cos(z * theta)
    raise KeyError(name)


# lattice families as (step multiplier, parity, shifts):
#   value = k * pi / (q * theta) + shift, k restricted to odd integers if parity == "odd"
_FULL = ((1, "all", (0.0,)),)
_ODD_HALF = ((2, "odd", (0.0,)),)
_CATALOGUE = {
    (0, 0): (_FULL, ("eq00+", "eq00-")),
    (0, 1): (_FULL, ("eq01",)),
    (0, 2): (_ODD_HALF, ("eq02",)),
    (0, 3): (_ODD_HALF, ("eq03+", "eq03-")),
    (1, 1): (_FULL + ((1, "all", (1.0, -1.0)),), ()),
    (1, 2): (_ODD_HALF + ((2, "odd", (1.0, -1.0)),), ()),
    (1, 3): (_ODD_HALF, ("eq02",)),
    (2, 2): (_FULL + ((1, "all", (1.0, -1.0)),), ()),
    (2, 3): (_FULL, ("eq01",)),
    (3, 3): (_FULL, ("eq00+", "eq00-")),
}
# cases whose lattice the source literature lists with every j rather than odd j only
_HALF_LATTICE_CASES = {(0, 2), (0, 3), (1, 2), (1, 3)}


def catalogue_entry(config: WedgeConfig, literal: bool = False):
    families, eqs = _CATALOGUE[config.case]
    if literal and config.case in _HALF_LATTICE_CASES:
        families = ((2, "all", (0.0,)),) + tuple(f for f in families if f[2] != (0.0,))
    return families, eqs


def _lattice_values(theta, families, re_max):
    vals = []
    for q, parity, shifts in families:
        step = math.pi / (q * theta)
        for shift in shifts:
            kmin = int(math.floor((0.0 - shift) / step)) - 1
            kmax = int(math.ceil((re_max - shift) / step)) + 1
            for k in range(kmin, kmax + 1):
                if parity == "odd" and k % 2 == 0:
                    continue
                vals.append(k * step + shift)
    return vals


def _scan_rect(region: Region, numeric: NumericConfig, attempt: int) -> Rect:
    wiggle = 0.0123 * attempt
    return Rect(max(region.re_min, numeric.exclusion_radius), region.re_max + 0.05 + wiggle,
                -0.5 - wiggle, region.im_max + 0.05 + wiggle)


def _zeros_in_region(f_np, f_mp, region, numeric):
    last = None
    for attempt in range(4):
        try:
            return find_zeros(f_np, _scan_rect(region, numeric, attempt), f_mp=f_mp,
                              newton_tol=numeric.newton_tol)
        except ContourThroughZero as exc:
            last = exc
    raise last


def in_region(lam: complex, region: Region, numeric: NumericConfig = DEFAULT_CONFIG,
              disks: bool = True) -> bool:
    tol = 1e-9
    if not (region.re_min < lam.real <= region.re_max + tol and -tol <= lam.imag <= region.im_max + tol):
        return False
    if disks:
        if lam.real < numeric.exclusion_radius:
            return False
        return all(abs(lam - c) >= numeric.exclusion_radius for c in (-1.0, 0.0, 1.0))
    return abs(lam) > _EXACT and abs(lam - 1) > _EXACT


def _snap_real(z: complex, scale: float = 1e-10) -> complex:
    if abs(z.imag) < scale * max(1.0, abs(z)):
        return complex(z.real, 0.0)
    return z


def _merge(eigs: List[Eigenvalue], tol: float) -> List[Eigenvalue]:
    rank = {s: i for i, s in enumerate(SOURCES)}
    eigs = sorted(eigs, key=lambda e: (e.value.real, e.value.imag, rank[e.source]))
    out: List[Eigenvalue] = []
    for e in eigs:
        dup = next((k for k, o in enumerate(out) if abs(o.value - e.value) < tol), None)
        if dup is None:
            out.append(e)
        elif rank[e.source] < rank[out[dup].source]:
            out[dup] = e
    out.sort(key=lambda e: (round(e.value.real, 12), e.value.imag != 0, e.value.imag))
    return out


def closed_form_spectrum(config: WedgeConfig, region: Optional[Region] = None,
                         numeric: NumericConfig = DEFAULT_CONFIG, disks: bool = True,
                         literal: bool = False) -> Spectrum:
    """Catalogue spectrum: lattice families plus roots of the scalar equations.

    ``disks`` drops everything inside the exclusion disks (for comparison with
    the determinant scan); otherwise only the exact points 0 and 1 are
    removed. ``literal`` restores the every-j half-step lattices of the source
    catalogue, which the boundary determinant does not support.
    """
    region = region or Region.default(numeric)
    families, eqs = catalogue_entry(config, literal)
    eigs = [Eigenvalue(complex(v), "lattice") for v in _lattice_values(config.theta, families, region.re_max)]
    for name in eqs:
        f_np = _eq(name, config.theta, np)
        f_mp = _eq(name, config.theta, mpmath)
        for z in _zeros_in_region(f_np, f_mp, region, numeric):
            eigs.append(Eigenvalue(_snap_real(z.z), name))
    eigs = [e for e in eigs if in_region(e.value, region, numeric, disks)]
    return Spectrum(config, region, _merge(eigs, numeric.merge_tol))


def scan_spectrum(config: WedgeConfig, region: Optional[Region] = None,
                  numeric: NumericConfig = DEFAULT_CONFIG) -> Spectrum:
    """Zeros of the Stokes and Laplace boundary determinants in the region."""
    region = region or Region.default(numeric)
    eigs = []
    for f_np, f_mp in ((_det_stokes_np, _det_stokes_mp), (_det_laplace_np, _det_laplace_mp)):
        zeros = _zeros_in_region(lambda z, f=f_np: f(config, z), lambda z, f=f_mp: f(config, z),
                                 region, numeric)
        eigs.extend(Eigenvalue(_snap_real(z.z), "determinant") for z in zeros)
    eigs = [e for e in eigs if in_region(e.value, region, numeric, True)]
    return Spectrum(config, region, _merge(eigs, numeric.merge_tol))


# --------------------------------------------------------------------------
# the degenerate points 0 and 1


def one_in_spectrum(config: WedgeConfig) -> bool:
    """Catalogue membership of lambda = 1: a lattice member or a root of a listed equation."""
    families, eqs = catalogue_entry(config)
    if any(abs(v - 1) < _EXACT for v in _lattice_values(config.theta, families, 2.0)):
        return True
    return any(abs(_eq(name, config.theta, np)(1.0)) < _EXACT for name in eqs)


def one_in_spectrum_dedicated(config: WedgeConfig, tol: float = 1e-10) -> bool:
    """lambda = 1 membership from the degree-one boundary determinants."""
    ds, dl = pencil_determinant(config, 1.0)
    return abs(ds) <= tol or abs(dl) <= tol


def zero_condition_list(config: WedgeConfig) -> bool:
    """The published three-condition test for lambda = 0."""
    lo, hi = config.case
    th = config.theta

    def at(*angles):
        return any(abs(th - a) < 1e-12 for a in angles)

    if hi == 3 and lo >= 1:
        return True
    if 1 <= lo == hi <= 2 and at(math.pi, 2 * math.pi):
        return True
    if (lo, hi) == (1, 2) and at(math.pi / 2, 1.5 * math.pi):
        return True
    return False


def zero_eigenvector_dimension(config: WedgeConfig, tol: float = 1e-10) -> int:
    """Dimension of the constant vectors C with (U, P) = (C, 0) meeting both boundary conditions."""
    geo = wedge_geometry(config.theta)
    rows = []
    for n, d in ((geo.n_minus, int(config.d_minus)), (geo.n_plus, int(config.d_plus))):
        n = np.array(n)
        if d == 0:
            rows.append(np.eye(3))
        elif d == 1:
            rows.append(np.eye(3) - np.outer(n, n))
        elif d == 2:
            rows.append(n[None, :])
    if not rows:
        return 3
    sv = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return 3 - int(np.sum(sv > tol))


# --------------------------------------------------------------------------
# classification


def _pick(eigs, lower):
    cands = [e.value for e in eigs if e.value.real > lower + _EXACT]
    if not cands:
        return None
    return min(cands, key=lambda z: (round(z.real, 12), z.imag != 0, z.imag))


def classify(config: WedgeConfig, numeric: NumericConfig = DEFAULT_CONFIG) -> PencilClassification:
    """lambda_1, lambda_2, mu and the membership flags of 0 and 1.

    The region is enlarged once to Re <= 5 when lambda_1 or lambda_2 is missing.
    """
    one = one_in_spectrum(config)
    region = Region.default(numeric)
    for re_max in (region.re_max, max(region.re_max, 5.0)):
        reg = Region(re_max, region.im_max)
        spec = closed_form_spectrum(config, reg, numeric, disks=False)
        eigs = list(spec.eigenvalues)
        if one:
            eigs.append(Eigenvalue(1 + 0j, "lattice"))
        l1, l2 = _pick(eigs, 0.0), _pick(eigs, 1.0)
        if l1 is not None and l2 is not None:
            break
    else:
        raise SpectrumEmptyInRegion(
            f"lambda_1 or lambda_2 not found with Re <= {re_max} for {config}")
    if config.parity_even and config.theta < math.pi / config.m:
        mu = l2.real
    else:
        mu = l1.real
    return PencilClassification(
        lambda1=l1,
        lambda2=l2,
        zero_is_eigenvalue=zero_eigenvector_dimension(config) > 0,
        one_in_spectrum=one,
        mu=float(mu),
        zero_in_condition_list=zero_condition_list(config),
        region_re_max=re_max,
    )


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    lambda1: Optional[complex]
    mu: Optional[float]
    lower_bound: float


def sweep(d_minus, d_plus, thetas, numeric: NumericConfig = DEFAULT_CONFIG) -> List[SweepPoint]:
    """lambda_1 and mu over an angle grid.

    When the enlarged region holds no admissible eigenvalue, the point records
    ``None`` and ``lower_bound`` = 5 (every eigenvalue has larger real part).
    """
    out = []
    for th in thetas:
        cfg = WedgeConfig(float(th), d_minus, d_plus)
        try:
            c = classify(cfg, numeric)
            out.append(SweepPoint(cfg.theta, c.lambda1, c.mu, c.lambda1.real))
        except SpectrumEmptyInRegion:
            spec = closed_form_spectrum(cfg, Region(5.0, numeric.scan_rect[1]), numeric, disks=False)
            l1 = _pick(spec.eigenvalues + ([Eigenvalue(1 + 0j, "lattice")] if one_in_spectrum(cfg) else []), 0.0)
            out.append(SweepPoint(cfg.theta, l1, None, l1.real if l1 is not None else 5.0))
    return out
