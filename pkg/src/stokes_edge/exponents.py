"""Exponent bundles of the pointwise Green-matrix estimates in dihedra and cones.

Nothing here evaluates a dihedron or cone Green matrix; the functions only
assemble the exponents that enter the estimates from the edge pencil data
(``mu``, ``Re lambda_1``, whether 0 is an eigenvalue) and the user-supplied
strip ``Lambda_- < Re lambda < Lambda_+`` of the vertex pencil.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .core import DEFAULT_CONFIG, MultiIndex, NumericConfig
from .errors import DomainError, StokesEdgeError
from .pencil import PencilClassification, WedgeConfig, classify

REGIMES = ("x_dominant", "xi_dominant")


def _d4(i: int) -> int:
    if i not in (1, 2, 3, 4):
        raise DomainError(f"row/column index must be 1..4, got {i}")
    return 1 if i == 4 else 0


def _order(a) -> int:
    if isinstance(a, int):
        if a < 0:
            raise DomainError("derivative order must be non-negative")
        return a
    return MultiIndex.of(a).order


@dataclass(frozen=True)
class EdgeExponentBundle:
    mu: float
    lambda1_re: float
    zero_is_eigenvalue: bool
    epsilon: float = 0.01

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")
        if not self.mu > 0:
            raise DomainError("mu must be positive")

    @classmethod
    def from_classification(cls, c: PencilClassification, epsilon: float = 0.01) -> "EdgeExponentBundle":
        return cls(float(c.mu), float(c.lambda1.real), bool(c.zero_is_eigenvalue), epsilon)


def sigma_exponent(bundle: EdgeExponentBundle, order, row: int) -> float:
    """Power of ``r/|x - xi|`` for derivatives of order ``|alpha|`` in row ``i``.

    ``min(0, mu - |alpha| - delta_i4 - eps)``, replaced by
    ``Re lambda_1 - |alpha| - delta_i4 - eps`` when 0 is not an eigenvalue
    and ``|alpha| < Re lambda_1 - delta_i4``.
    """
    k, d = _order(order), _d4(row)
    if not bundle.zero_is_eigenvalue and k < bundle.lambda1_re - d:
        return bundle.lambda1_re - k - d - bundle.epsilon
    return min(0.0, bundle.mu - k - d - bundle.epsilon)


def sigma_table(bundle: EdgeExponentBundle, rows=(1, 4), max_order: int = 2) -> Dict[str, float]:
    return {f"i={i},|alpha|={k}": sigma_exponent(bundle, k, i) for i in rows for k in range(max_order + 1)}


@dataclass(frozen=True)
class EstimateTemplate:
    """Exponents of one pointwise estimate.

    For the dihedron and near-field case ``prefactor_exponent`` is the power
    of ``|x - xi|``. For the far field it is the sum of ``x_norm_exponent``
    (power of ``|x|``) and ``xi_norm_exponent`` (power of ``|xi|``). The
    factor lists hold ``(edge name, power)`` of ``r(x)/|x - xi|`` or
    ``r_k(x)/|x|`` (resp. for ``xi``).
    """

    prefactor_exponent: float
    x_factors: Tuple[Tuple[str, float], ...] = ()
    xi_factors: Tuple[Tuple[str, float], ...] = ()
    x_norm_exponent: Optional[float] = None
    xi_norm_exponent: Optional[float] = None
    regime: str = "dihedron"

    def as_dict(self) -> dict:
        out = {
            "regime": self.regime,
            "prefactor_exponent": self.prefactor_exponent,
            "x_factors": [[n, e] for n, e in self.x_factors],
            "xi_factors": [[n, e] for n, e in self.xi_factors],
        }
        if self.x_norm_exponent is not None:
            out["x_norm_exponent"] = self.x_norm_exponent
            out["xi_norm_exponent"] = self.xi_norm_exponent
        return out


def total_order(i: int, j: int) -> int:
    """``T = 1 + delta_i4 + delta_j4``."""
    return 1 + _d4(i) + _d4(j)


def dihedron_estimate(bundle: EdgeExponentBundle, i: int, j: int, alpha=0, beta=0,
                      sigma_t: int = 0, tau_t: int = 0, edge: str = "edge") -> EstimateTemplate:
    """``|x-xi|^(-T-|alpha|-|beta|-sigma-tau) (|x'|/|x-xi|)^s_i (|xi'|/|x-xi|)^s_j``.

    ``alpha``, ``beta`` are derivative orders in the directions across the
    edge, ``sigma_t``, ``tau_t`` along it.
    """
    a, b = _order(alpha), _order(beta)
    if sigma_t < 0 or tau_t < 0:
        raise DomainError("derivative orders must be non-negative")
    pre = -total_order(i, j) - a - b - sigma_t - tau_t
    return EstimateTemplate(
        float(pre),
        ((edge, sigma_exponent(bundle, a, i)),),
        ((edge, sigma_exponent(bundle, b, j)),),
    )


def cone_near_scaling(i: int, j: int, t: float) -> float:
    """Factor ``t^(-T)`` of ``G_ij(t x, t xi)`` relative to ``G_ij(x, xi)``."""
    if not t > 0:
        raise DomainError("t must be positive")
    return float(t) ** (-total_order(i, j))


@dataclass(frozen=True)
class ConeEdge:
    name: str
    theta: float
    d_plus: int
    d_minus: int

    def wedge(self) -> WedgeConfig:
        return WedgeConfig(self.theta, self.d_minus, self.d_plus)


@dataclass(frozen=True)
class ConeDescriptor:
    edges: Tuple[ConeEdge, ...]
    lambda_minus: float
    lambda_plus: float
    epsilon: float = 0.01
    lambda_provenance: str = ""

    def __post_init__(self):
        if not self.lambda_minus < self.lambda_plus:
            raise DomainError("lambda_minus must be smaller than lambda_plus")
        if not 0 < self.epsilon <= 0.1:
            raise DomainError("epsilon must lie in (0, 0.1]")
        edges = tuple(e if isinstance(e, ConeEdge) else ConeEdge(*e) for e in self.edges)
        names = [e.name for e in edges]
        if len(set(names)) != len(names):
            raise DomainError("edge names must be unique")
        for e in edges:
            e.wedge()
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_dict(cls, doc: dict) -> "ConeDescriptor":
        edges = tuple(ConeEdge(e["name"], float(e["theta"]), int(e["d_plus"]), int(e["d_minus"]))
                      for e in doc["edges"])
        return cls(edges, float(doc["lambda_minus"]), float(doc["lambda_plus"]),
                   float(doc.get("epsilon", 0.01)), str(doc.get("lambda_provenance", "")))


def edge_bundles(cone: ConeDescriptor, numeric: NumericConfig = DEFAULT_CONFIG):
    """Classification and bundle per edge; failures are returned as exceptions."""
    out = {}
    for e in cone.edges:
        try:
            c = classify(e.wedge(), numeric)
            out[e.name] = (c, EdgeExponentBundle.from_classification(c, cone.epsilon))
        except StokesEdgeError as exc:
            out[e.name] = exc
    return out


def cone_far_estimate(cone: ConeDescriptor, i: int, j: int, alpha=0, gamma=0,
                      regime: str = "x_dominant", radial: bool = False,
                      bundles: Optional[dict] = None) -> EstimateTemplate:
    """Far-field template for ``|x| > 2|xi|`` (x_dominant) or ``|xi| > 2|x|``.

    ``radial`` gives the bound for the derivative along the ray through the
    vertex: the ``|x|`` power drops by one and ``alpha = gamma = 0``.
    """
    if regime not in REGIMES:
        raise DomainError(f"regime must be one of {REGIMES}")
    a, g = _order(alpha), _order(gamma)
    if radial:
        a = g = 0
    di, dj, eps = _d4(i), _d4(j), cone.epsilon
    if regime == "x_dominant":
        lam, s = cone.lambda_minus, 1.0
    else:
        lam, s = cone.lambda_plus, -1.0
    x_exp = lam - di - a + s * eps
    xi_exp = -lam - 1 - dj - g - s * eps
    if radial:
        x_exp -= 1
    if bundles is None:
        bundles = edge_bundles(cone)
    xf, xif = [], []
    for e in cone.edges:
        b = bundles[e.name]
        if isinstance(b, Exception):
            continue
        xf.append((e.name, sigma_exponent(b[1], a, i)))
        xif.append((e.name, sigma_exponent(b[1], g, j)))
    return EstimateTemplate(float(x_exp + xi_exp), tuple(xf), tuple(xif), float(x_exp), float(xi_exp),
                            regime + ("_radial" if radial else ""))


def _c(z) -> Optional[List[float]]:
    return None if z is None else [float(z.real), float(z.imag)]


def cone_report(cone: ConeDescriptor, numeric: NumericConfig = DEFAULT_CONFIG) -> dict:
    """Per-edge classification and sigma tables plus near- and far-field templates."""
    bundles = edge_bundles(cone, numeric)
    edges = []
    for e in cone.edges:
        b = bundles[e.name]
        entry = {"name": e.name, "theta": e.theta, "d_minus": e.d_minus, "d_plus": e.d_plus}
        if isinstance(b, Exception):
            entry.update(status="failed", error=f"{type(b).__name__}: {b}")
        else:
            c, bundle = b
            entry.update(
                status="ok",
                lambda1=_c(c.lambda1),
                lambda2=_c(c.lambda2),
                mu=c.mu,
                zero_is_eigenvalue=c.zero_is_eigenvalue,
                one_in_spectrum=c.one_in_spectrum,
                sigma=sigma_table(bundle),
            )
        edges.append(entry)
    near, far = {}, {}
    for i in range(1, 5):
        for j in range(1, 5):
            key = f"{i},{j}"
            near[key] = {"scaling_exponent": -total_order(i, j)}
            far[key] = {
                r: cone_far_estimate(cone, i, j, regime=r, bundles=bundles).as_dict() for r in REGIMES
            }
    return {
        "epsilon": cone.epsilon,
        "lambda_minus": cone.lambda_minus,
        "lambda_plus": cone.lambda_plus,
        "lambda_provenance": cone.lambda_provenance,
        "edges": edges,
        "near_field": near,
        "far_field": far,
    }


def format_report(report: dict) -> str:
    """Plain-text table of a cone report."""
    lines = [
        f"Lambda- = {report['lambda_minus']:.6g}  Lambda+ = {report['lambda_plus']:.6g}  "
        f"eps = {report['epsilon']:.3g}",
    ]
    if report.get("lambda_provenance"):
        lines.append(f"strip bounds from: {report['lambda_provenance']}")
    if report["edges"]:
        lines.append(f"{'edge':<12}{'theta':>10}{'d-':>4}{'d+':>4}{'Re l1':>12}{'Re l2':>12}{'mu':>12}  zero")
    for e in report["edges"]:
        if e["status"] != "ok":
            lines.append(f"{e['name']:<12}{e['theta']:>10.6f}{e['d_minus']:>4}{e['d_plus']:>4}  FAILED {e['error']}")
            continue
        l2 = e["lambda2"][0] if e["lambda2"] else math.nan
        lines.append(
            f"{e['name']:<12}{e['theta']:>10.6f}{e['d_minus']:>4}{e['d_plus']:>4}"
            f"{e['lambda1'][0]:>12.8f}{l2:>12.8f}{e['mu']:>12.8f}  {'yes' if e['zero_is_eigenvalue'] else 'no'}"
        )
        sig = "  ".join(f"{k}: {v:+.4f}" for k, v in e["sigma"].items())
        lines.append(f"    sigma  {sig}")
    lines.append("far field (|x| exponent, |xi| exponent):")
    for key, regs in report["far_field"].items():
        xd, xid = regs["x_dominant"], regs["xi_dominant"]
        lines.append(
            f"  G[{key}]  |x|>2|xi|: ({xd['x_norm_exponent']:+.4f}, {xd['xi_norm_exponent']:+.4f})"
            f"   |xi|>2|x|: ({xid['x_norm_exponent']:+.4f}, {xid['xi_norm_exponent']:+.4f})"
        )
    return "\n".join(lines)
