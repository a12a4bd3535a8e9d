"""Peak geometry: cross-sections and the closed-form constants of the eigenvalue law.

A peak of sharpness order q in R^d narrows like x1^q * omega, where omega is a
bounded Lipschitz cross-section in R^(d-1).  Everything the asymptotic law needs
from the geometry is collected here: the perimeter-to-area ratio of the
cross-section, the Hardy constant of the effective radial operator, and the
exponents of the power law.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


def _polygon_signed_area(vertices):
    n = len(vertices)
    s = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _polygon_centroid(vertices):
    # area centroid via the standard shoelace moments
    n = len(vertices)
    a = _polygon_signed_area(vertices)
    cx = cy = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return cx / (6.0 * a), cy / (6.0 * a)


def _segments_properly_intersect(p, q, r, s):
    # true if segment pq crosses rs away from shared endpoints
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 0.0:
            return 1
        if v < 0.0:
            return -1
        return 0

    o1, o2 = orient(p, q, r), orient(p, q, s)
    o3, o4 = orient(r, s, p), orient(r, s, q)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def _polygon_is_simple(vertices):
    n = len(vertices)
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share a vertex
            if _segments_properly_intersect(*edges[i], *edges[j]):
                return False
    return True


def _ball_measures(radius, dim):
    # dim-dimensional ball: volume and boundary surface measure
    vol_unit = math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)
    volume = vol_unit * radius**dim
    surface = dim * vol_unit * radius ** (dim - 1)
    return volume, surface


@dataclass(frozen=True)
class CrossSection:
    """Cross-section omega of a peak, with its measures.

    ``area`` is the (d-1)-measure of omega, ``perimeter`` the (d-2)-measure of
    its boundary (counting measure 2 for an interval), and ``circumradius`` the
    supremum of |t| over omega.  Intervals are stored centered at the origin
    and polygons are shifted so their centroid sits at the origin, which makes
    the circumradius the meaningful constant for the mapped-peak estimates.
    """

    kind: str
    area: float
    perimeter: float
    circumradius: float
    length: float | None = None
    radius: float | None = None
    dim: int | None = None
    vertices: tuple[tuple[float, float], ...] | None = None

    @classmethod
    def interval(cls, length: float) -> "CrossSection":
        if not length > 0.0:
            raise ValueError(f"interval length must be positive, got {length}")
        return cls(kind="interval", area=length, perimeter=2.0,
                   circumradius=0.5 * length, length=length)

    @classmethod
    def ball(cls, radius: float, dim: int) -> "CrossSection":
        if not radius > 0.0:
            raise ValueError(f"ball radius must be positive, got {radius}")
        if dim < 1:
            raise ValueError(f"ball dimension must be >= 1, got {dim}")
        volume, surface = _ball_measures(radius, dim)
        return cls(kind="ball", area=volume, perimeter=surface,
                   circumradius=radius, radius=radius, dim=dim)

    @classmethod
    def polygon(cls, vertices) -> "CrossSection":
        verts = [(float(x), float(y)) for x, y in vertices]
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        area = _polygon_signed_area(verts)
        if area < 0.0:  # store counterclockwise
            verts = verts[::-1]
            area = -area
        if not area > 0.0:
            raise ValueError("degenerate polygon: zero area")
        if not _polygon_is_simple(verts):
            raise ValueError("polygon is self-intersecting")
        cx, cy = _polygon_centroid(verts)
        verts = tuple((x - cx, y - cy) for x, y in verts)
        perim = 0.0
        for i in range(len(verts)):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % len(verts)]
            perim += math.hypot(x1 - x0, y1 - y0)
        circum = max(math.hypot(x, y) for x, y in verts)
        return cls(kind="polygon", area=area, perimeter=perim,
                   circumradius=circum, vertices=verts)

    @classmethod
    def from_json(cls, obj) -> "CrossSection":
        """Parse ``{"kind": ...}`` (dict or JSON string) into a cross-section."""
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind = obj.get("kind")
        if kind == "interval":
            return cls.interval(float(obj["length"]))
        if kind == "ball":
            return cls.ball(float(obj["radius"]), int(obj["dim"]))
        if kind == "polygon":
            return cls.polygon(obj["vertices"])
        raise ValueError(f"unknown cross-section kind: {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "interval":
            return {"kind": "interval", "length": self.length}
        if self.kind == "ball":
            return {"kind": "ball", "radius": self.radius, "dim": self.dim}
        return {"kind": "polygon", "vertices": [list(v) for v in self.vertices]}

    def scaled(self, t: float) -> "CrossSection":
        """Similarity copy scaled by t > 0."""
        if not t > 0.0:
            raise ValueError("scale factor must be positive")
        if self.kind == "interval":
            return CrossSection.interval(t * self.length)
        if self.kind == "ball":
            return CrossSection.ball(t * self.radius, self.dim)
        return CrossSection.polygon([(t * x, t * y) for x, y in self.vertices])


def ratio_A(cross_section: CrossSection) -> float:
    """Perimeter-to-area ratio of the cross-section (exact for balls)."""
    if cross_section.kind == "ball":
        return cross_section.dim / cross_section.radius
    if cross_section.kind == "interval":
        return 2.0 / cross_section.length
    if not cross_section.area > 0.0:
        raise ValueError("degenerate cross-section: zero area")
    return cross_section.perimeter / cross_section.area


def hardy_constant(q: float, d: int) -> float:
    """Coefficient of the 1/s^2 term of the effective radial operator.

    Equals (q^2 (d-1)^2 - 2 q (d-1)) / 4 and is never below -1/4, which is
    exactly the constant of the one-dimensional Hardy inequality.
    """
    _validate_q_d(q, d)
    m = q * (d - 1)
    return (m * m - 2.0 * m) / 4.0


def exponents(q: float) -> tuple[float, float]:
    """Power of alpha in the leading term and in the remainder bound."""
    if not 1.0 < q < 2.0:
        raise ValueError(f"sharpness order q must lie in (1, 2), got {q}")
    p = 2.0 / (2.0 - q)
    return p, p - (q - 1.0)


def predicted_coefficient(constants: "TheoryConstants", lambda_L1_j: float) -> float:
    """Leading coefficient A_omega^p * lambda_j(L_1) of the eigenvalue law."""
    if not lambda_L1_j < 0.0:
        raise ValueError(
            f"effective-operator eigenvalue must be negative, got {lambda_L1_j}")
    return constants.a_omega**constants.p * lambda_L1_j


def _validate_q_d(q: float, d: int) -> None:
    if not 1.0 < q < 2.0:
        raise ValueError(f"sharpness order q must lie in (1, 2), got {q}")
    if int(d) != d or d < 2:
        raise ValueError(f"ambient dimension d must be an integer >= 2, got {d}")


@dataclass(frozen=True)
class TheoryConstants:
    """Closed-form constants entering the asymptotic law for one geometry."""

    a_omega: float
    hardy: float
    p: float
    remainder_exponent: float

    def __post_init__(self):
        if not self.a_omega > 0.0:
            raise ValueError("A_omega must be positive")
        if self.hardy < -0.25:
            raise ValueError("Hardy constant below -1/4 is impossible here")
        if not self.p > 2.0:
            raise ValueError("leading exponent must exceed 2")


@dataclass(frozen=True)
class PeakGeometry:
    """Finite peak of sharpness q with a given cross-section.

    ``a`` is the axial length of the finite peak and ``epsilon`` the transverse
    scale multiplying x1^q * omega (1 for the physical domain).
    """

    q: float
    d: int
    cross_section: CrossSection
    a: float
    epsilon: float = 1.0

    def __post_init__(self):
        _validate_q_d(self.q, self.d)
        if not self.a > 0.0:
            raise ValueError(f"peak length a must be positive, got {self.a}")
        if not self.epsilon > 0.0:
            raise ValueError(f"transverse scale must be positive, got {self.epsilon}")

    def constants(self) -> TheoryConstants:
        p, rem = exponents(self.q)
        return TheoryConstants(
            a_omega=ratio_A(self.cross_section),
            hardy=hardy_constant(self.q, self.d),
            p=p,
            remainder_exponent=rem,
        )
