"""
Planar data model for doubly connected domains and real-affine maps.

A domain is stored by its two complement components: the bounded one
(a Jordan polygon, a segment or a single point) and the unbounded one
(the exterior of a Jordan polygon, one or two rays, or the point at
infinity alone). All coordinates are complex numbers.
"""

import math
from dataclasses import dataclass
from logging import getLogger
from typing import List, Optional, Sequence, Tuple

import numpy as np
from matplotlib.path import Path

from .const import (
    BOUNDED_KEY,
    CANONICAL_KEY,
    DEFAULT_THETA_SAMPLES,
    INFINITY_KEY,
    KIND_KEY,
    KIND_POLYGONAL,
    PKG_NAME,
    POLYGON_KEY,
    RAY_DIR_KEY,
    RAY_FROM_KEY,
    RAYS_KEY,
    UNBOUNDED_KEY,
)
from .exceptions import (
    DegenerateDomainError,
    InvalidInputError,
    UnsupportedGeometryError,
)

_LOGGER = getLogger(PKG_NAME)

POLYGON = "polygon"
SEGMENT = "segment"
POINT = "point"
EXTERIOR = "exterior"
RAYS = "rays"
INFINITY = "infinity"

# point-edge pairs per distance batch
DISTANCE_CHUNK = 2**20


def as_complex(points) -> np.ndarray:
    """
    Convert [[x, y], ...] pairs or complex numbers to a 1-D complex array.

    :param Sequence points: coordinates
    :return numpy.ndarray: complex coordinates
    """
    arr = np.asarray(points)
    if np.iscomplexobj(arr):
        return arr.astype(complex).ravel()
    arr = arr.astype(float)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim <= 1:
        return arr.astype(complex).ravel()
    raise InvalidInputError(f"Cannot interpret coordinates of shape {arr.shape}")


def _cross(u, v):
    return np.imag(np.conj(u) * v)


def point_segment_distance(p, a, b) -> np.ndarray:
    """
    Distances between points and segments, broadcast over the inputs.

    :param numpy.ndarray p: points
    :param numpy.ndarray a: segment starts
    :param numpy.ndarray b: segment ends
    :return numpy.ndarray: distances
    """
    d = b - a
    dd = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, np.real((p - a) * np.conj(d)) / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p - (a + t * d))


def point_ray_distance(p, origin, direction) -> np.ndarray:
    """
    Distances between points and a ray with unit direction.

    :param numpy.ndarray p: points
    :param complex origin: ray origin
    :param complex direction: unit direction
    :return numpy.ndarray: distances
    """
    t = np.maximum(np.real((p - origin) * np.conj(direction)), 0.0)
    return np.abs(p - (origin + t * direction))


def segments_intersect(a1, b1, a2, b2, tol=1e-12) -> np.ndarray:
    """
    Closed-segment intersection test, broadcast over the inputs.

    Collinear overlapping and touching segments count as intersecting.
    """
    scale = np.maximum(np.maximum(np.abs(b1 - a1), np.abs(b2 - a2)), 1.0)
    eps = tol * scale**2
    o1 = _cross(b1 - a1, a2 - a1)
    o2 = _cross(b1 - a1, b2 - a1)
    o3 = _cross(b2 - a2, a1 - a2)
    o4 = _cross(b2 - a2, b1 - a2)
    proper = (o1 * o2 < -eps * eps) & (o3 * o4 < -eps * eps)

    def _on(p, q, r):
        # r on segment pq, given collinearity
        return (
            (np.minimum(p.real, q.real) - eps <= r.real)
            & (r.real <= np.maximum(p.real, q.real) + eps)
            & (np.minimum(p.imag, q.imag) - eps <= r.imag)
            & (r.imag <= np.maximum(p.imag, q.imag) + eps)
        )

    touch = (
        ((np.abs(o1) <= eps) & _on(a1, b1, a2))
        | ((np.abs(o2) <= eps) & _on(a1, b1, b2))
        | ((np.abs(o3) <= eps) & _on(a2, b2, a1))
        | ((np.abs(o4) <= eps) & _on(a2, b2, b1))
    )
    return proper | touch


def convex_hull(points) -> np.ndarray:
    """
    Convex hull by the monotone chain scan, counter-clockwise, no repeats.

    Collinear input yields its two extreme points; a single point yields itself.

    :param Sequence points: complex coordinates
    :return numpy.ndarray: hull vertices
    """
    pts = sorted(set((float(z.real), float(z.imag)) for z in as_complex(points)))
    if len(pts) <= 2:
        return np.array([complex(*p) for p in pts])

    def orientation(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) > 1 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) > 1 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return np.array([complex(*p) for p in hull])


@dataclass(frozen=True)
class Ray:
    """Half-line {origin + t·direction: t ≥ 0}; direction is normalized."""

    origin: complex
    direction: complex

    def __post_init__(self):
        d = complex(self.direction)
        if abs(d) == 0 or not np.isfinite(abs(d)):
            raise InvalidInputError(f"Ray direction must be nonzero, got {d}")
        object.__setattr__(self, "origin", complex(self.origin))
        object.__setattr__(self, "direction", d / abs(d))

    def segment(self, length) -> Tuple[complex, complex]:
        """Finite piece of the ray starting at its origin."""
        return self.origin, self.origin + length * self.direction

    def to_dict(self):
        return {
            RAY_FROM_KEY: [self.origin.real, self.origin.imag],
            RAY_DIR_KEY: [self.direction.real, self.direction.imag],
        }


class BoundaryComponent:
    """
    Bounded closed set: Jordan polygon, segment or point.

    :param Sequence vertices: complex vertices (or [x, y] pairs)
    :param str kind: 'polygon', 'segment' or 'point'; inferred from the
        number of vertices when omitted
    """

    def __init__(self, vertices, kind: str = None):
        v = as_complex(vertices)
        if v.size == 0:
            raise InvalidInputError("Boundary component has no vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("Boundary component has non-finite vertices")
        if kind is None:
            kind = {1: POINT, 2: SEGMENT}.get(v.size, POLYGON)
        if kind == POLYGON and v.size >= 2 and v[0] == v[-1]:
            v = v[:-1]
        expected = {POINT: 1, SEGMENT: 2}
        if kind in expected and v.size != expected[kind]:
            raise InvalidInputError(
                f"A {kind} needs {expected[kind]} vertices, got {v.size}"
            )
        if kind == POLYGON and v.size < 3:
            raise InvalidInputError(f"A polygon needs at least 3 vertices, got {v.size}")
        if kind not in (POLYGON, SEGMENT, POINT):
            raise InvalidInputError(f"Unknown boundary component kind: {kind}")
        self._vertices = v
        self._vertices.setflags(write=False)
        self._kind = kind

    @classmethod
    def polygon(cls, vertices):
        return cls(vertices, POLYGON)

    @classmethod
    def segment(cls, p, q):
        return cls([p, q], SEGMENT)

    @classmethod
    def point(cls, p):
        return cls([p], POINT)

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def is_degenerate(self) -> bool:
        """A single point, or a segment/polygon of zero diameter."""
        return self._kind == POINT or np.ptp(self._vertices.real) + np.ptp(
            self._vertices.imag
        ) == 0

    @property
    def centroid(self) -> complex:
        """Vertex mean."""
        return complex(np.mean(self._vertices))

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Start and end points of the boundary edges.

        :return (numpy.ndarray, numpy.ndarray): starts, ends
        """
        v = self._vertices
        if self._kind == POLYGON:
            return v, np.roll(v, -1)
        if self._kind == SEGMENT:
            return v[:1], v[1:]
        return v, v

    def contains(self, z) -> np.ndarray:
        """Closed-set membership for polygons; segments and points contain nothing open."""
        z = np.asarray(z, dtype=complex)
        if self._kind != POLYGON:
            return np.zeros(z.shape, dtype=bool)
        path = Path(np.column_stack([self._vertices.real, self._vertices.imag]))
        flat = z.ravel()
        inside = path.contains_points(np.column_stack([flat.real, flat.imag]))
        return inside.reshape(z.shape)

    def distance(self, z) -> np.ndarray:
        """Distance from points to the component boundary."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        a, b = self.edges()
        out = np.empty(flat.shape)
        step = max(1, DISTANCE_CHUNK // a.size)
        for i in range(0, flat.size, step):
            d = point_segment_distance(flat[i : i + step, None], a[None, :], b[None, :])
            out[i : i + step] = d.min(axis=1)
        return out.reshape(z.shape)

    def map(self, func):
        """Component with every vertex sent through func."""
        return BoundaryComponent(func(self._vertices), self._kind)

    def to_list(self):
        return [[float(z.real), float(z.imag)] for z in self._vertices]

    def __repr__(self):
        return f"<{self.__class__.__name__}({self._kind}, {self._vertices.size} vertices)>"


class UnboundedComponent:
    """
    Unbounded complement component: exterior of a Jordan polygon, a union of
    one or two rays, or the point at infinity alone.
    """

    def __init__(
        self,
        kind: str,
        polygon: Optional[BoundaryComponent] = None,
        rays: Sequence[Ray] = (),
    ):
        if kind == EXTERIOR:
            if polygon is None or polygon.kind != POLYGON:
                raise InvalidInputError("Exterior component needs a Jordan polygon")
        elif kind == RAYS:
            if not 1 <= len(rays) <= 2:
                raise InvalidInputError(
                    f"Unbounded component takes one or two rays, got {len(rays)}"
                )
        elif kind != INFINITY:
            raise UnsupportedGeometryError(f"Unbounded component kind not supported: {kind}")
        self.kind = kind
        self.polygon = polygon
        self.rays = tuple(rays)

    @classmethod
    def exterior(cls, vertices):
        return cls(EXTERIOR, polygon=BoundaryComponent.polygon(vertices))

    @classmethod
    def from_rays(cls, rays):
        return cls(RAYS, rays=list(rays))

    @classmethod
    def infinity(cls):
        return cls(INFINITY)

    def finite_points(self) -> np.ndarray:
        if self.kind == EXTERIOR:
            return self.polygon.vertices
        if self.kind == RAYS:
            return np.array([r.origin for r in self.rays])
        return np.zeros(0, dtype=complex)

    def edges(self, ray_length: float) -> Tuple[np.ndarray, np.ndarray]:
        """Boundary edges, rays cut to ray_length."""
        if self.kind == EXTERIOR:
            return self.polygon.edges()
        if self.kind == RAYS:
            pieces = [r.segment(ray_length) for r in self.rays]
            return np.array([p[0] for p in pieces]), np.array([p[1] for p in pieces])
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=complex)

    def distance(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == EXTERIOR:
            return self.polygon.distance(z)
        if self.kind == RAYS:
            return np.min(
                [point_ray_distance(z, r.origin, r.direction) for r in self.rays], axis=0
            )
        return np.full(z.shape, np.inf)

    def contains(self, z) -> np.ndarray:
        """Membership of finite points (rays are closed sets of zero area)."""
        z = np.asarray(z, dtype=complex)
        if self.kind == EXTERIOR:
            return ~self.polygon.contains(z)
        return np.zeros(z.shape, dtype=bool)

    def map(self, affine):
        if self.kind == EXTERIOR:
            return UnboundedComponent(EXTERIOR, polygon=self.polygon.map(affine))
        if self.kind == RAYS:
            return UnboundedComponent(
                RAYS,
                rays=[Ray(affine(r.origin), affine.linear(r.direction)) for r in self.rays],
            )
        return UnboundedComponent(INFINITY)

    def to_dict(self):
        if self.kind == EXTERIOR:
            return {POLYGON_KEY: self.polygon.to_list()}
        if self.kind == RAYS:
            return {RAYS_KEY: [r.to_dict() for r in self.rays]}
        return {INFINITY_KEY: True}

    def __repr__(self):
        return f"<{self.__class__.__name__}({self.kind})>"


class DoublyConnectedDomain:
    """
    Doubly connected planar domain given by its complement components.

    :param BoundaryComponent bounded: bounded complement component Ω_b
    :param UnboundedComponent unbounded: unbounded complement component Ω_u
    :param CanonicalRing canonical_tag: conformal class when the domain is a
        known ring
    :param bool validate: check that the components are disjoint

    :Example:

    .. code-block:: python

        from ringmod.geometry import BoundaryComponent, DoublyConnectedDomain, Ray, UnboundedComponent
        dom = DoublyConnectedDomain(
            BoundaryComponent.segment(-1, 0),
            UnboundedComponent.from_rays([Ray(1, 1)]),
        )
    """

    def __init__(
        self,
        bounded: BoundaryComponent,
        unbounded: UnboundedComponent,
        canonical_tag=None,
        validate: bool = True,
    ):
        self.bounded = bounded
        self.unbounded = unbounded
        self.canonical_tag = canonical_tag
        if validate and not self.is_degenerate:
            self._check_disjoint()

    @property
    def is_degenerate(self) -> bool:
        """One of the complement components is a single point."""
        return self.bounded.is_degenerate or self.unbounded.kind == INFINITY

    def finite_points(self) -> np.ndarray:
        return np.concatenate([self.bounded.vertices, self.unbounded.finite_points()])

    def extent(self) -> Tuple[complex, float]:
        """
        Center (vertex mean of Ω_b) and radius of a disk holding every finite
        vertex and ray origin.
        """
        center = self.bounded.centroid
        radius = float(np.max(np.abs(self.finite_points() - center)))
        return center, max(radius, np.finfo(float).tiny)

    def ray_length(self) -> float:
        _, radius = self.extent()
        return 1e3 * (radius + 1.0)

    def _check_disjoint(self):
        a1, b1 = self.bounded.edges()
        a2, b2 = self.unbounded.edges(self.ray_length())
        if a2.size:
            hit = segments_intersect(a1[:, None], b1[:, None], a2[None, :], b2[None, :])
            if np.any(hit):
                raise InvalidInputError("Complement components intersect")
        if self.unbounded.kind == EXTERIOR:
            if not np.all(~self.unbounded.contains(self.bounded.vertices)):
                raise InvalidInputError(
                    "Bounded component is not enclosed by the unbounded component's polygon"
                )
        if self.unbounded.kind == RAYS and len(self.unbounded.rays) == 2:
            (p, q), (r, s) = [ray.segment(self.ray_length()) for ray in self.unbounded.rays]
            if segments_intersect(np.array(p), np.array(q), np.array(r), np.array(s)):
                raise InvalidInputError("The two rays of the unbounded component meet")

    def distance_to_boundary(self, z) -> np.ndarray:
        """Distance from points to the nearer complement component."""
        z = np.asarray(z, dtype=complex)
        return np.minimum(self.bounded.distance(z), self.unbounded.distance(z))

    def contains(self, z, clearance: float = 0.0) -> np.ndarray:
        """
        Domain membership, optionally keeping only points farther than
        clearance from both complement components.
        """
        z = np.asarray(z, dtype=complex)
        inside = ~self.bounded.contains(z) & ~self.unbounded.contains(z)
        return inside & (self.distance_to_boundary(z) > clearance)

    def to_dict(self):
        """Domain-file representation; a canonical tag rides along."""
        out = {
            KIND_KEY: KIND_POLYGONAL,
            BOUNDED_KEY: self.bounded.to_list(),
            UNBOUNDED_KEY: self.unbounded.to_dict(),
        }
        if self.canonical_tag is not None:
            out[CANONICAL_KEY] = self.canonical_tag.to_dict()
        return out

    def __repr__(self):
        tag = f", tag={self.canonical_tag}" if self.canonical_tag is not None else ""
        return f"<{self.__class__.__name__}(bounded={self.bounded}, unbounded={self.unbounded}{tag})>"


@dataclass(frozen=True)
class AffineMap:
    """Real-affine map z ↦ a·z + b·z̄ + c with |a|² − |b|² ≠ 0."""

    a: complex
    b: complex = 0j
    c: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        det = abs(self.a) ** 2 - abs(self.b) ** 2
        if abs(det) <= 1e-14 * max(abs(self.a), abs(self.b)) ** 2:
            raise InvalidInputError(
                f"Affine map is singular: |a|²−|b|² = {det} (a={self.a}, b={self.b})"
            )

    @classmethod
    def identity(cls):
        return cls(1.0)

    @classmethod
    def rotation(cls, angle: float):
        return cls(complex(math.cos(angle), math.sin(angle)))

    @classmethod
    def from_matrix(cls, m, c: complex = 0j):
        """Map with real 2×2 linear part m acting on (x, y)."""
        m = np.asarray(m, dtype=float)
        col_x = complex(m[0, 0], m[1, 0])
        col_y = complex(m[0, 1], m[1, 1])
        # col_x = a + b, col_y = i(a − b)
        a = (col_x - 1j * col_y) / 2
        b = (col_x + 1j * col_y) / 2
        return cls(a, b, c)

    @property
    def determinant(self) -> float:
        return abs(self.a) ** 2 - abs(self.b) ** 2

    @property
    def orientation(self) -> int:
        return 1 if self.determinant > 0 else -1

    def matrix(self) -> np.ndarray:
        col_x = self.a + self.b
        col_y = 1j * (self.a - self.b)
        return np.array([[col_x.real, col_y.real], [col_x.imag, col_y.imag]])

    def linear(self, z):
        return self.a * z + self.b * np.conj(z)

    def __call__(self, z):
        return self.linear(z) + self.c

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self ∘ other"""
        return AffineMap(
            self.a * other.a + self.b * np.conj(other.b),
            self.a * other.b + self.b * np.conj(other.a),
            self(other.c),
        )

    def inverse(self) -> "AffineMap":
        det = self.determinant
        a = np.conj(self.a) / det
        b = -self.b / det
        lin = AffineMap(a, b)
        return AffineMap(a, b, -lin(self.c))


@dataclass(frozen=True)
class ShearNormalForm:
    """
    T(z) = scale · rotation · [conj] φ_α(e^{−iθ} z) + translation,
    with φ_α(x, y) = (x, αy).
    """

    theta: float
    alpha: float
    scale: float = 1.0
    rotation: complex = 1 + 0j
    conjugate: bool = False
    translation: complex = 0j

    def to_affine(self) -> AffineMap:
        p = 0.5 * (1 + self.alpha) * np.exp(-1j * self.theta)
        q = 0.5 * (1 - self.alpha) * np.exp(1j * self.theta)
        if self.conjugate:
            p, q = np.conj(q), np.conj(p)
        k = self.scale * self.rotation
        return AffineMap(k * p, k * q, self.translation)

    def __call__(self, z):
        return self.to_affine()(z)

    def to_dict(self):
        return {
            "theta": self.theta,
            "alpha": self.alpha,
            "scale": self.scale,
            "rotation": self.rotation,
            "conjugate": self.conjugate,
            "translation": self.translation,
        }


def _component_of(domain_or_component):
    if isinstance(domain_or_component, DoublyConnectedDomain):
        return domain_or_component.bounded
    return domain_or_component


def width_and_direction(component) -> Tuple[float, float]:
    """
    Width of a bounded component and the projection direction attaining it.

    The minimum of the projection length over directions is attained at a
    normal of a convex-hull edge; ties go to the smallest angle.

    :param BoundaryComponent component: polygon, segment or point
    :return (float, float): width and θ ∈ [0, π)
    """
    component = _component_of(component)
    if component.vertices.size == 0:
        raise InvalidInputError("Width of an empty vertex list")
    hull = convex_hull(component.vertices)
    if hull.size <= 2:
        if hull.size == 2:
            theta = (np.angle(hull[1] - hull[0]) + math.pi / 2) % math.pi
            return 0.0, float(theta)
        return 0.0, 0.0
    edges = np.roll(hull, -1) - hull
    normals = 1j * edges / np.abs(edges)
    proj = np.real(np.conj(normals)[:, None] * hull[None, :])
    widths = proj.max(axis=1) - proj.min(axis=1)
    thetas = np.angle(normals) % math.pi
    best = widths.min()
    ties = widths <= best * (1 + 1e-12)
    theta = float(np.min(thetas[ties]))
    if theta >= math.pi - 1e-15:
        theta = 0.0
    return float(best), theta


def width(component) -> float:
    """
    Smallest distance between two parallel lines enclosing the component.

    :param BoundaryComponent component: polygon, segment or point
    :return float: width (0 for segments and points)
    """
    return width_and_direction(component)[0]


def diameter(component) -> float:
    """Largest pairwise vertex distance of the component."""
    hull = convex_hull(_component_of(component).vertices)
    if hull.size < 2:
        return 0.0
    return float(np.max(np.abs(hull[:, None] - hull[None, :])))


def projection_interval(component, theta: float) -> Tuple[float, float]:
    """
    Projection π_θ(z) = Re(e^{−iθ} z) of a component or a ray.

    :param BoundaryComponent | Ray component: set to project
    :param float theta: projection angle
    :return (float, float): closed interval, possibly with infinite ends
    """
    e = np.exp(-1j * theta)
    if isinstance(component, Ray):
        p0 = float(np.real(e * component.origin))
        slope = float(np.real(e * component.direction))
        if slope > 1e-15:
            return p0, math.inf
        if slope < -1e-15:
            return -math.inf, p0
        return p0, p0
    component = _component_of(component)
    if component.vertices.size == 0:
        raise InvalidInputError("Projection of an empty vertex list")
    proj = np.real(e * component.vertices)
    return float(proj.min()), float(proj.max())


def unbounded_projection(unbounded: UnboundedComponent, theta: float) -> List[Tuple[float, float]]:
    """Projection of the finite part of Ω_u as a union of intervals."""
    if unbounded.kind == EXTERIOR:
        return [(-math.inf, math.inf)]
    if unbounded.kind == RAYS:
        return [projection_interval(r, theta) for r in unbounded.rays]
    return []


@dataclass
class OverlapResult:
    holds: bool
    witness_theta: Optional[float] = None
    samples: int = 0


def _overlaps(interval, intervals, tol) -> bool:
    lo, hi = interval
    return any(max(lo, a) <= min(hi, b) + tol for a, b in intervals)


def projections_overlap_all_theta(domain: DoublyConnectedDomain, samples: int = DEFAULT_THETA_SAMPLES) -> OverlapResult:
    """
    Check π_θ(Ω_b) ∩ π_θ(Ω_u) ≠ ∅ for all θ ∈ [0, π).

    Directions tested: a uniform grid plus the critical directions at which
    an interval endpoint of one component crosses one of the other.

    :param DoublyConnectedDomain domain: non-degenerate domain
    :param int samples: size of the uniform θ grid
    :return OverlapResult: whether overlap holds and the first failing θ
    """
    if domain.is_degenerate:
        raise DegenerateDomainError("Projection overlap needs a non-degenerate domain")
    if domain.unbounded.kind == EXTERIOR:
        return OverlapResult(True, None, 0)
    if domain.unbounded.kind != RAYS:
        raise UnsupportedGeometryError(
            f"Cannot project unbounded component of kind {domain.unbounded.kind}"
        )
    hull = convex_hull(domain.bounded.vertices)
    critical = []
    if hull.size >= 2:
        edges = np.roll(hull, -1) - hull
        critical.extend(np.angle(1j * edges[np.abs(edges) > 0]))
    for ray in domain.unbounded.rays:
        critical.append(np.angle(ray.direction) + math.pi / 2)
        diffs = ray.origin - hull
        critical.extend(np.angle(diffs[np.abs(diffs) > 0]) + math.pi / 2)
    grid = np.linspace(0, math.pi, samples, endpoint=False)
    thetas = np.unique(np.concatenate([grid, np.mod(critical, math.pi)]))
    _, radius = domain.extent()
    tol = 1e-12 * radius
    for theta in thetas:
        own = projection_interval(domain.bounded, theta)
        if not _overlaps(own, unbounded_projection(domain.unbounded, theta), tol):
            _LOGGER.debug(f"Projections separate at theta={theta}")
            return OverlapResult(False, float(theta), len(thetas))
    return OverlapResult(True, None, len(thetas))


@dataclass
class Separation:
    d: float
    d0: float


def component_distance(domain: DoublyConnectedDomain) -> float:
    """Distance between the two complement components."""
    a1, b1 = domain.bounded.edges()
    a2, b2 = domain.unbounded.edges(domain.ray_length())
    if segments_intersect(a1[:, None], b1[:, None], a2[None, :], b2[None, :]).any():
        return 0.0
    cands = [
        point_segment_distance(a1[:, None], a2[None, :], b2[None, :]).min(),
        point_segment_distance(a2[:, None], a1[None, :], b1[None, :]).min(),
        point_segment_distance(b2[:, None], a1[None, :], b1[None, :]).min(),
    ]
    if domain.unbounded.kind == RAYS:
        cands.append(float(domain.unbounded.distance(domain.bounded.vertices).min()))
    else:
        cands.append(point_segment_distance(b1[:, None], a2[None, :], b2[None, :]).min())
    return float(min(cands))


def separation_and_diameter(domain: DoublyConnectedDomain) -> Separation:
    """
    d = dist(Ω_b, Ω_u) and d₀ = diam(Ω_b).

    :param DoublyConnectedDomain domain: non-degenerate domain
    :return Separation: distances
    :raise DegenerateDomainError: if a component is a single point
    """
    if domain.is_degenerate:
        raise DegenerateDomainError("Separation and diameter need a non-degenerate domain")
    return Separation(d=component_distance(domain), d0=diameter(domain.bounded))


def decompose_affine(affine: AffineMap) -> ShearNormalForm:
    """
    Factor an affine map through the axis squeeze φ_α via its singular values.

    :param AffineMap affine: non-singular map
    :return ShearNormalForm: θ ∈ [0, π), α = σ_min/σ_max and conformal factors
    """
    if not isinstance(affine, AffineMap):
        raise InvalidInputError(f"Expected an AffineMap, got {type(affine).__name__}")
    m = affine.matrix()
    _, sigma, vt = np.linalg.svd(m)
    s1, s2 = float(sigma[0]), float(sigma[1])
    alpha = s2 / s1
    if alpha > 1 - 1e-14:
        alpha, theta = 1.0, 0.0
    else:
        theta = math.atan2(vt[0, 1], vt[0, 0]) % math.pi
        if theta >= math.pi - 1e-15:
            theta = 0.0
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    u = m @ rot @ np.diag([1 / s1, 1 / (alpha * s1)])
    rotation = complex(u[0, 0], u[1, 0])
    rotation /= abs(rotation)
    return ShearNormalForm(
        theta=theta,
        alpha=alpha,
        scale=s1,
        rotation=rotation,
        conjugate=bool(np.linalg.det(u) < 0),
        translation=affine.c,
    )


def apply_affine(affine: AffineMap, domain: DoublyConnectedDomain) -> DoublyConnectedDomain:
    """
    Image of a domain under an affine map.

    The canonical tag survives conformal and anticonformal maps; otherwise
    it is recovered only when the image complement lies on a line.

    :param AffineMap affine: non-singular map
    :param DoublyConnectedDomain domain: domain to map
    :return DoublyConnectedDomain: image domain
    """
    from .canonical import carry_tag

    image = DoublyConnectedDomain(
        domain.bounded.map(affine), domain.unbounded.map(affine), validate=False
    )
    image.canonical_tag = carry_tag(affine, domain, image)
    return image
