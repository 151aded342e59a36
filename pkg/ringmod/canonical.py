"""
Canonical rings with closed-form moduli.

Moduli are normalized so that Mod A(r, R) = log(R/r). The Grötzsch ring
function μ(r) is evaluated with the arithmetic-geometric mean, and every
other canonical ring is reduced to a Teichmüller ring.
"""

import math
from abc import abstractmethod
from dataclasses import dataclass, field
from logging import getLogger
from typing import List, Optional, Union

import numpy as np

from .const import (
    COLLINEAR_TOL,
    DEFAULT_CIRCLE_VERTICES,
    PARAMS_KEY,
    PKG_NAME,
    RING_ANNULUS,
    RING_DOUBLE_TEICHMULLER,
    RING_DOUBLE_TEICHMULLER_UNIT,
    RING_GROTZSCH,
    RING_KEY,
    RING_KINDS,
    RING_TEICHMULLER,
)
from .exceptions import InvalidInputError

_LOGGER = getLogger(PKG_NAME)

AGM_TOL = 1e-15
NITSCHE_RTOL = 1e-14


def _agm(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    for _ in range(64):
        if np.all(np.abs(a - b) <= AGM_TOL * a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return a


def grotzsch_mu(r):
    """
    Modulus of the unit disk slit along [0, r], 0 < r < 1.

    μ(r) = (π/2)·agm(1, r')/agm(1, r) with r' = √(1 − r²).

    :param float | numpy.ndarray r: slit length(s)
    :return float | numpy.ndarray: μ(r)
    :raise InvalidInputError: for r outside (0, 1)
    """
    arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0) or np.any(arr >= 1):
        raise InvalidInputError(f"grotzsch_mu needs 0 < r < 1, got {r}")
    rp = np.sqrt((1 - arr) * (1 + arr))
    out = 0.5 * math.pi * _agm(1.0, rp) / _agm(1.0, arr)
    return float(out) if np.ndim(r) == 0 else out


def teichmuller_modulus(s):
    """
    Mod T(s) = 2μ(1/√(1 + s)) for s > 0.

    :param float | numpy.ndarray s: gap between the slit [−1, 0] and the ray
    :return float | numpy.ndarray: modulus
    """
    arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise InvalidInputError(f"Teichmüller parameter must be positive, got {s}")
    return 2 * grotzsch_mu(1 / np.sqrt(1 + arr))


@dataclass(frozen=True)
class ModulusEstimate:
    """Modulus value with an error estimate and the method that produced it."""

    value: float
    error_estimate: float = 0.0
    method: str = "closed-form"
    levels: List[dict] = field(default_factory=list, compare=False)

    def to_dict(self):
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "method": self.method,
            "levels": self.levels,
        }


class CanonicalRing(object):
    """Base for canonical rings; subclasses define kind and parameters."""

    kind = None

    @property
    @abstractmethod
    def params(self) -> List[float]:
        pass

    @abstractmethod
    def teichmuller_parameter(self) -> Optional[float]:
        """Parameter s with Mod(self) = Mod T(s), None if not reduced this way."""
        pass

    def to_dict(self):
        return {RING_KEY: self.kind, PARAMS_KEY: list(self.params)}

    def __str__(self):
        return "{}({})".format(self.kind, ", ".join(f"{p:g}" for p in self.params))


def _positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise InvalidInputError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class Annulus(CanonicalRing):
    """A(r, R) = {r < |z| < R}"""

    r: float
    R: float
    kind = RING_ANNULUS

    def __post_init__(self):
        _positive("r", self.r)
        if not self.R > self.r:
            raise InvalidInputError(f"Annulus needs R > r, got r={self.r}, R={self.R}")

    @property
    def params(self):
        return [self.r, self.R]

    def teichmuller_parameter(self):
        return None


@dataclass(frozen=True)
class Grotzsch(CanonicalRing):
    """G(s) = exterior of the unit disk minus the ray [s, ∞), s > 1."""

    s: float
    kind = RING_GROTZSCH

    def __post_init__(self):
        if not (np.isfinite(self.s) and self.s > 1):
            raise InvalidInputError(f"Grötzsch ring needs s > 1, got {self.s}")

    @property
    def params(self):
        return [self.s]

    def teichmuller_parameter(self):
        return None


@dataclass(frozen=True)
class Teichmuller(CanonicalRing):
    """T(s) = C ∖ ([−1, 0] ∪ [s, ∞)), s > 0."""

    s: float
    kind = RING_TEICHMULLER

    def __post_init__(self):
        _positive("s", self.s)

    @property
    def params(self):
        return [self.s]

    def teichmuller_parameter(self):
        return self.s


@dataclass(frozen=True)
class DoubleTeichmuller(CanonicalRing):
    """F(s, t) = C ∖ ((−∞, −s] ∪ [−1, 1] ∪ [t, ∞)), s, t > 1."""

    s: float
    t: float
    kind = RING_DOUBLE_TEICHMULLER

    def __post_init__(self):
        if not (np.isfinite(self.s) and np.isfinite(self.t) and self.s > 1 and self.t > 1):
            raise InvalidInputError(
                f"Double Teichmüller ring needs s, t > 1, got s={self.s}, t={self.t}"
            )

    @property
    def params(self):
        return [self.s, self.t]

    def teichmuller_parameter(self):
        return (self.s - 1) * (self.t - 1) / (2 * (self.s + self.t))


@dataclass(frozen=True)
class DoubleTeichmullerUnit(CanonicalRing):
    """G(a, b) = C ∖ ((−∞, 0] ∪ [a, b] ∪ [1, ∞)), 0 < a < b < 1."""

    a: float
    b: float
    kind = RING_DOUBLE_TEICHMULLER_UNIT

    def __post_init__(self):
        if not 0 < self.a < self.b < 1:
            raise InvalidInputError(
                f"Unit double Teichmüller ring needs 0 < a < b < 1, got a={self.a}, b={self.b}"
            )

    @property
    def params(self):
        return [self.a, self.b]

    def teichmuller_parameter(self):
        return (1 - self.b) / (self.b / self.a - 1)


RING_CLASSES = {
    cls.kind: cls
    for cls in (Annulus, Grotzsch, Teichmuller, DoubleTeichmuller, DoubleTeichmullerUnit)
}


def ring_from_dict(data: dict) -> CanonicalRing:
    """
    Build a canonical ring from its {"ring": kind, "params": [...]} record.

    :param dict data: ring record
    :return CanonicalRing: ring
    :raise InvalidInputError: for unknown kinds or bad parameters
    """
    try:
        kind = data[RING_KEY]
        params = [float(p) for p in data[PARAMS_KEY]]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f"Malformed canonical ring record {data}: {e}")
    if kind not in RING_CLASSES:
        raise InvalidInputError(
            f"Unknown canonical ring '{kind}'; choose from: {', '.join(RING_KINDS)}"
        )
    try:
        return RING_CLASSES[kind](*params)
    except TypeError:
        raise InvalidInputError(f"Wrong number of parameters for '{kind}': {params}")


def modulus_canonical(ring: CanonicalRing) -> ModulusEstimate:
    """
    Closed-form modulus of a canonical ring.

    :param CanonicalRing ring: ring with valid parameters
    :return ModulusEstimate: value with a round-off level error estimate
    """
    if isinstance(ring, Annulus):
        value = math.log(ring.R / ring.r)
    elif isinstance(ring, Grotzsch):
        value = grotzsch_mu(1 / ring.s)
    elif isinstance(ring, CanonicalRing):
        value = teichmuller_modulus(ring.teichmuller_parameter())
    else:
        raise InvalidInputError(f"Not a canonical ring: {ring!r}")
    return ModulusEstimate(float(value), 1e-13 * abs(value), "closed-form")


def nitsche_existence(R_over_r: float, Rstar_over_rstar: float) -> bool:
    """
    Whether a harmonic homeomorphism A(r, R) → A(r*, R*) exists:
    R*/r* ≥ ½(R/r + r/R).

    :param float R_over_r: source ratio, > 1
    :param float Rstar_over_rstar: target ratio, > 1
    :return bool: existence
    """
    for name, v in (("R/r", R_over_r), ("R*/r*", Rstar_over_rstar)):
        if not (np.isfinite(v) and v > 1):
            raise InvalidInputError(f"{name} must be greater than 1, got {v}")
    bound = 0.5 * (R_over_r + 1 / R_over_r)
    return bool(Rstar_over_rstar >= bound * (1 - NITSCHE_RTOL))


def ring_to_domain(ring: CanonicalRing, vertices: int = DEFAULT_CIRCLE_VERTICES):
    """
    Polygonal realization of a canonical ring, tagged with the ring.

    Circles become regular polygons with the given number of vertices.

    :param CanonicalRing ring: ring to realize
    :param int vertices: polygon vertex count for circles
    :return ringmod.geometry.DoublyConnectedDomain: tagged domain
    """
    from .geometry import BoundaryComponent, DoublyConnectedDomain, Ray, UnboundedComponent

    circle = np.exp(2j * math.pi * np.arange(vertices) / vertices)
    if isinstance(ring, Annulus):
        bounded = BoundaryComponent.polygon(ring.r * circle)
        unbounded = UnboundedComponent.exterior(ring.R * circle)
    elif isinstance(ring, Grotzsch):
        bounded = BoundaryComponent.polygon(circle)
        unbounded = UnboundedComponent.from_rays([Ray(ring.s, 1)])
    elif isinstance(ring, Teichmuller):
        bounded = BoundaryComponent.segment(-1, 0)
        unbounded = UnboundedComponent.from_rays([Ray(ring.s, 1)])
    elif isinstance(ring, DoubleTeichmuller):
        bounded = BoundaryComponent.segment(-1, 1)
        unbounded = UnboundedComponent.from_rays([Ray(-ring.s, -1), Ray(ring.t, 1)])
    elif isinstance(ring, DoubleTeichmullerUnit):
        bounded = BoundaryComponent.segment(ring.a, ring.b)
        unbounded = UnboundedComponent.from_rays([Ray(0, -1), Ray(1, 1)])
    else:
        raise InvalidInputError(f"Not a canonical ring: {ring!r}")
    return DoublyConnectedDomain(bounded, unbounded, canonical_tag=ring, validate=False)


def recognize_collinear(domain, tol: float = COLLINEAR_TOL) -> Optional[Union[Teichmuller, DoubleTeichmuller]]:
    """
    Identify domains whose complement lies on one line.

    A slit with one ray beyond an end is a T(s); a slit between two rays
    pointing away from it is an F(s, t). Parameters follow from ratios
    along the line, which real-affine maps preserve.

    :param ringmod.geometry.DoublyConnectedDomain domain: domain to inspect
    :param float tol: relative collinearity tolerance
    :return Teichmuller | DoubleTeichmuller | None: recognized ring
    """
    from .geometry import RAYS, SEGMENT

    bounded, unbounded = domain.bounded, domain.unbounded
    if bounded.kind != SEGMENT or unbounded.kind != RAYS or bounded.is_degenerate:
        return None
    p, q = bounded.vertices
    length = abs(q - p)
    u = (q - p) / length
    scale = max(length, max(abs(r.origin - p) for r in unbounded.rays))

    def along(z):
        return float(np.real((z - p) * np.conj(u)))

    for ray in unbounded.rays:
        if abs(np.imag((ray.origin - p) * np.conj(u))) > tol * scale:
            return None
        if abs(np.imag(ray.direction * np.conj(u))) > tol:
            return None
    lo, hi = 0.0, length
    left = [along(r.origin) for r in unbounded.rays if np.real(r.direction * np.conj(u)) < 0]
    right = [along(r.origin) for r in unbounded.rays if np.real(r.direction * np.conj(u)) > 0]
    if len(unbounded.rays) == 1:
        if right and right[0] > hi:
            return Teichmuller((right[0] - hi) / length)
        if left and left[0] < lo:
            return Teichmuller((lo - left[0]) / length)
        return None
    if len(left) == 1 and len(right) == 1 and left[0] < lo and right[0] > hi:
        half = length / 2
        return DoubleTeichmuller((half - left[0]) / half, (right[0] - half) / half)
    return None


def carry_tag(affine, domain, image) -> Optional[CanonicalRing]:
    """
    Canonical tag of an affine image.

    Conformal and anticonformal maps keep the conformal class; an annulus
    tag is kept, rescaled, only while the image stays centered at the origin.
    Other maps lose the tag unless the image is collinear.
    """
    tag = domain.canonical_tag
    similarity = abs(affine.b) <= 1e-14 * abs(affine.a) or abs(affine.a) <= 1e-14 * abs(affine.b)
    if tag is not None and similarity:
        if isinstance(tag, Annulus):
            if abs(affine.c) > 1e-14 * tag.R:
                return None
            k = abs(affine.a) + abs(affine.b)
            return Annulus(k * tag.r, k * tag.R)
        return tag
    return recognize_collinear(image)
