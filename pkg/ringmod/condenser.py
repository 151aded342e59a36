"""
Conformal modulus of a doubly connected domain via the condenser problem.

The capacity potential is 0 on Ω_b and 1 on Ω_u. On a uniform grid the
5-point Laplacian is solved for the free nodes; the discrete Dirichlet
energy E gives Mod = 2π/E. Grids of several resolutions are combined by
first-order Richardson extrapolation. Domains with rays are clipped by a
circle, and the clip is corrected by comparing two clip radii.
"""

import math
from dataclasses import dataclass
from logging import getLogger
from typing import Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix, identity
from scipy.sparse.linalg import cg, spsolve

from .canonical import ModulusEstimate, modulus_canonical, teichmuller_modulus
from .const import (
    DEFAULT_CLIP_FACTOR,
    DEFAULT_LEVELS,
    DEFAULT_RESOLUTION,
    PKG_NAME,
    SOLVER_RESIDUAL,
)
from .exceptions import (
    DegenerateDomainError,
    InvalidInputError,
    ResolutionTooCoarseError,
    SolverFailureError,
)
from .geometry import (
    EXTERIOR,
    POLYGON,
    RAYS,
    DoublyConnectedDomain,
    point_segment_distance,
    separation_and_diameter,
)

_LOGGER = getLogger(PKG_NAME)

FREE = -1
SOLVER_METHODS = ["direct", "cg"]
MIN_RESOLUTION = 16
FRAME_MARGIN = 1.05


@dataclass
class CondenserOptions:
    """
    Numerical options of the condenser solver.

    :param int base_resolution: cells per side on the finest grid
    :param int levels: number of grids, each coarser one halving the resolution
    :param float clip_factor: clip radius in units of the domain extent
    :param str method: 'direct' (sparse LU) or 'cg' (conjugate gradients)
    """

    base_resolution: int = DEFAULT_RESOLUTION
    levels: int = DEFAULT_LEVELS
    clip_factor: float = DEFAULT_CLIP_FACTOR
    method: str = "direct"

    def __post_init__(self):
        if int(self.levels) < 2:
            raise InvalidInputError(f"Richardson extrapolation needs levels ≥ 2, got {self.levels}")
        self.levels = int(self.levels)
        self.base_resolution = int(self.base_resolution)
        if self.coarsest_resolution < MIN_RESOLUTION:
            raise InvalidInputError(
                f"Coarsest grid would have {self.coarsest_resolution} cells per side; "
                f"raise base_resolution or lower levels"
            )
        if not self.clip_factor > 1:
            raise InvalidInputError(f"clip_factor must exceed 1, got {self.clip_factor}")
        if self.method not in SOLVER_METHODS:
            raise InvalidInputError(
                f"Unknown solver '{self.method}'; choose from: {', '.join(SOLVER_METHODS)}"
            )

    @property
    def coarsest_resolution(self) -> int:
        return self.base_resolution // 2 ** (self.levels - 1)

    @property
    def resolutions(self):
        return [self.base_resolution // 2 ** (self.levels - 1 - k) for k in range(self.levels)]


@dataclass
class Frame:
    """Square computational window and, for ray domains, the clip circle."""

    center: complex
    half_size: float
    clip_radius: Optional[float] = None

    def scaled(self, factor):
        return Frame(
            self.center,
            self.half_size * factor,
            None if self.clip_radius is None else self.clip_radius * factor,
        )


@dataclass
class CondenserProblem:
    """Node labels on a uniform grid: -1 free, 0 on Ω_b, 1 on Ω_u."""

    labels: np.ndarray
    origin: complex
    h: float
    frame: Frame

    @property
    def nodes(self) -> np.ndarray:
        ny, nx = self.labels.shape
        return self.origin + self.h * (np.arange(nx)[None, :] + 1j * np.arange(ny)[:, None])

    @property
    def free_count(self) -> int:
        return int(np.count_nonzero(self.labels == FREE))


def domain_frame(domain: DoublyConnectedDomain, clip_factor: float = DEFAULT_CLIP_FACTOR) -> Frame:
    """
    Computational window for a domain.

    :param DoublyConnectedDomain domain: non-degenerate domain
    :param float clip_factor: clip radius over extent, for ray domains
    :return Frame: window
    """
    if domain.unbounded.kind == EXTERIOR:
        v = domain.unbounded.polygon.vertices
        center = complex((v.real.min() + v.real.max()) / 2, (v.imag.min() + v.imag.max()) / 2)
        half = 0.5 * max(np.ptp(v.real), np.ptp(v.imag))
        return Frame(center, FRAME_MARGIN * half)
    if domain.unbounded.kind == RAYS:
        center, radius = domain.extent()
        clip = clip_factor * radius
        return Frame(center, FRAME_MARGIN * clip, clip)
    raise DegenerateDomainError("No condenser frame for an unbounded component at infinity")


def _mark_near_edges(mask, starts, ends, origin, h):
    """Set mask on nodes within distance h of any edge."""
    ny, nx = mask.shape
    lengths = np.abs(ends - starts)
    counts = np.maximum(1, np.ceil(4 * lengths / h)).astype(int)
    edge_idx = np.repeat(np.arange(starts.size), counts + 1)
    t = np.concatenate([np.linspace(0, 1, c + 1) for c in counts])
    a, b = starts[edge_idx], ends[edge_idx]
    pts = a + t * (b - a)
    base_x = np.floor((pts.real - origin.real) / h).astype(int)
    base_y = np.floor((pts.imag - origin.imag) / h).astype(int)
    for dy in range(-2, 4):
        for dx in range(-2, 4):
            ix, iy = base_x + dx, base_y + dy
            ok = (ix >= 0) & (ix < nx) & (iy >= 0) & (iy < ny)
            node = origin + h * (ix[ok] + 1j * iy[ok])
            near = point_segment_distance(node, a[ok], b[ok]) <= h
            mask[iy[ok][near], ix[ok][near]] = True


def rasterize(domain: DoublyConnectedDomain, resolution: int, frame: Frame) -> CondenserProblem:
    """
    Label grid nodes for the condenser problem.

    Nodes inside a polygon component, or within one grid step of a
    component's edges, carry that component's boundary value. Nodes on or
    beyond the clip circle carry 1.

    :param DoublyConnectedDomain domain: non-degenerate domain
    :param int resolution: cells per side
    :param Frame frame: computational window
    :return CondenserProblem: labeled grid
    :raise ResolutionTooCoarseError: if the two labeled sets touch
    """
    if domain.is_degenerate:
        raise DegenerateDomainError("Condenser problem needs a non-degenerate domain")
    h = 2 * frame.half_size / resolution
    origin = frame.center - frame.half_size * (1 + 1j)
    shape = (resolution + 1, resolution + 1)
    nodes = origin + h * (np.arange(shape[1])[None, :] + 1j * np.arange(shape[0])[:, None])

    zero = np.zeros(shape, dtype=bool)
    one = np.zeros(shape, dtype=bool)
    if domain.bounded.kind == POLYGON:
        zero |= domain.bounded.contains(nodes)
    _mark_near_edges(zero, *domain.bounded.edges(), origin, h)

    if domain.unbounded.kind == EXTERIOR:
        one |= domain.unbounded.contains(nodes)
        _mark_near_edges(one, *domain.unbounded.polygon.edges(), origin, h)
    else:
        one |= np.abs(nodes - frame.center) >= frame.clip_radius
        starts, ends = [], []
        for ray in domain.unbounded.rays:
            reach = frame.clip_radius + abs(ray.origin - frame.center) + 2 * h
            p, q = ray.segment(reach)
            starts.append(p)
            ends.append(q)
        _mark_near_edges(one, np.array(starts), np.array(ends), origin, h)
    one[0, :] = one[-1, :] = one[:, 0] = one[:, -1] = True

    touching = zero & one
    touching[:-1, :] |= zero[:-1, :] & one[1:, :]
    touching[1:, :] |= zero[1:, :] & one[:-1, :]
    touching[:, :-1] |= zero[:, :-1] & one[:, 1:]
    touching[:, 1:] |= zero[:, 1:] & one[:, :-1]
    if touching.any():
        raise ResolutionTooCoarseError(
            f"Boundary components merge on a {resolution}-cell grid (h={h:.3g}); "
            f"increase the resolution"
        )
    labels = np.full(shape, FREE, dtype=np.int8)
    labels[zero] = 0
    labels[one] = 1
    if not (labels == FREE).any():
        raise ResolutionTooCoarseError(f"No free nodes on a {resolution}-cell grid")
    return CondenserProblem(labels, origin, h, frame)


def solve_potential(problem: CondenserProblem, method: str = "direct") -> Tuple[np.ndarray, float]:
    """
    Solve the discrete Laplace equation and return the potential and energy.

    :param CondenserProblem problem: labeled grid
    :param str method: 'direct' or 'cg'
    :return (numpy.ndarray, float): potential on the grid, Σ over grid edges of (u_i − u_j)²
    :raise SolverFailureError: if the residual exceeds its bound
    """
    labels = problem.labels
    free = labels == FREE
    nf = int(free.sum())
    index = np.full(labels.shape, -1, dtype=np.int64)
    index[free] = np.arange(nf)
    rows, cols = [], []
    rhs = np.zeros(nf)
    for shift, axis in ((1, 0), (-1, 0), (1, 1), (-1, 1)):
        nb_labels = np.roll(labels, shift, axis=axis)
        nb_index = np.roll(index, shift, axis=axis)
        coupled = free & (nb_labels == FREE)
        rows.append(index[coupled])
        cols.append(nb_index[coupled])
        np.add.at(rhs, index[free & (nb_labels == 1)], 1.0)
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    lap = coo_matrix((-np.ones(rows.size), (rows, cols)), shape=(nf, nf)).tocsr()
    lap = lap + 4 * identity(nf, format="csr")
    _LOGGER.debug(f"Solving {nf} unknowns with method '{method}'")
    if method == "cg":
        x, info = cg(lap, rhs, rtol=SOLVER_RESIDUAL / 10, maxiter=20 * nf)
        if info != 0:
            raise SolverFailureError(f"Conjugate gradients stopped with code {info}")
    else:
        x = spsolve(lap, rhs)
    residual = np.max(np.abs(lap @ x - rhs)) / max(1.0, np.max(np.abs(rhs)))
    if not np.isfinite(residual) or residual > SOLVER_RESIDUAL:
        raise SolverFailureError(
            f"Linear solve residual {residual:.3e} exceeds {SOLVER_RESIDUAL:.0e}"
        )
    u = labels.astype(float)
    u[free] = x
    energy = float(np.sum(np.diff(u, axis=0) ** 2) + np.sum(np.diff(u, axis=1) ** 2))
    return u, energy


def level_modulus(domain, resolution, frame, method="direct") -> float:
    """Modulus 2π/E on one grid."""
    problem = rasterize(domain, resolution, frame)
    _, energy = solve_potential(problem, method)
    value = 2 * math.pi / energy
    _LOGGER.debug(f"Resolution {resolution} (h={problem.h:.4g}): modulus {value:.8f}")
    return value


def far_field_order(domain: DoublyConnectedDomain) -> float:
    """
    Decay order p of the clip error, M(R) = M∞ − K·R^(−p).

    p = 2π/γ where γ is the widest angle between ray directions.
    """
    rays = domain.unbounded.rays
    if len(rays) < 2:
        return 1.0
    gap = (np.angle(rays[1].direction) - np.angle(rays[0].direction)) % (2 * math.pi)
    widest = max(gap, 2 * math.pi - gap)
    return float(np.clip(2 * math.pi / widest, 1.0, 2.0))


def modulus_numeric(domain: DoublyConnectedDomain, options: CondenserOptions = None) -> ModulusEstimate:
    """
    Finite-difference modulus with Richardson extrapolation.

    :param DoublyConnectedDomain domain: domain; degenerate ones give +∞
    :param CondenserOptions options: numerical options
    :return ModulusEstimate: value, error estimate and per-level values
    """
    options = options or CondenserOptions()
    if domain.is_degenerate:
        return ModulusEstimate(math.inf, 0.0, "degenerate")
    frame = domain_frame(domain, options.clip_factor)
    history = []
    values = []
    for level, n in enumerate(options.resolutions):
        value = level_modulus(domain, n, frame, options.method)
        values.append(value)
        history.append(
            {
                "level": level,
                "resolution": n,
                "h": 2 * frame.half_size / n,
                "value": value,
                "clip_radius": frame.clip_radius,
            }
        )
    extrapolants = [2 * values[k] - values[k - 1] for k in range(1, len(values))]
    value = extrapolants[-1]
    # last Richardson step plus the spread of the extrapolants
    error = abs(extrapolants[-1] - values[-1])
    if len(extrapolants) > 1:
        error += abs(extrapolants[-1] - extrapolants[-2])
    if frame.clip_radius is not None:
        n0 = options.coarsest_resolution
        wide = frame.scaled(2)
        far = level_modulus(domain, 2 * n0, wide, options.method)
        history.append(
            {
                "level": -1,
                "resolution": 2 * n0,
                "h": 2 * wide.half_size / (2 * n0),
                "value": far,
                "clip_radius": wide.clip_radius,
            }
        )
        p = far_field_order(domain)
        delta = far - values[0]
        value += delta * 2**p / (2**p - 1)
        error += abs(delta) / (2**p - 1)
        _LOGGER.debug(f"Clip correction {delta * 2 ** p / (2 ** p - 1):.3e} (p={p})")
    _LOGGER.info(f"Condenser modulus {value:.6f} ± {error:.2e}")
    return ModulusEstimate(float(value), float(error), "condenser-fd", history)


def modulus(domain: DoublyConnectedDomain, options: CondenserOptions = None) -> ModulusEstimate:
    """
    Modulus by closed form when the domain carries a canonical tag,
    +∞ for degenerate domains, the condenser solver otherwise.

    :param DoublyConnectedDomain domain: domain
    :param CondenserOptions options: numerical options
    :return ModulusEstimate: modulus
    """
    if domain.is_degenerate:
        return ModulusEstimate(math.inf, 0.0, "degenerate")
    if domain.canonical_tag is not None:
        return modulus_canonical(domain.canonical_tag)
    return modulus_numeric(domain, options)


@dataclass
class ExtremalBoundCheck:
    modulus: ModulusEstimate
    bound: float
    d: float
    d0: float
    holds: bool


def verify_extremal_bound(domain: DoublyConnectedDomain, options: CondenserOptions = None) -> ExtremalBoundCheck:
    """
    Check Mod Ω ≤ Mod T(d/d₀), d = dist(Ω_b, Ω_u), d₀ = diam Ω_b.

    :param DoublyConnectedDomain domain: non-degenerate domain
    :param CondenserOptions options: numerical options
    :return ExtremalBoundCheck: both sides and the verdict within error bars
    """
    sep = separation_and_diameter(domain)
    if sep.d <= 0:
        raise InvalidInputError("Complement components touch")
    est = modulus(domain, options)
    bound = float(teichmuller_modulus(sep.d / sep.d0))
    holds = est.value <= bound * (1 + 1e-12) + est.error_estimate
    return ExtremalBoundCheck(est, bound, sep.d, sep.d0, bool(holds))
