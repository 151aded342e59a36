"""
Harmonic maps between doubly connected domains: explicit models, the
Fourier solution of the annulus Dirichlet problem and a verifier.

A map is a complex-valued function h with Wirtinger derivatives h_z and
h_z̄. It preserves orientation where |h_z| > |h_z̄|; the verifier checks
this Jacobian margin together with harmonicity, boundary correspondence
and the degree of the map.
"""

import math
from abc import abstractmethod
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .affine_opt import affine_modulus
from .canonical import Annulus, DoubleTeichmullerUnit, nitsche_existence, ring_to_domain
from .condenser import CondenserOptions, modulus
from .const import (
    BOUNDARY_TOL,
    DEFAULT_BOUNDARY_SAMPLES,
    DEFAULT_CIRCLE_VERTICES,
    DEFAULT_TRUNCATION,
    EPSILON_MAX,
    EPSILON_MIN,
    JACOBIAN_ANGLES,
    JACOBIAN_RADII,
    MAP_AFFINE,
    MAP_ANNULUS_DIRICHLET,
    MAP_POWER_SHEAR,
    MAP_RADIAL_NITSCHE,
    MAP_TYPE_KEY,
    MAP_TYPES,
    PKG_NAME,
    SLIT_CLEARANCE,
    STATUS_ANSATZ_FAILED,
    STATUS_BOUNDARY,
    STATUS_EXISTS,
    STATUS_NONEXISTENT,
)
from .exceptions import (
    ConstructionFailedError,
    HypothesisViolatedError,
    InvalidInputError,
    UndersampledError,
)
from .geometry import (
    EXTERIOR,
    POLYGON,
    RAYS,
    AffineMap,
    BoundaryComponent,
    DoublyConnectedDomain,
    UnboundedComponent,
    apply_affine,
    component_distance,
    convex_hull,
)

_LOGGER = getLogger(PKG_NAME)


# Conformal parametrizations of A(1, R) onto a target ring


class ConformalMap(object):
    """Univalent analytic map on a neighbourhood of the closed annulus A(1, R)."""

    name = None

    @abstractmethod
    def __call__(self, z):
        pass

    @abstractmethod
    def derivative(self, z):
        pass

    def check(self, R: float) -> None:
        """Raise InvalidInputError if the map is not univalent on A(1, R)."""
        pass

    def to_dict(self):
        return {"name": self.name}


class IdentityMap(ConformalMap):
    name = "identity"

    def __call__(self, z):
        return np.asarray(z, dtype=complex)

    def derivative(self, z):
        return np.ones_like(np.asarray(z, dtype=complex))


class EccentricAnnulusMap(ConformalMap):
    """
    Disk automorphism z ↦ (z − a)/(1 − a·z), real |a| < 1; it sends A(1, R)
    onto the region between the unit circle and an off-center circle.
    """

    name = "eccentric"

    def __init__(self, a: float):
        if not -1 < a < 1:
            raise InvalidInputError(f"Eccentricity parameter must lie in (−1, 1), got {a}")
        self.a = float(a)

    def __call__(self, z):
        return (z - self.a) / (1 - self.a * z)

    def derivative(self, z):
        return (1 - self.a**2) / (1 - self.a * z) ** 2

    def check(self, R):
        if abs(self.a) * R >= 1:
            raise InvalidInputError(
                f"Pole 1/a={1 / self.a:.4g} lies inside the closed annulus of radius {R}"
            )

    def to_dict(self):
        return {"name": self.name, "param": self.a}


class JoukowskiPerturbation(ConformalMap):
    """z ↦ z + c/z, univalent on |z| > √|c|."""

    name = "joukowski"

    def __init__(self, c: float):
        if not abs(c) < 1:
            raise InvalidInputError(f"Joukowski parameter must satisfy |c| < 1, got {c}")
        self.c = complex(c)

    def __call__(self, z):
        return z + self.c / z

    def derivative(self, z):
        return 1 - self.c / z**2

    def to_dict(self):
        return {"name": self.name, "param": self.c}


CONFORMAL_MAPS = {cls.name: cls for cls in (IdentityMap, EccentricAnnulusMap, JoukowskiPerturbation)}


def conformal_from_dict(data: Dict) -> ConformalMap:
    """
    :param dict data: {"name": ..., "param": ...}
    :return ConformalMap: parametrization
    """
    name = data.get("name")
    if name not in CONFORMAL_MAPS:
        raise InvalidInputError(
            f"Unknown conformal map '{name}'; choose from: {', '.join(CONFORMAL_MAPS)}"
        )
    if name == IdentityMap.name:
        return IdentityMap()
    param = data.get("param")
    if isinstance(param, (list, tuple)):
        param = complex(*param)
        if name == EccentricAnnulusMap.name:
            param = param.real
    return CONFORMAL_MAPS[name](param)


def conformal_image(f: ConformalMap, R: float, vertices: int = DEFAULT_CIRCLE_VERTICES) -> DoublyConnectedDomain:
    """
    Polygonal target f(A(1, R)).

    :param ConformalMap f: parametrization
    :param float R: outer radius
    :param int vertices: polygon vertex count per boundary curve
    :return DoublyConnectedDomain: image domain
    """
    f.check(R)
    circle = np.exp(2j * math.pi * np.arange(vertices) / vertices)
    return DoublyConnectedDomain(
        BoundaryComponent.polygon(f(circle)),
        UnboundedComponent.exterior(f(R * circle)),
    )


# Map models


class HarmonicMap(object):
    """
    Base for harmonic map models.

    Each model must implement the following methods:
        - evaluate
        - derivatives
        - to_dict / from_dict
    """

    map_type = None

    @abstractmethod
    def evaluate(self, z) -> np.ndarray:
        pass

    @abstractmethod
    def derivatives(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """
        Wirtinger derivatives h_z and h_z̄ at the given points.
        """
        pass

    def valid(self, z) -> np.ndarray:
        """Points where the model is defined."""
        return np.ones(np.shape(z), dtype=bool)

    def jacobian_margin(self, z) -> np.ndarray:
        """|h_z| − |h_z̄|; the Jacobian is |h_z|² − |h_z̄|²."""
        hz, hzbar = self.derivatives(z)
        return np.abs(hz) - np.abs(hzbar)

    def __call__(self, z):
        return self.evaluate(z)

    @abstractmethod
    def to_dict(self) -> Dict:
        pass

    @classmethod
    def from_dict(cls, data: Dict) -> "HarmonicMap":
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.__class__.__name__}>"


def _all_map_classes(base=HarmonicMap):
    for sub in base.__subclasses__():
        yield sub
        yield from _all_map_classes(sub)


def map_by_type() -> Dict[str, type]:
    """
    Return a dict of map model classes indexed by descriptor type

    :return Dict[str, type]: model classes
    """
    from . import sc_construction  # noqa: F401 registers the SC shear model

    return {cls.map_type: cls for cls in _all_map_classes() if cls.map_type}


def map_from_dict(data: Dict) -> HarmonicMap:
    """
    Rebuild a map model from its descriptor.

    :param dict data: descriptor with a 'type' entry
    :return HarmonicMap: model
    :raise InvalidInputError: for unknown types
    """
    models = map_by_type()
    kind = data.get(MAP_TYPE_KEY) if isinstance(data, dict) else None
    if kind not in models:
        raise InvalidInputError(f"Unknown map type {kind!r}; choose from: {', '.join(MAP_TYPES)}")
    return models[kind].from_dict(data)


def _complex_list(values):
    return [complex(*v) if isinstance(v, (list, tuple)) else complex(v) for v in values]


class AnnulusHarmonicMap(HarmonicMap):
    """
    Harmonic function on A(1, ρ) as a truncated Fourier–Laurent series:

    h = A₀ + B₀·log r + Σ_{n≠0} (A_n r^|n| + B_n r^−|n|) e^{inθ}
    """

    map_type = MAP_ANNULUS_DIRICHLET

    def __init__(self, rho, freqs, A, B, spectral_tail=0.0, reconstruction_error=0.0, metadata=None):
        self.rho = float(rho)
        self.freqs = np.asarray(freqs, dtype=int)
        self.A = np.asarray(A, dtype=complex)
        self.B = np.asarray(B, dtype=complex)
        self.spectral_tail = float(spectral_tail)
        self.reconstruction_error = float(reconstruction_error)
        self.metadata = metadata or {}

    @property
    def truncation(self) -> int:
        return int(np.max(np.abs(self.freqs)))

    def _terms(self):
        pos = self.freqs > 0
        neg = self.freqs < 0
        zero = self.freqs == 0
        return (
            self.freqs[pos],
            self.A[pos],
            self.B[pos],
            -self.freqs[neg],
            self.A[neg],
            self.B[neg],
            self.A[zero].sum(),
            self.B[zero].sum(),
        )

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()[:, None]
        m_pos, a_pos, b_pos, m_neg, a_neg, b_neg, a0, b0 = self._terms()
        zc = np.conj(flat)
        out = a0 + b0 * np.log(np.abs(flat[:, 0]))
        out = out + (a_pos * flat**m_pos + b_pos * zc ** (-m_pos)).sum(axis=1)
        out = out + (a_neg * zc**m_neg + b_neg * flat ** (-m_neg)).sum(axis=1)
        return out.reshape(z.shape)

    def derivatives(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()[:, None]
        zc = np.conj(flat)
        m_pos, a_pos, b_pos, m_neg, a_neg, b_neg, _, b0 = self._terms()
        hz = b0 / (2 * flat[:, 0])
        hz = hz + (m_pos * a_pos * flat ** (m_pos - 1)).sum(axis=1)
        hz = hz - (m_neg * b_neg * flat ** (-m_neg - 1)).sum(axis=1)
        hzbar = b0 / (2 * zc[:, 0])
        hzbar = hzbar - (m_pos * b_pos * zc ** (-m_pos - 1)).sum(axis=1)
        hzbar = hzbar + (m_neg * a_neg * zc ** (m_neg - 1)).sum(axis=1)
        return hz.reshape(z.shape), hzbar.reshape(z.shape)

    def valid(self, z):
        r = np.abs(z)
        return (r >= 1 - 1e-12) & (r <= self.rho * (1 + 1e-12))

    def to_dict(self):
        return {
            MAP_TYPE_KEY: self.map_type,
            "rho": self.rho,
            "freqs": self.freqs,
            "A": self.A,
            "B": self.B,
            "spectral_tail": self.spectral_tail,
            "reconstruction_error": self.reconstruction_error,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data["rho"],
            data["freqs"],
            _complex_list(data["A"]),
            _complex_list(data["B"]),
            data.get("spectral_tail", 0.0),
            data.get("reconstruction_error", 0.0),
            data.get("metadata"),
        )

    def __repr__(self):
        return f"<{self.__class__.__name__}(rho={self.rho:g}, N={self.truncation})>"


def solve_annulus_dirichlet(rho: float, inner_data, outer_data, truncation: int = DEFAULT_TRUNCATION) -> AnnulusHarmonicMap:
    """
    Harmonic function on A(1, ρ) with the given boundary values.

    Boundary data are samples at the equispaced angles 2πk/M on |z| = 1 and
    |z| = ρ. Each Fourier mode is matched separately.

    :param float rho: outer radius, > 1
    :param Sequence[complex] inner_data: values on |z| = 1
    :param Sequence[complex] outer_data: values on |z| = ρ
    :param int truncation: highest frequency N kept
    :return AnnulusHarmonicMap: solution
    :raise UndersampledError: if M < 2N + 1
    """
    if not (np.isfinite(rho) and rho > 1):
        raise InvalidInputError(f"Outer radius must exceed 1, got {rho}")
    inner = np.asarray(inner_data, dtype=complex)
    outer = np.asarray(outer_data, dtype=complex)
    if inner.shape != outer.shape or inner.ndim != 1:
        raise InvalidInputError("Inner and outer data must be 1-D arrays of equal length")
    samples = inner.size
    if truncation < 0 or samples < 2 * truncation + 1:
        raise UndersampledError(samples, truncation)
    c_in = np.fft.fft(inner) / samples
    c_out = np.fft.fft(outer) / samples
    freqs = np.arange(-truncation, truncation + 1)
    ci, co = c_in[freqs % samples], c_out[freqs % samples]
    m = np.abs(freqs)
    q = rho ** (-m.astype(float))
    with np.errstate(divide="ignore", invalid="ignore"):
        A = np.where(m > 0, (co * q - ci * q * q) / (1 - q * q), ci)
        B = np.where(m > 0, ci - A, (co - ci) / math.log(rho))

    energy = np.abs(ci) ** 2 + np.abs(co) ** 2
    octave = m > truncation // 2
    total = energy.sum()
    tail = math.sqrt(energy[octave].sum() / total) if total > 0 else 0.0

    hmap = AnnulusHarmonicMap(rho, freqs, A, B, spectral_tail=tail)
    theta = 2 * math.pi * np.arange(samples) / samples
    circle = np.exp(1j * theta)
    hmap.reconstruction_error = float(
        max(
            np.max(np.abs(hmap.evaluate(circle) - inner)),
            np.max(np.abs(hmap.evaluate(rho * circle) - outer)),
        )
    )
    _LOGGER.debug(
        f"Annulus Dirichlet: rho={rho:.6g}, N={truncation}, M={samples}, "
        f"tail={tail:.2e}, reconstruction={hmap.reconstruction_error:.2e}"
    )
    return hmap


def construct_h_epsilon(
    f: ConformalMap,
    R: float,
    epsilon: float,
    truncation: int = DEFAULT_TRUNCATION,
    samples: int = DEFAULT_BOUNDARY_SAMPLES,
) -> AnnulusHarmonicMap:
    """
    Harmonic h on A(1, (1+ε)R) with h = f on |z| = 1 and
    h(z) = f(z/(1+ε)) on |z| = (1+ε)R.

    :param ConformalMap f: conformal parametrization of the target
    :param float R: outer radius of f's annulus
    :param float epsilon: stretch, ≥ 0; ε = 0 reproduces f on A(1, R)
    :param int truncation: Fourier truncation N
    :param int samples: boundary samples M
    :return AnnulusHarmonicMap: the map, with f, R and ε in its metadata
    """
    if not (np.isfinite(R) and R > 1):
        raise InvalidInputError(f"R must exceed 1, got {R}")
    if not (np.isfinite(epsilon) and epsilon >= 0):
        raise InvalidInputError(f"epsilon must be nonnegative, got {epsilon}")
    f.check(R)
    theta = 2 * math.pi * np.arange(samples) / samples
    circle = np.exp(1j * theta)
    rho = (1 + epsilon) * R
    hmap = solve_annulus_dirichlet(rho, f(circle), f(R * circle), truncation)
    hmap.metadata = {"f": f.to_dict(), "R": R, "epsilon": epsilon}
    return hmap


def polar_grid(r_in: float, r_out: float, radii: int = JACOBIAN_RADII, angles: int = JACOBIAN_ANGLES) -> np.ndarray:
    """Points r·e^{iθ} on a (radii × angles) grid, boundary circles included."""
    r = np.linspace(r_in, r_out, radii)
    theta = 2 * math.pi * np.arange(angles) / angles
    return r[:, None] * np.exp(1j * theta)[None, :]


def annulus_margin(hmap: HarmonicMap, r_in: float, r_out: float, radii=JACOBIAN_RADII, angles=JACOBIAN_ANGLES):
    """
    Minimum Jacobian margin on the interior and on the boundary circles.

    :return (float, float): interior minimum, boundary minimum
    """
    margin = hmap.jacobian_margin(polar_grid(r_in, r_out, radii, angles))
    interior = float(np.min(margin[1:-1])) if radii > 2 else math.inf
    boundary = float(min(margin[0].min(), margin[-1].min()))
    return interior, boundary


@dataclass
class EpsilonSearch:
    """
    Largest ε found with a positive Jacobian on the closed annulus, the
    bracket that bisection stopped at, and every (ε, margin) tried.
    """

    epsilon: float
    bracket: Tuple[float, float]
    table: pd.DataFrame


def max_epsilon(
    f: ConformalMap,
    R: float,
    tolerance: float = 1e-3,
    sweep: int = 16,
    truncation: int = DEFAULT_TRUNCATION,
    samples: int = DEFAULT_BOUNDARY_SAMPLES,
) -> EpsilonSearch:
    """
    Largest ε ∈ (0, 1] for which h_ε is orientation preserving.

    A log-spaced sweep brackets the threshold from the largest passing
    sweep point, then bisection narrows the bracket to the tolerance.

    :param ConformalMap f: conformal parametrization of the target
    :param float R: outer radius of f's annulus
    :param float tolerance: bracket width at which bisection stops
    :param int sweep: number of sweep points
    :return EpsilonSearch: best ε, final bracket and the full table
    :raise ConstructionFailedError: if even the smallest ε fails
    """
    rows = []

    def trial(eps):
        hmap = construct_h_epsilon(f, R, eps, truncation, samples)
        interior, boundary = annulus_margin(hmap, 1.0, hmap.rho)
        margin = min(interior, boundary)
        rows.append({"epsilon": eps, "margin": margin, "passed": margin > 0})
        return margin > 0

    if not trial(EPSILON_MIN):
        raise ConstructionFailedError(
            f"h_epsilon is not orientation preserving even at epsilon={EPSILON_MIN:g}"
        )
    eps_grid = np.geomspace(EPSILON_MIN, EPSILON_MAX, sweep)[1:]
    passed = [trial(e) for e in eps_grid]
    if not all(passed) and any(passed[passed.index(False):]):
        _LOGGER.warning("Jacobian positivity is not monotone in epsilon on the sweep")
    if passed[-1]:
        table = pd.DataFrame(rows).sort_values("epsilon").reset_index(drop=True)
        return EpsilonSearch(EPSILON_MAX, (EPSILON_MAX, EPSILON_MAX), table)
    # bracket above the largest passing sweep point
    last_pass = max((i for i, ok in enumerate(passed) if ok), default=-1)
    lo = eps_grid[last_pass] if last_pass >= 0 else EPSILON_MIN
    hi = eps_grid[last_pass + 1]
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if trial(mid):
            lo = mid
        else:
            hi = mid
    _LOGGER.info(f"Largest admissible epsilon {lo:.6g} (bracket [{lo:.6g}, {hi:.6g}])")
    table = pd.DataFrame(rows).sort_values("epsilon").reset_index(drop=True)
    return EpsilonSearch(float(lo), (float(lo), float(hi)), table)


def convergence_diagnostics(
    f: ConformalMap,
    R: float,
    epsilons,
    truncation: int = DEFAULT_TRUNCATION,
    samples: int = DEFAULT_BOUNDARY_SAMPLES,
) -> pd.DataFrame:
    """
    Distance of h_ε from f on A(1, R) as ε → 0.

    :param ConformalMap f: conformal parametrization
    :param float R: outer radius
    :param Iterable[float] epsilons: stretches to test
    :return pandas.DataFrame: sup |h_ε − f|, sup |∂h_ε − f'|, sup |∂̄h_ε| and min |f'|
    """
    pts = polar_grid(1.0, R, 32, 128)
    fp = f.derivative(pts)
    rows = []
    for eps in epsilons:
        hmap = construct_h_epsilon(f, R, eps, truncation, samples)
        hz, hzbar = hmap.derivatives(pts)
        rows.append(
            {
                "epsilon": eps,
                "sup_value": float(np.max(np.abs(hmap.evaluate(pts) - f(pts)))),
                "sup_hz": float(np.max(np.abs(hz - fp))),
                "sup_hzbar": float(np.max(np.abs(hzbar))),
                "min_fprime": float(np.min(np.abs(fp))),
            }
        )
    return pd.DataFrame(rows)


class RadialNitscheMap(HarmonicMap):
    """h(z) = a·z + b/z̄"""

    map_type = MAP_RADIAL_NITSCHE

    def __init__(self, a: float, b: float):
        self.a = float(a)
        self.b = float(b)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return self.a * z + self.b / np.conj(z)

    def derivatives(self, z):
        z = np.asarray(z, dtype=complex)
        return np.full(z.shape, complex(self.a)), -self.b / np.conj(z) ** 2

    def valid(self, z):
        return np.abs(z) > 0

    def to_dict(self):
        return {MAP_TYPE_KEY: self.map_type, "a": self.a, "b": self.b}

    @classmethod
    def from_dict(cls, data):
        return cls(data["a"], data["b"])

    def __repr__(self):
        return f"<{self.__class__.__name__}(a={self.a:g}, b={self.b:g})>"


@dataclass
class NitscheResult:
    status: str
    map: Optional[RadialNitscheMap]
    message: str = ""

    def to_dict(self):
        return {
            "status": self.status,
            "map": None if self.map is None else self.map.to_dict(),
            "message": self.message,
        }


def _radial_coefficients(r, R, rstar, Rstar):
    a, b = np.linalg.solve(np.array([[r, 1 / r], [R, 1 / R]]), np.array([rstar, Rstar]))
    return float(a), float(b)


def radial_nitsche_map(r: float, R: float, rstar: float, Rstar: float) -> NitscheResult:
    """
    Radial harmonic map A(r, R) → A(r*, R*) with |h| = r* on |z| = r and
    |h| = R* on |z| = R.

    :return NitscheResult: 'exists', 'boundary-degenerate' (Jacobian vanishes
        on |z| = r), 'nonexistent', or a fallback status when the radial
        solution fails numerically although existence holds
    """
    for name, v in (("r", r), ("R", R), ("r*", rstar), ("R*", Rstar)):
        if not (np.isfinite(v) and v > 0):
            raise InvalidInputError(f"{name} must be positive, got {v}")
    if not (R > r and Rstar > rstar):
        raise InvalidInputError("Need R > r and R* > r*")
    if not nitsche_existence(R / r, Rstar / rstar):
        return NitscheResult(
            STATUS_NONEXISTENT,
            None,
            f"R*/r* = {Rstar / rstar:.6g} is below ½(R/r + r/R) = {0.5 * (R / r + r / R):.6g}",
        )
    for attempt in ("direct", "normalized"):
        if attempt == "direct":
            a, b = _radial_coefficients(r, R, rstar, Rstar)
        else:
            a1, b1 = _radial_coefficients(1.0, R / r, 1.0, Rstar / rstar)
            a, b = rstar * a1 / r, rstar * r * b1
        slack = a * r * r - b
        if a > 0 and slack >= -1e-12 * a * r * r:
            if abs(slack) <= 1e-12 * a * r * r:
                return NitscheResult(
                    STATUS_BOUNDARY,
                    RadialNitscheMap(a, a * r * r),
                    "Jacobian vanishes on the inner circle",
                )
            return NitscheResult(STATUS_EXISTS, RadialNitscheMap(a, b))
        _LOGGER.debug(f"Radial ansatz ({attempt}) gave a={a:.6g}, b={b:.6g}")
    return NitscheResult(
        STATUS_ANSATZ_FAILED,
        None,
        "existence holds but the radial ansatz did not produce a homeomorphism",
    )


class PowerShearMap(HarmonicMap):
    """
    h(z) = Re(z^α) + i·Im z on C ∖ (−∞, 0], principal branch.

    Maps G(a^{1/α}, b^{1/α}) onto G(a, b) for 1 < α < 3/2.
    """

    map_type = MAP_POWER_SHEAR

    def __init__(self, alpha: float):
        self.alpha = float(alpha)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return np.real(z**self.alpha) + 1j * np.imag(z)

    def derivatives(self, z):
        z = np.asarray(z, dtype=complex)
        g = self.alpha * z ** (self.alpha - 1)
        return 0.5 * (g + 1), 0.5 * (np.conj(g) - 1)

    def valid(self, z):
        z = np.asarray(z, dtype=complex)
        return ~((np.imag(z) == 0) & (np.real(z) <= 0))

    def to_dict(self):
        return {MAP_TYPE_KEY: self.map_type, "alpha": self.alpha}

    @classmethod
    def from_dict(cls, data):
        return cls(data["alpha"])

    def __repr__(self):
        return f"<{self.__class__.__name__}(alpha={self.alpha:g})>"


@dataclass
class PowerShearResult:
    map: PowerShearMap
    source: DoubleTeichmullerUnit
    target: DoubleTeichmullerUnit

    def to_dict(self):
        return {
            "map": self.map.to_dict(),
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
        }


def _check_power(a, b, alpha, allow_unit=False):
    if not 0 < a < b < 1:
        raise InvalidInputError(f"Need 0 < a < b < 1, got a={a}, b={b}")
    low_ok = alpha >= 1 if allow_unit else alpha > 1
    if not (low_ok and alpha < 1.5):
        raise InvalidInputError(f"Power exponent must lie in (1, 3/2), got {alpha}")


def power_shear_map(a: float, b: float, alpha: float) -> PowerShearResult:
    """
    Harmonic homeomorphism G(a^{1/α}, b^{1/α}) → G(a, b).

    :param float a: inner slit start, 0 < a < b
    :param float b: inner slit end, b < 1
    :param float alpha: exponent in (1, 3/2)
    :return PowerShearResult: map with source and target rings
    """
    _check_power(a, b, alpha)
    source = DoubleTeichmullerUnit(a ** (1 / alpha), b ** (1 / alpha))
    return PowerShearResult(PowerShearMap(alpha), source, DoubleTeichmullerUnit(a, b))


def secant_slope_inequality(a: float, b: float, alpha: float) -> bool:
    """
    Secants of the concave curve x ↦ x^{1/α} through (b, b^{1/α}), (1, 1)
    and (b/a, (b/a)^{1/α}): whether the left slope exceeds the right one,
    the comparison behind Mod G(a^{1/α}, b^{1/α}) > Mod G(a, b).

    Holds for every 1 < α < 3/2; fails at α = 1 where both slopes equal 1.
    """
    _check_power(a, b, alpha, allow_unit=True)
    p = 1 / alpha
    left = (1 - b**p) / (1 - b)
    right = ((b / a) ** p - 1) / (b / a - 1)
    return bool(left > right)


class AffineHarmonicMap(HarmonicMap):
    """Real-affine map z ↦ a·z + b·z̄ + c, harmonic everywhere."""

    map_type = MAP_AFFINE

    def __init__(self, affine: AffineMap):
        self.affine = affine

    def evaluate(self, z):
        return self.affine(np.asarray(z, dtype=complex))

    def derivatives(self, z):
        shape = np.shape(z)
        return np.full(shape, self.affine.a), np.full(shape, self.affine.b)

    def to_dict(self):
        return {
            MAP_TYPE_KEY: self.map_type,
            "a": self.affine.a,
            "b": self.affine.b,
            "c": self.affine.c,
        }

    @classmethod
    def from_dict(cls, data):
        a, b, c = _complex_list([data["a"], data["b"], data.get("c", 0)])
        return cls(AffineMap(a, b, c))


@dataclass
class AffineInverseResult:
    """Source f(Ω*) and the harmonic map f⁻¹ back onto Ω*."""

    map: AffineHarmonicMap
    source: DoublyConnectedDomain
    target_modulus: float
    source_modulus: float


def affine_inverse_map(target: DoublyConnectedDomain, affine: AffineMap) -> Tuple[AffineHarmonicMap, DoublyConnectedDomain]:
    """
    For Ω = f(Ω*), the affine map f⁻¹ is a harmonic homeomorphism Ω → Ω*.

    :param DoublyConnectedDomain target: Ω*
    :param AffineMap affine: f
    :return (AffineHarmonicMap, DoublyConnectedDomain): f⁻¹ and Ω
    """
    return AffineHarmonicMap(affine.inverse()), apply_affine(affine, target)


def affine_inverse_construction(
    target: DoublyConnectedDomain,
    options: CondenserOptions = None,
    **search_kwargs,
) -> AffineInverseResult:
    """
    Find an affine image of Ω* whose modulus exceeds Mod Ω*, and the
    harmonic map from it back onto Ω*.

    :param DoublyConnectedDomain target: Ω*
    :param CondenserOptions options: condenser options
    :return AffineInverseResult: construction
    :raise HypothesisViolatedError: if no affine image beats Mod Ω*
    """
    plain = modulus(target, options)
    best = affine_modulus(target, options=options, **search_kwargs)
    if not best.value - best.error_estimate > plain.value + plain.error_estimate:
        raise HypothesisViolatedError(
            f"Affine modulus {best.value:.6g} does not exceed the modulus {plain.value:.6g}"
        )
    affine = best.maximizer.to_affine()
    hmap, source = affine_inverse_map(target, affine)
    return AffineInverseResult(hmap, source, plain.value, best.value)


# Verification


@dataclass
class VerifyOptions:
    radii: int = JACOBIAN_RADII
    angles: int = JACOBIAN_ANGLES
    grid: int = 120
    clearance: float = SLIT_CLEARANCE
    stencil: float = 1e-3
    boundary_samples: int = 2048
    loop_samples: int = 4096
    boundary_tol: float = BOUNDARY_TOL
    max_skipped: float = 0.01


@dataclass
class MapVerificationReport:
    """Numerical checks of a candidate harmonic homeomorphism."""

    passed: bool
    jacobian_margin: float
    boundary_margin: Optional[float]
    boundary_degenerate: bool
    harmonic_residual: float
    boundary_distance: float
    winding_number: Optional[int]
    skipped_fraction: float
    samples: int
    reasons: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "passed": self.passed,
            "jacobian_margin": self.jacobian_margin,
            "boundary_margin": self.boundary_margin,
            "boundary_degenerate": self.boundary_degenerate,
            "harmonic_residual": self.harmonic_residual,
            "boundary_distance": self.boundary_distance,
            "winding_number": self.winding_number,
            "skipped_fraction": self.skipped_fraction,
            "samples": self.samples,
            "reasons": self.reasons,
        }


def centered_annulus(domain: DoublyConnectedDomain, rtol: float = 1e-9) -> Optional[Tuple[float, float]]:
    """Radii (r, R) for a realization of an annulus centered at 0."""
    if not isinstance(domain.canonical_tag, Annulus):
        return None
    if domain.bounded.kind != POLYGON or domain.unbounded.kind != EXTERIOR:
        return None
    radii = []
    for v in (domain.bounded.vertices, domain.unbounded.polygon.vertices):
        mod = np.abs(v)
        if mod.min() <= 0 or np.ptp(mod) > rtol * mod.max():
            return None
        radii.append(float(mod.mean()))
    return tuple(radii)


def _frame_points(domain, n):
    if domain.unbounded.kind == EXTERIOR:
        v = domain.unbounded.polygon.vertices
        xs = np.linspace(v.real.min(), v.real.max(), n)
        ys = np.linspace(v.imag.min(), v.imag.max(), n)
    else:
        center, radius = domain.extent()
        xs = np.linspace(center.real - 2 * radius, center.real + 2 * radius, n)
        ys = np.linspace(center.imag - 2 * radius, center.imag + 2 * radius, n)
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def _boundary_points(domain, annulus, count):
    if annulus is not None:
        circle = np.exp(2j * math.pi * np.arange(count) / count)
        return np.concatenate([annulus[0] * circle, annulus[1] * circle])
    pieces = []
    a, b = domain.bounded.edges()
    per_edge = max(2, count // max(1, a.size))
    t = np.linspace(0, 1, per_edge)
    pieces.append((a[:, None] + t[None, :] * (b - a)[:, None]).ravel())
    if domain.unbounded.kind == EXTERIOR:
        a, b = domain.unbounded.polygon.edges()
        per_edge = max(2, count // a.size)
        t = np.linspace(0, 1, per_edge)
        pieces.append((a[:, None] + t[None, :] * (b - a)[:, None]).ravel())
    elif domain.unbounded.kind == RAYS:
        _, radius = domain.extent()
        t = np.linspace(0, 4 * radius, count)
        for ray in domain.unbounded.rays:
            pieces.append(ray.origin + t * ray.direction)
    return np.concatenate(pieces)


def separating_loop(domain: DoublyConnectedDomain, count: int = 4096) -> Optional[np.ndarray]:
    """
    Closed curve in the domain winding once around Ω_b.

    The circle of radius √(rR) for centered annuli, otherwise the boundary
    of the convex hull of Ω_b thickened by half the component distance.
    None when that curve leaves the domain.
    """
    annulus = centered_annulus(domain)
    phi = 2 * math.pi * np.arange(count) / count
    if annulus is not None:
        return math.sqrt(annulus[0] * annulus[1]) * np.exp(1j * phi)
    delta = 0.5 * component_distance(domain)
    hull = convex_hull(domain.bounded.vertices)
    direction = np.exp(1j * phi)
    support = hull[np.argmax(np.real(np.conj(direction)[:, None] * hull[None, :]), axis=1)]
    loop = support + delta * direction
    if not np.all(domain.contains(loop)):
        return None
    return loop


def winding_number(values, center) -> int:
    """Degree of a closed sampled curve about a point."""
    w = np.asarray(values) - center
    turns = np.angle(np.roll(w, -1) / w).sum() / (2 * math.pi)
    return int(round(turns))


def verify_map(
    hmap: HarmonicMap,
    source: DoublyConnectedDomain,
    target: DoublyConnectedDomain,
    options: VerifyOptions = None,
) -> MapVerificationReport:
    """
    Check that a map is a sense-preserving harmonic homeomorphism onto the target.

    Jacobian positivity is tested on a polar grid for centered annuli and on
    a clipped Cartesian grid otherwise. Boundary samples must land on the
    target boundary, and a loop around Ω_b must map with degree 1 about the
    target's Ω_b. The harmonicity residual is the largest five-point
    Laplacian scaled by the squared stencil step, away from the boundary;
    it is reported only and does not enter the verdict.

    :param HarmonicMap hmap: candidate map
    :param DoublyConnectedDomain source: source domain
    :param DoublyConnectedDomain target: target domain
    :param VerifyOptions options: sampling options
    :return MapVerificationReport: measurements and verdict
    """
    options = options or VerifyOptions()
    reasons = []
    annulus = centered_annulus(source)
    boundary_margin = None
    if annulus is not None:
        grid = polar_grid(annulus[0], annulus[1], options.radii, options.angles)
        interior = grid[1:-1].ravel()
        edge = np.concatenate([grid[0], grid[-1]])
        edge_margin = hmap.jacobian_margin(edge)
        finite = np.isfinite(edge_margin)
        boundary_margin = float(edge_margin[finite].min()) if finite.any() else None
    else:
        pts = _frame_points(source, options.grid)
        interior = pts[source.contains(pts, options.clearance)]
    if interior.size == 0:
        raise InvalidInputError("No interior sample points; the source domain is too thin")

    ok = hmap.valid(interior)
    with np.errstate(all="ignore"):
        margin = hmap.jacobian_margin(interior)
        values = hmap.evaluate(interior)
    good = ok & np.isfinite(margin) & np.isfinite(values)
    skipped = 1 - good.mean()
    jac = float(margin[good].min()) if good.any() else -math.inf
    if jac <= 0:
        reasons.append(f"Jacobian margin {jac:.3e} is not positive")
    if boundary_margin is not None and boundary_margin < -1e-9:
        reasons.append(f"Jacobian margin {boundary_margin:.3e} on the boundary circles is negative")
    if skipped > options.max_skipped:
        reasons.append(f"{100 * skipped:.1f}% of samples could not be evaluated")

    delta = options.stencil
    far = interior[good & (source.distance_to_boundary(interior) > 2 * delta)]
    if far.size:
        with np.errstate(all="ignore"):
            lap = (
                hmap.evaluate(far + delta)
                + hmap.evaluate(far - delta)
                + hmap.evaluate(far + 1j * delta)
                + hmap.evaluate(far - 1j * delta)
                - 4 * hmap.evaluate(far)
            )
        residual = float(np.nanmax(np.abs(lap)))
    else:
        residual = math.nan

    with np.errstate(all="ignore"):
        images = hmap.evaluate(_boundary_points(source, annulus, options.boundary_samples))
    images = images[np.isfinite(images)]
    bdist = float(target.distance_to_boundary(images).max()) if images.size else math.inf
    if not bdist < options.boundary_tol:
        reasons.append(f"Boundary images are {bdist:.3e} from the target boundary")

    loop = separating_loop(source, options.loop_samples)
    degree = None
    if loop is None:
        reasons.append("No separating loop inside the source domain")
    else:
        with np.errstate(all="ignore"):
            image = hmap.evaluate(loop)
        if np.all(np.isfinite(image)):
            degree = winding_number(image, target.bounded.centroid)
        if degree != 1:
            reasons.append(f"Image of a separating loop has degree {degree}")

    degenerate = boundary_margin is not None and abs(boundary_margin) <= 1e-9 and jac > 0
    report = MapVerificationReport(
        passed=not reasons,
        jacobian_margin=jac,
        boundary_margin=boundary_margin,
        boundary_degenerate=bool(degenerate),
        harmonic_residual=residual,
        boundary_distance=bdist,
        winding_number=degree,
        skipped_fraction=float(skipped),
        samples=int(interior.size),
        reasons=reasons,
    )
    _LOGGER.info(
        "Verification {}: margin={:.3e}, boundary distance={:.3e}, degree={}".format(
            "passed" if report.passed else "failed", jac, bdist, degree
        )
    )
    return report


def annulus_domains(hmap: AnnulusHarmonicMap, vertices: int = 2048):
    """Source A(1, ρ) and target f(A(1, R)) of a constructed h_ε."""
    meta = hmap.metadata
    if "f" not in meta:
        raise InvalidInputError("Map lacks the conformal parametrization it was built from")
    f = conformal_from_dict(meta["f"])
    source = ring_to_domain(Annulus(1.0, hmap.rho), vertices)
    return source, conformal_image(f, meta["R"], vertices)
