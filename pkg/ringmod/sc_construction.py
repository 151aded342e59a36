"""
Schwarz–Christoffel shear construction between double Teichmüller rings.

φ_b maps the upper half-plane onto the region above the polyline
(−∞, −1] → (−1 + bi) → 1 → [1, ∞) (Re w < −1 edge at height b).
Its derivative is φ'(z) = C (z + 1)^μ (z − 1)^(−μ) with μ = arctan(b/2)/π
and C > 0 fixed by φ(1) − φ(−1) = 2 − bi. Gluing
h(z) = Re φ_b(z) + i·Im z with its reflection in the real axis gives a
harmonic homeomorphism F(s_b, t_b) → F(s', t').
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from typing import Dict, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi, roots_legendre

from .canonical import DoubleTeichmuller, modulus_canonical, ring_to_domain
from .const import (
    BISECTION_TOL,
    MAP_SC_SHEAR,
    MAP_TYPE_KEY,
    MODULUS_TOL,
    PKG_NAME,
    QUADRATURE_NODES,
)
from .exceptions import (
    BracketFailureError,
    HypothesisViolatedError,
    InvalidInputError,
    NumericalError,
)
from .harmonic import HarmonicMap
from .utils import ordered_map

_LOGGER = getLogger(PKG_NAME)

SWEEP_EXPONENTS = range(-10, 21)
MIN_B_EXPONENT = -40
MAX_PREIMAGE_LOG = 60.0


@lru_cache(maxsize=None)
def _jacobi_rule(n: int, exponent: float):
    # weight (1 + x)^exponent on [−1, 1]
    return roots_jacobi(n, 0.0, exponent)


@lru_cache(maxsize=None)
def _legendre_rule(n: int):
    return roots_legendre(n)


@dataclass(frozen=True)
class GbModel:
    """Parameters of φ_b: height b, exponent μ, scale C and ∫_{−1}^{1} |φ'|/C."""

    b: float
    mu: float
    C: float
    J: float

    def to_dict(self):
        return {"b": self.b, "mu": self.mu, "C": self.C, "J": self.J}


def build_gb(b: float, nodes: int = QUADRATURE_NODES) -> GbModel:
    """
    Fix the constants of φ_b.

    J = ∫_{−1}^{1} (1 + x)^μ (1 − x)^(−μ) dx = 2πμ/sin(πμ) by Gauss–Jacobi,
    and C = √(4 + b²)/J.

    :param float b: height of the step, > 0
    :param int nodes: quadrature nodes
    :return GbModel: model constants
    """
    if not (np.isfinite(b) and b > 0):
        raise InvalidInputError(f"b must be positive, got {b}")
    mu = math.atan(b / 2) / math.pi
    _, weights = roots_jacobi(nodes, -mu, mu)
    J = float(np.sum(weights))
    exact = 2 * beta_fn(1 + mu, 1 - mu)
    if abs(J - exact) > 1e-10 * exact:
        raise NumericalError(f"Gauss–Jacobi integral {J} disagrees with {exact}")
    return GbModel(b=float(b), mu=mu, C=math.sqrt(4 + b * b) / J, J=J)


def _upper(z):
    z = np.asarray(z, dtype=complex)
    return np.real(z) + 1j * np.abs(np.imag(z))


def sc_derivative(model: GbModel, z) -> np.ndarray:
    """φ_b'(z) on the closed upper half-plane."""
    z = _upper(z)
    return model.C * np.exp(model.mu * (np.log(z + 1) - np.log(z - 1)))


def _integrate_from(model, anchor, z, nodes):
    """∫ φ' along the straight path from anchor = ±1 to each z."""
    mu = model.mu
    exponent = -mu if anchor == 1 else mu
    other = -anchor
    sign = 1.0 if anchor == 1 else -1.0
    d = z - anchor
    length = np.abs(d)
    u = np.where(length > 0, d / np.where(length > 0, length, 1), 1.0)
    u = np.real(u) + 1j * np.abs(np.imag(u))
    # (ζ − anchor)^exponent = s^exponent · u^exponent on the principal branch
    u_pow = np.exp(exponent * np.log(u))

    def smooth(s, rows=slice(None)):
        uu = u[rows][:, None]
        zeta = anchor + s * uu
        return model.C * u_pow[rows][:, None] * np.exp(sign * mu * np.log(zeta - other)) * uu

    total = np.zeros(z.shape, dtype=complex)
    x, w = _jacobi_rule(nodes, exponent)
    first = np.minimum(length, 1.0)
    s = first[:, None] * (1 + x[None, :]) / 2
    total += (first / 2) ** (exponent + 1) * np.sum(w * smooth(s), axis=1)

    xl, wl = _legendre_rule(nodes)
    lo = 1.0
    while np.any(length > lo):
        active = length > lo
        hi = np.minimum(length[active], 2 * lo)
        half = (hi - lo) / 2
        s = lo + half[:, None] * (1 + xl[None, :])
        integrand = s**exponent * smooth(s, active)
        total[active] += half * np.sum(wl * integrand, axis=1)
        lo *= 2
    return total


def sc_map(model: GbModel, z) -> np.ndarray:
    """
    φ_b on the closed upper half-plane, vectorized.

    Integrates φ' from the nearer prevertex: φ(1) = 1, φ(−1) = −1 + bi.
    The first unit of path length uses Gauss–Jacobi with the endpoint
    singularity as weight, the rest Gauss–Legendre panels of doubling length.

    :param GbModel model: map constants
    :param numpy.ndarray z: points with Im z ≥ 0
    :return numpy.ndarray: φ_b(z)
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.imag(z) < -1e-14 * np.maximum(1, np.abs(z))):
        raise InvalidInputError("sc_map is defined on the closed upper half-plane")
    flat = _upper(z).ravel()
    out = np.empty(flat.shape, dtype=complex)
    right = np.real(flat) >= 0
    for anchor, mask, base in ((1, right, 1 + 0j), (-1, ~right, complex(-1, model.b))):
        if mask.any():
            out[mask] = base + _integrate_from(model, anchor, flat[mask], QUADRATURE_NODES)
    return out.reshape(z.shape)


@dataclass
class SCResult:
    """Preimages of the target slit ends and the resulting source modulus."""

    b: float
    s_b: float
    t_b: float
    modulus: float
    residual_s: float
    residual_t: float

    def to_dict(self):
        return {
            "b": self.b,
            "s_b": self.s_b,
            "t_b": self.t_b,
            "modulus": self.modulus,
            "residual_s": self.residual_s,
            "residual_t": self.residual_t,
        }


def _preimage(model, target, side):
    # side = +1: solve φ(1 + e^v) = t'; side = −1: solve −φ(−1 − e^v) = s'
    def g(v):
        x = side * (1 + math.exp(v))
        return side * float(np.real(sc_map(model, np.array([x + 0j]))[0])) - target

    lo = -MAX_PREIMAGE_LOG
    if g(lo) > 0:
        raise BracketFailureError(f"Preimage of {side * target} lies too close to the prevertex")
    hi = 0.0
    while g(hi) < 0:
        hi += 2.0
        if hi > MAX_PREIMAGE_LOG:
            raise BracketFailureError(f"Could not bracket the preimage of {side * target}")
    v = bisect(g, lo, hi, xtol=BISECTION_TOL * 1e-2, maxiter=500)
    x = 1 + math.exp(v)
    return x, abs(g(v))


def solve_preimages(model: GbModel, s_prime: float, t_prime: float) -> SCResult:
    """
    Points t_b > 1 and −s_b < −1 with φ_b(t_b) = t' and φ_b(−s_b) = −s'.

    :param GbModel model: map constants
    :param float s_prime: target left ray start, > 1
    :param float t_prime: target right ray start, > 1
    :return SCResult: preimages, Mod F(s_b, t_b) and residuals
    """
    if not (s_prime > 1 and t_prime > 1):
        raise InvalidInputError(f"Need s', t' > 1, got s'={s_prime}, t'={t_prime}")
    t_b, res_t = _preimage(model, t_prime, 1)
    s_b, res_s = _preimage(model, s_prime, -1)
    mod = modulus_canonical(DoubleTeichmuller(s_b, t_b)).value
    _LOGGER.debug(f"b={model.b:.6g}: s_b={s_b:.10g}, t_b={t_b:.10g}, Mod={mod:.10g}")
    return SCResult(model.b, s_b, t_b, mod, res_s, res_t)


def sc_modulus(b: float, s_prime: float, t_prime: float) -> SCResult:
    """Mod F(s_b, t_b) as a function of b."""
    return solve_preimages(build_gb(b), s_prime, t_prime)


def sweep_b(s_prime: float, t_prime: float, bs, threads: int = None) -> pd.DataFrame:
    """
    Tabulate the construction over heights b.

    :return pandas.DataFrame: b, μ, C, s_b, t_b and Mod F(s_b, t_b) per row
    """

    def row(b):
        model = build_gb(b)
        res = solve_preimages(model, s_prime, t_prime)
        return {
            "b": b,
            "mu": model.mu,
            "C": model.C,
            "s_b": res.s_b,
            "t_b": res.t_b,
            "modulus": res.modulus,
        }

    return pd.DataFrame(ordered_map(row, list(bs), threads))


def solve_b(target_modulus: float, s_prime: float, t_prime: float) -> Tuple[GbModel, SCResult]:
    """
    Height b with Mod F(s_b, t_b) equal to the target.

    Mod F(s_b, t_b) decreases from Mod F(s', t') (b → 0) to 0 (b → ∞), so
    every target below Mod F(s', t') is reached. A sweep over b = 2^k
    brackets the root and bisection in log b refines it.

    :param float target_modulus: requested source modulus
    :param float s_prime: target left ray start
    :param float t_prime: target right ray start
    :return (GbModel, SCResult): model and preimages
    :raise HypothesisViolatedError: if target ≥ Mod F(s', t')
    :raise BracketFailureError: if the sweep cannot bracket the target
    """
    limit = modulus_canonical(DoubleTeichmuller(s_prime, t_prime)).value
    if not target_modulus > 0:
        raise InvalidInputError(f"Target modulus must be positive, got {target_modulus}")
    if target_modulus >= limit:
        raise HypothesisViolatedError(
            f"Target modulus {target_modulus:.6g} must be below Mod F(s', t') = {limit:.6g}"
        )

    def excess(log_b):
        return sc_modulus(2.0**log_b, s_prime, t_prime).modulus - target_modulus

    exponents = list(SWEEP_EXPONENTS)
    values = {k: excess(k) for k in exponents[:1]}
    k = exponents[0]
    while values[k] <= 0:
        k -= 1
        if k < MIN_B_EXPONENT:
            raise BracketFailureError("Target modulus is too close to Mod F(s', t')")
        values[k] = excess(k)
    lo = k
    hi = None
    for k in exponents:
        if k <= lo:
            continue
        values[k] = excess(k)
        if values[k] < 0:
            hi = k
            break
        lo = k
    if hi is None:
        raise BracketFailureError(
            f"Mod F(s_b, t_b) stays above {target_modulus:.6g} up to b = 2^{exponents[-1]}"
        )
    log_b = bisect(excess, lo, hi, xtol=1e-10, maxiter=500)
    model = build_gb(2.0**log_b)
    result = solve_preimages(model, s_prime, t_prime)
    if abs(result.modulus - target_modulus) > MODULUS_TOL:
        raise NumericalError(
            f"Modulus residual {abs(result.modulus - target_modulus):.3e} exceeds {MODULUS_TOL:g}"
        )
    _LOGGER.info(f"Solved b={model.b:.8g} for target modulus {target_modulus:.8g}")
    return model, result


class SCShearMap(HarmonicMap):
    """
    h(z) = Re φ_b(z) + i·Im z on the upper half-plane, extended by
    h(z̄) = conj(h(z)).
    """

    map_type = MAP_SC_SHEAR

    def __init__(self, model: GbModel, s_b: float, t_b: float, s_prime: float, t_prime: float):
        self.model = model
        self.s_b = float(s_b)
        self.t_b = float(t_b)
        self.s_prime = float(s_prime)
        self.t_prime = float(t_prime)

    @property
    def source_ring(self) -> DoubleTeichmuller:
        return DoubleTeichmuller(self.s_b, self.t_b)

    @property
    def target_ring(self) -> DoubleTeichmuller:
        return DoubleTeichmuller(self.s_prime, self.t_prime)

    def domains(self, vertices: int = 512):
        return ring_to_domain(self.source_ring, vertices), ring_to_domain(self.target_ring, vertices)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        phi = sc_map(self.model, _upper(z))
        return np.real(phi) + 1j * np.imag(z)

    def derivatives(self, z):
        z = np.asarray(z, dtype=complex)
        d = sc_derivative(self.model, z)
        hz = 0.5 * (d + 1)
        hzbar = 0.5 * (np.conj(d) - 1)
        lower = np.imag(z) < 0
        return np.where(lower, np.conj(hz), hz), np.where(lower, np.conj(hzbar), hzbar)

    def valid(self, z):
        z = np.asarray(z, dtype=complex)
        x = np.real(z)
        on_axis = np.imag(z) == 0
        on_slit = on_axis & ((x <= -self.s_b) | ((x >= -1) & (x <= 1)) | (x >= self.t_b))
        return ~on_slit

    def to_dict(self):
        return {
            MAP_TYPE_KEY: self.map_type,
            "b": self.model.b,
            "mu": self.model.mu,
            "C": self.model.C,
            "s_b": self.s_b,
            "t_b": self.t_b,
            "s_prime": self.s_prime,
            "t_prime": self.t_prime,
        }

    @classmethod
    def from_dict(cls, data: Dict):
        return cls(build_gb(data["b"]), data["s_b"], data["t_b"], data["s_prime"], data["t_prime"])

    def __repr__(self):
        return f"<{self.__class__.__name__}(b={self.model.b:g}, s_b={self.s_b:g}, t_b={self.t_b:g})>"


def assemble_shear_harmonic(model: GbModel, result: SCResult, s_prime: float, t_prime: float) -> SCShearMap:
    """
    Glue the shear of φ_b with its reflection into F(s_b, t_b) → F(s', t').

    :return SCShearMap: harmonic homeomorphism
    """
    return SCShearMap(model, result.s_b, result.t_b, s_prime, t_prime)


def seam_flux_jump(hmap: SCShearMap, samples: int = 256) -> float:
    """
    Largest jump of the normal derivative across the real seams
    (−s_b, −1) and (1, t_b), 2|Im φ_b'(x)|, where harmonicity could fail.

    :param SCShearMap hmap: glued map
    :param int samples: points per seam interval
    :return float: maximal jump
    """
    left = np.linspace(-hmap.s_b, -1, samples + 2)[1:-1]
    right = np.linspace(1, hmap.t_b, samples + 2)[1:-1]
    x = np.concatenate([left, right]) + 0j
    return float(np.max(2 * np.abs(np.imag(sc_derivative(hmap.model, x)))))
