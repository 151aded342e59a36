"""
Affine modulus: the supremum of Mod f(Ω) over real-affine maps f.

Conformal factors do not change the modulus, so the search runs over the
two-parameter shear family f_{θ,α}(z) = φ_α(e^{−iθ} z), θ ∈ [0, π),
α ∈ (0, 1], with φ_α(x, y) = (x, αy). A coarse (θ, log α) grid is
followed by a Nelder–Mead refinement.
"""

import math
from dataclasses import dataclass, field
from logging import getLogger
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .canonical import DoubleTeichmuller, ModulusEstimate, Teichmuller, recognize_collinear
from .condenser import CondenserOptions, modulus
from .const import (
    ATTAINED,
    BOUNDARY_LIMIT,
    CLASS_DEGENERATE,
    CLASS_DOUBLE_TEICHMULLER,
    CLASS_NOT_INVARIANT,
    CLASS_TEICHMULLER,
    DEFAULT_ALPHA_FLOOR,
    DEFAULT_ALPHA_GRID,
    DEFAULT_REFINE_ITERS,
    DEFAULT_THETA_GRID,
    DEFAULT_THETA_SAMPLES,
    EXISTS,
    INCONCLUSIVE,
    MODULUS_TOL,
    NELDER_MEAD_TOL,
    NONEXISTENT,
    PKG_NAME,
    UNDECIDED,
    WIDTH_TOL,
)
from .exceptions import InvalidInputError, NumericalError, OptimizerError
from .geometry import (
    INFINITY,
    AffineMap,
    DoublyConnectedDomain,
    ShearNormalForm,
    apply_affine,
    decompose_affine,
    diameter,
    projections_overlap_all_theta,
    width_and_direction,
)
from .utils import ordered_map

_LOGGER = getLogger(PKG_NAME)


def shear_map(theta: float, alpha: float) -> AffineMap:
    """
    f_{θ,α}(z) = φ_α(e^{−iθ} z)

    :param float theta: squeeze direction angle
    :param float alpha: squeeze factor in (0, 1]
    :return AffineMap: the shear
    """
    if not 0 < alpha <= 1:
        raise InvalidInputError(f"Shear factor must lie in (0, 1], got {alpha}")
    return ShearNormalForm(theta % math.pi, alpha).to_affine()


def shear_objective(
    domain: DoublyConnectedDomain,
    theta: float,
    alpha: float,
    options: CondenserOptions = None,
) -> ModulusEstimate:
    """
    Mod f_{θ,α}(Ω).

    :param DoublyConnectedDomain domain: domain to shear
    :param float theta: squeeze direction angle
    :param float alpha: squeeze factor in (0, 1]
    :param CondenserOptions options: condenser options for untagged images
    :return ModulusEstimate: modulus of the image
    """
    return modulus(apply_affine(shear_map(theta, alpha), domain), options)


@dataclass
class AffineModulusResult:
    """
    Outcome of the affine modulus search.

    attained_flag is 'attained' for an interior maximizer and
    'boundary-limit' when the best α sits at the search floor, so the
    supremum is approached as α → 0.
    """

    value: float
    error_estimate: float
    maximizer: ShearNormalForm
    attained_flag: str
    trace: List[Tuple[float, float, float]] = field(default_factory=list)

    def to_dict(self):
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "theta": self.maximizer.theta,
            "alpha": self.maximizer.alpha,
            "attained_flag": self.attained_flag,
        }


def affine_modulus(
    domain: DoublyConnectedDomain,
    theta_grid: int = DEFAULT_THETA_GRID,
    alpha_grid: int = DEFAULT_ALPHA_GRID,
    alpha_floor: float = DEFAULT_ALPHA_FLOOR,
    refine_iters: int = DEFAULT_REFINE_ITERS,
    options: CondenserOptions = None,
    threads: int = None,
    progressbar: bool = False,
) -> AffineModulusResult:
    """
    Maximize Mod f_{θ,α}(Ω) over θ ∈ [0, π) and α ∈ [alpha_floor, 1].

    :param DoublyConnectedDomain domain: non-degenerate domain
    :param int theta_grid: θ samples of the coarse grid
    :param int alpha_grid: log-spaced α samples of the coarse grid, α = 1 included
    :param float alpha_floor: smallest α searched
    :param int refine_iters: Nelder–Mead iteration cap
    :param CondenserOptions options: condenser options
    :param int threads: worker cap for the coarse grid
    :param bool progressbar: show a progress bar on stderr
    :return AffineModulusResult: best value found, maximizer and flag
    :raise OptimizerError: if no objective evaluation succeeds
    """
    if domain.is_degenerate:
        return AffineModulusResult(
            math.inf, 0.0, ShearNormalForm(0.0, 1.0), ATTAINED, []
        )
    if not 0 < alpha_floor < 1:
        raise InvalidInputError(f"alpha_floor must lie in (0, 1), got {alpha_floor}")
    if theta_grid < 1 or alpha_grid < 2:
        raise InvalidInputError("Coarse grid needs θ ≥ 1 and α ≥ 2 samples")
    trace = []
    estimates = {}

    def evaluate(point):
        theta, log_alpha = point
        theta = theta % math.pi
        alpha = min(1.0, math.exp(log_alpha))
        try:
            est = shear_objective(domain, theta, alpha, options)
        except NumericalError as e:
            _LOGGER.warning(f"Objective failed at theta={theta:.4f}, alpha={alpha:.4g}: {e}")
            return theta, alpha, None
        return theta, alpha, est

    thetas = np.linspace(0, math.pi, theta_grid, endpoint=False)
    log_alphas = np.linspace(math.log(alpha_floor), 0.0, alpha_grid)
    grid = [(t, la) for t in thetas for la in log_alphas]
    _LOGGER.info(f"Affine modulus: scanning {len(grid)} grid cells")
    results = ordered_map(
        evaluate, grid, threads, description="Scanning shears", progressbar=progressbar
    )
    for theta, alpha, est in results:
        if est is not None:
            trace.append((theta, alpha, est.value))
            estimates[(theta, alpha)] = est
    if not estimates:
        raise OptimizerError("Every objective evaluation of the affine search failed")

    best_key = max(estimates, key=lambda k: estimates[k].value)
    lo_log = math.log(alpha_floor)
    x0 = np.array([best_key[0], math.log(best_key[1])])
    d_theta = math.pi / theta_grid
    d_log = -lo_log / (alpha_grid - 1)
    step = d_log if x0[1] + d_log <= 0 else -d_log
    simplex = np.array([x0, x0 + [d_theta, 0.0], x0 + [0.0, step]])

    def negative(x):
        theta, alpha, est = evaluate((x[0], float(np.clip(x[1], lo_log, 0.0))))
        if est is None:
            return 0.0
        trace.append((theta, alpha, est.value))
        estimates[(theta, alpha)] = est
        return -est.value

    if refine_iters > 0:
        res = minimize(
            negative,
            x0,
            method="Nelder-Mead",
            bounds=[(None, None), (lo_log, 0.0)],
            options={
                "maxiter": refine_iters,
                "xatol": NELDER_MEAD_TOL,
                "fatol": NELDER_MEAD_TOL,
                "initial_simplex": simplex,
            },
        )
        _LOGGER.debug(f"Nelder-Mead: {res.message} after {res.nit} iterations")
        best_key = max(estimates, key=lambda k: estimates[k].value)

    theta_star, alpha_star = best_key
    best = estimates[best_key]
    if alpha_star <= 2 * alpha_floor:
        flag = BOUNDARY_LIMIT
    elif alpha_star <= 10 * alpha_floor:
        flag = INCONCLUSIVE
    else:
        flag = ATTAINED
    maximizer = decompose_affine(shear_map(theta_star, alpha_star))
    _LOGGER.info(
        f"Affine modulus {best.value:.6f} at theta={theta_star:.4f}, "
        f"alpha={alpha_star:.4g} ({flag})"
    )
    return AffineModulusResult(best.value, best.error_estimate, maximizer, flag, trace)


@dataclass
class AttainabilityCheck:
    """
    Sufficient conditions for an attained maximizer: positive width of Ω_b
    and overlapping projections of Ω_b and Ω_u in every direction.
    """

    width_positive: bool
    projections_overlap: bool
    failed_condition: Optional[int] = None
    witness_theta: Optional[float] = None

    @property
    def sufficient(self) -> bool:
        return self.width_positive and self.projections_overlap


def attainability_sufficient(
    domain: DoublyConnectedDomain, samples: int = DEFAULT_THETA_SAMPLES
) -> AttainabilityCheck:
    """
    Check the sufficient conditions for the affine modulus to be attained.

    :param DoublyConnectedDomain domain: non-degenerate domain
    :param int samples: uniform θ samples for the projection test
    :return AttainabilityCheck: both conditions and the first failing one
    """
    w, w_theta = width_and_direction(domain.bounded)
    scale = max(diameter(domain.bounded), np.finfo(float).tiny)
    if w <= WIDTH_TOL * scale:
        overlap = projections_overlap_all_theta(domain, samples)
        return AttainabilityCheck(False, overlap.holds, 1, w_theta)
    overlap = projections_overlap_all_theta(domain, samples)
    if not overlap.holds:
        return AttainabilityCheck(True, False, 2, overlap.witness_theta)
    return AttainabilityCheck(True, True)


def classify_affine_invariance(domain: DoublyConnectedDomain) -> str:
    """
    Classify domains whose modulus no affine map changes.

    :param DoublyConnectedDomain domain: domain
    :return str: 'degenerate', 'teichmuller-affine', 'double-teichmuller-affine'
        or 'not-invariant'
    """
    if domain.is_degenerate:
        return CLASS_DEGENERATE
    ring = recognize_collinear(domain)
    if isinstance(ring, Teichmuller):
        return CLASS_TEICHMULLER
    if isinstance(ring, DoubleTeichmuller):
        return CLASS_DOUBLE_TEICHMULLER
    return CLASS_NOT_INVARIANT


def phi_lower(tau: float) -> float:
    """
    Lower bound on Mod_aff Ω*/Mod Ω as a function of τ = Mod Ω.

    With t = coth(π²/(2τ)) and L = log t, the bound is
    max(0, (L − log(1 + L))/(2 + L)); it increases in τ and tends to 1,
    but only logarithmically: about 0.68 at τ = 10⁶, and it first exceeds
    0.9 near τ ≈ 2·10²⁶.

    :param float tau: modulus, > 0
    :return float: bound in [0, 1)
    """
    if not (tau > 0):
        raise InvalidInputError(f"phi_lower needs a positive modulus, got {tau}")
    if math.isinf(tau):
        return 1.0
    x = math.pi**2 / (2 * tau)
    log_t = -math.log(math.tanh(x)) if x < 20 else 2 * math.exp(-2 * x)
    value = (log_t - math.log1p(log_t)) / (2 + log_t)
    return max(0.0, value)


@dataclass
class ObstructionResult:
    obstructed: bool
    ratio: float
    bound: float


def necessary_obstruction(
    mod_omega: float,
    mod_aff_target: float,
    mod_omega_error: float = 0.0,
    target_error: float = 0.0,
) -> ObstructionResult:
    """
    Harmonic homeomorphisms Ω → Ω* cannot exist when
    Mod_aff Ω*/Mod Ω < phi_lower(Mod Ω).

    Error bars are applied in the direction that makes the verdict safe.

    :param float mod_omega: modulus of the source
    :param float mod_aff_target: affine modulus of the target
    :param float mod_omega_error: error bar of mod_omega
    :param float target_error: error bar of mod_aff_target
    :return ObstructionResult: verdict with the ratio and bound used
    """
    if not mod_omega > 0 or not mod_aff_target > 0:
        raise InvalidInputError("Moduli must be positive")
    low = max(mod_omega - mod_omega_error, np.finfo(float).tiny)
    ratio = (mod_aff_target + target_error) / low
    bound = phi_lower(low)
    return ObstructionResult(bool(ratio < bound), ratio, bound)


@dataclass
class ExistenceStatus:
    status: str
    reason: str


def existence_status(
    mod_omega: float,
    mod_aff_target: float,
    target: DoublyConnectedDomain = None,
    mod_omega_error: float = 0.0,
    target_error: float = 0.0,
    attained_flag: Optional[str] = None,
) -> ExistenceStatus:
    """
    Combine the affine sufficient condition with the necessary obstruction.

    Equal moduli decide existence only when the affine maximum is attained:
    the target is then an affine image of a conformal copy of the source.

    :param float mod_omega: modulus of the source
    :param float mod_aff_target: affine modulus of the target
    :param DoublyConnectedDomain target: target domain; a bounded complement
        (unbounded component at infinity) excludes existence
    :param str attained_flag: attainment of the affine maximum, if known
    :return ExistenceStatus: 'exists', 'nonexistent' or 'undecided'
    """
    obstruction = necessary_obstruction(mod_omega, mod_aff_target, mod_omega_error, target_error)
    if obstruction.obstructed:
        return ExistenceStatus(
            NONEXISTENT,
            f"affine modulus ratio {obstruction.ratio:.4g} is below the bound {obstruction.bound:.4g}",
        )
    if mod_aff_target - target_error > mod_omega + mod_omega_error:
        if target is not None and target.unbounded.kind == INFINITY:
            return ExistenceStatus(
                NONEXISTENT, "target complement is bounded and the source is a proper ring"
            )
        return ExistenceStatus(
            EXISTS, "an affine image of the target has modulus above the source's"
        )
    tol = mod_omega_error + target_error + MODULUS_TOL * max(abs(mod_omega), 1.0)
    if attained_flag == ATTAINED and abs(mod_aff_target - mod_omega) <= tol:
        return ExistenceStatus(
            EXISTS, "the affine modulus of the target is attained and equals the source's modulus"
        )
    return ExistenceStatus(UNDECIDED, "neither the sufficient nor the necessary condition decides")
