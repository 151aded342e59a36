""" Command-line interface """

import os
import sys
from logging import getLogger

import logmuse
import numpy as np
import pandas as pd
from attmap import PathExAttMap
from ubiquerg import VersionInHelpParser

from ._version import __version__
from .affine_opt import (
    affine_modulus,
    attainability_sufficient,
    classify_affine_invariance,
    existence_status,
    necessary_obstruction,
    phi_lower,
)
from .artifacts import (
    RunManifest,
    load_manifest,
    map_grid_images,
    write_csv,
    write_svg,
)
from .canonical import (
    Annulus,
    ring_from_dict,
    ring_to_domain,
    modulus_canonical,
    nitsche_existence,
)
from .condenser import CondenserOptions, modulus, verify_extremal_bound
from .const import (
    ATTAINED,
    CANONICAL_KEY,
    DEFAULT_ALPHA_FLOOR,
    DEFAULT_ALPHA_GRID,
    DEFAULT_CIRCLE_VERTICES,
    DEFAULT_CLIP_FACTOR,
    DEFAULT_BOUNDARY_SAMPLES,
    DEFAULT_LEVELS,
    DEFAULT_REFINE_ITERS,
    DEFAULT_RESOLUTION,
    DEFAULT_THETA_GRID,
    DEFAULT_THETA_SAMPLES,
    DEFAULT_TRUNCATION,
    BOUNDARY_TOL,
    EXIT_OK,
    KIND_CANONICAL,
    KIND_KEY,
    PKG_NAME,
    RING_ANNULUS,
    RING_DOUBLE_TEICHMULLER,
    RING_DOUBLE_TEICHMULLER_UNIT,
    RING_GROTZSCH,
    RING_KINDS,
    RING_TEICHMULLER,
    STATUS_ANSATZ_FAILED,
    STATUS_NONEXISTENT,
)
from .exceptions import (
    ConstructionFailedError,
    HypothesisViolatedError,
    InvalidInputError,
    RingmodError,
)
from .harmonic import (
    CONFORMAL_MAPS,
    VerifyOptions,
    affine_inverse_construction,
    annulus_domains,
    conformal_from_dict,
    construct_h_epsilon,
    convergence_diagnostics,
    map_from_dict,
    max_epsilon,
    power_shear_map,
    radial_nitsche_map,
    secant_slope_inequality,
    verify_map,
)
from .parsers import read_domain
from .sc_construction import (
    assemble_shear_harmonic,
    seam_flux_jump,
    solve_b,
    sweep_b,
)
from .utils import dump_json, load_yaml, ordered_map

_LOGGER = getLogger(PKG_NAME)

DEFAULT_OUTDIR = "ringmod_output"
DIAGNOSTIC_EPSILONS = [0.2, 0.1, 0.05, 0.025]

# Options shared by every command; the rest are command inputs.
CONFIG_DEFAULTS = {
    "outdir": DEFAULT_OUTDIR,
    "svg": False,
    "progress": False,
    "threads": None,
    "resolution": DEFAULT_RESOLUTION,
    "levels": DEFAULT_LEVELS,
    "clip_factor": DEFAULT_CLIP_FACTOR,
    "method": "direct",
    "vertices": DEFAULT_CIRCLE_VERTICES,
    "theta_samples": DEFAULT_THETA_GRID,
    "alpha_samples": DEFAULT_ALPHA_GRID,
    "alpha_floor": DEFAULT_ALPHA_FLOOR,
    "refine_iters": DEFAULT_REFINE_ITERS,
    "projection_samples": DEFAULT_THETA_SAMPLES,
    "truncation": DEFAULT_TRUNCATION,
    "samples": DEFAULT_BOUNDARY_SAMPLES,
    "epsilon_tolerance": 1e-3,
    "boundary_tol": BOUNDARY_TOL,
}
POSITIVE_KEYS = ["clip_factor", "alpha_floor", "epsilon_tolerance", "boundary_tol"]


class RunConfig(PathExAttMap):
    """
    Options of one run: command-line values take priority over a YAML
    config file, which takes priority over package defaults.

    :param dict cli_options: parsed command-line values; None means unset
    :param str config_file: optional YAML file with option overrides
    """

    def __init__(self, cli_options=None, config_file=None):
        super(RunConfig, self).__init__(dict(CONFIG_DEFAULTS))
        if config_file:
            data = load_yaml(config_file) or {}
            if not isinstance(data, dict):
                raise InvalidInputError(f"Config file {config_file} must hold a mapping")
            unknown = sorted(set(data) - set(CONFIG_DEFAULTS))
            if unknown:
                raise InvalidInputError(f"Unknown config options: {', '.join(unknown)}")
            self.add_entries(data)
        self.add_entries(
            {
                k: v
                for k, v in (cli_options or {}).items()
                if k in CONFIG_DEFAULTS and v is not None
            }
        )
        self.validate()

    def validate(self):
        """
        :raise InvalidInputError: for non-positive tolerances, bad grid sizes or
            an output folder that cannot be written
        """
        for key in POSITIVE_KEYS:
            if not float(self[key]) > 0:
                raise InvalidInputError(f"{key} must be positive, got {self[key]}")
        if not 0 < float(self.alpha_floor) < 1:
            raise InvalidInputError(f"alpha_floor must lie in (0, 1), got {self.alpha_floor}")
        if int(self.levels) < 2:
            raise InvalidInputError(f"levels must be at least 2, got {self.levels}")
        if int(self.resolution) < 16:
            raise InvalidInputError(f"resolution must be at least 16, got {self.resolution}")
        outdir = self.outdir
        try:
            os.makedirs(outdir, exist_ok=True)
        except OSError as e:
            raise InvalidInputError(f"Cannot create output folder {outdir}: {e}")
        if not os.access(outdir, os.W_OK):
            raise InvalidInputError(f"Output folder {outdir} is not writable")

    @property
    def condenser(self) -> CondenserOptions:
        return CondenserOptions(
            base_resolution=int(self.resolution),
            levels=int(self.levels),
            clip_factor=float(self.clip_factor),
            method=self.method,
        )

    @property
    def search(self) -> dict:
        return {
            "theta_grid": int(self.theta_samples),
            "alpha_grid": int(self.alpha_samples),
            "alpha_floor": float(self.alpha_floor),
            "refine_iters": int(self.refine_iters),
            "threads": self.threads,
            "progressbar": bool(self.progress),
        }

    @property
    def verify(self) -> VerifyOptions:
        return VerifyOptions(boundary_tol=float(self.boundary_tol))


def _add_common(parser):
    parser.add_argument(
        "-o", "--outdir", help=f"Output folder. Default: {DEFAULT_OUTDIR}"
    )
    parser.add_argument("-c", "--config", help="YAML file with option overrides")
    parser.add_argument(
        "--svg", action="store_true", default=None, help="Also write SVG figures"
    )
    parser.add_argument(
        "--progress", action="store_true", default=None, help="Show progress bars"
    )
    parser.add_argument("--threads", type=int, help="Worker cap for parallel sweeps")
    return parser


def _add_condenser(parser):
    parser.add_argument(
        "--resolution", type=int, help=f"Finest grid size. Default: {DEFAULT_RESOLUTION}"
    )
    parser.add_argument(
        "--levels", type=int, help=f"Number of grids. Default: {DEFAULT_LEVELS}"
    )
    parser.add_argument(
        "--clip-factor",
        type=float,
        help=f"Clip radius in domain extents. Default: {DEFAULT_CLIP_FACTOR}",
    )
    parser.add_argument("--method", choices=["direct", "cg"], help="Linear solver")
    parser.add_argument(
        "--vertices",
        type=int,
        help=f"Polygon size for canonical circles. Default: {DEFAULT_CIRCLE_VERTICES}",
    )
    return parser


def _add_search(parser):
    parser.add_argument(
        "--theta-samples", type=int, help=f"θ grid size. Default: {DEFAULT_THETA_GRID}"
    )
    parser.add_argument(
        "--alpha-samples", type=int, help=f"α grid size. Default: {DEFAULT_ALPHA_GRID}"
    )
    parser.add_argument(
        "--alpha-floor", type=float, help=f"Smallest α. Default: {DEFAULT_ALPHA_FLOOR}"
    )
    parser.add_argument(
        "--refine-iters",
        type=int,
        help=f"Nelder-Mead iteration cap. Default: {DEFAULT_REFINE_ITERS}",
    )
    return parser


def build_argparser():
    """
    Builds argument parser.

    :return argparse.ArgumentParser
    """
    banner = "%(prog)s - moduli of doubly connected domains and harmonic maps between them"
    parser = VersionInHelpParser(prog=PKG_NAME, description=banner, version=__version__)
    parser = logmuse.add_logging_options(parser)
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    sp = subparsers.add_parser("modulus", help="Conformal modulus of a domain")
    sp.add_argument("--domain", required=True, help="Domain file (JSON or YAML)")
    sp.add_argument(
        "--numeric",
        action="store_true",
        help="Use the condenser solver even for canonical domains",
    )
    sp.add_argument(
        "--extremal-bound",
        action="store_true",
        help="Also check the separation/diameter upper bound",
    )
    _add_common(_add_condenser(sp))

    sp = subparsers.add_parser("affine-modulus", help="Affine modulus of a domain")
    sp.add_argument("--domain", required=True, help="Domain file (JSON or YAML)")
    _add_common(_add_search(_add_condenser(sp)))

    sp = subparsers.add_parser("canonical", help="Closed-form modulus of a canonical ring")
    sp.add_argument("--ring", required=True, choices=RING_KINDS, help="Ring family")
    for name in ["r", "R", "s", "t", "a", "b"]:
        sp.add_argument(f"--{name}", type=float, help=f"Ring parameter {name}")
    _add_common(sp)

    sp = subparsers.add_parser("classify", help="Affine invariance class and attainability")
    sp.add_argument("--domain", required=True, help="Domain file (JSON or YAML)")
    sp.add_argument(
        "--projection-samples",
        type=int,
        help=f"θ samples of the projection test. Default: {DEFAULT_THETA_SAMPLES}",
    )
    _add_common(sp)

    sp = subparsers.add_parser("construct", help="Build and verify a harmonic map")
    constructions = sp.add_subparsers(dest="construction", metavar="construction")
    csp = constructions.add_parser("nitsche", help="Radial map between annuli")
    for name in ["r", "R", "rstar", "Rstar"]:
        csp.add_argument(f"--{name}", type=float, required=True, help=f"Radius {name}")
    _add_common(csp)
    csp = constructions.add_parser("power-shear", help="Re(z^α) + i Im z between G(a, b) rings")
    for name in ["a", "b", "alpha"]:
        csp.add_argument(f"--{name}", type=float, required=True, help=f"Parameter {name}")
    _add_common(csp)
    csp = constructions.add_parser(
        "annulus-dirichlet", help="Harmonic h_ε onto the image of A(1, R) under f"
    )
    csp.add_argument("--f", default="identity", choices=list(CONFORMAL_MAPS), help="Parametrization")
    csp.add_argument("--param", type=float, help="Parameter of f")
    csp.add_argument("--R", type=float, default=2.0, help="Outer radius of f's annulus")
    csp.add_argument("--epsilon", type=float, help="Stretch; half the largest admissible one if omitted")
    csp.add_argument("--truncation", type=int, help=f"Fourier modes. Default: {DEFAULT_TRUNCATION}")
    csp.add_argument("--samples", type=int, help=f"Boundary samples. Default: {DEFAULT_BOUNDARY_SAMPLES}")
    csp.add_argument("--epsilon-tolerance", type=float, help="Bracket width of the ε search")
    csp.add_argument(
        "--diagnostics", action="store_true", help="Write the ε → 0 convergence table"
    )
    _add_common(csp)
    csp = constructions.add_parser("sc-shear", help="Shear of a Schwarz-Christoffel map between F rings")
    csp.add_argument("--s-prime", type=float, required=True, help="Target left ray start")
    csp.add_argument("--t-prime", type=float, required=True, help="Target right ray start")
    csp.add_argument("--target-modulus", type=float, required=True, help="Source modulus")
    _add_common(csp)
    csp = constructions.add_parser(
        "affine-inverse", help="Inverse of the maximizing shear onto a target domain"
    )
    csp.add_argument("--domain", required=True, help="Target domain file")
    _add_common(_add_search(_add_condenser(csp)))

    sp = subparsers.add_parser("verify", help="Verify a map descriptor")
    sp.add_argument("--map", required=True, help="Map descriptor JSON")
    sp.add_argument("--source", required=True, help="Source domain file")
    sp.add_argument("--target", required=True, help="Target domain file")
    sp.add_argument("--boundary-tol", type=float, help=f"Default: {BOUNDARY_TOL}")
    _add_common(sp)

    sp = subparsers.add_parser("obstruction", help="Necessary condition for harmonic maps")
    sp.add_argument("--mod-omega", type=float, required=True, help="Source modulus")
    sp.add_argument("--mod-aff-target", type=float, required=True, help="Target affine modulus")
    sp.add_argument("--mod-omega-error", type=float, default=0.0, help="Error bar of the source modulus")
    sp.add_argument("--target-error", type=float, default=0.0, help="Error bar of the target affine modulus")
    sp.add_argument("--target", help="Target domain file, for the bounded-complement case")
    sp.add_argument(
        "--attained",
        action="store_true",
        help="The target's affine maximum is attained; equal moduli then decide existence",
    )
    _add_common(sp)

    sp = subparsers.add_parser("sweep", help="Parameter grids written as CSV")
    sweeps = sp.add_subparsers(dest="sweep", metavar="sweep")
    ssp = sweeps.add_parser("nitsche", help="Radial construction over (R/r, R*/r*)")
    ssp.add_argument("--grid", type=int, default=20, help="Points per axis")
    ssp.add_argument("--max-ratio", type=float, default=5.0, help="Largest radius ratio")
    _add_common(ssp)
    ssp = sweeps.add_parser("sc-b", help="Mod F(s_b, t_b) over heights b")
    ssp.add_argument("--s-prime", type=float, default=2.0, help="Target left ray start")
    ssp.add_argument("--t-prime", type=float, default=2.0, help="Target right ray start")
    ssp.add_argument("--b-min", type=float, default=1e-3, help="Smallest b")
    ssp.add_argument("--b-max", type=float, default=1e2, help="Largest b")
    ssp.add_argument("--count", type=int, default=21, help="Log-spaced b values")
    _add_common(ssp)
    ssp = sweeps.add_parser("phi", help="Lower bound of the affine modulus ratio")
    ssp.add_argument("--tau-min", type=float, default=1e-2, help="Smallest modulus")
    ssp.add_argument("--tau-max", type=float, default=1e8, help="Largest modulus")
    ssp.add_argument("--count", type=int, default=41, help="Log-spaced moduli")
    _add_common(ssp)

    sp = subparsers.add_parser("rerun", help="Replay a run from its manifest")
    sp.add_argument("--manifest", required=True, help="manifest.json or the run folder")
    sp.add_argument("-o", "--outdir", help="Write to another folder")
    return parser


def _domain_record(domain):
    if domain.canonical_tag is not None:
        return {KIND_KEY: KIND_CANONICAL, CANONICAL_KEY: domain.canonical_tag.to_dict()}
    return domain.to_dict()


def _load_domain(path, manifest):
    domain = read_domain(path)
    manifest.add_input("domain", _domain_record(domain))
    return domain


def _emit(manifest, name, data):
    text = dump_json(data, manifest.path(name))
    print(text)
    return data


def _write_map(manifest, config, hmap, source, target, report, extra=None):
    dump_json(hmap.to_dict(), manifest.path("map.json"))
    dump_json(_domain_record(source), manifest.path("source.json"))
    dump_json(_domain_record(target), manifest.path("target.json"))
    out = {"map": hmap.to_dict(), "verification": report.to_dict()}
    out.update(extra or {})
    _emit(manifest, "report.json", out)
    if config.svg:
        write_svg(
            manifest.path("map.svg"),
            [source, target],
            map_grid_images(hmap, source),
            title=hmap.map_type,
        )
    if not report.passed:
        _LOGGER.warning("Verification failed: " + "; ".join(report.reasons))


def _ring_from_args(args):
    names = {
        RING_ANNULUS: ["r", "R"],
        RING_GROTZSCH: ["s"],
        RING_TEICHMULLER: ["s"],
        RING_DOUBLE_TEICHMULLER: ["s", "t"],
        RING_DOUBLE_TEICHMULLER_UNIT: ["a", "b"],
    }[args.ring]
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInputError(
            f"Ring '{args.ring}' needs: {', '.join('--' + n for n in missing)}"
        )
    return ring_from_dict({"ring": args.ring, "params": [getattr(args, n) for n in names]})


def run_modulus(args, config, manifest):
    domain = _load_domain(args.domain, manifest)
    if args.numeric:
        domain.canonical_tag = None
    est = modulus(domain, config.condenser)
    result = est.to_dict()
    result.pop("levels")
    if args.extremal_bound:
        check = verify_extremal_bound(domain, config.condenser)
        result["extremal_bound"] = {
            "bound": check.bound,
            "d": check.d,
            "d0": check.d0,
            "holds": check.holds,
        }
    _emit(manifest, "modulus.json", result)
    if est.levels:
        write_csv(pd.DataFrame(est.levels), manifest.path("levels.csv"), "levels")
    if config.svg:
        write_svg(manifest.path("domain.svg"), [domain], title="domain")


def run_affine_modulus(args, config, manifest):
    domain = _load_domain(args.domain, manifest)
    result = affine_modulus(domain, options=config.condenser, **config.search)
    _emit(manifest, "affine_modulus.json", result.to_dict())
    if result.trace:
        table = pd.DataFrame(result.trace, columns=["theta", "alpha", "value"])
        write_csv(table, manifest.path("trace.csv"), "affine_trace")


def run_canonical(args, config, manifest):
    ring = _ring_from_args(args)
    manifest.add_input("ring", ring.to_dict())
    est = modulus_canonical(ring)
    out = {"ring": ring.to_dict(), "value": est.value, "error_estimate": est.error_estimate}
    s = ring.teichmuller_parameter()
    if s is not None:
        out["teichmuller_parameter"] = s
    _emit(manifest, "canonical.json", out)
    if config.svg:
        write_svg(
            manifest.path("ring.svg"),
            [ring_to_domain(ring, int(config.vertices))],
            title=str(ring),
        )


def run_classify(args, config, manifest):
    domain = _load_domain(args.domain, manifest)
    out = {"class": classify_affine_invariance(domain)}
    if not domain.is_degenerate:
        check = attainability_sufficient(domain, int(config.projection_samples))
        out["attainability"] = {
            "sufficient": check.sufficient,
            "width_positive": check.width_positive,
            "projections_overlap": check.projections_overlap,
            "failed_condition": check.failed_condition,
            "witness_theta": check.witness_theta,
        }
    _emit(manifest, "classify.json", out)


def construct_nitsche(args, config, manifest):
    manifest.add_input("radii", [args.r, args.R, args.rstar, args.Rstar])
    result = radial_nitsche_map(args.r, args.R, args.rstar, args.Rstar)
    if result.status == STATUS_NONEXISTENT:
        raise HypothesisViolatedError(
            f"No harmonic homeomorphism A(r, R) → A(r*, R*) exists: {result.message} "
            f"(Nitsche bound R*/r* ≥ ½(R/r + r/R))"
        )
    if result.status == STATUS_ANSATZ_FAILED:
        raise ConstructionFailedError(result.message)
    vertices = int(config.vertices)
    source = ring_to_domain(Annulus(args.r, args.R), vertices)
    target = ring_to_domain(Annulus(args.rstar, args.Rstar), vertices)
    report = verify_map(result.map, source, target, config.verify)
    _write_map(manifest, config, result.map, source, target, report, {"status": result.status})


def construct_power_shear(args, config, manifest):
    manifest.add_input("parameters", [args.a, args.b, args.alpha])
    result = power_shear_map(args.a, args.b, args.alpha)
    vertices = int(config.vertices)
    source = ring_to_domain(result.source, vertices)
    target = ring_to_domain(result.target, vertices)
    report = verify_map(result.map, source, target, config.verify)
    extra = {
        "source_modulus": modulus_canonical(result.source).value,
        "target_modulus": modulus_canonical(result.target).value,
        "secant_slope_inequality": secant_slope_inequality(args.a, args.b, args.alpha),
    }
    _write_map(manifest, config, result.map, source, target, report, extra)


def construct_annulus_dirichlet(args, config, manifest):
    f = conformal_from_dict({"name": args.f, "param": args.param})
    manifest.add_input("conformal_map", f.to_dict())
    truncation, samples = int(config.truncation), int(config.samples)
    extra = {}
    epsilon = args.epsilon
    if epsilon is None:
        search = max_epsilon(
            f, args.R, float(config.epsilon_tolerance), truncation=truncation, samples=samples
        )
        epsilon = 0.5 * search.epsilon
        extra["epsilon_search"] = {"epsilon": search.epsilon, "bracket": list(search.bracket)}
        write_csv(search.table, manifest.path("epsilon_search.csv"), "epsilon_search")
    hmap = construct_h_epsilon(f, args.R, epsilon, truncation, samples)
    source, target = annulus_domains(hmap)
    report = verify_map(hmap, source, target, config.verify)
    extra.update(
        {
            "epsilon": epsilon,
            "spectral_tail": hmap.spectral_tail,
            "reconstruction_error": hmap.reconstruction_error,
        }
    )
    if args.diagnostics:
        table = convergence_diagnostics(f, args.R, DIAGNOSTIC_EPSILONS, truncation, samples)
        write_csv(table, manifest.path("diagnostics.csv"), "epsilon_diagnostics")
    _write_map(manifest, config, hmap, source, target, report, extra)


def construct_sc_shear(args, config, manifest):
    manifest.add_input("parameters", [args.s_prime, args.t_prime, args.target_modulus])
    model, result = solve_b(args.target_modulus, args.s_prime, args.t_prime)
    hmap = assemble_shear_harmonic(model, result, args.s_prime, args.t_prime)
    source, target = hmap.domains(int(config.vertices))
    report = verify_map(hmap, source, target, config.verify)
    extra = {
        "solution": result.to_dict(),
        "modulus_residual": abs(result.modulus - args.target_modulus),
        "seam_flux_jump": seam_flux_jump(hmap),
    }
    _write_map(manifest, config, hmap, source, target, report, extra)


def construct_affine_inverse(args, config, manifest):
    target = _load_domain(args.domain, manifest)
    result = affine_inverse_construction(target, config.condenser, **config.search)
    report = verify_map(result.map, result.source, target, config.verify)
    extra = {
        "target_modulus": result.target_modulus,
        "source_modulus": result.source_modulus,
    }
    _write_map(manifest, config, result.map, result.source, target, report, extra)


CONSTRUCTIONS = {
    "nitsche": construct_nitsche,
    "power-shear": construct_power_shear,
    "annulus-dirichlet": construct_annulus_dirichlet,
    "sc-shear": construct_sc_shear,
    "affine-inverse": construct_affine_inverse,
}


def run_construct(args, config, manifest):
    if args.construction not in CONSTRUCTIONS:
        raise InvalidInputError(f"Choose a construction: {', '.join(CONSTRUCTIONS)}")
    CONSTRUCTIONS[args.construction](args, config, manifest)


def run_verify(args, config, manifest):
    descriptor = load_yaml(args.map)
    manifest.add_input("map", descriptor)
    hmap = map_from_dict(descriptor)
    source = read_domain(args.source)
    target = read_domain(args.target)
    manifest.add_input("source", _domain_record(source))
    manifest.add_input("target", _domain_record(target))
    report = verify_map(hmap, source, target, config.verify)
    _emit(manifest, "verification.json", report.to_dict())
    if config.svg:
        write_svg(manifest.path("map.svg"), [source, target], map_grid_images(hmap, source))


def run_obstruction(args, config, manifest):
    manifest.add_input(
        "moduli",
        [args.mod_omega, args.mod_aff_target, args.mod_omega_error, args.target_error],
    )
    target = _load_domain(args.target, manifest) if args.target else None
    verdict = necessary_obstruction(
        args.mod_omega, args.mod_aff_target, args.mod_omega_error, args.target_error
    )
    status = existence_status(
        args.mod_omega,
        args.mod_aff_target,
        target,
        args.mod_omega_error,
        args.target_error,
        attained_flag=ATTAINED if args.attained else None,
    )
    _emit(
        manifest,
        "obstruction.json",
        {
            "obstructed": verdict.obstructed,
            "ratio": verdict.ratio,
            "bound": verdict.bound,
            "status": status.status,
            "reason": status.reason,
        },
    )


def _nitsche_row(point):
    ratio, ratio_star = point
    result = radial_nitsche_map(1.0, ratio, 1.0, ratio_star)
    row = {
        "ratio": ratio,
        "ratio_star": ratio_star,
        "bound": 0.5 * (ratio + 1 / ratio),
        "predicted": nitsche_existence(ratio, ratio_star),
        "status": result.status,
        "passed": False,
        "jacobian_margin": np.nan,
        "winding_number": np.nan,
    }
    if result.map is not None:
        source = ring_to_domain(Annulus(1.0, ratio))
        target = ring_to_domain(Annulus(1.0, ratio_star))
        report = verify_map(result.map, source, target)
        row.update(
            {
                "passed": report.passed,
                "jacobian_margin": report.jacobian_margin,
                "winding_number": report.winding_number,
            }
        )
    return row


def run_sweep(args, config, manifest):
    if args.sweep == "nitsche":
        axis = np.linspace(1.0, args.max_ratio, args.grid + 1)[1:]
        grid = [(float(x), float(y)) for x in axis for y in axis]
        manifest.add_input("grid", {"points": args.grid, "max_ratio": args.max_ratio})
        rows = ordered_map(
            _nitsche_row,
            grid,
            config.threads,
            description="Nitsche grid",
            progressbar=bool(config.progress),
        )
        table, schema = pd.DataFrame(rows), "nitsche_sweep"
    elif args.sweep == "sc-b":
        bs = np.geomspace(args.b_min, args.b_max, args.count)
        manifest.add_input("b", bs.tolist())
        table = sweep_b(args.s_prime, args.t_prime, bs, config.threads)
        schema = "sc_b_sweep"
        if not np.all(np.diff(table["modulus"]) < 0):
            _LOGGER.warning("Mod F(s_b, t_b) is not strictly decreasing along the sweep")
    elif args.sweep == "phi":
        taus = np.geomspace(args.tau_min, args.tau_max, args.count)
        manifest.add_input("tau", taus.tolist())
        table = pd.DataFrame({"tau": taus, "phi_lower": [phi_lower(t) for t in taus]})
        schema = "phi_lower"
    else:
        raise InvalidInputError("Choose a sweep: nitsche, sc-b, phi")
    path = write_csv(table, manifest.path(f"{schema}.csv"), schema)
    _LOGGER.info(f"Wrote {len(table)} rows to {path}")


COMMAND_RUNNERS = {
    "modulus": run_modulus,
    "affine-modulus": run_affine_modulus,
    "canonical": run_canonical,
    "classify": run_classify,
    "construct": run_construct,
    "verify": run_verify,
    "obstruction": run_obstruction,
    "sweep": run_sweep,
}


def run(args, argv):
    """
    Execute one parsed command and write its manifest.

    :param argparse.Namespace args: parsed arguments
    :param list[str] argv: raw arguments, stored for reruns
    :return int: exit status
    """
    if args.command == "rerun":
        previous = load_manifest(args.manifest)
        replay = list(previous["argv"])
        if args.outdir:
            replay += ["--outdir", args.outdir]
        _LOGGER.info(f"Replaying: {PKG_NAME} {' '.join(replay)}")
        return run(build_argparser().parse_args(replay), replay)
    config = RunConfig(vars(args), getattr(args, "config", None))
    command = args.command
    for sub in ("construction", "sweep"):
        if getattr(args, sub, None):
            command = f"{command} {getattr(args, sub)}"
    manifest = RunManifest(config.outdir, command, argv, config.to_dict())
    COMMAND_RUNNERS[args.command](args, config, manifest)
    manifest.write()
    return EXIT_OK


def main(argv=None):
    """Primary workflow"""
    global _LOGGER
    parser = build_argparser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_OK
    _LOGGER = logmuse.logger_via_cli(args, name=PKG_NAME, make_root=True)
    _LOGGER.debug(f"Command: {args.command}; arguments: {argv}")
    try:
        return run(args, argv)
    except RingmodError as e:
        _LOGGER.error(f"{e.__class__.__name__}: {e}")
        return e.exit_code
