""" Tests of the affine modulus search and the existence criteria """

import math

import numpy as np
import pytest

from ringmod.affine_opt import (
    affine_modulus,
    attainability_sufficient,
    classify_affine_invariance,
    existence_status,
    necessary_obstruction,
    phi_lower,
    shear_map,
    shear_objective,
)
from ringmod.canonical import (
    Annulus,
    DoubleTeichmuller,
    Grotzsch,
    Teichmuller,
    modulus_canonical,
    ring_to_domain,
    teichmuller_modulus,
)
from ringmod.condenser import CondenserOptions, modulus
from ringmod.const import (
    ATTAINED,
    BOUNDARY_LIMIT,
    CLASS_DEGENERATE,
    CLASS_DOUBLE_TEICHMULLER,
    CLASS_NOT_INVARIANT,
    CLASS_TEICHMULLER,
    EXISTS,
    INCONCLUSIVE,
    NONEXISTENT,
    UNDECIDED,
)
from ringmod.exceptions import InvalidInputError
from ringmod.geometry import (
    AffineMap,
    BoundaryComponent,
    DoublyConnectedDomain,
    UnboundedComponent,
    apply_affine,
    separation_and_diameter,
)

COARSE = CondenserOptions(base_resolution=128, levels=2)


class TestShearMap:
    def test_identity_at_unit_alpha(self):
        f = shear_map(0.3, 1.0)
        z = np.array([1 + 2j, -0.5j])
        assert np.allclose(np.abs(f(z)), np.abs(z))

    def test_squeeze_along_imaginary_axis(self):
        f = shear_map(0.0, 0.5)
        assert f(np.array([2 + 2j]))[0] == pytest.approx(2 + 1j)

    @pytest.mark.parametrize("alpha", [0, 1.5, -0.2])
    def test_bad_alpha(self, alpha):
        with pytest.raises(InvalidInputError):
            shear_map(0.0, alpha)


class TestPhiLower:
    def test_known_value(self):
        assert phi_lower(100) == pytest.approx(0.3236, abs=1e-3)

    def test_monotone(self):
        taus = np.geomspace(1e-1, 1e8, 60)
        values = [phi_lower(t) for t in taus]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_limits(self):
        assert phi_lower(1e-2) < 1e-3
        assert phi_lower(1e6) == pytest.approx(0.678, abs=5e-3)
        assert phi_lower(1e20) < 0.9 < phi_lower(1e30)
        assert phi_lower(math.inf) == 1.0

    @pytest.mark.parametrize("tau", [0, -1, float("nan")])
    def test_nonpositive(self, tau):
        with pytest.raises(InvalidInputError):
            phi_lower(tau)


class TestObstruction:
    def test_large_source_small_target(self):
        result = necessary_obstruction(100, 1)
        assert result.obstructed
        assert result.ratio == pytest.approx(0.01)
        assert result.bound == pytest.approx(phi_lower(100))

    def test_comparable_moduli(self):
        assert not necessary_obstruction(1.0, 1.0).obstructed

    def test_error_bars_weaken_verdict(self):
        bound = phi_lower(10.0)
        tight = necessary_obstruction(10.0, 5 * bound)
        loose = necessary_obstruction(10.0, 5 * bound, target_error=10 * bound)
        assert tight.obstructed
        assert not loose.obstructed

    def test_bad_moduli(self):
        with pytest.raises(InvalidInputError):
            necessary_obstruction(0, 1)


class TestExistenceStatus:
    def test_nonexistent_by_obstruction(self):
        assert existence_status(100, 1).status == NONEXISTENT

    def test_exists_when_target_larger(self):
        assert existence_status(1.0, 2.0).status == EXISTS

    def test_bounded_target_complement(self):
        target = DoublyConnectedDomain(
            BoundaryComponent.polygon([0, 1, 1 + 1j, 1j]), UnboundedComponent.infinity()
        )
        status = existence_status(1.0, 2.0, target)
        assert status.status == NONEXISTENT
        assert "bounded" in status.reason

    def test_undecided(self):
        assert existence_status(2.0, 1.9).status == UNDECIDED

    @pytest.mark.parametrize(
        ["flag", "expected"],
        [(ATTAINED, EXISTS), (INCONCLUSIVE, UNDECIDED), (BOUNDARY_LIMIT, UNDECIDED), (None, UNDECIDED)],
    )
    def test_equal_moduli(self, flag, expected):
        assert existence_status(2.0, 2.0, attained_flag=flag).status == expected

    def test_equal_within_error_bars(self):
        status = existence_status(2.0, 1.99, mod_omega_error=0.02, attained_flag=ATTAINED)
        assert status.status == EXISTS
        assert "attained" in status.reason

    def test_attained_does_not_rescue_smaller_target(self):
        assert existence_status(2.0, 1.9, attained_flag=ATTAINED).status == UNDECIDED


class TestClassification:
    @pytest.mark.parametrize(
        ["example_domain", "expected"],
        [
            ("punctured_square.json", CLASS_DEGENERATE),
            ("teichmuller_2.json", CLASS_TEICHMULLER),
            ("teichmuller_2_affine.json", CLASS_TEICHMULLER),
            ("double_teichmuller_2_3.json", CLASS_DOUBLE_TEICHMULLER),
            ("annulus_1_2.json", CLASS_NOT_INVARIANT),
            ("square_in_square.json", CLASS_NOT_INVARIANT),
        ],
        indirect=["example_domain"],
    )
    def test_classes(self, example_domain, expected):
        assert classify_affine_invariance(example_domain) == expected


class TestAttainability:
    def test_annulus(self):
        assert attainability_sufficient(ring_to_domain(Annulus(1, 2), 64)).sufficient

    def test_slit_fails_width(self):
        check = attainability_sufficient(ring_to_domain(Teichmuller(2)))
        assert not check.width_positive
        assert check.failed_condition == 1

    def test_grotzsch_fails_projections(self):
        check = attainability_sufficient(ring_to_domain(Grotzsch(2), 64))
        assert check.width_positive
        assert check.failed_condition == 2
        assert check.witness_theta == pytest.approx(0.0)


class TestAffineModulus:
    def test_invariant_domain(self):
        dom = ring_to_domain(Teichmuller(2))
        result = affine_modulus(dom, theta_grid=3, alpha_grid=3, alpha_floor=0.1, refine_iters=0)
        assert result.value == pytest.approx(teichmuller_modulus(2.0))
        assert all(v == pytest.approx(result.value) for _, _, v in result.trace)

    def test_degenerate_is_infinite(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.point(0), UnboundedComponent.exterior([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])
        )
        assert affine_modulus(dom).value == math.inf

    def test_coarse_grid_on_annulus(self):
        dom = ring_to_domain(Annulus(1, 2), 128)
        result = affine_modulus(
            dom, theta_grid=2, alpha_grid=2, alpha_floor=0.5, refine_iters=0, options=COARSE
        )
        assert len(result.trace) == 4
        assert result.value == max(v for _, _, v in result.trace)
        # α = 1 is a similarity, so the closed form is among the samples
        assert result.value >= math.log(2) - 1e-12
        assert result.attained_flag in (ATTAINED, BOUNDARY_LIMIT, INCONCLUSIVE)
        assert set(result.to_dict()) == {"value", "error_estimate", "theta", "alpha", "attained_flag"}

    @pytest.mark.parametrize(
        "kwargs",
        [dict(alpha_floor=0), dict(alpha_floor=1.0), dict(theta_grid=0), dict(alpha_grid=1)],
    )
    def test_bad_search(self, kwargs):
        with pytest.raises(InvalidInputError):
            affine_modulus(ring_to_domain(Teichmuller(1)), **kwargs)


class TestAffineSearchBehavior:
    @pytest.mark.slow
    @pytest.mark.parametrize(
        "example_domain",
        ["square_in_square.json", "triangle_in_square.json", "rectangle_in_rectangle.yaml"],
        indirect=True,
    )
    def test_attained_on_convex_rings(self, example_domain):
        assert attainability_sufficient(example_domain).sufficient
        result = affine_modulus(
            example_domain,
            theta_grid=4,
            alpha_grid=5,
            alpha_floor=0.02,
            refine_iters=0,
            options=COARSE,
        )
        assert result.attained_flag == ATTAINED
        assert result.maximizer.alpha > 0.2
        # every sampled shear obeys the degeneration bound
        for theta, alpha, value in result.trace:
            sep = separation_and_diameter(apply_affine(shear_map(theta, alpha), example_domain))
            assert value <= teichmuller_modulus(sep.d / sep.d0) + 1e-9, (theta, alpha)

    @pytest.mark.slow
    def test_grotzsch_supremum_at_the_floor(self):
        dom = ring_to_domain(Grotzsch(2))
        result = affine_modulus(
            dom,
            theta_grid=1,
            alpha_grid=3,
            alpha_floor=0.1,
            refine_iters=0,
            options=CondenserOptions(base_resolution=256, levels=2),
        )
        assert result.attained_flag == BOUNDARY_LIMIT
        assert len(result.trace) == 3
        alphas = [a for _, a, _ in result.trace]
        values = [v for _, _, v in result.trace]
        assert alphas == sorted(alphas)
        # squeezing the disk toward [−1, 1] raises the modulus toward Mod T(1/2)
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(modulus_canonical(Grotzsch(2)).value)
        assert values[0] < teichmuller_modulus(0.5)

    def test_double_teichmuller_objective_is_constant(self):
        dom = ring_to_domain(DoubleTeichmuller(2, 3))
        expected = modulus_canonical(DoubleTeichmuller(2, 3)).value
        for theta in np.linspace(0, math.pi, 5, endpoint=False):
            for alpha in (1.0, 0.5, 0.25, 0.1, 0.01):
                est = shear_objective(dom, theta, alpha)
                assert est.value == pytest.approx(expected, rel=1e-9), (theta, alpha)

    @pytest.mark.parametrize("example_domain", ["triangle_in_square.json"], indirect=True)
    def test_rotating_the_domain_permutes_the_trace(self, example_domain):
        kwargs = dict(theta_grid=4, alpha_grid=3, alpha_floor=0.25, refine_iters=0, options=COARSE)
        base = affine_modulus(example_domain, **kwargs)
        rotated = affine_modulus(
            apply_affine(AffineMap.rotation(math.pi / 4), example_domain), **kwargs
        )

        def key(theta, alpha):
            t = round(theta % math.pi, 9)
            return (0.0 if t == round(math.pi, 9) else t), round(alpha, 9)

        table = {key(t, a): v for t, a, v in base.trace}
        assert len(rotated.trace) == len(base.trace)
        for theta, alpha, value in rotated.trace:
            assert value == pytest.approx(table[key(theta - math.pi / 4, alpha)], rel=1e-4)
        assert rotated.value == pytest.approx(base.value, rel=1e-4)

    @pytest.mark.parametrize("example_domain", ["triangle_in_square.json"], indirect=True)
    def test_shear_undoes_a_pre_shear(self, example_domain):
        sheared = apply_affine(shear_map(0.0, 0.5), example_domain)
        # squeezing the other axis by the same factor leaves a similarity
        undone = shear_objective(sheared, math.pi / 2, 0.5, COARSE)
        assert undone.value == pytest.approx(modulus(example_domain, COARSE).value, rel=1e-4)

    def test_annulus_and_its_affine_image_exist(self):
        source = ring_to_domain(Annulus(1, 2), 256)
        target = apply_affine(shear_map(math.pi / 4, 0.5), source)
        # the grid holds θ = 3π/4, α = 1/2, which maps the target onto a round annulus
        result = affine_modulus(
            target, theta_grid=4, alpha_grid=6, alpha_floor=0.03125, refine_iters=0, options=COARSE
        )
        assert result.attained_flag == ATTAINED
        assert result.maximizer.alpha == pytest.approx(0.5)
        status = existence_status(
            math.log(2),
            result.value,
            target_error=result.error_estimate,
            attained_flag=result.attained_flag,
        )
        assert status.status == EXISTS

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(2))
    def test_invariant_under_random_pre_shear(self, seed):
        rng = np.random.default_rng(seed)
        dom = ring_to_domain(Annulus(1, 2), 256)
        pre = shear_map(math.pi * rng.random(), 0.5 + 0.4 * rng.random())
        kwargs = dict(theta_grid=6, alpha_grid=5, alpha_floor=0.1, refine_iters=60, options=COARSE)
        base = affine_modulus(dom, **kwargs)
        sheared = affine_modulus(apply_affine(pre, dom), **kwargs)
        tolerance = 0.03 * base.value + base.error_estimate + sheared.error_estimate
        assert abs(sheared.value - base.value) <= tolerance
