""" Tests of the finite-difference condenser solver """

import math

import numpy as np
import pytest

from ringmod.canonical import (
    Annulus,
    DoubleTeichmuller,
    Teichmuller,
    grotzsch_mu,
    ring_to_domain,
)
from ringmod.condenser import (
    CondenserOptions,
    domain_frame,
    far_field_order,
    modulus,
    modulus_numeric,
    rasterize,
    solve_potential,
    verify_extremal_bound,
)
from ringmod.exceptions import InvalidInputError, ResolutionTooCoarseError
from ringmod.geometry import AffineMap, BoundaryComponent, DoublyConnectedDomain, UnboundedComponent, apply_affine


def _squares(inner, outer):
    return DoublyConnectedDomain(
        BoundaryComponent.polygon(inner * np.array([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])),
        UnboundedComponent.exterior(outer * np.array([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])),
    )


def _triangle_in_square(outer):
    return DoublyConnectedDomain(
        BoundaryComponent.polygon([-0.6 - 0.4j, 0.6 - 0.4j, 0.6j]),
        UnboundedComponent.exterior(outer * np.array([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])),
    )


class TestOptions:
    def test_resolutions_halve(self):
        assert CondenserOptions(base_resolution=256, levels=3).resolutions == [64, 128, 256]

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(levels=1),
            dict(base_resolution=64, levels=4),
            dict(method="lu"),
            dict(clip_factor=1.0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            CondenserOptions(**kwargs)


class TestRasterization:
    def test_labels(self):
        dom = _squares(0.5, 2.0)
        problem = rasterize(dom, 64, domain_frame(dom))
        values = set(np.unique(problem.labels).tolist())
        assert values == {-1, 0, 1}
        center = problem.labels.shape[0] // 2
        assert problem.labels[center, center] == 0
        assert problem.labels[0, 0] == 1

    def test_too_coarse(self):
        dom = _squares(1.0, 1.001)
        with pytest.raises(ResolutionTooCoarseError):
            modulus_numeric(dom, CondenserOptions(base_resolution=32, levels=2))

    def test_ray_domain_frame_has_clip(self):
        dom = ring_to_domain(Teichmuller(1))
        frame = domain_frame(dom, 4.0)
        assert frame.clip_radius == pytest.approx(6.0)

    def test_potential_is_bounded(self):
        dom = _squares(0.5, 2.0)
        u, energy = solve_potential(rasterize(dom, 32, domain_frame(dom)))
        assert energy > 0
        assert u.min() >= -1e-12 and u.max() <= 1 + 1e-12


class TestModulus:
    def test_annulus(self):
        dom = ring_to_domain(Annulus(1, 2))
        dom.canonical_tag = None
        est = modulus_numeric(dom, CondenserOptions(base_resolution=256, levels=3))
        assert est.value == pytest.approx(math.log(2), rel=0.05)
        assert est.method == "condenser-fd"
        assert [lvl["resolution"] for lvl in est.levels] == [64, 128, 256]
        # the error bar covers the true discrepancy
        assert abs(est.value - math.log(2)) <= est.error_estimate
        assert est.error_estimate >= abs(est.levels[-1]["value"] - est.levels[-2]["value"])

    def test_error_estimates_are_honest_on_annuli(self, fast_options):
        rng = np.random.default_rng(3)
        covered = 0
        for R in 1.5 + 2.5 * rng.random(50):
            dom = ring_to_domain(Annulus(1, R))
            dom.canonical_tag = None
            est = modulus_numeric(dom, fast_options)
            covered += abs(est.value - math.log(R)) <= 3 * est.error_estimate
        assert covered >= 48

    def test_error_includes_last_step_with_two_levels(self):
        est = modulus_numeric(_squares(0.5, 2.0), CondenserOptions(base_resolution=128, levels=2))
        coarse, fine = (lvl["value"] for lvl in est.levels)
        assert est.error_estimate == pytest.approx(abs(fine - coarse))

    def test_reflection_invariance(self, fast_options):
        dom = _triangle_in_square(2.0)
        mirrored = apply_affine(AffineMap(0, 1), dom)
        assert modulus_numeric(mirrored, fast_options).value == pytest.approx(
            modulus_numeric(dom, fast_options).value, rel=1e-6
        )

    @pytest.mark.parametrize("angle", [0.3, 1.1])
    def test_rotation_invariance_within_error_bars(self, angle, fast_options):
        dom = _triangle_in_square(2.0)
        base = modulus_numeric(dom, fast_options)
        turned = modulus_numeric(apply_affine(AffineMap.rotation(angle), dom), fast_options)
        assert abs(turned.value - base.value) <= turned.error_estimate + base.error_estimate

    def test_monotone_in_outer_component(self, fast_options):
        values = [
            modulus_numeric(_triangle_in_square(outer), fast_options).value for outer in (1.5, 2.0, 3.0)
        ]
        assert values[0] < values[1] < values[2]

    def test_smaller_hole_raises_modulus(self, fast_options):
        # the triangle fits inside the half-width-0.6 square
        square_hole = modulus_numeric(_squares(0.6, 2.0), fast_options).value
        triangle_hole = modulus_numeric(_triangle_in_square(2.0), fast_options).value
        assert triangle_hole > square_hole

    @pytest.mark.parametrize(
        "untagged_domain", [("annulus", [1, 2])], indirect=True
    )
    def test_values_per_level_recorded(self, untagged_domain, fast_options):
        est = modulus_numeric(untagged_domain, fast_options)
        assert all({"level", "h", "value"} <= set(lvl) for lvl in est.levels)
        hs = [lvl["h"] for lvl in est.levels]
        assert hs == sorted(hs, reverse=True)

    def test_scale_invariance(self, fast_options):
        small = modulus_numeric(_squares(0.5, 2.0), fast_options).value
        large = modulus_numeric(_squares(1.5, 6.0), fast_options).value
        assert large == pytest.approx(small, rel=1e-8)

    def test_monotone_in_hole_size(self, fast_options):
        values = [modulus_numeric(_squares(a, 2.0), fast_options).value for a in (0.4, 0.7, 1.0)]
        assert values[0] > values[1] > values[2] > 0

    def test_closed_form_for_tagged(self):
        est = modulus(ring_to_domain(Teichmuller(1)))
        assert est.value == pytest.approx(math.pi)
        assert est.method == "closed-form"

    def test_degenerate_is_infinite(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.point(0), UnboundedComponent.exterior([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])
        )
        assert modulus(dom).value == math.inf

    def test_affine_image_changes_modulus(self, fast_options):
        dom = _squares(0.5, 2.0)
        squeezed = apply_affine(AffineMap(1, 0.5), dom)
        assert modulus_numeric(squeezed, fast_options).value != pytest.approx(
            modulus_numeric(dom, fast_options).value, rel=1e-3
        )

    @pytest.mark.parametrize(
        ["ring", "order"],
        [(Teichmuller(1), 1.0), (DoubleTeichmuller(2, 2), 2.0)],
    )
    def test_far_field_order(self, ring, order):
        assert far_field_order(ring_to_domain(ring)) == order


class TestExtremalBound:
    def test_squares(self, fast_options):
        check = verify_extremal_bound(_squares(0.5, 2.0), fast_options)
        assert check.holds
        assert check.d == pytest.approx(1.5)
        assert check.d0 == pytest.approx(math.sqrt(2))

    def test_double_teichmuller(self):
        check = verify_extremal_bound(ring_to_domain(DoubleTeichmuller(3, 3)))
        assert check.d == pytest.approx(2.0)
        assert check.holds


@pytest.mark.slow
class TestAgainstClosedForms:
    """Condenser values of canonical rings at the default 512 grid."""

    @pytest.mark.parametrize(
        ["untagged_domain", "expected"],
        [
            (("annulus", [1, 2]), math.log(2)),
            (("annulus", [1, math.e]), 1.0),
            (("teichmuller", [1]), math.pi),
            (("double_teichmuller", [3, 3]), 2 * grotzsch_mu(math.sqrt(3) / 2)),
        ],
        indirect=["untagged_domain"],
    )
    def test_canonical(self, untagged_domain, expected):
        est = modulus_numeric(untagged_domain, CondenserOptions())
        assert abs(est.value - expected) < 0.05 * expected

    @pytest.mark.parametrize("seed", range(20))
    def test_double_teichmuller_reduction(self, seed):
        rng = np.random.default_rng(seed)
        # s, t ≥ 3 keep the slits apart on the coarsest grid
        s, t = 3 + 7 * rng.random(2)
        ring = DoubleTeichmuller(s, t)
        dom = ring_to_domain(ring)
        dom.canonical_tag = None
        est = modulus_numeric(dom, CondenserOptions())
        exact = modulus(ring_to_domain(ring)).value
        assert abs(est.value - exact) < 0.05 * exact
