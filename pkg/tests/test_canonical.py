""" Tests of closed-form moduli of canonical rings """

import math

import numpy as np
import pytest

from ringmod.canonical import (
    Annulus,
    DoubleTeichmuller,
    DoubleTeichmullerUnit,
    Grotzsch,
    Teichmuller,
    grotzsch_mu,
    modulus_canonical,
    nitsche_existence,
    recognize_collinear,
    ring_from_dict,
    ring_to_domain,
    teichmuller_modulus,
)
from ringmod.exceptions import InvalidInputError
from ringmod.geometry import BoundaryComponent, DoublyConnectedDomain, Ray, UnboundedComponent


class TestGrotzschFunction:
    def test_small_argument_asymptotics(self):
        assert grotzsch_mu(1e-6) == pytest.approx(math.log(4e6), abs=1e-9)

    def test_functional_equation(self):
        # μ(r)·μ(r') = π²/4
        r = np.array([0.1, 0.5, 0.9])
        rp = np.sqrt(1 - r**2)
        assert np.allclose(grotzsch_mu(r) * grotzsch_mu(rp), math.pi**2 / 4)

    def test_decreasing(self):
        values = grotzsch_mu(np.linspace(0.01, 0.99, 50))
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("r", [0, 1, -0.5, np.nan])
    def test_out_of_range(self, r):
        with pytest.raises(InvalidInputError):
            grotzsch_mu(r)


class TestCanonicalModuli:
    def test_teichmuller_one_is_pi(self):
        assert teichmuller_modulus(1.0) == pytest.approx(math.pi, abs=1e-12)

    @pytest.mark.parametrize(
        ["ring", "expected"],
        [
            (Annulus(1, 2), math.log(2)),
            (Annulus(1, math.e), 1.0),
            (Teichmuller(1), math.pi),
            (Grotzsch(2), None),
            (DoubleTeichmuller(3, 3), None),
        ],
    )
    def test_known_values(self, ring, expected):
        est = modulus_canonical(ring)
        if expected is None:
            assert est.value > 0
        else:
            assert est.value == pytest.approx(expected, abs=1e-12)
        assert est.method == "closed-form"

    def test_double_teichmuller_reduction(self):
        # F(3, 3) has Mod T(1/3) = 2μ(√3/2)
        est = modulus_canonical(DoubleTeichmuller(3, 3))
        assert est.value == pytest.approx(2 * grotzsch_mu(math.sqrt(3) / 2), rel=1e-12)

    def test_grotzsch_value(self):
        assert modulus_canonical(Grotzsch(2)).value == pytest.approx(grotzsch_mu(0.5))

    def test_unit_form_matches_double_teichmuller(self):
        ring = DoubleTeichmullerUnit(0.25, 0.5)
        s = ring.teichmuller_parameter()
        assert s == pytest.approx(0.5)
        assert modulus_canonical(ring).value == pytest.approx(teichmuller_modulus(0.5))

    def test_teichmuller_monotone(self):
        s = np.geomspace(1e-3, 1e3, 30)
        assert np.all(np.diff(teichmuller_modulus(s)) > 0)

    @pytest.mark.parametrize(
        "make",
        [
            lambda: Annulus(2, 1),
            lambda: Grotzsch(1),
            lambda: Teichmuller(0),
            lambda: DoubleTeichmuller(1, 3),
            lambda: DoubleTeichmullerUnit(0.5, 0.25),
        ],
    )
    def test_bad_parameters(self, make):
        with pytest.raises(InvalidInputError):
            make()


class TestRecords:
    def test_from_dict(self):
        ring = ring_from_dict({"ring": "double_teichmuller", "params": [2, 3]})
        assert ring == DoubleTeichmuller(2, 3)

    def test_to_dict(self):
        assert Annulus(1, 2).to_dict() == {"ring": "annulus", "params": [1, 2]}

    @pytest.mark.parametrize(
        "record",
        [
            {"ring": "torus", "params": [1]},
            {"ring": "annulus", "params": [1]},
            {"params": [1, 2]},
            {"ring": "annulus", "params": ["one", 2]},
        ],
    )
    def test_bad_records(self, record):
        with pytest.raises(InvalidInputError):
            ring_from_dict(record)


class TestNitscheBound:
    @pytest.mark.parametrize(
        ["ratio", "ratio_star", "expected"],
        [(2, 1.25, True), (2, 1.2, False), (2, 3, True), (4, 2.125, True), (4, 2.1, False)],
    )
    def test_bound(self, ratio, ratio_star, expected):
        assert nitsche_existence(ratio, ratio_star) is expected

    def test_invalid_ratio(self):
        with pytest.raises(InvalidInputError):
            nitsche_existence(1.0, 2.0)


class TestRealizations:
    @pytest.mark.parametrize(
        "ring",
        [
            Annulus(1, 2),
            Grotzsch(2),
            Teichmuller(1),
            DoubleTeichmuller(2, 3),
            DoubleTeichmullerUnit(0.25, 0.5),
        ],
    )
    def test_realization_is_tagged(self, ring):
        dom = ring_to_domain(ring, 64)
        assert dom.canonical_tag == ring
        assert not dom.is_degenerate

    def test_recognize_teichmuller(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.segment(1 - 1j, 3 + 0j),
            UnboundedComponent.from_rays([Ray(7 + 2j, 2 + 1j)]),
        )
        ring = recognize_collinear(dom)
        assert isinstance(ring, Teichmuller)
        assert ring.s == pytest.approx(2.0)

    def test_recognize_ray_on_the_other_side(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.segment(0, 1), UnboundedComponent.from_rays([Ray(-3, -1)])
        )
        assert recognize_collinear(dom).s == pytest.approx(3.0)

    def test_not_collinear(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.segment(0, 1), UnboundedComponent.from_rays([Ray(3j, 1j)])
        )
        assert recognize_collinear(dom) is None

    def test_annulus_not_collinear(self):
        assert recognize_collinear(ring_to_domain(Annulus(1, 2), 32)) is None
