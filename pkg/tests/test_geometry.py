""" Tests of the planar data model """

import math

import numpy as np
import pytest

from ringmod.canonical import DoubleTeichmuller, Grotzsch, ring_to_domain
from ringmod.exceptions import DegenerateDomainError, InvalidInputError
from ringmod.geometry import (
    AffineMap,
    BoundaryComponent,
    DoublyConnectedDomain,
    Ray,
    UnboundedComponent,
    apply_affine,
    convex_hull,
    decompose_affine,
    diameter,
    projection_interval,
    projections_overlap_all_theta,
    segments_intersect,
    separation_and_diameter,
    width,
    width_and_direction,
)

UNIT_SQUARE = [0, 1, 1 + 1j, 1j]


class TestComponents:
    @pytest.mark.parametrize(
        ["vertices", "kind"],
        [([0], "point"), ([0, 1], "segment"), (UNIT_SQUARE, "polygon")],
    )
    def test_kind_inferred_from_vertex_count(self, vertices, kind):
        assert BoundaryComponent(vertices).kind == kind

    def test_closing_vertex_dropped(self):
        assert BoundaryComponent.polygon(UNIT_SQUARE + [0]).vertices.size == 4

    @pytest.mark.parametrize("vertices", [[], [0, np.nan]])
    def test_bad_vertices_rejected(self, vertices):
        with pytest.raises(InvalidInputError):
            BoundaryComponent(vertices)

    def test_pairs_accepted(self):
        c = BoundaryComponent([[0, 0], [2, 0], [2, 1]])
        assert c.vertices[2] == 2 + 1j

    def test_polygon_contains(self):
        c = BoundaryComponent.polygon(UNIT_SQUARE)
        assert list(c.contains(np.array([0.5 + 0.5j, 2 + 0j]))) == [True, False]

    def test_distance_to_polygon(self):
        c = BoundaryComponent.polygon(UNIT_SQUARE)
        assert c.distance(np.array([2 + 0.5j]))[0] == pytest.approx(1.0)

    def test_zero_direction_ray_rejected(self):
        with pytest.raises(InvalidInputError):
            Ray(0, 0)

    def test_ray_direction_normalized(self):
        assert Ray(1, 3j).direction == pytest.approx(1j)

    def test_three_rays_rejected(self):
        with pytest.raises(InvalidInputError):
            UnboundedComponent.from_rays([Ray(k, 1) for k in (2, 3, 4)])


class TestDomain:
    def test_intersecting_components_rejected(self):
        with pytest.raises(InvalidInputError):
            DoublyConnectedDomain(
                BoundaryComponent.segment(-1, 3),
                UnboundedComponent.from_rays([Ray(2, 1)]),
            )

    def test_unenclosed_component_rejected(self):
        with pytest.raises(InvalidInputError):
            DoublyConnectedDomain(
                BoundaryComponent.polygon([10, 11, 11 + 1j]),
                UnboundedComponent.exterior([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j]),
            )

    def test_meeting_rays_rejected(self):
        with pytest.raises(InvalidInputError):
            DoublyConnectedDomain(
                BoundaryComponent.segment(-1, 0),
                UnboundedComponent.from_rays([Ray(2, 1j), Ray(3 + 1j, -1)]),
            )

    def test_degenerate_flags(self):
        punctured = DoublyConnectedDomain(
            BoundaryComponent.point(0),
            UnboundedComponent.exterior([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j]),
        )
        bounded_complement = DoublyConnectedDomain(
            BoundaryComponent.polygon(UNIT_SQUARE), UnboundedComponent.infinity()
        )
        assert punctured.is_degenerate
        assert bounded_complement.is_degenerate

    def test_contains_with_clearance(self):
        dom = ring_to_domain(DoubleTeichmuller(3, 3))
        z = np.array([2j, 0.5 + 1e-4j, 2 + 0.5j])
        assert list(dom.contains(z)) == [True, True, True]
        assert list(dom.contains(z, 1e-3)) == [True, False, True]


class TestWidthAndProjections:
    def test_square_width(self):
        assert width(BoundaryComponent.polygon(UNIT_SQUARE)) == pytest.approx(1.0)

    def test_segment_width_zero(self):
        w, theta = width_and_direction(BoundaryComponent.segment(0, 1 + 1j))
        assert w == 0.0
        assert theta == pytest.approx(3 * math.pi / 4)

    def test_triangle_width(self):
        tri = BoundaryComponent.polygon([0, 2, 1j])
        # height on the hypotenuse
        assert width(tri) == pytest.approx(2 / math.sqrt(5))

    def test_diameter(self):
        assert diameter(BoundaryComponent.polygon(UNIT_SQUARE)) == pytest.approx(math.sqrt(2))

    def test_convex_hull_drops_interior(self):
        hull = convex_hull(UNIT_SQUARE + [0.5 + 0.5j])
        assert hull.size == 4

    def test_ray_projection(self):
        lo, hi = projection_interval(Ray(2, 1), 0.0)
        assert (lo, hi) == (2.0, math.inf)
        lo, hi = projection_interval(Ray(2, 1), math.pi / 2)
        assert lo == pytest.approx(0.0) and hi == pytest.approx(0.0)

    def test_grotzsch_projection_fails_at_zero(self):
        result = projections_overlap_all_theta(ring_to_domain(Grotzsch(2)))
        assert not result.holds
        assert result.witness_theta == pytest.approx(0.0)

    def test_exterior_polygon_always_overlaps(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.polygon(UNIT_SQUARE),
            UnboundedComponent.exterior([-2 - 2j, 3 - 2j, 3 + 3j, -2 + 3j]),
        )
        assert projections_overlap_all_theta(dom).holds

    def test_overlap_needs_nondegenerate(self):
        dom = DoublyConnectedDomain(
            BoundaryComponent.point(0), UnboundedComponent.from_rays([Ray(1, 1)])
        )
        with pytest.raises(DegenerateDomainError):
            projections_overlap_all_theta(dom)

    def test_separation_and_diameter(self):
        sep = separation_and_diameter(ring_to_domain(DoubleTeichmuller(3, 3)))
        assert sep.d == pytest.approx(2.0)
        assert sep.d0 == pytest.approx(2.0)

    def test_segments_touching_count(self):
        assert segments_intersect(
            np.array(0j), np.array(1 + 0j), np.array(1 + 0j), np.array(2 + 0j)
        )
        assert not segments_intersect(
            np.array(0j), np.array(1 + 0j), np.array(0 + 1j), np.array(1 + 1j)
        )


class TestAffine:
    def test_singular_map_rejected(self):
        with pytest.raises(InvalidInputError):
            AffineMap(1, 1)

    def test_matrix_round_trip(self):
        m = np.array([[2.0, 1.0], [0.5, 3.0]])
        assert np.allclose(AffineMap.from_matrix(m).matrix(), m)

    def test_inverse(self):
        f = AffineMap(1 + 1j, 0.3, 2 - 1j)
        z = np.array([0.3 + 0.7j, -2 + 1j])
        assert np.allclose(f.inverse()(f(z)), z)

    def test_compose(self):
        f, g = AffineMap(2, 0.5j, 1), AffineMap(1j, -0.2, -1j)
        z = np.array([1 + 1j, -0.5j])
        assert np.allclose(f.compose(g)(z), f(g(z)))

    def test_squeeze_decomposition(self):
        nf = decompose_affine(AffineMap(1, 0.3))
        assert nf.alpha == pytest.approx(0.7 / 1.3)
        assert nf.theta == pytest.approx(0.0)
        assert not nf.conjugate

    def test_similarity_decomposition(self):
        nf = decompose_affine(AffineMap(2j))
        assert nf.alpha == 1.0
        assert nf.theta == 0.0
        assert nf.scale == pytest.approx(2.0)

    @pytest.mark.parametrize(
        ["a", "b", "c"],
        [(1, 0.3, 0), (1 + 2j, 0.4 - 0.5j, 1j), (0.2, 1.5j, -3), (2j, 0, 1)],
    )
    def test_decomposition_reproduces_map(self, a, b, c):
        f = AffineMap(a, b, c)
        nf = decompose_affine(f)
        assert 0 <= nf.theta < math.pi
        assert 0 < nf.alpha <= 1
        z = np.array([1 + 0j, 1j, -0.3 + 2j])
        assert np.allclose(nf(z), f(z))

    def test_orientation_reversal_flagged(self):
        assert decompose_affine(AffineMap(0.2, 1.5j)).conjugate

    def test_tag_kept_by_similarity(self):
        dom = ring_to_domain(DoubleTeichmuller(2, 3))
        image = apply_affine(AffineMap(2j, 0, 5), dom)
        assert image.canonical_tag == DoubleTeichmuller(2, 3)

    def test_tag_recovered_for_collinear_shear(self):
        dom = ring_to_domain(DoubleTeichmuller(2, 3))
        image = apply_affine(AffineMap(1, 0.4 + 0.2j), dom)
        tag = image.canonical_tag
        assert isinstance(tag, DoubleTeichmuller)
        assert tag.s == pytest.approx(2) and tag.t == pytest.approx(3)
