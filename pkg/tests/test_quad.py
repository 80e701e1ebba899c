import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from isoptic.errors import (
    CollinearInput,
    CyclicDegeneration,
    NonCollinearFeet,
    PointAtInfinity,
    Underdetermined,
)
from isoptic.kernel import (
    AtInfinity,
    GenCircle,
    Point,
    circumcircle,
    intersect,
    is_finite,
    orthocenter,
)
from isoptic.quad import (
    Quadrilateral,
    angle_decomposition,
    angle_sums_at_point,
    classify,
    collinearity_residual,
    cotangent_identity_residuals,
    four_circumcenters_residual,
    generation_spiral,
    interior_angles,
    isodynamic_ratios,
    isogonal_conjugate_quad,
    isoptic_point,
    isoptic_point_via_inv_iso,
    isoptic_point_via_inversion,
    isoptic_point_via_limit,
    isoptic_quantity,
    is_cyclic,
    next_generation,
    noncyclicity_measure,
    parallelogram_residual,
    pedal_quadrilateral,
    prev_generation,
    quad_distance,
    quadrangle_duality_residual,
    reconstruct_fourth_vertex,
    reconstruct_from_pedal_w,
    reconstruct_from_simson,
    similarity_ratio,
    simson_line,
    simson_point,
    triad_circles,
    varignon,
)
from isoptic.verify import CaseSpec, random_quadrilateral

SQUARE = Quadrilateral(Point(1, 1), Point(-1, 1), Point(-1, -1), Point(1, -1))
GENERIC = Quadrilateral(Point(0, 0), Point(4, 0), Point(5, 3), Point(1, 4))
TRAPEZOID = Quadrilateral(Point(0, 0), Point(4, 0), Point(3, 2), Point(1, 2))
DART = Quadrilateral(Point(0, 0), Point(4, 0), Point(1, 1), Point(0, 4))


def ortho_quad():
    a, b, c = Point(0, 0), Point(4, 0), Point(1, 3)
    return Quadrilateral(a, b, c, orthocenter(a, b, c))


def pi4_parallelogram():
    a = Point(0, 0)
    u = Point(2, 0)
    v = Point(3 * math.cos(math.pi / 4), 3 * math.sin(math.pi / 4))
    return Quadrilateral(a, a + u, a + u + v, a + v)


def generic_quads(count=25, shape="convex-noncyclic", seed=3):
    spec = CaseSpec(seed=seed, shape_class=shape)
    return [random_quadrilateral(spec, i) for i in range(count)]


class TestQuadrilateral:
    def test_collinear_triple_rejected(self):
        with pytest.raises(CollinearInput):
            Quadrilateral(Point(0, 0), Point(1, 0), Point(2, 0), Point(0, 3))

    def test_area_square(self):
        assert SQUARE.area() == pytest.approx(4.0)


class TestTriadCircles:
    def test_square_all_equal(self):
        sys = triad_circles(SQUARE)
        for c in sys.circles:
            assert c.center().dist(Point(0, 0)) < 1e-12
            assert c.radius() == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_generic_passes_through_defining_vertices(self):
        a, b, c, d = GENERIC.vertices()
        triples = [(d, a, b), (a, b, c), (b, c, d), (c, d, a)]
        sys = triad_circles(GENERIC)
        for circle, triple in zip(sys.circles, triples):
            for v in triple:
                assert circle.distance_to(v) < 1e-10

    def test_collinear_triple(self):
        # validation happens when the quadrilateral is built
        with pytest.raises(CollinearInput):
            Quadrilateral(Point(0, 0), Point(2, 0), Point(4, 0), Point(1, 3))


class TestGenerations:
    def test_square_degenerates(self):
        with pytest.raises(CyclicDegeneration) as exc:
            next_generation(SQUARE)
        assert exc.value.point.dist(Point(0, 0)) < 1e-12

    def test_supplementary_angles(self):
        a1 = interior_angles(GENERIC)
        a2 = interior_angles(next_generation(GENERIC))
        for x, y in zip(a1, a2):
            assert x + y == pytest.approx(math.pi, abs=1e-9)

    def test_trapezoid_stays_similar(self):
        # noncyclic trapezoid: the generation map is a similarity, so
        # side-length ratios repeat
        q = Quadrilateral(Point(0, 0), Point(6, 0), Point(4, 2), Point(1, 2))
        assert not is_cyclic(q)
        q2 = next_generation(q)
        v1, v2 = q.vertices(), q2.vertices()
        # correspondence may be reversed, so compare sorted side lists
        sides1 = sorted(v1[i].dist(v1[(i + 1) % 4]) for i in range(4))
        sides2 = sorted(v2[i].dist(v2[(i + 1) % 4]) for i in range(4))
        ratios = [s2 / s1 for s1, s2 in zip(sides1, sides2)]
        diags = [v2[0].dist(v2[2]) / max(v1[0].dist(v1[2]), v1[1].dist(v1[3])),
                 v2[1].dist(v2[3]) / min(v1[0].dist(v1[2]), v1[1].dist(v1[3]))]
        ratios += [max(diags), min(diags)]
        assert max(ratios) - min(ratios) < 1e-9

    def test_roundtrips(self):
        fwd = prev_generation(next_generation(GENERIC))
        bwd = next_generation(prev_generation(GENERIC))
        assert quad_distance(GENERIC, fwd) < 1e-8
        assert quad_distance(GENERIC, bwd) < 1e-8

    def test_area_ratio_law(self):
        r = similarity_ratio(GENERIC)
        q2 = next_generation(GENERIC)
        assert q2.area() / GENERIC.area() == pytest.approx(abs(r), abs=1e-12)


class TestSimilarityRatio:
    def test_pi4_parallelogram(self):
        assert similarity_ratio(pi4_parallelogram()) == pytest.approx(-1.0, abs=1e-9)

    def test_orthocentric(self):
        assert similarity_ratio(ortho_quad()) == pytest.approx(1.0, abs=1e-9)

    def test_cyclic(self):
        assert abs(similarity_ratio(SQUARE)) < 1e-9

    def test_range_excludes_zero_one(self):
        for q in generic_quads(10) + generic_quads(10, "concave"):
            r = similarity_ratio(q)
            assert r <= 1e-9 or r >= 1.0 - 1e-9


class TestNoncyclicity:
    def test_cyclic_construction(self):
        q = Quadrilateral(*(Point(3 * math.cos(t), 3 * math.sin(t))
                            for t in (0.3, 1.2, 2.8, 5.0)))
        assert noncyclicity_measure(q) < 1e-10

    def test_generic_sign_matches_determinant(self):
        # concyclicity determinant of the lifted points (x, y, x^2+y^2, 1)
        import numpy as np
        vs = GENERIC.vertices()
        m = np.array([[v.x, v.y, v.x ** 2 + v.y ** 2, 1.0] for v in vs])
        assert abs(np.linalg.det(m)) > 1e-6
        assert noncyclicity_measure(GENERIC) > 1e-6


class TestClassify:
    def test_square(self):
        shape = classify(SQUARE)
        assert shape.convex and shape.cyclic and shape.trapezoid and shape.parallelogram

    def test_dart(self):
        shape = classify(DART)
        assert not shape.convex and not shape.cyclic
        # cross-product signs around the boundary disagree
        vs = DART.vertices()
        signs = set()
        for i in range(4):
            u = vs[(i + 1) % 4] - vs[i]
            v = vs[(i + 2) % 4] - vs[(i + 1) % 4]
            signs.add(u.cross(v) > 0)
        assert len(signs) == 2

    def test_orthocentric(self):
        assert classify(ortho_quad()).orthocentric


class TestAngleDecomposition:
    def test_parts_sum_to_interior_angle(self):
        dec = angle_decomposition(GENERIC)
        whole = interior_angles(GENERIC)
        pairs = [(dec.alpha1, dec.alpha2), (dec.beta1, dec.beta2),
                 (dec.gamma1, dec.gamma2), (dec.delta1, dec.delta2)]
        for (p1, p2), full in zip(pairs, whole):
            diff = (p1.value + p2.value - full) % math.pi
            assert min(diff, math.pi - diff) < 1e-9

    def test_cotangent_identities(self):
        assert max(cotangent_identity_residuals(GENERIC)) < 1e-9


class TestIsopticPoint:
    def test_cyclic_gives_circumcenter(self):
        q = Quadrilateral(*(Point(2 + math.cos(t), -1 + math.sin(t))
                            for t in (0.2, 1.5, 3.0, 4.8)))
        w = isoptic_point(q)
        assert is_finite(w)
        assert w.dist(Point(2, -1)) < 1e-9

    def test_orthocentric_at_infinity(self):
        assert isinstance(isoptic_point(ortho_quad()), AtInfinity)

    def test_agrees_with_iteration_limit(self):
        w = isoptic_point(GENERIC)
        w2 = isoptic_point_via_limit(GENERIC)
        assert w.dist(w2) < 1e-8 * GENERIC.scale()

    def test_all_methods_agree(self):
        w = isoptic_point(GENERIC)
        for other in (isoptic_point_via_inversion(GENERIC),
                      isoptic_point_via_inv_iso(GENERIC),
                      isoptic_point_via_limit(GENERIC)):
            assert w.dist(other) < 1e-8 * GENERIC.scale()

    def test_lies_on_all_six_cs(self):
        from isoptic.kernel import circle_of_similitude
        w = isoptic_point(GENERIC)
        circles = triad_circles(GENERIC).circles
        for i in range(4):
            for j in range(i + 1, 4):
                cs = circle_of_similitude(circles[i], circles[j])
                assert cs.distance_to(w) < 1e-9 * GENERIC.scale()

    def test_limit_converges_fast_when_r_small(self):
        spec = CaseSpec(seed=11, shape_class="convex-noncyclic")
        for i in range(40):
            q = random_quadrilateral(spec, i)
            if abs(similarity_ratio(q)) < 0.12:
                w = isoptic_point_via_limit(q, max_gen=10)
                assert is_finite(w)
                assert w.dist(isoptic_point(q)) < 1e-7 * q.scale()
                return
        pytest.fail("no suitably contracting case found")


class TestIsopticQuantity:
    def test_equal_at_w(self):
        w = isoptic_point(GENERIC)
        qty = isoptic_quantity(GENERIC, w)
        assert max(qty) - min(qty) < 1e-8 * max(qty)

    def test_unequal_at_vertex(self):
        qty = isoptic_quantity(GENERIC, Point(0.5, 0.5))
        assert max(qty) - min(qty) > 1e-3 * max(qty)

    def test_cyclic_center_gives_zero(self):
        q = Quadrilateral(*(Point(math.cos(t), math.sin(t))
                            for t in (0.2, 1.5, 3.0, 4.8)))
        qty = isoptic_quantity(q, Point(0, 0))
        assert max(abs(v) for v in qty) < 1e-12


class TestIsodynamic:
    def test_residual_small_at_w(self):
        w = isoptic_point(GENERIC)
        assert isodynamic_ratios(GENERIC, w) < 1e-8

    def test_diagonal_ratio_matches_sines(self):
        # |WA| : |WC| equals sin(angle at C) : sin(angle at A)
        w = isoptic_point(GENERIC)
        a, _, c, _ = GENERIC.vertices()
        alpha, _, gamma, _ = interior_angles(GENERIC)
        assert w.dist(a) / w.dist(c) == pytest.approx(
            math.sin(gamma) / math.sin(alpha), abs=1e-8)

    def test_large_at_centroid(self):
        assert isodynamic_ratios(GENERIC, GENERIC.centroid()) > 1e-3


class TestAngleSums:
    def test_small_at_w(self):
        w = isoptic_point(GENERIC)
        assert angle_sums_at_point(GENERIC, w) < 1e-9

    def test_cyclic_center(self):
        q = Quadrilateral(*(Point(math.cos(t), math.sin(t))
                            for t in (0.1, 1.0, 2.5, 4.0)))
        assert angle_sums_at_point(q, Point(0, 0)) < 1e-9

    def test_nonzero_elsewhere(self):
        assert angle_sums_at_point(GENERIC, Point(2, 1)) > 1e-3


class TestPedal:
    def test_square_center_feet_are_midpoints(self):
        feet = pedal_quadrilateral(SQUARE, Point(0, 0))
        expected = [Point(0, 1), Point(-1, 0), Point(0, -1), Point(1, 0)]
        for f, e in zip(feet, expected):
            assert f.dist(e) < 1e-12

    def test_pedal_of_w_is_parallelogram(self):
        w = isoptic_point(GENERIC)
        feet = pedal_quadrilateral(GENERIC, w)
        assert parallelogram_residual(feet, GENERIC.scale()) < 1e-9

    def test_pedal_of_s_is_collinear(self):
        s = simson_point(GENERIC)
        feet = pedal_quadrilateral(GENERIC, s)
        assert collinearity_residual(feet) < 1e-9 * GENERIC.scale()


class TestSimson:
    def test_trapezoid_side_intersection(self):
        s = simson_point(TRAPEZOID)
        assert s.dist(Point(2, 4)) < 1e-9

    def test_parallelogram_at_infinity(self):
        q = Quadrilateral(Point(0, 0), Point(3, 0), Point(4, 2), Point(1, 2))
        assert isinstance(simson_point(q), AtInfinity)

    def test_cyclic_branch(self):
        q = Quadrilateral(*(Point(2 * math.cos(t), 2 * math.sin(t))
                            for t in (0.3, 1.4, 2.9, 4.9)))
        s = simson_point(q)
        assert is_finite(s)
        a, b, c, d = q.vertices()
        o = Point(0, 0)
        for circle in (circumcircle(b, o, d), circumcircle(a, o, c)):
            assert circle.distance_to(s) < 1e-9
        assert collinearity_residual(pedal_quadrilateral(q, s)) < 1e-8 * q.scale()

    def test_simson_line_through_feet(self):
        line = simson_line(GENERIC)
        s = simson_point(GENERIC)
        for f in pedal_quadrilateral(GENERIC, s):
            assert line.distance_to(f) < 1e-8 * GENERIC.scale()

    def test_simson_line_parallelogram_errors(self):
        q = Quadrilateral(Point(0, 0), Point(3, 0), Point(4, 2), Point(1, 2))
        with pytest.raises(PointAtInfinity):
            simson_line(q)


class TestVarignon:
    def test_square(self):
        mids = varignon(SQUARE)
        expected = [Point(0, 1), Point(-1, 0), Point(0, -1), Point(1, 0)]
        for m, e in zip(mids, expected):
            assert m.dist(e) < 1e-14

    def test_always_parallelogram(self):
        for q in (GENERIC, TRAPEZOID, DART):
            assert parallelogram_residual(varignon(q), q.scale()) < 1e-14

    def test_cyclic_equals_pedal_of_circumcenter(self):
        q = Quadrilateral(*(Point(5 * math.cos(t), 5 * math.sin(t))
                            for t in (0.5, 1.6, 3.1, 4.7)))
        mids = varignon(q)
        feet = pedal_quadrilateral(q, Point(0, 0))
        for m, f in zip(mids, feet):
            assert m.dist(f) < 1e-9


class TestGenerationSpiral:
    def test_convex_rotation_is_half_turn(self):
        s = generation_spiral(GENERIC)
        assert abs(s.angle) == pytest.approx(math.pi, abs=1e-8)
        assert s.angle > 0  # normalized into (-pi, pi]

    def test_concave_rotation_is_zero(self):
        q = generic_quads(1, "concave", seed=5)[0]
        s = generation_spiral(q)
        assert abs(s.angle) < 1e-8

    def test_ratio_matches_r(self):
        # area shrinks by |r| per generation, so the two-generation
        # similarity has linear ratio |r|
        s = generation_spiral(GENERIC)
        r = similarity_ratio(GENERIC)
        assert s.ratio == pytest.approx(abs(r), rel=1e-8)


class TestIsogonalConjugateQuad:
    def test_square_center_fixed(self):
        pts = isogonal_conjugate_quad(SQUARE, Point(0, 0))
        for p in pts:
            assert is_finite(p) and p.dist(Point(0, 0)) < 1e-10

    def test_conjugate_of_w_is_parallelogram(self):
        w = isoptic_point(GENERIC)
        pts = isogonal_conjugate_quad(GENERIC, w)
        assert all(is_finite(p) for p in pts)
        assert parallelogram_residual(pts, GENERIC.scale()) < 1e-8

    def test_conjugate_of_s_escapes_to_infinity(self):
        s = simson_point(GENERIC)
        pts = isogonal_conjugate_quad(GENERIC, s)
        assert all(isinstance(p, AtInfinity) for p in pts)


class TestReconstructions:
    def test_pedal_w_square(self):
        feet = [Point(0, 1), Point(-1, 0), Point(0, -1), Point(1, 0)]
        q = reconstruct_from_pedal_w(Point(0, 0), feet)
        assert quad_distance(q, SQUARE) < 1e-12

    def test_pedal_w_roundtrip(self):
        w = isoptic_point(GENERIC)
        q = reconstruct_from_pedal_w(w, pedal_quadrilateral(GENERIC, w))
        assert quad_distance(q, GENERIC) < 1e-8

    def test_simson_roundtrip(self):
        # generic quad; a trapezoid's S sits on two of the side lines,
        # which collapses two feet onto S and starves the reconstruction
        s = simson_point(GENERIC)
        q = reconstruct_from_simson(s, pedal_quadrilateral(GENERIC, s))
        assert quad_distance(q, GENERIC) < 1e-8 * GENERIC.scale()

    def test_simson_rejects_noncollinear_feet(self):
        with pytest.raises(NonCollinearFeet):
            reconstruct_from_simson(Point(0, 0), [Point(1, 0), Point(2, 0),
                                                  Point(3, 1), Point(4, 0)])

    def test_fourth_vertex_roundtrip(self):
        a, b, c, d = GENERIC.vertices()
        w = isoptic_point(GENERIC)
        rec = reconstruct_fourth_vertex(a, b, c, w)
        assert rec.dist(d) < 1e-8 * GENERIC.scale()

    def test_fourth_vertex_underdetermined_at_circumcenter(self):
        a, b, c = Point(0, 0), Point(4, 0), Point(0, 4)
        with pytest.raises(Underdetermined):
            reconstruct_fourth_vertex(a, b, c, Point(2, 2))


class TestDualityAndTransport:
    def test_duality_residual_small_at_w(self):
        w = isoptic_point(GENERIC)
        assert quadrangle_duality_residual(GENERIC, w, 1.0) < 1e-7

    def test_duality_independent_of_mirror_radius(self):
        w = isoptic_point(GENERIC)
        r1 = quadrangle_duality_residual(GENERIC, w, 0.5)
        r2 = quadrangle_duality_residual(GENERIC, w, 3.0)
        assert r1 < 1e-7 and r2 < 1e-7

    def test_duality_large_off_w(self):
        assert quadrangle_duality_residual(GENERIC, Point(2, 1), 1.0) > 1e-4

    def test_four_circumcenters(self):
        from isoptic.kernel import Triangle
        t = Triangle(Point(0, 0), Point(5, 1), Point(2, 4))
        assert four_circumcenters_residual(t, Point(2, 1.5)) < 1e-8


class TestPeriodicity:
    def test_pi4_parallelogram_period_two(self):
        q = pi4_parallelogram()
        q3 = next_generation(next_generation(q))
        assert quad_distance(q, q3) < 1e-8 * q.scale()

    def test_orthocentric_period_two(self):
        q = ortho_quad()
        q3 = next_generation(next_generation(q))
        assert quad_distance(q, q3) < 1e-8 * q.scale()
