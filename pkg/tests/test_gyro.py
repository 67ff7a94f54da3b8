"""Unit tests for the Einstein gyrovector operations and Mobius counterparts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperklein.gyro import (
    GyroParams,
    bias_translate,
    einstein_add,
    einstein_apply,
    einstein_matvec,
    einstein_midpoint,
    einstein_neg,
    einstein_scalar,
    gyration,
    klein_geodesic_between,
    mobius_add,
)
from hyperklein.manifolds import (
    KleinPoint,
    Model,
    PoincarePoint,
    convert_point,
    exp_map,
    log_map,
    origin,
    tangent,
    transport_from_origin,
)


def sample_klein(rng, dim, max_norm=0.95):
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    return KleinPoint(rng.uniform(0.0, max_norm) * direction)


ball_coords = st.lists(
    st.floats(-0.55, 0.55, allow_nan=False, allow_infinity=False), min_size=2, max_size=2
).map(np.asarray)


class TestEinsteinAdd:
    def test_collinear_velocity_addition(self):
        out = einstein_add(KleinPoint([0.5, 0.0]), KleinPoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.8, 0.0], atol=1e-15)

    def test_right_identity(self):
        x = KleinPoint([0.3, -0.2])
        np.testing.assert_allclose(einstein_add(x, KleinPoint([0.0, 0.0])).coords, x.coords)

    def test_inverse(self):
        x = KleinPoint([0.8, 0.0])
        out = einstein_add(einstein_neg(x), x)
        np.testing.assert_allclose(out.coords, [0.0, 0.0], atol=1e-15)

    def test_general_pair_value(self):
        out = einstein_add(KleinPoint([0.3, -0.2]), KleinPoint([0.4, 0.1]))
        np.testing.assert_allclose(
            out.coords, [0.626015621795772, -0.10643111276088748], atol=1e-14
        )

    def test_collinear_reduction(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            d = rng.normal(size=3)
            d /= np.linalg.norm(d)
            a, b = rng.uniform(-0.9, 0.9, size=2)
            out = einstein_add(KleinPoint(a * d), KleinPoint(b * d))
            np.testing.assert_allclose(out.coords, (a + b) / (1 + a * b) * d, atol=1e-12)

    @given(ball_coords, ball_coords)
    @settings(max_examples=80, deadline=None)
    def test_inverse_property(self, xc, yc):
        x = KleinPoint(xc)
        out = einstein_add(einstein_neg(x), x)
        assert np.linalg.norm(out.coords) < 1e-12


class TestEinsteinNeg:
    def test_coordinate_negation(self):
        np.testing.assert_array_equal(einstein_neg(KleinPoint([0.3, -0.4])).coords, [-0.3, 0.4])

    def test_origin_fixed(self):
        np.testing.assert_array_equal(einstein_neg(KleinPoint([0.0, 0.0])).coords, [0.0, 0.0])


class TestEinsteinScalar:
    def test_doubling(self):
        out = einstein_scalar(2.0, KleinPoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.8, 0.0], atol=1e-15)

    def test_unit_scalar(self):
        x = KleinPoint([0.3, -0.2])
        np.testing.assert_allclose(einstein_scalar(1.0, x).coords, x.coords, atol=1e-15)

    def test_zero_scalar(self):
        np.testing.assert_array_equal(
            einstein_scalar(0.0, KleinPoint([0.3, -0.2])).coords, [0.0, 0.0]
        )

    def test_zero_point(self):
        np.testing.assert_array_equal(
            einstein_scalar(2.5, KleinPoint([0.0, 0.0])).coords, [0.0, 0.0]
        )

    def test_general_value(self):
        out = einstein_scalar(0.7, KleinPoint([0.3, -0.2]))
        np.testing.assert_allclose(
            out.coords, [0.21490357706159395, -0.14326905137439597], atol=1e-14
        )

    def test_matches_tangent_space_construction(self):
        rng = np.random.default_rng(1)
        o = origin(Model.KLEIN, 4)
        for _ in range(200):
            x = sample_klein(rng, 4)
            r = float(rng.uniform(-3.0, 3.0))
            direct = einstein_scalar(r, x)
            via = exp_map(o, tangent(o, r * log_map(o, x).components))
            np.testing.assert_allclose(direct.coords, via.coords, atol=1e-9)


class TestGyration:
    def test_second_argument_zero(self):
        x, z = KleinPoint([0.5, 0.1]), KleinPoint([0.3, 0.1])
        np.testing.assert_allclose(
            gyration(x, KleinPoint([0.0, 0.0]), z).coords, z.coords, atol=1e-12
        )

    def test_parallel_arguments(self):
        x, z = KleinPoint([0.5, 0.1]), KleinPoint([0.3, 0.1])
        np.testing.assert_allclose(gyration(x, x, z).coords, z.coords, atol=1e-12)

    def test_norm_preserved(self):
        out = gyration(KleinPoint([0.5, 0.0]), KleinPoint([0.0, 0.5]), KleinPoint([0.3, 0.1]))
        assert np.linalg.norm(out.coords) == pytest.approx(
            np.linalg.norm([0.3, 0.1]), abs=1e-10
        )
        np.testing.assert_allclose(
            out.coords, [0.3112087098689504, 0.056117189003935845], atol=1e-12
        )

    def test_gyrocommutativity(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            x, y = sample_klein(rng, 3), sample_klein(rng, 3)
            lhs = einstein_add(x, y)
            rhs = gyration(x, y, einstein_add(y, x))
            np.testing.assert_allclose(lhs.coords, rhs.coords, atol=1e-9)

    def test_left_gyroassociativity(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            x, y, z = (sample_klein(rng, 3) for _ in range(3))
            lhs = einstein_add(x, einstein_add(y, z))
            rhs = einstein_add(einstein_add(x, y), gyration(x, y, z))
            np.testing.assert_allclose(lhs.coords, rhs.coords, atol=1e-9)

    def test_inner_product_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            x, y, u, w = (sample_klein(rng, 3) for _ in range(4))
            gu = gyration(x, y, u).coords
            gw = gyration(x, y, w).coords
            assert gu @ gw == pytest.approx(u.coords @ w.coords, abs=1e-9)


class TestMobiusAdd:
    def test_collinear(self):
        out = mobius_add(PoincarePoint([0.5, 0.0]), PoincarePoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.8, 0.0], atol=1e-15)

    def test_identities(self):
        x = PoincarePoint([0.3, -0.1])
        zero = PoincarePoint([0.0, 0.0])
        np.testing.assert_allclose(mobius_add(x, zero).coords, x.coords)
        np.testing.assert_allclose(mobius_add(zero, x).coords, x.coords)

    def test_consistency_with_einstein(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            dim = int(rng.integers(1, 9))
            xb = convert_point(sample_klein(rng, dim), Model.POINCARE)
            yb = convert_point(sample_klein(rng, dim), Model.POINCARE)
            lhs = convert_point(mobius_add(xb, yb), Model.KLEIN)
            rhs = einstein_add(
                convert_point(xb, Model.KLEIN), convert_point(yb, Model.KLEIN)
            )
            np.testing.assert_allclose(lhs.coords, rhs.coords, atol=1e-9)


class TestEinsteinApply:
    def test_identity_map(self):
        x = KleinPoint([0.8, 0.0])
        out = einstein_apply(lambda v: v, x)
        np.testing.assert_allclose(out.coords, x.coords, atol=1e-12)

    def test_doubling_map_matches_scalar(self):
        out = einstein_apply(lambda v: 2.0 * v, KleinPoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.8, 0.0], atol=1e-12)

    def test_relu_map(self):
        out = einstein_apply(lambda v: np.maximum(v, 0.0), KleinPoint([-0.5, 0.5]))
        np.testing.assert_allclose(out.coords, [0.0, 0.5533696351790970], atol=1e-12)

    def test_non_origin_preserving_rejected(self):
        with pytest.raises(ValueError):
            einstein_apply(lambda v: v + 1.0, KleinPoint([0.1, 0.1]))


class TestEinsteinMatvec:
    def test_identity_matrix(self):
        x = KleinPoint([0.4, -0.3])
        np.testing.assert_allclose(einstein_matvec(np.eye(2), x).coords, x.coords, atol=1e-14)

    def test_rotation_acts_linearly(self):
        rot = np.array([[0.0, -1.0], [1.0, 0.0]])
        out = einstein_matvec(rot, KleinPoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.0, 0.5], atol=1e-14)

    def test_doubling(self):
        out = einstein_matvec(2.0 * np.eye(2), KleinPoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.8, 0.0], atol=1e-14)

    def test_zero_image_returns_origin(self):
        out = einstein_matvec(np.zeros((3, 2)), KleinPoint([0.5, 0.0]))
        np.testing.assert_array_equal(out.coords, np.zeros(3))

    def test_matches_tangent_space_construction(self):
        rng = np.random.default_rng(6)
        o2 = origin(Model.KLEIN, 2)
        for _ in range(200):
            m = rng.normal(size=(3, 2))
            x = sample_klein(rng, 2)
            direct = einstein_matvec(m, x)
            w = m @ log_map(o2, x).components
            via = exp_map(origin(Model.KLEIN, 3), tangent(origin(Model.KLEIN, 3), w))
            np.testing.assert_allclose(direct.coords, via.coords, atol=1e-10)

    def test_composition_property(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            m1 = rng.normal(size=(2, 3))
            m2 = rng.normal(size=(3, 4))
            x = sample_klein(rng, 4)
            lhs = einstein_matvec(m1 @ m2, x)
            rhs = einstein_matvec(m1, einstein_matvec(m2, x))
            np.testing.assert_allclose(lhs.coords, rhs.coords, atol=1e-9)

    def test_scaling_property(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            m = rng.normal(size=(3, 3))
            r = float(rng.uniform(0.1, 3.0))
            x = sample_klein(rng, 3)
            lhs = einstein_matvec(r * m, x)
            rhs = einstein_scalar(r, einstein_matvec(m, x))
            np.testing.assert_allclose(lhs.coords, rhs.coords, atol=1e-9)

    def test_orthogonal_property(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            q, r = np.linalg.qr(rng.normal(size=(4, 4)))
            q = q * np.sign(np.diag(r))
            x = sample_klein(rng, 4)
            np.testing.assert_allclose(
                einstein_matvec(q, x).coords, q @ x.coords, atol=1e-10
            )

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            einstein_matvec(np.eye(3), KleinPoint([0.1, 0.1]))


class TestBiasTranslate:
    def test_zero_bias(self):
        x = KleinPoint([0.2, 0.6])
        np.testing.assert_allclose(bias_translate(x, KleinPoint([0.0, 0.0])).coords, x.coords)

    def test_zero_point(self):
        b = KleinPoint([0.2, 0.6])
        np.testing.assert_allclose(bias_translate(KleinPoint([0.0, 0.0]), b).coords, b.coords)

    def test_collinear(self):
        out = bias_translate(KleinPoint([0.5, 0.0]), KleinPoint([0.5, 0.0]))
        np.testing.assert_allclose(out.coords, [0.8, 0.0], atol=1e-15)

    def test_equals_transported_exponential(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            dim = int(rng.integers(1, 9))
            x, b = sample_klein(rng, dim), sample_klein(rng, dim)
            o = origin(Model.KLEIN, dim)
            via = exp_map(x, transport_from_origin(x, log_map(o, b)))
            np.testing.assert_allclose(
                bias_translate(x, b).coords, via.coords, atol=1e-8
            )


class TestGeodesicBetween:
    def test_endpoints(self):
        rng = np.random.default_rng(11)
        x, y = sample_klein(rng, 3), sample_klein(rng, 3)
        np.testing.assert_allclose(klein_geodesic_between(x, y, 0.0).coords, x.coords, atol=1e-10)
        np.testing.assert_allclose(klein_geodesic_between(x, y, 1.0).coords, y.coords, atol=1e-10)

    def test_midpoint_through_origin(self):
        out = klein_geodesic_between(KleinPoint([0.0, 0.0]), KleinPoint([0.8, 0.0]), 0.5)
        np.testing.assert_allclose(out.coords, [0.5, 0.0], atol=1e-12)

    def test_degenerate(self):
        x = KleinPoint([0.5, 0.0])
        for t in (0.0, 0.3, 1.0, 2.0):
            np.testing.assert_allclose(klein_geodesic_between(x, x, t).coords, x.coords, atol=1e-12)

    def test_image_is_a_straight_chord(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            x, y = sample_klein(rng, 2), sample_klein(rng, 2)
            chord = y.coords - x.coords
            chord /= np.linalg.norm(chord)
            for t in np.linspace(0.0, 1.0, 7):
                g = klein_geodesic_between(x, y, float(t)).coords - x.coords
                off = g - (g @ chord) * chord
                assert np.linalg.norm(off) < 1e-9


class TestEinsteinMidpoint:
    def test_singleton(self):
        x = KleinPoint([0.4, 0.1])
        np.testing.assert_allclose(einstein_midpoint([x], [1.0]).coords, x.coords)

    def test_symmetric_pair(self):
        x = KleinPoint([0.4, 0.1])
        out = einstein_midpoint([x, einstein_neg(x)])
        np.testing.assert_allclose(out.coords, [0.0, 0.0], atol=1e-15)

    def test_weighted_value(self):
        out = einstein_midpoint([KleinPoint([0.8, 0.0]), KleinPoint([0.0, 0.0])])
        np.testing.assert_allclose(out.coords, [0.5, 0.0], atol=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty aggregation"):
            einstein_midpoint([])
        with pytest.raises(ValueError, match="empty aggregation"):
            einstein_midpoint([KleinPoint([0.1, 0.1])], [0.0])

    def test_inside_ball(self):
        rng = np.random.default_rng(13)
        pts = [sample_klein(rng, 3, max_norm=0.999) for _ in range(5)]
        out = einstein_midpoint(pts, rng.uniform(0.0, 1.0, size=5))
        assert np.linalg.norm(out.coords) < 1.0


class TestGyroParams:
    def test_gamma_at_origin(self):
        assert GyroParams().gamma(np.zeros(3)) == 1.0

    def test_invalid_radius(self):
        with pytest.raises(ValueError):
            GyroParams(c=0.0)
