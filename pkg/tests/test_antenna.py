import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexfluid.antenna import (
    AntennaConfig,
    b_db,
    b_integral_linear,
    gv_db,
    horizontal_attenuation_db,
    max_gain_g0,
    pattern_db,
    solid_angle_integral,
    vertical_attenuation_db,
)
from hexfluid.errors import DomainError

from conftest import deg


def cfg(theta3=10.0, phi3=10.0, tilt=30.0, am=21.0, h=30.0):
    return AntennaConfig.from_degrees(theta3, phi3, tilt, am, h)


angles = st.floats(-math.pi, math.pi, allow_nan=False)
configs = st.builds(
    cfg,
    theta3=st.floats(5, 120), phi3=st.floats(3, 40), tilt=st.floats(0, 60),
    am=st.floats(5, 40), h=st.floats(5, 100),
)


class TestConfig:
    @pytest.mark.parametrize("field", ["theta3dB", "phi3dB", "Am", "height"])
    def test_rejects_non_positive(self, field):
        kwargs = dict(theta3dB=0.2, phi3dB=0.2, phiTilt=0.3, Am=21.0, height=30.0)
        kwargs[field] = 0.0
        with pytest.raises(DomainError, match=field):
            AntennaConfig(**kwargs)

    def test_validity_flag(self):
        assert cfg(tilt=30, phi3=10).valid3D
        assert cfg(tilt=10, phi3=10).valid3D
        assert not cfg(tilt=5, phi3=10).valid3D


class TestPlanarPatterns:
    def test_horizontal_examples(self):
        c = cfg()
        assert horizontal_attenuation_db(0.0, c) == 0.0
        assert horizontal_attenuation_db(c.theta3dB / 2, c) == pytest.approx(-3.0, abs=1e-12)
        assert horizontal_attenuation_db(math.pi, c) == -21.0

    def test_vertical_examples(self):
        c = cfg()
        assert vertical_attenuation_db(c.phiTilt, c) == 0.0
        for sign in (1, -1):
            phi = c.phiTilt + sign * c.phi3dB / 2
            assert vertical_attenuation_db(phi, c) == pytest.approx(-3.0, abs=1e-12)
        assert vertical_attenuation_db(0.0, c) == -21.0

    def test_combined_examples(self):
        c = cfg()
        assert pattern_db(0.0, c.phiTilt, c) == 0.0
        assert pattern_db(c.theta3dB / 2, c.phiTilt, c) == pytest.approx(-3.0, abs=1e-12)
        assert pattern_db(math.pi, 0.0, c) == -21.0

    def test_vectorised(self):
        c = cfg()
        thetas = np.linspace(-math.pi, math.pi, 11)
        out = pattern_db(thetas, np.full(11, c.phiTilt), c)
        assert out.shape == (11,)
        assert out[5] == 0.0

    def test_isotropic_is_flat(self, flat_ant):
        assert pattern_db(2.0, -1.0, flat_ant) == 0.0
        assert gv_db(flat_ant) == 0.0


class TestFarField:
    def test_gv_examples(self):
        assert gv_db(cfg(tilt=0)) == 0.0
        assert gv_db(cfg(tilt=30, phi3=10)) == -21.0
        assert gv_db(cfg(tilt=20, phi3=30)) == pytest.approx(-16.0 / 3.0, rel=1e-12)

    def test_gv_is_vertical_at_horizon(self):
        c = cfg(tilt=20, phi3=30)
        assert gv_db(c) == vertical_attenuation_db(0.0, c)

    def test_b_examples(self):
        assert b_db(0.0, cfg()) == 0.0
        # clip level Am + Gv = 0: B vanishes everywhere
        assert b_db(math.pi, cfg(theta3=10, tilt=30, phi3=10)) == 0.0
        c = cfg(theta3=10, tilt=20, phi3=30)
        assert b_db(c.theta3dB / 2, c) == pytest.approx(-3.0, abs=1e-12)
        assert b_db(math.pi, c) == pytest.approx(-(21.0 - 16.0 / 3.0), rel=1e-12)


def riemann_b_integral(c, n=1_000_000):
    theta = -math.pi + (np.arange(n) + 0.5) * (2 * math.pi / n)
    a_h = -np.minimum(12.0 * (theta / c.theta3dB) ** 2, c.Am)
    g_v = -min(12.0 * (c.phiTilt / c.phi3dB) ** 2, c.Am)
    b = -np.minimum(-a_h, c.Am + g_v)
    return float(np.sum(10.0 ** (b / 10.0)) * (2 * math.pi / n))


class TestBIntegral:
    def test_flat_is_two_pi(self):
        assert b_integral_linear(cfg(theta3=10, tilt=30, phi3=10)) == pytest.approx(2 * math.pi,
                                                                                    rel=1e-12)

    def test_constant_floor(self):
        # theta3dB -> 0 with Gv = 0: B sits at -Am except on a vanishing sliver
        c = AntennaConfig(1e-12, deg(10), 0.0, 21.0, 30.0)
        assert b_integral_linear(c) == pytest.approx(2 * math.pi * 10 ** (-2.1), rel=1e-9)

    @pytest.mark.parametrize("theta3,tilt,phi3", [(20, 40, 10), (20, 20, 30), (65, 8, 12)])
    def test_against_riemann_sum(self, theta3, tilt, phi3):
        c = cfg(theta3=theta3, tilt=tilt, phi3=phi3)
        assert b_integral_linear(c) == pytest.approx(riemann_b_integral(c), rel=1e-6)

    @settings(max_examples=40, deadline=None)
    @given(configs)
    def test_bounded_by_two_pi(self, c):
        value = b_integral_linear(c)
        assert 0 < value <= 2 * math.pi * (1 + 1e-12)
        if b_db(math.pi, c) < 0:
            assert value < 2 * math.pi


def stratified_sphere_integral(c, n_side=1000, seed=7):
    """Jittered-grid Monte Carlo over the sphere, uniform in (azimuth, sin(depression))."""
    rng = np.random.default_rng(seed)
    i, j = np.meshgrid(np.arange(n_side), np.arange(n_side), indexing="ij")
    u = (i + rng.random(i.shape)) / n_side
    v = (j + rng.random(j.shape)) / n_side
    theta = -math.pi + 2 * math.pi * u
    phi = np.arcsin(2 * v - 1)
    a_h = -np.minimum(12.0 * (theta / c.theta3dB) ** 2, c.Am)
    a_v = -np.minimum(12.0 * ((phi - c.phiTilt) / c.phi3dB) ** 2, c.Am)
    a = np.maximum(a_h + a_v, -c.Am)
    return 4 * math.pi * float(np.mean(10.0 ** (a / 10.0)))


class TestMaxGain:
    def test_isotropic(self, flat_ant):
        assert max_gain_g0(flat_ant) == pytest.approx(1.0, rel=1e-9)

    def test_hemisphere(self):
        total = solid_angle_integral(lambda t, p: 1.0 if p >= 0 else 0.0, depression_points=[0.0])
        assert 4 * math.pi / total == pytest.approx(2.0, rel=1e-9)

    @pytest.mark.parametrize("name", ["scenario2", "scenario5"])
    def test_against_monte_carlo(self, name):
        from hexfluid.simulator import preset

        c = preset(name).ant
        oracle = 4 * math.pi / stratified_sphere_integral(c)
        assert max_gain_g0(c) == pytest.approx(oracle, rel=1e-3)

    def test_at_least_one(self):
        assert max_gain_g0(cfg(theta3=70, phi3=10, tilt=5)) >= 1.0


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(configs, angles, st.floats(-math.pi / 2, math.pi / 2))
    def test_pattern_bounds(self, c, theta, phi):
        value = pattern_db(theta, phi, c)
        assert -c.Am <= value <= 0.0
        assert pattern_db(0.0, c.phiTilt, c) == 0.0

    @settings(max_examples=200, deadline=None)
    @given(configs, angles, st.floats(0, 0.5))
    def test_evenness(self, c, theta, dphi):
        assert horizontal_attenuation_db(theta, c) == horizontal_attenuation_db(-theta, c)
        up = vertical_attenuation_db(c.phiTilt + dphi, c)
        down = vertical_attenuation_db(c.phiTilt - dphi, c)
        assert up == pytest.approx(down, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(configs, angles, st.floats(-math.pi / 2, math.pi / 2))
    def test_far_field_identity_when_saturated(self, c, theta, phi):
        if 12.0 * ((phi - c.phiTilt) / c.phi3dB) ** 2 >= c.Am:
            assert vertical_attenuation_db(phi, c) == -c.Am
        if vertical_attenuation_db(phi, c) == gv_db(c):
            assert pattern_db(theta, phi, c) == pytest.approx(b_db(theta, c) + gv_db(c), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(configs)
    def test_vertical_converges_to_gv(self, c):
        if c.phiTilt <= 0:
            return
        r = np.geomspace(c.height / math.tan(c.phiTilt) * 1.001, 1e9, 400)
        att = vertical_attenuation_db(np.arctan(c.height / r), c)
        assert np.all(np.diff(att) <= 1e-12)
        assert att[-1] == pytest.approx(gv_db(c), abs=1e-3)
