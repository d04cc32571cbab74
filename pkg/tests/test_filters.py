import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from circsim import filters as fl
from circsim.errors import RangeError, SingularError
from circsim.touchstone import NetworkData, group_delay_curve


def sigma_max(s):
    return np.linalg.svd(s, compute_uv=False)[..., 0]


def test_brickwall_band_and_phase():
    bw = fl.BrickWall(900e6, 40e6, 20e-9, il_db=0.9)
    s = fl.evaluate(bw, [900e6, 915e6, 925e6])
    assert abs(s[0, 1, 0]) == pytest.approx(10 ** (-0.045))
    assert s[1, 1, 0] == pytest.approx(10 ** (-0.045) * np.exp(-2j * math.pi * 915e6 * 20e-9))
    assert s[2, 1, 0] == 0 and s[2, 0, 0] == 1
    assert s[0, 0, 0] == 0


def test_brickwall_reflection_phase():
    bw = fl.BrickWall(900e6, 40e6, 20e-9, reflection_phase_rad=math.pi)
    assert fl.evaluate(bw, 1e9)[0, 0] == pytest.approx(-1)
    np.testing.assert_allclose(fl.far_sparams(bw), -np.eye(2))


@given(st.floats(1e6, 3e9))
def test_models_are_passive_and_reciprocal(f):
    models = [fl.BrickWall(900e6, 40e6, 20e-9, 0.9),
              fl.Parametric(900e6, 40e6, 10e6, 20e-9, 1e-16, 0.9, 25.0),
              fl.Parametric.from_delay_span(900e6, 40e6, 15e-9, 23e-9, edge_hz=5e6)]
    for m in models:
        s = fl.evaluate(m, f)
        assert sigma_max(s) <= 1 + 1e-12
        assert s[1, 0] == s[0, 1]


def test_parametric_passivity_check():
    with pytest.raises(ValueError, match="passive"):
        fl.Parametric(900e6, 40e6, il_db=0.0, rl_db=20.0)


def test_parametric_group_delay_span():
    m = fl.Parametric.from_delay_span(900e6, 40e6, 15e-9, 23e-9)
    f = np.linspace(881e6, 919e6, 381)
    tau = group_delay_curve(f, fl.evaluate(m, f)[:, 1, 0])
    np.testing.assert_allclose(tau[1:-1], m.group_delay(f)[1:-1], rtol=1e-6)
    assert m.group_delay(880e6) == pytest.approx(15e-9)
    assert m.group_delay(920e6) == pytest.approx(23e-9)


def test_parametric_skirt():
    m = fl.Parametric(900e6, 40e6, edge_hz=10e6)
    assert abs(fl.evaluate(m, 925e6)[1, 0]) == pytest.approx(0.5)
    assert fl.evaluate(m, 931e6)[1, 0] == 0


def test_evaluate_rejects_nonpositive():
    with pytest.raises(ValueError):
        fl.evaluate(fl.BrickWall(900e6, 40e6, 0), [0.0])


def tabulated_net():
    f = np.array([880e6, 900e6, 920e6])
    s = np.zeros((3, 2, 2), complex)
    s[:, 1, 0] = s[:, 0, 1] = [0.5, 1j, -0.5]
    return NetworkData(f, s)


def test_interpolate_and_policies():
    net = tabulated_net()
    s = fl.interpolate(net, 890e6)
    assert s[1, 0] == pytest.approx(0.25 + 0.5j)
    with pytest.raises(RangeError):
        fl.interpolate(net, 870e6, "strict")
    np.testing.assert_array_equal(fl.interpolate(net, 870e6, "reflective"), np.eye(2))
    tab = fl.Tabulated(net)
    assert tab.band == (880e6, 920e6)
    assert tab.transmission(900e6) == 1j


def test_tabulated_warns_non_reciprocal():
    net = tabulated_net()
    s = net.smatrix.copy()
    s[:, 0, 1] = 0
    with pytest.warns(UserWarning, match="reciprocal"):
        fl.Tabulated(NetworkData(net.freqs_hz, s))


def test_s_y_roundtrip_and_singular():
    s = np.array([[0.1, 0.5j], [0.5j, 0.2]])
    np.testing.assert_allclose(fl.y_to_s(fl.s_to_y(s)), s, atol=1e-14)
    thru = np.array([[0, 1], [1, 0]], complex)
    with pytest.raises(SingularError):
        fl.s_to_y(thru)
