import json
import math

import numpy as np
import pytest

import zpole


def test_theta_at_origin():
    value = zpole.theta(np.array([0j]), np.array([[1j]]))
    assert abs(value - math.pi ** 0.25 / math.gamma(0.75)) < 1e-12


def test_genus0_single_pair():
    problem = {"rank": 1, "zeros": [{"point": [2, 0], "x": [[1, 0]]}],
               "poles": [{"point": [3, 0], "u": [[1, 0]]}]}
    t, gamma = zpole.solve_genus0(json.dumps(problem))
    assert abs(t(10)[0, 0] - 8 / 7) < 1e-14
    assert abs(t.inverse(10)[0, 0] - 7 / 8) < 1e-14
    assert gamma.shape == (1, 1)


def test_sylvester_by_hand():
    c = zpole.sylvester_coefficients([0, 1], [2, 3])
    assert np.allclose(c, [-2, 6], atol=1e-13)


def test_fay_identity():
    assert zpole.fay_residual(0.3 + 0.8j, 0.1 + 0.2j, 0.4 + 0.1j, 0.7 + 0.5j, 0.2 + 0.6j, 0.9 + 0.3j) < 1e-10


def test_scalar_forms_agree():
    prod, pf = zpole.scalar_line_map(1j, [0.2 + 0.3j], [0.6 + 0.1j], 0.23, 0.61, 0.4 + 0.7j)
    for p in (0.1 + 0.1j, 0.8 + 0.45j):
        assert abs(prod(p) - pf(p)) < 1e-10 * abs(prod(p))


def test_errors_are_value_errors():
    with pytest.raises(ValueError, match="SingularGamma"):
        zpole.solve_genus0(json.dumps({
            "rank": 2,
            "zeros": [{"point": 0, "x": [1, 0]}, {"point": 1, "x": [1, 0]}],
            "poles": [{"point": 2, "u": [0, 1]}, {"point": 3, "u": [0, 1]}],
        }))


def test_negative_controls_criterion():
    report = zpole.run_criterion(9)
    assert report["pass"], report
