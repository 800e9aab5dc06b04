import math

import numpy as np
import pytest
from scipy import integrate, special

from klsrotor.criterion import (brillouin_grid, finite_mode_sum, integral_Id, lro_verdict,
                                midpoint_mean)
from klsrotor.errors import ConvergenceError, UsageError
from klsrotor.rotor import build_lattice


def bessel_oracle(d):
    """``E^{-1/2} = pi^{-1/2} int_0^inf t^{-1/2} e^{-tE} dt`` turns I_d into a 1-D integral."""
    f = lambda t: t ** -0.5 * special.ive(0, t) ** d
    head, _ = integrate.quad(f, 0, 1, limit=200)
    tail, _ = integrate.quad(f, 1, np.inf, limit=400)
    return (head + tail) / math.sqrt(math.pi)


@pytest.mark.parametrize("d", [2, 3])
def test_integral_against_bessel_oracle(d):
    ref = bessel_oracle(d)
    r = integral_Id(d, 1e-7)
    assert not r.diverged
    assert abs(r.value - ref) < 1e-6
    # trace is Cauchy: successive raw values approach each other
    diffs = np.abs(np.diff([v for _, v in r.refinementTrace]))
    assert np.all(diffs[1:] < diffs[:-1])


def test_d1_diverges():
    r = integral_Id(1, 1e-6)
    assert r.diverged and math.isinf(r.value)


def test_midpoint_mean_small_grid_by_hand():
    # n = 1: single node at pi/2 where E = d
    assert midpoint_mean(2, 1) == pytest.approx(2 ** -0.5)
    assert midpoint_mean(3, 1) == pytest.approx(3 ** -0.5)


def test_bad_arguments():
    with pytest.raises(UsageError):
        integral_Id(0)
    with pytest.raises(UsageError):
        integral_Id(2, 0.0)
    with pytest.raises(ConvergenceError) as e:
        integral_Id(2, 1e-15, max_cells=64)
    assert e.value.achieved == pytest.approx(0.909173, abs=1e-3)
    with pytest.raises(UsageError):
        lro_verdict(0.0, 1.0, 2)


def test_finite_mode_sum_enumeration():
    # modes (0,pi), (pi,0), (pi,pi) with E = 2, 2, 4 over |Lambda| = 4
    assert finite_mode_sum(2, 1) == pytest.approx((2 * 2 ** -0.5 + 0.5) / 4, abs=1e-15)
    for d, N in [(1, 3), (2, 2)]:
        lat = build_lattice(d, N)
        assert np.allclose(brillouin_grid(d, N), lat.momenta)


def test_finite_mode_sum_trend():
    i2 = integral_Id(2, 1e-7).value
    sums = [finite_mode_sum(2, N) for N in (4, 8, 16, 32)]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert abs(i2 - sums[-1]) < 0.02
    ones = [finite_mode_sum(1, N) for N in (8, 16, 32, 64)]
    steps = np.diff(ones)
    assert np.all(steps > 0.25)


def test_verdict():
    v = lro_verdict(1, 1, 2)
    assert v.holds and v.lowerBoundC == pytest.approx(0.0454, abs=1e-4)
    v = lro_verdict(0.5, 0.5, 2)
    assert not v.holds and v.lowerBoundC < 0
    v = lro_verdict(100, 100, 1)
    assert not v.holds
    fin = lro_verdict(1, 1, 2, N=4)
    assert fin.holds and fin.lowerBoundC > 0
    held = [lro_verdict(x, 1, 2).holds for x in np.linspace(0.5, 2.0, 7)]
    assert held == sorted(held)
