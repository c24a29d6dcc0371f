import numpy as np
import pytest

from survlab.basis import DEFAULT_TIME_KNOTS, BasisSet, KnotGrid
from survlab.errors import ConfigurationError, DomainError, UsageError


def test_knot_grid_validation():
    with pytest.raises(ConfigurationError):
        KnotGrid((0.0,))
    with pytest.raises(ConfigurationError):
        KnotGrid((0.0, 2.0, 2.0))
    with pytest.raises(ConfigurationError):
        KnotGrid((-1.0, 2.0))
    assert KnotGrid.regular(0.0, 10.0, 2.0).knots == DEFAULT_TIME_KNOTS


def test_sizes():
    assert BasisSet.from_knots([0, 2, 4], "piecewise_constant").size == 2
    assert BasisSet.from_knots([0, 2, 4], "piecewise_linear").size == 3
    assert BasisSet.constant(10.0).size == 1


def test_unknown_kind():
    with pytest.raises(ConfigurationError):
        BasisSet.from_knots([0, 1], "cubic")


def test_evaluate_examples():
    pc = BasisSet.from_knots([0, 2, 4], "piecewise_constant")
    np.testing.assert_array_equal(pc.evaluate(3.0), [0.0, 1.0])

    pl = BasisSet.from_knots([0, 2, 4], "piecewise_linear")
    np.testing.assert_allclose(pl.evaluate(3.0), [0.0, 0.5, 0.5])
    np.testing.assert_array_equal(pl.evaluate(2.0), [0.0, 1.0, 0.0])
    np.testing.assert_array_equal(pl.evaluate(4.0), [0.0, 0.0, 1.0])


def test_past_last_knot_only_last_function_is_active():
    for kind in ("piecewise_constant", "piecewise_linear"):
        nu = BasisSet.from_knots([0, 2, 4], kind).evaluate([5.0, 40.0])
        assert np.all(nu[:, -1] == 1.0)
        assert np.all(nu[:, :-1] == 0.0)


def test_partition_of_unity_and_nonnegative():
    t = np.linspace(0.0, 14.0, 281)
    for kind in ("piecewise_constant", "piecewise_linear"):
        nu = BasisSet.from_knots(DEFAULT_TIME_KNOTS, kind).evaluate(t)
        assert np.all(nu >= 0.0)
        np.testing.assert_allclose(nu.sum(axis=1), 1.0, atol=1e-12)


def test_integrate_examples():
    pc = BasisSet.from_knots([0, 2, 4], "piecewise_constant")
    np.testing.assert_allclose(pc.integrate(3.0), [2.0, 1.0])
    pl = BasisSet.from_knots([0, 2], "piecewise_linear")
    np.testing.assert_allclose(pl.integrate(2.0), [1.0, 1.0])
    for basis in (pc, pl):
        assert np.all(basis.integrate(0.0) == 0.0)


def test_integral_matches_quadrature_of_evaluate():
    basis = BasisSet.from_knots([0.0, 0.5, 2.0, 3.0], "piecewise_linear")
    grid = np.linspace(0.0, 4.5, 45_001)
    nu = basis.evaluate(grid)
    running = np.concatenate(
        [np.zeros((1, basis.size)), np.cumsum((nu[1:] + nu[:-1]) / 2 * np.diff(grid)[:, None], axis=0)]
    )
    np.testing.assert_allclose(basis.integrate(grid[::500]), running[::500], atol=1e-6)


def test_negative_time_is_usage_error():
    basis = BasisSet.from_knots([0, 2, 4])
    with pytest.raises(UsageError):
        basis.evaluate(-0.1)
    with pytest.raises(UsageError):
        basis.integrate([1.0, -1.0])


def test_inverse_examples():
    pc = BasisSet.from_knots([0, 2, 4], "piecewise_constant")
    assert pc.inverse_weighted_integral([1.0, 1.0], 3.0) == pytest.approx(3.0)
    assert pc.inverse_weighted_integral([2.0, 0.5], 4.5) == pytest.approx(3.0)
    assert pc.inverse_weighted_integral([2.0, 0.5], 0.0) == 0.0


def test_inverse_unreachable_reports_supremum():
    pc = BasisSet.from_knots([0, 2, 4], "piecewise_constant")
    with pytest.raises(DomainError) as info:
        pc.inverse_weighted_integral([1.0, 0.0], 5.0)
    assert info.value.supremum == pytest.approx(2.0)


@pytest.mark.parametrize("kind", ["piecewise_constant", "piecewise_linear"])
def test_inverse_round_trip(kind):
    rng = np.random.default_rng(4)
    basis = BasisSet.from_knots([0.0, 0.01, 0.03, 0.06, 0.1, 0.2], kind)
    weights = rng.uniform(0.2, 30.0, size=(200, basis.size))
    targets = rng.uniform(0.0, 8.0, size=200)
    u = basis.inverse_weighted_integral_batch(weights, targets)
    back = np.einsum("nk,nk->n", weights, basis.integrate(u))
    np.testing.assert_allclose(back, targets, rtol=1e-9, atol=1e-12)


def test_slope_of_linear_hats():
    pl = BasisSet.from_knots([0, 2, 4], "piecewise_linear")
    np.testing.assert_allclose(pl.slope(1.0), [-0.5, 0.5, 0.0])
    # right derivative at an inner knot
    np.testing.assert_allclose(pl.slope(2.0), [0.0, -0.5, 0.5])
    assert np.all(pl.slope(5.0) == 0.0)
    assert np.all(BasisSet.from_knots([0, 2, 4], "piecewise_constant").slope(1.0) == 0.0)


def test_dict_round_trip():
    basis = BasisSet.from_knots([0.0, 0.1, 0.7], "piecewise_constant")
    assert BasisSet.from_dict(basis.to_dict()) == basis
