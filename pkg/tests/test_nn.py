import numpy as np
import pytest

from survlab.errors import ConfigurationError, DataError, UsageError
from survlab.nn import (
    CovariateBatch,
    NetworkParams,
    NetworkSpec,
    backward,
    forward,
    init_params,
)


def _mixed_spec(**overrides) -> NetworkSpec:
    base = {
        "numeric_input_count": 2,
        "boolean_input_count": 1,
        "categorical_cardinalities": (3,),
        "embedding_width": 2,
        "embedding_dropout": 0.3,
        "hidden_widths": (4, 3),
        "hidden_dropout": 0.2,
        "output_count": 3,
    }
    base.update(overrides)
    return NetworkSpec(**base)


def _mixed_batch(n: int = 6, seed: int = 0) -> CovariateBatch:
    rng = np.random.default_rng(seed)
    return CovariateBatch.from_arrays(
        rng.normal(size=(n, 2)),
        rng.integers(0, 2, size=(n, 1)),
        # level 1 is never used
        np.resize([0, 2], n)[:, None],
    )


def _objective(params, x, cotangent, mode, seed):
    rng = np.random.default_rng(seed)
    out, _ = forward(params, x, mode=mode, rng=rng)
    return float(np.sum(out * cotangent))


def _finite_difference(params, x, cotangent, mode, seed, eps=1e-6):
    arrays = params.arrays()
    grads = []
    for i, a in enumerate(arrays):
        g = np.zeros_like(a)
        for idx in np.ndindex(a.shape):
            shifted = [b.copy() for b in arrays]
            shifted[i][idx] += eps
            up = _objective(params.with_arrays(shifted), x, cotangent, mode, seed)
            shifted[i][idx] -= 2 * eps
            down = _objective(params.with_arrays(shifted), x, cotangent, mode, seed)
            g[idx] = (up - down) / (2 * eps)
        grads.append(g)
    return grads


def test_init_biases_zero_and_deterministic():
    spec = NetworkSpec(numeric_input_count=3, hidden_widths=(2,), output_count=2)
    a = init_params(spec, seed=7)
    b = init_params(spec, seed=7)
    assert all(np.all(bias == 0.0) for bias in a.biases)
    assert a.equals(b)
    assert not a.equals(init_params(spec, seed=8))
    assert not init_params(spec, seed=1).equals(init_params(spec, seed=2))


@pytest.mark.parametrize(
    "overrides",
    [
        {"hidden_widths": (0,)},
        {"hidden_dropout": 1.0},
        {"embedding_dropout": -0.1},
        {"output_count": 0},
        {"categorical_cardinalities": (0,)},
    ],
)
def test_invalid_spec_is_configuration_error(overrides):
    with pytest.raises(ConfigurationError):
        init_params(_mixed_spec(**overrides), seed=0)


def test_zero_params_give_zero_outputs():
    spec = _mixed_spec()
    out, _ = forward(NetworkParams.zeros(spec), _mixed_batch())
    assert out.shape == (6, 3)
    assert np.all(out == 0.0)


def test_single_unit_hand_value():
    spec = NetworkSpec(numeric_input_count=1, hidden_widths=(1,), output_count=1)
    params = NetworkParams.zeros(spec)
    params.weights[0][:] = 1.0
    params.weights[1][:] = 1.0
    out, _ = forward(params, CovariateBatch.from_arrays([[1.0]]))
    assert out[0, 0] == pytest.approx(0.731059, abs=1e-6)


def test_train_mode_without_dropout_matches_eval():
    spec = _mixed_spec(embedding_dropout=0.0, hidden_dropout=0.0)
    params = init_params(spec, seed=1)
    x = _mixed_batch()
    a, _ = forward(params, x, mode="eval")
    b, _ = forward(params, x, mode="train", rng=np.random.default_rng(0))
    np.testing.assert_array_equal(a, b)


def test_eval_mode_does_not_depend_on_rng():
    params = init_params(_mixed_spec(), seed=1)
    x = _mixed_batch()
    base, _ = forward(params, x, mode="eval")
    for seed in (0, 1, 99):
        out, _ = forward(params, x, mode="eval", rng=np.random.default_rng(seed))
        np.testing.assert_array_equal(out, base)


def test_train_mode_needs_rng():
    params = init_params(_mixed_spec(), seed=1)
    with pytest.raises(UsageError):
        forward(params, _mixed_batch(), mode="train", rng=None)


def test_input_validation():
    params = init_params(_mixed_spec(), seed=1)
    bad_level = CovariateBatch.from_arrays([[0.0, 0.0]], [[1]], [[3]])
    with pytest.raises(DataError):
        forward(params, bad_level)
    non_finite = CovariateBatch.from_arrays([[np.nan, 0.0]], [[1]], [[0]])
    with pytest.raises(DataError):
        forward(params, non_finite)
    wrong_width = CovariateBatch.from_arrays([[0.0]], [[1]], [[0]])
    with pytest.raises(DataError):
        forward(params, wrong_width)


@pytest.mark.parametrize("mode", ["eval", "train"])
def test_backward_matches_finite_differences(mode):
    spec = _mixed_spec()
    params = init_params(spec, seed=3)
    x = _mixed_batch()
    cotangent = np.random.default_rng(5).normal(size=(len(x), spec.output_count))

    _, tape = forward(params, x, mode=mode, rng=np.random.default_rng(11))
    grads = backward(tape, cotangent)
    expected = _finite_difference(params, x, cotangent, mode, seed=11)
    for got, want in zip(grads.arrays(), expected, strict=True):
        np.testing.assert_allclose(got, want, rtol=1e-4, atol=1e-7)


def test_zero_cotangent_gives_zero_gradient():
    params = init_params(_mixed_spec(), seed=3)
    x = _mixed_batch()
    _, tape = forward(params, x)
    grads = backward(tape, np.zeros((len(x), 3)))
    assert grads.global_norm() == 0.0


def test_unused_categorical_level_gets_no_gradient():
    params = init_params(_mixed_spec(), seed=3)
    x = _mixed_batch()
    _, tape = forward(params, x)
    grads = backward(tape, np.ones((len(x), 3)))
    assert np.all(grads.embeddings[0][1] == 0.0)
    assert np.any(grads.embeddings[0][0] != 0.0)


def test_cotangent_shape_mismatch():
    params = init_params(_mixed_spec(), seed=3)
    _, tape = forward(params, _mixed_batch())
    with pytest.raises(UsageError):
        backward(tape, np.zeros((2, 3)))


def test_gaussian_dropout_preserves_expectation():
    # numeric inputs only: the noise sits right before the linear head
    spec = NetworkSpec(
        numeric_input_count=2, hidden_widths=(5,), hidden_dropout=0.3, output_count=2
    )
    params = init_params(spec, seed=2)
    n = 20_000
    x = CovariateBatch.from_arrays(np.tile([[0.4, -1.2]], (n, 1)))
    reference, _ = forward(params, x.take([0]))
    draws, _ = forward(params, x, mode="train", rng=np.random.default_rng(9))
    mean = draws.mean(axis=0)
    se = draws.std(axis=0, ddof=1) / np.sqrt(n)
    assert np.all(np.abs(mean - reference[0]) <= 3 * se + 1e-12)
