import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hedge_worstcase import (
    ContractError,
    GameParams,
    Pattern,
    PenaltyPlan,
    WeightVector,
    equal_weights_loss,
    equal_weights_plan,
    equal_weights_x_star,
    greedy_binary_plan,
    ideal_rotation,
    maximize_1d,
    optimal_plan,
    play_game,
    rotating_plan,
    transition_phase_length,
)


def loss(w, plan, p):
    return play_game(WeightVector.two(w) if np.ndim(w) == 0 else w, plan, p).cumulative_loss


def test_greedy_examples():
    p = GameParams(0.8, 2, 3)
    assert greedy_binary_plan(WeightVector.two(0.9), p).first_option.tolist() == [1, 1, 1]
    assert greedy_binary_plan(WeightVector.two(0.9), p).pattern is Pattern.GREEDY_ALL_ONES
    p = GameParams(0.8, 2, 4)
    assert greedy_binary_plan(WeightVector.two(0.5), p).first_option.tolist() == [1, 0, 1, 0]
    p = GameParams(0.8, 2, 10)
    g = greedy_binary_plan(WeightVector.two(0.62), p)
    assert g.first_option.tolist() == [1, 1, 1, 0, 1, 0, 1, 0, 1, 0]
    assert loss(0.62, g, p) == pytest.approx(5.40886, abs=5e-5)


def test_greedy_all_ones_rows_hit_argmax_arm():
    p = GameParams(0.7, 3, 6)
    w0 = WeightVector([0.9, 0.06, 0.04])
    plan = greedy_binary_plan(w0, p)
    trace = play_game(w0, plan, p)
    for t in range(p.horizon):
        assert np.argmax(trace.weights[t]) == np.argmax(plan.rows[t])
        assert set(plan.rows[t].tolist()) <= {0.0, 1.0}


def test_greedy_dominates_binary_plans():
    rng = np.random.default_rng(5)
    for _ in range(50):
        w, beta, T = rng.uniform(0.01, 0.99), rng.uniform(0.05, 0.95), int(rng.integers(1, 5))
        p = GameParams(beta, 2, T)
        g = loss(w, greedy_binary_plan(WeightVector.two(w), p), p)
        best = max(loss(w, PenaltyPlan.from_first_option(bits), p) for bits in itertools.product([0, 1], repeat=T))
        assert g >= best


def test_transition_phase_length_examples():
    assert transition_phase_length(0.51, GameParams(0.1, 2, 10)) == 0
    assert transition_phase_length(0.62, GameParams(0.8, 2, 10)) == 1
    # floor form: the whole game only once w is a little above 0.92
    assert transition_phase_length(0.921, GameParams(0.8, 2, 10)) == 10
    assert transition_phase_length(0.92, GameParams(0.8, 2, 10)) == 9
    with pytest.raises(ContractError):
        transition_phase_length(0.4, GameParams(0.8, 2, 10))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.501, 0.999), st.floats(0.05, 0.95), st.integers(1, 30))
def test_transition_phase_stays_outside_intersection(w, beta, T):
    p = GameParams(beta, 2, T)
    t1 = transition_phase_length(w, p)
    trace = play_game(WeightVector.two(w), greedy_binary_plan(WeightVector.two(w), p), p)
    upper = 1 / (1 + beta)
    assert np.all(trace.weights[:t1, 0] > upper - 1e-12)


def test_rotating_plan_examples():
    rows = rotating_plan(GameParams(0.5, 3, 3), [1, 0, 0]).rows
    assert np.array_equal(rows, np.eye(3))
    rows = rotating_plan(GameParams(0.5, 2, 4), [1, 0]).rows
    assert rows[:, 0].tolist() == [1, 0, 1, 0]
    rows = rotating_plan(GameParams(0.5, 4, 5), np.full(4, 0.25)).rows
    assert np.all(rows == 0.25)


def test_ideal_rotation():
    spec = ideal_rotation(GameParams(0.8))
    assert spec.ideal_weights == pytest.approx([0.5279, 0.4721], abs=1e-4)
    assert spec.per_cycle_loss / 2 == pytest.approx(0.527864, abs=1e-6)
    for beta in (0.1, 0.5, 0.9):
        s = ideal_rotation(GameParams(beta))
        assert abs(s.per_cycle_loss - 2 / (1 + math.sqrt(beta))) <= 1e-12
        assert np.allclose(s.ideal_weights, [1 / (1 + math.sqrt(beta)), math.sqrt(beta) / (1 + math.sqrt(beta))])
    near_one = ideal_rotation(GameParams(0.999999, 5))
    assert np.allclose(near_one.ideal_weights, 0.2, atol=1e-4)
    assert near_one.per_cycle_loss == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("beta", [0.05, 0.3, 0.7, 0.95])
def test_ideal_rotation_general(n, beta):
    s = ideal_rotation(GameParams(beta, n))
    assert abs(s.ideal_weights.sum() - 1) <= 1e-12
    assert abs(s.per_cycle_loss - n * (1 - beta ** (1 / n)) / (1 - beta)) <= 1e-12
    assert s.cycle_length == n
    # playing one rotation from the ideal weights returns to them and costs per_cycle_loss
    p = GameParams(beta, n, n)
    base = np.zeros(n)
    base[0] = 1
    trace = play_game(s.ideal_weights, rotating_plan(p, base), p)
    assert abs(trace.cumulative_loss - s.per_cycle_loss) <= 1e-12


@pytest.mark.parametrize("T", range(3, 22, 2))
@pytest.mark.parametrize("beta", [0.1, 0.5, 0.8])
def test_equal_weights_odd(T, beta):
    p = GameParams(beta, 2, T)
    plan = equal_weights_plan(p)
    assert plan.adjustment == 0.75
    expected = 0.5 + (T - 1) / (1 + math.sqrt(beta))
    assert abs(loss(0.5, plan, p) - expected) <= 1e-12
    assert abs(plan.loss - loss(0.5, plan, p)) <= 1e-10


def test_equal_weights_two_rounds():
    for beta in (0.1, 0.5, 0.8):
        p = GameParams(beta, 2, 2)
        plan = equal_weights_plan(p)
        assert abs(loss(0.5, plan, p) - (0.5 + 1 / (1 + beta))) <= 1e-12


@pytest.mark.parametrize("beta", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_equal_weights_even_matches_numeric(beta):
    for T in range(4, 120, 2):
        p = GameParams(beta, 2, T)
        res = maximize_1d(lambda x: equal_weights_loss(x, p), 0.0, 1.0, vectorized=True)
        x = equal_weights_x_star(p)
        assert abs(x - res.argmax) <= 1e-6
        plan = equal_weights_plan(p)
        assert abs(plan.loss - res.max_value) <= 1e-8
        assert abs(plan.loss - loss(0.5, plan, p)) <= 1e-10


def test_equal_weights_threshold_at_point_six():
    xs = {T: equal_weights_x_star(GameParams(0.6, 2, T)) for T in range(2, 80, 2)}
    assert all(xs[T] == 1.0 for T in xs if T <= 32)
    assert all(xs[T] < 1.0 for T in xs if T >= 34)
    assert abs(xs[78] - 0.75) < abs(xs[34] - 0.75)


def test_equal_weights_requires_two_options():
    with pytest.raises(ContractError):
        equal_weights_plan(GameParams(0.5, 3, 4))


def test_optimal_plan_examples():
    p = GameParams(0.8, 2, 10)
    plan = optimal_plan(WeightVector.two(0.883), p)
    assert plan.pattern is Pattern.ADJUSTED_FIRST_ROUND
    assert plan.first_option[0] == pytest.approx(0.7968, abs=1e-3)
    assert plan.loss == pytest.approx(7.1731, abs=1e-3)
    plan = optimal_plan(WeightVector.two(0.62), p)
    assert plan.first_option.tolist() == [1, 1, 1, 0, 1, 0, 1, 0, 1, 0]
    assert plan.loss == pytest.approx(5.40886, abs=5e-5)
    plan = optimal_plan(WeightVector.two(0.62), GameParams(0.8, 2, 643))
    assert plan.first_option[0] == pytest.approx(0.8583, abs=2e-3)


def test_optimal_plan_equal_weights_delegates():
    p = GameParams(0.8, 2, 7)
    assert optimal_plan(WeightVector.two(0.5), p).pattern is Pattern.EQUAL_WEIGHTS_CLOSED_FORM


def test_optimal_plan_two_options_only():
    with pytest.raises(ContractError):
        optimal_plan(WeightVector.uniform(3), GameParams(0.5, 3, 4))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.05, 0.95), st.integers(1, 25))
def test_optimal_never_below_greedy_and_mirrors(w, beta, T):
    p = GameParams(beta, 2, T)
    plan = optimal_plan(WeightVector.two(w), p)
    g = loss(w, greedy_binary_plan(WeightVector.two(w), p), p)
    assert plan.loss >= g - 1e-12
    assert abs(plan.loss - loss(w, plan, p)) <= 1e-12
    mirror = optimal_plan(WeightVector.two(1 - w), p)
    assert abs(mirror.loss - plan.loss) <= 1e-10
    if w != 0.5:
        assert np.allclose(mirror.rows, plan.rows[:, ::-1])


def test_example_four_adjusted_variants():
    p = GameParams(0.8, 2, 10)
    a = loss(0.62, PenaltyPlan.from_first_option([0.8469, 1, 1, 0, 1, 0, 1, 0, 1, 0]), p)
    b = loss(0.62, PenaltyPlan.from_first_option([1, 1, 0.8469, 0, 1, 0, 1, 0, 1, 0]), p)
    assert a == pytest.approx(5.38908, abs=5e-5)
    assert b == pytest.approx(5.38876, abs=5e-5)
    # first-round sacrifice of the rotational adjustment
    assert 0.62 * 0.8469 + 0.38 * 0.1531 == pytest.approx(0.5833, abs=1e-4)


def test_plan_validation():
    with pytest.raises(ContractError):
        PenaltyPlan(np.zeros((0, 2)))
    with pytest.raises(ContractError):
        PenaltyPlan([[0.6, 0.6]])
    plan = PenaltyPlan.from_first_option([0.2, 0.7])
    assert plan.horizon == 2 and np.allclose(plan.mirrored().first_option, [0.8, 0.3])
