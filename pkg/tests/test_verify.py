import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from nsesched import (
    Defender,
    ExplicitSchedules,
    Game,
    GeneratorConfig,
    PreconditionError,
    PreferenceOrder,
    StrategyProfile,
    best_response_set,
    deviation_exists,
    example1,
    generate,
    identity3,
    is_waic,
    solve_two,
    total_coverage,
    verify_nse,
)
from nsesched.two import is_efficient
from oracles import grid_deviation_margin

slow = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def split_profile(game, target="11", h=0.5):
    labels = game.metadata["target_labels"]
    v1 = np.zeros(4)
    v1[[labels.index("12"), labels.index("21")]] = h
    v2 = np.zeros(4)
    v2[labels.index("22")] = 1.0
    return StrategyProfile(np.array([v1, v2]), labels.index(target))


def test_deviation_identity_zero_profile():
    g = identity3()
    margin, cov = deviation_exists(g, StrategyProfile(np.zeros((2, 3)), 1), 0, 0)
    assert margin == pytest.approx(0.5, abs=1e-7)
    assert np.allclose(cov, [0, 0.5, 0.5], atol=1e-7)
    assert grid_deviation_margin(np.eye(3), np.zeros(3), (0, 1, 2), 0, steps=100) == pytest.approx(0.5)


def test_no_deviation_from_inefficient_identity_profile():
    g = identity3()
    p = StrategyProfile(np.array([[1.0, 0, 0], [1.0, 0, 0]]), 1)
    margin, cov = deviation_exists(g, p, 0, 0)
    assert margin <= 1e-6 and cov is None


def test_no_deviation_example1_eps():
    g = example1(1e-3, 100)
    p = split_profile(g, h=0.55)
    labels = g.metadata["target_labels"]
    margin, cov = deviation_exists(g, p, 1, labels.index("12"))
    assert cov is None


def test_infeasible_deviation_lp_means_no_deviation():
    g = identity3()
    # target 1 sits 5 below target 2 and defender 1 can add at most 1 there
    p = StrategyProfile(np.array([[0, 0, 0], [0, 5.0, 5.0]]), 2)
    margin, cov = deviation_exists(g, p, 0, 1)
    assert margin == -np.inf and cov is None


def test_deviation_requires_improving_target():
    g = identity3()
    with pytest.raises(PreconditionError):
        deviation_exists(g, StrategyProfile(np.zeros((2, 3)), 1), 0, 2)


@pytest.mark.parametrize("eps,k,h", [(0.0, 1, 0.5), (1e-3, 100, 0.55)])
def test_split_profiles_verify(eps, k, h):
    g = example1(eps, k)
    r = verify_nse(g, split_profile(g, h=h))
    assert r.is_nse and r.aic and all(r.feasible)
    bad = verify_nse(g, split_profile(g, "12", h=h))
    assert not bad.aic and not bad.is_nse


def test_identity_inefficient_profile_is_nse():
    g = identity3()
    r = verify_nse(g, StrategyProfile(np.array([[1.0, 0, 0], [1.0, 0, 0]]), 1))
    assert r.is_nse
    assert not is_efficient(g, 1)


def test_identity_zero_profile_at_worst_target_fails_ic():
    g = identity3()
    r = verify_nse(g, StrategyProfile(np.zeros((2, 3)), 2))
    assert r.aic and not r.is_nse
    assert r.per_defender_ic == (False, False)
    w = r.witnesses[0]
    assert (w.defender, w.target) == (0, 0) and w.margin >= 0.5 - 1e-7


def test_infeasible_profile_is_reported():
    g = identity3()
    r = verify_nse(g, StrategyProfile(np.array([[1.0, 1.0, 0], [0, 0, 0]]), 2))
    assert r.feasible == (False, True)
    assert not r.is_nse
    d = r.to_dict()
    assert d["feasible"] == [False, True] and d["is_nse"] is False


def test_report_serialization_one_based():
    g = identity3()
    r = verify_nse(g, StrategyProfile(np.zeros((2, 3)), 2))
    d = r.to_dict()
    assert d["witness_deviations"][0]["defender"] == 1
    assert d["witness_deviations"][0]["target"] == 1
    assert d["tolerances"]["delta_strict"] == 1e-6


def random_instance(seed, T, S):
    rng = np.random.default_rng(seed)
    sched = rng.integers(0, 4, size=(S, T)).astype(float)
    ranking = tuple(rng.permutation(T).tolist())
    others = rng.integers(0, 4, size=T).astype(float)
    return sched, ranking, others


@slow
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(1, 3))
def test_deviation_lp_matches_grid_oracle(seed, T, S):
    sched, ranking, others = random_instance(seed, T, S)
    target = ranking[-1]
    d = Defender(PreferenceOrder(ranking), ExplicitSchedules(sched))
    other = Defender(PreferenceOrder(ranking), ExplicitSchedules(np.ones((1, T)) * 10))
    g = Game(T, (d, other))
    p = StrategyProfile(np.array([np.zeros(T), others]), target)
    for t_hat in ranking[:-1]:
        margin, _ = deviation_exists(g, p, 0, t_hat)
        grid = grid_deviation_margin(sched, others, ranking, t_hat, steps=60)
        # the grid only sees some mixtures, so it can only under-estimate
        assert grid <= margin + 1e-7
        assert margin - grid <= 3 * S / 60 + 1e-7 or grid == -np.inf


@slow
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(1, 3))
def test_witness_is_literally_waic(seed, T, S):
    sched, ranking, others = random_instance(seed, T, S)
    d = Defender(PreferenceOrder(ranking), ExplicitSchedules(sched))
    g = Game(T, (d, d))
    p = StrategyProfile(np.array([np.zeros(T), others]), ranking[-1])
    for t_hat in ranking[:-1]:
        margin, cov = deviation_exists(g, p, 0, t_hat)
        if cov is None:
            continue
        moved = p.replace(0, cov, t_hat)
        tol = margin / 2
        b = best_response_set(total_coverage(moved), tol)
        assert t_hat in b
        assert is_waic(g, moved, 0, tol)


rgs_configs = st.builds(
    lambda seed, T, S: GeneratorConfig("rgs", seed=seed, targets=T, schedules=S),
    st.integers(0, 2**32 - 1), st.integers(2, 7), st.integers(1, 4),
)


@slow
@given(rgs_configs)
def test_sensitivity_to_target(config):
    g = generate(config)
    p = solve_two(g)
    b = best_response_set(total_coverage(p))
    for t in range(g.num_targets):
        if t not in b:
            assert not verify_nse(g, p.replace(target=t)).aic
