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
    build_t_standard,
    enumerate_equilibrium_targets,
    example1,
    generate,
    identity3,
    maximin_cov,
    partial_set_nonempty,
    solve_two,
    verify_nse,
)
from nsesched.two import is_efficient
from oracles import grid_maximin

slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def single_target_game():
    d = Defender(PreferenceOrder((0,)), ExplicitSchedules([[1.0]]))
    return Game(1, (d, d))


def opposite_game():
    sched = ExplicitSchedules([[1.0, 1.0]])
    return Game(2, (Defender(PreferenceOrder((0, 1)), sched), Defender(PreferenceOrder((1, 0)), sched)))


def idx(game, label):
    return game.metadata["target_labels"].index(label)


def test_partial_sets_identity():
    g = identity3()
    assert partial_set_nonempty(g, 0, 0)
    assert not partial_set_nonempty(g, 2, 0)
    # values behind the last case, frozen from the grid oracle
    assert grid_maximin(np.eye(3), [0, 1], steps=100) == pytest.approx(0.5)
    assert grid_maximin(np.eye(3), [2], steps=100) == pytest.approx(1.0)


def test_partial_sets_single_target():
    g = single_target_game()
    assert partial_set_nonempty(g, 0, 0) and partial_set_nonempty(g, 0, 1)


def test_solve_identity():
    p = solve_two(identity3())
    assert p.target == 0
    assert np.all(p.coverages == 0)


@pytest.mark.parametrize("eps,k,h", [(0.0, 1, 0.5), (1e-3, 100, 0.55)])
def test_solve_example1_ssas(eps, k, h):
    g = example1(eps, k)
    p = solve_two(g)
    assert g.label(p.target) == "11"
    expected1 = np.zeros(4)
    expected1[[idx(g, "12"), idx(g, "21")]] = h
    expected2 = np.zeros(4)
    expected2[idx(g, "22")] = 1.0
    assert np.allclose(p.coverages[0], expected1, atol=1e-7)
    assert np.allclose(p.coverages[1], expected2, atol=1e-7)
    assert verify_nse(g, p).is_nse


def test_solve_rejects_clearance_and_wrong_n():
    with pytest.raises(PreconditionError):
        solve_two(example1(1e-3, 100, "clearance"))
    d = identity3().defenders[0]
    with pytest.raises(PreconditionError):
        solve_two(Game(3, (d, d, d)))


def test_build_t_standard_identity():
    g = identity3()
    assert build_t_standard(g, 2) is None
    p = build_t_standard(g, 1)
    assert p.target == 1
    assert np.allclose(p.coverages, [[1, 0, 0], [1, 0, 0]])


def test_enumerate_identity():
    rows = {r.target: r for r in enumerate_equilibrium_targets(identity3())}
    assert rows[0].efficiency == "Efficient" and rows[0].unconstrained == (True, True)
    assert rows[1].efficiency == "Inefficient"
    assert rows[1].h1 == pytest.approx(1.0) and rows[1].h2 == pytest.approx(1.0)
    assert 2 not in rows


def test_enumerate_single_target():
    rows = enumerate_equilibrium_targets(single_target_game())
    assert [(r.target, r.efficiency) for r in rows] == [(0, "Efficient")]


def test_enumerate_opposite_preferences():
    g = opposite_game()
    rows = enumerate_equilibrium_targets(g)
    assert [(r.target, r.efficient) for r in rows] == [(0, True), (1, True)]
    V = g.defenders[0].coverage_set
    assert maximin_cov(V, [0])[0] == pytest.approx(1.0)
    assert maximin_cov(V, [0, 1])[0] == pytest.approx(1.0)


def test_enumerate_example1_includes_11():
    g = example1(0, 1)
    assert "11" in {g.label(r.target) for r in enumerate_equilibrium_targets(g)}


def test_efficient_only_filter():
    g = generate(GeneratorConfig("rgs", seed=3, targets=12, schedules=6))
    full = enumerate_equilibrium_targets(g)
    eff = enumerate_equilibrium_targets(g, efficient_only=True)
    assert eff == [r for r in full if r.efficient]


def test_preference_order_scan_is_efficient():
    for seed in range(10):
        g = generate(GeneratorConfig("rgs", seed=seed, targets=10, schedules=5))
        p = solve_two(g, order="preference")
        assert is_efficient(g, p.target)
        assert verify_nse(g, p).is_nse


def test_flow_games_supported():
    g = generate(GeneratorConfig("pln", seed=1, layers=3, width=3))
    p = solve_two(g)
    assert verify_nse(g, p).is_nse


def test_unknown_order():
    with pytest.raises(ValueError):
        solve_two(identity3(), order="random")


rgs_configs = st.builds(
    lambda seed, T, S, support: GeneratorConfig("rgs", seed=seed, targets=T, schedules=S, support=min(support, T)),
    st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 5), st.integers(1, 8),
)


@slow
@given(rgs_configs)
def test_solution_structure_and_soundness(config):
    g = generate(config)
    p = solve_two(g)
    t = p.target
    for i in (0, 1):
        covered = g.defenders[1 - i].preference.above(t)
        v = p.coverages[i]
        assert v[t] == 0
        assert all(v[j] == 0 for j in range(g.num_targets) if j not in covered)
        if covered:
            assert np.ptp(v[sorted(covered)]) == 0
    assert verify_nse(g, p).is_nse


@slow
@given(rgs_configs)
def test_every_enumerated_target_verifies(config):
    g = generate(config)
    for r in enumerate_equilibrium_targets(g):
        p = build_t_standard(g, r.target)
        assert p is not None and verify_nse(g, p).is_nse


@slow
@given(rgs_configs)
def test_one_side_closure(config):
    g = generate(config)
    T = g.num_targets
    for i in (0, 1):
        other = g.defenders[1 - i].preference
        ok = [partial_set_nonempty(g, t, i) for t in range(T)]
        for j in range(T):
            if ok[j]:
                assert all(ok[t] for t in other.above(j))


@slow
@given(rgs_configs)
def test_efficiency_closure(config):
    g = generate(config)
    targets = {r.target for r in enumerate_equilibrium_targets(g)}
    p1, p2 = g.defenders[0].preference, g.defenders[1].preference
    for t in targets:
        assert p1.above(t) & p2.above(t) <= targets
    assert any(is_efficient(g, t) for t in targets)
