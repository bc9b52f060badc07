import math

import numpy as np
import pytest

from bisepbell.errors import BadLabel, InfeasibleFloor
from bisepbell.observables import PartySettings, Scenario, random_scenario
from bisepbell.optimize import (
    ALL,
    BISEPARABLE,
    FULLY_SEPARABLE,
    Objective,
    OptimizerConfig,
    StateClass,
    constrained_tradeoff,
    evaluate,
    golden_max,
    maximize,
    seesaw_step,
)
from bisepbell.oracles import CHSH_OPTIMAL

SQRT2 = math.sqrt(2)
FAST = OptimizerConfig(restarts=5, seed=0)

# largest value each (objective, class, loo) may reach
BOUNDS = {
    ("single", "all", False): SQRT2,
    ("single", "separable", False): 1.0,
    ("single", "all", True): math.sqrt(1.5),
    ("single", "separable", True): math.sqrt(0.75),
    ("pair_sq", "all", False): 2.5,
    ("pair_sq", "all", True): 2.0,
    ("triple_sq", "all", False): 3.0,
    ("triple_sq", "all", True): 3.0,
}


def test_state_class_parse():
    assert StateClass.parse("all") == ALL
    assert StateClass.parse("separable") == FULLY_SEPARABLE
    assert StateClass.parse("bisep:2") == BISEPARABLE(2)
    assert str(BISEPARABLE(3)) == "bisep:3"
    for bad in ("bisep", "bisep:4", "bisep:x", "entangled"):
        with pytest.raises(BadLabel):
            StateClass.parse(bad)
    assert BISEPARABLE(1).blocks() == [(1, 2), (0,)]


def test_objective_indices_mod3():
    assert Objective("pair_sq", 3).indices == (2, 0)
    assert Objective("pair_sq", 3).value(np.array([1.0, 5.0, 2.0])) == 5.0
    with pytest.raises(BadLabel):
        Objective("pair_sq", 0)
    with pytest.raises(BadLabel):
        Objective("linear", 1)


def test_golden_max():
    t, v = golden_max(lambda x: -(x - 0.3) ** 2, -1, 2)
    assert abs(t - 0.3) < 1e-8 and abs(v) < 1e-15


@pytest.mark.parametrize("i", [1, 2, 3])
def test_single_all(i):
    r = maximize(Objective("single", i), ALL, config=FAST)
    assert abs(r.value - SQRT2) <= 1e-4
    assert r.converged


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 3), (3, 3)])
def test_single_bisep(i, j):
    r = maximize(Objective("single", i), BISEPARABLE(j), config=OptimizerConfig(restarts=10))
    assert abs(r.value - (SQRT2 if i == j else 1.0)) <= 1e-4


def test_single_separable():
    r = maximize(Objective("single", 2), FULLY_SEPARABLE, config=FAST)
    assert abs(r.value - 1) <= 1e-4


def test_single_loo():
    assert abs(maximize(Objective("single", 1), ALL, True, FAST).value - math.sqrt(1.5)) <= 1e-4
    assert abs(maximize(Objective("single", 1), FULLY_SEPARABLE, True, FAST).value - math.sqrt(0.75)) <= 1e-4


def test_bisep_restart_fraction():
    r = maximize(Objective("single", 3), BISEPARABLE(3), config=OptimizerConfig(restarts=50))
    assert r.fraction_within(SQRT2, 1e-6) >= 0.9
    assert r.iterations <= 500


@pytest.mark.parametrize("loo,expected", [(False, 2.5), (True, 2.0)])
def test_pair_sq_maximum(loo, expected):
    r = maximize(Objective("pair_sq", 1), ALL, loo, OptimizerConfig(restarts=10))
    assert abs(r.value - expected) <= 1e-3, r.value


def test_triple_sq_maximum():
    r = maximize(Objective("triple_sq"), ALL, False, OptimizerConfig(restarts=10))
    assert abs(r.value - 3.0) <= 1e-3, r.value


def test_fixed_point():
    # Bell pair on qubits 1,2 with qubit 3 in |0>, D^(3) at the optimal settings
    from bisepbell.bellops import chsh_matrix

    w, v = np.linalg.eigh(chsh_matrix(*CHSH_OPTIMAL))
    parts = [((0, 1), v[:, -1]), ((2,), np.array([1.0, 0.0]))]
    sc = Scenario(CHSH_OPTIMAL + (PartySettings(0.0, 0.0),))
    obj = Objective("single", 3)
    before = evaluate(parts, sc, obj)
    _, _, after = seesaw_step(parts, sc, obj)
    assert abs(before - SQRT2) < 1e-12
    assert abs(after - before) <= 1e-12


def test_result_contents():
    r = maximize(Objective("single", 1), FULLY_SEPARABLE, config=FAST)
    assert r.restarts_used == 5 and len(r.restart_values) == 5
    assert r.state.n_qubits == 3 and r.state.is_pure
    assert r.history[-1] == r.value


def test_budget_exhausted_flag():
    r = maximize(Objective("single", 1), ALL, config=OptimizerConfig(restarts=1, max_iter=1, tol=0.0))
    assert not r.converged and r.iterations == 1


def test_tradeoff_floor_zero():
    v = constrained_tradeoff(1, 0.0, budget=OptimizerConfig(restarts=3))
    assert abs(v - SQRT2) <= 1e-4
    v = constrained_tradeoff(2, 0.0, loo=True, budget=OptimizerConfig(restarts=3))
    assert abs(v - math.sqrt(1.5)) <= 1e-4


def test_tradeoff_infeasible():
    with pytest.raises(InfeasibleFloor):
        constrained_tradeoff(1, 1.6, budget=OptimizerConfig(restarts=2, max_iter=20))


def test_workers_same_result():
    a = maximize(Objective("single", 2), BISEPARABLE(1), config=OptimizerConfig(restarts=6, seed=3))
    b = maximize(Objective("single", 2), BISEPARABLE(1), config=OptimizerConfig(restarts=6, seed=3, workers=3))
    assert a.value == b.value and a.restart_values == b.restart_values


@pytest.mark.property
@pytest.mark.parametrize("key", sorted(BOUNDS), ids=lambda k: f"{k[0]}-{k[1]}-{'loo' if k[2] else 'gen'}")
def test_never_exceeds_bound(key):
    kind, cls, loo = key
    obj = Objective(kind, None if kind == "triple_sq" else 1)
    r = maximize(obj, StateClass.parse(cls), loo, OptimizerConfig(restarts=8, seed=1))
    assert r.value <= BOUNDS[key] + 1e-9, r.value


@pytest.mark.property
def test_reevaluation_matches():
    rng = np.random.default_rng(0)
    classes = [ALL, FULLY_SEPARABLE, BISEPARABLE(1), BISEPARABLE(2), BISEPARABLE(3)]
    kinds = ["single", "pair_sq", "triple_sq"]
    for k in range(30):
        kind = kinds[k % 3]
        obj = Objective(kind, None if kind == "triple_sq" else int(rng.integers(1, 4)))
        r = maximize(obj, classes[k % 5], bool(k % 2), OptimizerConfig(restarts=1, seed=k, max_iter=30))
        assert abs(r.reevaluate() - r.value) <= 1e-10


@pytest.mark.property
def test_seesaw_monotone_1000():
    rng = np.random.default_rng(1)
    classes = [ALL, FULLY_SEPARABLE, BISEPARABLE(1), BISEPARABLE(2), BISEPARABLE(3)]
    kinds = ["single", "pair_sq", "triple_sq", "tradeoff"]
    for k in range(1000):
        kind = kinds[k % 4]
        obj = Objective(kind, None if kind == "triple_sq" else k % 3 + 1, floor=1.2, mu=100.0)
        loo = bool(k % 2)
        sc_class = classes[k % 5] if kind != "tradeoff" else ALL
        parts = sc_class.random_parts(rng)
        sc = random_scenario(3, rng, loo)
        v0 = evaluate(parts, sc, obj)
        parts, sc, v1 = seesaw_step(parts, sc, obj, grid=16)
        assert v1 >= v0 - 1e-12
        assert abs(evaluate(parts, sc, obj) - v1) <= 1e-10


@pytest.mark.property
def test_history_monotone():
    for cls in (ALL, FULLY_SEPARABLE, BISEPARABLE(2)):
        r = maximize(Objective("pair_sq", 2), cls, config=OptimizerConfig(restarts=3, seed=4))
        assert np.all(np.diff(r.history) >= -1e-12)


@pytest.mark.property
def test_restart_determinism():
    cfg = OptimizerConfig(restarts=4, seed=11)
    for obj, cls, loo in ((Objective("single", 1), BISEPARABLE(2), False), (Objective("pair_sq", 3), ALL, True)):
        a, b = maximize(obj, cls, loo, cfg), maximize(obj, cls, loo, cfg)
        assert a.value == b.value and a.restart_values == b.restart_values
        assert np.array_equal(a.state.vector, b.state.vector)
        assert a.scenario == b.scenario


def _raw_d(angles, i):
    """D^(i) written out term by term from its definition, independent of the package builders."""
    z = np.array([[1, 0], [0, -1]])
    x = np.array([[0, 1], [1, 0]])
    obs = [[np.cos(t) * z + np.sin(t) * x for t in pair] for pair in angles]
    p, q = [k for k in range(3) if k != i - 1]
    a, ap = obs[i - 1]
    terms = []
    for (u, v, c) in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)):
        ops = [None] * 3
        ops[p], ops[q], ops[i - 1] = obs[p][u], obs[q][v], (a + ap) / 2
        terms.append(0.5 * c * np.kron(np.kron(ops[0], ops[1]), ops[2]))
    ops = [np.eye(2)] * 3
    ops[i - 1] = (a - ap) / 2
    terms.append(np.kron(np.kron(ops[0], ops[1]), ops[2]))
    return sum(terms)


@pytest.mark.parametrize("loo", [False, True])
def test_pair_optimum_reproduced_independently(loo):
    r = maximize(Objective("pair_sq", 1), ALL, loo, OptimizerConfig(restarts=4))
    ang = [(p.theta, p.theta_prime) for p in r.scenario.parties]
    v = r.state.vector
    d = [np.vdot(v, _raw_d(ang, i) @ v).real for i in (1, 2)]
    assert abs(d[0] ** 2 + d[1] ** 2 - r.value) <= 1e-10
    assert r.value > (2.7 if loo else 3.1)
