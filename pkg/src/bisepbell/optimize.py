"""Seesaw maximization of D-operator objectives over settings and state classes.

One seesaw iteration does an exact state update per factor block and then a
derivative-free pass over every free angle.  Both halves only accept moves
that do not lower the objective, so the value sequence is monotone.

State blocks: the full 3-qubit vector (ALL), three single-qubit factors
(FULLY_SEPARABLE) or a pair plus the single qubit ``j`` (BISEPARABLE(j)).
A block update linearizes the objective in the expectations ``<D_k>``,
contracts the weighted operator with the other blocks and takes the top
eigenvector of the resulting small matrix.  For the single-qubit block this
is the Bloch vector aligned with the effective field.

Settings: with everything else fixed each ``<D_k>`` is exactly
``c0 + c1 cos(t) + c2 sin(t)`` in a single angle ``t``, so three evaluations
recover the profile.  The objective is then scanned on a 64-point grid and
the best cell refined by golden-section search.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .bellops import d_matrix
from .errors import BadLabel, InfeasibleFloor
from .observables import TWO_PI, PartySettings, Scenario, random_scenario
from .states import QuantumState, haar_vector, place_factors

INVPHI = (math.sqrt(5) - 1) / 2

Block = tuple[tuple[int, ...], np.ndarray]


@dataclass(frozen=True)
class StateClass:
    kind: str  # "all", "separable" or "bisep"
    j: int | None = None

    def __post_init__(self):
        if self.kind not in ("all", "separable", "bisep"):
            raise BadLabel(f"unknown state class {self.kind!r}")
        if (self.kind == "bisep") != (self.j is not None):
            raise BadLabel("a partition label is required for, and only for, the biseparable class")
        if self.j is not None and self.j not in (1, 2, 3):
            raise BadLabel(f"partition must be 1, 2 or 3, got {self.j}")

    @classmethod
    def parse(cls, text: str) -> "StateClass":
        t = text.strip().lower()
        if t in ("all", "separable"):
            return cls(t)
        if t in ("fully_separable", "sep"):
            return cls("separable")
        if t.startswith("bisep"):
            _, _, j = t.partition(":")
            try:
                return cls("bisep", int(j))
            except ValueError:
                raise BadLabel(f"bad biseparable class {text!r}, expected bisep:J") from None
        raise BadLabel(f"unknown state class {text!r}")

    def blocks(self) -> list[tuple[int, ...]]:
        if self.kind == "all":
            return [(0, 1, 2)]
        if self.kind == "separable":
            return [(0,), (1,), (2,)]
        j = self.j - 1
        return [tuple(k for k in range(3) if k != j), (j,)]

    def random_parts(self, rng: np.random.Generator) -> list[Block]:
        return [(slots, haar_vector(2 ** len(slots), rng)) for slots in self.blocks()]

    def __str__(self):
        return f"bisep:{self.j}" if self.kind == "bisep" else self.kind


ALL = StateClass("all")
FULLY_SEPARABLE = StateClass("separable")


def BISEPARABLE(j: int) -> StateClass:
    return StateClass("bisep", j)


@dataclass(frozen=True)
class Objective:
    """Function of the correlation vector ``d = (<D^(1)>, <D^(2)>, <D^(3)>)``.

    ``single``: |d_i|.  ``pair_sq``: d_i^2 + d_{i+1}^2 (indices mod 3).
    ``triple_sq``: sum of squares.  ``tradeoff``: |d_{i+1}| minus the
    quadratic penalty ``mu * max(0, floor - |d_i|)^2``.
    """

    kind: str
    i: int | None = None
    floor: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if self.kind not in ("single", "pair_sq", "triple_sq", "tradeoff"):
            raise BadLabel(f"unknown objective {self.kind!r}")
        if self.kind != "triple_sq" and self.i not in (1, 2, 3):
            raise BadLabel(f"objective {self.kind} needs i in 1..3")

    @property
    def indices(self) -> tuple[int, ...]:
        """0-based components the objective depends on."""
        if self.kind == "single":
            return (self.i - 1,)
        if self.kind == "triple_sq":
            return (0, 1, 2)
        return ((self.i - 1) % 3, self.i % 3)

    def value(self, d) -> np.ndarray | float:
        """Objective on component values ``d[k]`` (arrays broadcast)."""
        if self.kind == "single":
            return np.abs(d[self.i - 1])
        if self.kind == "triple_sq":
            return d[0] ** 2 + d[1] ** 2 + d[2] ** 2
        a, b = self.indices
        if self.kind == "pair_sq":
            return d[a] ** 2 + d[b] ** 2
        short = np.maximum(0.0, self.floor - np.abs(d[a]))
        return np.abs(d[b]) - self.mu * short**2

    def state_weights(self, d) -> list[np.ndarray]:
        """Weight vectors w; candidate states maximize <sum_k w_k D_k>."""
        w = np.zeros(3)
        if self.kind == "single":
            k = self.i - 1
            w[k] = 1.0 if d[k] >= 0 else -1.0
            return [w, -w]
        if self.kind in ("pair_sq", "triple_sq"):
            for k in self.indices:
                w[k] = 2.0 * d[k]
            if not np.any(w):
                w[list(self.indices)] = 1.0
            return [w, -w]
        a, b = self.indices
        out = []
        # Lagrangian family: the constrained optimum maximizes s_b D_b + lam s_a D_a for some lam >= 0
        for sa in (1.0, -1.0):
            for sb in (1.0, -1.0):
                for lam in (0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0):
                    v = np.zeros(3)
                    v[b] = sb
                    v[a] = lam * sa
                    out.append(v)
        return out


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 50
    seed: int = 0
    tol: float = 1e-6
    max_iter: int = 500
    grid: int = 64
    golden_tol: float = 1e-10
    workers: int = 1


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    value: float
    scenario: Scenario
    state: QuantumState
    restarts_used: int
    iterations: int
    converged: bool
    objective: Objective | None = None
    state_class: StateClass | None = None
    loo: bool = False
    restart_values: tuple[float, ...] = field(default=())
    best_restart: int = 0
    history: tuple[float, ...] = field(default=(), repr=False)

    def correlation(self) -> np.ndarray:
        return np.array([self.state.expectation(d_matrix(self.scenario, k)) for k in (1, 2, 3)])

    def reevaluate(self) -> float:
        return float(self.objective.value(self.correlation()))

    def fraction_within(self, target: float, tol: float) -> float:
        vals = np.asarray(self.restart_values)
        return float(np.mean(np.abs(vals - target) <= tol)) if vals.size else 0.0


# ---------------------------------------------------------------- helpers


def _full_vector(parts: Sequence[Block]) -> np.ndarray:
    return place_factors(parts, 3)


def _expect(vec: np.ndarray, mats: dict[int, np.ndarray]) -> np.ndarray:
    d = np.zeros(3)
    for k, m in mats.items():
        d[k] = np.real(np.vdot(vec, m @ vec))
    return d


def _matrices(scenario: Scenario, indices: Sequence[int]) -> dict[int, np.ndarray]:
    return {k: d_matrix(scenario, k + 1) for k in indices}


def _effective(op: np.ndarray, slots: tuple[int, ...], others: Sequence[Block]) -> np.ndarray:
    """Contract ``op`` with the product of the other blocks, leaving an operator on ``slots``."""
    n = 3
    if not others:
        return op
    rest = sorted(s for blk, _ in others for s in blk)
    relabel = {s: k for k, s in enumerate(rest)}
    phi = place_factors([(tuple(relabel[s] for s in blk), v) for blk, v in others], len(rest))
    order = list(slots) + rest
    t = op.reshape((2,) * (2 * n)).transpose(order + [n + o for o in order])
    ds, dc = 2 ** len(slots), 2 ** len(rest)
    t = t.reshape(ds, dc, ds, dc)
    return np.einsum("acbd,c,d->ab", t, phi.conj(), phi)


def _top_vector(m: np.ndarray) -> np.ndarray:
    _, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return v[:, -1]


def golden_max(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``f`` on [lo, hi]."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while abs(b - a) > tol and it < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
        it += 1
    return (c, fc) if fc >= fd else (d, fd)


def _coordinates(scenario: Scenario) -> list[tuple[int, int]]:
    """Free angles as (party index, 0 for theta / 1 for theta_prime)."""
    if scenario.loo:
        return [(p, 0) for p in range(scenario.n)]
    return [(p, w) for p in range(scenario.n) for w in (0, 1)]


def _set_angle(scenario: Scenario, coord: tuple[int, int], t: float) -> Scenario:
    p, which = coord
    parties = list(scenario.parties)
    old = parties[p]
    if scenario.loo:
        parties[p] = PartySettings.orthogonal(t)
    elif which == 0:
        parties[p] = PartySettings(t, old.theta_prime)
    else:
        parties[p] = PartySettings(old.theta, t)
    return Scenario(tuple(parties), loo=scenario.loo)


def _angle_of(scenario: Scenario, coord: tuple[int, int]) -> float:
    p, which = coord
    s = scenario.parties[p]
    return s.theta if which == 0 else s.theta_prime


# ---------------------------------------------------------------- seesaw


def state_update(parts: list[Block], scenario: Scenario, objective: Objective, mats=None) -> tuple[list[Block], float]:
    """Exact update of each state block in turn; never lowers the objective."""
    idx = objective.indices
    if mats is None:
        mats = _matrices(scenario, idx)
    parts = list(parts)
    d = _expect(_full_vector(parts), mats)
    value = float(objective.value(d))
    for b, (slots, _) in enumerate(parts):
        others = [p for k, p in enumerate(parts) if k != b]
        best = None
        for w in objective.state_weights(d):
            terms = [w[k] * mats[k] for k in idx if w[k] != 0.0]
            if not terms:
                continue
            op = sum(terms)
            cand = _top_vector(_effective(op, slots, others))
            trial = parts[:b] + [(slots, cand)] + parts[b + 1 :]
            dt = _expect(_full_vector(trial), mats)
            vt = float(objective.value(dt))
            if vt > value and (best is None or vt > best[0]):
                best = (vt, trial, dt)
        if best is not None:
            value, parts, d = best
    return parts, value


def settings_update(
    parts: list[Block], scenario: Scenario, objective: Objective, grid: int = 64, golden_tol: float = 1e-10
) -> tuple[Scenario, float]:
    """One pass of per-angle grid plus golden-section refinement; never lowers the objective."""
    vec = _full_vector(parts)
    idx = objective.indices
    d = _expect(vec, _matrices(scenario, idx))
    value = float(objective.value(d))
    ts = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    for coord in _coordinates(scenario):
        probes = [_expect(vec, _matrices(_set_angle(scenario, coord, t), idx)) for t in (0.0, np.pi / 2, np.pi)]
        c0 = 0.5 * (probes[0] + probes[2])
        c1 = 0.5 * (probes[0] - probes[2])
        c2 = probes[1] - c0

        def profile(t, c0=c0, c1=c1, c2=c2):
            return objective.value(c0[:, None] + c1[:, None] * np.cos(t) + c2[:, None] * np.sin(t))

        g = profile(ts)
        k = int(np.argmax(g))
        h = TWO_PI / grid
        t_best, g_best = golden_max(lambda t: float(profile(np.array([t]))[0]), ts[k] - h, ts[k] + h, golden_tol)
        if g[k] > g_best:
            t_best, g_best = ts[k], g[k]
        if g_best > value:
            scenario = _set_angle(scenario, coord, t_best)
            value = float(objective.value(_expect(vec, _matrices(scenario, idx))))
    return scenario, value


def seesaw_step(
    state_parts: list[Block], scenario: Scenario, objective: Objective, grid: int = 64, golden_tol: float = 1e-10
) -> tuple[list[Block], Scenario, float]:
    """A state update followed by a settings pass.  Returns (state_parts, scenario, value)."""
    parts, _ = state_update(state_parts, scenario, objective)
    scenario, value = settings_update(parts, scenario, objective, grid, golden_tol)
    return parts, scenario, value


def evaluate(parts: Sequence[Block], scenario: Scenario, objective: Objective) -> float:
    return float(objective.value(_expect(_full_vector(parts), _matrices(scenario, objective.indices))))


@dataclass
class _Run:
    parts: list[Block]
    scenario: Scenario
    value: float
    iterations: int
    converged: bool
    history: list[float]


def _seesaw(parts, scenario, objective, config: OptimizerConfig) -> _Run:
    value = evaluate(parts, scenario, objective)
    history = [value]
    converged = False
    it = 0
    while it < config.max_iter:
        parts, scenario, new = seesaw_step(parts, scenario, objective, config.grid, config.golden_tol)
        it += 1
        history.append(new)
        gain = new - value
        value = new
        if gain < config.tol:
            converged = True
            break
    return _Run(parts, scenario, value, it, converged, history)


def _pick_best(runs: Sequence[_Run]) -> int:
    best = 0
    for k, r in enumerate(runs):
        if r.value > runs[best].value:
            best = k
    return best


def _map(fn, items, workers: int):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _result(runs, objective, state_class, loo, config) -> OptimizationResult:
    b = _pick_best(runs)
    r = runs[b]
    vec = _full_vector(r.parts)
    return OptimizationResult(
        value=r.value,
        scenario=r.scenario,
        state=QuantumState(3, vector=vec / np.linalg.norm(vec)),
        restarts_used=len(runs),
        iterations=r.iterations,
        converged=r.converged,
        objective=objective,
        state_class=state_class,
        loo=loo,
        restart_values=tuple(x.value for x in runs),
        best_restart=b,
        history=tuple(r.history),
    )


def maximize(
    objective: Objective, state_class: StateClass = ALL, loo: bool = False, config: OptimizerConfig | None = None
) -> OptimizationResult:
    """Best value of ``objective`` found over restarts of the seesaw.

    Each restart ``r`` draws its random start from ``seed + r``; ties
    between restarts go to the lowest index.  The returned value is a lower
    bound on the true maximum over the class.
    """
    config = config or OptimizerConfig()

    def one(r: int) -> _Run:
        rng = np.random.default_rng(config.seed + r)
        return _seesaw(state_class.random_parts(rng), random_scenario(3, rng, loo), objective, config)

    runs = _map(one, range(config.restarts), config.workers)
    return _result(runs, objective, state_class, loo, config)


def tradeoff_search(
    i: int,
    floor: float,
    loo: bool = False,
    config: OptimizerConfig | None = None,
    mu0: float = 1000.0,
    rounds: int = 5,
    feas_tol: float = 1e-4,
) -> OptimizationResult:
    """Maximize |<D^(i+1)>| subject to |<D^(i)>| >= floor by a quadratic penalty.

    The multiplier starts at ``mu0`` and grows tenfold per round; each round
    warm-starts from the previous round's point.  Only restarts that end with
    ``|<D^(i)>| >= floor - feas_tol`` compete; the reported value is the
    unpenalized ``|<D^(i+1)>|`` of the best of them.
    """
    config = config or OptimizerConfig()
    a, b = (i - 1) % 3, i % 3

    def one(r: int) -> _Run:
        rng = np.random.default_rng(config.seed + r)
        parts, scenario = ALL.random_parts(rng), random_scenario(3, rng, loo)
        total = 0
        hist: list[float] = []
        run = None
        for k in range(rounds):
            obj = Objective("tradeoff", i, floor=floor, mu=mu0 * 10.0**k)
            run = _seesaw(parts, scenario, obj, config)
            parts, scenario = run.parts, run.scenario
            total += run.iterations
            hist.extend(run.history)
        run.iterations = total
        run.history = hist
        return run

    runs = _map(one, range(config.restarts), config.workers)
    scored = []
    for run in runs:
        d = _expect(_full_vector(run.parts), _matrices(run.scenario, (a, b)))
        feasible = abs(d[a]) >= floor - feas_tol
        scored.append(_Run(run.parts, run.scenario, abs(d[b]) if feasible else -np.inf, run.iterations, run.converged, run.history))
    if all(not np.isfinite(s.value) for s in scored):
        raise InfeasibleFloor(f"no restart reached |<D^({i})>| >= {floor} - {feas_tol}")
    obj = Objective("tradeoff", i, floor=floor, mu=0.0)
    res = _result(scored, obj, ALL, loo, config)
    return replace(res, objective=Objective("single", b + 1))


def constrained_tradeoff(i: int, floor: float, loo: bool = False, budget: OptimizerConfig | None = None) -> float:
    return tradeoff_search(i, floor, loo, budget).value
