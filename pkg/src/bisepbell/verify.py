"""Claim-level verification suites producing JSON-serializable pass/fail reports.

Each check compares one observed number with its expected value under a
relation: ``eq`` (|obs - exp| <= tol), ``le`` (obs <= exp + tol) or ``ge``
(obs >= exp - tol).  A failing check is recorded, never raised.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bellops import batch_chsh_excluding, correlation_vector, d_squared_identity_residual
from .errors import BadLabel, InfeasibleFloor
from .geometry import classify, random_angles, sample_correlations
from .observables import Scenario, random_scenario
from .optimize import (
    ALL,
    BISEPARABLE,
    FULLY_SEPARABLE,
    Objective,
    OptimizerConfig,
    maximize,
    tradeoff_search,
)
from .oracles import CHSH_OPTIMAL, lhv_max, theorem1_construction
from .states import QuantumState, basis_state, ghz, w_state

SUITES = ("lhv", "thm1", "bisep", "sphere", "thm2", "thm3", "square-identity", "w-example", "monogamy", "tv")

SQRT2 = math.sqrt(2)
W_SETTINGS = (-0.133, 0.460)
W_LOO_THETA = 0.54
SAMPLE_TOL = 1e-9


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    restarts: int = 50  # single-objective maxima
    quad_restarts: int = 10  # quadratic objectives
    tradeoff_restarts: int = 6
    samples: int = 100_000
    tol: float = 1e-4  # optimizer agreement
    loo: bool = False  # restrict two-mode suites to their LOO checks
    workers: int = 1

    def optimizer(self, restarts: int | None = None) -> OptimizerConfig:
        return OptimizerConfig(restarts=restarts or self.restarts, seed=self.seed, workers=self.workers)


@dataclass(frozen=True)
class Check:
    claim: str
    anchor: str
    expected: float
    observed: float
    tolerance: float
    relation: str = "eq"
    note: str = ""

    @property
    def passed(self) -> bool:
        o, e, t = self.observed, self.expected, self.tolerance
        if not np.isfinite(o):
            return False
        if self.relation == "eq":
            return abs(o - e) <= t
        if self.relation == "le":
            return o <= e + t
        return o >= e - t

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    checks: tuple[Check, ...]
    config: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "overall": self.overall,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _modes(cfg: VerifyConfig) -> tuple[bool, ...]:
    return (True,) if cfg.loo else (False, True)


def _tag(loo: bool) -> str:
    return "LOO" if loo else "GEN"


# ---------------------------------------------------------------- suites


def _lhv(cfg):
    out = []
    for n in (3, 4):
        for i in range(1, n + 1):
            r = lhv_max(n, i)
            out.append(Check(f"lhv-N{n}-i{i}", "local-realist bound", 1.0, float(r.max_value), 0.0,
                             note=f"{r.n_assignments} deterministic assignments, exact arithmetic"))
    return out


def _thm1(cfg):
    out = []
    for n in (3, 4):
        for i in range(1, n + 1):
            _, _, v = theorem1_construction(n, i)
            out.append(Check(f"construction-N{n}-i{i}", "(N-1)-party entangled state reaches the N-party maximum",
                             2 ** ((n - 2) / 2), float(v), 1e-9))
    return out


def _bisep(cfg):
    oc = cfg.optimizer()
    out = []
    for i in (1, 2, 3):
        r = maximize(Objective("single", i), ALL, config=oc)
        out.append(Check(f"quantum-max-i{i}", "maximum over all states", SQRT2, r.value, cfg.tol))
        r = maximize(Objective("single", i), FULLY_SEPARABLE, config=oc)
        out.append(Check(f"separable-max-i{i}", "fully separable bound", 1.0, r.value, cfg.tol))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            exp = SQRT2 if i == j else 1.0
            r = maximize(Objective("single", i), BISEPARABLE(j), config=oc)
            out.append(Check(f"bisep-i{i}-j{j}", "biseparable table", exp, r.value, cfg.tol))
            out.append(Check(f"bisep-i{i}-j{j}-restarts", "biseparable table", 0.9,
                             r.fraction_within(exp, cfg.tol), 0.0, "ge", "fraction of restarts at the maximum"))
    return out


def _sample_max(kind: str, loo: bool, cfg) -> float:
    d = sample_correlations(cfg.samples, ALL, loo, cfg.seed)
    if kind == "triple":
        return float(np.max(np.sum(d**2, axis=1)))
    return float(max(np.max(d[:, k] ** 2 + d[:, (k + 1) % 3] ** 2) for k in range(3)))


def _sphere(cfg):
    s = QuantumState(3, vector=basis_state("000").vector)
    d = correlation_vector(s, Scenario.uniform(0.0, 0.0))
    out = [Check("sphere-product-boundary", "sphere bound for all states", 3.0, float(np.sum(np.square(d))), 1e-12)]
    for loo in _modes(cfg):
        out.append(Check(f"sphere-samples-{_tag(loo)}", "sphere bound for all states", 3.0,
                         _sample_max("triple", loo, cfg), SAMPLE_TOL, "le", f"{cfg.samples} random samples"))
        r = maximize(Objective("triple_sq"), ALL, loo, cfg.optimizer(cfg.quad_restarts))
        out.append(Check(f"sphere-optimizer-{_tag(loo)}", "sphere bound for all states", 3.0, r.value, SAMPLE_TOL,
                         "le", "best seesaw value of the sum of squares"))
    return out


def _pair_checks(loo: bool, bound: float, anchor: str, cfg):
    out = [Check(f"pair-samples-{_tag(loo)}", anchor, bound, _sample_max("pair", loo, cfg), SAMPLE_TOL, "le",
                 f"{cfg.samples} random samples, all three pairs")]
    for i in (1, 2, 3):
        r = maximize(Objective("pair_sq", i), ALL, loo, cfg.optimizer(cfg.quad_restarts))
        out.append(Check(f"pair-optimizer-{_tag(loo)}-i{i}", anchor, bound, r.value, SAMPLE_TOL, "le",
                         "best seesaw value; attainment not required"))
    return out


def _thm2(cfg):
    return _pair_checks(False, 2.5, "pairwise quadratic bound", cfg)


def _thm3(cfg):
    oc = cfg.optimizer()
    a = "orthogonal-observable bounds"
    out = []
    sep = None
    bis = None
    for i in (1, 2, 3):
        r = maximize(Objective("single", i), ALL, True, oc)
        out.append(Check(f"loo-quantum-max-i{i}", a, math.sqrt(1.5), r.value, cfg.tol))
        r = maximize(Objective("single", i), FULLY_SEPARABLE, True, oc)
        out.append(Check(f"loo-separable-max-i{i}", a, math.sqrt(0.75), r.value, cfg.tol))
        sep = r.value if i == 1 else sep
        for j in (1, 2, 3):
            exp = math.sqrt(1.5) if i == j else math.sqrt(0.75)
            r = maximize(Objective("single", i), BISEPARABLE(j), True, oc)
            out.append(Check(f"loo-bisep-i{i}-j{j}", a, exp, r.value, cfg.tol))
            if i == j == 1:
                bis = r.value
    out.append(Check("loo-ratio", a, SQRT2, bis / sep, 1e-3, note="biseparable over fully separable maximum"))
    out.extend(_pair_checks(True, 2.0, a, cfg))
    return out


def _square_identity(cfg):
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for k in range(100):
        if k % 4 == 0:
            sc = random_scenario(3, rng, loo=True)
        elif k % 4 == 1:
            sc = Scenario.from_angles([(t, t) for t in rng.uniform(0, 2 * np.pi, 3)])
        else:
            sc = random_scenario(3, rng)
        for i in (1, 2, 3):
            worst = max(worst, d_squared_identity_residual(sc, i))
    return [Check("square-identity", "operator square identity", 0.0, worst, 1e-12, "le",
                  "max over 100 scenarios: random, orthogonal, degenerate")]


def w_points() -> dict[str, np.ndarray]:
    w = w_state()
    gen = correlation_vector(w, Scenario.uniform(*W_SETTINGS))
    loo = correlation_vector(w, Scenario.orthogonal([W_LOO_THETA] * 3))
    return {"GEN": np.array(gen), "LOO": np.array(loo)}


def _w_example(cfg):
    pts = w_points()
    out = []
    for loo in _modes(cfg):
        tag = _tag(loo)
        d = pts[tag]
        exp = 0.906 if loo else 1.022
        for i in (1, 2, 3):
            out.append(Check(f"w-{tag}-i{i}", "W-state example", exp, abs(float(d[i - 1])), 1e-3))
        rep = classify(d, "LOO" if loo else "GENERAL")
        out.append(Check(f"w-{tag}-feasible", "W-state example", 1.0, float(rep.feasible), 0.0,
                         note=f"sum of squares {float(np.sum(d**2))!r}"))
        out.append(Check(f"w-{tag}-outside-cuboids", "W-state example", 1.0, float(not any(rep.in_cuboid)), 0.0))
    return out


def _monogamy(cfg):
    out = []
    ceiling = math.sqrt(0.5)
    oc = cfg.optimizer(cfg.tradeoff_restarts)
    for loo in _modes(cfg):
        tag = _tag(loo)
        floor = (math.sqrt(1.5) if loo else SQRT2) - 1e-4
        bound = 2.0 if loo else 2.5
        i = 1
        try:
            r = tradeoff_search(i, floor, loo, oc)
            d = r.correlation()
            obs, gap = r.value, float(d[i % 3] ** 2 - (bound - d[i - 1] ** 2))
        except InfeasibleFloor:
            obs, gap = math.inf, math.inf
        out.append(Check(f"monogamy-{tag}", "maximal correlation in one partition limits the next", ceiling, obs,
                         1e-2, "le", f"|<D^(2)>| with |<D^(1)>| >= {floor!r}"))
        out.append(Check(f"monogamy-{tag}-implication", "maximal correlation in one partition limits the next",
                         0.0, gap, 1e-9, "le", "d_(i+1)^2 - (bound - d_i^2) at the optimizer output"))
    return out


def _tv_construction_checks() -> list[Check]:
    # |000> with every observable sz: both CHSH values equal 1
    s = basis_state("000").vector[None, :]
    out = [Check("tv-product-boundary", "two-qubit CHSH sharing bound", 2.0,
                 float(tv_pair_sums(s, np.zeros((1, 3, 2)))[0]), 1e-12)]
    # GHZ with CHSH-optimal settings on qubits 2,3 and A = A' = sx on qubit 1
    p2, p3 = CHSH_OPTIMAL
    angles = np.array([[[np.pi / 2, np.pi / 2], [p2.theta, p2.theta_prime], [p3.theta, p3.theta_prime]]])
    g = ghz(3).vector[None, :]
    out.append(Check("tv-ghz", "two-qubit CHSH sharing bound", 2.0, float(tv_pair_sums(g, angles)[0]),
                     SAMPLE_TOL, "le"))
    return out


def tv_pair_sums(vectors: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """max_i <B^(i)>^2 + <B^(i+1)>^2 per sample, where B^(i) is CHSH on the qubits other than i."""
    b = batch_chsh_excluding(vectors, angles)
    return np.max(np.stack([b[:, k] ** 2 + b[:, (k + 1) % 3] ** 2 for k in range(3)]), axis=0)


def tv_monogamy_check(samples: int = 100_000, seed: int = 0) -> VerificationReport:
    """Sampling check of the CHSH sharing bound; a party shared by two operators uses one settings pair."""
    best = 0.0
    for c, start in enumerate(range(0, samples, 10_000)):
        n = min(10_000, samples - start)
        rng = np.random.default_rng([seed, c, 1])
        v = rng.standard_normal((n, 8)) + 1j * rng.standard_normal((n, 8))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        best = max(best, float(np.max(tv_pair_sums(v, random_angles(n, rng)))))
    checks = [Check("tv-samples", "two-qubit CHSH sharing bound", 2.0, best, SAMPLE_TOL, "le",
                    f"{samples} samples; shared party uses identical settings in both operators")]
    checks += _tv_construction_checks()
    return VerificationReport("tv", tuple(checks), {"seed": seed, "samples": samples})


def _tv(cfg):
    return list(tv_monogamy_check(cfg.samples, cfg.seed).checks)


_RUNNERS = {
    "lhv": _lhv,
    "thm1": _thm1,
    "bisep": _bisep,
    "sphere": _sphere,
    "thm2": _thm2,
    "thm3": _thm3,
    "square-identity": _square_identity,
    "w-example": _w_example,
    "monogamy": _monogamy,
    "tv": _tv,
}


def run_suite(name: str, config: VerifyConfig | None = None) -> VerificationReport:
    cfg = config or VerifyConfig()
    if name == "all":
        names = SUITES
    elif name in _RUNNERS:
        names = (name,)
    else:
        raise BadLabel(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    checks = []
    for n in names:
        checks.extend(_RUNNERS[n](cfg))
    return VerificationReport(name, tuple(checks), asdict(cfg))
