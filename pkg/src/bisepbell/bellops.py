"""Bell operators: CHSH, a recursive WWZB representative, and the composite D operator.

For ``N`` parties and an excluded party ``i`` the composite operator is

    D_N^(i) = B_{N-1} (x) (A_i + A_i')/2  +  1 (x) (A_i - A_i')/2,

with ``B_{N-1}`` acting on the other parties in ascending order and the
party-``i`` factors placed at qubit ``i``.  ``B_M`` follows the prime-swap
recursion

    B_1 = A_1,   B_M = [B_{M-1} (x) (A_M + A_M') + B~_{M-1} (x) (A_M - A_M')] / 2,

where ``B~`` is ``B`` with every primed and unprimed observable exchanged.
``B_2`` is the CHSH operator normalized so its local bound is 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadDimension, BadParty, DimensionMismatch
from .linalg import I2, SX, SZ, hermiticity_error
from .observables import PartySettings, Scenario
from .states import QuantumState


@dataclass(frozen=True, eq=False)
class BellOperator:
    matrix: np.ndarray
    kind: str  # "CHSH", "WWZB_REP" or "D"
    scenario: Scenario
    excluded_party: int | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.matrix.shape[0])))

    @property
    def label(self) -> str:
        if self.kind == "D":
            return f"D({self.scenario.n},{self.excluded_party})"
        if self.kind == "WWZB_REP":
            return f"WWZB_REP({self.n_qubits})"
        return self.kind

    def expectation(self, state: QuantumState) -> float:
        return state.expectation(self.matrix)

    def hermiticity_error(self) -> float:
        return hermiticity_error(self.matrix)


def reorder_qubits(op: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Rewrite ``op`` given on the tensor ordering ``order`` (0-based qubits) in natural order."""
    n = len(order)
    if sorted(order) == list(order):
        return op
    perm = list(np.argsort(order))
    t = op.reshape((2,) * (2 * n)).transpose(perm + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


def _wwzb_pair(parties: Sequence[PartySettings]) -> tuple[np.ndarray, np.ndarray]:
    """(B_M, B~_M) for the given parties, leftmost party most significant."""
    first = parties[0]
    b, bt = first.a, first.a_prime
    for p in parties[1:]:
        s = p.a + p.a_prime
        d = p.a - p.a_prime
        b, bt = 0.5 * (np.kron(b, s) + np.kron(bt, d)), 0.5 * (np.kron(bt, s) - np.kron(b, d))
    return b, bt


def chsh_matrix(s1: PartySettings, s2: PartySettings) -> np.ndarray:
    a1, a1p, a2, a2p = s1.a, s1.a_prime, s2.a, s2.a_prime
    return 0.5 * (np.kron(a1, a2) + np.kron(a1, a2p) + np.kron(a1p, a2) - np.kron(a1p, a2p))


def chsh_operator(s1: PartySettings, s2: PartySettings) -> BellOperator:
    return BellOperator(chsh_matrix(s1, s2), "CHSH", Scenario((s1, s2), loo=s1.loo and s2.loo))


def wwzb_rep_operator(settings: Sequence[PartySettings], M: int | None = None) -> BellOperator:
    settings = tuple(settings)
    if M is None:
        M = len(settings)
    if not 1 <= M <= 3 or len(settings) != M:
        raise BadDimension(f"WWZB representative needs 1 <= M <= 3 and M settings, got M={M}")
    b, _ = _wwzb_pair(settings)
    return BellOperator(b, "WWZB_REP", Scenario(settings, loo=all(p.loo for p in settings)))


def _check_party(scenario: Scenario, i: int) -> None:
    if not 1 <= i <= scenario.n:
        raise BadParty(f"party {i} outside 1..{scenario.n}")
    if scenario.n < 2:
        raise BadDimension("needs at least two parties")


def excluded_bell_matrix(scenario: Scenario, i: int) -> np.ndarray:
    """``B_{N-1}`` on every party except ``i``, tensored with identity on qubit ``i``."""
    _check_party(scenario, i)
    others = [k for k in range(scenario.n) if k != i - 1]
    b, _ = _wwzb_pair([scenario.parties[k] for k in others])
    return reorder_qubits(np.kron(b, I2), others + [i - 1])


def d_matrix(scenario: Scenario, i: int) -> np.ndarray:
    _check_party(scenario, i)
    others = [k for k in range(scenario.n) if k != i - 1]
    b, _ = _wwzb_pair([scenario.parties[k] for k in others])
    pi = scenario.parties[i - 1]
    plus = 0.5 * (pi.a + pi.a_prime)
    minus = 0.5 * (pi.a - pi.a_prime)
    ident = np.eye(b.shape[0], dtype=complex)
    return reorder_qubits(np.kron(b, plus) + np.kron(ident, minus), others + [i - 1])


def d_operator(scenario: Scenario, i: int) -> BellOperator:
    return BellOperator(d_matrix(scenario, i), "D", scenario, excluded_party=i)


def d_matrices(scenario: Scenario) -> list[np.ndarray]:
    return [d_matrix(scenario, i) for i in range(1, scenario.n + 1)]


def d_squared_identity_residual(scenario: Scenario, i: int) -> float:
    """Max-norm gap between D^2 and B^2 (x) (1 + a.a')/2 + 1 (x) (1 - a.a')/2."""
    if scenario.n != 3:
        raise BadDimension("the square identity is stated for three parties")
    d = d_matrix(scenario, i)
    others = [k for k in range(3) if k != i - 1]
    b, _ = _wwzb_pair([scenario.parties[k] for k in others])
    dot = scenario.parties[i - 1].overlap
    rhs = np.kron(b @ b, 0.5 * (1 + dot) * I2) + np.kron(np.eye(4), 0.5 * (1 - dot) * I2)
    rhs = reorder_qubits(rhs, others + [i - 1])
    return float(np.max(np.abs(d @ d - rhs)))


class CorrelationVector(NamedTuple):
    """(<D^(1)>, <D^(2)>, <D^(3)>) as a point in the feasibility space."""

    d1: float
    d2: float
    d3: float

    def component(self, i: int) -> float:
        """1-based component, index taken mod 3."""
        return self[(i - 1) % 3]

    def pair_sq(self, i: int) -> float:
        return self.component(i) ** 2 + self.component(i + 1) ** 2

    def triple_sq(self) -> float:
        return self.d1**2 + self.d2**2 + self.d3**2

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


def expectations(state: QuantumState, matrices: Sequence[np.ndarray]) -> np.ndarray:
    if state.is_pure:
        v = state.vector
        return np.array([np.real(np.vdot(v, m @ v)) for m in matrices])
    rho_t = state.rho.T
    return np.array([np.real(np.sum(m * rho_t)) for m in matrices])


def correlation_vector(state: QuantumState, scenario: Scenario) -> CorrelationVector:
    if state.n_qubits != 3 or scenario.n != 3:
        raise DimensionMismatch("correlation vectors are defined for three qubits and three parties")
    return CorrelationVector(*map(float, expectations(state, d_matrices(scenario))))


def _batch_obs(theta: np.ndarray) -> np.ndarray:
    c = np.cos(theta)[..., None, None]
    s = np.sin(theta)[..., None, None]
    return c * SZ + s * SX


def _batch_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, da, _ = a.shape
    db = b.shape[1]
    return np.einsum("nij,nkl->nikjl", a, b).reshape(n, da * db, da * db)


def batch_d_matrices(angles: np.ndarray) -> np.ndarray:
    """D^(1..3) for a batch of three-party scenarios.

    ``angles`` has shape (n, 3, 2) holding (theta, theta') per party; the
    result has shape (3, n, 8, 8).
    """
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[0]
    a = _batch_obs(angles[:, :, 0])
    ap = _batch_obs(angles[:, :, 1])
    eye4 = np.broadcast_to(np.eye(4, dtype=complex), (n, 4, 4))
    out = np.empty((3, n, 8, 8), dtype=complex)
    for i in range(3):
        o0, o1 = [k for k in range(3) if k != i]
        b = 0.5 * (
            _batch_kron(a[:, o0], a[:, o1] + ap[:, o1]) + _batch_kron(ap[:, o0], a[:, o1] - ap[:, o1])
        )
        d = _batch_kron(b, 0.5 * (a[:, i] + ap[:, i])) + _batch_kron(eye4, 0.5 * (a[:, i] - ap[:, i]))
        order = [o0, o1, i]
        perm = list(np.argsort(order))
        t = d.reshape((n,) + (2,) * 6).transpose([0] + [1 + p for p in perm] + [4 + p for p in perm])
        out[i] = t.reshape(n, 8, 8)
    return out


def batch_correlations(vectors: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Correlation vectors, shape (n, 3), for pure states ``vectors`` (n, 8) under ``angles`` (n, 3, 2)."""
    mats = batch_d_matrices(angles)
    v = np.asarray(vectors, dtype=complex)
    return np.real(np.einsum("ni,knij,nj->nk", v.conj(), mats, v))


def batch_chsh_excluding(vectors: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """<B_2> on the two qubits other than i, for i = 1..3; shape (n, 3)."""
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[0]
    a = _batch_obs(angles[:, :, 0])
    ap = _batch_obs(angles[:, :, 1])
    eye2 = np.broadcast_to(np.eye(2, dtype=complex), (n, 2, 2))
    v = np.asarray(vectors, dtype=complex)
    out = np.empty((n, 3))
    for i in range(3):
        o0, o1 = [k for k in range(3) if k != i]
        b = 0.5 * (
            _batch_kron(a[:, o0], a[:, o1] + ap[:, o1]) + _batch_kron(ap[:, o0], a[:, o1] - ap[:, o1])
        )
        full = _batch_kron(b, eye2)
        perm = list(np.argsort([o0, o1, i]))
        t = full.reshape((n,) + (2,) * 6).transpose([0] + [1 + p for p in perm] + [4 + p for p in perm])
        m = t.reshape(n, 8, 8)
        out[:, i] = np.real(np.einsum("ni,nij,nj->n", v.conj(), m, v))
    return out
