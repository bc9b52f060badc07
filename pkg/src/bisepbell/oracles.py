"""Ground-truth engines that do not share code with the operator pipeline.

``lhv_max`` works on the classical polynomial with exact rational arithmetic;
``spectral_max`` uses the package's Jacobi eigensolver rather than LAPACK,
so it stays independent of the optimizer's inner loop.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bellops import BellOperator, d_operator, wwzb_rep_operator
from .errors import BadDimension, BadParty
from .linalg import hermitian_eig
from .observables import PartySettings, Scenario
from .states import QuantumState, place_factors

HALF = Fraction(1, 2)

# settings at which B_2 and B_3 reach 2^{(M-1)/2}
CHSH_OPTIMAL = (PartySettings(0.0, np.pi / 2), PartySettings(np.pi / 4, -np.pi / 4))
MERMIN_OPTIMAL = CHSH_OPTIMAL + (PartySettings(np.pi / 4, -np.pi / 4),)


@dataclass(frozen=True)
class LhvResult:
    max_value: Fraction
    argmax_assignment: tuple[tuple[int, int], ...]  # (a_k, a_k') per party
    n_assignments: int


def classical_wwzb(outcomes: list[tuple[int, int]]) -> tuple[Fraction, Fraction]:
    """Classical (B_M, B~_M) for +-1 outcome pairs, same prime-swap recursion as the operators."""
    b, bt = Fraction(outcomes[0][0]), Fraction(outcomes[0][1])
    for a, ap in outcomes[1:]:
        b, bt = HALF * (b * (a + ap) + bt * (a - ap)), HALF * (bt * (a + ap) - b * (a - ap))
    return b, bt


def classical_d(outcomes: list[tuple[int, int]], i: int) -> Fraction:
    others = [o for k, o in enumerate(outcomes) if k != i - 1]
    a, ap = outcomes[i - 1]
    b, _ = classical_wwzb(others)
    return HALF * (b * (a + ap) + (a - ap))


def lhv_max(n: int, i: int) -> LhvResult:
    """Exact maximum of |D_LR^(i)| over all 2^(2n) deterministic assignments."""
    if not 3 <= n <= 4:
        raise BadDimension(f"lhv_max supports n = 3 or 4, got {n}")
    if not 1 <= i <= n:
        raise BadParty(f"party {i} outside 1..{n}")
    best = Fraction(-1)
    arg = None
    count = 0
    for flat in itertools.product((1, -1), repeat=2 * n):
        outcomes = list(zip(flat[0::2], flat[1::2]))
        v = abs(classical_d(outcomes, i))
        count += 1
        if v > best:
            best, arg = v, tuple(outcomes)
    return LhvResult(best, arg, count)


def spectral_max(op: BellOperator | np.ndarray) -> float:
    m = op.matrix if isinstance(op, BellOperator) else op
    return hermitian_eig(m).max_eigenvalue


def spectral_abs_max(op: BellOperator | np.ndarray) -> float:
    """max |<op>| over all states: the larger of |lambda_min| and |lambda_max|."""
    m = op.matrix if isinstance(op, BellOperator) else op
    w = hermitian_eig(m).eigenvalues
    return float(max(abs(w[0]), abs(w[-1])))


def top_eigenvector(op: BellOperator | np.ndarray) -> np.ndarray:
    m = op.matrix if isinstance(op, BellOperator) else op
    return hermitian_eig(m).eigenvectors[:, -1]


def theorem1_construction(n: int, i: int) -> tuple[QuantumState, Scenario, float]:
    """State with only (n-1)-party entanglement that reaches 2^{(n-2)/2} for D_n^(i).

    Returns (state, scenario, value).  The other parties use the optimal
    settings of B_{n-1}; party ``i`` measures ``A_i = A_i' = sz`` and sits
    in |0>, the +1 eigenstate of ``sz``.
    """
    if n not in (3, 4):
        raise BadDimension(f"construction is provided for n = 3 or 4, got {n}")
    if not 1 <= i <= n:
        raise BadParty(f"party {i} outside 1..{n}")
    rest = CHSH_OPTIMAL if n == 3 else MERMIN_OPTIMAL
    b = wwzb_rep_operator(rest)
    psi_rest = top_eigenvector(b)
    others = [k for k in range(n) if k != i - 1]
    vec = place_factors([(others, psi_rest), ([i - 1], np.array([1.0, 0.0]))], n)
    state = QuantumState(n, vector=vec / np.linalg.norm(vec))
    parties = list(rest)
    parties.insert(i - 1, PartySettings(0.0, 0.0))
    scenario = Scenario(tuple(parties))
    value = state.expectation(d_operator(scenario, i).matrix)
    return state, scenario, value
