"""Three- (and up to four-) qubit states used throughout the package.

Ordering convention: qubit 1 is the leftmost, most significant tensor factor,
so the label ``"011"`` means qubit 1 in |0>, qubits 2 and 3 in |1>.
Qubit and partition labels in the public API are 1-based.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BadDimension, BadLabel, DimensionMismatch, NormViolation
from .linalg import SX, SY, SZ

MAX_QUBITS = 4
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A pure vector or a density matrix on ``n_qubits`` qubits."""

    n_qubits: int
    vector: np.ndarray | None = None
    rho: np.ndarray | None = None

    def __post_init__(self):
        n = self.n_qubits
        if not 1 <= n <= MAX_QUBITS:
            raise BadDimension(f"n_qubits must be in 1..{MAX_QUBITS}, got {n}")
        if (self.vector is None) == (self.rho is None):
            raise ValueError("exactly one of vector / rho must be given")
        dim = 2**n
        if self.vector is not None:
            v = np.array(self.vector, dtype=complex).reshape(-1)
            if v.shape != (dim,):
                raise DimensionMismatch(f"vector length {v.size} != {dim}")
            if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
                raise NormViolation(f"state norm {np.linalg.norm(v):.15f} != 1")
            v.setflags(write=False)
            object.__setattr__(self, "vector", v)
        else:
            r = np.array(self.rho, dtype=complex)
            if r.shape != (dim, dim):
                raise DimensionMismatch(f"rho shape {r.shape} != {(dim, dim)}")
            if np.max(np.abs(r - r.conj().T)) > 1e-12:
                raise NormViolation("density matrix is not Hermitian")
            if abs(np.trace(r).real - 1.0) > 1e-12:
                raise NormViolation(f"density matrix trace {np.trace(r).real} != 1")
            if np.linalg.eigvalsh(r).min() < -1e-10:
                raise NormViolation("density matrix is not positive semidefinite")
            r.setflags(write=False)
            object.__setattr__(self, "rho", r)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density(self) -> np.ndarray:
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        return np.array(self.rho)

    def expectation(self, op) -> float:
        """Real part of Tr[op rho]; ``op`` is assumed Hermitian."""
        op = np.asarray(op)
        if op.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operator shape {op.shape} vs state dim {self.dim}")
        if self.vector is not None:
            return float(np.real(np.vdot(self.vector, op @ self.vector)))
        return float(np.real(np.sum(op * self.rho.T)))

    def to_dict(self) -> dict:
        if self.vector is not None:
            return {"n_qubits": self.n_qubits, "pure": [[z.real, z.imag] for z in self.vector.tolist()]}
        return {
            "n_qubits": self.n_qubits,
            "rho": [[[z.real, z.imag] for z in row] for row in self.rho.tolist()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuantumState":
        n = int(data["n_qubits"])
        if "pure" in data:
            v = np.array([complex(re, im) for re, im in data["pure"]])
            # text round trips lose the last bit or two of the norm
            return cls(n, vector=v / np.linalg.norm(v))
        if "rho" in data:
            r = np.array([[complex(re, im) for re, im in row] for row in data["rho"]])
            return cls(n, rho=r)
        raise ValueError("state document needs a 'pure' or 'rho' field")


def save_state(state: QuantumState, path) -> None:
    Path(path).write_text(json.dumps(state.to_dict(), indent=2))


def load_state(path) -> QuantumState:
    return QuantumState.from_dict(json.loads(Path(path).read_text()))


def pure(vector) -> QuantumState:
    v = np.asarray(vector, dtype=complex).reshape(-1)
    n = int(round(np.log2(v.size)))
    if 2**n != v.size:
        raise BadDimension(f"vector length {v.size} is not a power of two")
    return QuantumState(n, vector=v)


def basis_state(bits: str) -> QuantumState:
    if not isinstance(bits, str) or not 1 <= len(bits) <= MAX_QUBITS or set(bits) - {"0", "1"}:
        raise BadLabel(f"bad basis label {bits!r}")
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return QuantumState(len(bits), vector=v)


def ghz(n: int, alpha: float = np.pi / 4) -> QuantumState:
    """cos(alpha)|0...0> + sin(alpha)|1...1>."""
    if not 2 <= n <= MAX_QUBITS:
        raise BadDimension(f"ghz needs 2 <= n <= {MAX_QUBITS}, got {n}")
    v = np.zeros(2**n, dtype=complex)
    v[0] = np.cos(alpha)
    v[-1] = np.sin(alpha)
    return QuantumState(n, vector=v)


def w_state() -> QuantumState:
    v = np.zeros(8, dtype=complex)
    v[[1, 2, 4]] = 1 / np.sqrt(3)
    return QuantumState(3, vector=v)


def _check_normalized(v: np.ndarray, what: str) -> None:
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise NormViolation(f"{what} has norm {np.linalg.norm(v)}")


def product_state(factors: Sequence) -> QuantumState:
    if not 1 <= len(factors) <= MAX_QUBITS:
        raise BadDimension(f"need 1..{MAX_QUBITS} factors, got {len(factors)}")
    vs = []
    for k, f in enumerate(factors):
        v = np.asarray(f, dtype=complex).reshape(-1)
        if v.shape != (2,):
            raise DimensionMismatch(f"factor {k + 1} is not a single-qubit vector")
        _check_normalized(v, f"factor {k + 1}")
        vs.append(v)
    out = vs[0]
    for v in vs[1:]:
        out = np.kron(out, v)
    return QuantumState(len(vs), vector=out)


def place_factors(parts: Sequence[tuple[Sequence[int], np.ndarray]], n: int) -> np.ndarray:
    """Assemble a product vector from ``(slots, vector)`` blocks.

    Slots are 0-based; each block's vector follows the ascending order of
    its slots.  Together the blocks must cover ``range(n)`` exactly once.
    """
    slots: list[int] = []
    vec = np.ones(1, dtype=complex)
    for where, v in parts:
        slots.extend(where)
        vec = np.kron(vec, np.asarray(v, dtype=complex).reshape(-1))
    if sorted(slots) != list(range(n)):
        raise BadDimension(f"blocks cover slots {slots}, expected 0..{n - 1}")
    t = vec.reshape((2,) * n)
    t = np.transpose(t, np.argsort(slots))
    return t.reshape(-1)


def biseparable_pure(partition: int, pair_state, single_state) -> QuantumState:
    """Three-qubit product of a single qubit at slot ``partition`` and a pair on the other two.

    The pair occupies the remaining slots in ascending qubit order.
    """
    if partition not in (1, 2, 3):
        raise BadLabel(f"partition must be 1, 2 or 3, got {partition}")
    pair = np.asarray(pair_state, dtype=complex).reshape(-1)
    single = np.asarray(single_state, dtype=complex).reshape(-1)
    if pair.shape != (4,) or single.shape != (2,):
        raise DimensionMismatch("need a 4-component pair state and a 2-component single state")
    _check_normalized(pair, "pair state")
    _check_normalized(single, "single state")
    j = partition - 1
    rest = [k for k in range(3) if k != j]
    v = place_factors([(rest, pair), ([j], single)], 3)
    return QuantumState(3, vector=v / np.linalg.norm(v))


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pure(n: int, rng_seed: int | np.random.Generator) -> QuantumState:
    """Haar-random pure state: normalized vector of i.i.d. complex Gaussians."""
    if not 1 <= n <= MAX_QUBITS:
        raise BadDimension(f"n must be in 1..{MAX_QUBITS}")
    rng = np.random.default_rng(rng_seed)
    return QuantumState(n, vector=haar_vector(2**n, rng))


def random_density(n: int, rng_seed: int | np.random.Generator) -> QuantumState:
    """Mixed state: Haar pure state on n+1 qubits with the trailing ancilla traced out."""
    if not 1 <= n <= MAX_QUBITS - 1:
        raise BadDimension(f"random_density supports n in 1..{MAX_QUBITS - 1}")
    rng = np.random.default_rng(rng_seed)
    psi = haar_vector(2 ** (n + 1), rng).reshape(2**n, 2)
    rho = psi @ psi.conj().T
    return QuantumState(n, rho=0.5 * (rho + rho.conj().T))


def partial_trace(state: QuantumState | np.ndarray, keep: Sequence[int], n: int | None = None) -> np.ndarray:
    """Reduced density matrix on the 1-based qubits ``keep`` (returned in ascending order)."""
    if isinstance(state, QuantumState):
        n = state.n_qubits
        rho = state.density()
    else:
        rho = np.asarray(state, dtype=complex)
        if n is None:
            n = int(round(np.log2(rho.shape[0])))
    keep0 = sorted(k - 1 for k in keep)
    if any(k < 0 or k >= n for k in keep0) or len(set(keep0)) != len(keep0):
        raise BadLabel(f"bad qubit labels {list(keep)} for n={n}")
    drop = [k for k in range(n) if k not in keep0]
    t = rho.reshape((2,) * (2 * n))
    # contract each dropped ket index with its bra partner, highest first so labels stay valid
    for k in sorted(drop, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    d = 2 ** len(keep0)
    return t.reshape(d, d)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def schmidt_rank(state: QuantumState, qubits: Sequence[int], tol: float = 1e-10) -> int:
    """Schmidt rank of a pure state across the cut separating 1-based ``qubits`` from the rest."""
    if not state.is_pure:
        raise ValueError("Schmidt rank is defined for pure states only")
    n = state.n_qubits
    a = sorted(q - 1 for q in qubits)
    b = [k for k in range(n) if k not in a]
    t = state.vector.reshape((2,) * n).transpose(a + b).reshape(2 ** len(a), 2 ** len(b))
    return int(np.sum(np.linalg.svd(t, compute_uv=False) > tol))


def bloch_vector(single) -> np.ndarray:
    """(x, y, z) Bloch components of a single-qubit pure vector or density matrix."""
    a = np.asarray(single, dtype=complex)
    rho = np.outer(a, a.conj()) if a.ndim == 1 else a
    return np.array([np.real(np.trace(rho @ s)) for s in (SX, SY, SZ)])


def bloch_state(theta: float) -> np.ndarray:
    """Single-qubit vector with Bloch vector (sin theta, 0, cos theta)."""
    return np.array([np.cos(theta / 2), np.sin(theta / 2)], dtype=complex)


__all__ = [
    "QuantumState",
    "basis_state",
    "biseparable_pure",
    "bloch_state",
    "bloch_vector",
    "ghz",
    "load_state",
    "partial_trace",
    "place_factors",
    "product_state",
    "pure",
    "purity",
    "random_density",
    "random_pure",
    "save_state",
    "schmidt_rank",
    "w_state",
]
