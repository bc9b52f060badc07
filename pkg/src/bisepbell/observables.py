"""Spin observables in the x-z plane and measurement scenarios.

A party measures ``A = cos(theta) sz + sin(theta) sx`` or the primed
observable at ``theta_prime``.  Under local orthogonality (LOO) the primed
angle is always ``theta + pi/2``, which makes the two Bloch vectors
orthogonal by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadPosition
from .linalg import SX, SZ

TWO_PI = 2 * np.pi
LOO_TOL = 1e-10


def canonical_angle(theta: float) -> float:
    t = float(theta)
    if not np.isfinite(t):
        raise ValueError(f"angle must be finite, got {theta}")
    t = t % TWO_PI
    return 0.0 if t == TWO_PI else t


def spin_observable(theta: float) -> np.ndarray:
    return np.cos(theta) * SZ + np.sin(theta) * SX


def loo_partner(theta: float) -> float:
    return canonical_angle(theta + np.pi / 2)


def embed(op, position: int, n: int) -> np.ndarray:
    """``1 x ... x op x ... x 1`` with ``op`` on the 1-based qubit ``position``."""
    if not 1 <= n <= 4 or not 1 <= position <= n:
        raise BadPosition(f"position {position} invalid for {n} qubits")
    op = np.asarray(op, dtype=complex)
    left = np.eye(2 ** (position - 1), dtype=complex)
    right = np.eye(2 ** (n - position), dtype=complex)
    return np.kron(np.kron(left, op), right)


@dataclass(frozen=True)
class PartySettings:
    theta: float
    theta_prime: float
    loo: bool = False

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(self.theta))
        object.__setattr__(self, "theta_prime", canonical_angle(self.theta_prime))
        if self.loo and abs(np.cos(self.theta - self.theta_prime)) > LOO_TOL:
            raise ValueError(
                f"LOO settings need orthogonal Bloch vectors: cos({self.theta} - {self.theta_prime}) != 0"
            )

    @classmethod
    def orthogonal(cls, theta: float) -> "PartySettings":
        return cls(theta, loo_partner(theta), loo=True)

    @property
    def a(self) -> np.ndarray:
        return spin_observable(self.theta)

    @property
    def a_prime(self) -> np.ndarray:
        return spin_observable(self.theta_prime)

    @property
    def overlap(self) -> float:
        """Dot product of the two unit Bloch vectors."""
        return float(np.cos(self.theta - self.theta_prime))

    def swapped(self) -> "PartySettings":
        return PartySettings(self.theta_prime, self.theta, loo=self.loo)

    def with_angles(self, theta: float, theta_prime: float | None = None) -> "PartySettings":
        if self.loo:
            return PartySettings.orthogonal(theta)
        return PartySettings(theta, self.theta_prime if theta_prime is None else theta_prime)


@dataclass(frozen=True)
class Scenario:
    parties: tuple[PartySettings, ...]
    loo: bool = False

    def __post_init__(self):
        parties = tuple(self.parties)
        object.__setattr__(self, "parties", parties)
        if not 1 <= len(parties) <= 4:
            raise ValueError(f"scenario needs 1..4 parties, got {len(parties)}")
        if self.loo:
            for k, p in enumerate(parties):
                if abs(np.cos(p.theta - p.theta_prime)) > LOO_TOL:
                    raise ValueError(f"party {k + 1} violates the LOO constraint")

    @property
    def n(self) -> int:
        return len(self.parties)

    def __getitem__(self, party: int) -> PartySettings:
        """1-based party lookup."""
        return self.parties[party - 1]

    @classmethod
    def from_angles(cls, pairs: Sequence[Sequence[float]]) -> "Scenario":
        return cls(tuple(PartySettings(t, tp) for t, tp in pairs))

    @classmethod
    def orthogonal(cls, thetas: Sequence[float]) -> "Scenario":
        return cls(tuple(PartySettings.orthogonal(t) for t in thetas), loo=True)

    @classmethod
    def uniform(cls, theta: float, theta_prime: float, n: int = 3) -> "Scenario":
        return cls.from_angles([(theta, theta_prime)] * n)

    def angles(self) -> np.ndarray:
        """Free parameters: one angle per party under LOO, otherwise two."""
        if self.loo:
            return np.array([p.theta for p in self.parties])
        return np.array([a for p in self.parties for a in (p.theta, p.theta_prime)])

    def with_free_angles(self, x: Sequence[float]) -> "Scenario":
        if self.loo:
            return Scenario.orthogonal(x)
        return Scenario.from_angles(list(zip(x[0::2], x[1::2])))

    def to_dict(self) -> dict:
        return {
            "loo": self.loo,
            "parties": [[p.theta, p.theta_prime] for p in self.parties],
        }

    def format(self) -> str:
        if self.loo:
            return ";".join(repr(p.theta) for p in self.parties)
        return ";".join(f"{p.theta!r},{p.theta_prime!r}" for p in self.parties)


def parse_settings(text: str, loo: bool = False) -> Scenario:
    """Parse ``"t1,t1';t2,t2';t3,t3'"`` (radians) or, with ``loo``, ``"t1;t2;t3"``."""
    groups = [g.strip() for g in text.strip().split(";") if g.strip()]
    if not groups:
        raise ValueError("empty settings string")
    if loo:
        parties = []
        for g in groups:
            vals = [float(x) for x in g.split(",")]
            if len(vals) == 1:
                parties.append(PartySettings.orthogonal(vals[0]))
            elif len(vals) == 2:
                parties.append(PartySettings(vals[0], vals[1], loo=True))
            else:
                raise ValueError(f"bad LOO party settings {g!r}")
        return Scenario(tuple(parties), loo=True)
    pairs = []
    for g in groups:
        vals = [float(x) for x in g.split(",")]
        if len(vals) != 2:
            raise ValueError(f"party settings {g!r} need two comma-separated angles")
        pairs.append(vals)
    return Scenario.from_angles(pairs)


def random_scenario(n: int, rng: np.random.Generator, loo: bool = False) -> Scenario:
    if loo:
        return Scenario.orthogonal(rng.uniform(0, TWO_PI, n))
    return Scenario.from_angles(rng.uniform(0, TWO_PI, (n, 2)))

