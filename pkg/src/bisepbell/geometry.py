"""Feasibility regions in the space of (<D^(1)>, <D^(2)>, <D^(3)>).

Region I (fully separable) is a cube, cuboid ``j`` (biseparable in
partition ``j``) is region I stretched along axis ``j``, and all states are
supposed to lie in the outer cube, the three pairwise cylinders and the
sphere.  Every test is a necessary condition only, with closed boundaries.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .bellops import CorrelationVector, batch_correlations
from .errors import BadLabel
from .optimize import ALL, StateClass

BOUNDARY_TOL = 1e-12
PAIRS = ((1, 2), (2, 3), (3, 1))
CHUNK = 10_000


@dataclass(frozen=True)
class RegionBounds:
    region_i_half: float
    cuboid_long_half: float
    cube_half: float
    cylinder_radius_sq: float
    sphere_radius_sq: float


GENERAL_BOUNDS = RegionBounds(1.0, np.sqrt(2), np.sqrt(2), 2.5, 3.0)
LOO_BOUNDS = RegionBounds(np.sqrt(3 / 4), np.sqrt(3 / 2), np.sqrt(3 / 2), 2.0, 3.0)


def _mode(mode: str | bool) -> str:
    if isinstance(mode, bool):
        return "LOO" if mode else "GENERAL"
    m = mode.upper()
    if m not in ("GENERAL", "LOO"):
        raise BadLabel(f"mode must be GENERAL or LOO, got {mode!r}")
    return m


def bounds_for(mode: str | bool) -> RegionBounds:
    return LOO_BOUNDS if _mode(mode) == "LOO" else GENERAL_BOUNDS


@dataclass(frozen=True)
class RegionReport:
    mode: str
    in_region_I: bool
    in_cuboid: tuple[bool, bool, bool]
    in_cube: bool
    in_cylinders: tuple[bool, bool, bool]  # pairs (1,2), (2,3), (3,1)
    in_sphere: bool
    feasible: bool

    @property
    def black_area(self) -> bool:
        """Feasible and outside every cuboid."""
        return self.feasible and not any(self.in_cuboid)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["in_cuboid"] = list(self.in_cuboid)
        d["in_cylinders"] = {f"{a}{b}": v for (a, b), v in zip(PAIRS, self.in_cylinders)}
        return d


def classify(v: Sequence[float], mode: str | bool = "GENERAL", tol: float = BOUNDARY_TOL) -> RegionReport:
    x = np.abs(np.asarray(v, dtype=float))
    if x.shape != (3,) or not np.all(np.isfinite(x)):
        raise ValueError(f"expected three finite coordinates, got {v!r}")
    b = bounds_for(mode)
    small = x <= b.region_i_half + tol
    in_region_i = bool(small.all())
    cuboid = tuple(
        bool(x[j] <= b.cuboid_long_half + tol and all(small[k] for k in range(3) if k != j)) for j in range(3)
    )
    cube = bool(np.all(x <= b.cube_half + tol))
    cyl = tuple(bool(x[a - 1] ** 2 + x[c - 1] ** 2 <= b.cylinder_radius_sq + tol) for a, c in PAIRS)
    sphere = bool(np.sum(x**2) <= b.sphere_radius_sq + tol)
    return RegionReport(_mode(mode), in_region_i, cuboid, cube, cyl, sphere, cube and all(cyl) and sphere)


def black_area_points(points: np.ndarray, mode: str | bool = "GENERAL") -> np.ndarray:
    """Indices of points with at least two coordinates beyond the region-I half-edge."""
    p = np.abs(np.atleast_2d(points))
    half = bounds_for(mode).region_i_half
    return np.flatnonzero(np.sum(p > half + BOUNDARY_TOL, axis=1) >= 2)


# ---------------------------------------------------------------- plane curves


def plane_boundaries(mode: str | bool = "GENERAL", pair: tuple[int, int] = (1, 2)) -> list[dict]:
    """Primitives of the d_i - d_{i+1} plane plot (x axis d_i, y axis d_{i+1}).

    Rectangles are centred at the origin and given by half-width/half-height;
    the long rectangle along y is the biseparable region of partition i+1.
    """
    i, j = pair
    if i not in (1, 2, 3) or j != i % 3 + 1:
        raise BadLabel(f"pair must be (i, i+1 mod 3), got {pair}")
    b = bounds_for(mode)
    m = _mode(mode)

    def rect(hw, hh, label, style="solid"):
        return {"primitive": "rect", "half_width": hw, "half_height": hh, "style": style, "label": label}

    def circle(r, label, style="solid"):
        return {"primitive": "circle", "radius": r, "style": style, "label": label}

    out = [
        rect(b.region_i_half, b.region_i_half, "region I: fully separable"),
        rect(b.cuboid_long_half, b.region_i_half, f"region III: biseparable partition {i}"),
        rect(b.region_i_half, b.cuboid_long_half, f"region II: biseparable partition {j}"),
        rect(b.cube_half, b.cube_half, "all states: cube"),
        circle(np.sqrt(b.cylinder_radius_sq), "all states: pairwise quadratic bound"),
    ]
    if m == "GENERAL":
        out.append(circle(np.sqrt(b.sphere_radius_sq), "sphere section", "dashed"))
    else:
        out.append(rect(GENERAL_BOUNDS.cube_half, GENERAL_BOUNDS.cube_half, "general-observable cube", "dashed"))
    return out


def curves_document(mode: str | bool = "GENERAL", pair: tuple[int, int] = (1, 2)) -> str:
    return json.dumps(
        {"mode": _mode(mode), "axes": [f"D{pair[0]}", f"D{pair[1]}"], "primitives": plane_boundaries(mode, pair)},
        indent=2,
    )


# ---------------------------------------------------------------- sampling


def random_class_vectors(state_class: StateClass, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` random pure states of the class, shape (n, 8)."""

    def haar(dim):
        v = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    if state_class.kind == "all":
        return haar(8)
    if state_class.kind == "separable":
        q = [haar(2) for _ in range(3)]
        return np.einsum("na,nb,nc->nabc", *q).reshape(n, 8)
    j = state_class.j - 1
    pair = haar(4).reshape(n, 2, 2)
    single = haar(2)
    t = np.einsum("nab,nc->nabc", pair, single)
    # axes 1..3 currently hold (other, other, j); move j into place
    rest = [k for k in range(3) if k != j]
    perm = list(np.argsort(rest + [j]))
    return t.transpose([0] + [1 + p for p in perm]).reshape(n, 8)


def random_angles(n: int, rng: np.random.Generator, loo: bool = False) -> np.ndarray:
    if loo:
        t = rng.uniform(0, 2 * np.pi, (n, 3))
        return np.stack([t, t + np.pi / 2], axis=-1)
    return rng.uniform(0, 2 * np.pi, (n, 3, 2))


def sample_correlations(
    samples: int, state_class: StateClass = ALL, loo: bool = False, seed: int = 0
) -> np.ndarray:
    """Correlation vectors of random (state, scenario) pairs, shape (samples, 3).

    Chunk ``c`` of 10k samples draws from ``default_rng([seed, c])``, so the
    output does not depend on how chunks are scheduled.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    out = np.empty((samples, 3))
    for c, start in enumerate(range(0, samples, CHUNK)):
        n = min(CHUNK, samples - start)
        rng = np.random.default_rng([seed, c])
        vecs = random_class_vectors(state_class, n, rng)
        out[start : start + n] = batch_correlations(vecs, random_angles(n, rng, loo))
    return out


@dataclass(frozen=True, eq=False)
class PlaneScan:
    mode: str
    pair: tuple[int, int]
    state_class: StateClass
    seed: int
    points: np.ndarray  # (samples, 2): d_i, d_{i+1}
    full: np.ndarray  # (samples, 3)
    feasible: np.ndarray  # bool per sample

    @property
    def max_pair_sq(self) -> float:
        return float(np.max(np.sum(self.points**2, axis=1)))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sample", "d_i", "d_j", "class", "mode", "feasible"])
            for k, ((x, y), ok) in enumerate(zip(self.points, self.feasible)):
                w.writerow([k, repr(float(x)), repr(float(y)), str(self.state_class), self.mode, str(bool(ok)).lower()])


def _feasible_mask(full: np.ndarray, mode: str) -> np.ndarray:
    b = bounds_for(mode)
    x = np.abs(full)
    t = BOUNDARY_TOL
    ok = np.all(x <= b.cube_half + t, axis=1)
    for a, c in PAIRS:
        ok &= x[:, a - 1] ** 2 + x[:, c - 1] ** 2 <= b.cylinder_radius_sq + t
    ok &= np.sum(x**2, axis=1) <= b.sphere_radius_sq + t
    return ok


def scan_plane(
    mode: str | bool = "GENERAL",
    pair: tuple[int, int] = (1, 2),
    samples: int = 10_000,
    state_class: StateClass = ALL,
    seed: int = 0,
) -> PlaneScan:
    m = _mode(mode)
    i, j = pair
    if i not in (1, 2, 3) or j != i % 3 + 1:
        raise BadLabel(f"pair must be (i, i+1 mod 3), got {pair}")
    full = sample_correlations(samples, state_class, m == "LOO", seed)
    return PlaneScan(m, (i, j), state_class, seed, full[:, [i - 1, j - 1]], full, _feasible_mask(full, m))


# ---------------------------------------------------------------- rendering


def render_svg(mode: str | bool, pair: tuple[int, int], points: np.ndarray | None = None, size: int = 800) -> str:
    """Plane plot as an SVG document: boundary primitives plus 1px point markers."""
    m = _mode(mode)
    extent = 2.0
    scale = 0.45 * size / extent
    cx = cy = size / 2

    def px(x, y):
        return cx + scale * x, cy - scale * y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{px(-extent, 0)[0]:.1f}" y1="{cy:.1f}" x2="{px(extent, 0)[0]:.1f}" y2="{cy:.1f}" stroke="gray" stroke-width="0.5"/>',
        f'<line x1="{cx:.1f}" y1="{px(0, extent)[1]:.1f}" x2="{cx:.1f}" y2="{px(0, -extent)[1]:.1f}" stroke="gray" stroke-width="0.5"/>',
        f'<text x="{size - 60}" y="{cy - 8:.1f}" font-size="14">&lt;D{pair[0]}&gt;</text>',
        f'<text x="{cx + 8:.1f}" y="20" font-size="14">&lt;D{pair[1]}&gt;</text>',
        f'<text x="10" y="{size - 10}" font-size="12">{m}</text>',
    ]
    for prim in plane_boundaries(m, pair):
        dash = ' stroke-dasharray="6,4"' if prim["style"] == "dashed" else ""
        if prim["primitive"] == "rect":
            x0, y0 = px(-prim["half_width"], prim["half_height"])
            parts.append(
                f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{2 * scale * prim["half_width"]:.2f}" '
                f'height="{2 * scale * prim["half_height"]:.2f}" fill="none" stroke="black" stroke-width="1"{dash}/>'
            )
        else:
            parts.append(
                f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{scale * prim["radius"]:.2f}" fill="none" '
                f'stroke="black" stroke-width="1"{dash}/>'
            )
    if points is not None:
        for x, y in np.asarray(points):
            u, w = px(x, y)
            parts.append(f'<rect x="{u:.1f}" y="{w:.1f}" width="1" height="1" fill="#1f77b4"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def write_svg(path, mode, pair, points=None) -> None:
    Path(path).write_text(render_svg(mode, pair, points))


def correlation_point(v) -> CorrelationVector:
    return CorrelationVector(*map(float, v))
