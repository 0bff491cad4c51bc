"""Core types for striped twin microstructures.

A cross-section profile u(y) is a continuous, h-periodic sawtooth with
slope +1 or -1 everywhere (unit shear strains).  It is stored as the
ordered list of slope-change ordinates ("corners") in [0, h), the slope
of the segment that starts at y = 0, and the value u(0).  Periodicity
forces an even corner count and equal total length of rising and
falling segments; both are validated on construction.

A Configuration is a finite list of such profiles at increasing x
stations spanning [0, L].  It discretizes a field u(x, y) that is
linear in x between stations, which is the minimizing interpolation
for the shear energy, so the discrete strain term is exact for this
class.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InvariantError",
    "NonConvergenceError",
    "ModelParams",
    "SawtoothProfile",
    "Configuration",
    "EnergyBreakdown",
    "evaluate",
    "fourier_coefficient",
    "fourier_coefficients",
    "interface_count",
    "l2_distance",
    "random_profile",
]

# Corners closer than this fraction of the period collapse on construction.
MERGE_TOL = 1e-12
# Allowed closure defect |total rising - total falling| as a fraction of h.
BALANCE_TOL = 1e-10


class InvariantError(ValueError):
    """A model invariant was violated (malformed profile, params, config)."""


class NonConvergenceError(RuntimeError):
    """A numerical routine could not meet its own accuracy target."""


@dataclass(frozen=True)
class ModelParams:
    """Problem constants: interface weight beta, surface weight epsilon,
    domain length L (x direction) and period h (y direction)."""

    beta: float
    epsilon: float
    length_L: float
    height_h: float

    def __post_init__(self) -> None:
        for name in ("beta", "epsilon", "length_L", "height_h"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvariantError(f"ModelParams.{name} must be positive and finite, got {v!r}")

    def sigma(self) -> float:
        """Dimensionless regime parameter beta * epsilon**(-1/3) * L**(1/3)."""
        return self.beta * self.epsilon ** (-1.0 / 3.0) * self.length_L ** (1.0 / 3.0)

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "epsilon": self.epsilon,
            "length_L": self.length_L,
            "height_h": self.height_h,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModelParams":
        try:
            return cls(
                beta=float(data["beta"]),
                epsilon=float(data["epsilon"]),
                length_L=float(data["length_L"]),
                height_h=float(data["height_h"]),
            )
        except KeyError as exc:
            raise InvariantError(f"params JSON missing field {exc.args[0]!r}") from exc


def _merge_degenerate(corners: list[float], initial_slope: int, period: float) -> tuple[list[float], int]:
    """Drop zero-length segments pairwise so slope alternation survives.

    A pair of corners closer than MERGE_TOL*period bounds a segment of
    negligible length; removing both keeps the corner count even and the
    remaining slopes consistent.  Removing the wrap-around pair flips the
    slope at y = 0.
    """
    tol = MERGE_TOL * period
    changed = True
    while changed and len(corners) >= 2:
        changed = False
        m = len(corners)
        for j in range(m):
            nxt = (j + 1) % m
            gap = corners[nxt] - corners[j] if nxt > j else corners[nxt] + period - corners[j]
            if gap < tol:
                if nxt > j:
                    del corners[nxt]
                    del corners[j]
                else:
                    # wrap pair (last, first): the segment through y=0 vanishes
                    del corners[m - 1]
                    del corners[0]
                    initial_slope = -initial_slope
                changed = True
                break
    return corners, initial_slope


@dataclass(frozen=True)
class SawtoothProfile:
    """Continuous h-periodic function with slope +-1 between corners.

    period: h > 0
    offset: value u(0)
    initial_slope: slope (+1 or -1) of the segment that starts at y = 0
    corners: strictly increasing ordinates in [0, period), even count
    """

    period: float
    offset: float
    initial_slope: int
    corners: tuple[float, ...]

    def __post_init__(self) -> None:
        h = self.period
        if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
            raise InvariantError(f"period must be positive, got {h!r}")
        if not math.isfinite(self.offset):
            raise InvariantError("offset must be finite")
        if self.initial_slope not in (1, -1):
            raise InvariantError(f"initial_slope must be +1 or -1, got {self.initial_slope!r}")
        cs = [float(c) for c in self.corners]
        if any(not math.isfinite(c) or c < 0.0 or c >= h for c in cs):
            raise InvariantError("corners must lie in [0, period)")
        if any(b <= a for a, b in zip(cs, cs[1:])):
            raise InvariantError("corners must be strictly increasing")
        slope = int(self.initial_slope)
        cs, slope = _merge_degenerate(cs, slope, h)
        if len(cs) < 2:
            raise InvariantError("a periodic unit-slope profile needs at least 2 corners")
        if len(cs) % 2 != 0:
            raise InvariantError("corner count must be even")
        object.__setattr__(self, "corners", tuple(cs))
        object.__setattr__(self, "initial_slope", slope)
        object.__setattr__(self, "period", float(h))
        object.__setattr__(self, "offset", float(self.offset))
        # rising and falling segments must each cover half the period
        gaps = self._gaps()
        signs = self._segment_slopes()
        defect = float(np.dot(signs, gaps))
        if abs(defect) > BALANCE_TOL * h:
            raise InvariantError(
                f"profile does not close periodically: signed slope integral {defect:.3e}"
            )

    # -- internal geometry -------------------------------------------------

    def _gaps(self) -> np.ndarray:
        """Segment lengths between consecutive corners, cyclic."""
        c = np.asarray(self.corners)
        return np.diff(np.append(c, c[0] + self.period))

    def _segment_slopes(self) -> np.ndarray:
        """Slope on segment j = (corners[j], corners[j+1])."""
        m = len(self.corners)
        first = self.initial_slope if self.corners[0] == 0.0 else -self.initial_slope
        return first * (-1.0) ** np.arange(m)

    def slope_after_corners(self) -> np.ndarray:
        """Slope immediately after each corner."""
        return self._segment_slopes()

    def corner_values(self) -> np.ndarray:
        """u at each corner."""
        c = np.asarray(self.corners)
        s = self._segment_slopes()
        v0 = self.offset + self.initial_slope * c[0]  # value at first corner
        vals = np.empty(len(c))
        vals[0] = v0
        if len(c) > 1:
            vals[1:] = v0 + np.cumsum(s[:-1] * np.diff(c))
        return vals

    # -- public operations --------------------------------------------------

    def evaluate(self, y) -> np.ndarray | float:
        """u(y), periodic in y.  Accepts scalars or arrays."""
        yy = np.asarray(y, dtype=float)
        scalar = yy.ndim == 0
        yr = np.mod(yy, self.period)
        c = np.asarray(self.corners)
        vals = self.corner_values()
        s = self._segment_slopes()
        idx = np.searchsorted(c, yr, side="right") - 1
        out = np.empty_like(yr)
        before = idx < 0  # y in [0, corners[0]): segment wrapping through 0
        out[before] = self.offset + self.initial_slope * yr[before]
        inside = ~before
        j = idx[inside]
        out[inside] = vals[j] + s[j] * (yr[inside] - c[j])
        return float(out) if scalar else out

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Breakpoints 0 = y_0 < ... < y_n = period and values there.

        Between consecutive nodes the profile is linear.  Used by exact
        piecewise integration routines.
        """
        c = np.asarray(self.corners)
        ys = c if c[0] == 0.0 else np.concatenate(([0.0], c))
        ys = np.concatenate((ys, [self.period]))
        vs = self.evaluate(np.minimum(ys, np.nextafter(self.period, 0.0)))
        vs = np.asarray(vs, dtype=float)
        vs[-1] = self.evaluate(0.0)  # exact closure at the wrap node
        return ys, vs

    def interface_count(self) -> int:
        return len(self.corners)

    def mean(self) -> float:
        """Average of u over one period (exact)."""
        ys, vs = self.nodes()
        return float(np.sum((vs[:-1] + vs[1:]) * 0.5 * np.diff(ys)) / self.period)

    def translated(self, dy: float) -> "SawtoothProfile":
        """Profile of u(y - dy) (graph shifted right by dy)."""
        h = self.period
        new_offset = float(self.evaluate(-dy))
        shifted = np.mod(np.asarray(self.corners) + dy, h)
        order = np.argsort(shifted, kind="stable")
        shifted = shifted[order]
        slopes = self.slope_after_corners()[order]
        # slope at y=0 of the shifted profile: slope after the last corner
        # below the wrap, which is the slope after shifted[-1]
        init = int(slopes[-1]) if shifted[0] > 0.0 else int(slopes[0])
        return SawtoothProfile(h, new_offset, init, tuple(shifted))

    def with_offset_shift(self, delta: float) -> "SawtoothProfile":
        return replace(self, offset=self.offset + delta)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "offset": self.offset,
            "initial_slope": self.initial_slope,
            "corners": list(self.corners),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SawtoothProfile":
        try:
            return cls(
                period=float(data["period"]),
                offset=float(data["offset"]),
                initial_slope=int(data["initial_slope"]),
                corners=tuple(float(c) for c in data["corners"]),
            )
        except KeyError as exc:
            raise InvariantError(f"profile JSON missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class Configuration:
    """Profiles at increasing x stations spanning [0, L]."""

    params: ModelParams
    stations: tuple[float, ...]
    profiles: tuple[SawtoothProfile, ...]

    def __post_init__(self) -> None:
        L = self.params.length_L
        xs = tuple(float(x) for x in self.stations)
        if len(xs) == 0:
            raise InvariantError("configuration needs at least one station")
        if len(xs) != len(self.profiles):
            raise InvariantError("stations and profiles must have equal length")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InvariantError("stations must be strictly increasing")
        if abs(xs[0] - 0.0) > 1e-12 * L or abs(xs[-1] - L) > 1e-12 * L:
            if len(xs) == 1 and abs(xs[0]) <= 1e-12 * L:
                pass  # single-station configuration sits at x = 0
            else:
                raise InvariantError("stations must start at 0 and end at length_L")
        h = self.params.height_h
        for p in self.profiles:
            if abs(p.period - h) > 1e-12 * h:
                raise InvariantError("all profile periods must equal height_h")
        object.__setattr__(self, "stations", xs)
        object.__setattr__(self, "profiles", tuple(self.profiles))

    @property
    def boundary_profile(self) -> SawtoothProfile:
        """Trace at x = 0, the side that meets the unstrained half-plane."""
        return self.profiles[0]

    def replace_profile(self, j: int, profile: SawtoothProfile) -> "Configuration":
        ps = list(self.profiles)
        ps[j] = profile
        return Configuration(self.params, self.stations, tuple(ps))

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "stations": list(self.stations),
            "profiles": [p.to_json() for p in self.profiles],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Configuration":
        try:
            return cls(
                params=ModelParams.from_json(data["params"]),
                stations=tuple(float(x) for x in data["stations"]),
                profiles=tuple(SawtoothProfile.from_json(p) for p in data["profiles"]),
            )
        except KeyError as exc:
            raise InvariantError(f"configuration JSON missing field {exc.args[0]!r}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "Configuration":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy split into its three contributions plus their sum."""

    austenite: float
    strain: float
    surface: float
    total: float

    def __post_init__(self) -> None:
        s = self.austenite + self.strain + self.surface
        scale = max(abs(s), abs(self.total), 1e-300)
        if abs(s - self.total) > 1e-12 * scale:
            raise InvariantError("EnergyBreakdown.total must equal the sum of its parts")

    @classmethod
    def from_parts(cls, austenite: float, strain: float, surface: float) -> "EnergyBreakdown":
        return cls(austenite, strain, surface, austenite + strain + surface)

    def to_json(self) -> dict:
        return {
            "austenite": self.austenite,
            "strain": self.strain,
            "surface": self.surface,
            "total": self.total,
        }


# -- free-function operations ------------------------------------------------


def evaluate(profile: SawtoothProfile, y) -> np.ndarray | float:
    """Profile value u(y); thin wrapper kept for a flat functional API."""
    return profile.evaluate(y)


def fourier_coefficient(profile: SawtoothProfile, k: int) -> complex:
    """Coefficient (1/h) * integral of u(y) exp(-2 pi i k y / h) dy.

    For k != 0 the second derivative of a sawtooth is a sum of point
    masses of weight +-2 at the corners, which integrates the oscillatory
    factor exactly:

        uhat(k) = -(1 / (h w^2)) * sum_j (2 s_j) exp(-i w c_j),  w = 2 pi k / h.
    """
    if k == 0:
        return complex(profile.mean())
    return complex(fourier_coefficients(profile, np.asarray([k]))[0])


def fourier_coefficients(profile: SawtoothProfile, ks: np.ndarray) -> np.ndarray:
    """Vectorized fourier_coefficient for an integer array ks (no k = 0)."""
    ks = np.asarray(ks)
    if np.any(ks == 0):
        raise InvariantError("fourier_coefficients expects nonzero modes")
    h = profile.period
    c = np.asarray(profile.corners)
    ds = 2.0 * profile.slope_after_corners()
    w = 2.0 * np.pi * ks / h
    phase = np.exp(-1j * np.outer(w, c))
    return -(phase @ ds) / (h * w**2)


def interface_count(profile: SawtoothProfile) -> int:
    """Number of slope changes per period."""
    return profile.interface_count()


def _window_pieces(period: float, window: tuple[float, float] | None) -> list[tuple[float, float]]:
    """Reduce an integration window to subintervals of [0, period].

    The window may wrap: (a, b) with a < b <= a + period, arbitrary reals.
    """
    if window is None:
        return [(0.0, period)]
    a, b = float(window[0]), float(window[1])
    if not (b > a):
        raise InvariantError("window must have positive width")
    if b - a > period * (1 + 1e-12):
        raise InvariantError("window may not exceed one period")
    a0 = math.fmod(a, period)
    if a0 < 0:
        a0 += period
    width = b - a
    if a0 + width <= period:
        return [(a0, a0 + width)]
    return [(a0, period), (0.0, a0 + width - period)]


def l2_distance(
    p: SawtoothProfile,
    q: SawtoothProfile,
    window: tuple[float, float] | None = None,
) -> float:
    """L2 norm of p - q over the window (default one full period), exact.

    p - q is piecewise linear with breakpoints at the union of the two
    corner sets, so each cell integrates in closed form.
    """
    if abs(p.period - q.period) > 1e-12 * p.period:
        raise InvariantError("l2_distance requires equal periods")
    h = p.period
    yp, _ = p.nodes()
    yq, _ = q.nodes()
    total = 0.0
    for lo, hi in _window_pieces(h, window):
        cuts = np.unique(np.concatenate((yp, yq, [lo, hi])))
        cuts = cuts[(cuts >= lo) & (cuts <= hi)]
        if cuts[0] > lo:
            cuts = np.concatenate(([lo], cuts))
        if cuts[-1] < hi:
            cuts = np.concatenate((cuts, [hi]))
        left, right = cuts[:-1], cuts[1:]
        va = np.asarray(p.evaluate(left)) - np.asarray(q.evaluate(left))
        vb = np.asarray(p.evaluate(right)) - np.asarray(q.evaluate(right))
        # exact integral of a linear function squared on each cell
        total += float(np.sum((right - left) * (va * va + va * vb + vb * vb) / 3.0))
    return math.sqrt(max(total, 0.0))


def random_profile(
    rng: np.random.Generator,
    period: float = 1.0,
    n_teeth: int | None = None,
    max_teeth: int = 8,
    min_gap_frac: float = 0.02,
) -> SawtoothProfile:
    """Random admissible profile: rising and falling lengths each period/2.

    Draws the rising gaps and falling gaps as independent normalized
    uniform partitions so the closure invariant holds exactly.  Gaps
    are resampled until none is shorter than min_gap_frac * period / M.
    """
    m = int(n_teeth) if n_teeth is not None else int(rng.integers(1, max_teeth + 1))
    if m < 1:
        raise InvariantError("need at least one tooth")
    half = period / 2.0
    for _ in range(1000):
        up = rng.random(m)
        dn = rng.random(m)
        up = up / up.sum() * half
        dn = dn / dn.sum() * half
        gaps = np.empty(2 * m)
        gaps[0::2] = up
        gaps[1::2] = dn
        if gaps.min() >= min_gap_frac * period / (2 * m):
            break
    else:  # pragma: no cover - vanishing probability
        raise NonConvergenceError("could not draw well-separated gaps")
    start = rng.random() * period
    corners = np.mod(start + np.concatenate(([0.0], np.cumsum(gaps[:-1]))), period)
    order = np.argsort(corners)
    corners = corners[order]
    # slope after the j-th drawn corner is +1 for even j (rising gap follows)
    slopes = np.where(np.arange(2 * m) % 2 == 0, 1, -1)[order]
    init = int(slopes[-1]) if corners[0] > 0.0 else int(slopes[0])
    offset = float(rng.normal() * 0.1 * period)
    return SawtoothProfile(period, offset, init, tuple(corners))
