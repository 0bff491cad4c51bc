"""Energy contributions for striped twin configurations.

Conventions.  For an h-periodic trace u with coefficients
uhat(k) = (1/h) int_0^h u(y) exp(-2 pi i k y / h) dy, the half-norm
squared is

    ||u||^2 = 4 pi^2 sum_k |k| |uhat(k)|^2,

which equals the double integral of |u(y) - u~(y')|^2 / |y - y'|^2
with y over one period, y' over the whole line, and u~ the periodic
extension.  The same quantity is 2 pi times the Dirichlet energy of
the harmonic extension of u into the half-plane x < 0, so a single
spectral sum serves all three readings.  The interface term of a
configuration is beta times this half-norm of the x = 0 trace; the
shear term is the exact strain of the piecewise-linear-in-x
interpolation; the surface term charges epsilon per unit x-length per
interface, with the count on each x-cell taken as the larger of the
two adjacent station counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model_core import (
    Configuration,
    EnergyBreakdown,
    InvariantError,
    NonConvergenceError,
    SawtoothProfile,
    fourier_coefficients,
    l2_distance,
)

__all__ = [
    "DEFAULT_CUTOFF",
    "AusteniteField",
    "h_half_sq_fourier",
    "h_half_tail_estimate",
    "h_half_sq_realspace",
    "h_half_inner",
    "periodized_kernel",
    "strain_energy",
    "surface_energy",
    "austenite_energy",
    "total_energy",
    "l2_norm_sq",
]

DEFAULT_CUTOFF = 4096
KERNEL_IMAGES = 64
KERNEL_RTOL = 1e-6


def h_half_sq_fourier(profile: SawtoothProfile, cutoff: int = DEFAULT_CUTOFF) -> float:
    """Half-norm squared by the spectral sum over 1 <= |k| <= cutoff."""
    if cutoff < 1:
        raise InvariantError("cutoff must be at least 1")
    ks = np.arange(1, cutoff + 1)
    coeffs = fourier_coefficients(profile, ks)
    # conjugate symmetry doubles the positive modes
    return float(8.0 * np.pi**2 * np.sum(ks * np.abs(coeffs) ** 2))


def h_half_tail_estimate(profile: SawtoothProfile, cutoff: int = DEFAULT_CUTOFF) -> float:
    """Estimated spectral mass above the cutoff.

    Models |uhat(k)| ~ C / k^2 with C read off the largest computed
    k^2 |uhat(k)|, then sums 4 pi^2 k (C/k^2)^2 beyond the cutoff.
    """
    ks = np.arange(1, cutoff + 1)
    coeffs = fourier_coefficients(profile, ks)
    c_amp = float(np.max(ks**2 * np.abs(coeffs)))
    # sum_{k>K} k^-3 < 1/(2 K^2), doubled for negative modes
    return 8.0 * np.pi**2 * c_amp**2 * 0.5 / cutoff**2


def h_half_inner(
    f: SawtoothProfile, g: SawtoothProfile, cutoff: int = DEFAULT_CUTOFF
) -> float:
    """Bilinear form 4 pi^2 sum_k |k| conj(fhat) ghat (real for real data)."""
    if abs(f.period - g.period) > 1e-12 * f.period:
        raise InvariantError("h_half_inner requires equal periods")
    ks = np.arange(1, cutoff + 1)
    cf = fourier_coefficients(f, ks)
    cg = fourier_coefficients(g, ks)
    return float(8.0 * np.pi**2 * np.sum(ks * np.real(np.conj(cf) * cg)))


def periodized_kernel(
    t: np.ndarray,
    period: float,
    images: int = KERNEL_IMAGES,
    rtol: float = KERNEL_RTOL,
) -> np.ndarray:
    """sum_n 1/(t + n h)^2 for t in (0, h), via image sum plus analytic tail.

    The tail over |n| > images is replaced by the midpoint integral
    int_{images+1/2}^inf dn, whose Euler-Maclaurin remainder is bounded
    explicitly; if that bound exceeds rtol relative to the kernel the
    routine refuses rather than return an unconverged value.
    """
    t = np.asarray(t, dtype=float)
    if np.any((t <= 0) | (t >= period)):
        raise InvariantError("kernel argument must lie strictly inside (0, period)")
    h = period
    ns = np.arange(-images, images + 1)
    body = np.sum(1.0 / (t[..., None] + ns * h) ** 2, axis=-1)
    edge = (images + 0.5) * h
    tail = (1.0 / (edge + t) + 1.0 / (edge - t)) / h
    # |d/dn (nh +- t)^-2| / 24 at the integral's lower end, both branches
    tail_bound = (h / 12.0) * (1.0 / (edge + t) ** 3 + 1.0 / (edge - t) ** 3)
    value = body + tail
    if np.any(tail_bound > rtol * value):
        raise NonConvergenceError(
            "periodized kernel tail bound exceeds tolerance; raise the image count"
        )
    return value


def h_half_sq_realspace(
    profile: SawtoothProfile,
    quad_nodes: int = 4096,
    images: int = KERNEL_IMAGES,
) -> float:
    """Half-norm squared from the folded double integral.

    Midpoint sampling on an N x N periodic grid reduces, through the
    circular autocorrelation of the samples, to a single sum over grid
    offsets d of K(d h / N) * sum_i (u_i - u_{i-d})^2.  On the diagonal
    the integrand tends to the squared slope, which is 1 a.e.
    """
    if quad_nodes < 64:
        raise InvariantError("quad_nodes must be at least 64")
    h = profile.period
    n = int(quad_nodes)
    y = (np.arange(n) + 0.5) * (h / n)
    u = np.asarray(profile.evaluate(y))
    fu = np.fft.rfft(u)
    autocorr = np.fft.irfft(fu * np.conj(fu), n)  # C(d) = sum_i u_i u_{i-d}
    sum_sq = float(np.dot(u, u))
    d = np.arange(1, n)
    kvals = periodized_kernel(d * (h / n), h, images=images)
    off_diag = float(np.dot(kvals, 2.0 * sum_sq - 2.0 * autocorr[1:]))
    diag = float(n)  # integrand -> slope^2 = 1 on the diagonal
    return (h / n) ** 2 * (off_diag + diag)


def l2_norm_sq(profile: SawtoothProfile, window: tuple[float, float] | None = None) -> float:
    """Exact squared L2 norm of the profile over the window."""
    from .model_core import _window_pieces  # shared window reduction

    ys, _ = profile.nodes()
    total = 0.0
    for lo, hi in _window_pieces(profile.period, window):
        cuts = np.unique(np.concatenate((ys, [lo, hi])))
        cuts = cuts[(cuts >= lo) & (cuts <= hi)]
        va = np.asarray(profile.evaluate(cuts[:-1]))
        vb = np.asarray(profile.evaluate(cuts[1:]))
        seg = np.diff(cuts)
        total += float(np.sum(seg * (va * va + va * vb + vb * vb) / 3.0))
    return total


@dataclass(frozen=True)
class AusteniteField:
    """Harmonic extension of a boundary trace into the half-plane x <= 0.

    psi(x, y) = sum_k uhat(k) exp(2 pi i k y / h) exp(2 pi |k| x / h),
    the decay rate matching each oscillation so psi is harmonic and
    tends to the trace mean as x -> -inf.
    """

    boundary: SawtoothProfile
    mode_cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self) -> None:
        if self.mode_cutoff < 1:
            raise InvariantError("mode_cutoff must be at least 1")

    def evaluate(self, x, y) -> np.ndarray | float:
        """psi at (x, y) for x <= 0 (vectorized over broadcastable inputs)."""
        xx = np.asarray(x, dtype=float)
        yy = np.asarray(y, dtype=float)
        if np.any(xx > 0):
            raise InvariantError("the extension lives in x <= 0")
        h = self.boundary.period
        ks = np.arange(1, self.mode_cutoff + 1)
        coeffs = fourier_coefficients(self.boundary, ks)
        xb, yb = np.broadcast_arrays(xx, yy)
        shape = xb.shape
        xf = xb.reshape(-1, 1)
        yf = yb.reshape(-1, 1)
        waves = np.exp(2j * np.pi * ks * yf / h) * np.exp(2 * np.pi * ks * xf / h)
        out = self.boundary.mean() + 2.0 * np.real(waves @ coeffs)
        out = out.reshape(shape)
        return float(out) if out.ndim == 0 else out


def austenite_energy(field: AusteniteField, beta: float = 1.0) -> float:
    """2 pi beta times the Dirichlet energy of the extension.

    Assembled mode by mode from the gradient of psi:
    each mode contributes (w_y^2 + w_x^2) |c_k|^2 h / (4 pi k / h)
    with w_y = w_x = 2 pi k / h, summed over +-k.  The result must and
    does agree with beta * h_half_sq_fourier at the same cutoff.
    """
    h = field.boundary.period
    ks = np.arange(1, field.mode_cutoff + 1)
    coeffs = fourier_coefficients(field.boundary, ks)
    w = 2.0 * np.pi * ks / h
    mode_dirichlet = (w**2 + w**2) * np.abs(coeffs) ** 2 * h / (4.0 * np.pi * ks / h)
    total = float(2.0 * np.pi * beta * 2.0 * np.sum(mode_dirichlet))
    reference = beta * h_half_sq_fourier(field.boundary, field.mode_cutoff)
    scale = max(abs(total), abs(reference), 1e-300)
    if abs(total - reference) > 1e-12 * scale:
        raise InvariantError("harmonic-extension energy disagrees with the trace half-norm")
    return total


def strain_energy(config: Configuration) -> float:
    """Exact shear energy of the linear-in-x interpolation.

    For u linear in x on [x_j, x_{j+1}], int int u_x^2 equals
    ||p_{j+1} - p_j||_{L2}^2 / (x_{j+1} - x_j), summed over cells.
    """
    total = 0.0
    for j in range(len(config.stations) - 1):
        dx = config.stations[j + 1] - config.stations[j]
        dist = l2_distance(config.profiles[j + 1], config.profiles[j])
        total += dist * dist / dx
    return total


def surface_energy(config: Configuration) -> float:
    """epsilon times the x-integral of the interface count.

    Interfaces can appear and disappear inside a cell, so the cell is
    charged at the larger of its two endpoint counts; a single-station
    configuration is treated as constant in x.
    """
    eps = config.params.epsilon
    L = config.params.length_L
    counts = [p.interface_count() for p in config.profiles]
    if len(counts) == 1:
        return eps * L * counts[0]
    total = 0.0
    for j in range(len(counts) - 1):
        dx = config.stations[j + 1] - config.stations[j]
        total += dx * max(counts[j], counts[j + 1])
    return eps * total


def total_energy(config: Configuration, cutoff: int = DEFAULT_CUTOFF) -> EnergyBreakdown:
    """Austenite + strain + surface breakdown for a configuration."""
    beta = config.params.beta
    austenite = beta * h_half_sq_fourier(config.boundary_profile, cutoff)
    return EnergyBreakdown.from_parts(
        austenite, strain_energy(config), surface_energy(config)
    )
