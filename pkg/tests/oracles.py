"""Independent oracles used to pin expected values in the test suite.

Everything here deliberately avoids the package's own fast paths:
plain dense quadrature, high-precision special functions, and brute
force enumeration.  Tests compare the library against these.
"""

import mpmath as mp
import numpy as np


def quad_fourier_coefficient(profile, k: int, nodes: int = 10**6) -> complex:
    """Midpoint-rule coefficient (1/h) int u(y) e^{-2 pi i k y/h} dy."""
    h = profile.period
    y = (np.arange(nodes) + 0.5) * (h / nodes)
    u = np.asarray(profile.evaluate(y))
    return complex(np.mean(u * np.exp(-2j * np.pi * k * y / h)))


def quad_l2_distance(p, q, nodes: int = 10**6, window=None) -> float:
    """Midpoint-rule L2 distance between two profiles."""
    h = p.period
    if window is None:
        window = (0.0, h)
    a, b = window
    y = a + (np.arange(nodes) + 0.5) * ((b - a) / nodes)
    d = np.asarray(p.evaluate(y)) - np.asarray(q.evaluate(y))
    return float(np.sqrt(np.sum(d * d) * (b - a) / nodes))


def quad_mean_square(p, nodes: int = 10**6) -> float:
    h = p.period
    y = (np.arange(nodes) + 0.5) * (h / nodes)
    u = np.asarray(p.evaluate(y))
    return float(np.mean(u * u))


def h_half_sq_closed_form(profile, dps: int = 30) -> float:
    """Half-norm squared 4 pi^2 sum_k |k| |uhat(k)|^2 in closed form.

    For a unit-slope sawtooth the curvature is a sum of point masses
    2 s_j delta(y - c_j), which turns the mode sum into a finite
    combination of trilogarithm values on the unit circle:

        ||u||^2 = (h^2 / (2 pi^2)) sum_{j,l} (2 s_j)(2 s_l)
                   Re Li_3(exp(2 pi i (c_j - c_l)/h)) / 4 * 4

    evaluated with mpmath at high precision.  Completely independent of
    the package's truncated spectral sums.
    """
    with mp.workdps(dps):
        h = mp.mpf(profile.period)
        cs = [mp.mpf(c) for c in profile.corners]
        ds = [mp.mpf(2 * int(s)) for s in profile.slope_after_corners()]
        total = mp.mpf(0)
        for j in range(len(cs)):
            for l in range(len(cs)):
                z = mp.exp(2j * mp.pi * (cs[j] - cs[l]) / h)
                total += ds[j] * ds[l] * mp.re(mp.polylog(3, z))
        return float(h**2 / (2 * mp.pi**2) * total)


def zeta3() -> float:
    with mp.workdps(30):
        return float(mp.zeta(3))


C0_EXACT = float(14 * mp.zeta(3) / mp.pi**2)  # cell constant 14 zeta(3)/pi^2


def brute_force_even_m(beta, epsilon, L, h, c0, m_max=1000):
    """Exhaustive minimizer of beta c0 h^2 / M + epsilon L M over even M."""
    ms = np.arange(2, m_max + 1, 2)
    vals = beta * c0 * h * h / ms + epsilon * L * ms
    best = vals.min()
    winners = ms[vals <= best * (1 + 1e-12)]
    return list(int(m) for m in winners), float(best)


def quad_screened_energy(cells, alpha: float, nodes_per_cell: int = 400) -> float:
    """Dense Gauss-Legendre evaluation of -int int w w' e^{-alpha|y-y'|}.

    cells: list of (a, b, va, vb) linear pieces.  Slow and simple.
    """
    xs, ws, vals = [], [], []
    gx, gw = np.polynomial.legendre.leggauss(nodes_per_cell)
    for (a, b, va, vb) in cells:
        half = (b - a) / 2.0
        mid = (a + b) / 2.0
        x = mid + half * gx
        t = (x - a) / (b - a)
        xs.append(x)
        ws.append(half * gw)
        vals.append(va + (vb - va) * t)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    v = np.concatenate(vals)
    ker = np.exp(-alpha * np.abs(x[:, None] - x[None, :]))
    vw = v * w
    return float(-(vw @ ker @ vw))
