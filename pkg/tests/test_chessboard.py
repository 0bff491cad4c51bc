"""Tests for the reflection / screened-kernel machinery."""

import json
import math

import numpy as np
import pytest

from twinstripe import chessboard as cb
from twinstripe import energy, model_core, one_dim
from twinstripe.model_core import InvariantError, NonConvergenceError

import oracles


def test_segment_validation():
    with pytest.raises(InvariantError):
        cb.Segment((), ())
    with pytest.raises(InvariantError):
        cb.Segment((1.0,), (0.0,))
    with pytest.raises(InvariantError):
        cb.Segment((1.0, -0.5), (0.0, 1.0, 0.0))
    seg = cb.Segment.from_breakpoints([0.0, 0.5, 1.0], [0.0, 1.0, 0.0])
    assert seg.length == pytest.approx(1.0)
    with pytest.raises(InvariantError):
        cb.Segment.from_breakpoints([0.1, 1.0], [0.0, 1.0])


def test_reflect_examples():
    ramp = cb.Segment.linear(0.0, 1.0, 1.0)
    mirrored = cb.reflect(ramp)
    assert mirrored.values == (1.0, 0.0)
    bump = cb.Segment((0.5, 0.5), (0.0, 1.0, 0.0))
    assert cb.reflect(bump) == bump
    rng = np.random.default_rng(1)
    for _ in range(20):
        seg = cb.random_segment(rng)
        assert cb.reflect(cb.reflect(seg)) == seg


def test_juxtapose_single_and_tent():
    ramp = cb.Segment.linear(0.0, 1.0, 1.0)
    pl = cb.juxtapose((ramp,))
    assert pl.domain == (0.0, 1.0)
    tent = cb.juxtapose((ramp, cb.reflect(ramp)))
    assert tent.domain == (0.0, 2.0)
    assert tent.cells.shape == (2, 4)
    # mirror gluing: values rise to 1 at the join then fall back
    assert tent.cells[0, 3] == 1.0 and tent.cells[1, 2] == 1.0 and tent.cells[1, 3] == 0.0
    rng = np.random.default_rng(2)
    segs = [cb.random_segment(rng) for _ in range(4)]
    pl = cb.juxtapose(segs, z_start=-1.0)
    assert pl.length == pytest.approx(sum(s.length for s in segs), rel=1e-12)
    assert pl.domain[0] == pytest.approx(-1.0)


def test_screened_energy_zero_and_constant():
    assert cb.screened_energy(cb.Segment.constant(0.0, 2.0), 1.3) == 0.0
    for alpha in (0.3, 1.0, 5.0):
        for c, T in ((1.0, 1.0), (-0.7, 2.3)):
            got = cb.screened_energy(cb.Segment.constant(c, T), alpha)
            want = -c * c * (2 * T / alpha - 2 * (1 - math.exp(-alpha * T)) / alpha**2)
            assert got == pytest.approx(want, rel=1e-13)


def test_screened_energy_against_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(6):
        seg = cb.random_segment(rng)
        pl = cb.juxtapose((seg, cb.reflect(seg)))
        for alpha in (0.3, 1.0, 5.0):
            got = cb.screened_energy(pl, alpha)
            want = oracles.quad_screened_energy(pl.cells, alpha, nodes_per_cell=800)
            assert got == pytest.approx(want, rel=5e-6, abs=1e-6)


def test_quadrature_converges_to_closed_form():
    # the oracle's error comes from the kernel kink on the diagonal;
    # it shrinks like nodes^-2 toward the closed-form value
    seg = cb.Segment.linear(-0.5, 0.5, 1.0)
    exact = cb.screened_energy(seg, 0.51)
    errs = [
        abs(oracles.quad_screened_energy(seg.cells(), 0.51, nodes_per_cell=n) - exact)
        for n in (200, 400, 800)
    ]
    assert errs[0] > 3.0 * errs[1] > 9.0 * errs[2]


def test_screened_energy_small_alpha_branch():
    # alpha*T far below the series/direct switchover
    seg = cb.Segment.linear(-0.5, 0.5, 1.0)
    got = cb.screened_energy(seg, 1e-3)
    want = oracles.quad_screened_energy(seg.cells(), 1e-3, nodes_per_cell=800)
    assert got == pytest.approx(want, rel=2e-5)
    # continuity across the branch point at alpha*T = 1/2
    lo = cb.screened_energy(seg, 0.5 - 1e-9)
    hi = cb.screened_energy(seg, 0.5 + 1e-9)
    assert abs(hi - lo) < 1e-10


def test_screened_energy_never_positive():
    rng = np.random.default_rng(4)
    for _ in range(100):
        seg = cb.random_segment(rng)
        alpha = float(10.0 ** rng.uniform(-1, 1))
        assert cb.screened_energy(seg, alpha) <= 1e-12


def test_screened_energy_rejects_bad_input():
    seg = cb.Segment.constant(1.0, 1.0)
    with pytest.raises(InvariantError):
        cb.screened_energy(seg, 0.0)
    with pytest.raises(InvariantError):
        cb.PiecewiseLinear([[0.0, 1.0, 0.0, 1.0], [0.5, 1.5, 0.0, 1.0]])


def test_window_average_matches_explicit_chain():
    rng = np.random.default_rng(11)
    for _ in range(3):
        seg = cb.random_segment(rng)
        for alpha in (0.3, 2.0):
            for copies in (2, 4, 8, 32):
                items = [seg if i % 2 == 0 else cb.reflect(seg) for i in range(copies)]
                chain = cb.juxtapose(items)
                direct = cb.screened_energy(chain, alpha) / chain.length
                fast = cb._window_average(seg, alpha, copies)
                assert fast == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_e_infinity_constant_segment():
    for alpha in (0.5, 2.0):
        for c, T in ((0.8, 1.3), (-0.4, 0.6)):
            got = cb.e_infinity(cb.Segment.constant(c, T), alpha)
            assert got == pytest.approx(-2 * c * c / alpha, rel=1e-12)


def test_e_infinity_reflection_invariant():
    rng = np.random.default_rng(12)
    for _ in range(5):
        seg = cb.random_segment(rng)
        for alpha in (0.5, 2.0):
            a = cb.e_infinity(seg, alpha)
            b = cb.e_infinity(cb.reflect(seg), alpha)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-14)


def test_e_infinity_fast_oscillation_averages_out():
    """A zero-mean segment with period much shorter than 1/alpha
    contributes almost nothing per unit length, unlike a constant of
    the same amplitude."""
    fast = cb.Segment.linear(-1.0, 1.0, 0.02)
    got = cb.e_infinity(fast, 1.0)
    assert abs(got) < 1e-3
    assert abs(cb.e_infinity(cb.Segment.constant(1.0, 0.02), 1.0)) > 1.0


def test_e_infinity_reports_nonconvergence():
    with pytest.raises(NonConvergenceError):
        cb.e_infinity(cb.Segment.constant(1.0, 1.0), 0.01, doublings=4)
    with pytest.raises(InvariantError):
        cb.e_infinity(cb.Segment.constant(1.0, 1.0), 1.0, doublings=2)


def test_rp_equality_for_symmetric_sequence():
    rng = np.random.default_rng(13)
    plus = tuple(cb.random_segment(rng) for _ in range(2))
    minus = tuple(s.reflect() for s in reversed(plus))
    rep = cb.check_rp_inequality(minus, plus, 1.0)
    assert abs(rep.slack) <= 1e-10
    assert rep.ok


def test_rp_single_segment_reduction():
    # empty left side: the bound degenerates to comparing one segment
    # against half the energy of its symmetrized double
    rng = np.random.default_rng(14)
    seg = cb.random_segment(rng)
    rep = cb.check_rp_inequality(None, (seg,), 1.0)
    lhs = cb.screened_energy(cb.juxtapose((seg,)), 1.0)
    rhs = 0.5 * cb.screened_energy(
        cb.juxtapose((seg.reflect(), seg), z_start=-seg.length), 1.0
    )
    assert rep.lhs == pytest.approx(lhs, rel=1e-14)
    assert rep.rhs == pytest.approx(rhs, rel=1e-14)
    assert rep.slack >= -1e-9


def test_rp_inequality_random_trials():
    rng = np.random.default_rng(15)
    for _ in range(100):
        minus = tuple(cb.random_segment(rng) for _ in range(int(rng.integers(1, 4))))
        plus = tuple(cb.random_segment(rng) for _ in range(int(rng.integers(1, 4))))
        for alpha in (0.1, 1.0, 10.0):
            rep = cb.check_rp_inequality(minus, plus, alpha)
            assert rep.slack >= -1e-9


def test_chessboard_bound_single_segment():
    rng = np.random.default_rng(16)
    for _ in range(10):
        seg = cb.random_segment(rng)
        rep = cb.check_chessboard_bound((seg,), 1.0)
        assert rep.slack >= -1e-9
        assert rep.bound == pytest.approx(seg.length * cb.e_infinity(seg, 1.0), rel=1e-12)


def test_chessboard_bound_random_sequences():
    rng = np.random.default_rng(17)
    for _ in range(25):
        seq = tuple(cb.random_segment(rng) for _ in range(6))
        for alpha in (0.5, 2.0):
            rep = cb.check_chessboard_bound(seq, alpha)
            assert rep.ok
            assert rep.slack >= -1e-9


def test_chessboard_bound_tightens_for_repeated_symmetric_segment():
    sym = cb.Segment((0.25, 0.25), (0.1, 0.9, 0.1))
    rels = []
    for n in (2, 8, 32):
        rep = cb.check_chessboard_bound(tuple(sym for _ in range(n)), 1.0)
        rels.append(rep.rel_slack)
    assert rels[0] > rels[1] > rels[2]
    assert rels[2] < 0.1


def test_master_equality_for_equispaced_profile():
    params = model_core.ModelParams(beta=1.0, epsilon=1e-2, length_L=1.0, height_h=1.0)
    for m in (2, 4, 8):
        rep = cb.check_master_inequality(one_dim.make_w_m(m, params))
        assert max(abs(s) for s in rep.slack) < 1e-6
        assert rep.ok
        # span sum of the integrated version collapses to c0 h^2 / M
        assert rep.c0_quadratic == pytest.approx(one_dim.C0 / m, rel=1e-12)
        assert rep.integrated_rhs == pytest.approx(rep.c0_quadratic, rel=1e-6)


def test_master_inequality_random_profiles():
    rng = np.random.default_rng(18)
    for _ in range(20):
        prof = model_core.random_profile(rng, 1.0)
        rep = cb.check_master_inequality(prof)
        assert rep.ok
        assert rep.min_slack >= -1e-9
        assert rep.integrated_lhs >= rep.integrated_rhs - 1e-9
        assert rep.integrated_rhs == pytest.approx(rep.c0_quadratic, rel=1e-6)
        got = energy.h_half_sq_fourier(prof)
        assert rep.integrated_lhs == pytest.approx(got, rel=1e-4)


def test_screened_mismatch_spectral_oracle():
    """The whole-profile mismatch has a spectral series: each Fourier
    mode contributes 8h |u_k|^2 w^2 / (alpha (alpha^2 + w^2)) with
    w = 2 pi k / h."""
    rng = np.random.default_rng(19)
    for _ in range(5):
        prof = model_core.random_profile(rng, 1.0)
        ks = np.arange(1, 32769)
        coeffs = model_core.fourier_coefficients(prof, ks)
        w = 2.0 * np.pi * ks / prof.period
        for alpha in (0.1, 1.0, 10.0):
            spectral = float(
                np.sum(8.0 * prof.period * np.abs(coeffs) ** 2 * w**2 / (alpha * (alpha**2 + w**2)))
            )
            got = float(cb.screened_mismatch(prof, alpha)[0])
            assert got == pytest.approx(spectral, rel=1e-4)


def test_single_bump_alpha_integral_hits_c0():
    for width in (0.3, 1.0, 2.5):
        rising = cb.bump_alpha_energy(0.0, width, width)
        falling = cb.bump_alpha_energy(width, 0.0, width)
        want = one_dim.C0 * width * width
        assert rising == pytest.approx(want, rel=1e-5)
        assert falling == pytest.approx(want, rel=1e-5)


def test_kernel_identity():
    for entry in cb.kernel_identity_check():
        assert entry["rel_error"] <= 1e-6


def test_verify_suite_smoke():
    report = cb.verify_suite(trials=25, seed=7)
    for family in ("rp", "chessboard", "master"):
        assert report[family]["count"] == 75
        assert report[family]["min_slack"] >= -1e-9
    json.dumps(report)
