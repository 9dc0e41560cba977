"""Tests for single-photon spectra: transfer matrices, Green's route, EIT."""

import math

import numpy as np
import pytest

from wqed import modes, spectra1d as sp
from wqed.types import AtomChain, Coupling

SYM = Coupling(gamma1d=1.0)


def test_atom_rt_perfect_mirror():
    r, t, tb = sp.atom_rt(0.0, SYM)
    assert r == pytest.approx(-1.0)
    assert t == pytest.approx(0.0)
    assert tb == pytest.approx(0.0)


def test_atom_rt_fully_chiral_pi_phase():
    c = Coupling(gamma1d=1.0, gamma_right=1.0, gamma_left=0.0)
    r, t, _ = sp.atom_rt(0.0, c)
    assert r == pytest.approx(0.0)
    assert t == pytest.approx(-1.0)


def test_atom_rt_equal_loss():
    c = Coupling(gamma1d=1.0, gamma_nr=1.0)
    _, t, _ = sp.atom_rt(0.0, c)
    assert abs(t) ** 2 == pytest.approx(0.25)


def test_flux_conservation():
    rng = np.random.default_rng(0)
    for _ in range(50):
        w = rng.uniform(-8, 8)
        r, t, _ = sp.atom_rt(w, SYM)
        assert abs(r) ** 2 + abs(t) ** 2 == pytest.approx(1.0, abs=1e-9)
        c = Coupling(gamma1d=1.0, gamma_right=0.9, gamma_left=0.1)
        r, t, _ = sp.atom_rt(w, c)
        assert abs(r) ** 2 + abs(t) ** 2 == pytest.approx(1.0, abs=1e-9)


def test_transfer_single_atom_is_atom_matrix():
    m = sp.transfer_chain(AtomChain((0.0,)), SYM, 0.7)
    r, t, tb = sp.atom_rt(0.7, SYM)
    expected = np.array([[(t * tb - r * r) / tb, r / tb], [-r / tb, 1 / tb]])
    assert np.allclose(m, expected, atol=1e-14)


def test_transfer_determinant_identity():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        chain = AtomChain(tuple(np.sort(rng.uniform(0, 5, n))))
        c = Coupling(gamma1d=1.0, gamma_nr=rng.uniform(0, 0.5),
                     gamma_right=0.7, gamma_left=0.3)
        w = rng.uniform(-5, 5)
        m = sp.transfer_chain(chain, c, w)
        _, t, tb = sp.atom_rt(w, c)
        assert abs(np.linalg.det(m) - (t / tb) ** n) < 1e-10
        # symmetric coupling: unit determinant
        ms = sp.transfer_chain(chain, SYM, w)
        assert abs(np.linalg.det(ms) - 1.0) < 1e-12


def test_anti_bragg_reflection_suppressed():
    c = SYM
    r_anti, _ = sp.chain_rt(AtomChain.periodic(2, math.pi / 2), c, 0.5)
    r_bragg, _ = sp.chain_rt(AtomChain.periodic(2, math.pi), c, 0.5)
    assert abs(r_anti) < abs(r_bragg)


def test_chain_rt_empty_chain():
    r, t = sp.chain_rt(AtomChain(()), SYM, 1.0)
    assert r == 0.0 and t == 1.0


def test_chain_rt_bragg_lorentzian():
    c = Coupling(gamma1d=1.0, gamma_nr=0.1)
    _, t = sp.chain_rt(AtomChain.periodic(10, math.pi), c, 0.0)
    assert abs(t) ** 2 == pytest.approx((0.1 / 10.1) ** 2, rel=1e-9)


def test_chain_vs_green_random():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(1, 8))
        chain = AtomChain(tuple(np.sort(rng.uniform(0, 6, n))))
        c = Coupling(gamma1d=1.0, gamma_nr=rng.uniform(0, 0.5))
        w = rng.uniform(-5, 5)
        r1, t1 = sp.chain_rt(chain, c, w)
        r2, t2 = sp.rt_from_green(chain, c, w)
        assert abs(r1 - r2) < 1e-10 and abs(t1 - t2) < 1e-10


def test_closed_form_matches_matrix_product():
    c = Coupling(gamma1d=1.0, gamma_nr=0.05)
    for n in (1, 2, 9, 60, 200):
        for phi in (0.3, 1.2, 2.6):
            for w in (-2.0, 0.4, 3.7):
                r1, t1 = sp.chain_rt(AtomChain.periodic(n, phi), c, w)
                r2, t2 = sp.chain_rt_closed(n, phi, c, w)
                assert abs(r1 - r2) < 1e-9 and abs(t1 - t2) < 1e-9


def test_bragg_insensitivity():
    c = Coupling(gamma1d=1.0, gamma_nr=0.2)
    for n in (1, 3, 12, 40):
        for w in (-4.0, 0.0, 1.5):
            r1, t1 = sp.chain_rt(AtomChain.periodic(n, math.pi), c, w, markovian=True)
            r2, t2 = sp.dicke_rt(n, w, c)
            assert abs(r1 - r2) < 1e-10 and abs(t1 - t2) < 1e-10


def test_dicke_rt_values():
    r, _ = sp.dicke_rt(1, 0.0, SYM)
    assert r == pytest.approx(-1.0)
    c = Coupling(gamma1d=1.0, gamma_nr=1.0)
    _, t = sp.dicke_rt(3, 0.0, c)
    assert abs(t) == pytest.approx(0.25)


def test_dicke_hwhm_scales_with_n():
    from scipy.optimize import brentq

    c = SYM
    for n in (1, 2, 5, 10):
        r0 = abs(sp.dicke_rt(n, 0.0, c)[0]) ** 2
        half = brentq(lambda w: abs(sp.dicke_rt(n, w, c)[0]) ** 2 - r0 / 2, 0.0, 100.0 * n)
        assert half == pytest.approx(n * 1.0, rel=1e-6)


def test_green_reproduces_dicke_single_atom():
    c = Coupling(gamma1d=1.0, gamma_nr=0.3)
    for w in (-2.0, 0.0, 1.0):
        r1, t1 = sp.rt_from_green(AtomChain((0.0,)), c, w)
        r2, t2 = sp.dicke_rt(1, w, c)
        assert abs(r1 - r2) < 1e-12 and abs(t1 - t2) < 1e-12


def test_green_equals_chain_on_grid():
    c = SYM
    chain = AtomChain.periodic(5, 1.2)
    for w in np.linspace(-10, 10, 200):
        r1, t1 = sp.chain_rt(chain, c, w)
        r2, t2 = sp.rt_from_green(chain, c, w)
        assert abs(r1 - r2) < 1e-10 and abs(t1 - t2) < 1e-10


def test_green_resonant_bragg_equals_dicke():
    c = Coupling(gamma1d=1.0, gamma_nr=0.1)
    r1, t1 = sp.rt_from_green(AtomChain.periodic(4, math.pi), c, 0.0)
    r2, t2 = sp.dicke_rt(4, 0.0, c)
    assert abs(r1 - r2) < 1e-10 and abs(t1 - t2) < 1e-10


def test_forward_backward_moduli_equal():
    c = Coupling(gamma1d=1.0, gamma_right=0.85, gamma_left=0.15, gamma_nr=0.2)
    chain = AtomChain.periodic(5, 0.9)
    for w in (-3.0, 0.2, 4.0):
        _, t = sp.chain_rt(chain, c, w)
        tb = sp.t_backward(chain, c, w)
        assert abs(abs(t) - abs(tb)) < 1e-12


def test_optical_depth():
    assert sp.optical_depth(math.exp(-0.5)) == pytest.approx(1.0)
    assert sp.optical_depth(1.0) == 0.0
    assert sp.optical_depth(0.0) == math.inf
    # dilute non-Bragg估 regime: independent atoms, OD ~ 2 N beta
    beta = 0.01
    t_res = (1.0 - beta) ** 1000
    assert sp.optical_depth(t_res) == pytest.approx(20.0, abs=0.15)


def test_ensemble_full_and_empty_lattice():
    c = Coupling(gamma1d=1.0, gamma_nr=0.2)
    grid = np.linspace(-5, 5, 7)
    spec = sp.EnsembleSpec(sites=6, fill=1.0, trials=3, seed=1, phase=0.8, coupling=c)
    res = sp.ensemble_bragg_reflectance(spec, grid)
    chain = AtomChain.periodic(6, 0.8)
    for i, w in enumerate(grid):
        r, _ = sp.chain_rt(chain, c, w)
        assert abs(res.mean_R[i] - abs(r) ** 2) < 1e-12
    empty = sp.ensemble_bragg_reflectance(
        sp.EnsembleSpec(sites=6, fill=0.0, trials=3, seed=1, phase=0.8, coupling=c), grid)
    assert np.max(empty.mean_R) == 0.0


def test_ensemble_determinism():
    c = Coupling(gamma1d=1.0, gamma_nr=3.0)
    grid = np.linspace(-20, 20, 11)
    spec = sp.EnsembleSpec(sites=50, fill=0.4, trials=12, seed=99, phase=3.1, coupling=c)
    a = sp.ensemble_bragg_reflectance(spec, grid)
    b = sp.ensemble_bragg_reflectance(spec, grid)
    assert np.array_equal(a.mean_R, b.mean_R)
    assert np.array_equal(a.stderr_R, b.stderr_R)


# ---------------------------------------------------------------------------
# EIT


def eit_modeset(n=5, phi=math.pi / 2, gamma1d=0.5):
    h = modes.effective_hamiltonian(AtomChain.periodic(n, phi), Coupling(gamma1d=gamma1d))
    return modes.eigenmodes(h)


def test_eit_strong_control_transparent():
    ms = eit_modeset()
    t = sp.eit_transmission(ms, np.linspace(-3, 3, 21), omega_c=1e5, gamma=1.0)
    assert np.max(np.abs(np.abs(t) - 1.0)) < 1e-6


def test_eit_exact_transparency_on_two_photon_resonance():
    ms = eit_modeset()
    t = sp.eit_transmission(ms, 0.0, omega_c=2.0, gamma=0.7)
    assert abs(t) == pytest.approx(1.0, abs=1e-12)


def test_eit_transparency_window_shape():
    # N=5, d = lambda_p/4, control Rabi 2*Gamma, gamma1d = 0.5*gamma
    ms = eit_modeset(n=5, phi=math.pi / 2, gamma1d=0.5)
    delta = np.linspace(-6, 6, 241)
    t2 = np.abs(sp.eit_transmission(ms, delta, omega_c=4.0, gamma=1.0)) ** 2
    center = t2[120]
    shoulder = min(t2[np.argmin(np.abs(delta - 2.2))], t2[np.argmin(np.abs(delta + 2.2))])
    assert center > 0.99
    assert shoulder < 0.6  # absorption dips flank the window
    assert t2[0] > 0.8 and t2[-1] > 0.8  # transparent far away


def test_group_velocity_independent_of_configuration():
    for phi in (0.3, math.pi / 2, 2.0):
        ms = eit_modeset(n=7, phi=phi, gamma1d=0.5)
        vg = sp.group_velocity_over_d(ms, omega_c=2.0)
        assert vg == pytest.approx(2.0**2 / (4 * 0.5), rel=1e-9)


def test_spectrum_container():
    chain = AtomChain.periodic(3, 1.0)
    res = sp.spectrum(chain, SYM, np.linspace(-4, 4, 9))
    assert np.allclose(res.R + res.T, 1.0, atol=1e-9)
    assert np.max(np.abs(np.abs(res.t_fwd) - np.abs(res.t_bwd))) < 1e-12
