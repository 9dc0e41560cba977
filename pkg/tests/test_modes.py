"""Tests for effective Hamiltonians, eigenmodes, resolvents and dispersions."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wqed import modes
from wqed._polylog import polylog_circle
from wqed.types import AtomChain, Coupling


def random_chain(rng, n=None, span=6.0):
    n = n or int(rng.integers(1, 9))
    return AtomChain(tuple(np.sort(rng.uniform(0.0, span, size=n))))


# ---------------------------------------------------------------------------
# effective_hamiltonian


def test_single_atom_hamiltonian():
    h = modes.effective_hamiltonian(AtomChain((0.0,)), Coupling(gamma1d=1.0))
    assert h.shape == (1, 1)
    assert h[0, 0] == pytest.approx(-1j)


def test_two_atoms_phi_zero_eigenvalues():
    c = Coupling(gamma1d=1.0, gamma_nr=0.3)
    h = modes.effective_hamiltonian(AtomChain.periodic(2, 0.0), c)
    assert h[0, 1] == pytest.approx(-1j)  # off-diagonal -i gamma1d
    vals = np.sort_complex(np.linalg.eigvals(h))
    expected = np.sort_complex(np.array([-0.3j, -2j - 0.3j]))
    assert np.allclose(vals, expected, atol=1e-12)


def test_symmetric_coupling_form():
    phi = 0.8
    c = Coupling(gamma1d=1.0, gamma_nr=0.2)
    h = modes.effective_hamiltonian(AtomChain.periodic(4, phi), c)
    m, n = np.meshgrid(range(4), range(4), indexing="ij")
    expected = -1j * np.exp(1j * phi * np.abs(m - n))
    np.fill_diagonal(expected, -1j * 1.2)
    assert np.allclose(h, expected, atol=1e-14)


def test_fully_chiral_is_lower_triangular():
    c = Coupling(gamma1d=1.0, gamma_right=1.0, gamma_left=0.0, gamma_nr=0.1)
    h = modes.effective_hamiltonian(AtomChain.periodic(4, 0.7), c)
    assert h[0, 1] == 0.0
    assert np.allclose(np.triu(h, k=1), 0.0)
    # triangularity: all eigenvalues pinned to the diagonal
    assert np.allclose(np.linalg.eigvals(h), -1.1j, atol=1e-12)


def test_nonmarkovian_requires_omega():
    c = Coupling(gamma1d=1.0, gamma_over_omega0=1e-3, markovian=False)
    with pytest.raises(ValueError):
        modes.effective_hamiltonian(AtomChain.periodic(2, 1.0), c)
    h = modes.effective_hamiltonian(AtomChain.periodic(2, 1.0), c, omega=2.0)
    phase = 1.0 * (1.0 + 2.0 * 1e-3)
    assert h[1, 0] == pytest.approx(-1j * np.exp(1j * phase))


def test_negative_rates_rejected():
    with pytest.raises(ValueError):
        Coupling(gamma1d=-1.0)
    with pytest.raises(ValueError):
        Coupling(gamma1d=1.0, gamma_nr=-0.1)
    with pytest.raises(ValueError):
        Coupling(gamma1d=1.0, gamma_right=0.8, gamma_left=0.1)


# ---------------------------------------------------------------------------
# eigenmodes


def test_dicke_limit_single_superradiant_mode():
    h = modes.effective_hamiltonian(AtomChain.periodic(10, 0.0), Coupling(gamma1d=1.0))
    ms = modes.eigenmodes(h)
    assert ms.eigenvalues[0] == pytest.approx(-10j, abs=1e-9)
    assert np.allclose(ms.eigenvalues[1:], 0.0, atol=1e-9)


def test_single_atom_eigenvalue():
    h = modes.effective_hamiltonian(AtomChain((0.0,)), Coupling(gamma1d=1.0, gamma_nr=0.4))
    ms = modes.eigenmodes(h)
    assert ms.eigenvalues[0] == pytest.approx(-1.4j)


def test_darkest_mode_matches_estimate_n10():
    h = modes.effective_hamiltonian(AtomChain.periodic(10, 0.1), Coupling(gamma1d=1.0))
    darkest = modes.eigenmodes(h).eigenvalues[-1]
    est = modes.subradiant_estimate(1, 10, 0.1)
    assert -darkest.imag == pytest.approx(est, rel=0.25)


def test_nonconjugated_orthonormality():
    rng = np.random.default_rng(7)
    chain = random_chain(rng, n=6)
    ms = modes.eigenmodes(modes.effective_hamiltonian(chain, Coupling(gamma1d=1.0)))
    if ms.near_degenerate.any():
        pytest.skip("near-degenerate spectrum")
    p = ms.eigenvectors
    gram = p @ p.T  # no conjugation
    assert np.allclose(gram, np.eye(ms.n), atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6))
def test_trace_invariance(n, seed):
    rng = np.random.default_rng(seed)
    chain = AtomChain(tuple(np.sort(rng.uniform(0, 8, size=n))))
    gnr = float(rng.uniform(0, 1))
    h = modes.effective_hamiltonian(chain, Coupling(gamma1d=1.0, gamma_nr=gnr))
    ms = modes.eigenmodes(h)
    assert abs(ms.trace_sum() - (-1j * n * (1.0 + gnr))) < 1e-9 * n


# ---------------------------------------------------------------------------
# greens_matrix


def test_greens_single_atom():
    h = modes.effective_hamiltonian(AtomChain((0.0,)), Coupling(gamma1d=1.0, gamma_nr=0.2))
    g = modes.greens_matrix(h, 0.5)
    assert g[0, 0] == pytest.approx(1.0 / (0.5 + 1.2j))


def test_greens_identity_random():
    rng = np.random.default_rng(3)
    chain = random_chain(rng, n=5)
    h = modes.effective_hamiltonian(chain, Coupling(gamma1d=1.0))
    g = modes.greens_matrix(h, 1.3)
    assert np.max(np.abs(g @ (1.3 * np.eye(5) - h) - np.eye(5))) < 1e-12


def test_greens_resonance_at_superradiant_pole():
    h = modes.effective_hamiltonian(AtomChain.periodic(3, 0.0), Coupling(gamma1d=1.0))
    near = modes.greens_matrix(h, -3j + 1e-3)
    far = modes.greens_matrix(h, -3j + 1.0)
    assert np.max(np.abs(near)) > 100 * np.max(np.abs(far))


def test_greens_singularity_error():
    h = modes.effective_hamiltonian(AtomChain((0.0,)), Coupling(gamma1d=1.0))
    with pytest.raises(modes.SingularFrequencyError):
        modes.greens_matrix(h, -1j)


def test_greens_spectral_expansion():
    rng = np.random.default_rng(11)
    chain = random_chain(rng, n=6)
    h = modes.effective_hamiltonian(chain, Coupling(gamma1d=1.0))
    ms = modes.eigenmodes(h)
    p = ms.eigenvectors
    for _ in range(20):
        w = complex(rng.uniform(-4, 4), rng.uniform(0.5, 2.0))
        g = modes.greens_matrix(h, w)
        expansion = sum(np.outer(p[i], p[i]) / (w - ms.eigenvalues[i]) for i in range(ms.n))
        assert np.max(np.abs(g - expansion)) < 1e-9


# ---------------------------------------------------------------------------
# tridiagonal inverse


def test_tridiagonal_entries_quarter_wave():
    ht = modes.tridiagonal_inverse_oracle(2, math.pi / 2, gamma1d=1.0)
    assert ht[0, 0] == pytest.approx(0.5j)
    assert ht[0, 1] == pytest.approx(0.5)


@pytest.mark.parametrize("phi", [0.3, 1.0, 2.0])
def test_tridiagonal_identity(phi):
    for n in (1, 2, 6, 17, 50):
        h = modes.effective_hamiltonian(AtomChain.periodic(n, phi), Coupling(gamma1d=1.0))
        ht = modes.tridiagonal_inverse_oracle(n, phi)
        assert np.max(np.abs(h @ ht - np.eye(n))) < 1e-12


def test_tridiagonal_bragg_excluded():
    with pytest.raises(modes.BraggDegenerateError):
        modes.tridiagonal_inverse_oracle(4, math.pi)


# ---------------------------------------------------------------------------
# dispersions


def test_guided_dispersion_gap_is_evanescent():
    phi = 1.1
    bands = modes.band_and_bragg(phi)
    inside = 0.5 * (bands["gap_lo"] + bands["gap_hi"])
    kd = modes.dispersion_guided(inside, phi)
    assert kd.imag > 1e-6
    outside = bands["gap_hi"] + 1.0
    assert abs(modes.dispersion_guided(outside, phi).imag) < 1e-9


def test_guided_dispersion_free_light_limit():
    kd = modes.dispersion_guided(0.7, 1.3, gamma1d=1e-12)
    assert kd == pytest.approx(1.3, abs=1e-9)


def test_guided_dispersion_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(40):
        w = complex(rng.uniform(-4, 4), rng.uniform(-0.5, 0.5))
        phi = rng.uniform(0.2, 2.9)
        kd = modes.dispersion_guided(w, phi, gamma1d=1.0, delta_omega=0.1, gamma=0.2)
        back = modes.omega_of_k(kd, phi, gamma1d=1.0, delta_omega=0.1, gamma=0.2)
        assert abs(back - w) < 1e-10


def test_polylog_constants():
    assert polylog_circle(2, 0.0).real == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert polylog_circle(3, 0.0).real == pytest.approx(1.2020569031595943, abs=1e-12)


@pytest.mark.parametrize("s", [2, 3])
def test_polylog_against_mpmath(s):
    mpmath.mp.dps = 30
    for theta in (1e-4, 0.01, 0.2, 1.0, 2.5, 3.14, 4.0, 6.0):
        ref = complex(mpmath.polylog(s, mpmath.e ** (1j * mpmath.mpf(theta))))
        assert abs(polylog_circle(s, theta) - ref) < 1e-10


def test_freespace_parity():
    for kd in (0.4, 1.0, 2.5):
        a = modes.dispersion_freespace(kd, 0.25)
        b = modes.dispersion_freespace(-kd, 0.25)
        assert a == pytest.approx(b, abs=1e-12)


def freespace_hamiltonian(n, d_over_lambda0, gamma0=1.0):
    # transverse-dipole chain in free space; the zero-distance imaginary part
    # of the coupling is -gamma0, which pins all prefactors
    h = np.zeros((n, n), complex)
    np.fill_diagonal(h, -1j * gamma0)
    idx = np.arange(n)
    rho = 2 * math.pi * d_over_lambda0 * np.abs(idx[:, None] - idx[None, :])
    off = rho > 0
    vals = np.zeros_like(h)
    vals[off] = 1.5 * gamma0 * np.exp(1j * rho[off]) * (
        1 / rho[off] ** 3 - 1j / rho[off] ** 2 - 1 / rho[off])
    return h + vals


def test_freespace_dispersion_matches_finite_array():
    d = 0.25
    ms = modes.eigenmodes(freespace_hamiltonian(40, d))
    pts = []
    for i in range(ms.n):
        k = abs(ms.bloch_k[i])
        if abs(k - 2 * math.pi * d) < 0.35 or k > math.pi - 0.12:
            continue  # skip the light cone and the zone edge
        pts.append((ms.eigenvalues[i].real, modes.dispersion_freespace(k, d)))
    pts = np.asarray(pts)
    assert len(pts) > 20
    rms = math.sqrt(float(np.mean((pts[:, 0] - pts[:, 1]) ** 2)))
    span = float(pts[:, 1].max() - pts[:, 1].min())
    assert rms / span < 0.02


def test_chiral_dispersion_symmetric_identity():
    phi = 0.9
    for kd in np.linspace(0.1, 3.0, 17):
        sym = modes.omega_of_k(complex(kd), phi)
        chir = modes.dispersion_chiral(float(kd), 1.0, phi)
        assert abs(sym - chir) < 1e-10


def test_chiral_dispersion_one_way_asymmetry():
    w_plus = modes.dispersion_chiral(0.7, 0.0, 1.2)
    w_minus = modes.dispersion_chiral(-0.7, 0.0, 1.2)
    assert abs(w_plus - w_minus) > 0.1


def test_chiral_dispersion_mirror_symmetry():
    # xi -> 1/xi mirrors the dispersion under K -> -K
    for kd in (0.4, 1.7):
        a = modes.dispersion_chiral(kd, 4.0, 0.9)
        b = modes.dispersion_chiral(-kd, 0.25, 0.9)
        assert abs(a - b) < 1e-12


def test_chiral_dispersion_pole_marker():
    val = modes.dispersion_chiral(0.9, 0.5, 0.9)
    assert np.isinf(val.real)


def test_band_and_bragg_quantities():
    out = modes.band_and_bragg(math.pi / 2, gamma1d=1.0, gamma_over_omega0=0.03)
    assert out["gap_lo"] == pytest.approx(-1.0)
    assert out["gap_hi"] == pytest.approx(1.0)
    assert out["delta_bragg_over_omega0"] == pytest.approx(math.sqrt(0.06 / math.pi), abs=1e-12)
    out2 = modes.band_and_bragg(0.4, gamma_over_omega0=1e-4, m=1)
    assert out2["n_star"] == pytest.approx(100.0)
    degenerate = modes.band_and_bragg(math.pi, gamma_over_omega0=0.01)
    assert degenerate["bragg_degenerate"]
    assert math.isnan(degenerate["gap_lo"])
    assert "delta_bragg" in degenerate


def test_subradiant_estimate_values():
    est = modes.subradiant_estimate(1, 100, 0.1)
    assert est == pytest.approx(math.pi**2 * 0.01 / 8e6, rel=1e-12)
    assert modes.subradiant_estimate(2, 50, 0.2) / modes.subradiant_estimate(1, 50, 0.2) == 4.0


def test_subradiant_estimate_vs_diagonalization():
    h = modes.effective_hamiltonian(AtomChain.periodic(60, 0.05), Coupling(gamma1d=1.0))
    darkest = modes.eigenmodes(h).eigenvalues[-1]
    est = modes.subradiant_estimate(1, 60, 0.05)
    assert -darkest.imag == pytest.approx(est, rel=0.2)
