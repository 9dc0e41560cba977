"""Single-photon reflection and transmission spectra of 1D atom arrays.

Two independent routes are provided and used as mutual oracles:

* transfer matrices (arbitrary positions and chirality, frequency-dependent
  propagation phases so that Bragg saturation beyond N* is captured), and
* Green's-function summation over the collective Hamiltonian (Markovian).

Conventions: the reflection amplitude is referenced to the ``z = 0`` plane
(phases of the chain are absolute), and the transmission amplitude is
relative to propagation through the empty waveguide, so a Bragg-spaced chain
reproduces the zero-spacing Dicke formulas exactly.  ``R + T = 1`` holds for
lossless symmetric coupling; with chirality the moduli of forward and
backward transmission stay equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import modes
from ._rng import trial_rng
from .types import AtomChain, Coupling

__all__ = [
    "SpectralResult",
    "EnsembleSpec",
    "EnsembleResult",
    "SingularTransferError",
    "atom_rt",
    "transfer_chain",
    "chain_rt",
    "chain_rt_closed",
    "dicke_rt",
    "rt_from_green",
    "optical_depth",
    "spectrum",
    "ensemble_bragg_reflectance",
    "eit_transmission",
    "eit_keff",
    "group_velocity_over_d",
]


class SingularTransferError(ZeroDivisionError):
    """A transfer matrix became singular (zero backward transmission)."""


@dataclass(frozen=True)
class SpectralResult:
    """Complex r/t amplitudes and intensities on a detuning grid."""

    grid: np.ndarray
    r: np.ndarray
    t_fwd: np.ndarray
    t_bwd: np.ndarray

    @property
    def R(self) -> np.ndarray:
        return np.abs(self.r) ** 2

    @property
    def T(self) -> np.ndarray:
        return np.abs(self.t_fwd) ** 2

    @property
    def loss(self) -> np.ndarray:
        return 1.0 - self.R - self.T


@dataclass(frozen=True)
class EnsembleSpec:
    """Randomly filled lattice for Bragg-reflection ensembles.

    ``sites`` lattice sites with per-site occupation probability ``fill``;
    ``phase`` is the lattice phase per site, ``omega0 * d / c``.
    """

    sites: int
    fill: float
    trials: int
    seed: int
    phase: float
    coupling: Coupling

    def __post_init__(self) -> None:
        if not 0.0 <= self.fill <= 1.0:
            raise ValueError("fill must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sites < 1:
            raise ValueError("sites must be >= 1")


@dataclass(frozen=True)
class EnsembleResult:
    grid: np.ndarray
    mean_r_amp: np.ndarray
    mean_t_amp: np.ndarray
    mean_R: np.ndarray
    mean_T: np.ndarray
    stderr_R: np.ndarray
    trials: int


def atom_rt(omega, coupling: Coupling):
    """Single-atom r, t_fwd, t_bwd at complex detuning ``omega`` (vectorized)."""
    omega = np.asarray(omega, dtype=complex)
    denom = -omega - 1j * (coupling.gamma_nr + coupling.gamma1d)
    r = 2j * math.sqrt(coupling.gamma_right * coupling.gamma_left) / denom
    t_fwd = 1.0 + 2j * coupling.gamma_right / denom
    t_bwd = 1.0 + 2j * coupling.gamma_left / denom
    if omega.ndim == 0:
        return complex(r), complex(t_fwd), complex(t_bwd)
    return r, t_fwd, t_bwd


def _phase_scale(omega, coupling: Coupling, markovian: bool | None):
    if markovian is None:
        markovian = coupling.markovian
    if markovian:
        return 1.0
    return 1.0 + np.asarray(omega, dtype=complex) * coupling.gamma_over_omega0


def _atom_matrix(omega, coupling: Coupling) -> np.ndarray:
    r, t_fwd, t_bwd = atom_rt(omega, coupling)
    if np.any(np.abs(t_bwd) == 0.0):
        raise SingularTransferError("backward transmission vanishes; transfer matrix singular")
    m = np.empty(np.shape(omega) + (2, 2), dtype=complex) if np.ndim(omega) else np.empty((2, 2), complex)
    m[..., 0, 0] = (t_fwd * t_bwd - r * r) / t_bwd
    m[..., 0, 1] = r / t_bwd
    m[..., 1, 0] = -r / t_bwd
    m[..., 1, 1] = 1.0 / t_bwd
    return m


def _prop_matrix(phase) -> np.ndarray:
    phase = np.asarray(phase, dtype=complex)
    m = np.zeros(phase.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = np.exp(1j * phase)
    m[..., 1, 1] = np.exp(-1j * phase)
    return m


def transfer_chain(
    chain: AtomChain,
    coupling: Coupling,
    omega: complex,
    markovian: bool | None = None,
) -> np.ndarray:
    """Total 2x2 transfer matrix through the chain, from z = 0 past the last atom."""
    if chain.n == 0:
        raise ValueError("transfer_chain requires a non-empty chain")
    scale = _phase_scale(omega, coupling, markovian)
    m_atom = _atom_matrix(omega, coupling)
    total = np.eye(2, dtype=complex)
    prev = 0.0
    for theta in chain.phases:
        total = _prop_matrix((theta - prev) * scale) @ total
        total = m_atom @ total
        prev = theta
    return total


def chain_rt(
    chain: AtomChain,
    coupling: Coupling,
    omega: complex,
    markovian: bool | None = None,
):
    """Reflection and transmission amplitudes of the chain at detuning ``omega``.

    ``t`` is normalized by the empty-waveguide propagation phase over the
    chain extent, matching the zero-spacing Dicke convention; ``r`` is
    referenced to ``z = 0``.
    """
    if chain.n == 0:
        return 0.0 + 0.0j, 1.0 + 0.0j
    m = transfer_chain(chain, coupling, omega, markovian)
    if m[1, 1] == 0.0:
        raise SingularTransferError("transfer matrix singular at this frequency")
    r = -m[1, 0] / m[1, 1]
    # det(M) = (t_fwd / t_bwd)^N exactly; avoids the cancellation in the
    # cofactor form of t
    _, t1, tb1 = atom_rt(omega, coupling)
    det = (t1 / tb1) ** chain.n
    scale = _phase_scale(omega, coupling, markovian)
    vacuum = np.exp(1j * chain.phases[-1] * scale)
    t = det / m[1, 1] / vacuum
    return complex(r), complex(t)


def t_backward(
    chain: AtomChain,
    coupling: Coupling,
    omega: complex,
    markovian: bool | None = None,
) -> complex:
    """Transmission for input from the right, same vacuum normalization."""
    if chain.n == 0:
        return 1.0 + 0.0j
    m = transfer_chain(chain, coupling, omega, markovian)
    scale = _phase_scale(omega, coupling, markovian)
    vacuum = np.exp(1j * chain.phases[-1] * scale)
    return complex(1.0 / m[1, 1] / vacuum)


def chain_rt_closed(n: int, phi: float, coupling: Coupling, omega: complex):
    """Closed-form r, t of a periodic symmetric chain via the Bloch phase.

    Valid for symmetric coupling; uses the polariton phase K*d of the period
    and the sin(N K d) form.  Conventions match :func:`chain_rt` for a chain
    with phases ``(0, phi, ..., (N-1) phi)`` at Markovian phases.
    """
    if not coupling.is_symmetric:
        raise ValueError("closed form requires symmetric coupling")
    if n == 0:
        return 0.0 + 0.0j, 1.0 + 0.0j
    r1, t1, _ = atom_rt(omega, coupling)
    rt = r1 * np.exp(1j * phi)
    tt = t1 * np.exp(1j * phi)
    # Bloch phase of one period from the transfer-matrix trace:
    # cos(Kd) = (tt^2 - rt^2 + 1) / (2 tt)
    import cmath

    kd = cmath.acos((tt * tt - rt * rt + 1.0) / (2.0 * tt))
    if kd.imag < 0.0:
        kd = -kd
    u = cmath.exp(1j * kd)  # |u| <= 1 on this branch
    # sin(n Kd) = u^{-n} (u^{2n} - 1) / 2i; the u^{-n} prefactors cancel in
    # the ratios below, which keeps everything bounded deep inside band gaps
    a_n = u ** (2 * n) - 1.0
    a_nm1 = u ** (2 * (n - 1)) - 1.0
    r_n = rt * a_n / (a_n - tt * u * a_nm1)
    t_n = tt * u**n * (u - 1.0 / u) / (a_n - tt * u * a_nm1)
    # normalize out per-period vacuum phases; the single-period coefficients
    # reference r one spacing upstream of the first atom
    return complex(r_n * np.exp(-1j * phi)), complex(t_n * np.exp(-1j * n * phi))


def dicke_rt(n: int, omega, coupling: Coupling):
    """Zero-spacing (or Bragg-spaced Markovian) closed-form r, t for n atoms."""
    if n < 0:
        raise ValueError("n must be >= 0")
    omega = np.asarray(omega, dtype=complex)
    r = 1j * n * coupling.gamma1d / (-omega - 1j * (coupling.gamma_nr + n * coupling.gamma1d))
    t = 1.0 + r
    if omega.ndim == 0:
        return complex(r), complex(t)
    return r, t


def rt_from_green(
    chain: AtomChain,
    coupling: Coupling,
    omega: complex,
    hamiltonian: np.ndarray | None = None,
):
    """r, t from the matrix Green's function of the collective Hamiltonian.

    ``r = -i gamma1d sum_mn G_mn exp(i (theta_n + theta_m))`` and
    ``t = 1 - i gamma1d sum_mn G_mn exp(i (theta_n - theta_m))`` with phases
    evaluated at the same frequency convention as the supplied Hamiltonian
    (Markovian by default).  Pass ``hamiltonian`` to reuse a prebuilt or
    non-Markovian H.
    """
    if chain.n == 0:
        return 0.0 + 0.0j, 1.0 + 0.0j
    h = hamiltonian if hamiltonian is not None else effective_h_cached(chain, coupling, omega)
    g = modes.greens_matrix(h, omega)
    scale = _phase_scale(omega, coupling, None if hamiltonian is None else coupling.markovian)
    theta = chain.as_array() * scale
    plus = np.exp(1j * theta)
    minus = np.exp(-1j * theta)
    r = -1j * coupling.gamma1d * (plus @ g @ plus)
    t = 1.0 - 1j * coupling.gamma1d * (minus @ g @ plus)
    return complex(r), complex(t)


def effective_h_cached(chain: AtomChain, coupling: Coupling, omega: complex) -> np.ndarray:
    if coupling.markovian:
        return modes.effective_hamiltonian(chain, coupling)
    return modes.effective_hamiltonian(chain, coupling, omega=omega)


def optical_depth(t_resonant: complex) -> float:
    """Resonant optical depth ``-ln |t(omega0)|^2``; infinite for |t| = 0."""
    mag2 = abs(t_resonant) ** 2
    if mag2 == 0.0:
        return math.inf
    if mag2 > 1.0 + 1e-12:
        raise ValueError("|t|^2 must not exceed 1")
    return -math.log(mag2)


def spectrum(chain: AtomChain, coupling: Coupling, grid, markovian: bool | None = None) -> SpectralResult:
    """Evaluate chain r/t on a detuning grid into a :class:`SpectralResult`."""
    grid = np.asarray(grid, dtype=float)
    r = np.empty(grid.shape, dtype=complex)
    t = np.empty(grid.shape, dtype=complex)
    tb = np.empty(grid.shape, dtype=complex)
    for i, w in enumerate(grid):
        r[i], t[i] = chain_rt(chain, coupling, w, markovian)
        tb[i] = t_backward(chain, coupling, w, markovian)
    return SpectralResult(grid=grid, r=r, t_fwd=t, t_bwd=tb)


def ensemble_bragg_reflectance(spec: EnsembleSpec, grid) -> EnsembleResult:
    """Disorder-averaged reflectance of a randomly filled Bragg lattice.

    Occupancy of every site is an independent Bernoulli(fill) draw per trial;
    trial ``i`` uses a splitmix64-derived sub-seed of ``spec.seed``, so the
    result is deterministic regardless of evaluation order.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must not be empty")
    coupling = spec.coupling
    scale = 1.0 + grid.astype(complex) * coupling.gamma_over_omega0 if not coupling.markovian \
        else np.ones(grid.shape, dtype=complex)
    m_atom = _atom_matrix(grid.astype(complex), coupling)
    m_prop = _prop_matrix(spec.phase * scale)

    nf = grid.size
    sum_r = np.zeros(nf, dtype=complex)
    sum_t = np.zeros(nf, dtype=complex)
    sum_R = np.zeros(nf)
    sum_R2 = np.zeros(nf)
    sum_T = np.zeros(nf)
    vacuum = np.exp(1j * spec.phase * (spec.sites - 1) * scale)
    for trial in range(spec.trials):
        occ = trial_rng(spec.seed, trial).random(spec.sites) < spec.fill
        m = np.broadcast_to(np.eye(2, dtype=complex), (nf, 2, 2)).copy()
        for site in range(spec.sites):
            if site > 0:
                m = m_prop @ m
            if occ[site]:
                m = m_atom @ m
        r = -m[:, 1, 0] / m[:, 1, 1]
        t = (m[:, 0, 0] - m[:, 0, 1] * m[:, 1, 0] / m[:, 1, 1]) / vacuum
        R = np.abs(r) ** 2
        sum_r += r
        sum_t += t
        sum_R += R
        sum_R2 += R**2
        sum_T += np.abs(t) ** 2
    n = spec.trials
    mean_R = sum_R / n
    var = np.maximum(sum_R2 / n - mean_R**2, 0.0)
    stderr = np.sqrt(var / n) if n > 1 else np.zeros(nf)
    return EnsembleResult(
        grid=grid,
        mean_r_amp=sum_r / n,
        mean_t_amp=sum_t / n,
        mean_R=mean_R,
        mean_T=sum_T / n,
        stderr_R=stderr,
        trials=n,
    )


def eit_transmission(mode_set: modes.ModeSet, delta, omega_c: float, gamma: float):
    """Array transmission under a control field of Rabi frequency ``omega_c``.

    ``t_N = prod_xi [Delta (Delta + i gamma) - Omega_c^2/4] /
    [Delta (Delta + i gamma + lambda_xi) - Omega_c^2/4]`` where
    ``lambda_xi = -eigenvalue_xi`` carries the collective shift and a
    positive imaginary decay part.  ``mode_set`` must come from the
    single-excitation Hamiltonian with ``gamma_nr = 0`` (the extra decay
    enters through ``gamma`` here).
    """
    if omega_c < 0:
        raise ValueError("omega_c must be >= 0")
    delta = np.asarray(delta, dtype=complex)
    lam = -mode_set.eigenvalues
    base = delta * (delta + 1j * gamma) - 0.25 * omega_c**2
    t = np.ones(delta.shape, dtype=complex)
    for lx in lam:
        t = t * base / (base + delta * lx)
    if delta.ndim == 0:
        return complex(t)
    return t


def eit_keff(mode_set: modes.ModeSet, omega_c: float, gamma: float):
    """Series coefficients of ``k_eff * d`` in the detuning: (linear, quadratic)."""
    if omega_c <= 0:
        raise ValueError("omega_c must be > 0")
    lam = -mode_set.eigenvalues
    n = mode_set.n
    c1 = -1j / n * np.sum(4.0 * lam / omega_c**2)
    c2 = -1j / n * np.sum(16.0 * lam * (lam + 2j * gamma) / omega_c**4)
    return complex(c1), complex(c2)


def group_velocity_over_d(mode_set: modes.ModeSet, omega_c: float, gamma: float = 0.0) -> float:
    """Group velocity at resonance in units of the lattice spacing, ``1 / Re c1``.

    Equals ``Omega_c^2 / (4 gamma1d)`` independently of the atomic
    configuration (the linear k_eff coefficient only sees the eigenvalue sum).
    """
    c1, _ = eit_keff(mode_set, omega_c, gamma)
    return 1.0 / c1.real
