"""Effective non-Hermitian Hamiltonians of waveguide-coupled atom arrays.

The single-excitation Hamiltonian of an ordered chain, in detuning units
(frequencies measured from the atomic resonance in units of ``gamma1d``), is

    H[m, n] = -1j * (gamma1d + gamma_nr) * delta_mn
              - 2j * gamma_right * exp(1j * theta_mn)   (m > n)
              - 2j * gamma_left  * exp(1j * theta_mn)   (m < n)

with ``theta_mn = omega0 |z_m - z_n| / c`` in the Markovian approximation and
``omega |z_m - z_n| / c`` beyond it.  Symmetric coupling
(``gamma_right = gamma_left = gamma1d / 2``) gives the familiar
``-1j * gamma1d * exp(1j * phi |m - n|)`` coupling; a fully chiral chain is
lower triangular, so every eigenvalue equals the diagonal.

Besides the Hamiltonian and its eigenmodes, this module carries the analytic
companions used as cross-checks everywhere else: the matrix Green's function,
the tridiagonal inverse of the shifted Hamiltonian, guided / free-space /
chiral dispersion relations, band-gap and Bragg-threshold quantities, and the
asymptotic decay rate of the darkest subradiant modes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ._polylog import polylog_circle
from .types import AtomChain, Coupling

__all__ = [
    "ModeSet",
    "SingularFrequencyError",
    "BraggDegenerateError",
    "effective_hamiltonian",
    "eigenmodes",
    "greens_matrix",
    "tridiagonal_inverse_oracle",
    "dispersion_guided",
    "omega_of_k",
    "dispersion_freespace",
    "dispersion_chiral",
    "band_and_bragg",
    "subradiant_estimate",
]

POLE = complex(math.inf, 0.0)  # marker for a pole of an analytic expression


class SingularFrequencyError(ValueError):
    """Requested frequency coincides with an eigenvalue of H."""


class BraggDegenerateError(ValueError):
    """Quantity undefined at a Bragg-degenerate spacing (sin(phi) = 0)."""


@dataclass(frozen=True)
class ModeSet:
    """Eigen-decomposition of a collective Hamiltonian.

    ``eigenvalues[nu]`` are complex detunings (imaginary part = minus the
    half decay rate), sorted by decay rate, brightest first.  Rows of
    ``eigenvectors`` hold the amplitudes ``P[nu, n]`` normalized without
    conjugation, ``sum_n P[nu, n]**2 == 1``, which is the natural convention
    for a complex-symmetric H.  ``bloch_k`` is the dominant wavevector of each
    mode from a zero-padded discrete Fourier transform; ``near_degenerate``
    flags clusters closer than 1e-10 where that normalization is unreliable.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    bloch_k: np.ndarray
    near_degenerate: np.ndarray = field(default=None)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def trace_sum(self) -> complex:
        return complex(np.sum(self.eigenvalues))


def effective_hamiltonian(
    chain: AtomChain,
    coupling: Coupling,
    omega: complex | None = None,
) -> np.ndarray:
    """N x N effective Hamiltonian of the chain, in detuning units.

    ``omega`` (a complex detuning) is required when ``coupling.markovian`` is
    false; propagation phases are then evaluated at ``omega0 + omega`` using
    ``coupling.gamma_over_omega0``.
    """
    if chain.n == 0:
        raise ValueError("chain must contain at least one atom")
    if not coupling.markovian:
        if omega is None:
            raise ValueError("non-Markovian Hamiltonian requires omega")
        if not coupling.gamma_over_omega0 > 0:
            raise ValueError("non-Markovian Hamiltonian requires gamma_over_omega0 > 0")
        scale = 1.0 + omega * coupling.gamma_over_omega0
    else:
        scale = 1.0
    theta = chain.as_array()
    dist = np.abs(theta[:, None] - theta[None, :]) * scale
    phase = np.exp(1j * dist)
    lower = np.tril(np.ones((chain.n, chain.n)), k=-1)
    upper = lower.T
    h = (
        -2j * coupling.gamma_right * phase * lower
        - 2j * coupling.gamma_left * phase * upper
    )
    np.fill_diagonal(h, -1j * (coupling.gamma1d + coupling.gamma_nr))
    return h


def _dominant_k(vec: np.ndarray, pad: int = 4096) -> float:
    spec = np.fft.fft(vec, n=max(pad, 4 * len(vec)))
    k = 2.0 * math.pi * np.fft.fftfreq(len(spec))
    mag = np.abs(spec)
    best = np.max(mag)
    # break +-k ties toward positive k
    candidates = np.flatnonzero(mag >= best * (1.0 - 1e-9))
    return float(k[candidates[np.argmax(k[candidates])]])


def eigenmodes(H: np.ndarray, degeneracy_gap: float = 1e-10) -> ModeSet:
    """Diagonalize an effective Hamiltonian into a :class:`ModeSet`."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("H must be a square matrix")
    vals, vecs = np.linalg.eig(H)
    order = np.argsort(vals.imag, kind="stable")  # most lossy first
    vals = vals[order]
    vecs = vecs[:, order]

    flags = np.zeros(len(vals), dtype=bool)
    for i in range(len(vals)):
        others = np.delete(vals, i)
        if others.size and np.min(np.abs(others - vals[i])) < degeneracy_gap:
            flags[i] = True

    rows = []
    for i in range(len(vals)):
        v = vecs[:, i]
        norm2 = np.sum(v * v)
        if abs(norm2) > 1e-12:
            v = v / np.sqrt(norm2)
        rows.append(v)
    P = np.array(rows)
    bloch = np.array([_dominant_k(P[i]) for i in range(len(vals))])
    return ModeSet(eigenvalues=vals, eigenvectors=P, bloch_k=bloch, near_degenerate=flags)


def greens_matrix(H: np.ndarray, omega: complex) -> np.ndarray:
    """Resolvent G = (omega - H)^(-1) of the collective Hamiltonian."""
    H = np.asarray(H, dtype=complex)
    vals = np.linalg.eigvals(H)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.min(np.abs(vals - omega)) < 1e-13 * scale:
        raise SingularFrequencyError(f"omega = {omega} lies on an eigenvalue of H")
    n = H.shape[0]
    return np.linalg.solve(omega * np.eye(n) - H, np.eye(n, dtype=complex))


def tridiagonal_inverse_oracle(n: int, phi: float, gamma1d: float = 1.0) -> np.ndarray:
    """Tridiagonal inverse of the shifted periodic Hamiltonian (H - omega0).

    Corners carry ``-cot(phi)/2 + i/2``, the bulk diagonal ``-cot(phi)`` and
    the off-diagonals ``1/(2 sin(phi))``, all in units of ``1/gamma1d``.
    Undefined at Bragg spacings where ``sin(phi) = 0``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = math.sin(phi)
    if abs(s) < 1e-8:
        raise BraggDegenerateError("tridiagonal inverse undefined for sin(phi) ~ 0")
    c = math.cos(phi)
    ht = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(ht, -c / s)
    ht[0, 0] = ht[-1, -1] = -0.5 * c / s + 0.5j
    off = 1.0 / (2.0 * s)
    idx = np.arange(n - 1)
    ht[idx, idx + 1] = off
    ht[idx + 1, idx] = off
    return ht / gamma1d


def dispersion_guided(
    omega: complex,
    phi: float,
    gamma1d: float = 1.0,
    delta_omega: float = 0.0,
    gamma: float = 0.0,
) -> complex:
    """Complex Bloch phase K*d of the guided polariton at detuning ``omega``.

    Solves ``cos(Kd) = cos(phi) + gamma1d sin(phi) / (omega - delta_omega + i gamma)``
    on the branch with ``Im(Kd) >= 0``; real solutions are mapped to
    ``Re(Kd)`` in [0, pi].
    """
    rhs = math.cos(phi) + gamma1d * math.sin(phi) / (omega - delta_omega + 1j * gamma)
    kd = cmath.acos(rhs)  # principal: Re in [0, pi]
    if kd.imag < 0.0:
        kd = -kd
    if kd.imag == 0.0 and kd.real < 0.0:
        kd = -kd
    return kd


def omega_of_k(
    kd: complex,
    phi: float,
    gamma1d: float = 1.0,
    delta_omega: float = 0.0,
    gamma: float = 0.0,
) -> complex:
    """Inverse of :func:`dispersion_guided`."""
    denom = cmath.cos(kd) - math.cos(phi)
    if denom == 0.0:
        return POLE
    return delta_omega - 1j * gamma + gamma1d * math.sin(phi) / denom


def dispersion_freespace(kd: float, d_over_lambda0: float, gamma0: float = 1.0) -> float:
    """Real part of the free-space dispersion of a transverse-dipole chain.

    Returns ``Re omega(K) - omega0`` in units of ``gamma0`` via the
    Li3/Li2/log combination with ``xi_pm = exp(i (omega0 d / c +- K d))``.
    Diverges logarithmically on the light lines ``K d = +- omega0 d / c``.
    """
    if not 0.0 < d_over_lambda0:
        raise ValueError("d_over_lambda0 must be positive")
    phi0 = 2.0 * math.pi * d_over_lambda0
    total = 0.0 + 0.0j
    for sign in (+1.0, -1.0):
        theta = phi0 + sign * kd
        if abs(math.remainder(theta, 2.0 * math.pi)) < 1e-14:
            raise ValueError("K lies on the light line; dispersion diverges")
        xi = cmath.exp(1j * theta)
        total += (
            polylog_circle(3, theta)
            - 1j * phi0 * polylog_circle(2, theta)
            + phi0**2 * cmath.log(1.0 - xi)
        )
    # prefactor 3 gamma0 / (2 phi0^3): fixed by the transverse dipole-dipole
    # coupling whose zero-distance imaginary part is -gamma0 per atom
    return gamma0 * 1.5 / phi0**3 * total.real


def dispersion_chiral(kd: float, xi: float, phi: float, gamma1d: float = 1.0) -> complex:
    """Polariton dispersion of a chirally coupled chain.

    ``omega(K) - omega0 = gamma1d/(1+xi) [cot((phi - Kd)/2) + xi cot((phi + Kd)/2)]``;
    ``xi = 1`` reproduces the symmetric guided dispersion.  At the poles
    ``Kd = +- phi`` the infinity marker is returned.
    """
    if xi < 0:
        raise ValueError("xi must be >= 0")
    a = 0.5 * (phi - kd)
    b = 0.5 * (phi + kd)
    if abs(math.remainder(a, math.pi)) < 1e-12 or abs(math.remainder(b, math.pi)) < 1e-12:
        return POLE
    return gamma1d / (1.0 + xi) * (1.0 / math.tan(a) + xi / math.tan(b))


def band_and_bragg(
    phi: float,
    gamma1d: float = 1.0,
    gamma_over_omega0: float | None = None,
    m: int = 1,
) -> dict:
    """Band-gap edges plus Bragg gap width and saturation threshold.

    The polariton gap of the guided dispersion is
    ``(-gamma1d tan(phi/2), +gamma1d cot(phi/2))`` (detunings).  With a
    positive ``gamma_over_omega0`` the Bragg half-width
    ``Delta_Bragg = sqrt(2 gamma1d omega0 / pi)`` and the atom-number
    threshold ``N* = sqrt(omega0/gamma1d) / m`` are included.  At Bragg
    spacings (``phi`` a multiple of pi) the gap edges degenerate and only the
    Bragg quantities are returned.
    """
    out: dict = {}
    degenerate = abs(math.remainder(phi, math.pi)) < 1e-12
    if degenerate:
        out["gap_lo"] = out["gap_hi"] = math.nan
        out["bragg_degenerate"] = True
    else:
        out["gap_lo"] = -gamma1d * math.tan(0.5 * phi)
        out["gap_hi"] = gamma1d / math.tan(0.5 * phi)
        out["bragg_degenerate"] = False
    if gamma_over_omega0 is not None:
        if not gamma_over_omega0 > 0:
            raise ValueError("gamma_over_omega0 must be > 0 for Bragg quantities")
        ratio = gamma_over_omega0
        out["delta_bragg_over_omega0"] = math.sqrt(2.0 * ratio / math.pi)
        out["delta_bragg"] = gamma1d * math.sqrt(2.0 / (math.pi * ratio))
        out["n_star"] = math.sqrt(1.0 / ratio) / m
    return out


def subradiant_estimate(nu: int, n: int, phi: float, gamma1d: float = 1.0) -> float:
    """Asymptotic decay rate of the nu-th darkest mode, ``pi^2 phi^2 nu^2 / (8 N^3)``."""
    if nu < 1 or n < 1:
        raise ValueError("nu and n must be >= 1")
    return gamma1d * math.pi**2 * phi**2 * nu**2 / (8.0 * n**3)
