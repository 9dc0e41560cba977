"""Two-photon scattering kernels, photon-photon correlations and pair states.

The incoherent part of two-photon scattering is described by a kernel
``M(w1', w2' <- w1, w2)`` defined on energy-conserving frequency tuples
(detunings from the atomic resonance, units of ``gamma1d``).  For zero
spacing the kernel has the closed Dicke form; for finite spacing it is built
from the matrix Green's function and the pair propagator

    Sigma[m, n] = i sum_{nu, mu} P[nu, m] P[mu, m] P[nu, n] P[mu, n]
                  / (lam_nu + lam_mu - 2 eps),      Q = Sigma^{-1},

whose singular points are the complex energies of the double-excited
eigenstates.  Correlation functions follow from

    g2(tau) = | 1 + i / (2 a^2) * Integral dw/2pi e^{-i w tau}
               M(eps - w, eps + w <- eps, eps) |^2,

with ``a`` the coherent single-photon amplitude of the chosen geometry.

Independent oracles live alongside: the Bethe-ansatz transcription of the
Dicke kernel, the exponentially bound photon-pair wavefunction, and a
weak-drive steady-state solver that computes g2(0) from nothing but linear
algebra in the one- and two-excitation sectors (it knows nothing about
kernels and is used to pin normalization conventions).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import modes, spectra1d
from .types import AtomChain, Coupling

__all__ = [
    "PairState",
    "Kernel",
    "kernel_dicke",
    "dicke_kernel",
    "general_kernel",
    "kernel_general",
    "sigma_pair",
    "q_pair",
    "g2_tau",
    "g2_zero_resonant",
    "g2_zero_weak_drive",
    "coherent_corrections",
    "pair_eigenstates",
    "pair_hamiltonian",
    "bethe_oracle",
    "bound_pair_amplitude",
]

_ENERGY_TOL = 1e-9


def _check_energy(w1p, w2p, w1, w2) -> None:
    scale = max(1.0, abs(w1), abs(w2))
    if abs((w1p + w2p) - (w1 + w2)) > _ENERGY_TOL * scale:
        raise ValueError("kernel evaluated off the energy-conservation shell")


# ---------------------------------------------------------------------------
# Dicke (zero-spacing) kernel and its Bethe-ansatz twin


def kernel_dicke(omega_out, eps: complex, n: int, coupling: Coupling) -> complex:
    """Closed-form kernel of ``n`` atoms at one point, incident pair at (eps, eps).

    ``omega_out = (w1p, w2p)`` must satisfy ``w1p + w2p = 2 eps``.  The
    two-photon resonance factor cancels against the numerator for ``n = 1``.
    """
    w1p, w2p = omega_out
    _check_energy(w1p, w2p, eps, eps)
    if not math.isinf(coupling.anharmonicity_u):
        raise ValueError("kernel_dicke is the two-level limit; use kernel_general with d=0")
    g = coupling.gamma1d
    gnr = coupling.gamma_nr
    gt = gnr + n * g

    def s(w):
        return 1.0 / (-w - 1j * gt)

    two_photon = (eps + 1j * gnr) * (eps + 1j * (n * g + gnr)) / (eps + 1j * ((n - 1) * g + gnr))
    return 4.0 * n * g**2 * s(eps) * s(eps) * s(w1p) * s(w2p) * two_photon


def bethe_oracle(w1p, w2p, w1, w2, n: int, gamma1d: float = 1.0) -> complex:
    """Dicke kernel from the Bethe-ansatz transmitted state (lossless case)."""
    _check_energy(w1p, w2p, w1, w2)
    eps = 0.5 * (w1 + w2)

    def s(w):
        return 1.0 / (w + 1j * n * gamma1d)

    num = n * eps * (eps + 1j * n * gamma1d)
    den = eps + 1j * (n - 1) * gamma1d
    return 4.0 * gamma1d**2 * s(w1) * s(w2) * s(w1p) * s(w2p) * num / den


def bound_pair_amplitude(x1: float, x2: float, eps: complex, n: int, gamma1d: float = 1.0) -> complex:
    """Bound two-photon wavefunction at positions x1, x2 (units of c/gamma1d).

    ``exp(i eps (x1+x2)) exp(-n gamma1d |x1-x2|)`` times the region factor 1,
    t_k or t_k t_p depending on how many photons have passed the array, with
    the even-channel transmissions at the string rapidities
    ``c k, c p = eps +- i n gamma1d``.
    """

    def t_even(ck):
        return (ck - 1j * n * gamma1d) / (ck + 1j * n * gamma1d)

    ck = eps + 1j * n * gamma1d
    cp = eps - 1j * n * gamma1d
    if x1 < 0 and x2 < 0:
        region = 1.0 + 0.0j
    elif x1 >= 0 and x2 >= 0:
        region = t_even(ck) * t_even(cp)
    else:
        region = t_even(ck)
    return cmath.exp(1j * eps * (x1 + x2)) * cmath.exp(-n * gamma1d * abs(x1 - x2)) * region


# ---------------------------------------------------------------------------
# General kernel via the pair propagator


def _spectral(H: np.ndarray):
    vals, vecs = np.linalg.eig(H)
    # non-conjugated normalization (H complex symmetric)
    norms = np.sqrt(np.sum(vecs * vecs, axis=0))
    vecs = vecs / norms
    return vals, vecs  # vecs[:, nu]


def sigma_pair(H: np.ndarray, eps: complex) -> np.ndarray:
    """Pair propagator Sigma(eps) from the eigen-decomposition of H."""
    vals, vecs = _spectral(np.asarray(H, dtype=complex))
    pair_energy = vals[:, None] + vals[None, :]
    scale = max(1.0, float(np.max(np.abs(pair_energy))))
    if np.min(np.abs(pair_energy - 2.0 * eps)) < 1e-13 * scale:
        raise modes.SingularFrequencyError("2*eps sits on a pair pole of Sigma")
    weight = 1j / (pair_energy - 2.0 * eps)
    a = vecs.T  # a[nu, m] = P^nu_m
    # Sigma_mn = sum_{nu mu} a[nu m] a[mu m] weight[nu mu] a[nu n] a[mu n]
    return np.einsum("um,vm,uv,un,vn->mn", a, a, weight, a, a, optimize=True)


def q_pair(H: np.ndarray, eps: complex, anharmonicity_u: float = math.inf) -> np.ndarray:
    """Interaction block Q: ``Sigma^-1`` for two-level atoms, else the finite-U form."""
    sig = sigma_pair(H, eps)
    n = sig.shape[0]
    if math.isinf(anharmonicity_u):
        return np.linalg.inv(sig)
    u = anharmonicity_u
    return -1j * u * np.linalg.inv(np.eye(n) - 1j * u * sig)


def _s_vector(H: np.ndarray, theta: np.ndarray, w: complex, sign: int) -> np.ndarray:
    """s^sign(w): rows of G(w) contracted with exp(sign * i * theta)."""
    n = H.shape[0]
    rhs = np.exp(1j * sign * theta)
    return np.linalg.solve(w * np.eye(n) - H, rhs)


def kernel_general(
    chain: AtomChain,
    coupling: Coupling,
    eps: complex,
    omega_out,
    mu: int = +1,
    nu: int = +1,
) -> complex:
    """Finite-spacing kernel ``M_mu_nu(w1p, w2p <- eps, eps)``.

    Directions: ``+1`` labels a right-moving (transmitted) outgoing photon,
    ``-1`` a left-moving (reflected) one.  Markovian phases at the resonance.
    The zero-spacing limit reproduces :func:`kernel_dicke` with no residual
    prefactor.
    """
    w1p, w2p = omega_out
    _check_energy(w1p, w2p, eps, eps)
    H = modes.effective_hamiltonian(chain, coupling)
    theta = chain.as_array()
    g = coupling.gamma1d
    q = q_pair(H, eps, coupling.anharmonicity_u)
    s_in = _s_vector(H, theta, eps, +1)
    w_vec = q @ (s_in * s_in)
    # outgoing right-movers overlap with exp(-i theta), left-movers with exp(+i theta)
    out1 = _s_vector(H, theta, w1p, -mu)
    out2 = _s_vector(H, theta, w2p, -nu)
    return complex(-2j * g**2 * np.sum(out1 * out2 * w_vec))


@dataclass(frozen=True)
class Kernel:
    """Energy-conserving two-photon kernel with its evaluation metadata."""

    fn: Callable[[complex, complex, complex, complex], complex]
    geometry: str  # "dicke" | "general"
    mu: int = +1
    nu: int = +1
    n_atoms: int = 0
    coupling: Coupling | None = None
    chain: AtomChain | None = None

    def __call__(self, w1p, w2p, w1, w2) -> complex:
        _check_energy(w1p, w2p, w1, w2)
        return self.fn(w1p, w2p, w1, w2)


def dicke_kernel(n: int, coupling: Coupling) -> Kernel:
    def fn(w1p, w2p, w1, w2):
        return kernel_dicke((w1p, w2p), 0.5 * (w1 + w2), n, coupling)

    return Kernel(fn=fn, geometry="dicke", n_atoms=n, coupling=coupling)


def general_kernel(chain: AtomChain, coupling: Coupling, mu: int = +1, nu: int = +1) -> Kernel:
    def fn(w1p, w2p, w1, w2):
        return kernel_general(chain, coupling, 0.5 * (w1 + w2), (w1p, w2p), mu, nu)

    return Kernel(fn=fn, geometry="general", mu=mu, nu=nu, n_atoms=chain.n,
                  coupling=coupling, chain=chain)


# ---------------------------------------------------------------------------
# Correlation functions


def _dicke_amplitude(eps: complex, n: int, coupling: Coupling, geometry: str) -> complex:
    r, t = spectra1d.dicke_rt(n, eps, coupling)
    return t if geometry == "transmit" else r


def _dicke_kernel_tau_integral(eps: complex, tau: float, n: int, coupling: Coupling) -> complex:
    """Closed-form ``Integral dw/2pi e^{-i w tau} M(eps-w, eps+w <- eps, eps)``."""
    g = coupling.gamma1d
    gnr = coupling.gamma_nr
    gt = gnr + n * g
    s_eps = 1.0 / (-eps - 1j * gt)
    two_photon = (eps + 1j * gnr) * (eps + 1j * (n * g + gnr)) / (eps + 1j * ((n - 1) * g + gnr))
    amp = 4.0 * n * g**2 * s_eps**2 * two_photon
    # pole of s(eps + w) at w = -eps - i gt (lower half plane, tau >= 0)
    return -1j * amp * cmath.exp(1j * eps * tau - gt * tau) / (2.0 * (eps + 1j * gt))


def _general_kernel_tau_integral(
    kernel: Kernel, eps: complex, tau: float, method: str = "residue"
) -> complex:
    chain, coupling = kernel.chain, kernel.coupling
    H = modes.effective_hamiltonian(chain, coupling)
    theta = chain.as_array()
    g = coupling.gamma1d
    q = q_pair(H, eps, coupling.anharmonicity_u)
    s_in = _s_vector(H, theta, eps, +1)
    w_vec = q @ (s_in * s_in)

    vals, vecs = _spectral(H)
    c_out = vecs.T @ np.exp(-1j * kernel.nu * theta)  # c[nu] for the (eps + w) factor

    if method == "residue":
        total = 0.0 + 0.0j
        for k in range(len(vals)):
            pole = vals[k] - eps  # Im < 0
            out1 = _s_vector(H, theta, 2.0 * eps - vals[k], -kernel.mu)
            res_vec = vecs[:, k] * c_out[k]
            contrib = -2j * g**2 * np.sum(out1 * res_vec * w_vec)
            total += -1j * cmath.exp(-1j * pole * tau) * contrib
        return total

    # adaptive quadrature cross-check for the residue path

    def m_of_w(w):
        out1 = _s_vector(H, theta, eps - w, -kernel.mu)
        out2 = _s_vector(H, theta, eps + w, -kernel.nu)
        return -2j * g**2 * np.sum(out1 * out2 * w_vec)

    if tau == 0.0:
        re, _ = quad(lambda w: m_of_w(w).real, -np.inf, np.inf, limit=600)
        im, _ = quad(lambda w: m_of_w(w).imag, -np.inf, np.inf, limit=600)
        return (re + 1j * im) / (2.0 * math.pi)

    # e^{-i w tau} kernel: oscillatory (QAWF) integration over each half line;
    # M(-w) e^{i w tau} covers the negative half
    total = 0.0 + 0.0j
    for orient in (+1, -1):
        f = (lambda w: m_of_w(w)) if orient > 0 else (lambda w: m_of_w(-w))
        sign = -orient  # phase e^{-i orient w tau}
        for part, pick in ((0, lambda z: z.real), (1, lambda z: z.imag)):
            c, _ = quad(lambda w: pick(f(w)), 0, np.inf, weight="cos", wvar=tau, limit=600)
            s, _ = quad(lambda w: pick(f(w)), 0, np.inf, weight="sin", wvar=tau, limit=600)
            comp = (c + 1j * sign * s) * (1.0 if part == 0 else 1j)
            total += comp
    return total / (2.0 * math.pi)


def g2_tau(
    eps: complex,
    tau: float,
    geometry: str,
    n: int,
    coupling: Coupling,
    kernel: Kernel | None = None,
    method: str = "residue",
) -> float:
    """Second-order correlation ``g2(tau)`` of the scattered light.

    ``geometry`` is ``"transmit"`` or ``"reflect"``.  Without an explicit
    kernel the zero-spacing Dicke kernel of ``n`` atoms is used and the
    frequency integral is evaluated by residues in closed form; a general
    kernel switches to its spectral residue sum (or quadrature with
    ``method="quad"``).  A vanishing coherent amplitude returns the
    divergence marker ``math.inf`` (perfect bunching).
    """
    if geometry not in ("transmit", "reflect"):
        raise ValueError("geometry must be 'transmit' or 'reflect'")
    if tau < 0:
        tau = -tau
    if kernel is None or kernel.geometry == "dicke":
        a = _dicke_amplitude(eps, n, coupling, geometry)
        integral = _dicke_kernel_tau_integral(eps, tau, n, coupling)
    else:
        r, t = spectra1d.rt_from_green(kernel.chain, kernel.coupling, eps)
        a = t if geometry == "transmit" else r
        integral = _general_kernel_tau_integral(kernel, eps, tau, method=method)
    if abs(a) == 0.0:
        return math.inf
    return abs(1.0 + 0.5j / a**2 * integral) ** 2


def g2_zero_resonant(n: int, big_gamma_1d: float, big_gamma: float, geometry: str) -> float:
    """Closed-form resonant ``g2(0)`` of the zero-spacing array.

    ``big_gamma_1d`` and ``big_gamma`` are the full widths ``Gamma_1D`` and
    ``Gamma`` (only their ratio matters).  Reflection from one atom is fully
    antibunched; transmission at ``Gamma = Gamma_1D`` is fully antibunched.
    """
    if geometry not in ("transmit", "reflect"):
        raise ValueError("geometry must be 'transmit' or 'reflect'")
    denom = 1.0 - big_gamma_1d / (big_gamma + n * big_gamma_1d)
    if geometry == "reflect":
        if n == 0:
            raise ValueError("no reflected light from an empty array")
        num = 1.0 - 1.0 / n
    else:
        if big_gamma == 0.0:
            return math.inf
        num = 1.0 - big_gamma_1d / big_gamma
    if denom == 0.0:
        return math.inf
    return (num / denom) ** 2


def coherent_corrections(eps: complex, alpha2_over_l: float, n: int, coupling: Coupling) -> dict:
    """Leading power corrections to coherent intensities plus the incoherent rate.

    ``alpha2_over_l`` is ``c |alpha|^2 / L`` in units of ``gamma1d``.  For
    ``gamma_nr = 0`` the returned values satisfy
    ``R_coh + T_coh + I_incoh = 1``.
    """
    r, t = spectra1d.dicke_rt(n, eps, coupling)
    m_elastic = kernel_dicke((eps, eps), eps, n, coupling)
    t_coh = abs(t) ** 2 - alpha2_over_l * (m_elastic * np.conj(t) * (np.conj(t) + np.conj(r))).imag
    r_coh = abs(r) ** 2 - alpha2_over_l * (m_elastic * np.conj(r) * (np.conj(r) + np.conj(t))).imag

    g = coupling.gamma1d
    gt = coupling.gamma_nr + n * g
    s_eps = 1.0 / (-eps - 1j * gt)
    two_photon = (eps + 1j * coupling.gamma_nr) * (eps + 1j * (n * g + coupling.gamma_nr)) / (
        eps + 1j * ((n - 1) * g + coupling.gamma_nr)
    )
    amp = 4.0 * n * g**2 * s_eps**2 * two_photon
    # |M|^2 integral over the two Lorentzians centered at +-eps
    i_incoh = alpha2_over_l * abs(amp) ** 2 / (4.0 * gt * (abs(eps) ** 2 + gt**2))
    return {"T_coh": float(t_coh), "R_coh": float(r_coh), "I_incoh": float(i_incoh)}


# ---------------------------------------------------------------------------
# Weak-drive steady-state oracle (independent of every kernel formula)


def _pair_index(n: int):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {p: k for k, p in enumerate(pairs)}
    return pairs, index


def pair_hamiltonian(H: np.ndarray) -> tuple[np.ndarray, list]:
    """Two-excitation Hamiltonian in the hard-core symmetric pair basis."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if n < 2:
        raise ValueError("need at least two atoms for pair states")
    pairs, index = _pair_index(n)
    h2 = np.zeros((len(pairs), len(pairs)), dtype=complex)
    for col, (k, l) in enumerate(pairs):
        for a in range(n):
            if a != l and a != k:
                h2[index[(min(a, l), max(a, l))], col] += H[a, k]
                h2[index[(min(a, k), max(a, k))], col] += H[a, l]
        h2[col, col] += H[k, k] + H[l, l]
    return h2, pairs


def g2_zero_weak_drive(
    chain: AtomChain,
    coupling: Coupling,
    eps: complex,
    geometry: str,
) -> float:
    """g2(0) from the weak-coherent-drive steady state (linear solves only).

    The chain is driven from the left at detuning ``eps``; the one- and
    two-excitation amplitudes follow from ``(eps - H) psi1 = v`` and
    ``(2 eps - H2) psi2 = v x psi1`` in the hard-core pair basis, and the
    output field is assembled through input-output relations.  Serves as an
    independent oracle for all kernel-based correlation formulas, including
    fully chiral chains.
    """
    if geometry not in ("transmit", "reflect"):
        raise ValueError("geometry must be 'transmit' or 'reflect'")
    if not math.isinf(coupling.anharmonicity_u):
        raise ValueError("weak-drive oracle implements the two-level limit")
    n = chain.n
    H = modes.effective_hamiltonian(chain, coupling)
    theta = chain.as_array()
    v = np.exp(1j * theta)
    psi1 = np.linalg.solve(eps * np.eye(n) - H, v)

    gr, gl = coupling.gamma_right, coupling.gamma_left
    t_amp = 1.0 - 2j * gr * np.sum(np.exp(-1j * theta) * psi1)
    r_amp = -2j * math.sqrt(gr * gl) * np.sum(np.exp(1j * theta) * psi1)

    if n >= 2:
        h2, pairs = pair_hamiltonian(H)
        rhs = np.array([v[i] * psi1[j] + v[j] * psi1[i] for (i, j) in pairs])
        psi2 = np.linalg.solve(2.0 * eps * np.eye(len(pairs)) - h2, rhs)
        pair_out_t = sum(np.exp(-1j * (theta[i] + theta[j])) * psi2[k] for k, (i, j) in enumerate(pairs))
        pair_out_r = sum(np.exp(+1j * (theta[i] + theta[j])) * psi2[k] for k, (i, j) in enumerate(pairs))
    else:
        pair_out_t = pair_out_r = 0.0

    if geometry == "transmit":
        a2 = 2.0 * t_amp - 1.0 - 8.0 * gr**2 * pair_out_t
        a1 = t_amp
    else:
        a2 = -8.0 * gr * gl * pair_out_r
        a1 = r_amp
    if abs(a1) == 0.0:
        return math.inf if abs(a2) > 0.0 else math.nan
    return float(abs(a2) ** 2 / abs(a1) ** 4)


# ---------------------------------------------------------------------------
# Double-excited eigenstates and their taxonomy


@dataclass(frozen=True)
class PairState:
    """Symmetric two-excitation eigenstate with complex pair half-energy."""

    energy: complex  # eps_nu: half of the pair eigenvalue, per excitation
    amplitude: np.ndarray  # psi[m, n], symmetric, zero diagonal
    kmap_k: np.ndarray
    kmap: np.ndarray
    label: str = "unclassified"
    overlap: float = 0.0
    detail: dict = field(default_factory=dict)


def _standing_basis(n: int) -> np.ndarray:
    # DST-I orthonormal standing waves with nodes at sites 0 and n+1,
    # q_xi = pi xi / (n + 1); these quantize the finite-chain polaritons
    m = np.arange(1, n + 1)[:, None]
    pos = np.arange(1, n + 1)[None, :]
    return np.sin(math.pi * m * pos / (n + 1)) * math.sqrt(2.0 / (n + 1))


def _overlap(a: np.ndarray, b: np.ndarray) -> float:
    num = abs(np.vdot(a, b)) ** 2
    den = float(np.vdot(a, a).real * np.vdot(b, b).real)
    return num / den if den > 0 else 0.0


def _kmap(psi: np.ndarray, n_k: int = 256):
    n = psi.shape[0]
    ks = np.linspace(-math.pi, math.pi, n_k, endpoint=False)
    phases = np.exp(1j * np.outer(ks, np.arange(1, n + 1)))
    amp = phases @ psi.T  # [k, m] = sum_n psi[m, n] e^{i k n}
    return ks, np.sum(np.abs(amp) ** 2, axis=1) / n


def _classify(psi: np.ndarray) -> tuple[str, float, dict]:
    n = psi.shape[0]
    s = _standing_basis(n)
    offdiag = 1.0 - np.eye(n)

    best_label, best_overlap, detail = "unclassified", 0.0, {}

    coeff = s @ psi @ s.T
    sym = 0.5 * (coeff + coeff.T)
    flat = np.abs(sym)
    order = np.dstack(np.unravel_index(np.argsort(flat, axis=None)[::-1], flat.shape))[0]
    tried = set()
    for xi, xip in order[:6]:
        key = (min(xi, xip), max(xi, xip))
        if key in tried:
            continue
        tried.add(key)
        ansatz = (np.outer(s[xi], s[xip]) + np.outer(s[xip], s[xi])) * offdiag
        ov = _overlap(ansatz, psi)
        if ov > best_overlap:
            best_overlap, best_label = ov, "scattering"
            detail = {"xi": int(xi) + 1, "xi_prime": int(xip) + 1,
                      "k": math.pi * (xi + 1) / (n + 1), "k_prime": math.pi * (xip + 1) / (n + 1)}

    sgn = np.sign(np.subtract.outer(np.arange(n), np.arange(n)))
    coeff_f = s @ (sgn * psi) @ s.T
    anti = 0.5 * (coeff_f - coeff_f.T)
    flat = np.abs(anti)
    order = np.dstack(np.unravel_index(np.argsort(flat, axis=None)[::-1], flat.shape))[0]
    tried = set()
    for xi, xip in order[:6]:
        if xi == xip:
            continue
        key = (min(xi, xip), max(xi, xip))
        if key in tried:
            continue
        tried.add(key)
        ansatz = sgn * (np.outer(s[xi], s[xip]) - np.outer(s[xip], s[xi]))
        ov = _overlap(ansatz, psi)
        if ov > best_overlap:
            best_overlap, best_label = ov, "fermionized"
            detail = {"xi": int(xi) + 1, "xi_prime": int(xip) + 1,
                      "k": math.pi * (xi + 1) / (n + 1), "k_prime": math.pi * (xip + 1) / (n + 1)}

    # bound pair: cos(K (m+n)/2) * exp(-kappa |m-n|)
    dist = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    w = np.array([np.sum(np.abs(psi[dist == d]) ** 2) for d in range(1, n)])
    w = w / max(np.max(w), 1e-300)
    usable = np.flatnonzero(w > 1e-12)
    if len(usable) >= 3:
        slope = np.polyfit(usable[: max(3, len(usable) // 2)],
                           np.log(w[usable[: max(3, len(usable) // 2)]]), 1)[0]
        kappa = max(-0.5 * slope, 0.0)
        if kappa > 0:
            com = np.add.outer(np.arange(1, n + 1), np.arange(1, n + 1)) * 0.5
            envelope = np.exp(-kappa * dist) * offdiag
            for l in range(0, n + 1):
                big_k = math.pi * l / n
                ansatz = np.cos(big_k * com) * envelope
                ov = _overlap(ansatz, psi)
                if ov > best_overlap:
                    best_overlap, best_label = ov, "bound"
                    detail = {"K": big_k, "kappa": kappa}

    # interaction-induced localization: localized x extended product
    try:
        u_svd, sv, _ = np.linalg.svd(psi)
        if len(sv) >= 2 and sv[1] > 1e-8:
            v1, v2 = u_svd[:, 0], u_svd[:, 1]
            pr = lambda v: 1.0 / np.sum(np.abs(v) ** 4)
            if min(pr(v1), pr(v2)) < 0.25 * n and max(pr(v1), pr(v2)) > 0.4 * n:
                ansatz = (np.outer(v1, v2) + np.outer(v2, v1)) * offdiag
                ov = _overlap(ansatz, psi)
                if ov > best_overlap:
                    best_overlap, best_label = ov, "localized"
                    detail = {}
    except np.linalg.LinAlgError:
        pass

    if best_overlap < 0.9:
        return "unclassified", best_overlap, detail
    return best_label, best_overlap, detail


def pair_eigenstates(H: np.ndarray, classify: bool = True, n_k: int = 256) -> list[PairState]:
    """All double-excited eigenstates of a two-level chain, brightest first."""
    h2, pairs = pair_hamiltonian(H)
    vals, vecs = np.linalg.eig(h2)
    order = np.argsort(vals.imag, kind="stable")
    n = H.shape[0]
    states = []
    for idx in order:
        vec = vecs[:, idx]
        norm2 = np.sum(vec * vec)
        if abs(norm2) > 1e-14:
            vec = vec / np.sqrt(norm2)
        psi = np.zeros((n, n), dtype=complex)
        for k, (i, j) in enumerate(pairs):
            psi[i, j] = psi[j, i] = vec[k] / math.sqrt(2.0)
        ks, km = _kmap(psi, n_k)
        label, ov, detail = _classify(psi) if classify else ("unclassified", 0.0, {})
        states.append(
            PairState(energy=complex(vals[idx] / 2.0), amplitude=psi, kmap_k=ks,
                      kmap=km, label=label, overlap=ov, detail=detail)
        )
    return states
