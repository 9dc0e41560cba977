"""Directional coupling and photon-photon correlations of chiral chains.

For a fully chiral chain (no backward emission) photons traverse the atoms
one by one, ``t_N = t_1^N``.  The resonant transmitted pair correlation is
governed by an N-th order residue of the pair-scattering generator and is
evaluated here as a Taylor coefficient of a rational function: with
``rho = gamma / gamma_right``,

    g2_N(0) = (1 + J_N)^2,
    J_N = -2 (rho + 1) / rho * [s^{N-1}] P(s)^N R(s),
    P(s) = (2 + s)(2 rho + s) / (2 rho + 2 + s),
    R(s) = 1 / (2 (rho^2 + 1) - (rho + 1 + s)^2).

The published form of this generator carries a typographically ambiguous
``(gamma/gamma_right)^2`` term in the denominator of R; the reading above,
``(rho^2 + 1)/2`` inside the completed square, together with the overall
``-2 (rho+1)/rho / (N-1)!`` normalization, is the unique one that reduces to
the exact single-atom correlation at N = 1 and whose dominant-pole expansion
reproduces the large-loss asymptote
``g2 ~ (1 - sqrt(2)/(2 rho) exp(4 N / rho))^2`` with its bunching threshold
``N* = rho/8 (3 ln 2 + 2 ln rho)``.

The (N-1)-th Taylor coefficient is computed by exact rational series
arithmetic by default (naive repeated differentiation is catastrophically
unstable at these orders); ``WQED_PRECISION=double`` selects fast
floating-point series instead.  A numeric circular-contour integral of the
same generator is provided as an independent evaluation route, and the
lossless limit of the generator is ``g2 = (4N - 1)^2``.

Note: an independent weak-drive steady-state solve of the cascaded chain
(:func:`wqed.twophoton.g2_zero_weak_drive`) realizes a different pair
bookkeeping and deviates from this generator for N >= 2 while agreeing at
N = 1; the residue / contour / asymptotic trio implemented here is the
internally consistent closed-form set.  See the project decision log for the
cross-method analysis.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .types import Coupling

__all__ = [
    "ChiralG2Request",
    "directional_rates",
    "coupling_from_polarization",
    "chiral_chain_t",
    "g2_single_chiral",
    "g2_chain_chiral",
    "g2_chain_chiral_asymptotic",
    "n_star_chiral",
]

_MAX_RESIDUE_N = 200


@dataclass(frozen=True)
class ChiralG2Request:
    """Parameters of an N-atom fully chiral g2(0) evaluation."""

    n_atoms: int
    gamma_right: float = 1.0
    gamma_nr: float = 0.0
    method: str = "residue"  # residue | contour | asymptotic

    def __post_init__(self) -> None:
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if self.gamma_right <= 0 or self.gamma_nr < 0:
            raise ValueError("rates must be positive (gamma_right) / non-negative (gamma_nr)")
        if self.method not in ("residue", "contour", "asymptotic"):
            raise ValueError(f"unknown method {self.method!r}")


def directional_rates(s: float, gamma1d: float = 1.0) -> tuple[float, float]:
    """Directional emission rates from the guided-mode polarization parameter.

    ``gamma_right = gamma1d (1 + |s|)^2 / (2 (1 + s^2))`` and the mirrored
    expression for ``gamma_left``, normalized so the two add up to
    ``gamma1d``.  ``s = 0`` is linear polarization (symmetric emission),
    ``|s| = 1`` fully chiral one-way coupling.
    """
    if not -1.0 <= s <= 1.0:
        raise ValueError("polarization parameter must lie in [-1, 1]")
    a = abs(s)
    denom = 2.0 * (1.0 + s * s)
    return gamma1d * (1.0 + a) ** 2 / denom, gamma1d * (1.0 - a) ** 2 / denom


def coupling_from_polarization(s: float, gamma1d: float = 1.0, gamma_nr: float = 0.0,
                               **kwargs) -> Coupling:
    right, left = directional_rates(s, gamma1d)
    return Coupling(gamma1d=gamma1d, gamma_nr=gamma_nr,
                    gamma_right=right, gamma_left=left, **kwargs)


def chiral_chain_t(n: int, omega, coupling: Coupling):
    """Transmission of a fully chiral chain: the single-atom amplitude to the n-th power."""
    if coupling.gamma_left != 0.0:
        raise ValueError("chiral_chain_t requires gamma_left = 0")
    omega = np.asarray(omega, dtype=complex)
    t1 = 1.0 + 2j * coupling.gamma_right / (-omega - 1j * (coupling.gamma_nr + coupling.gamma1d))
    t = t1**n
    return complex(t) if omega.ndim == 0 else t


def g2_single_chiral(gamma_nr: float, gamma_right: float) -> float:
    """Resonant g2(0) of one chirally coupled atom.

    ``(gamma + gamma_r)^2 (gamma - 3 gamma_r)^2 / (gamma - gamma_r)^4``:
    equal rates give the divergence marker (perfect bunching), ``gamma = 0``
    gives 9 and ``gamma = 3 gamma_r`` perfect antibunching.
    """
    if gamma_right <= 0 or gamma_nr < 0:
        raise ValueError("invalid rates")
    if gamma_nr == gamma_right:
        return math.inf
    num = (gamma_nr + gamma_right) ** 2 * (gamma_nr - 3.0 * gamma_right) ** 2
    return num / (gamma_nr - gamma_right) ** 4


# -- series helpers (generic over Fraction / float scalars) ------------------


def _poly_mul_trunc(a: list, b: list, k: int) -> list:
    zero = a[0] * 0
    out = [zero] * min(k, len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if i >= k:
            break
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j >= k:
                break
            out[i + j] += ai * bj
    return out


def _series_inv(q: list, k: int, one) -> list:
    out = [one * 0] * k
    out[0] = one / q[0]
    for j in range(1, k):
        acc = one * 0
        for i in range(1, min(j, len(q) - 1) + 1):
            acc += q[i] * out[j - i]
        out[j] = -acc / q[0]
    return out


def _residue_j(n: int, rho, one):
    """J_N = -2 (rho+1)/rho [s^{N-1}] P(s)^N R(s) in the caller's arithmetic."""
    k = n  # coefficients 0 .. n-1
    # A(s)^n, A = (2+s)(2 rho + s) = 4 rho + (2 + 2 rho) s + s^2
    a_pow = [one]
    a = [4 * rho * one, (2 + 2 * rho) * one, one]
    for _ in range(n):
        a_pow = _poly_mul_trunc(a_pow, a, k)
    # (2 rho + 2 + s)^(-n) binomial series
    base = (2 * rho + 2) * one
    b_inv = [one * 0] * k
    c = base ** (-n)
    for j in range(k):
        b_inv[j] = c
        c = c * (-(n + j)) / ((j + 1) * base)
    p_pow = _poly_mul_trunc(a_pow, b_inv, k)
    # R = 1/q, q(s) = (rho-1)^2 - 2 (rho+1) s - s^2
    q = [(rho - 1) * (rho - 1) * one, -2 * (rho + 1) * one, -one]
    series = _poly_mul_trunc(p_pow, _series_inv(q, k, one), k)
    return -2 * (rho + 1) / rho * series[n - 1]


def _contour_j(n: int, rho: float) -> float:
    """Same Taylor coefficient via a circular contour integral of the generator.

    The coefficient can sit many orders below the generator's magnitude on
    the circle (the leading pole contributions cancel), so the trapezoidal
    mean is re-evaluated in mpmath with a working precision sized by the
    measured dynamic range whenever double precision cannot carry it.
    """
    s_star = math.sqrt(2.0 * (rho * rho + 1.0)) - (rho + 1.0)
    r_max = 0.95 * min(s_star, 2.0 * rho + 2.0)
    m_points = 1 << max(10, int(math.ceil(math.log2(8 * max(n, 2)))))
    theta = 2.0 * math.pi * np.arange(m_points) / m_points

    def sample(radius):
        s = radius * np.exp(1j * theta)
        p_over_s = (2.0 + s) * (2.0 * rho + s) / ((2.0 * rho + 2.0 + s) * s)
        r_of_s = 1.0 / (2.0 * (rho * rho + 1.0) - (rho + 1.0 + s) ** 2)
        return p_over_s**n * r_of_s * s  # [s^{n-1}] f = mean of f(s) s^{1-n}

    best_vals, best_score, best_radius = None, math.inf, None
    for frac in (0.15, 0.25, 0.4, 0.55, 0.7, 0.85, 0.999):
        vals = sample(frac * r_max)
        score = float(np.max(np.abs(vals))) / max(abs(np.mean(vals)), 1e-300)
        if score < best_score:
            best_score, best_vals, best_radius = score, vals, frac * r_max
    if best_score < 1e8 or os.environ.get("WQED_PRECISION", "extended") == "double":
        coeff = np.mean(best_vals).real
    else:
        import mpmath as mp

        with mp.workdps(25 + int(math.log10(best_score))):
            radius = mp.mpf(best_radius)
            total = mp.mpf(0)
            for i in range(m_points):
                s = radius * mp.e ** (2j * mp.pi * i / m_points)
                p_over_s = (2 + s) * (2 * rho + s) / ((2 * rho + 2 + s) * s)
                r_of_s = 1 / (2 * (rho * rho + 1) - (rho + 1 + s) ** 2)
                total += (p_over_s**n * r_of_s * s).real
            coeff = float(total / m_points)
    return -2.0 * (rho + 1.0) / rho * coeff


def g2_chain_chiral_asymptotic(n: int, rho: float) -> float:
    """Large-loss asymptote ``(1 - sqrt(2)/(2 rho) exp(4 n / rho))^2``."""
    return (1.0 - math.sqrt(2.0) / (2.0 * rho) * math.exp(4.0 * n / rho)) ** 2


def n_star_chiral(gamma_ratio: float) -> float:
    """Atom number where the resonant chiral g2(0) crosses 1 (bunching threshold)."""
    if gamma_ratio <= 0:
        raise ValueError("gamma ratio must be positive")
    return gamma_ratio / 8.0 * (3.0 * math.log(2.0) + 2.0 * math.log(gamma_ratio))


def g2_chain_chiral(req: ChiralG2Request) -> float:
    """Resonant transmitted g2(0) of a fully chiral chain of ``n_atoms`` atoms."""
    n = req.n_atoms
    rho = req.gamma_nr / req.gamma_right
    if req.method == "asymptotic":
        return g2_chain_chiral_asymptotic(n, rho)
    if n == 1:
        return g2_single_chiral(req.gamma_nr, req.gamma_right)
    if rho == 1.0:
        return math.inf  # zero single-photon transmission: perfect bunching
    if rho == 0.0:
        return float((4 * n - 1) ** 2)  # lossless limit of the residue formula
    if req.method == "contour":
        return (1.0 + _contour_j(n, rho)) ** 2
    if n > _MAX_RESIDUE_N:
        raise ValueError(
            f"residue expansion capped at N = {_MAX_RESIDUE_N}; use method='asymptotic'"
        )
    if os.environ.get("WQED_PRECISION", "extended") == "double":
        j = float(_residue_j(n, rho, 1.0))
    else:
        j = float(_residue_j(n, Fraction(rho), Fraction(1)))
    return (1.0 + j) ** 2
