"""Polylogarithms on the unit circle, Li_s(e^{i*theta}) for integer s >= 2.

Primary route: direct summation of z^n / n^s followed by an Euler
transformation (Newton forward differences of the tail) that accelerates the
oscillatory remainder; the direct part is capped at 1e5 terms.  Close to the
singular point z = 1 the cap cannot reach the 1e-10 error budget, so the
evaluation switches to the exact log-series expansion of Li_s around mu = 0,

    Li_s(e^mu) = mu^(s-1)/(s-1)! * (H_{s-1} - ln(-mu)) + sum_{k != s-1} zeta(s-k) mu^k / k!,

which converges for |mu| < 2*pi.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

_SERIES_CAP = 100_000
_SMALL_THETA = 0.05  # below this the log-series expansion is used
_EULER_MAX_ORDER = 48

_ZETA_POS = {2: math.pi**2 / 6, 3: 1.2020569031595942854, 4: math.pi**4 / 90,
             5: 1.0369277551433699263}


@lru_cache(maxsize=8)
def _bernoulli_table(n: int) -> tuple[float, ...]:
    # B_0 .. B_n with B_1 = -1/2, via the standard recurrence
    b = [0.0] * (n + 1)
    b[0] = 1.0
    for m in range(1, n + 1):
        acc = 0.0
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b[m] = -acc / (m + 1)
    return tuple(b)


def _zeta_int(n: int) -> float:
    """zeta at an integer argument n <= 5, n != 1 (all that the expansion needs)."""
    if n >= 2:
        return _ZETA_POS[n]
    if n == 0:
        return -0.5
    if n < 0 and n % 2 == 0:
        return 0.0
    m = -n  # odd positive
    b = _bernoulli_table(m + 1)
    return -b[m + 1] / (m + 1)


def _li_log_expansion(s: int, theta: float) -> complex:
    mu = 1j * theta
    harmonic = sum(1.0 / j for j in range(1, s))
    total = mu ** (s - 1) / math.factorial(s - 1) * (harmonic - cmath.log(-mu))
    term = 1.0 + 0.0j  # mu^k / k!
    for k in range(0, 80):
        if k != s - 1:
            contrib = _zeta_int(s - k) * term
            total += contrib
            if k > 4 and abs(contrib) < 1e-18:
                break
        term *= mu / (k + 1)
    return total


def _li_series_euler(s: int, theta: float) -> complex:
    z = cmath.exp(1j * theta)
    n_direct = min(_SERIES_CAP, max(1000, int(math.ceil(35.0 / theta))))
    n = np.arange(1, n_direct + 1)
    direct = complex(np.sum(np.exp(1j * theta * n) / n.astype(float) ** s))

    # Euler transformation of the tail sum_{j>=0} a_j z^j, a_j = (n_direct+1+j)^-s
    a = (n_direct + 1 + np.arange(_EULER_MAX_ORDER + 1.0)) ** (-float(s))
    w = z / (1.0 - z)
    tail = 0.0 + 0.0j
    prev = math.inf
    factor = z ** (n_direct + 1) / (1.0 - z)
    for k in range(_EULER_MAX_ORDER + 1):
        term = factor * w**k * a[0]
        mag = abs(term)
        if mag > prev:  # asymptotic series: stop at the smallest term
            break
        tail += term
        prev = mag
        a = np.diff(a)
    return direct + tail


def polylog_circle(s: int, theta: float) -> complex:
    """Li_s(e^{i*theta}) for integer s >= 2, any real theta."""
    if s < 2:
        raise ValueError("only s >= 2 is supported on the unit circle")
    theta = math.fmod(theta, 2.0 * math.pi)
    if theta < 0.0:
        theta += 2.0 * math.pi
    if theta == 0.0:
        return complex(_zeta_int(s))
    if theta > math.pi:  # coefficients are real, use the reflection
        return polylog_circle(s, 2.0 * math.pi - theta).conjugate()
    if theta < _SMALL_THETA:
        return _li_log_expansion(s, theta)
    return _li_series_euler(s, theta)
