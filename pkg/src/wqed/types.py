"""Shared domain types for waveguide-coupled atom arrays.

Unit conventions used throughout the package:

* Frequencies are detunings from the atomic resonance ``omega0`` measured in
  units of the guided half-decay rate ``gamma1d`` (lowercase gammas are
  half-widths, ``Gamma = 2 * gamma``).
* Geometry enters only through the optical phases ``theta_m = omega0 z_m / c``
  of the atom positions.
* The absolute resonance frequency appears only through the dimensionless
  ratio ``gamma_over_omega0`` where Bragg or retardation physics needs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["AtomChain", "Coupling"]

_RATE_BALANCE_TOL = 1e-12


@dataclass(frozen=True)
class Coupling:
    """Radiative and nonradiative rates of one atom coupled to the guide.

    ``gamma_right``/``gamma_left`` are the directional emission rates; they
    must add up to ``gamma1d``.  When not given, symmetric coupling
    ``gamma1d / 2`` each is assumed.  ``anharmonicity_u`` is the on-site
    photon-photon interaction; ``math.inf`` selects the two-level (hard-core)
    limit.  ``markovian=False`` makes propagation phases frequency dependent,
    which requires a positive ``gamma_over_omega0``.
    """

    gamma1d: float = 1.0
    gamma_nr: float = 0.0
    gamma_right: float | None = None
    gamma_left: float | None = None
    anharmonicity_u: float = math.inf
    gamma_over_omega0: float = 0.0
    markovian: bool = True

    def __post_init__(self) -> None:
        if not self.gamma1d > 0:
            raise ValueError(f"gamma1d must be positive, got {self.gamma1d}")
        if self.gamma_nr < 0:
            raise ValueError(f"gamma_nr must be >= 0, got {self.gamma_nr}")
        if self.gamma_over_omega0 < 0:
            raise ValueError("gamma_over_omega0 must be >= 0")
        right, left = self.gamma_right, self.gamma_left
        if right is None and left is None:
            right = left = 0.5 * self.gamma1d
        elif right is None:
            right = self.gamma1d - left
        elif left is None:
            left = self.gamma1d - right
        if right < 0 or left < 0:
            raise ValueError("directional rates must be >= 0")
        if abs(right + left - self.gamma1d) > _RATE_BALANCE_TOL * max(1.0, self.gamma1d):
            raise ValueError(
                f"gamma_right + gamma_left = {right + left} does not match gamma1d = {self.gamma1d}"
            )
        object.__setattr__(self, "gamma_right", float(right))
        object.__setattr__(self, "gamma_left", float(left))

    @property
    def beta(self) -> float:
        """Fraction of the total decay that goes into the guided mode."""
        return self.gamma1d / (self.gamma1d + self.gamma_nr)

    @property
    def xi(self) -> float:
        """Coupling asymmetry ``gamma_left / gamma_right`` (inf for pure left)."""
        if self.gamma_right == 0.0:
            return math.inf
        return self.gamma_left / self.gamma_right

    @property
    def is_symmetric(self) -> bool:
        return math.isclose(self.gamma_right, self.gamma_left, rel_tol=0.0,
                            abs_tol=_RATE_BALANCE_TOL * max(1.0, self.gamma1d))

    @property
    def gamma_total(self) -> float:
        """Half-width of the single-atom resonance, ``gamma1d + gamma_nr``."""
        return self.gamma1d + self.gamma_nr


@dataclass(frozen=True)
class AtomChain:
    """Ordered 1D array of atoms given by their optical phases.

    ``phases[m] = omega0 * z_m / c`` must be non-decreasing; equal phases are
    allowed and describe the ``d = 0`` Dicke limit.  An empty chain is a valid
    degenerate object (vacuum waveguide); operations that need at least one
    atom check for it explicitly.
    """

    phases: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        phases = tuple(float(p) for p in self.phases)
        if any(b < a for a, b in zip(phases, phases[1:])):
            raise ValueError("phases must be non-decreasing")
        object.__setattr__(self, "phases", phases)

    @classmethod
    def periodic(cls, n: int, phi: float, phi0: float = 0.0) -> "AtomChain":
        """Regular chain of ``n`` atoms with inter-atom phase ``phi``."""
        if n < 0:
            raise ValueError("n must be >= 0")
        return cls(tuple(phi0 + phi * m for m in range(n)))

    @property
    def n(self) -> int:
        return len(self.phases)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.phases, dtype=float)
