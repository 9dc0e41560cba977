"""Waveguide QED of ordered atom arrays.

Collective eigenmodes, single-photon spectra, two-photon scattering and
photon-photon correlations, chiral chains, 2D atomic metasurfaces and
photon-scattering quantum protocols, with cross-method oracles throughout.
All 1D frequencies are detunings from the atomic resonance in units of the
guided half-decay rate; see :mod:`wqed.types` for the conventions.
"""

from . import chiral, lattice2d, modes, protocols, spectra1d, twophoton
from .types import AtomChain, Coupling

__all__ = [
    "AtomChain",
    "Coupling",
    "modes",
    "spectra1d",
    "twophoton",
    "chiral",
    "lattice2d",
    "protocols",
]

__version__ = "0.1.0"
