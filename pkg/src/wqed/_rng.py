"""Deterministic sub-seed derivation for ensemble runs.

Every stochastic trial draws from its own ``numpy`` generator seeded by a
splitmix64 walk from the master seed, so results do not depend on how trials
are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def subseed(master: int, index: int) -> int:
    """Sub-seed for trial ``index`` derived from ``master``."""
    state = master & _MASK
    # two mixing rounds keyed by the index keep adjacent trials uncorrelated
    state, _ = splitmix64(state ^ (index & _MASK))
    state, out = splitmix64(state)
    return out


def trial_rng(master: int, index: int) -> np.random.Generator:
    return np.random.default_rng(subseed(master, index))
