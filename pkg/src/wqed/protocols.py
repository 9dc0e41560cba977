"""Photon-scattering protocols: GHZ generation and quantum state transfer.

A register of stationary qubits sits next to two waveguides joined by
beamsplitters; a single flying photon occupies one of the two guide channels
(``down``/``up``).  Passing the dimer attached to qubit ``q`` imprints the
conditional phase operator ``|1><1| - |0><0|`` on that qubit (an involution:
it flips the Hadamard states ``|+> <-> |->`` and leaves computational states
up to sign).  Beamsplitters act as the photon Hadamard
``|d> -> (|d> + |u>)/sqrt(2)``, ``|u> -> (|d> - |u>)/sqrt(2)``.

The dimers couple to the ``up`` guide here, and protocols inject the photon
into that guide; with the beamsplitter convention above this makes the GHZ
signs come out as ``(|+>^N + |->^N)/sqrt(2)`` for an ``up`` detection and
``(|+>^N - |->^N)/sqrt(2)`` for ``down``, both exact.

The state vector is dense with ``2^(n_qubits + 1)`` amplitudes (qubits x
photon channel); the protocols are shallow, so no sparse machinery is
needed.  Measurements return the renormalized branch and its Born
probability; nothing in the library draws random numbers (the CLI offers a
seeded sampler on top).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HybridState",
    "DOWN",
    "UP",
    "beamsplitter",
    "dimer_scatter",
    "photon_measure",
    "hadamard_qubit",
    "sigma_z_qubit",
    "qubit_measure_pm",
    "run_ghz",
    "run_state_transfer",
    "ghz_target",
]

DOWN, UP = 0, 1
MAX_QUBITS = 24

_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)  # (|0> + |1>)/sqrt(2)... basis order below
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class HybridState:
    """Qubit register plus one photon channel, amplitudes[qubit_bits, channel].

    Qubit basis per site is ``(|0>, |1>)``; the register index is the bit
    string with qubit 0 as the most significant bit.  The photon index is
    ``DOWN = 0`` or ``UP = 1``.
    """

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self) -> None:
        expected = (2**self.n_qubits, 2)
        if self.amplitudes.shape != expected:
            raise ValueError(f"amplitude array must have shape {expected}")
        if abs(self.norm() - 1.0) > _NORM_TOL:
            raise ValueError("state must be normalized")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def product(cls, qubit_states, channel: int) -> "HybridState":
        """Product state of single-qubit kets with the photon in one channel."""
        n = len(qubit_states)
        if n > MAX_QUBITS:
            raise ValueError(f"register capped at {MAX_QUBITS} qubits")
        reg = np.array([1.0], dtype=complex)
        for q in qubit_states:
            reg = np.kron(reg, np.asarray(q, dtype=complex))
        amps = np.zeros((2**n, 2), dtype=complex)
        amps[:, channel] = reg
        return cls(amplitudes=amps / np.linalg.norm(amps), n_qubits=n)


def ket_plus() -> np.ndarray:
    return np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)


def ket_minus() -> np.ndarray:
    return np.array([-1.0, 1.0], dtype=complex) / math.sqrt(2.0)  # (|1> - |0>)/sqrt 2


def _qubit_axis_view(amps: np.ndarray, n: int, q: int) -> np.ndarray:
    return amps.reshape((2,) * n + (2,)).swapaxes(q, 0)


def beamsplitter(state: HybridState) -> HybridState:
    """Photon Hadamard: |d> -> (|d>+|u>)/sqrt2, |u> -> (|d>-|u>)/sqrt2."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
    return HybridState(state.amplitudes @ h.T, state.n_qubits)


def dimer_scatter(state: HybridState, qubit_index: int) -> HybridState:
    """Conditional phase from the photon traversing the dimer of one qubit.

    On the ``up``-channel component the addressed qubit picks up
    ``|1><1| - |0><0|``; the ``down`` component is untouched.  Applying the
    gate twice is the identity.
    """
    n = state.n_qubits
    if not 0 <= qubit_index < n:
        raise IndexError(f"qubit index {qubit_index} out of range for {n} qubits")
    amps = state.amplitudes.copy()
    view = _qubit_axis_view(amps, n, qubit_index)
    view[0, ..., UP] *= -1.0  # qubit |0> component flips sign
    return HybridState(amps, n)


def photon_measure(state: HybridState, channel: int) -> tuple[np.ndarray, float]:
    """Project the photon on ``channel``; returns (qubit state, probability)."""
    branch = state.amplitudes[:, channel]
    prob = float(np.sum(np.abs(branch) ** 2))
    if prob == 0.0:
        raise ValueError("measurement branch has zero probability")
    return branch / math.sqrt(prob), prob


def _single_qubit_gate(reg: np.ndarray, n: int, q: int, gate: np.ndarray) -> np.ndarray:
    t = reg.reshape((2,) * n).swapaxes(q, 0)
    t = np.tensordot(gate, t, axes=([1], [0]))
    return t.swapaxes(q, 0).reshape(-1)


def hadamard_qubit(reg: np.ndarray, n: int, q: int) -> np.ndarray:
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
    return _single_qubit_gate(reg, n, q, h)


def sigma_z_qubit(reg: np.ndarray, n: int, q: int) -> np.ndarray:
    z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    return _single_qubit_gate(reg, n, q, z)


def qubit_measure_pm(reg: np.ndarray, n: int, q: int, sign: int) -> tuple[np.ndarray, float]:
    """Project qubit ``q`` on |+> (sign=+1) or |-> (sign=-1), remove it."""
    ket = ket_plus() if sign > 0 else ket_minus()
    t = reg.reshape((2,) * n).swapaxes(q, 0)
    reduced = np.tensordot(ket.conj(), t, axes=([0], [0]))
    prob = float(np.sum(np.abs(reduced) ** 2))
    if prob == 0.0:
        raise ValueError("measurement branch has zero probability")
    return reduced.reshape(-1) / math.sqrt(prob), prob


def ghz_target(n: int, sign: int) -> np.ndarray:
    """(|+>^n + sign |->^n)/sqrt(2) as a register vector."""
    plus = np.array([1.0], dtype=complex)
    minus = np.array([1.0], dtype=complex)
    for _ in range(n):
        plus = np.kron(plus, ket_plus())
        minus = np.kron(minus, ket_minus())
    v = (plus + sign * minus) / math.sqrt(2.0)
    return v


def run_ghz(n_qubits: int, measured_channel: int) -> tuple[np.ndarray, float]:
    """GHZ generation: returns (post-measurement register, outcome probability).

    Initialize ``|+>^n`` with the photon in the dimer guide, beamsplit,
    scatter on every qubit in order, beamsplit again and project the photon.
    The ``up`` outcome yields ``(|+>^n + |->^n)/sqrt 2`` exactly, ``down``
    the minus sign; both occur with probability 1/2.
    """
    if n_qubits < 2:
        raise ValueError("GHZ protocol needs at least two qubits")
    if measured_channel not in (DOWN, UP):
        raise ValueError("channel must be DOWN (0) or UP (1)")
    state = HybridState.product([ket_plus()] * n_qubits, UP)
    state = beamsplitter(state)
    for q in range(n_qubits):
        state = dimer_scatter(state, q)
    state = beamsplitter(state)
    return photon_measure(state, measured_channel)


def run_state_transfer(c_plus: complex, c_minus: complex) -> tuple[np.ndarray, dict]:
    """Transfer ``c+ |+> + c- |->`` from qubit 1 to qubit 2 via one photon.

    Three-beamsplitter circuit with a dimer scattering after the first and
    second beamsplitters, followed by the projective measurements and a
    corrective sigma_z / Hadamard pair.  With the channel conventions of this
    module the exact branch detects the photon in the non-dimer (down) guide
    and projects qubit 1 with the sigma_z correction applied first; a final
    Hadamard on qubit 2 completes the transfer with
    ``(a_plus, a_minus) = (c_plus, c_minus)`` exactly, global phase included.
    """
    norm = abs(c_plus) ** 2 + abs(c_minus) ** 2
    if abs(norm - 1.0) > 1e-10:
        raise ValueError("input coefficients must be normalized")
    q1 = c_plus * ket_plus() + c_minus * ket_minus()
    state = HybridState.product([q1, ket_plus()], UP)
    state = beamsplitter(state)
    state = dimer_scatter(state, 0)
    state = beamsplitter(state)
    state = dimer_scatter(state, 1)
    state = beamsplitter(state)

    reg, p_phot = photon_measure(state, DOWN)
    reg = sigma_z_qubit(reg, 2, 0)
    reg, p_q1 = qubit_measure_pm(reg, 2, 0, +1)
    reg = hadamard_qubit(reg, 1, 0)
    a_plus = complex(np.vdot(ket_plus(), reg))
    a_minus = complex(np.vdot(ket_minus(), reg))
    return np.array([a_plus, a_minus]), {"p_photon": p_phot, "p_qubit1": p_q1}
