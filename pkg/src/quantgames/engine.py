"""Numeric quantization of 2x2 games with a Werner-like initial state.

Payoffs are computed by brute force: evolve the state with ``U1 (x) U2``,
build the delta-dependent measurement projectors and take traces. This is
the ground truth every closed form in :mod:`quantgames.closed_form` is
checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game_model import OUTCOMES, GameDefinition
from .quantum_core import (
    DensityMatrix,
    adjoint,
    tensor_product,
    trace_of_product,
    validate_density,
)

THETA_MAX = math.pi
PHI_MAX = math.pi / 2
DELTA_MAX = math.pi / 2
# Slack for angles typed with a few decimals (e.g. 3.1415927); such values are clamped.
ANGLE_SLACK = 1e-6

# Pure component of the initial state is (|00> + i|11>)/sqrt(2).
BELL_PHASE = 1j


def _clamp_angle(value: float, upper: float, label: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < -ANGLE_SLACK or value > upper + ANGLE_SLACK:
        raise ValueError(f"{label}={value!r} outside [0, {upper:.10g}]")
    return min(max(value, 0.0), upper)


@dataclass(frozen=True)
class StrategyParams:
    """A player's two-parameter strategy, ``theta`` in [0, pi], ``phi`` in [0, pi/2]."""

    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _clamp_angle(self.theta, THETA_MAX, "theta"))
        object.__setattr__(self, "phi", _clamp_angle(self.phi, PHI_MAX, "phi"))

    def __iter__(self):
        yield self.theta
        yield self.phi


COOPERATE = StrategyParams(0.0, 0.0)
DEFECT = StrategyParams(math.pi, 0.0)
QUANTUM = StrategyParams(0.0, math.pi / 2)


def check_werner_parameter(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"Werner parameter p={p!r} outside [0, 1]")
    return p


def check_delta(delta: float) -> float:
    return _clamp_angle(delta, DELTA_MAX, "delta")


def bell_vector(phase: complex = BELL_PHASE) -> np.ndarray:
    return np.array([1, 0, 0, phase], dtype=complex) / math.sqrt(2)


def werner_state(p: float, phase: complex = BELL_PHASE) -> DensityMatrix:
    """``p |psi><psi| + (1-p)/4 I`` with ``|psi> = (|00> + phase |11>)/sqrt(2)``.

    ``phase`` defaults to ``1j``. Passing ``phase=1`` gives the plain
    ``|phi+>`` Bell state, which does not reproduce the entangled-basis
    payoffs (kept only for comparison).
    """
    p = check_werner_parameter(p)
    psi = bell_vector(phase)
    return validate_density(p * np.outer(psi, psi.conj()) + (1 - p) / 4 * np.eye(4))


def strategy_unitary(s: StrategyParams) -> np.ndarray:
    """``cos(theta/2) R + sin(theta/2) C`` with ``R = diag(e^{i phi}, e^{-i phi})``
    and ``C|0> = -|1>``, ``C|1> = |0>``."""
    c, sn = math.cos(s.theta / 2), math.sin(s.theta / 2)
    e = complex(math.cos(s.phi), math.sin(s.phi))
    return np.array([[e * c, sn], [-sn, e.conjugate() * c]], dtype=complex)


def evolve(rho: DensityMatrix, s1: StrategyParams, s2: StrategyParams) -> DensityMatrix:
    w = tensor_product(strategy_unitary(s1), strategy_unitary(s2))
    out = w @ rho.mat @ adjoint(w)
    # a failure here is a bug, not bad input
    return validate_density(out)


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    delta: float
    vectors: dict[str, np.ndarray]
    projectors: dict[str, np.ndarray]


def basis_vectors(delta: float) -> dict[str, np.ndarray]:
    c, s = math.cos(delta / 2), math.sin(delta / 2)
    e = np.eye(4, dtype=complex)
    return {
        "00": c * e[0] + 1j * s * e[3],
        "01": c * e[1] - 1j * s * e[2],
        "10": c * e[2] - 1j * s * e[1],
        "11": c * e[3] + 1j * s * e[0],
    }


def measurement_basis(delta: float) -> MeasurementBasis:
    """Projectors onto the delta-entangled basis; delta=0 is the computational basis,
    delta=pi/2 the maximally entangled one."""
    delta = check_delta(delta)
    vecs = basis_vectors(delta)
    projs = {}
    for k, v in vecs.items():
        proj = np.outer(v, v.conj())
        proj.flags.writeable = False
        projs[k] = proj
    return MeasurementBasis(delta, vecs, projs)


def payoff_operators(game: GameDefinition, basis: MeasurementBasis) -> tuple[np.ndarray, np.ndarray]:
    ops = []
    for player in ("A", "B"):
        op = np.zeros((4, 4), dtype=complex)
        for k in OUTCOMES:
            op += game.payoff(player, k) * basis.projectors[k]
        ops.append(op)
    return ops[0], ops[1]


def outcome_probabilities(rho: DensityMatrix, basis: MeasurementBasis) -> dict[str, float]:
    """``Tr(P_ab rho)`` for each outcome; imaginary parts are roundoff and dropped."""
    return {k: trace_of_product(basis.projectors[k], rho.mat).real for k in OUTCOMES}


def final_state(p: float, s1: StrategyParams, s2: StrategyParams, phase: complex = BELL_PHASE) -> DensityMatrix:
    return evolve(werner_state(p, phase), s1, s2)


def payoffs_numeric(
    game: GameDefinition,
    p: float,
    delta: float,
    s1: StrategyParams,
    s2: StrategyParams,
    phase: complex = BELL_PHASE,
) -> tuple[float, float]:
    """Alice's and Bob's payoffs ``Tr(P^j rho_f)`` by explicit trace."""
    rho_f = final_state(p, s1, s2, phase)
    probs = outcome_probabilities(rho_f, measurement_basis(delta))
    return tuple(sum(game.payoff(j, k) * probs[k] for k in OUTCOMES) for j in ("A", "B"))


def _unitaries(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    c, s = np.cos(thetas / 2), np.sin(thetas / 2)
    e = np.exp(1j * phis)
    u = np.empty(thetas.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = e * c
    u[..., 0, 1] = s
    u[..., 1, 0] = -s
    u[..., 1, 1] = e.conj() * c
    return u


def payoff_batch(
    game: GameDefinition,
    p: float,
    delta: float,
    player: str,
    opponent: StrategyParams,
    thetas,
    phis,
) -> np.ndarray:
    """Vectorized payoff of ``player`` over arrays of its own (theta, phi), opponent fixed.

    Same trace computation as :func:`payoffs_numeric`, broadcast over the
    responder's parameters for best-response searches.
    """
    p = check_werner_parameter(p)
    thetas, phis = np.broadcast_arrays(np.asarray(thetas, float), np.asarray(phis, float))
    own = _unitaries(thetas, phis)
    other = strategy_unitary(opponent)
    if player == "A":
        w = np.einsum("...ij,kl->...ikjl", own, other)
    else:
        w = np.einsum("ij,...kl->...ikjl", other, own)
    w = w.reshape(thetas.shape + (4, 4))
    rho = werner_state(p).mat
    rho_f = w @ rho @ np.conj(np.swapaxes(w, -1, -2))
    op = payoff_operators(game, measurement_basis(delta))[0 if player == "A" else 1]
    return np.einsum("ij,...ji->...", op, rho_f).real
