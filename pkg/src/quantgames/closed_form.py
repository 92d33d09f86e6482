"""Analytic payoff expressions and their audit against the numeric engine.

Only the two endpoint cases are trusted for payoffs: entangled measurement
(delta = pi/2) and product measurement (delta = 0). The general-delta
outcome probabilities are transcribed as published and are only used by
:func:`audit_trace_terms`, which measures how far they drift from the
explicit trace.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from math import cos, sin

import numpy as np

from .engine import (
    DELTA_MAX,
    QUANTUM,
    StrategyParams,
    check_delta,
    check_werner_parameter,
    final_state,
    measurement_basis,
    outcome_probabilities,
)
from .game_model import OUTCOMES, GameDefinition, canonical_game
from .quantum_core import TOL_NUM


@dataclass(frozen=True)
class TraceTermSet:
    t00: float
    t01: float
    t10: float
    t11: float

    def as_dict(self) -> dict[str, float]:
        return {"00": self.t00, "01": self.t01, "10": self.t10, "11": self.t11}

    @property
    def out_of_range(self) -> tuple[str, ...]:
        """Outcome labels whose value is not a probability (flagged, not rejected)."""
        return tuple(k for k, v in self.as_dict().items() if not -1e-12 <= v <= 1 + 1e-12)


def paper_trace_terms(p: float, delta: float, s1: StrategyParams, s2: StrategyParams) -> TraceTermSet:
    """Published general-delta expressions for ``Tr(P_ab rho_f)``, transcribed verbatim.

    The ``11`` term agrees with the explicit trace only at delta = pi/2; it is
    kept as printed so the audit can report the discrepancy.
    """
    t1, f1 = s1
    t2, f2 = s2
    c1, c2 = cos(t1 / 2) ** 2, cos(t2 / 2) ** 2
    q1, q2 = sin(t1 / 2) ** 2, sin(t2 / 2) ** 2
    st = sin(t1) * sin(t2)
    sd = sin(delta)
    fsum = f1 + f2

    t00 = p * (
        (1 - sin(fsum) ** 2 * sd) * c1 * c2
        + (sd - 1) / 2 * (c1 + c2 - 0.5 * st * sin(fsum))
        - sd / 2
    ) + (1 + p) / 4
    t01 = p * (
        (1 + cos(2 * f1) * sd) / 2 * c1 * q2
        + (1 - cos(2 * f2) * sd) / 2 * q1 * c2
        + ((-1 + sd) * sin(f1) * cos(f2) - (1 + sd) * cos(f1) * sin(f2)) / 4 * st
    ) + (1 - p) / 4
    t10 = p * (
        (1 - cos(2 * f1) * sd) / 2 * c1 * q2
        + (1 + cos(2 * f2) * sd) / 2 * q1 * c2
        - ((1 + sd) * sin(f1) * cos(f2) + (1 - sd) * cos(f1) * sin(f2)) / 4 * st
    ) + (1 - p) / 4
    t11 = p * (
        (1 - cos(fsum) ** 2 * sd) * c1 * c2
        + (sd + 1) / 2 * (q1 * q2 + 0.5 * st * sin(fsum))
    ) + (1 - p) / 4
    return TraceTermSet(t00, t01, t10, t11)


def _entangled_weights(s1: StrategyParams, s2: StrategyParams) -> dict[str, float]:
    t1, f1 = s1
    t2, f2 = s2
    c1, s1_ = cos(t1 / 2), sin(t1 / 2)
    c2, s2_ = cos(t2 / 2), sin(t2 / 2)
    return {
        "00": cos(f1 + f2) ** 2 * c1**2 * c2**2,
        "01": (cos(f1) * c1 * s2_ - sin(f2) * s1_ * c2) ** 2,
        "10": (sin(f1) * c1 * s2_ - cos(f2) * s1_ * c2) ** 2,
        "11": (c1 * c2 * sin(f1 + f2) + s1_ * s2_) ** 2,
    }


def _product_weights(s1: StrategyParams, s2: StrategyParams) -> dict[str, float]:
    t1, f1 = s1
    t2, f2 = s2
    cross = 0.5 * sin(t1) * sin(t2) * sin(f1 + f2)
    same = cos(t1 / 2) ** 2 * cos(t2 / 2) ** 2 + sin(t1 / 2) ** 2 * sin(t2 / 2) ** 2 + cross
    mixed = cos(t1 / 2) ** 2 * sin(t2 / 2) ** 2 + sin(t1 / 2) ** 2 * cos(t2 / 2) ** 2 - cross
    return {"00": same / 2, "11": same / 2, "01": mixed / 2, "10": mixed / 2}


def _assemble(game, p, weights):
    p = check_werner_parameter(p)
    out = []
    for j in ("A", "B"):
        pay = game.payoffs(j)
        out.append(p * sum(pay[k] * weights[k] for k in OUTCOMES) + (1 - p) / 4 * sum(pay.values()))
    return out[0], out[1]


def payoff_entangled(game: GameDefinition, p: float, s1: StrategyParams, s2: StrategyParams) -> tuple[float, float]:
    """Closed-form payoffs for measurement in the maximally entangled basis."""
    return _assemble(game, p, _entangled_weights(s1, s2))


def payoff_product(game: GameDefinition, p: float, s1: StrategyParams, s2: StrategyParams) -> tuple[float, float]:
    """Closed-form payoffs for measurement in the product basis.

    Phases enter only through ``sin(phi1 + phi2)``.
    """
    return _assemble(game, p, _product_weights(s1, s2))


def payoff_closed_form(game, p, delta, s1, s2) -> tuple[float, float]:
    """Dispatch to the endpoint closed form; interior delta has none."""
    delta = check_delta(delta)
    if delta == 0.0:
        return payoff_product(game, p, s1, s2)
    if delta == DELTA_MAX:
        return payoff_entangled(game, p, s1, s2)
    raise ValueError("closed forms exist only for delta = 0 or delta = pi/2")


def _canonical_label(game) -> str:
    if isinstance(game, str):
        label = game.lower()
        if label not in ("pd", "cg"):
            raise ValueError(f"no closed NE margin for game {game!r}; supported: pd, cg")
        return label
    for label in ("pd", "cg"):
        ref = canonical_game(label)
        if game.payoff_a == ref.payoff_a and game.payoff_b == ref.payoff_b:
            return label
    raise ValueError(f"no closed NE margin for game {game.name!r}; supported: canonical pd, cg")


def ne_margin(game, p: float, s1: StrategyParams) -> float:
    """Alice's loss from deviating unilaterally from (Q, Q) to ``s1`` (entangled basis).

    Non-negative everywhere means (Q, Q) survives Alice's deviations; Bob's
    condition is the mirror image.
    """
    label = _canonical_label(game)
    p = check_werner_parameter(p)
    th, ph = s1
    if label == "pd":
        return p * (3 * sin(th / 2) ** 2 + 2 * cos(th / 2) ** 2 * cos(ph) ** 2)
    return p * (2 + cos(th / 2) ** 2 * (3 * cos(ph) ** 2 - 2))


def ne_margin_from_payoffs(game: GameDefinition, p: float, s1: StrategyParams) -> float:
    return payoff_entangled(game, p, QUANTUM, QUANTUM)[0] - payoff_entangled(game, p, s1, QUANTUM)[0]


SLICES = ("delta_0", "delta_pi_2", "interior")


@dataclass
class TermDeviation:
    max_abs: float = 0.0
    argmax: dict | None = None


@dataclass
class AuditReport:
    sample_count: int
    seed: int
    slices: dict[str, dict[str, TermDeviation]] = field(default_factory=dict)
    out_of_range: dict[str, int] = field(default_factory=dict)

    def max_deviation(self, slice_name: str, term: str) -> float:
        return self.slices[slice_name][term].max_abs

    def to_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "slices": {
                s: {t: asdict(dev) for t, dev in terms.items()} for s, terms in self.slices.items()
            },
            "out_of_range": dict(self.out_of_range),
        }


def random_strategy(rng: np.random.Generator) -> StrategyParams:
    return StrategyParams(rng.uniform(0, math.pi), rng.uniform(0, math.pi / 2))


def audit_trace_terms(sample_count: int, seed: int) -> AuditReport:
    """Compare :func:`paper_trace_terms` with explicit traces at random points.

    Each sample draws ``p, s1, s2`` and an interior ``delta``, then evaluates
    the delta = 0, delta = pi/2 and interior slices. Draw order is fixed, so
    equal seeds give identical reports.
    """
    if sample_count < 0:
        raise ValueError("sample_count must be non-negative")
    report = AuditReport(sample_count, seed)
    if sample_count == 0:
        return report
    report.slices = {s: {t: TermDeviation() for t in OUTCOMES} for s in SLICES}
    report.out_of_range = {s: 0 for s in SLICES}
    rng = np.random.default_rng(seed)
    for _ in range(sample_count):
        p = float(rng.uniform(0, 1))
        s1, s2 = random_strategy(rng), random_strategy(rng)
        interior = float(rng.uniform(0, DELTA_MAX))
        rho_f = final_state(p, s1, s2)
        for name, delta in zip(SLICES, (0.0, DELTA_MAX, interior)):
            printed = paper_trace_terms(p, delta, s1, s2)
            exact = outcome_probabilities(rho_f, measurement_basis(delta))
            if printed.out_of_range:
                report.out_of_range[name] += 1
            for term, value in printed.as_dict().items():
                dev = abs(value - exact[term])
                slot = report.slices[name][term]
                if slot.argmax is None or dev > slot.max_abs:
                    slot.max_abs = dev
                    slot.argmax = {
                        "p": p,
                        "delta": delta,
                        "theta1": s1.theta,
                        "phi1": s1.phi,
                        "theta2": s2.theta,
                        "phi2": s2.phi,
                    }
    return report


# Terms whose printed form is expected to match the explicit trace.
CERTIFIED_TERMS = {
    "delta_pi_2": ("00", "01", "10", "11"),
    "delta_0": ("00", "01", "10"),
}


def certified_audit_ok(report: AuditReport, tol: float = TOL_NUM) -> bool:
    if not report.slices:
        return True
    return all(
        report.max_deviation(s, t) <= tol for s, terms in CERTIFIED_TERMS.items() for t in terms
    )
