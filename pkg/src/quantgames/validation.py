"""Seeded oracle suite behind ``quantgames validate``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_form import (
    CERTIFIED_TERMS,
    audit_trace_terms,
    payoff_entangled,
    payoff_product,
    random_strategy,
)
from .engine import (
    DELTA_MAX,
    check_delta,
    final_state,
    measurement_basis,
    outcome_probabilities,
    payoffs_numeric,
)
from .game_model import GameDefinition, canonical_game
from .quantum_core import TOL_NUM, DensityError

TOL_EXACT = 1e-12


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    certified: bool = True

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance


@dataclass
class ValidationReport:
    samples: int
    seed: int
    checks: list[Check] = field(default_factory=list)
    audit: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.certified)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "tolerance": c.tolerance,
                    "certified": c.certified,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
            "audit": self.audit,
        }


def _random_game(rng) -> GameDefinition:
    a = rng.uniform(-5, 5, size=(2, 2))
    b = rng.uniform(-5, 5, size=(2, 2))
    return GameDefinition("random", a.tolist(), b.tolist())


def run_validation(samples: int, seed: int) -> ValidationReport:
    """Closed forms vs explicit traces at both endpoints, plus state invariants.

    The printed ``11`` term at delta = 0 is reported as an uncertified check.
    """
    report = ValidationReport(samples, seed)
    if samples <= 0:
        return report
    rng = np.random.default_rng(seed)
    games = [canonical_game(n) for n in ("pd", "cg", "bos")]

    endpoint = {"entangled": 0.0, "product": 0.0}
    completeness = linearity = swap = 0.0
    invalid = 0
    for _ in range(samples):
        p = float(rng.uniform(0, 1))
        s1, s2 = random_strategy(rng), random_strategy(rng)
        delta = check_delta(float(rng.uniform(0, DELTA_MAX)))
        custom = _random_game(rng)
        for game in (*games, custom):
            for name, d, closed in (("entangled", DELTA_MAX, payoff_entangled), ("product", 0.0, payoff_product)):
                num = payoffs_numeric(game, p, d, s1, s2)
                cf = closed(game, p, s1, s2)
                endpoint[name] = max(endpoint[name], abs(num[0] - cf[0]), abs(num[1] - cf[1]))
        try:
            rho_f = final_state(p, s1, s2)
        except DensityError:
            invalid += 1
            continue
        for d in (0.0, DELTA_MAX, delta):
            probs = outcome_probabilities(rho_f, measurement_basis(d))
            completeness = max(completeness, abs(sum(probs.values()) - 1.0))
        pd = games[0]
        at_p = payoffs_numeric(pd, p, delta, s1, s2)
        at_1 = payoffs_numeric(pd, 1.0, delta, s1, s2)
        at_0 = payoffs_numeric(pd, 0.0, delta, s1, s2)
        for j in (0, 1):
            linearity = max(linearity, abs(at_p[j] - (p * at_1[j] + (1 - p) * at_0[j])))
        for g in games[:2]:
            ab = payoffs_numeric(g, p, delta, s1, s2)
            ba = payoffs_numeric(g, p, delta, s2, s1)
            swap = max(swap, abs(ab[0] - ba[1]), abs(ab[1] - ba[0]))

    report.checks += [
        Check("closed_form_vs_numeric_entangled", endpoint["entangled"], TOL_NUM),
        Check("closed_form_vs_numeric_product", endpoint["product"], TOL_NUM),
        Check("measurement_completeness", completeness, TOL_EXACT),
        Check("density_validity_failures", float(invalid), 0.0),
        Check("linearity_in_p", linearity, TOL_EXACT),
        Check("player_swap_symmetry", swap, TOL_EXACT),
    ]

    audit = audit_trace_terms(samples, seed)
    for slice_name, terms in audit.slices.items():
        for term, dev in terms.items():
            certified = term in CERTIFIED_TERMS.get(slice_name, ())
            report.checks.append(
                Check(f"trace_term_{term}_{slice_name}", dev.max_abs, TOL_NUM, certified=certified)
            )
    report.audit = audit.to_dict()
    return report


def format_report(report: ValidationReport) -> str:
    lines = [f"samples={report.samples} seed={report.seed}"]
    for c in report.checks:
        if c.certified:
            status = "PASS" if c.passed else "FAIL"
        else:
            status = "NOTE"
        lines.append(f"{status} {c.name} value={c.value:.3e} tol={c.tolerance:.0e}")
    if any(not c.certified and not c.passed for c in report.checks):
        lines.append(
            "note: the printed general-delta 11 term disagrees with the explicit trace "
            "away from delta=pi/2 (known transcription error, not a failure)"
        )
    lines.append("result: " + ("ok" if report.ok else "FAILED"))
    return "\n".join(lines) + "\n"
