"""Nash-equilibrium checks, best responses and strategic-form sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import (
    COOPERATE,
    DEFECT,
    DELTA_MAX,
    PHI_MAX,
    THETA_MAX,
    StrategyParams,
    check_werner_parameter,
    payoff_batch,
    payoffs_numeric,
)
from .game_model import (
    GameDefinition,
    PayoffElements,
    StrategicForm,
    classify_strategic_form,
)

BASIS_DELTA = {"entangled": DELTA_MAX, "product": 0.0}
# payoff differences below this count as ties in the best-response search
TIE_TOL = 1e-12


def basis_delta(basis_kind: str) -> float:
    try:
        return BASIS_DELTA[basis_kind]
    except KeyError:
        raise ValueError(f"basis must be 'entangled' or 'product', got {basis_kind!r}") from None


@dataclass(frozen=True)
class StrategyProfile:
    s1: StrategyParams
    s2: StrategyParams


@dataclass(frozen=True)
class SearchConfig:
    grid_theta: int = 65
    grid_phi: int = 33
    refine_iterations: int = 20
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.grid_theta < 2 or self.grid_phi < 2:
            raise ValueError("grid sizes must be at least 2")
        if self.refine_iterations < 0:
            raise ValueError("refine_iterations must be non-negative")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class SweepRecord:
    p: float
    elements: PayoffElements
    form: StrategicForm


def _payoff(game, p, delta, player, own: StrategyParams, opponent: StrategyParams) -> float:
    if player == "A":
        return payoffs_numeric(game, p, delta, own, opponent)[0]
    return payoffs_numeric(game, p, delta, opponent, own)[1]


def quantized_payoff_elements(game: GameDefinition, p: float, basis_kind: str) -> PayoffElements:
    """Payoff-matrix entries of the quantized game.

    Classical moves are embedded as C (or O) = (0, 0) and D (or T) = (pi, 0).
    RSTU slots follow Alice's row: R at (C,C), S at (C,D), T at (D,C), U at
    (D,D). For battle-of-sexes games alpha is Alice's payoff at (O,O), beta
    hers at (T,T) and sigma hers at (O,T).
    """
    delta = basis_delta(basis_kind)
    p = check_werner_parameter(p)

    def alice(s1, s2):
        return payoffs_numeric(game, p, delta, s1, s2)[0]

    if game.form == "bos":
        return PayoffElements.alpha_beta_sigma(
            alice(COOPERATE, COOPERATE), alice(DEFECT, DEFECT), alice(COOPERATE, DEFECT)
        )
    return PayoffElements.rstu(
        alice(COOPERATE, COOPERATE),
        alice(COOPERATE, DEFECT),
        alice(DEFECT, COOPERATE),
        alice(DEFECT, DEFECT),
    )


def best_response(
    game: GameDefinition,
    p: float,
    delta: float,
    opponent: StrategyParams,
    responder: str,
    cfg: SearchConfig = SearchConfig(),
) -> tuple[StrategyParams, float]:
    """Maximize the responder's payoff over (theta, phi) with the opponent fixed.

    A full grid pass is followed by ``cfg.refine_iterations`` rounds of
    coordinate search around the incumbent with the step halved each round.
    Among grid points within ``TIE_TOL`` of the maximum the lexicographically
    smallest (theta, phi) wins, and refinement only moves on a gain larger
    than ``TIE_TOL``.
    """
    if responder not in ("A", "B"):
        raise ValueError("responder must be 'A' or 'B'")
    thetas = np.linspace(0.0, THETA_MAX, cfg.grid_theta)
    phis = np.linspace(0.0, PHI_MAX, cfg.grid_phi)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = payoff_batch(game, p, delta, responder, opponent, tt, pp)
    flat = values.ravel()
    idx = int(np.flatnonzero(flat >= flat.max() - TIE_TOL)[0])
    i, k = divmod(idx, cfg.grid_phi)
    theta, phi, best = float(thetas[i]), float(phis[k]), float(flat[idx])

    h_theta = THETA_MAX / (cfg.grid_theta - 1)
    h_phi = PHI_MAX / (cfg.grid_phi - 1)
    for _ in range(cfg.refine_iterations):
        h_theta /= 2
        h_phi /= 2
        cand_t = np.clip([theta - h_theta, theta + h_theta, theta, theta], 0.0, THETA_MAX)
        cand_p = np.clip([phi, phi, phi - h_phi, phi + h_phi], 0.0, PHI_MAX)
        vals = payoff_batch(game, p, delta, responder, opponent, cand_t, cand_p)
        j = int(np.argmax(vals))
        if vals[j] > best + TIE_TOL:
            theta, phi, best = float(cand_t[j]), float(cand_p[j]), float(vals[j])

    winner = StrategyParams(theta, phi)
    # report the payoff through the scalar path so callers see one number
    return winner, _payoff(game, p, delta, responder, winner, opponent)


@dataclass(frozen=True)
class NashCheck:
    verdict: bool
    max_violation: float
    deviating_player: str
    best_deviation: StrategyParams
    deviation_payoff: float
    profile_payoffs: tuple[float, float]

    def __iter__(self):
        # unpacks as (verdict, max_violation)
        yield self.verdict
        yield self.max_violation


def is_nash(
    game: GameDefinition,
    p: float,
    delta: float,
    profile: StrategyProfile,
    cfg: SearchConfig = SearchConfig(),
) -> NashCheck:
    """Check ``profile`` against numerically found unilateral best responses."""
    base = payoffs_numeric(game, p, delta, profile.s1, profile.s2)
    best = None
    for player, opponent, idx in (("A", profile.s2, 0), ("B", profile.s1, 1)):
        s, value = best_response(game, p, delta, opponent, player, cfg)
        gain = value - base[idx]
        if best is None or gain > best[0]:
            best = (gain, player, s, value)
    gain, player, s, value = best
    return NashCheck(gain <= cfg.tolerance, gain, player, s, value, base)


def _sweep_one(game, basis_kind, p):
    elem = quantized_payoff_elements(game, p, basis_kind)
    return SweepRecord(float(p), elem, classify_strategic_form(elem))


def preservation_sweep(
    game: GameDefinition, basis_kind: str, p_grid, workers: int | None = None
) -> list[SweepRecord]:
    """Elements and strategic form at each ``p``; output order follows ``p_grid``."""
    basis_delta(basis_kind)
    grid = [check_werner_parameter(p) for p in p_grid]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: _sweep_one(game, basis_kind, p), grid))
    return [_sweep_one(game, basis_kind, p) for p in grid]


# magnitudes below this are trigonometric roundoff (cos(pi/2) ~ 6e-17)
ZERO_SNAP = 1e-14


def fmt(x: float) -> str:
    """12 significant digits, locale independent, no negative zero."""
    x = float(x)
    if abs(x) < ZERO_SNAP:
        return "0"
    return format(x, ".12g")


def sweep_header(kind: str) -> list[str]:
    if kind == "AlphaBetaSigma":
        return ["p", "alpha", "beta", "sigma", "form"]
    return ["p", "R", "S", "T", "U", "form"]


def sweep_to_csv(records: list[SweepRecord], kind: str = "RSTU") -> str:
    if records:
        kind = records[0].elements.kind
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(sweep_header(kind))
    for rec in records:
        writer.writerow([fmt(rec.p), *(fmt(v) for v in rec.elements.values), rec.form.value])
    return buf.getvalue()


def sweep_from_csv(text: str) -> list[SweepRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    kind = "AlphaBetaSigma" if header[1] == "alpha" else "RSTU"
    records = []
    for row in reader:
        elem = PayoffElements(kind, tuple(float(v) for v in row[1:-1]))
        records.append(SweepRecord(float(row[0]), elem, StrategicForm(row[-1])))
    return records


def sweep_to_json(records: list[SweepRecord], game: GameDefinition, basis_kind: str) -> str:
    doc = {
        "game": game.name,
        "basis": basis_kind,
        "records": [
            {"p": float(fmt(r.p)), **{k: float(fmt(v)) for k, v in r.elements.as_dict().items()}, "form": r.form.value}
            for r in records
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_p_grid(spec: str) -> list[float]:
    """``start:stop:steps`` with inclusive endpoints, e.g. ``0:1:11``."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"p-grid must look like start:stop:steps, got {spec!r}")
    start, stop = float(parts[0]), float(parts[1])
    steps = int(parts[2])
    if steps < 1:
        raise ValueError("p-grid steps must be >= 1")
    if steps == 1 and not math.isclose(start, stop):
        raise ValueError("a single-step p-grid needs start == stop")
    grid = [float(v) for v in np.linspace(start, stop, steps)]
    for p in grid:
        check_werner_parameter(p)
    return grid
