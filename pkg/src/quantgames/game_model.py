"""2x2 bimatrix games, quantized payoff elements and strategic-form classification."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .quantum_core import TOL_NUM

OUTCOMES = ("00", "01", "10", "11")
FORMS = ("pd", "cg", "bos", "none")


@dataclass(frozen=True)
class GameDefinition:
    """A 2x2 game. ``payoff_a[a][b]`` is Alice's payoff when Alice plays ``a`` and Bob ``b``."""

    name: str
    payoff_a: tuple[tuple[float, float], tuple[float, float]]
    payoff_b: tuple[tuple[float, float], tuple[float, float]]
    form: str = "none"

    def __post_init__(self):
        for label in ("payoff_a", "payoff_b"):
            table = _as_table(getattr(self, label), label)
            object.__setattr__(self, label, table)
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")

    def payoff(self, player: str, outcome: str) -> float:
        table = self.payoff_a if player == "A" else self.payoff_b
        return table[int(outcome[0])][int(outcome[1])]

    def payoffs(self, player: str) -> dict[str, float]:
        return {k: self.payoff(player, k) for k in OUTCOMES}

    def average(self, player: str) -> float:
        return sum(self.payoffs(player).values()) / 4

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "payoff_a": [list(r) for r in self.payoff_a],
            "payoff_b": [list(r) for r in self.payoff_b],
            "form": self.form,
        }


def _as_table(rows, label):
    try:
        table = tuple(tuple(float(x) for x in row) for row in rows)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{label} must be a 2x2 array of numbers") from exc
    if len(table) != 2 or any(len(r) != 2 for r in table):
        raise ValueError(f"{label} must be 2x2")
    if not all(math.isfinite(x) for r in table for x in r):
        raise ValueError(f"{label} has non-finite entries")
    return table


_CANONICAL = {
    "pd": GameDefinition("pd", ((3, 0), (5, 1)), ((3, 5), (0, 1)), "pd"),
    "cg": GameDefinition("cg", ((3, 1), (4, 0)), ((3, 4), (1, 0)), "cg"),
    # alpha=2, beta=1, sigma=0 laid out as (O,O)=(alpha,beta), (T,T)=(beta,alpha)
    "bos": GameDefinition("bos", ((2, 0), (0, 1)), ((1, 0), (0, 2)), "bos"),
}


def canonical_game(name: str) -> GameDefinition:
    try:
        return _CANONICAL[name.lower()]
    except KeyError:
        raise ValueError(f"unknown game {name!r}; expected one of {sorted(_CANONICAL)}") from None


def game_from_dict(doc: dict) -> GameDefinition:
    missing = {"name", "payoff_a", "payoff_b"} - set(doc)
    if missing:
        raise ValueError(f"game document missing keys: {sorted(missing)}")
    return GameDefinition(
        name=str(doc["name"]),
        payoff_a=doc["payoff_a"],
        payoff_b=doc["payoff_b"],
        form=doc.get("form", "none"),
    )


def load_game(source: str | Path) -> GameDefinition:
    """Resolve a canonical label (``pd``, ``cg``, ``bos``) or read a game JSON file."""
    if isinstance(source, str) and source.lower() in _CANONICAL:
        return canonical_game(source)
    path = Path(source)
    if not path.exists() and path.suffix == "" and len(path.parts) == 1:
        # a bare word is a label, not a missing file
        return canonical_game(str(source))
    with open(path, encoding="utf-8") as fh:
        return game_from_dict(json.load(fh))


class StrategicForm(str, enum.Enum):
    PRISONERS_DILEMMA = "PrisonersDilemma"
    CHICKEN = "Chicken"
    BATTLE_OF_SEXES = "BattleOfSexes"
    DEGENERATE = "Degenerate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PayoffElements:
    """Entries of a (quantized) payoff matrix.

    ``kind`` is ``"RSTU"`` with values ``(R, S, T, U)`` or ``"AlphaBetaSigma"``
    with values ``(alpha, beta, sigma)``.
    """

    kind: str
    values: tuple[float, ...]

    def __post_init__(self):
        n = {"RSTU": 4, "AlphaBetaSigma": 3}.get(self.kind)
        if n is None:
            raise ValueError(f"unknown element kind {self.kind!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) != n:
            raise ValueError(f"{self.kind} needs {n} values, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("payoff elements must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def rstu(cls, r, s, t, u):
        return cls("RSTU", (r, s, t, u))

    @classmethod
    def alpha_beta_sigma(cls, alpha, beta, sigma):
        return cls("AlphaBetaSigma", (alpha, beta, sigma))

    @property
    def names(self) -> tuple[str, ...]:
        return ("R", "S", "T", "U") if self.kind == "RSTU" else ("alpha", "beta", "sigma")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values))

    def shifted(self, c: float) -> PayoffElements:
        return PayoffElements(self.kind, tuple(v + c for v in self.values))


def _strictly_decreasing(seq, tol):
    return all(a - b > tol for a, b in zip(seq, seq[1:]))


def classify_strategic_form(elem: PayoffElements, tol: float = TOL_NUM) -> StrategicForm:
    """Classify by strict orderings: PD ``T>R>U>S``, Chicken ``T>R>S>U``, BoS ``alpha>beta>sigma``.

    "Strictly greater" means greater by more than ``tol``; anything else is Degenerate.
    """
    if elem.kind == "AlphaBetaSigma":
        if _strictly_decreasing(elem.values, tol):
            return StrategicForm.BATTLE_OF_SEXES
        return StrategicForm.DEGENERATE
    r, s, t, u = elem.values
    if _strictly_decreasing((t, r, u, s), tol):
        return StrategicForm.PRISONERS_DILEMMA
    if _strictly_decreasing((t, r, s, u), tol):
        return StrategicForm.CHICKEN
    return StrategicForm.DEGENERATE


def classical_elements(game: GameDefinition) -> PayoffElements:
    """Read the classical elements straight off the payoff table (Alice's view)."""
    a = game.payoff_a
    if game.form == "bos":
        return PayoffElements.alpha_beta_sigma(a[0][0], a[1][1], a[0][1])
    return PayoffElements.rstu(a[0][0], a[0][1], a[1][0], a[1][1])
