"""Quantized 2x2 games (PD, Chicken, Battle of the Sexes) with Werner-like initial states."""

from .closed_form import (
    audit_trace_terms,
    ne_margin,
    paper_trace_terms,
    payoff_entangled,
    payoff_product,
)
from .engine import (
    COOPERATE,
    DEFECT,
    QUANTUM,
    StrategyParams,
    evolve,
    measurement_basis,
    payoff_operators,
    payoffs_numeric,
    strategy_unitary,
    werner_state,
)
from .equilibrium import (
    SearchConfig,
    StrategyProfile,
    best_response,
    is_nash,
    preservation_sweep,
    quantized_payoff_elements,
)
from .game_model import (
    GameDefinition,
    PayoffElements,
    StrategicForm,
    canonical_game,
    classify_strategic_form,
    load_game,
)
from .quantum_core import (
    DensityError,
    DensityMatrix,
    adjoint,
    partial_transpose_min_eig,
    tensor_product,
    trace_of_product,
    validate_density,
)

__version__ = "0.1.0"
