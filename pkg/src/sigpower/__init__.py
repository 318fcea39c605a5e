"""Power-allocation games on signed networks."""

from .antagonistic import all_precarious_equilibrium, dominant_country, dominant_equilibrium, max_safe_check
from .core import SignedNetwork, State, as_powers, as_strategy, prefers, states, support_scores, utilities, utility
from .dynamics import aid, is_steady_state, run_dynamics, update_power
from .inference import discretize_strategies, infer_weights, violation
from .metrics import frustration, gini, is_balanced
from .montecarlo import SurvivalConfig, SweepConfig, best_response, estimate_survival, sweep
from .netgen import GenParams, generate
from .static_ne import find_equilibrium, is_equilibrium, preferable_adjustment, verify_equilibrium

__version__ = "0.1.0"

__all__ = [
    "SignedNetwork",
    "State",
    "as_powers",
    "as_strategy",
    "support_scores",
    "states",
    "utility",
    "utilities",
    "prefers",
    "preferable_adjustment",
    "find_equilibrium",
    "verify_equilibrium",
    "is_equilibrium",
    "max_safe_check",
    "dominant_country",
    "dominant_equilibrium",
    "all_precarious_equilibrium",
    "update_power",
    "run_dynamics",
    "is_steady_state",
    "aid",
    "best_response",
    "SurvivalConfig",
    "estimate_survival",
    "SweepConfig",
    "sweep",
    "violation",
    "discretize_strategies",
    "infer_weights",
    "GenParams",
    "generate",
    "frustration",
    "gini",
    "is_balanced",
]
