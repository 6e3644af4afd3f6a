from src.asymptotics.obstruction import c_formula, modularity_obstruction
from src.asymptotics.tba import (
    gamma_coefficient,
    gamma_exact,
    match_root5,
    solve_tba,
    uniqueness_sweep,
    verify_closed_form,
)

__all__ = [
    "c_formula",
    "gamma_coefficient",
    "gamma_exact",
    "match_root5",
    "modularity_obstruction",
    "solve_tba",
    "uniqueness_sweep",
    "verify_closed_form",
]
