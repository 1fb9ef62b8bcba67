"""Special Lagrangian potential equation: phases, branches, asymptotic interiors,
boundary convexity, Garding generalizations and a monotone grid solver."""

from .asymptotic import asymptotic_closure, asymptotic_interior, definition_oracle
from .branches import lambda_branch, sigma_branch_critical, sigma_branch_variation
from .phase import asymptotic_expansion, classify_phase, sl_value
from .symcore import eigenvalues, roots_and_critical_points, sign_variation

__all__ = [
    "asymptotic_closure",
    "asymptotic_expansion",
    "asymptotic_interior",
    "classify_phase",
    "definition_oracle",
    "eigenvalues",
    "lambda_branch",
    "roots_and_critical_points",
    "sigma_branch_critical",
    "sigma_branch_variation",
    "sign_variation",
    "sl_value",
]
