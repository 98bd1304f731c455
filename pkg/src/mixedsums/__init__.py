"""Mixed character sums over full Dirichlet families at desk scale.

The library evaluates S(chi) = sum_{n<=x} chi(n) e(n*theta) w(n/x) across
every character mod a prime r, checks the finite identities that govern
the family (orthogonality moments, the Poisson dual form, the off-diagonal
product parametrization), and counts the congruence solutions behind the
fourth-moment bounds -- exactly where exact, and as recorded count/bound
ratios where the analysis is asymptotic.
"""

from ._backend import BACKEND
from .arith import PrimeModulus, is_prime, primitive_root
from .characters import Character, GaussData, character_value, dual_coefficient, gauss_sum
from .diophantine import (
    DiophantineProfile,
    Enclosure,
    PrecisionError,
    ResonantSet,
    Theta,
    check_diophantine_floor,
    reduce_mod_r,
    resonant_set,
)
from .poisson import DualSetup, dyadic_fourth_moment_bound, f_infty_hat, poisson_residual, principal_tail
from .sums import (
    FamilySums,
    MomentReport,
    distribution_probe,
    family_sums,
    geometric_sum,
    mixed_sum,
    moment_report,
)
from .weights import WeightFunction

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Character",
    "DiophantineProfile",
    "DualSetup",
    "Enclosure",
    "FamilySums",
    "GaussData",
    "MomentReport",
    "PrecisionError",
    "PrimeModulus",
    "ResonantSet",
    "Theta",
    "WeightFunction",
    "character_value",
    "check_diophantine_floor",
    "distribution_probe",
    "dual_coefficient",
    "dyadic_fourth_moment_bound",
    "f_infty_hat",
    "family_sums",
    "gauss_sum",
    "geometric_sum",
    "is_prime",
    "mixed_sum",
    "moment_report",
    "poisson_residual",
    "primitive_root",
    "principal_tail",
    "reduce_mod_r",
    "resonant_set",
]
