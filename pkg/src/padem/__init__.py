"""padem: exact mod-p computer algebra for Steenrod reduced powers,
nilHecke operators, p-nilpotent differentials, and graded Grothendieck
group computations."""

from .arith import (
    IntPolynomial,
    binomial_mod_p,
    cyclotomic,
    factor_quotient,
    generalized_binomial,
)
from .nilhecke import (
    NilHeckeElement,
    Permutation,
    divided_difference,
    schubert,
    sym_linearity_check,
)
from .poly import Polynomial, elementary_symmetric, exact_divide, power_sum
from .steenrod import (
    SteenrodElement,
    act,
    adem_normalize,
    antipode,
    bar_act,
    margolis_d,
    margolis_pst,
    milnor_coaction,
)

__all__ = [
    "IntPolynomial",
    "NilHeckeElement",
    "Permutation",
    "Polynomial",
    "SteenrodElement",
    "act",
    "adem_normalize",
    "antipode",
    "bar_act",
    "binomial_mod_p",
    "cyclotomic",
    "divided_difference",
    "elementary_symmetric",
    "exact_divide",
    "factor_quotient",
    "generalized_binomial",
    "margolis_d",
    "margolis_pst",
    "milnor_coaction",
    "power_sum",
    "schubert",
    "sym_linearity_check",
]

__version__ = "0.1.0"
