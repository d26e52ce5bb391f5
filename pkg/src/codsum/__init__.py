"""Codegree sums of irreducible characters for finite groups.

Exact closed-form formulas, an independent character-table oracle built on
permutation-group enumeration, verification suites for the codegree-sum
inequalities, and streaming analytics over primes congruent to 2 mod 3.
"""

from .arith import BigRational, FactoredInteger, factorize
from .chartab import (
    CharacterTable,
    CodegreeReport,
    GroupData,
    codegree_report,
    dixon_table,
    enumerate_group,
    oracle_report,
)
from .formulas import (
    counterexample_ratio,
    max_t_for_criterion,
    product_criterion,
    sc_abelian,
    sc_counterexample,
    sc_cyclic,
    sc_cyclic_primepower,
    submultiplicativity_holds,
    theorem_bound_check,
)
from .groups import (
    AbelianGroupSpec,
    CounterexampleSpec,
    MetacyclicSpec,
    Permutation,
    PermutationGroupSpec,
    build_abelian,
    build_counterexample,
    build_cyclic,
    build_direct_product,
    build_metacyclic,
    pgroup_library,
    semidirect_exists,
)
from .analytic import (
    RatioState,
    ZetaValue,
    accumulate_ratio,
    crossing_extrapolation,
    euler_product_check,
    ratio_term,
    reciprocal_model_gap,
    zeta,
)

__version__ = "0.1.0"
