"""Subtractive, Mal'tsev and additive finite pointed algebras."""

from .algebra import (
    AlgebraError,
    App,
    BoundExceeded,
    FiniteAlgebra,
    Operation,
    Relation,
    Var,
    Zero,
    eval_term,
    is_compatible_relation,
    is_homomorphism,
    parse_term,
    power_algebra,
    subalgebra_closure,
)
from .clone import (
    OperationTable,
    SubtractionWitness,
    enumerate_term_operations,
    find_maltsev_witnesses,
    find_subtraction_witnesses,
    is_homomorphic_operation,
    maltsev_to_subtraction,
)
from .matrices import ExtMatrix, builtin_matrix, extend_matrix, is_closed, m_closure, sweep_compatible_relations
from .abelian import (
    check_exchange_law,
    classify_group_law,
    decide_additivity,
    synthesize_abelian,
    unique_homomorphic_subtraction,
    verify_abelian_group,
)
from .harness import compute_R, compute_R_prime, replay_proof, transport_check

__version__ = "0.1.0"
