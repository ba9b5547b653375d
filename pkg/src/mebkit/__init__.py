"""Maximally entangled bases of two qudits: construction from characters
of finite abelian groups, verification, and equivalence testing."""

from .chargroup import (
    Decomposition,
    char_exponent,
    character,
    decompositions,
    dft_generator,
    digits_j,
    digits_n,
    hadamard_generator,
    zeilinger_generator,
)
from .equivalence import (
    BilocalWitness,
    DiagonalUnitary,
    EquivalenceVerdict,
    Equivalent,
    Inequivalent,
    MebClass,
    Permutation,
    canonical_form,
    enumerate_classes,
    meb_equivalent,
    monomial_factor,
    operator_schmidt_rank,
    perm_equivalent,
    witness_residual,
    witness_to_bilocal,
)
from .exact import (
    DEFAULT_TOL,
    ExponentMatrix,
    RootExponent,
    Tolerance,
    complex_matrix,
    complex_vector,
    is_unitary,
    is_zeilinger,
    root_value,
    to_complex,
)
from .meb import (
    GroupReport,
    MebBasis,
    MebReport,
    bell_basis,
    entropy_bits,
    gcnot,
    gcnot_index_map,
    gcnot_matrix,
    generate_meb,
    generator_columns,
    group_verify,
    identity_element,
    reduced_density,
    vector_mul,
    verify_meb,
)

__version__ = "0.1.0"
