"""Permutation-symmetry block diagonalization for qudit open systems.

The package decomposes the operator space of n identical qudits into
sectors adapted to site permutations, certifies strong or weak
permutation symmetry of Kraus channels and Lindblad generators, block
diagonalizes their superoperator matrices, and reports which sectors
carry decoherence-free subsystems.
"""

from .blockdiag import (
    BlockDecomposition,
    DfsReport,
    DfsSector,
    SectorBlock,
    blockwise_exp,
    decompose,
    dfs_report,
    protection_check,
    to_schur_frame,
)
from .channels import (
    EXAMPLE_CHANNELS,
    KrausChannel,
    Lindbladian,
    SuperOperatorMatrix,
    SymmetryCertificate,
    classify_kraus_symmetry,
    classify_lindblad_symmetry,
    example_channel,
    kraus_superop,
    lindblad_superop,
    mixing_unitary,
    orthogonalize_kraus,
    psd_sqrt,
    symmetrize_local_kraus,
)
from .combinatorics import (
    Partition,
    StandardTableau,
    WeightVector,
    count_irreps,
    count_partitions_k_rows,
    letter_strings_by_weight,
    partitions,
    standard_tableaux,
    syt_dimension,
    weight_multiplicity,
    weight_vectors,
    weyl_dimension,
)
from .errors import (
    BlockStructureError,
    ChannelInvariantError,
    ChannelSpecError,
    DimensionMismatchError,
    InternalConsistencyError,
    SizeGuardError,
    SuperSchurError,
)
from .liouville import (
    OperatorBasis,
    PermutationRep,
    QuditOperator,
    devectorize,
    hilbert_permutation_matrix,
    hs_inner,
    hs_norm,
    max_liouville_dim,
    operator_basis,
    perm_rep,
    single_site_letters,
    vectorize,
)
from .schur import (
    ColumnLabel,
    IrrepMatrices,
    PermutationBlockStructure,
    SuperSchurBasis,
    irrep_matrices,
    matrix_unit,
    permutation_in_schur,
    super_schur_basis,
    young_orthogonal_generator,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "BlockStructureError",
    "ChannelInvariantError",
    "ChannelSpecError",
    "ColumnLabel",
    "DfsReport",
    "DfsSector",
    "DimensionMismatchError",
    "EXAMPLE_CHANNELS",
    "InternalConsistencyError",
    "IrrepMatrices",
    "KrausChannel",
    "Lindbladian",
    "OperatorBasis",
    "Partition",
    "PermutationBlockStructure",
    "PermutationRep",
    "QuditOperator",
    "SectorBlock",
    "SizeGuardError",
    "StandardTableau",
    "SuperOperatorMatrix",
    "SuperSchurBasis",
    "SuperSchurError",
    "SymmetryCertificate",
    "WeightVector",
    "blockwise_exp",
    "classify_kraus_symmetry",
    "classify_lindblad_symmetry",
    "count_irreps",
    "count_partitions_k_rows",
    "decompose",
    "devectorize",
    "dfs_report",
    "example_channel",
    "hilbert_permutation_matrix",
    "hs_inner",
    "hs_norm",
    "irrep_matrices",
    "kraus_superop",
    "letter_strings_by_weight",
    "lindblad_superop",
    "matrix_unit",
    "max_liouville_dim",
    "mixing_unitary",
    "operator_basis",
    "orthogonalize_kraus",
    "partitions",
    "perm_rep",
    "permutation_in_schur",
    "protection_check",
    "psd_sqrt",
    "single_site_letters",
    "standard_tableaux",
    "super_schur_basis",
    "symmetrize_local_kraus",
    "syt_dimension",
    "to_schur_frame",
    "vectorize",
    "weight_multiplicity",
    "weight_vectors",
    "weyl_dimension",
]
