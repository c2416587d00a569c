"""Block-triangular encoding of binary and non-binary LDPC codes."""
from .galois import FieldTable, SingularError, build_field, field_for_order, gf_add, gf_inv, gf_mul
from .spmat import (
    CostProfile,
    Permutation,
    SparseMatrix,
    WeightStats,
    gauss_rank,
    permute,
    read_alist,
    spmv_counted,
    weight_stats,
    write_alist,
)
from .atm import ATMForm, RUEncoder, RankDeficientError, approximate_triangulate, ru_costs, ru_precompute, ru_solve
from .lufact import LUEncoder, LUForm, lu_costs, lu_factorize, lu_solve
from .sbbd import SBBDResult, extract_nonsingular, find_full_rank_split, sbbd
from .cyclegraph import build_associated_graph, cycle_costs, cycle_precompute, cycle_solve, smallest_cycle
from .codegen import DegreeDistribution, EnsembleConfig, derive_m, sample_matrix, sample_proper_cycle_code
from .blocktri import BlockTriangularForm, encode, encoding_costs, preprocess

__version__ = "0.1.0"
