from fisher_kinetic.quantum.density_matrix import (
    DensityMatrix, SpectralDecomposition, reduced_density_matrix, pure_state_matrix, partial_trace,
    eigendecompose, monomial_trace,
)
from fisher_kinetic.quantum.hoffmann_ostenhof import (
    ChainReport, hoffmann_ostenhof_density, kinetic_trace, absolute_kinetic_trace,
    split_identity_check, hoffmann_ostenhof_chain, de_finetti_monomial,
)
