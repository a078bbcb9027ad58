from fisher_kinetic.densities.grid import GridSpec, MEM_CAP_BYTES, check_budget
from fisher_kinetic.densities.density import (
    Density, MixingMeasure, uniform_density, gaussian_density, product_density,
    mixture_product_density, marginal, symmetrize, random_density, gaussian_mixture,
    well_separated_mixture, overlapping_mixture, entropy, mean_entropy_sequence,
)
from fisher_kinetic.densities.density_io import save_density, load_density
