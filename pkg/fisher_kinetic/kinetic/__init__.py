from fisher_kinetic.kinetic.fourier import (
    KineticSpec, WaveFunction, sqrt_density, fractional_multiplier, kinetic_form, block_energies,
)
from fisher_kinetic.kinetic.fisher import (
    FisherResult, fisher_info, gradient_form, cutoff_fisher_info, entropy_dissipation,
    gaussian_fisher_closed_form, gaussian_fisher_torus_series,
)
from fisher_kinetic.kinetic.singular import (
    singular_form, salem_variant_info, calibrate_singular_constant, bbm_limit_constant,
)
from fisher_kinetic.kinetic.scans import bbm_scan
