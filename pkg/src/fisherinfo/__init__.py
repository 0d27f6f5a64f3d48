"""Classical and fractional Fisher informations of symmetric densities on periodic grids."""
from .budget import check_budget, get_mem_cap, memory_cap, set_mem_cap
from .density import (
    Density,
    GridSpec,
    MixingMeasure,
    gaussian_density,
    load_density,
    marginal,
    mixture_product_density,
    product_density,
    random_density,
    save_density,
    symmetrize,
    uniform_density,
)
from .errors import BudgetError, ConfigError, FormatError
from .harness import (
    SUITES,
    SuiteConfig,
    SuiteReport,
    affinity_defect,
    convexity_test,
    diamagnetic_test,
    mean_info_sequence,
    normalized_monotonicity_check,
    run_suite,
    superadditivity_gap,
)
from .quantum import (
    DensityMatrix,
    SpectralDecomposition,
    eigendecompose,
    hoffmann_ostenhof_chain,
    hoffmann_ostenhof_density,
    kinetic_trace,
    monomial_trace,
    partial_trace,
    reduced_density_matrix,
    split_identity_check,
)
from .spectral import (
    FisherResult,
    KineticSpec,
    WaveFunction,
    bbm_scan,
    calibrate_limit_constant,
    calibrate_singular_constant,
    cutoff_fisher_info,
    fisher_info,
    gaussian_fisher_info,
    kinetic_form,
    salem_variant_info,
    singular_form,
    sqrt_density,
)

__version__ = "0.1.0"
