from .freeprod import (
    FreeProductElement,
    freeprod_flatten,
    freeprod_mul,
    freeprod_norm,
    freeprod_unflatten,
)
from .ore import (
    OreExtension,
    OrePoly,
    ore_mul,
    ug_derivation_extension,
    ug_extension,
    ug_from_xy,
    ug_yx_to_xy,
    sigma_derivation_failures,
    validate_sigma_derivation,
)
from .smash import (
    SmashAlgebra,
    SmashElement,
    ore_vs_smash_check,
    ore_vs_smash_mismatches,
    qprod_algebra,
    qprod_block_qmatrix,
    qprod_domains_mul,
    qprod_to_qseries,
    smash_mul,
)
