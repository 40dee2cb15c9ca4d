"""Point energies on flat tori: spectral sums, image sums, equilibria, and
minimization certificates."""

from .analysis import (
    ConvexityCertificate,
    EquispacedVerdict,
    FFunctional,
    build_f_functional,
    convexity_certificate,
    equidistribution_scan,
    equispaced_verdict,
    f_eval,
    f_functional_rd,
    f_prime,
    f_second,
    star_discrepancy,
)
from .errors import UnsupportedOperationError
from .geometry import (
    Configuration,
    distance,
    equispaced,
    geodesic_displacement,
    random_configuration,
    wrap,
)
from .optimize import (
    OptimizationTrace,
    OptimizerParams,
    brute_force_oracle,
    is_critical,
    minimize,
    multistart_global,
)
from .potentials import (
    BumpPerturbedPotential,
    GaussianPotential,
    PaleyWienerPotential,
    Potential,
    SmoothedInverseSquarePotential,
    TabulatedPotential,
    bump_psi,
    make_potential,
    phi_m,
    phi_m_hat,
)
from .spatial import (
    force_at,
    pair_potential_sum,
    poisson_check,
    self_force,
    total_energy_spatial,
)
from .spectral import (
    EnergyReport,
    energy_1d,
    energy_rd,
    equispaced_energy,
    gradient_1d,
    gradient_rd,
    mean_energy_bound,
    structure_factor,
)

__version__ = "0.1.0"
