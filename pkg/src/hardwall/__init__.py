"""Hard-wall two-dimensional Coulomb gas: exact partition functions and large-N expansions."""

__version__ = "0.1.0"

from .constants import UniversalConstants, beta_tilde, compute_universal_constants, identity_residuals
from .exact import (PartitionResult, log_gap_probability, log_partition_hard,
                    log_partition_soft_gauss, log_uj_gamma_oracle, log_uj_oracle,
                    log_uj_quadrature)
from .expansion import (ExpansionCoefficients, Functionals, compute_functionals,
                        expansion_coefficients, gap_coefficients_gauss,
                        predict_log_partition, remainder_sweep)
from .numerics import (DEFAULT_CONFIG, QuadratureConfig, QuadResult, euler_maclaurin_sum,
                       find_root_monotone, integrate, log_integrate_exp)
from .potential import (CallablePotential, DropletGeometry, PowerLogPotential,
                        RadialPotential, Regime, critical_radius, droplet_geometry,
                        laplacian, parse_descriptor, v_tau)
from .term_asym import TermRegime, TermTag, log_uj_asymptotic

__all__ = [name for name in dir() if not name.startswith("_")]
