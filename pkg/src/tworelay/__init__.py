"""Rate regions and optimal resource allocation for two-way OFDM relay
channels: multi-subcarrier and per-subcarrier decode-and-forward,
amplify-and-forward, and the cut-set outer bound."""

__version__ = "0.1.0"

from .channel import (ChannelState, PowerBudget, SnrScale, average_snr,
                      generate_rayleigh_csi, scale_budget)
from .config import SolverConfig
from .rates import (RatePair, RegionConstraints, ResourceAllocation,
                    af_constraints, bc_rates, cutset_constraints,
                    df_constraints, ma_rates, psc_df_constraints,
                    region_contains)
from .ma import (Branch, DegenerateDualError, MaDualPoint, MaSolution,
                 SolverError, alpha_bounds, alpha_subgradient,
                 cardano_real_roots, classify_branch, cubic_power_allocation,
                 ellipsoid_inner_solve, kkt_power_allocation,
                 lambda_branch_test, recover_primal, solve_ma)
from .bc import (BcDualPoint, BcSolution, alpha3_bound, bc_dual_value,
                 quadratic_power_allocation, solve_bc)
from .region import (BoundaryPoint, RegionBoundary, Strategy,
                     solve_boundary_point_af, solve_boundary_point_cutset,
                     solve_boundary_point_df, solve_boundary_point_psc_df,
                     sweep_region, waterfill)
from .asymptotics import (GainRegion, df_rate_equal_power, empirical_slope,
                          low_snr_gap, multiplexing_region)
from .oracle import (GridSpec, OracleResult, ResidualReport,
                     grid_bruteforce_df, grid_bruteforce_psc_df,
                     kkt_residuals, simplex_dual_scan)
