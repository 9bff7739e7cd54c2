#pragma once

#include <string>
#include <vector>

#include "qrlab/common.hpp"
#include "qrlab/models.hpp"

namespace qrlab {

/// kappa = eta / (Delta - sum_k eps_k) for a uniform-Delta star spec with the
/// bias on spin 1. Throws at the degenerate point Delta == sum eps.
double kappa_of(const ModelSpec& spec);

/// beta_c = -ln(2 kappa^2) / 4.
double beta_c_of(double kappa);

/// alpha = (beta - beta_c(kappa)) / sqrt(27).
double alpha_of(double beta, double kappa);

/// Ground-state magnetization law, -kappa / sqrt(kappa^2 + e^{-4 beta}).
double sigma_z_beta(double kappa, double beta);

/// Equivalent rewriting with (2 kappa^2)^{beta/beta_c}; agrees with
/// sigma_z_beta to 1e-14 (requires kappa != 0).
double sigma_z_beta_rescaled(double kappa, double beta);

/// Collapsed form -branch_sign / sqrt(1 + 2 e^{-12 sqrt(3) alpha});
/// branch_sign is the sign of kappa (+1 gives the published branch).
double sigma_z_alpha(double alpha, int branch_sign);

struct ScalingRow {
    double beta = 0.0;
    double beta_over_beta_c = 0.0;
    double alpha = 0.0;
    double sigma_z_analytic = 0.0;
    double sigma_z_numeric = 0.0; // NaN when not computed or failed
    int cutoff = -1;              // -1 when not computed or failed
    bool ok = true;
};

struct ScalingCurve {
    double kappa = 0.0;
    double beta_c = 0.0;
    std::vector<ScalingRow> rows; // sorted by beta
    std::string model_digest;
};

struct ScalingOptions {
    bool analytic_only = false;
    int force_cutoff = -1; // test hook and CLI override; -1 = converge per row
    int levels = 8;        // levels tracked by the cutoff convergence rule
};

/// Numeric + analytic scaling curve for an XX-axis family. Per row: set
/// lambda = omega sqrt(beta), converge the cutoff, diagonalize, and measure
/// <sigma_1^z> in the (unique, eta != 0) ground state. Solver failures mark
/// the row and the run continues.
ScalingCurve scaling_curve(const ModelSpec& family, const std::vector<double>& beta_grid,
                           const ScalingOptions& opt = {});

/// beta grid of `count` points spanning [r0, r1] * beta_c.
std::vector<double> beta_grid_relative(double beta_c, double r0, double r1, int count);

struct CollapseDeviation {
    double analytic = 0.0; // sup over the grid of max pairwise gap
    double numeric = 0.0;
};

/// Collapse metric over a shared alpha grid. Numeric columns are resampled by
/// monotone (piecewise-linear) interpolation in alpha; analytic columns are
/// re-evaluated exactly at the grid points through beta = beta_c + sqrt(27) a.
/// Requires >= 2 curves whose alpha ranges cover the grid.
CollapseDeviation collapse_deviation(const std::vector<ScalingCurve>& curves,
                                     const std::vector<double>& alpha_grid);

} // namespace qrlab
