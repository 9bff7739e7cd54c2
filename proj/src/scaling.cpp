#include "qrlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrlab/displaced.hpp"
#include "qrlab/spectra.hpp"

namespace qrlab {

namespace {
constexpr double kSqrt27 = 5.196152422706632; // sqrt(27)
}

double kappa_of(const ModelSpec& spec) {
    spec.validate();
    for (std::size_t i = 1; i < spec.tunneling.size(); ++i)
        if (spec.tunneling[i] != spec.tunneling[0])
            throw ValidationError("E_SPEC", "kappa is defined for a uniform tunneling");
    for (std::size_t i = 1; i < spec.bias.size(); ++i)
        if (spec.bias[i] != 0.0)
            throw ValidationError("E_SPEC", "kappa is defined for the bias on spin 1");
    if (!spec.is_star())
        throw ValidationError("E_SPEC", "kappa is defined for star topology");
    const double denom = spec.tunneling[0] - spec.edge_sum();
    if (denom == 0.0)
        throw ValidationError("E_DEGENERATE",
                              "Delta equals the edge sum (degenerate bifurcation point)");
    return spec.bias[0] / denom;
}

double beta_c_of(double kappa) {
    if (kappa == 0.0) throw ValidationError("E_KAPPA", "beta_c requires kappa != 0");
    return -std::log(2.0 * kappa * kappa) / 4.0;
}

double alpha_of(double beta, double kappa) {
    return (beta - beta_c_of(kappa)) / kSqrt27;
}

double sigma_z_beta(double kappa, double beta) {
    return -kappa / std::sqrt(kappa * kappa + std::exp(-4.0 * beta));
}

double sigma_z_beta_rescaled(double kappa, double beta) {
    const double beta_c = beta_c_of(kappa);
    const double pow_term = std::exp((beta / beta_c) * std::log(2.0 * kappa * kappa));
    return -kappa / std::sqrt(kappa * kappa + pow_term);
}

double sigma_z_alpha(double alpha, int branch_sign) {
    if (branch_sign != 1 && branch_sign != -1)
        throw ValidationError("E_BRANCH", "branch sign must be +1 or -1");
    return -branch_sign / std::sqrt(1.0 + 2.0 * std::exp(-12.0 * std::sqrt(3.0) * alpha));
}

std::vector<double> beta_grid_relative(double beta_c, double r0, double r1, int count) {
    if (count < 1) throw ValidationError("E_GRID", "grid needs at least one point");
    if (r1 < r0) throw ValidationError("E_GRID", "grid bounds out of order");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = beta_c * (count == 1 ? r0 : r0 + (r1 - r0) * i / double(count - 1));
    return grid;
}

ScalingCurve scaling_curve(const ModelSpec& family, const std::vector<double>& beta_grid,
                           const ScalingOptions& opt) {
    family.validate();
    if (family.ising_axis != IsingAxis::XX)
        throw ValidationError("E_SPEC", "scaling curves use the XX axis");
    if (family.bias[0] == 0.0)
        throw ValidationError("E_SPEC",
                              "scaling needs eta != 0 for a unique ground state");
    if (!std::is_sorted(beta_grid.begin(), beta_grid.end()))
        throw ValidationError("E_GRID", "beta grid must ascend");

    ScalingCurve curve;
    curve.kappa = kappa_of(family);
    curve.beta_c = beta_c_of(curve.kappa);
    curve.model_digest = family.digest() + " kappa=" + fmt17(curve.kappa) +
                         " beta_c=" + fmt17(curve.beta_c);
    curve.rows.resize(beta_grid.size());

    const double omega = family.boson_freq;
    parallel_for(beta_grid.size(), [&](std::size_t i) {
        ScalingRow& row = curve.rows[i];
        row.beta = beta_grid[i];
        row.beta_over_beta_c = row.beta / curve.beta_c;
        row.alpha = (row.beta - curve.beta_c) / kSqrt27;
        row.sigma_z_analytic = sigma_z_beta(curve.kappa, row.beta);
        row.sigma_z_numeric = std::numeric_limits<double>::quiet_NaN();
        if (opt.analytic_only) {
            row.cutoff = -1;
            return;
        }
        try {
            ModelSpec point = family;
            point.coupling = omega * std::sqrt(row.beta);
            row.cutoff = auto_cutoff(point, opt.levels, opt.force_cutoff);
            const BosonBasis basis{row.cutoff};
            EigenOptions eig;
            eig.digest = point.digest();
            const Spectrum s = eigendecompose(build_hamiltonian(point, basis), eig);
            const GroundState g = ground_state(s);
            row.sigma_z_numeric =
                expectation(g.vector, embed_spin(point.n_spins, 1, PauliAxis::Z, basis));
        } catch (const Error&) {
            row.ok = false; // marked; the sweep continues
            row.cutoff = -1;
        }
    });
    return curve;
}

namespace {

// piecewise-linear (monotone) interpolation of the numeric column in alpha
double interp_numeric(const ScalingCurve& c, double alpha) {
    const auto& rows = c.rows;
    auto it = std::lower_bound(rows.begin(), rows.end(), alpha,
                               [](const ScalingRow& r, double a) { return r.alpha < a; });
    if (it == rows.begin() || it == rows.end())
        throw ValidationError("E_RANGE", "alpha grid escapes a curve's range");
    const ScalingRow& hi = *it;
    const ScalingRow& lo = *(it - 1);
    if (!lo.ok || !hi.ok || std::isnan(lo.sigma_z_numeric) || std::isnan(hi.sigma_z_numeric))
        throw NumericError("E_ROW", "failed row inside the resample window");
    const double w = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
    return lo.sigma_z_numeric + w * (hi.sigma_z_numeric - lo.sigma_z_numeric);
}

} // namespace

CollapseDeviation collapse_deviation(const std::vector<ScalingCurve>& curves,
                                     const std::vector<double>& alpha_grid) {
    if (curves.size() < 2)
        throw ValidationError("E_CURVES", "collapse needs at least two curves");
    if (alpha_grid.empty()) throw ValidationError("E_GRID", "empty alpha grid");
    for (const auto& c : curves) {
        if (c.rows.size() < 2) throw ValidationError("E_CURVES", "curve too short");
        if (c.rows.front().alpha > alpha_grid.front() || c.rows.back().alpha < alpha_grid.back())
            throw ValidationError("E_RANGE", "curves do not overlap the alpha grid");
    }

    const bool numeric_present = std::all_of(curves.begin(), curves.end(), [](const auto& c) {
        return std::none_of(c.rows.begin(), c.rows.end(),
                            [](const ScalingRow& r) { return std::isnan(r.sigma_z_numeric); });
    });

    CollapseDeviation dev;
    for (double a : alpha_grid) {
        for (std::size_t i = 0; i < curves.size(); ++i) {
            for (std::size_t j = i + 1; j < curves.size(); ++j) {
                // the analytic column is a closed form of beta alone, so it is
                // resampled by exact re-evaluation at beta = beta_c + sqrt(27) a
                double ai = sigma_z_beta(curves[i].kappa, curves[i].beta_c + kSqrt27 * a);
                double aj = sigma_z_beta(curves[j].kappa, curves[j].beta_c + kSqrt27 * a);
                dev.analytic = std::max(dev.analytic, std::abs(ai - aj));
                if (numeric_present) {
                    double ni = interp_numeric(curves[i], a);
                    double nj = interp_numeric(curves[j], a);
                    dev.numeric = std::max(dev.numeric, std::abs(ni - nj));
                }
            }
        }
    }
    return dev;
}

} // namespace qrlab
