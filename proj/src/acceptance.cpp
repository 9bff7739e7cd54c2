#include "qrlab/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qrlab/displaced.hpp"
#include "qrlab/models.hpp"
#include "qrlab/scaling.hpp"
#include "qrlab/spectra.hpp"

namespace qrlab::acceptance {

namespace {

constexpr double kInvSqrt3 = 0.5773502691896258;

struct Check {
    bool pass = true;
    double worst = 0.0;
    std::string note;

    void expect(double observed, double bound, const std::string& where) {
        worst = std::max(worst, observed);
        if (!(observed <= bound)) {
            pass = false;
            if (note.empty())
                note = where + ": " + fmt17(observed) + " > " + fmt17(bound);
        }
    }
    void require(bool ok, const std::string& where) {
        if (!ok) {
            pass = false;
            if (note.empty()) note = where;
        }
    }
};

ModelSpec uniform_spec(int n, double delta, double lambda, std::vector<IsingEdge> edges,
                       double eta1, IsingAxis axis) {
    ModelSpec s;
    s.n_spins = n;
    s.tunneling.assign(n, delta);
    s.boson_freq = 1.0;
    s.coupling = lambda;
    s.ising_edges = std::move(edges);
    s.bias.assign(n, 0.0);
    s.bias[0] = eta1;
    s.ising_axis = axis;
    return s;
}

Vec solve_lowest(const ModelSpec& spec, int cutoff, int k) {
    EigenOptions opt;
    opt.k = k;
    opt.digest = spec.digest();
    return eigendecompose(build_hamiltonian(spec, BosonBasis{cutoff}), opt).eigenvalues.head(k);
}

// raise the cutoff in steps of 8 until the tracked levels move < 1e-10
Vec converge_levels(const std::function<Vec(int)>& solve, int seed_cutoff, int force_cutoff) {
    if (force_cutoff >= 0) return solve(force_cutoff);
    Vec prev = solve(seed_cutoff);
    for (int step = 1; step <= 8; ++step) {
        Vec cur = solve(seed_cutoff + 8 * step);
        if ((cur - prev).cwiseAbs().maxCoeff() < 1e-10) return prev;
        prev = cur;
    }
    throw NumericError("E_NONCONVERGED", "cutoff ladder exhausted before the levels settled");
}

// ---- criterion 1: parity symmetry --------------------------------------

CriterionResult criterion_parity_symmetry(const Options&) {
    Check check;
    for (IsingAxis axis : {IsingAxis::ZZ, IsingAxis::XX}) {
        for (int n = 2; n <= 4; ++n) {
            std::vector<IsingEdge> star, chain;
            for (int k = 2; k <= n; ++k) star.push_back({1, k, 0.004 + 0.001 * k});
            for (int k = 1; k < n; ++k) chain.push_back({k, k + 1, 0.004 + 0.001 * k});
            for (const auto& edges : {star, chain}) {
                ModelSpec spec = uniform_spec(n, 0.01, 0.1, edges, 0.0, axis);
                for (int i = 0; i < n; ++i) spec.tunneling[i] = 0.009 + 0.001 * i;
                for (int cutoff : {20, 60}) {
                    BosonBasis basis{cutoff};
                    SymmetricOperator h = build_hamiltonian(spec, basis);
                    SymmetricOperator p = build_parity(n, basis);
                    double rel = commutator_frobenius(h, p) / h.frobenius();
                    check.expect(rel, 1e-12, "N=" + std::to_string(n));
                }
            }
        }
    }
    return {1, "parity symmetry [H,P_N]=0 (both axes, star+chain, N=2..4)", check.pass,
            check.pass ? "max rel commutator " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criterion 2: parity breaking ---------------------------------------

CriterionResult criterion_parity_breaking(const Options&) {
    Check check;
    for (double eta : {0.01, 0.1}) {
        for (IsingAxis axis : {IsingAxis::ZZ, IsingAxis::XX}) {
            ModelSpec spec = uniform_spec(2, 0.01, 0.1, {{1, 2, 0.005}}, eta, axis);
            BosonBasis basis{40};
            CommutatorNorms norms =
                commutator_norm(build_hamiltonian(spec, basis), build_parity(2, basis));
            check.expect(std::abs(norms.spectral - 2.0 * eta), 1e-10,
                         "eta=" + fmt17(eta));
            check.require(norms.frobenius > 0.0, "frobenius norm should be nonzero");
        }
    }
    return {2, "parity breaking ||[H_2B,P_2]||_2 = 2|eta|", check.pass,
            check.pass ? "max |spectral - 2 eta| " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criterion 3: four lowest levels vs closed forms ---------------------

CriterionResult criterion_low_spectrum(const Options& opt) {
    Check check;
    for (double eta : {0.0, 0.1}) {
        TwoSpinParams p{0.01, 1.0, 0.0, 0.005, eta};
        for (int i = 0; i <= 10; ++i) {
            p.coupling = 0.1 * i;
            ModelSpec spec = p.to_model(IsingAxis::XX);
            auto solve = [&](int c) { return solve_lowest(spec, c, 4); };
            Vec exact =
                converge_levels(solve, heuristic_cutoff(p.displacement()), opt.force_cutoff);
            auto adia = adiabatic_energies(0, p);
            std::array<double, 4> formula{adia[0].energy, adia[1].energy, adia[2].energy,
                                          adia[3].energy};
            std::sort(formula.begin(), formula.end());
            for (int l = 0; l < 4; ++l)
                check.expect(std::abs(exact[l] - formula[l]), 5e-3,
                             "lambda=" + fmt17(p.coupling) + " eta=" + fmt17(eta));
        }
    }
    // frozen endpoints at lambda = 0, eta = 0.1 (formula arithmetic)
    {
        TwoSpinParams p{0.01, 1.0, 0.0, 0.005, 0.1};
        Vec exact = solve_lowest(p.to_model(IsingAxis::XX), 12, 4);
        const std::array<double, 4> frozen{-0.1101249, -0.0911194, 0.0901249, 0.1111194};
        for (int l = 0; l < 4; ++l)
            check.expect(std::abs(exact[l] - frozen[l]), 1e-6, "frozen endpoint");
    }
    return {3, "four lowest levels track the closed forms (Delta/omega=0.01)", check.pass,
            check.pass ? "max deviation " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criterion 4: cross-solver equivalence -------------------------------

CriterionResult criterion_cross_solver(const Options& opt) {
    Check check;
    for (double delta : {0.01, 0.1}) {
        for (double lambda : {0.0, 0.2, 0.5, 1.0}) {
            for (double eta : {0.0, 0.1}) {
                for (double eps : {0.0, 0.005, 0.02}) {
                    TwoSpinParams p{delta, 1.0, lambda, eps, eta};
                    ModelSpec fock = p.to_model(IsingAxis::XX);
                    auto solve_fock = [&](int c) { return solve_lowest(fock, c, 8); };
                    auto solve_disp = [&](int c) -> Vec {
                        BosonBasis basis{c};
                        OverlapMatrix d = overlap_matrix(basis, p.displacement());
                        if (opt.inject_d_sign_error) {
                            for (int m = 0; m <= c; ++m)
                                for (int n = 0; n <= c; ++n)
                                    if (m != n) d.entries(m, n) = -d.entries(m, n);
                        }
                        EigenOptions eopt;
                        eopt.k = 8;
                        return eigendecompose(assemble_displaced(p, basis, d), eopt)
                            .eigenvalues.head(8);
                    };
                    int seed = heuristic_cutoff(p.displacement());
                    Vec a = converge_levels(solve_fock, seed, opt.force_cutoff);
                    Vec b = converge_levels(solve_disp, seed, opt.force_cutoff);
                    check.expect((a - b).cwiseAbs().maxCoeff(), 1e-8,
                                 "delta=" + fmt17(delta) + " lambda=" + fmt17(lambda) +
                                     " eta=" + fmt17(eta) + " eps=" + fmt17(eps));
                    if (!check.pass) goto done;
                }
            }
        }
    }
done:
    return {4, "displaced-basis solver matches the Fock XX solver (lowest 8)", check.pass,
            check.pass ? "max level gap " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criterion 5: D-kernel consistency -----------------------------------

// <m|exp(2q(a^dag - a))|n> through the truncated generator's exponential
Mat displacement_oracle(double q, int top, int extra) {
    const int dim = top + 1 + extra;
    Mat gen = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        gen(n, n - 1) = 2.0 * q * std::sqrt(double(n)); // a^dag
        gen(n - 1, n) = -2.0 * q * std::sqrt(double(n));
    }
    return gen.exp();
}

CriterionResult criterion_kernel(const Options&) {
    Check check;
    const int top = 30;
    for (double q : {0.1, 0.5, 1.0, 2.0}) {
        const int extra = 40 + int(std::ceil(24.0 * q * q + 12.0 * q));
        Mat u = displacement_oracle(q, 2 * top, extra);
        for (int m = 0; m <= top; ++m) {
            for (int n = 0; n <= top; ++n) {
                double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
                check.expect(std::abs(sign_n * overlap_D(m, n, q) - u(m, n)), 1e-10,
                             "q=" + fmt17(q));
            }
        }
        // diagonal against the Laguerre closed form (-1)^m e^{-2q^2} L_m(4q^2)
        const double x = 4.0 * q * q;
        double lm2 = 1.0, lm1 = 1.0 - x;
        for (int m = 0; m <= 2 * top; ++m) {
            double lag = (m == 0) ? lm2 : (m == 1 ? lm1 : 0.0);
            if (m >= 2) {
                lag = ((2.0 * m - 1.0 - x) * lm1 - (m - 1.0) * lm2) / m;
                lm2 = lm1;
                lm1 = lag;
            }
            double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
            check.expect(std::abs(overlap_D(m, m, q) - sign_m * std::exp(-2.0 * q * q) * lag),
                         1e-12, "laguerre diagonal q=" + fmt17(q));
        }
    }
    return {5, "D kernel matches the displacement-operator oracle (m,n<=30)", check.pass,
            check.pass ? "max |formula - oracle| " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criteria 6/7: scaling fixed point, bifurcation, collapse ------------

ScalingCurve family_curve(double delta, double eps, double kappa_target, double r0, double r1,
                          int count, const Options& opt) {
    // eta chosen so that kappa_of comes out at the requested magnitude
    double eta = kappa_target * (delta - eps);
    ModelSpec family = uniform_spec(2, delta, 0.0, eps == 0.0 ? std::vector<IsingEdge>{}
                                                              : std::vector<IsingEdge>{{1, 2, eps}},
                                    eta, IsingAxis::XX);
    double beta_c = beta_c_of(kappa_target);
    ScalingOptions sopt;
    sopt.force_cutoff = opt.force_cutoff;
    return scaling_curve(family, beta_grid_relative(beta_c, r0, r1, count), sopt);
}

double numeric_at_beta_c(const ScalingCurve& curve) {
    double best = std::numeric_limits<double>::quiet_NaN();
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& r : curve.rows) {
        double d = std::abs(r.beta - curve.beta_c);
        if (r.ok && d < dist) {
            dist = d;
            best = r.sigma_z_numeric;
        }
    }
    return best;
}

CriterionResult criterion_fixed_point(const Options& opt) {
    Check check;
    // analytic fixed point, both branches
    for (double kappa : {1e-2, 1e-3, -1e-2, -1e-3}) {
        double at_bc = sigma_z_beta(kappa, beta_c_of(kappa));
        double target = kappa > 0 ? -kInvSqrt3 : kInvSqrt3;
        check.expect(std::abs(at_bc - target), 1e-14, "analytic kappa=" + fmt17(kappa));
    }
    // numeric lower branch: Delta > eps, eta > 0
    for (double kappa : {1e-2, 1e-3}) {
        ScalingCurve c = family_curve(0.01, 0.0, kappa, 0.98, 1.02, 3, opt);
        check.expect(std::abs(numeric_at_beta_c(c) + kInvSqrt3), 0.02,
                     "numeric lower branch kappa=" + fmt17(kappa));
    }
    // numeric upper branch from a Delta < eps family. With eta > 0 the exact
    // ground state stays magnetized down for any eps, so the upper branch is
    // realized by reversing the bias; kappa = eta/(Delta-eps) is then positive
    // while the measured curve sits at +1/sqrt(3).
    {
        ScalingCurve c = family_curve(0.01, 0.02, 0.01, 0.98, 1.02, 3, opt);
        check.expect(std::abs(numeric_at_beta_c(c) - kInvSqrt3), 0.02,
                     "numeric upper branch (Delta<eps, eta<0)");
    }
    return {6, "scaling fixed points -1/sqrt(3) and +1/sqrt(3) at beta_c", check.pass,
            check.pass ? "max fixed-point deviation " + fmt17(check.worst) : check.note, 0.0};
}

CriterionResult criterion_collapse(const Options& opt) {
    Check check;
    std::vector<double> alpha_grid;
    for (int i = 0; i <= 60; ++i) alpha_grid.push_back(-0.3 + 0.01 * i);

    std::vector<ScalingCurve> curves;
    for (double kappa : {1e-2, 1e-3}) {
        double beta_c = beta_c_of(kappa);
        double span = 0.3 * std::sqrt(27.0) / beta_c + 0.03;
        curves.push_back(family_curve(0.01, 0.0, kappa, 1.0 - span, 1.0 + span, 41, opt));
    }
    CollapseDeviation dev = collapse_deviation(curves, alpha_grid);
    check.expect(dev.analytic, 1e-14, "analytic collapse");
    check.expect(dev.numeric, 0.03, "numeric collapse");
    return {7, "scaling collapse in alpha across kappa in {1e-2,1e-3}", check.pass,
            check.pass ? "analytic " + fmt17(dev.analytic) + ", numeric " + fmt17(dev.numeric)
                       : check.note,
            0.0};
}

// ---- criterion 8: closed-form small instances -----------------------------

CriterionResult criterion_closed_forms(const Options&) {
    Check check;
    const double delta = 0.01, eps = 0.005;
    const double zz_big = std::sqrt(4.0 * delta * delta + eps * eps);
    const std::array<double, 4> zz_expect{-zz_big, -eps, eps, zz_big};
    const std::array<double, 4> xx_expect{eps - 2.0 * delta, -eps, -eps, eps + 2.0 * delta};

    TwoSpinParams p{delta, 1.0, 0.0, eps, 0.0};
    Vec zz = solve_lowest(p.to_model(IsingAxis::ZZ), 3, 4);
    Vec xx = solve_lowest(p.to_model(IsingAxis::XX), 3, 4);
    for (int i = 0; i < 4; ++i) {
        check.expect(std::abs(zz[i] - zz_expect[i]), 1e-12, "zz block");
        check.expect(std::abs(xx[i] - xx_expect[i]), 1e-12, "xx block");
    }
    check.require((zz - xx).cwiseAbs().maxCoeff() > 1e-3,
                  "zz and xx spectra must differ (axis flag live)");
    return {8, "lambda=0 spin blocks match the 4x4 closed forms; ZZ != XX", check.pass,
            check.pass ? "max deviation " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criterion 9: symmetric shift and eta parity --------------------------

CriterionResult criterion_eta_symmetry(const Options&) {
    Check check;
    for (int m : {0, 1, 2}) {
        for (double lambda : {0.0, 0.3, 0.7}) {
            for (double eta : {0.0, 0.05, 0.1}) {
                TwoSpinParams p{0.01, 1.0, lambda, 0.005, eta};
                auto e = adiabatic_energies(m, p);
                double shift = m - lambda * lambda;
                check.expect(std::abs(e[0].energy + e[1].energy - 2.0 * (-0.01 + shift)), 1e-14,
                             "family 1 pair sum");
                check.expect(std::abs(e[2].energy + e[3].energy - 2.0 * (0.01 + shift)), 1e-14,
                             "family 2 pair sum");
            }
        }
    }
    for (double lambda : {0.2, 0.5}) {
        for (double eta : {0.05, 0.1}) {
            TwoSpinParams plus{0.01, 1.0, lambda, 0.005, eta};
            TwoSpinParams minus{0.01, 1.0, lambda, 0.005, -eta};
            TwoSpinParams zero{0.01, 1.0, lambda, 0.005, 0.0};
            int cutoff = heuristic_cutoff(lambda) + 8;
            Vec ep = solve_lowest(plus.to_model(IsingAxis::XX), cutoff, 8);
            Vec em = solve_lowest(minus.to_model(IsingAxis::XX), cutoff, 8);
            Vec e0 = solve_lowest(zero.to_model(IsingAxis::XX), cutoff, 8);
            check.expect((ep - em).cwiseAbs().maxCoeff(), 1e-12, "spectrum even in eta");
            check.require(ep[0] <= e0[0] + 1e-12, "bias must lower the ground energy");
        }
    }
    return {9, "adiabatic pair sums eta-free; exact spectrum even in eta", check.pass,
            check.pass ? "max deviation " + fmt17(check.worst) : check.note, 0.0};
}

// ---- criterion 10: N-spin kappa reduction ---------------------------------

CriterionResult criterion_star_reduction(const Options& opt) {
    Check check;
    const double delta = 0.01, eps_sum = 0.005, kappa = 1e-2;
    const double eta = kappa * (delta - eps_sum);
    ModelSpec two = uniform_spec(2, delta, 0.0, {{1, 2, eps_sum}}, eta, IsingAxis::XX);
    ModelSpec three =
        uniform_spec(3, delta, 0.0, {{1, 2, eps_sum / 2}, {1, 3, eps_sum / 2}}, eta, IsingAxis::XX);
    check.require(std::abs(kappa_of(two) - kappa_of(three)) < 1e-15, "matched kappa");

    std::vector<double> grid = beta_grid_relative(beta_c_of(kappa), 0.5, 1.5, 11);
    ScalingOptions sopt;
    sopt.force_cutoff = opt.force_cutoff;
    ScalingCurve c2 = scaling_curve(two, grid, sopt);
    ScalingCurve c3 = scaling_curve(three, grid, sopt);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        check.require(c2.rows[i].ok && c3.rows[i].ok, "row failed");
        check.expect(std::abs(c2.rows[i].sigma_z_numeric - c3.rows[i].sigma_z_numeric), 0.02,
                     "beta=" + fmt17(grid[i]));
    }
    return {10, "three-spin star reduces to the two-spin curve at matched kappa", check.pass,
            check.pass ? "max curve gap " + fmt17(check.worst) : check.note, 0.0};
}

} // namespace

CriterionResult run_criterion(int id, const Options& opt) {
    using Runner = CriterionResult (*)(const Options&);
    static const Runner runners[] = {
        criterion_parity_symmetry, criterion_parity_breaking, criterion_low_spectrum,
        criterion_cross_solver,    criterion_kernel,          criterion_fixed_point,
        criterion_collapse,        criterion_closed_forms,    criterion_eta_symmetry,
        criterion_star_reduction,
    };
    if (id < 1 || id > 10)
        throw ValidationError("E_CRITERION", "criterion id must be in 1..10");
    auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
        result = runners[id - 1](opt);
    } catch (const std::exception& e) {
        result = {id, "criterion " + std::to_string(id), false,
                  std::string("exception: ") + e.what(), 0.0};
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<CriterionResult> run_all(const Options& opt) {
    std::vector<CriterionResult> results;
    for (int id = 1; id <= 10; ++id) results.push_back(run_criterion(id, opt));
    return results;
}

int run_and_print(const Options& opt, std::ostream& out) {
    bool all_pass = true;
    for (int id = 1; id <= 10; ++id) {
        CriterionResult r = run_criterion(id, opt);
        all_pass = all_pass && r.pass;
        out << (r.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << r.id << "] " << r.name
            << "  (" << std::fixed << std::setprecision(2) << r.seconds << " s)  " << r.detail
            << "\n";
        out.unsetf(std::ios::fixed);
    }
    out << (all_pass ? "all criteria passed" : "criteria FAILED") << "\n";
    return all_pass ? 0 : 1;
}

} // namespace qrlab::acceptance
