#include "qrlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qrlab/models.hpp"

namespace qrlab {

void Spectrum::validate_against(const SymmetricOperator& h, double tol) const {
    const double scale = std::max(1.0, h.frobenius());
    Mat r = h.mat * eigenvectors - eigenvectors * eigenvalues.asDiagonal();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        double res = r.col(i).norm();
        if (res > tol * scale)
            throw NumericError("E_RESIDUAL", "eigenpair " + std::to_string(i) +
                                                 " residual " + fmt17(res) + " exceeds bound");
    }
    Mat gram = eigenvectors.transpose() * eigenvectors;
    gram.diagonal().array() -= 1.0;
    double ortho = gram.cwiseAbs().maxCoeff();
    if (ortho > tol)
        throw NumericError("E_ORTHO", "eigenvector orthonormality defect " + fmt17(ortho));
}

// Lanczos with full reorthogonalization for the lowest k eigenpairs of a
// sparse symmetric matrix. Fixed seed keeps sweeps deterministic.
static void lanczos_lowest(const SpMat& h, int k, int maxit, double tol,
                           Vec& values, Mat& vectors) {
    const Eigen::Index n = h.rows();
    if (maxit <= 0) maxit = std::min<Eigen::Index>(n, std::max(6 * k + 80, 200));
    maxit = std::min<Eigen::Index>(maxit, n);

    std::mt19937_64 rng(0x517eed5eedULL);
    std::normal_distribution<double> gauss;
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();

    Mat basis(n, maxit);
    std::vector<double> alpha, beta; // tridiagonal coefficients
    basis.col(0) = v;

    Eigen::SelfAdjointEigenSolver<Mat> tri;
    int m = 0;
    for (; m < maxit; ++m) {
        Vec w = h * basis.col(m);
        double a = basis.col(m).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(m);
        if (m > 0) w -= beta[m - 1] * basis.col(m - 1);
        // two rounds of Gram-Schmidt against everything kept so far
        for (int round = 0; round < 2; ++round)
            w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).transpose() * w);
        double b = w.norm();

        const bool exhausted = b < 1e-14; // invariant subspace hit
        if ((m + 1 >= k + 2 && (m % 4 == 0 || m + 1 == maxit)) || exhausted) {
            if (exhausted && m + 1 < k)
                throw NumericError("E_NONCONVERGED",
                                   "Krylov space exhausted before reaching k eigenpairs");
            Mat t = Mat::Zero(m + 1, m + 1);
            for (int i = 0; i <= m; ++i) t(i, i) = alpha[i];
            for (int i = 0; i + 1 <= m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
            tri.compute(t);
            bool done = true;
            for (int i = 0; i < k && done; ++i)
                if (b * std::abs(tri.eigenvectors()(m, i)) > tol) done = false;
            if (done || exhausted) {
                values = tri.eigenvalues().head(k);
                vectors = basis.leftCols(m + 1) * tri.eigenvectors().leftCols(k);
                return;
            }
        }
        if (m + 1 < maxit) {
            beta.push_back(b);
            basis.col(m + 1) = w / b;
        }
    }
    throw NumericError("E_NONCONVERGED",
                       "Lanczos did not converge " + std::to_string(k) + " eigenpairs in " +
                           std::to_string(maxit) + " iterations");
}

Spectrum eigendecompose(const SymmetricOperator& h, const EigenOptions& opt) {
    if (h.mat.rows() != h.mat.cols())
        throw ValidationError("E_SHAPE", "operator is not square");
    if (!h.is_symmetric_exact())
        throw ValidationError("E_ASYMMETRY", "eigendecompose requires an exactly symmetric matrix");

    Spectrum s;
    s.model_digest = opt.digest;
    const Eigen::Index n = h.dim();
    if (opt.k < 0 || n <= opt.dense_threshold) {
        Eigen::SelfAdjointEigenSolver<Mat> solver(h.dense());
        if (solver.info() != Eigen::Success)
            throw NumericError("E_SOLVER", "dense symmetric eigensolver failed");
        if (opt.k < 0 || opt.k >= n) {
            s.eigenvalues = solver.eigenvalues();
            s.eigenvectors = solver.eigenvectors();
        } else {
            s.eigenvalues = solver.eigenvalues().head(opt.k);
            s.eigenvectors = solver.eigenvectors().leftCols(opt.k);
        }
    } else {
        int k = std::min<Eigen::Index>(opt.k, n);
        lanczos_lowest(h.mat, k, opt.max_iterations, 1e-11 * std::max(1.0, h.frobenius()),
                       s.eigenvalues, s.eigenvectors);
        s.validate_against(h);
    }
    return s;
}

GroundState ground_state(const Spectrum& s) {
    if (s.eigenvalues.size() == 0)
        throw ValidationError("E_EMPTY", "spectrum is empty");
    GroundState g;
    g.energy = s.eigenvalues[0];
    g.vector = s.eigenvectors.col(0);
    if (s.eigenvalues.size() > 1) {
        g.gap = s.eigenvalues[1] - s.eigenvalues[0];
        double scale = std::max(std::abs(s.eigenvalues[0]),
                                std::abs(s.eigenvalues[s.eigenvalues.size() - 1]));
        g.near_degenerate = g.gap < 1e-9 * std::max(1.0, scale);
    }
    return g;
}

double expectation(const Vec& state, const SymmetricOperator& op) {
    if (state.size() != op.dim())
        throw ValidationError("E_DIM_MISMATCH", "state and operator dimensions differ");
    if (std::abs(state.norm() - 1.0) > 1e-8)
        throw ValidationError("E_NORM", "expectation requires a normalized state");
    return state.dot(op.mat * state);
}

int heuristic_cutoff(double q) {
    q = std::abs(q);
    return int(std::ceil(q * q + 6.0 * q + 20.0));
}

ConvergenceTable converge_cutoff(const ModelSpec& spec, const std::vector<int>& cutoffs,
                                 int k, double tol) {
    if (cutoffs.size() < 2)
        throw ValidationError("E_CUTOFFS", "need at least two cutoffs");
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end()))
        throw ValidationError("E_CUTOFFS", "cutoffs must ascend");

    ConvergenceTable table;
    table.cutoffs = cutoffs;
    table.levels.resize(cutoffs.size());
    const double omega = spec.boson_freq;

    parallel_for(cutoffs.size(), [&](std::size_t i) {
        SymmetricOperator h = build_hamiltonian(spec, BosonBasis{cutoffs[i]});
        EigenOptions opt;
        opt.k = k;
        table.levels[i] = eigendecompose(h, opt).eigenvalues.head(k);
    });

    for (std::size_t i = 0; i + 1 < cutoffs.size(); ++i) {
        // variational property of nested bases: levels may only come down
        double rise = (table.levels[i + 1] - table.levels[i]).maxCoeff();
        if (rise > 1e-12 * omega) {
            table.monotone = false;
            table.max_violation = std::max(table.max_violation, rise);
        }
        double shift = (table.levels[i + 1] - table.levels[i]).cwiseAbs().maxCoeff();
        if (table.recommended < 0 && shift < tol * omega) table.recommended = cutoffs[i];
    }
    return table;
}

int auto_cutoff(const ModelSpec& spec, int k, int force, int step, int max_steps) {
    if (force >= 0) return force;
    const double q = spec.coupling / spec.boson_freq;
    std::vector<int> ladder;
    int c0 = heuristic_cutoff(q);
    for (int i = 0; i <= max_steps; ++i) ladder.push_back(c0 + i * step);
    ConvergenceTable table = converge_cutoff(spec, ladder, k);
    if (table.recommended < 0)
        throw NumericError("E_NONCONVERGED",
                           "cutoff not converged up to " + std::to_string(ladder.back()) +
                               " (coupling too large for the ladder)");
    return table.recommended;
}

} // namespace qrlab
