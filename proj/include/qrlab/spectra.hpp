#pragma once

#include <string>
#include <vector>

#include "qrlab/common.hpp"
#include "qrlab/hilbert.hpp"

namespace qrlab {

struct ModelSpec; // models.hpp

/// Eigenvalues ascending; eigenvector columns aligned with them.
struct Spectrum {
    Vec eigenvalues;
    Mat eigenvectors;
    std::string model_digest;

    /// Residual and orthonormality bounds: ||H v - E v|| <= tol * ||H||_F per
    /// pair and ||V^T V - I||_max <= tol. Throws NumericError on violation.
    void validate_against(const SymmetricOperator& h, double tol = 1e-10) const;
};

struct EigenOptions {
    int k = -1;               // -1: full spectrum
    int dense_threshold = 2000;
    int max_iterations = 0;   // iterative path; 0 = automatic
    std::string digest;
};

/// Dense symmetric eigendecomposition, or lowest-k Lanczos above the dense
/// threshold. Deterministic (fixed internal seed on the iterative path).
Spectrum eigendecompose(const SymmetricOperator& h, const EigenOptions& opt = {});

struct GroundState {
    double energy = 0.0;
    Vec vector;
    double gap = 0.0;          // to the next level
    bool near_degenerate = false;
};

/// Lowest pair; flags near-degeneracy when gap < 1e-9 * max|eigenvalue|.
GroundState ground_state(const Spectrum& s);

/// v^T O v for a normalized state.
double expectation(const Vec& state, const SymmetricOperator& op);

struct ConvergenceTable {
    std::vector<int> cutoffs;
    std::vector<Vec> levels;     // lowest k per cutoff
    int recommended = -1;        // -1: not converged within the list
    bool monotone = true;        // variational: levels non-increasing in cutoff
    double max_violation = 0.0;  // largest observed increase
};

/// Lowest-k levels across ascending cutoffs; recommended = smallest cutoff
/// whose levels move < tol * omega against the next one.
ConvergenceTable converge_cutoff(const ModelSpec& spec, const std::vector<int>& cutoffs,
                                 int k, double tol = 1e-10);

/// Seed cutoff ceil(q^2 + 6q + 20) for the displacement q = lambda/omega.
int heuristic_cutoff(double q);

/// Converged cutoff for a spec: ladder from the heuristic seed in `step`
/// increments. force >= 0 short-circuits (test hook and CLI override).
int auto_cutoff(const ModelSpec& spec, int k, int force = -1, int step = 8, int max_steps = 8);

} // namespace qrlab
