#pragma once

#include <map>
#include <string>

#include "qrlab/common.hpp"

namespace qrlab {

/// Truncated Fock space |0>..|n_max>.
struct BosonBasis {
    int cutoff = 0; // n_max; dimension is cutoff + 1

    int dim() const { return cutoff + 1; }
    void validate() const {
        if (cutoff < 0) throw ValidationError("E_BASIS", "boson cutoff must be >= 0");
    }
};

/// Real symmetric operator on the composite spin (x) boson space.
///
/// Basis convention (basis_tag documents it): spin 1 is the most significant
/// tensor factor, the boson the least significant; within each spin,
/// index 0 = |up> (sigma^z = +1), index 1 = |down>.
struct SymmetricOperator {
    SpMat mat;
    std::string basis_tag;

    Eigen::Index dim() const { return mat.rows(); }
    Mat dense() const { return Mat(mat); }
    double frobenius() const { return mat.norm(); }

    /// Exact check: every stored value equals its transposed partner bitwise.
    bool is_symmetric_exact() const {
        SpMat d = SpMat(mat.transpose()) - mat;
        d.prune(0.0, 0.0);
        return d.nonZeros() == 0;
    }
};

struct BosonOps {
    SpMat annihilate; // a[m][n] = sqrt(n) for m = n-1
    SpMat create;     // a^T
    SpMat number;     // diag(0..n_max)
};

BosonOps boson_ops(const BosonBasis& basis);

/// Boson parity exp(i pi a^dag a) represented as the real diagonal (-1)^n.
SpMat boson_parity(const BosonBasis& basis);

enum class PauliAxis { X, Z };

SpMat pauli(PauliAxis axis);

/// Kronecker product, row-major nesting: A is the more significant factor.
SpMat kron(const SpMat& a, const SpMat& b);

/// Product of Pauli operators placed at the given 1-based spin sites,
/// identity elsewhere; spin 1 is the most significant factor.
SpMat spin_chain(int n_spins, const std::map<int, SpMat>& site_ops);

std::string composite_basis_tag(int n_spins, const BosonBasis& basis);

/// I (x) ... (x) sigma^axis at `site` (x) ... (x) I (x) I_boson.
SymmetricOperator embed_spin(int n_spins, int site, PauliAxis axis, const BosonBasis& basis);

} // namespace qrlab
