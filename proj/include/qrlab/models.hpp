#pragma once

#include <string>
#include <vector>

#include "qrlab/common.hpp"
#include "qrlab/hilbert.hpp"
#include "qrlab/spectra.hpp"

namespace qrlab {

/// Ising coupling axis. ZZ is eps * sigma_i^z sigma_j^z; XX is the
/// eps * sigma_i^x sigma_j^x variant that the displaced-basis solver and the
/// closed-form energies correspond to. The two have different spectra.
enum class IsingAxis { ZZ, XX };

struct IsingEdge {
    int i = 1;
    int j = 2;
    double strength = 0.0;
};

/// Full description of a spin-boson model instance:
///   H = sum_i(-Delta_i sigma_i^x) + omega a^dag a
///       + lambda (a^dag + a) sigma_1^z
///       + sum_edges eps_ij sigma_i^A sigma_j^A + sum_i eta_i sigma_i^z
struct ModelSpec {
    int n_spins = 1;
    std::vector<double> tunneling;      // Delta_i, one per spin
    double boson_freq = 1.0;            // omega, the reference energy scale
    double coupling = 0.0;              // lambda; the boson couples to spin 1 only
    std::vector<IsingEdge> ising_edges; // i < j
    std::vector<double> bias;           // eta_i, one per spin
    IsingAxis ising_axis = IsingAxis::ZZ;

    void validate() const;
    bool parity_symmetric() const; // all eta_i == 0
    bool is_star() const;          // every edge incident to spin 1
    double edge_sum() const;
    std::string digest() const;    // one-line key=value description
};

struct BuildOptions {
    long dim_limit = 4096; // reject 2^N (cutoff+1) above this
};

SymmetricOperator build_hamiltonian(const ModelSpec& spec, const BosonBasis& basis,
                                    const BuildOptions& opt = {});

/// P_N = (prod_i sigma_i^x) (x) (-1)^(a^dag a); a traceless real involution.
SymmetricOperator build_parity(int n_spins, const BosonBasis& basis);

/// ||AB - BA||_F; cheap, fully sparse.
double commutator_frobenius(const SymmetricOperator& a, const SymmetricOperator& b);

struct CommutatorNorms {
    double frobenius = 0.0;
    double spectral = 0.0; // operator 2-norm
};

CommutatorNorms commutator_norm(const SymmetricOperator& a, const SymmetricOperator& b);

struct SectorReport {
    std::vector<int> labels;     // +1 / -1 per eigenvector
    int plus_count = 0;
    int minus_count = 0;
    int cluster_count = 0;       // degenerate clusters treated jointly
    double min_abs_parity = 1.0; // smallest |<P>| accepted
};

/// Parity sector labels for an eta = 0 spectrum. Nondegenerate vectors are
/// labeled by sign(v^T P v) with |v^T P v| >= 1 - tol; clusters closer than
/// degeneracy_scale * max|E| are labeled by diagonalizing P inside the cluster.
SectorReport parity_sectors(const ModelSpec& spec, const BosonBasis& basis, const Spectrum& s,
                            double tol = 1e-8, double degeneracy_scale = 1e-9);

/// Trapped-ion drive parameters (consistent units).
struct IonParams {
    double rabi = 0.0;         // Omega~
    double detuning = 0.0;     // Delta~
    double trap_freq = 1.0;    // nu~
    double lamb_dicke = 0.0;   // eta~
    double splitting = 0.0;    // omega_s
    double ion_coupling = 0.0; // eps~

    void validate() const;
};

/// Two-spin ModelSpec read off the transformed ion Hamiltonian:
/// tunneling [Omega~/2, -omega_s], boson_freq nu~, coupling nu~ eta~/2,
/// bias [-Delta~/2, 0], one ZZ edge (1,2,eps~).
ModelSpec ion_param_map(const IonParams& p);

} // namespace qrlab
