#pragma once

#include <array>

#include "qrlab/common.hpp"
#include "qrlab/hilbert.hpp"
#include "qrlab/models.hpp"

namespace qrlab {

/// Overlap kernel between oppositely displaced Fock states,
///   D_{m,n} = e^{-2q^2} sum_k (-1)^k sqrt(m! n!) (2q)^{m+n-2k}
///             / ((m-k)! (n-k)! k!),  k = 0..min(m,n).
/// Evaluated from the leading term and iterative term ratios, with the
/// alternating sum accumulated in extended precision: the largest term
/// exceeds the result by ~10^11 already at m = n = 30, q = 2, which is
/// more cancellation than double or long double can absorb at the 1e-10
/// accuracy the kernel checks demand. Finite for indices >= 200.
///
/// Sign conventions that follow from the definition (tested properties):
///   D(q=0) = diag((-1)^m), and (-1)^n D[m][n] = <m|exp(2q(a^dag - a))|n>.
double overlap_D(int m, int n, double q);

struct OverlapMatrix {
    double q = 0.0;
    int cutoff = 0;
    Mat entries; // (cutoff+1)^2, symmetric bitwise

    int dim() const { return cutoff + 1; }
};

OverlapMatrix overlap_matrix(const BosonBasis& basis, double q);

/// Two-spin uniform-Delta parameters (Delta, omega, lambda, eps, eta) with the
/// bias on spin 1; the shape the displaced-basis solver and the closed-form
/// energies are stated for.
struct TwoSpinParams {
    double tunneling = 0.0; // Delta
    double boson_freq = 1.0;
    double coupling = 0.0;  // lambda
    double ising = 0.0;     // eps
    double bias = 0.0;      // eta

    double displacement() const { return coupling / boson_freq; }
    void validate() const;
    ModelSpec to_model(IsingAxis axis) const;
};

/// TwoSpinParams read off a two-spin uniform ModelSpec; rejects anything else.
TwoSpinParams two_spin_params(const ModelSpec& spec);

/// Hamiltonian in displaced-Fock coordinates, dimension 4 (cutoff+1).
///
/// Sector order (block s, boson index m; index = s*(cutoff+1)+m):
///   s=0: |down,down> with B states, s=1: |down,up> with B states,
///   s=2: |up,down> with A states,   s=3: |up,up> with A states.
/// Rows are the four coupled equations: diagonal omega(m - q^2) -/+ eta,
/// intra-sector -Delta (0<->1, 2<->3), cross-sector (-1)^m D_{mn} from the B
/// rows and (-1)^n D_{mn} from the A rows (eps: 0<->3, 1<->2; -Delta: 0<->2,
/// 1<->3). Nothing is symmetrized; the (-1)^m / (-1)^n prefactors must combine
/// with the symmetry of D to give an exactly symmetric matrix, and a
/// construction that fails that check throws instead of being repaired.
SymmetricOperator assemble_displaced(const TwoSpinParams& p, const BosonBasis& basis);

/// Same, with a caller-supplied kernel (cross-checks and fault injection).
SymmetricOperator assemble_displaced(const TwoSpinParams& p, const BosonBasis& basis,
                                     const OverlapMatrix& d);

/// 4x4 restriction to one boson index m keeping only the diagonal D_{mm};
/// its eigenvalues are exactly the four closed-form adiabatic energies.
Mat single_mode_block(const TwoSpinParams& p, int m);

struct AdiabaticLevel {
    int m = 0;
    int family = 1; // 1 or 2
    int sign = -1;  // -1 or +1
    double energy = 0.0;
};

/// Closed-form energies under Delta/omega << 1:
///   E_{m1}^± = -Delta ± sqrt(D_mm^2 (eps-Delta)^2 + eta^2) + omega(m - q^2)
///   E_{m2}^± =  Delta ± sqrt(D_mm^2 (eps+Delta)^2 + eta^2) + omega(m - q^2)
/// Returned in order (m1,-), (m1,+), (m2,-), (m2,+).
std::array<AdiabaticLevel, 4> adiabatic_energies(int m, const TwoSpinParams& p);

/// E_{01}^-, the approximate ground energy in the adiabatic regime.
double adiabatic_ground_energy(const TwoSpinParams& p);

} // namespace qrlab
