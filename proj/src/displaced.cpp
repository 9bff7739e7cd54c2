#include "qrlab/displaced.hpp"

#include <cmath>
#include <utility>

#include <quadmath.h>

namespace qrlab {

double overlap_D(int m, int n, double q) {
    if (m < 0 || n < 0) throw ValidationError("E_INDEX", "overlap indices must be >= 0");
    if (m > n) std::swap(m, n); // the defining sum is symmetric in (m, n)
    if (q == 0.0) return m == n ? (m % 2 == 0 ? 1.0 : -1.0) : 0.0;

    const double x = 2.0 * q;
    // leading term t0 = x^{m+n} / sqrt(m! n!); later terms via exact ratios
    //   t_{k+1}/t_k = -(m-k)(n-k) / ((k+1) x^2).
    // t0's double-precision rounding scales the whole sum coherently, so only
    // the ratio accumulation needs the extra digits.
    const double log_t0 =
        (m + n) * std::log(std::fabs(x)) - 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0));
    const __float128 inv_x2 = (__float128)1 / ((__float128)x * (__float128)x);
    __float128 term = 1;
    __float128 sum = 1;
    for (int k = 0; k < m; ++k) {
        term *= -(__float128)(m - k) * (__float128)(n - k) * inv_x2 / (__float128)(k + 1);
        sum += term;
    }
    if (sum == 0) return 0.0;

    const double sign_x = (x < 0.0 && (m + n) % 2 != 0) ? -1.0 : 1.0;
    const double sign_sum = sum < 0 ? -1.0 : 1.0;
    const double log_abs = log_t0 - 2.0 * q * q + (double)logq(fabsq(sum));
    return sign_x * sign_sum * std::exp(log_abs);
}

OverlapMatrix overlap_matrix(const BosonBasis& basis, double q) {
    basis.validate();
    OverlapMatrix d;
    d.q = q;
    d.cutoff = basis.cutoff;
    d.entries.resize(basis.dim(), basis.dim());
    for (int m = 0; m < basis.dim(); ++m)
        for (int n = m; n < basis.dim(); ++n)
            d.entries(m, n) = d.entries(n, m) = overlap_D(m, n, q);
    return d;
}

void TwoSpinParams::validate() const {
    if (boson_freq <= 0.0) throw ValidationError("E_SPEC", "boson_freq must be > 0");
}

ModelSpec TwoSpinParams::to_model(IsingAxis axis) const {
    ModelSpec spec;
    spec.n_spins = 2;
    spec.tunneling = {tunneling, tunneling};
    spec.boson_freq = boson_freq;
    spec.coupling = coupling;
    spec.ising_edges = {{1, 2, ising}};
    spec.bias = {bias, 0.0};
    spec.ising_axis = axis;
    return spec;
}

TwoSpinParams two_spin_params(const ModelSpec& spec) {
    spec.validate();
    if (spec.n_spins != 2)
        throw ValidationError("E_SPEC", "displaced solver requires exactly two spins");
    if (spec.tunneling[0] != spec.tunneling[1])
        throw ValidationError("E_SPEC", "displaced solver requires a uniform tunneling");
    if (spec.bias[1] != 0.0)
        throw ValidationError("E_SPEC", "displaced solver requires the bias on spin 1 only");
    if (spec.ising_edges.size() > 1)
        throw ValidationError("E_SPEC", "displaced solver takes a single ising edge");
    TwoSpinParams p;
    p.tunneling = spec.tunneling[0];
    p.boson_freq = spec.boson_freq;
    p.coupling = spec.coupling;
    p.ising = spec.ising_edges.empty() ? 0.0 : spec.ising_edges[0].strength;
    p.bias = spec.bias[0];
    return p;
}

SymmetricOperator assemble_displaced(const TwoSpinParams& p, const BosonBasis& basis) {
    return assemble_displaced(p, basis, overlap_matrix(basis, p.displacement()));
}

SymmetricOperator assemble_displaced(const TwoSpinParams& p, const BosonBasis& basis,
                                     const OverlapMatrix& d) {
    p.validate();
    basis.validate();
    if (d.cutoff != basis.cutoff)
        throw ValidationError("E_SPEC", "overlap matrix cutoff does not match the basis");

    const int nb = basis.dim();
    const double q = p.displacement();
    const double omega = p.boson_freq;
    const double delta = p.tunneling;
    const double eps = p.ising;
    const double eta = p.bias;
    auto idx = [nb](int sector, int m) { return sector * nb + m; };

    std::vector<Triplet> t;
    t.reserve(std::size_t(nb) * (8 * nb + 6));
    for (int m = 0; m < nb; ++m) {
        const double diag = omega * (m - q * q);
        t.emplace_back(idx(0, m), idx(0, m), diag - eta);
        t.emplace_back(idx(1, m), idx(1, m), diag - eta);
        t.emplace_back(idx(2, m), idx(2, m), diag + eta);
        t.emplace_back(idx(3, m), idx(3, m), diag + eta);
        t.emplace_back(idx(0, m), idx(1, m), -delta);
        t.emplace_back(idx(1, m), idx(0, m), -delta);
        t.emplace_back(idx(2, m), idx(3, m), -delta);
        t.emplace_back(idx(3, m), idx(2, m), -delta);
        const double sm = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = 0; n < nb; ++n) {
            const double sn = (n % 2 == 0) ? 1.0 : -1.0;
            const double dmn = d.entries(m, n);
            // rows of the B sectors carry (-1)^m, rows of the A sectors (-1)^n
            t.emplace_back(idx(0, m), idx(3, n), sm * dmn * eps);
            t.emplace_back(idx(0, m), idx(2, n), -sm * dmn * delta);
            t.emplace_back(idx(1, m), idx(2, n), sm * dmn * eps);
            t.emplace_back(idx(1, m), idx(3, n), -sm * dmn * delta);
            t.emplace_back(idx(2, m), idx(1, n), sn * dmn * eps);
            t.emplace_back(idx(2, m), idx(0, n), -sn * dmn * delta);
            t.emplace_back(idx(3, m), idx(0, n), sn * dmn * eps);
            t.emplace_back(idx(3, m), idx(1, n), -sn * dmn * delta);
        }
    }
    SymmetricOperator op;
    op.mat.resize(4 * nb, 4 * nb);
    op.mat.setFromTriplets(t.begin(), t.end());
    op.basis_tag = "displaced sectors (dd:B, du:B, ud:A, uu:A) x fock 0.." +
                   std::to_string(basis.cutoff) + ", q=" + fmt17(q);
    // the (-1)^m / (-1)^n sign structure is the subtle part; a failure here is
    // a construction bug and must surface, not be repaired
    if (!op.is_symmetric_exact())
        throw NumericError("E_ASYMMETRY", "displaced assembly produced an asymmetric matrix");
    return op;
}

Mat single_mode_block(const TwoSpinParams& p, int m) {
    if (m < 0) throw ValidationError("E_INDEX", "boson index must be >= 0");
    p.validate();
    const double q = p.displacement();
    const double diag = p.boson_freq * (m - q * q);
    const double dmm = overlap_D(m, m, q);
    const double sm = (m % 2 == 0) ? 1.0 : -1.0;
    const double ceps = sm * dmm * p.ising;
    const double cdel = -sm * dmm * p.tunneling;
    Mat block(4, 4);
    block << diag - p.bias, -p.tunneling, cdel, ceps,
             -p.tunneling, diag - p.bias, ceps, cdel,
             cdel, ceps, diag + p.bias, -p.tunneling,
             ceps, cdel, -p.tunneling, diag + p.bias;
    return block;
}

std::array<AdiabaticLevel, 4> adiabatic_energies(int m, const TwoSpinParams& p) {
    if (m < 0) throw ValidationError("E_INDEX", "boson index must be >= 0");
    p.validate();
    const double q = p.displacement();
    const double dmm = overlap_D(m, m, q);
    const double shift = p.boson_freq * (m - q * q);
    const double r1 = std::sqrt(dmm * dmm * (p.ising - p.tunneling) * (p.ising - p.tunneling) +
                                p.bias * p.bias);
    const double r2 = std::sqrt(dmm * dmm * (p.ising + p.tunneling) * (p.ising + p.tunneling) +
                                p.bias * p.bias);
    return {AdiabaticLevel{m, 1, -1, -p.tunneling - r1 + shift},
            AdiabaticLevel{m, 1, +1, -p.tunneling + r1 + shift},
            AdiabaticLevel{m, 2, -1, p.tunneling - r2 + shift},
            AdiabaticLevel{m, 2, +1, p.tunneling + r2 + shift}};
}

double adiabatic_ground_energy(const TwoSpinParams& p) {
    return adiabatic_energies(0, p)[0].energy;
}

} // namespace qrlab
