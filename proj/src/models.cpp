#include "qrlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qrlab {

void ModelSpec::validate() const {
    if (n_spins < 1) throw ValidationError("E_SPEC", "n_spins must be >= 1");
    if (boson_freq <= 0.0) throw ValidationError("E_SPEC", "boson_freq must be > 0");
    if (int(tunneling.size()) != n_spins)
        throw ValidationError("E_SPEC", "tunneling needs one entry per spin");
    if (int(bias.size()) != n_spins)
        throw ValidationError("E_SPEC", "bias needs one entry per spin");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : ising_edges) {
        if (e.i < 1 || e.j < 1 || e.i > n_spins || e.j > n_spins)
            throw ValidationError("E_SPEC", "ising edge references a spin out of range");
        if (e.i >= e.j)
            throw ValidationError("E_SPEC", "ising edges must have i < j");
        if (!seen.insert({e.i, e.j}).second)
            throw ValidationError("E_SPEC", "duplicate ising edge");
    }
}

bool ModelSpec::parity_symmetric() const {
    return std::all_of(bias.begin(), bias.end(), [](double b) { return b == 0.0; });
}

bool ModelSpec::is_star() const {
    return std::all_of(ising_edges.begin(), ising_edges.end(),
                       [](const IsingEdge& e) { return e.i == 1; });
}

double ModelSpec::edge_sum() const {
    double s = 0.0;
    for (const auto& e : ising_edges) s += e.strength;
    return s;
}

static std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt17(v[i]);
    }
    return s;
}

std::string ModelSpec::digest() const {
    std::ostringstream os;
    os << "n_spins=" << n_spins << " tunneling=[" << join(tunneling) << "]"
       << " boson_freq=" << fmt17(boson_freq) << " coupling=" << fmt17(coupling)
       << " ising_edges=[";
    for (std::size_t i = 0; i < ising_edges.size(); ++i) {
        if (i) os << " ";
        os << "(" << ising_edges[i].i << "," << ising_edges[i].j << ","
           << fmt17(ising_edges[i].strength) << ")";
    }
    os << "] bias=[" << join(bias) << "]"
       << " ising_axis=" << (ising_axis == IsingAxis::ZZ ? "zz" : "xx");
    return os.str();
}

SymmetricOperator build_hamiltonian(const ModelSpec& spec, const BosonBasis& basis,
                                    const BuildOptions& opt) {
    spec.validate();
    basis.validate();
    const long dim = (1L << spec.n_spins) * basis.dim();
    if (dim > opt.dim_limit)
        throw ValidationError("E_DIM_LIMIT", "composite dimension " + std::to_string(dim) +
                                                 " exceeds limit " + std::to_string(opt.dim_limit));

    const int n = spec.n_spins;
    const BosonOps b = boson_ops(basis);
    SpMat boson_id(basis.dim(), basis.dim());
    boson_id.setIdentity();
    const SpMat quadrature = b.annihilate + b.create;
    const SpMat axis_op = pauli(spec.ising_axis == IsingAxis::ZZ ? PauliAxis::Z : PauliAxis::X);

    SpMat h = kron(spin_chain(n, {}), spec.boson_freq * b.number);
    for (int i = 1; i <= n; ++i)
        if (spec.tunneling[i - 1] != 0.0)
            h += kron(spin_chain(n, {{i, -spec.tunneling[i - 1] * pauli(PauliAxis::X)}}), boson_id);
    if (spec.coupling != 0.0)
        h += kron(spin_chain(n, {{1, spec.coupling * pauli(PauliAxis::Z)}}), quadrature);
    for (const auto& e : spec.ising_edges)
        if (e.strength != 0.0)
            h += kron(spin_chain(n, {{e.i, e.strength * axis_op}, {e.j, axis_op}}), boson_id);
    for (int i = 1; i <= n; ++i)
        if (spec.bias[i - 1] != 0.0)
            h += kron(spin_chain(n, {{i, spec.bias[i - 1] * pauli(PauliAxis::Z)}}), boson_id);

    return {std::move(h), composite_basis_tag(n, basis)};
}

SymmetricOperator build_parity(int n_spins, const BosonBasis& basis) {
    if (n_spins < 1) throw ValidationError("E_SPEC", "n_spins must be >= 1");
    basis.validate();
    std::map<int, SpMat> flips;
    for (int i = 1; i <= n_spins; ++i) flips[i] = pauli(PauliAxis::X);
    SpMat p = kron(spin_chain(n_spins, flips), boson_parity(basis));
    return {std::move(p), composite_basis_tag(n_spins, basis)};
}

double commutator_frobenius(const SymmetricOperator& a, const SymmetricOperator& b) {
    if (a.dim() != b.dim())
        throw ValidationError("E_DIM_MISMATCH", "commutator operands differ in dimension");
    SpMat c = a.mat * b.mat - b.mat * a.mat;
    return c.norm();
}

CommutatorNorms commutator_norm(const SymmetricOperator& a, const SymmetricOperator& b) {
    if (a.dim() != b.dim())
        throw ValidationError("E_DIM_MISMATCH", "commutator operands differ in dimension");
    SpMat c = a.mat * b.mat - b.mat * a.mat;
    CommutatorNorms norms;
    norms.frobenius = c.norm();
    // largest singular value through the symmetric Gram matrix
    Mat dense = Mat(c);
    Eigen::SelfAdjointEigenSolver<Mat> gram(dense.transpose() * dense,
                                            Eigen::EigenvaluesOnly);
    norms.spectral = std::sqrt(std::max(0.0, gram.eigenvalues().maxCoeff()));
    return norms;
}

SectorReport parity_sectors(const ModelSpec& spec, const BosonBasis& basis, const Spectrum& s,
                            double tol, double degeneracy_scale) {
    spec.validate();
    if (!spec.parity_symmetric())
        throw ValidationError("E_PARITY_BROKEN",
                              "parity sectors are defined only for all-zero bias");
    const SymmetricOperator p = build_parity(spec.n_spins, basis);
    if (s.eigenvectors.rows() != p.dim())
        throw ValidationError("E_DIM_MISMATCH", "spectrum does not match the spec dimension");

    const Eigen::Index n = s.eigenvalues.size();
    const double scale = std::max(std::abs(s.eigenvalues[0]), std::abs(s.eigenvalues[n - 1]));
    const double cluster_gap = degeneracy_scale * std::max(1.0, scale);

    SectorReport report;
    report.labels.resize(n);
    for (Eigen::Index lo = 0; lo < n;) {
        Eigen::Index hi = lo + 1;
        while (hi < n && s.eigenvalues[hi] - s.eigenvalues[hi - 1] < cluster_gap) ++hi;
        if (hi - lo == 1) {
            double exp_p = s.eigenvectors.col(lo).dot(p.mat * s.eigenvectors.col(lo));
            if (std::abs(exp_p) < 1.0 - tol)
                throw NumericError("E_SECTOR",
                                   "eigenvector " + std::to_string(lo) + " has |<P>| = " +
                                       fmt17(std::abs(exp_p)) +
                                       " outside a degenerate cluster (broken symmetry or "
                                       "solver failure)");
            report.labels[lo] = exp_p > 0 ? 1 : -1;
            report.min_abs_parity = std::min(report.min_abs_parity, std::abs(exp_p));
        } else {
            // degenerate cluster: diagonalize P restricted to its span
            ++report.cluster_count;
            Mat v = s.eigenvectors.middleCols(lo, hi - lo);
            Eigen::SelfAdjointEigenSolver<Mat> sub(v.transpose() * (p.mat * v));
            for (Eigen::Index i = 0; i < hi - lo; ++i) {
                double ev = sub.eigenvalues()[i];
                if (std::abs(std::abs(ev) - 1.0) > tol)
                    throw NumericError("E_SECTOR", "cluster parity eigenvalue " + fmt17(ev) +
                                                       " is not close to +-1");
                report.labels[lo + i] = ev > 0 ? 1 : -1;
                report.min_abs_parity = std::min(report.min_abs_parity, std::abs(ev));
            }
        }
        lo = hi;
    }
    for (int l : report.labels) (l > 0 ? report.plus_count : report.minus_count)++;
    return report;
}

void IonParams::validate() const {
    if (trap_freq <= 0.0) throw ValidationError("E_ION", "trap frequency must be > 0");
    if (lamb_dicke < 0.0) throw ValidationError("E_ION", "Lamb-Dicke parameter must be >= 0");
}

ModelSpec ion_param_map(const IonParams& p) {
    p.validate();
    ModelSpec spec;
    spec.n_spins = 2;
    spec.tunneling = {p.rabi / 2.0, -p.splitting};
    spec.boson_freq = p.trap_freq;
    spec.coupling = p.trap_freq * p.lamb_dicke / 2.0;
    spec.ising_edges = {{1, 2, p.ion_coupling}};
    spec.bias = {-p.detuning / 2.0, 0.0};
    spec.ising_axis = IsingAxis::ZZ;
    spec.validate();
    return spec;
}

} // namespace qrlab
