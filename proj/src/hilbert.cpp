#include "qrlab/hilbert.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qrlab {

BosonOps boson_ops(const BosonBasis& basis) {
    basis.validate();
    const int d = basis.dim();
    std::vector<Triplet> ann, num;
    for (int n = 1; n < d; ++n) ann.emplace_back(n - 1, n, std::sqrt(double(n)));
    for (int n = 1; n < d; ++n) num.emplace_back(n, n, double(n));
    BosonOps ops;
    ops.annihilate.resize(d, d);
    ops.annihilate.setFromTriplets(ann.begin(), ann.end());
    ops.create = SpMat(ops.annihilate.transpose());
    ops.number.resize(d, d);
    ops.number.setFromTriplets(num.begin(), num.end());
    return ops;
}

SpMat boson_parity(const BosonBasis& basis) {
    basis.validate();
    const int d = basis.dim();
    std::vector<Triplet> t;
    for (int n = 0; n < d; ++n) t.emplace_back(n, n, (n % 2 == 0) ? 1.0 : -1.0);
    SpMat p(d, d);
    p.setFromTriplets(t.begin(), t.end());
    return p;
}

SpMat pauli(PauliAxis axis) {
    SpMat m(2, 2);
    if (axis == PauliAxis::X) {
        m.insert(0, 1) = 1.0;
        m.insert(1, 0) = 1.0;
    } else {
        m.insert(0, 0) = 1.0;  // index 0 = |up>
        m.insert(1, 1) = -1.0;
    }
    m.makeCompressed();
    return m;
}

SpMat kron(const SpMat& a, const SpMat& b) {
    SpMat out = Eigen::kroneckerProduct(a, b);
    return out;
}

static SpMat sparse_identity(Eigen::Index n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

SpMat spin_chain(int n_spins, const std::map<int, SpMat>& site_ops) {
    if (n_spins < 1) throw ValidationError("E_SPINS", "n_spins must be >= 1");
    for (const auto& [site, op] : site_ops) {
        if (site < 1 || site > n_spins)
            throw ValidationError("E_SITE", "spin site " + std::to_string(site) + " out of range");
        if (op.rows() != 2 || op.cols() != 2)
            throw ValidationError("E_SITE", "site operator must be 2x2");
    }
    SpMat acc = sparse_identity(1);
    for (int site = 1; site <= n_spins; ++site) {
        auto it = site_ops.find(site);
        acc = kron(acc, it == site_ops.end() ? sparse_identity(2) : it->second);
    }
    return acc;
}

std::string composite_basis_tag(int n_spins, const BosonBasis& basis) {
    return "spins 1.." + std::to_string(n_spins) +
           " msb-first (0=up), boson fock 0.." + std::to_string(basis.cutoff) + " lsb";
}

SymmetricOperator embed_spin(int n_spins, int site, PauliAxis axis, const BosonBasis& basis) {
    basis.validate();
    SpMat op = kron(spin_chain(n_spins, {{site, pauli(axis)}}), sparse_identity(basis.dim()));
    return {std::move(op), composite_basis_tag(n_spins, basis)};
}

} // namespace qrlab
