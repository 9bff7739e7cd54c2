#include <doctest.h>

#include "qrlab/hilbert.hpp"

using namespace qrlab;

TEST_SUITE("hilbert") {

TEST_CASE("ladder operators") {
    SUBCASE("empty ladder at cutoff 0") {
        BosonOps ops = boson_ops(BosonBasis{0});
        CHECK(ops.annihilate.rows() == 1);
        CHECK(Mat(ops.annihilate)(0, 0) == 0.0);
        CHECK(Mat(ops.number)(0, 0) == 0.0);
    }
    SUBCASE("matrix elements at cutoff 2") {
        BosonOps ops = boson_ops(BosonBasis{2});
        Mat a = Mat(ops.annihilate);
        CHECK(a(0, 1) == 1.0);
        CHECK(a(1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(a.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));
        CHECK(Mat(ops.create) == a.transpose());
    }
    SUBCASE("number operator identity") {
        BosonOps ops = boson_ops(BosonBasis{2});
        Mat n = Mat(SpMat(ops.create * ops.annihilate));
        Mat expect = Vec::LinSpaced(3, 0, 2).asDiagonal();
        // sqrt(2)^2 lands one ulp off 2
        CHECK((n - expect).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SUBCASE("negative cutoff rejected") {
        CHECK_THROWS_AS(boson_ops(BosonBasis{-1}), ValidationError);
    }
}

TEST_CASE("boson parity") {
    BosonBasis basis{3};
    Mat p = Mat(boson_parity(basis));
    Vec diag(4);
    diag << 1, -1, 1, -1;
    CHECK((p - Mat(diag.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

    SUBCASE("involution") {
        Mat sq = p * p;
        CHECK((sq - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("flips the quadrature exactly on the truncated space") {
        BosonOps ops = boson_ops(basis);
        Mat quad = Mat(SpMat(ops.annihilate + ops.create));
        CHECK((p * quad * p + quad).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("embed_spin placement") {
    SUBCASE("single spin z") {
        Mat z = embed_spin(1, 1, PauliAxis::Z, BosonBasis{0}).dense();
        CHECK(z(0, 0) == 1.0);  // index 0 = |up>
        CHECK(z(1, 1) == -1.0);
        CHECK(z.cwiseAbs().sum() == 2.0);
    }
    SUBCASE("x on spin 2 swaps within each spin-1 block") {
        Mat x2 = embed_spin(2, 2, PauliAxis::X, BosonBasis{0}).dense();
        Mat expect = Mat::Zero(4, 4);
        expect(0, 1) = expect(1, 0) = expect(2, 3) = expect(3, 2) = 1.0;
        CHECK((x2 - expect).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("site out of range") {
        CHECK_THROWS_AS(embed_spin(2, 3, PauliAxis::X, BosonBasis{0}), ValidationError);
        CHECK_THROWS_AS(embed_spin(2, 0, PauliAxis::Z, BosonBasis{0}), ValidationError);
    }
}

TEST_CASE("embedded operator algebra") {
    const BosonBasis basis{2};
    const int n = 3;
    const Eigen::Index dim = 8 * basis.dim();
    for (int site = 1; site <= n; ++site) {
        for (PauliAxis axis : {PauliAxis::X, PauliAxis::Z}) {
            SymmetricOperator op = embed_spin(n, site, axis, basis);
            CHECK(op.is_symmetric_exact());
            Mat sq = Mat(SpMat(op.mat * op.mat));
            CHECK((sq - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("different sites commute exactly") {
        Mat x1 = embed_spin(n, 1, PauliAxis::X, basis).dense();
        Mat z2 = embed_spin(n, 2, PauliAxis::Z, basis).dense();
        CHECK((x1 * z2 - z2 * x1).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("same site x,z anticommute exactly") {
        Mat x2 = embed_spin(n, 2, PauliAxis::X, basis).dense();
        Mat z2 = embed_spin(n, 2, PauliAxis::Z, basis).dense();
        CHECK((x2 * z2 + z2 * x2).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("single x factor is traceless against diagonal company") {
        Mat x1 = embed_spin(n, 1, PauliAxis::X, basis).dense();
        Mat z2 = embed_spin(n, 2, PauliAxis::Z, basis).dense();
        SpMat num = kron(spin_chain(n, {}), boson_ops(basis).number);
        CHECK(x1.trace() == 0.0);
        CHECK((x1 * z2).trace() == 0.0);
        CHECK((x1 * Mat(num)).trace() == 0.0);
    }
}

} // TEST_SUITE
