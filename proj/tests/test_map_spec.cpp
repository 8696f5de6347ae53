#include "doctest.h"

#include <random>

#include "entcert/map_spec.hpp"
#include "test_support.hpp"

using namespace entcert;
namespace ts = test_support;

TEST_CASE("superop matrix of the pure trace term") {
    const SystemShape shape = SystemShape::qubits(1);
    MapSpec m;
    m.add_trace_identity(1.0);
    const OperatorBasis basis(shape);
    const Eigen::MatrixXd rep = superop_matrix(m, shape, basis);

    std::mt19937_64 gen(3);
    const HermitianOperator rho{shape, ts::random_hermitian(2, gen)};
    const Eigen::VectorXd mapped = rep * basis.vec(rho);
    const HermitianOperator expected{
        shape, rho.mat.trace() * Eigen::MatrixXcd::Identity(2, 2)};
    CHECK((basis.unvec(mapped).mat - expected.mat).norm() < 1e-12);
}

TEST_CASE("superop matrix of a scaled identity term is alpha * I") {
    const SystemShape shape = SystemShape::qubits(2);
    MapSpec m;
    m.add_identity(0.75);
    const Eigen::MatrixXd rep = superop_matrix(m, shape);
    CHECK((rep - 0.75 * Eigen::MatrixXd::Identity(16, 16)).norm() < 1e-12);
}

TEST_CASE("superop matrix agrees with direct evaluation for the reduction map") {
    const SystemShape shape = SystemShape::qubits(2);
    const MapSpec m = MapSpec::reduction(1.3);
    const OperatorBasis basis(shape);
    const Eigen::MatrixXd rep = superop_matrix(m, shape, basis);

    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 5; ++trial) {
        const HermitianOperator rho{shape, ts::random_hermitian(4, gen)};
        const HermitianOperator direct = apply_map(m, rho);
        const HermitianOperator via_matrix = basis.unvec(rep * basis.vec(rho));
        CHECK((direct.mat - via_matrix.mat).norm() < 1e-12);
    }
}

TEST_CASE("superop matrix is linear in the map") {
    const SystemShape shape = SystemShape::qubits(2);
    MapSpec a = MapSpec::two_param(0.7, -0.2, 0);
    MapSpec b;
    b.add_tilde(1.1, PartySubset{1}).add_trace_identity(-0.4);

    MapSpec combined;
    for (const auto& t : a.terms) combined.terms.push_back({2.0 * t.coeff, t.kind, t.subset});
    for (const auto& t : b.terms) combined.terms.push_back({-0.5 * t.coeff, t.kind, t.subset});

    const Eigen::MatrixXd rep = 2.0 * superop_matrix(a, shape) - 0.5 * superop_matrix(b, shape);
    CHECK((superop_matrix(combined, shape) - rep).norm() < 1e-12);
}

TEST_CASE("superop invert round-trips random operators") {
    const SystemShape shape = SystemShape::qubits(2);
    const MapSpec m = MapSpec::two_param(2.0, 0.5, 0);
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 5; ++trial) {
        const HermitianOperator sigma{shape, ts::random_hermitian(4, gen)};
        const InversionResult inv = superop_invert(m, shape, sigma);
        CHECK(inv.residual < 1e-10);
        CHECK((apply_map(m, inv.rho).mat - sigma.mat).norm() < 1e-10);
    }
}

TEST_CASE("degenerate two-param map is reported as non-invertible") {
    const SystemShape shape = SystemShape::qubits(2);
    const MapSpec m = MapSpec::two_param(0.8, 0.8, 0);  // alpha == beta
    const HermitianOperator sigma = HermitianOperator::maximally_mixed(shape);
    CHECK_THROWS_AS(superop_invert(m, shape, sigma), NonInvertibleError);
    try {
        superop_invert(m, shape, sigma);
    } catch (const NonInvertibleError& e) {
        CHECK(e.condition_estimate > defaults::condition_max);
    }
}

TEST_CASE("operator basis is orthonormal") {
    const OperatorBasis basis(SystemShape{{2, 3}});
    REQUIRE(basis.size() == 36);
    for (long a = 0; a < basis.size(); ++a)
        for (long b = a; b < basis.size(); ++b) {
            const double inner = (basis.element(a) * basis.element(b)).trace().real();
            CHECK(inner == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
        }
}
