#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "entcert/operator_core.hpp"

// Shared generators and independent oracles for the test suites. Oracle code
// here must not call the library paths it is used to check.
namespace test_support {

using Cx = std::complex<double>;

inline Eigen::MatrixXcd random_hermitian(long dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd a(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) a(r, c) = Cx(normal(gen), normal(gen));
    return 0.5 * (a + Eigen::MatrixXcd(a.adjoint()));
}

inline Eigen::VectorXcd haar_vector(long dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (long i = 0; i < dim; ++i) v(i) = Cx(normal(gen), normal(gen));
    return v / v.norm();
}

// Full-rank random density matrix: Gaussian G, then GG^dag normalized.
inline Eigen::MatrixXcd random_density(long dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) g(r, c) = Cx(normal(gen), normal(gen));
    Eigen::MatrixXcd rho = g * g.adjoint();
    return rho / rho.trace();
}

inline Eigen::VectorXcd basis_vector(long dim, long index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(index) = 1.0;
    return v;
}

inline Eigen::VectorXcd bell_phi_plus() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v;
}

inline Eigen::VectorXcd ghz_vector(int n) {
    const long dim = 1L << n;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
    return v;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long r = 0; r < a.rows(); ++r)
        for (long c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

// Independent partial-transpose oracle: brute-force element permutation
// through explicitly materialized digit tuples.
inline Eigen::MatrixXcd pt_oracle(const Eigen::MatrixXcd& m, const std::vector<int>& dims,
                                  const std::vector<int>& parties) {
    const int n = static_cast<int>(dims.size());
    const long dim = m.rows();
    auto digits_of = [&](long x) {
        std::vector<int> d(n);
        for (int p = n - 1; p >= 0; --p) {
            d[p] = static_cast<int>(x % dims[p]);
            x /= dims[p];
        }
        return d;
    };
    auto index_of = [&](const std::vector<int>& d) {
        long x = 0;
        for (int p = 0; p < n; ++p) x = x * dims[p] + d[p];
        return x;
    };
    Eigen::MatrixXcd out(dim, dim);
    for (long r = 0; r < dim; ++r) {
        for (long c = 0; c < dim; ++c) {
            std::vector<int> rd = digits_of(r), cd = digits_of(c);
            for (int p : parties) std::swap(rd[p], cd[p]);
            out(index_of(rd), index_of(cd)) = m(r, c);
        }
    }
    return out;
}

// Explicit tensor product of sigma_2 on the listed qubits and identity elsewhere.
inline Eigen::MatrixXcd sigma2_kron(int n_qubits, const std::vector<int>& parties) {
    const Cx i(0.0, 1.0);
    Eigen::MatrixXcd sigma2(2, 2), eye = Eigen::MatrixXcd::Identity(2, 2);
    sigma2 << 0.0, -i, i, 0.0;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int p = 0; p < n_qubits; ++p) {
        const bool in = std::find(parties.begin(), parties.end(), p) != parties.end();
        out = kron(out, in ? sigma2 : eye);
    }
    return out;
}

inline Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace test_support
