#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>

#include "entcert/errors.hpp"
#include "entcert/shape.hpp"

namespace entcert {

namespace defaults {
// Relative Hermiticity tolerance: an operator A passes iff ||A - A^dag||_F <= herm_rel * ||A||_F.
inline constexpr double herm_rel = 1e-10;
// Default decision tolerance for positive-semidefiniteness (CLI-overridable).
inline constexpr double psd_tol = 1e-9;
// Residual bound for linear-map inversions.
inline constexpr double solve_tol = 1e-10;
// Condition-number guard before a superoperator counts as invertible.
inline constexpr double condition_max = 1e12;
// Margin for criteria that require strict positive definiteness.
inline constexpr double strict_tol = 1e-9;
// |trace - 1| bound when validating a state.
inline constexpr double trace_tol = 1e-9;
}  // namespace defaults

// Dense complex Hermitian matrix tagged with its tensor-factor shape.
struct HermitianOperator {
    SystemShape shape;
    Eigen::MatrixXcd mat;

    long dim() const { return mat.rows(); }

    double trace() const { return mat.trace().real(); }

    double hermiticity_residual() const { return (mat - mat.adjoint()).norm(); }

    bool is_hermitian(double rel_tol = defaults::herm_rel) const {
        return hermiticity_residual() <= rel_tol * mat.norm();
    }

    // Checked constructor for matrices from outside the library (files, callers).
    static HermitianOperator checked(SystemShape shape, Eigen::MatrixXcd mat,
                                     double rel_tol = defaults::herm_rel) {
        shape.validate();
        if (mat.rows() != mat.cols() || mat.rows() != shape.dim())
            throw ValidationError("HermitianOperator: matrix is " + std::to_string(mat.rows()) +
                                  "x" + std::to_string(mat.cols()) + " but shape dimension is " +
                                  std::to_string(shape.dim()));
        HermitianOperator op{std::move(shape), std::move(mat)};
        if (!op.is_hermitian(rel_tol))
            throw ValidationError("HermitianOperator: matrix is not Hermitian within tolerance");
        return op;
    }

    static HermitianOperator identity(const SystemShape& shape) {
        return {shape, Eigen::MatrixXcd::Identity(shape.dim(), shape.dim())};
    }

    static HermitianOperator zero(const SystemShape& shape) {
        return {shape, Eigen::MatrixXcd::Zero(shape.dim(), shape.dim())};
    }

    static HermitianOperator maximally_mixed(const SystemShape& shape) {
        const long d = shape.dim();
        return {shape, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d)};
    }

    static HermitianOperator projector(const SystemShape& shape, const Eigen::VectorXcd& psi) {
        if (psi.size() != shape.dim())
            throw ValidationError("projector: vector length does not match shape dimension");
        return {shape, psi * psi.adjoint()};
    }
};

// Ascending real eigenvalues of a Hermitian operator.
struct Spectrum {
    Eigen::VectorXd eigenvalues;

    double min() const { return eigenvalues(0); }
    double max() const { return eigenvalues(eigenvalues.size() - 1); }
};

namespace detail {

inline void decompose_index(long index, const std::vector<int>& dims, std::vector<int>& out) {
    for (int p = static_cast<int>(dims.size()) - 1; p >= 0; --p) {
        out[p] = static_cast<int>(index % dims[p]);
        index /= dims[p];
    }
}

}  // namespace detail

// Transpose the tensor indices of the parties in `subset`. Linear involution;
// preserves trace and Hermiticity.
inline HermitianOperator partial_transpose(const HermitianOperator& op, const PartySubset& subset) {
    subset.validate_for(op.shape);
    const long dim = op.dim();
    const auto& dims = op.shape.local_dims;
    const int n = op.shape.num_parties();
    const std::vector<long> stride = op.shape.strides();

    Eigen::MatrixXcd out(dim, dim);
    std::vector<int> rd(n), cd(n);
    for (long r = 0; r < dim; ++r) {
        detail::decompose_index(r, dims, rd);
        for (long c = 0; c < dim; ++c) {
            detail::decompose_index(c, dims, cd);
            long rr = r, cc = c;
            for (int p : subset.indices) {
                rr += (cd[p] - rd[p]) * stride[p];
                cc += (rd[p] - cd[p]) * stride[p];
            }
            out(rr, cc) = op.mat(r, c);
        }
    }
    return {op.shape, std::move(out)};
}

// Conjugate by sigma_2 on every qubit in `subset`. Since sigma_2 |a> = i(-1)^a |1-a>,
// the phases cancel pairwise and the result is
//   out(r, c) = (-1)^{s(r)+s(c)} in(f(r), f(c))
// with f flipping the subset bits and s counting set bits over the subset.
inline HermitianOperator sigma2_conjugate(const HermitianOperator& op, const PartySubset& subset) {
    subset.validate_for(op.shape);
    for (int p : subset.indices)
        if (op.shape.local_dims[p] != 2)
            throw UnsupportedDimensionError("sigma2_conjugate: party " + std::to_string(p) +
                                            " has local dimension " +
                                            std::to_string(op.shape.local_dims[p]) +
                                            ", only qubits are supported");

    const long dim = op.dim();
    const std::vector<long> stride = op.shape.strides();
    const auto& dims = op.shape.local_dims;
    const int n = op.shape.num_parties();

    std::vector<int> digits(n);
    std::vector<long> flip(dim);
    std::vector<int> weight(dim);
    for (long i = 0; i < dim; ++i) {
        detail::decompose_index(i, dims, digits);
        long f = i;
        int w = 0;
        for (int p : subset.indices) {
            f += (1 - 2 * digits[p]) * stride[p];
            w += digits[p];
        }
        flip[i] = f;
        weight[i] = w;
    }

    Eigen::MatrixXcd out(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) {
            const double sign = ((weight[r] + weight[c]) & 1) ? -1.0 : 1.0;
            out(r, c) = sign * op.mat(flip[r], flip[c]);
        }
    return {op.shape, std::move(out)};
}

// sigma_2-conjugated partial transpose on `subset`. Involution; preserves trace,
// Hermiticity, and the spectrum of the plain partial transpose.
inline HermitianOperator tilde(const HermitianOperator& op, const PartySubset& subset) {
    return sigma2_conjugate(partial_transpose(op, subset), subset);
}

inline Spectrum spectrum(const HermitianOperator& op) {
    if (!op.is_hermitian())
        throw ValidationError("spectrum: operator is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.mat, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ValidationError("spectrum: eigensolver did not converge");
    return {solver.eigenvalues()};
}

inline double min_eigenvalue(const HermitianOperator& op) { return spectrum(op).min(); }

inline bool is_psd(const HermitianOperator& op, double tol = defaults::psd_tol) {
    return min_eigenvalue(op) >= -tol;
}

// Operator norm of a Hermitian matrix: max |eigenvalue|.
inline double operator_norm(const HermitianOperator& op) {
    const Spectrum s = spectrum(op);
    return std::max(std::abs(s.min()), std::abs(s.max()));
}

// States are validated explicitly, never implicitly: trace 1 and PSD.
inline void validate_state(const HermitianOperator& op, double psd_tol = defaults::psd_tol,
                           double trace_tol = defaults::trace_tol) {
    if (std::abs(op.trace() - 1.0) > trace_tol)
        throw ValidationError("state validation: trace is " + std::to_string(op.trace()) +
                              ", expected 1");
    if (!is_psd(op, psd_tol))
        throw ValidationError("state validation: operator has an eigenvalue below -tolerance");
}

}  // namespace entcert
