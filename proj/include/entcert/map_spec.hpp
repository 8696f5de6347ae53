#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <vector>

#include "entcert/operator_core.hpp"

namespace entcert {

// A Hermiticity-preserving linear map declared as a weighted sum of terms:
//   TraceIdentity : rho -> Tr(rho) * 1
//   Identity      : rho -> rho
//   Tilde(S)      : rho -> sigma2-conjugated partial transpose over subset S
enum class TermKind { TraceIdentity, Identity, Tilde };

struct MapTerm {
    double coeff = 0.0;
    TermKind kind = TermKind::Identity;
    PartySubset subset;  // used by Tilde terms only
};

struct MapSpec {
    std::vector<MapTerm> terms;

    MapSpec& add_trace_identity(double coeff) {
        terms.push_back({coeff, TermKind::TraceIdentity, {}});
        return *this;
    }
    MapSpec& add_identity(double coeff) {
        terms.push_back({coeff, TermKind::Identity, {}});
        return *this;
    }
    MapSpec& add_tilde(double coeff, PartySubset subset) {
        terms.push_back({coeff, TermKind::Tilde, std::move(subset)});
        return *this;
    }

    void validate_for(const SystemShape& shape) const {
        for (const MapTerm& t : terms) {
            if (!std::isfinite(t.coeff)) throw ValidationError("MapSpec: non-finite coefficient");
            if (t.kind == TermKind::Tilde) t.subset.validate_for(shape);
        }
    }

    // Tr(rho)*1 + alpha*rho
    static MapSpec reduction(double alpha) {
        MapSpec m;
        m.add_trace_identity(1.0).add_identity(alpha);
        return m;
    }

    // Tr(rho)*1 + alpha*rho + beta*tilde_A(rho)
    static MapSpec two_param(double alpha, double beta, int party) {
        MapSpec m = reduction(alpha);
        m.add_tilde(beta, PartySubset::single(party));
        return m;
    }

    // Tr(rho)*1 + alpha*rho + beta*tilde_A + gamma*tilde_{complement A} + delta*tilde_{all}
    static MapSpec four_param(double alpha, double beta, double gamma, double delta, int party,
                              int n_parties) {
        MapSpec m = two_param(alpha, beta, party);
        m.add_tilde(gamma, PartySubset::single(party).complement(n_parties));
        m.add_tilde(delta, PartySubset::all(n_parties));
        return m;
    }
};

inline HermitianOperator apply_map(const MapSpec& map, const HermitianOperator& rho) {
    map.validate_for(rho.shape);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (const MapTerm& t : map.terms) {
        switch (t.kind) {
            case TermKind::TraceIdentity:
                acc += (t.coeff * rho.mat.trace()) *
                       Eigen::MatrixXcd::Identity(rho.dim(), rho.dim());
                break;
            case TermKind::Identity:
                acc += t.coeff * rho.mat;
                break;
            case TermKind::Tilde:
                acc += t.coeff * tilde(rho, t.subset).mat;
                break;
        }
    }
    return {rho.shape, std::move(acc)};
}

// Orthonormal Hermitian operator basis (generalized Pauli / Gell-Mann type).
// All coefficients of a Hermitian operator in this basis are real, so matrix
// representations of Hermiticity-preserving maps stay in real arithmetic.
namespace detail {

inline std::vector<Eigen::MatrixXcd> site_hermitian_basis(int d) {
    using Eigen::MatrixXcd;
    const std::complex<double> im(0.0, 1.0);
    std::vector<MatrixXcd> basis;
    basis.reserve(static_cast<size_t>(d) * d);
    basis.push_back(MatrixXcd::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            MatrixXcd sym = MatrixXcd::Zero(d, d);
            sym(j, k) = sym(k, j) = 1.0 / std::sqrt(2.0);
            basis.push_back(sym);
            MatrixXcd asym = MatrixXcd::Zero(d, d);
            asym(j, k) = im / std::sqrt(2.0);
            asym(k, j) = -im / std::sqrt(2.0);
            basis.push_back(asym);
        }
    for (int l = 1; l < d; ++l) {
        MatrixXcd diag = MatrixXcd::Zero(d, d);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int m = 0; m < l; ++m) diag(m, m) = norm;
        diag(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(diag);
    }
    return basis;
}

}  // namespace detail

// Tensor-product Hermitian basis over a full shape, with vec/unvec in real
// coefficients. Element count is dim^2.
class OperatorBasis {
public:
    explicit OperatorBasis(SystemShape shape) : shape_(std::move(shape)) {
        shape_.validate();
        std::vector<std::vector<Eigen::MatrixXcd>> site;
        site.reserve(shape_.local_dims.size());
        for (int d : shape_.local_dims) site.push_back(detail::site_hermitian_basis(d));

        elements_.push_back(Eigen::MatrixXcd::Identity(1, 1));
        for (const auto& factors : site) {
            std::vector<Eigen::MatrixXcd> next;
            next.reserve(elements_.size() * factors.size());
            for (const auto& left : elements_)
                for (const auto& f : factors) {
                    Eigen::MatrixXcd prod(left.rows() * f.rows(), left.cols() * f.cols());
                    for (long r = 0; r < left.rows(); ++r)
                        for (long c = 0; c < left.cols(); ++c)
                            prod.block(r * f.rows(), c * f.cols(), f.rows(), f.cols()) =
                                left(r, c) * f;
                    next.push_back(std::move(prod));
                }
            elements_ = std::move(next);
        }
    }

    const SystemShape& shape() const { return shape_; }
    long size() const { return static_cast<long>(elements_.size()); }
    const Eigen::MatrixXcd& element(long a) const { return elements_[a]; }

    Eigen::VectorXd vec(const HermitianOperator& op) const {
        Eigen::VectorXd coeffs(size());
        for (long a = 0; a < size(); ++a)
            coeffs(a) = (elements_[a] * op.mat).trace().real();
        return coeffs;
    }

    HermitianOperator unvec(const Eigen::VectorXd& coeffs) const {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(shape_.dim(), shape_.dim());
        for (long a = 0; a < size(); ++a) acc += coeffs(a) * elements_[a];
        return {shape_, std::move(acc)};
    }

private:
    SystemShape shape_;
    std::vector<Eigen::MatrixXcd> elements_;
};

// Real dim^2 x dim^2 matrix representation of a map in the Hermitian basis:
// superop_matrix(map) * vec(rho) = vec(apply_map(map, rho)).
inline Eigen::MatrixXd superop_matrix(const MapSpec& map, const SystemShape& shape,
                                      const OperatorBasis& basis) {
    map.validate_for(shape);
    const long n = basis.size();
    Eigen::MatrixXd rep(n, n);
    for (long b = 0; b < n; ++b) {
        const HermitianOperator image = apply_map(map, {shape, basis.element(b)});
        rep.col(b) = basis.vec(image);
    }
    return rep;
}

inline Eigen::MatrixXd superop_matrix(const MapSpec& map, const SystemShape& shape) {
    return superop_matrix(map, shape, OperatorBasis(shape));
}

struct InversionResult {
    HermitianOperator rho;
    double residual;   // ||apply_map(rho) - sigma||_F
    double condition;  // 2-norm condition estimate of the superoperator
};

// Solve apply_map(map, rho) = sigma for rho through the matrix representation.
// Refuses superoperators with condition number above defaults::condition_max.
inline InversionResult superop_invert(const MapSpec& map, const SystemShape& shape,
                                      const HermitianOperator& sigma) {
    if (sigma.shape != shape)
        throw ValidationError("superop_invert: operator shape does not match map shape");
    const OperatorBasis basis(shape);
    const Eigen::MatrixXd rep = superop_matrix(map, shape, basis);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double condition = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(condition < defaults::condition_max))
        throw NonInvertibleError("superop_invert: superoperator is singular or ill-conditioned",
                                 condition);

    const Eigen::VectorXd solution = svd.solve(basis.vec(sigma));
    HermitianOperator rho = basis.unvec(solution);
    const double residual = (apply_map(map, rho).mat - sigma.mat).norm();
    return {std::move(rho), residual, condition};
}

}  // namespace entcert
