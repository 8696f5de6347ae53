#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "entcert/depth_maps.hpp"
#include "entcert/operator_core.hpp"
#include "entcert/optim.hpp"

namespace entcert {

// |D_k^N> for local dimension d: the unit-norm equal superposition of all
// computational strings whose digits sum to k, with k in 0..N(d-1).
struct DickeIndex {
    int n_parties = 0;
    int local_dim = 2;
    int excitation = 0;

    void validate() const {
        if (n_parties < 1) throw ArgumentError("DickeIndex: need at least one party");
        if (local_dim < 2) throw ArgumentError("DickeIndex: local dimension must be >= 2");
        if (excitation < 0 || excitation > n_parties * (local_dim - 1))
            throw ArgumentError("DickeIndex: excitation out of range 0..N(d-1)");
    }
};

// Number of strings in {0..d-1}^N with digit sum k, for every k at once.
inline std::vector<long> dicke_multiplicities(int n_parties, int local_dim) {
    const int kmax = n_parties * (local_dim - 1);
    std::vector<long> ways(kmax + 1, 0);
    ways[0] = 1;
    for (int site = 0; site < n_parties; ++site) {
        std::vector<long> next(kmax + 1, 0);
        for (int s = 0; s <= kmax; ++s) {
            if (ways[s] == 0) continue;
            for (int a = 0; a < local_dim && s + a <= kmax; ++a) next[s + a] += ways[s];
        }
        ways = std::move(next);
    }
    return ways;
}

inline long dicke_multiplicity(const DickeIndex& idx) {
    idx.validate();
    return dicke_multiplicities(idx.n_parties, idx.local_dim)[idx.excitation];
}

inline Eigen::VectorXcd dicke_vector(const DickeIndex& idx) {
    idx.validate();
    const SystemShape shape = SystemShape::qudits(idx.n_parties, idx.local_dim);
    const long dim = shape.dim();
    const auto& dims = shape.local_dims;
    const double amp = 1.0 / std::sqrt(static_cast<double>(dicke_multiplicity(idx)));

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    std::vector<int> digits(idx.n_parties);
    for (long i = 0; i < dim; ++i) {
        detail::decompose_index(i, dims, digits);
        int sum = 0;
        for (int a : digits) sum += a;
        if (sum == idx.excitation) v(i) = amp;
    }
    return v;
}

// Projector onto the symmetric (Dicke) span embedded in the full d^N space.
inline HermitianOperator dicke_span_identity(int n_parties, int local_dim) {
    const SystemShape shape = SystemShape::qudits(n_parties, local_dim);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(shape.dim(), shape.dim());
    const int kmax = n_parties * (local_dim - 1);
    for (int k = 0; k <= kmax; ++k) {
        const Eigen::VectorXcd v = dicke_vector({n_parties, local_dim, k});
        acc += v * v.adjoint();
    }
    return {shape, std::move(acc)};
}

inline HermitianOperator symmetric_identity(int n_parties) {
    return dicke_span_identity(n_parties, 2);
}

// Spectrum of the single-qubit partial transpose of the symmetric identity,
// restricted to its support C^2 (x) Sym(N-1); the complement block vanishes.
// Returns the 2N sector eigenvalues in ascending order.
inline Eigen::VectorXd sym_identity_pt_sector_spectrum(int n_parties) {
    if (n_parties < 2) throw ArgumentError("sym_identity_pt_sector_spectrum: need N >= 2");
    const HermitianOperator pt =
        partial_transpose(symmetric_identity(n_parties), PartySubset::single(0));

    // Sector basis |b> (x) |S_j^{N-1}>, b in {0,1}, j in 0..N-1.
    const long rest_dim = SystemShape::qubits(n_parties - 1).dim();
    Eigen::MatrixXcd sector(2 * rest_dim, 2 * n_parties);
    sector.setZero();
    for (int b = 0; b < 2; ++b)
        for (int j = 0; j < n_parties; ++j) {
            const Eigen::VectorXcd rest = dicke_vector({n_parties - 1, 2, j});
            sector.col(b * n_parties + j).segment(b * rest_dim, rest_dim) = rest;
        }
    const Eigen::MatrixXcd compressed = sector.adjoint() * pt.mat * sector;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(compressed, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline double sym_identity_pt_min_eig(int n_parties) {
    return sym_identity_pt_sector_spectrum(n_parties)(0);
}

struct AlphaRange {
    double lo = 0.0;
    double hi = 0.0;
    bool empty_range = false;

    // Ranges are closed; tol admits endpoints located by bisection.
    bool contains(double alpha, double tol = 0.0) const {
        return !empty_range && alpha >= lo - tol && alpha <= hi + tol;
    }

    static AlphaRange empty() { return {0.0, 0.0, true}; }
};

// Validated alpha interval of the sector reduction map for small N.
inline AlphaRange sym_alpha_range(int n_parties) {
    if (n_parties == 2) return {-0.75, 1.0, false};
    if (n_parties == 3) return {-1.0 / 3.0, 2.0 / 3.0, false};
    throw ArgumentError("sym_alpha_range: separability conclusion is available for N in {2,3}");
}

// Separability certificate for a state supported on the qubit symmetric
// sector, N in {2,3}. The sector map Tr(rho)*1_S + alpha*rho has the same
// endpoint structure as the full-space reduction map with D replaced by the
// sector dimension N+1, so the test is analytic in lambda_min / lambda_max.
inline DepthCertificate certify_symmetric_small(const HermitianOperator& sigma,
                                                double tol = defaults::psd_tol) {
    const int n = sigma.shape.num_parties();
    if (!sigma.shape.all_qubits())
        throw UnsupportedDimensionError("certify_symmetric_small: qubit systems only");
    if (n != 2 && n != 3)
        throw ArgumentError("certify_symmetric_small: N must be 2 or 3");

    // Support check: projecting onto the sector must not lose weight.
    Eigen::MatrixXcd basis(sigma.dim(), n + 1);
    for (int k = 0; k <= n; ++k) basis.col(k) = dicke_vector({n, 2, k});
    const Eigen::MatrixXcd compressed = basis.adjoint() * sigma.mat * basis;
    const Eigen::MatrixXcd embedded = basis * compressed * basis.adjoint();
    const double residual = (sigma.mat - embedded).norm();
    if (residual > 1e-9 * std::max(1.0, sigma.mat.norm()))
        throw ValidationError("certify_symmetric_small: state has support outside the symmetric sector");

    const double tr = compressed.trace().real();
    if (std::abs(tr - 1.0) > defaults::trace_tol)
        throw ValidationError("certify_symmetric_small: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(compressed, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -tol)
        throw ValidationError("certify_symmetric_small: state is not PSD");

    const AlphaRange range = sym_alpha_range(n);
    const double sector_dim = n + 1.0;
    const double lambda_min = solver.eigenvalues()(0);
    const double lambda_max = solver.eigenvalues()(n);

    DepthCertificate cert;
    cert.criterion = "symmetric-sector-inverse";
    const double witness_pos = (lambda_min - tr / (sector_dim + range.hi)) / range.hi;
    const double witness_neg = (tr / (sector_dim + range.lo) - lambda_max) / (-range.lo);
    if (witness_pos >= -tol) {
        cert.verdict = Verdict::CertifiedSeparable;
        cert.params = {{"alpha", range.hi}};
        cert.witness_min_eig = witness_pos;
    } else if (witness_neg >= -tol) {
        cert.verdict = Verdict::CertifiedSeparable;
        cert.params = {{"alpha", range.lo}};
        cert.witness_min_eig = witness_neg;
    } else {
        cert.witness_min_eig = std::max(witness_pos, witness_neg);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Diagonal symmetric (Dicke-diagonal) states and the Hankel criteria
// ---------------------------------------------------------------------------

// Mixture of Dicke projectors, described by the weight vector over excitation
// numbers. Map images are tracked unnormalized via `normalized`.
struct DiagonalSymmetricState {
    int n_parties = 0;
    int local_dim = 2;
    Eigen::VectorXd weights;  // length N(d-1)+1
    bool normalized = true;

    void validate(double tol = defaults::psd_tol) const {
        if (n_parties < 1) throw ValidationError("DiagonalSymmetricState: need at least one party");
        if (local_dim < 2) throw ValidationError("DiagonalSymmetricState: local dimension >= 2");
        if (weights.size() != n_parties * (local_dim - 1) + 1)
            throw ValidationError("DiagonalSymmetricState: weight vector must have length N(d-1)+1");
        for (long k = 0; k < weights.size(); ++k)
            if (weights(k) < -tol)
                throw ValidationError("DiagonalSymmetricState: negative weight at k=" +
                                      std::to_string(k));
        if (normalized && std::abs(weights.sum() - 1.0) > defaults::trace_tol)
            throw ValidationError("DiagonalSymmetricState: weights must sum to 1");
    }
};

struct HankelPair {
    Eigen::MatrixXd m0;
    Eigen::MatrixXd m1;
};

// The two Hankel matrices with entries p_{i+j+l} / multiplicity(i+j+l),
// l in {0,1}, of sizes floor(K/2)+1 and floor((K-1)/2)+1 where K = N(d-1).
// For qubits the multiplicities are the binomials C(N, k).
inline HankelPair hankel_matrices(const DiagonalSymmetricState& state) {
    const int kmax = state.n_parties * (state.local_dim - 1);
    if (state.weights.size() != kmax + 1)
        throw ValidationError("hankel_matrices: weight vector has wrong length");
    const std::vector<long> mult = dicke_multiplicities(state.n_parties, state.local_dim);

    HankelPair pair;
    for (int l = 0; l <= 1; ++l) {
        const int n_l = (kmax - l) / 2;
        Eigen::MatrixXd mat(n_l + 1, n_l + 1);
        for (int i = 0; i <= n_l; ++i)
            for (int j = 0; j <= n_l; ++j) {
                const int k = i + j + l;
                mat(i, j) = state.weights(k) / static_cast<double>(mult[k]);
            }
        (l == 0 ? pair.m0 : pair.m1) = std::move(mat);
    }
    return pair;
}

// Half-chain PPT of a diagonal symmetric state, decided through the Hankel
// pair. For qubits this is also equivalent to separability.
inline bool ds_ppt_check(const DiagonalSymmetricState& state, double tol = defaults::psd_tol) {
    const HankelPair pair = hankel_matrices(state);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s0(pair.m0, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s1(pair.m1, Eigen::EigenvaluesOnly);
    return s0.eigenvalues()(0) >= -tol && s1.eigenvalues()(0) >= -tol;
}

// Embed the state as sum_k p_k |D_k><D_k| in the full d^N space.
inline HermitianOperator ds_embed(const DiagonalSymmetricState& state) {
    const SystemShape shape = SystemShape::qudits(state.n_parties, state.local_dim);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(shape.dim(), shape.dim());
    for (long k = 0; k < state.weights.size(); ++k) {
        const Eigen::VectorXcd v =
            dicke_vector({state.n_parties, state.local_dim, static_cast<int>(k)});
        acc += state.weights(k) * (v * v.adjoint());
    }
    return {shape, std::move(acc)};
}

// ---------------------------------------------------------------------------
// Validated alpha ranges for the diagonal-state reduction map
// ---------------------------------------------------------------------------

namespace detail {

// Qubit route: on the diagonal family the map sends the weights of each basis
// element k to 1 + alpha * delta_{mk}; the range is the intersection over k of
// the alpha intervals around 0 keeping both Hankel matrices PSD. Interval ends
// coincide with roots of the Hankel determinants.
inline AlphaRange ds_alpha_range_hankel(int n_parties, int local_dim, double tol) {
    const int kmax = n_parties * (local_dim - 1);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kmax; ++k) {
        BisectionSpec spec;
        spec.tolerance = tol;
        spec.predicate = [&](double alpha) {
            DiagonalSymmetricState mapped;
            mapped.n_parties = n_parties;
            mapped.local_dim = local_dim;
            mapped.weights = Eigen::VectorXd::Ones(kmax + 1);
            mapped.weights(k) += alpha;
            mapped.normalized = false;
            // threshold scales with the matrix norm so eigensolver noise in the
            // unbounded directions cannot fake a boundary
            return ds_ppt_check(mapped, 1e-12 * (1.0 + std::abs(alpha)));
        };
        hi = std::min(hi, bisect_boundary(spec, 0.0, +1));
        lo = std::max(lo, bisect_boundary(spec, 0.0, -1));
    }
    return {lo, hi, false};
}

// Qudit route: PSD bisection on the half-chain partial transpose of
// Pi_DD + alpha |D_k><D_k| in the full space. Empty when the Dicke-span
// projector itself fails PPT.
inline AlphaRange ds_alpha_range_bisect(int n_parties, int local_dim, double tol) {
    const PartySubset half = PartySubset::half_chain(n_parties);
    const HermitianOperator projector = dicke_span_identity(n_parties, local_dim);
    const HermitianOperator projector_pt = partial_transpose(projector, half);
    if (min_eigenvalue(projector_pt) < -defaults::psd_tol) return AlphaRange::empty();

    const int kmax = n_parties * (local_dim - 1);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kmax; ++k) {
        const Eigen::VectorXcd v = dicke_vector({n_parties, local_dim, k});
        const HermitianOperator basis_pt =
            partial_transpose({projector.shape, v * v.adjoint()}, half);
        BisectionSpec spec;
        spec.tolerance = tol;
        spec.predicate = [&](double alpha) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
                projector_pt.mat + alpha * basis_pt.mat, Eigen::EigenvaluesOnly);
            return solver.eigenvalues()(0) >= -1e-12 * (1.0 + std::abs(alpha));
        };
        hi = std::min(hi, bisect_boundary(spec, 0.0, +1));
        lo = std::max(lo, bisect_boundary(spec, 0.0, -1));
        if (std::abs(lo) < tol && std::abs(hi) < tol) break;  // already pinched at 0
    }
    return {lo, hi, false};
}

}  // namespace detail

// Maximal alpha interval around 0 for which the diagonal-family reduction map
// provably keeps every basis image half-chain PPT. Qubits go through the
// Hankel determinants; higher local dimensions through full-space bisection.
inline AlphaRange ds_alpha_range(int n_parties, int local_dim = 2, double tol = 1e-10) {
    if (n_parties < 2) throw ArgumentError("ds_alpha_range: need N >= 2");
    if (local_dim < 2) throw ArgumentError("ds_alpha_range: local dimension must be >= 2");
    if (local_dim == 2) return detail::ds_alpha_range_hankel(n_parties, local_dim, tol);
    return detail::ds_alpha_range_bisect(n_parties, local_dim, tol);
}

// Qudit bisection route regardless of d (cross-checkable against the Hankel
// route for d = 2).
inline AlphaRange dd_alpha_range(int n_parties, int local_dim, double tol = 1e-10) {
    if (n_parties < 2) throw ArgumentError("dd_alpha_range: need N >= 2");
    return detail::ds_alpha_range_bisect(n_parties, local_dim, tol);
}

// Separability certificate for a diagonal symmetric state: the pre-image of
// the diagonal map has weights q_k = ((K+1+alpha) s_k - 1)/alpha on normalized
// input s (K+1 weights); all q_k >= -tol certifies. alpha must lie in the
// validated range and be nonzero. The test is scale covariant, so unnormalized
// input is normalized first.
inline DepthCertificate ds_certify(const DiagonalSymmetricState& sigma, double alpha,
                                   double tol = defaults::psd_tol) {
    sigma.validate(tol);
    const AlphaRange range = ds_alpha_range(sigma.n_parties, sigma.local_dim);
    if (alpha == 0.0 || !range.contains(alpha, 1e-8))
        throw RegionError("ds_certify: alpha outside the validated range",
                          {"alpha in [" + std::to_string(range.lo) + ", " +
                           std::to_string(range.hi) + "], alpha != 0"});

    const double sum = sigma.weights.sum();
    if (sum <= 0.0) throw ValidationError("ds_certify: weights sum to zero");
    const Eigen::VectorXd s = sigma.weights / sum;
    const double sector = static_cast<double>(s.size());  // K + 1
    const Eigen::VectorXd q = (((sector + alpha) * s).array() - 1.0) / alpha;

    DepthCertificate cert;
    cert.criterion = "ds-inverse";
    cert.params = {{"alpha", alpha}};
    cert.witness_min_eig = q.minCoeff();
    if (cert.witness_min_eig >= -tol) cert.verdict = Verdict::CertifiedSeparable;
    return cert;
}

}  // namespace entcert
